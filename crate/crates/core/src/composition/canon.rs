use std::collections::{BTreeMap, BTreeSet};

use super::{ElementKind, InterfaceElement};

/// Name-free view of a net: node labels and labeled arcs, indexed by
/// position. `names[i]` is only used to translate interfaces.
#[derive(Debug, Clone, Default)]
pub struct LabeledGraph {
    pub nodes: Vec<(ElementKind, String)>,
    pub names: Vec<String>,
    pub arcs: Vec<(usize, usize, String)>,
}

impl LabeledGraph {
    pub fn add_node(&mut self, kind: ElementKind, name: &str, label: String) -> usize {
        self.nodes.push((kind, label));
        self.names.push(name.to_string());
        self.nodes.len() - 1
    }

    pub fn index_of(&self) -> BTreeMap<&str, usize> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect()
    }
}

/// Colour, outgoing and incoming neighbourhood of a node.
type TwinKey = (usize, Vec<(usize, usize)>, Vec<(usize, usize)>);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub nodes: Vec<(ElementKind, String)>,
    pub arcs: Vec<(usize, usize, String)>,
    pub left: Vec<(ElementKind, String, usize)>,
    pub right: Vec<(ElementKind, String, usize)>,
}

struct Ctx<'a> {
    g: &'a LabeledGraph,
    out: Vec<Vec<(usize, usize)>>,
    inc: Vec<Vec<(usize, usize)>>,
    left: Vec<(ElementKind, String, usize)>,
    right: Vec<(ElementKind, String, usize)>,
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let distinct: BTreeSet<T> = keys.iter().cloned().collect();
    let index: BTreeMap<T, usize> = distinct.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    keys.iter().map(|k| index[k]).collect()
}

impl Ctx<'_> {
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let mut classes = colors.iter().collect::<BTreeSet<_>>().len();
        loop {
            let keys: Vec<_> = (0..colors.len())
                .map(|i| {
                    let mut o: Vec<(usize, usize)> =
                        self.out[i].iter().map(|&(l, j)| (l, colors[j])).collect();
                    let mut n: Vec<(usize, usize)> =
                        self.inc[i].iter().map(|&(l, j)| (l, colors[j])).collect();
                    o.sort_unstable();
                    n.sort_unstable();
                    (colors[i], o, n)
                })
                .collect();
            colors = rank(&keys);
            let now = colors.iter().collect::<BTreeSet<_>>().len();
            if now == classes {
                return colors;
            }
            classes = now;
        }
    }

    fn encode(&self, colors: &[usize]) -> (CanonicalForm, Vec<usize>) {
        let mut order: Vec<usize> = (0..colors.len()).collect();
        order.sort_by_key(|&i| colors[i]);
        let mut pos = vec![0; colors.len()];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        let mut arcs: Vec<_> = self
            .g
            .arcs
            .iter()
            .map(|(s, t, l)| (pos[*s], pos[*t], l.clone()))
            .collect();
        arcs.sort();
        let iface = |items: &[(ElementKind, String, usize)]| {
            let mut v: Vec<_> = items.iter().map(|(k, l, i)| (*k, l.clone(), pos[*i])).collect();
            v.sort();
            v
        };
        let form = CanonicalForm {
            nodes: order.iter().map(|&i| self.g.nodes[i].clone()).collect(),
            arcs,
            left: iface(&self.left),
            right: iface(&self.right),
        };
        (form, order)
    }

    /// Nodes whose exchange is an automorphism: identical colour and the same
    /// neighbourhood by node identity.
    fn twin_key(&self, i: usize, colors: &[usize]) -> TwinKey {
        let mut o = self.out[i].clone();
        let mut n = self.inc[i].clone();
        o.sort_unstable();
        n.sort_unstable();
        (colors[i], o, n)
    }

    fn search(&self, colors: Vec<usize>, best: &mut Option<(CanonicalForm, Vec<usize>)>) {
        let colors = self.refine(colors);
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &c) in colors.iter().enumerate() {
            cells.entry(c).or_default().push(i);
        }
        let Some((&target, members)) = cells.iter().find(|(_, m)| m.len() > 1) else {
            let leaf = self.encode(&colors);
            if best.as_ref().is_none_or(|b| leaf.0 < b.0) {
                *best = Some(leaf);
            }
            return;
        };
        let mut seen = BTreeSet::new();
        for &m in members {
            // self-loops and arcs between the pair defeat the twin test, which
            // then only errs on the side of exploring more branches
            if !seen.insert(self.twin_key(m, &colors)) {
                continue;
            }
            let keys: Vec<(usize, bool)> = colors
                .iter()
                .enumerate()
                .map(|(i, &c)| (c, !(c == target && i == m)))
                .collect();
            self.search(rank(&keys), best);
        }
    }
}

/// Canonical form of a labeled graph with interfaces, plus the canonical
/// node order (positions in `g`).
pub fn canonicalize_graph(
    g: &LabeledGraph,
    left: &[InterfaceElement],
    right: &[InterfaceElement],
) -> (CanonicalForm, Vec<usize>) {
    let index = g.index_of();
    let arc_labels = rank(&g.arcs.iter().map(|(_, _, l)| l.clone()).collect::<Vec<_>>());
    let mut out = vec![Vec::new(); g.nodes.len()];
    let mut inc = vec![Vec::new(); g.nodes.len()];
    for ((s, t, _), &l) in g.arcs.iter().zip(&arc_labels) {
        out[*s].push((l, *t));
        inc[*t].push((l, *s));
    }
    let mut marks: Vec<Vec<(u8, ElementKind, String)>> = vec![Vec::new(); g.nodes.len()];
    let translate = |items: &[InterfaceElement], tag: u8, marks: &mut Vec<Vec<_>>| {
        items
            .iter()
            .map(|e| {
                let i = index[e.inner.as_str()];
                marks[i].push((tag, e.kind, e.label.clone()));
                (e.kind, e.label.clone(), i)
            })
            .collect::<Vec<_>>()
    };
    let left = translate(left, 0, &mut marks);
    let right = translate(right, 1, &mut marks);
    for m in &mut marks {
        m.sort();
    }
    let initial: Vec<_> = g
        .nodes
        .iter()
        .zip(&marks)
        .map(|(n, m)| (n.clone(), m.clone()))
        .collect();
    let ctx = Ctx {
        g,
        out,
        inc,
        left,
        right,
    };
    let mut best = None;
    ctx.search(rank(&initial), &mut best);
    best.unwrap_or_else(|| ctx.encode(&[]))
}
