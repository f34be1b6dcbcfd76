use std::fmt;

/// Sorts: declared set or subset symbols, powersets and tuples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Named(String),
    Pow(Box<Sort>),
    Tuple(Vec<Sort>),
}

impl Sort {
    pub fn named(name: impl Into<String>) -> Self {
        Sort::Named(name.into())
    }

    pub fn pow(inner: Sort) -> Self {
        Sort::Pow(Box::new(inner))
    }

    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Sort::Named(n) => out.push(n),
            Sort::Pow(s) => s.collect_names(out),
            Sort::Tuple(items) => items.iter().for_each(|s| s.collect_names(out)),
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Named(n) => f.write_str(n),
            Sort::Pow(s) => write!(f, "pow({s})"),
            Sort::Tuple(items) => {
                f.write_str("(")?;
                for (i, s) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{s}")?;
                }
                f.write_str(")")
            }
        }
    }
}
