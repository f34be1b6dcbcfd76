//! Textual model formats: parsing with source spans, canonical printing,
//! DOT export, and loading of model directories.

mod dot;
mod lexer;
mod parser;
mod printer;
mod span;

pub use dot::{display_label, export_dot, Exportable};
pub use printer::{print, print_module, print_run, print_signature, print_steps, print_structure, print_system};
pub use span::{ParseError, SourceSpan};

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{Signature, Structure, Value};
use crate::composition::{compose_all, Module, ModuleError};
use crate::instantiation::{instantiate, InstantiationError, System};
use crate::net::{Marking, SchematicNet};
use crate::runs::{Run, ScriptStep};

const RESERVED: [&str; 10] = ["and", "elm", "false", "free", "guard", "in", "init", "of", "pow", "true"];

/// Words printed quoted when they occur as data.
pub fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s)
}

/// Names the parts of an instantiated system by reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDoc {
    pub name: String,
    pub signature: String,
    pub structure: String,
    /// Composed left to right.
    pub modules: Vec<String>,
    /// Replaces the initial marking given by the init inscriptions.
    pub marking: Option<Marking>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DocumentBody {
    Signature(Signature),
    Structure(Structure),
    Module(Module<SchematicNet>),
    System(SystemDoc),
    Run(Run),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocumentKind {
    Signature,
    Structure,
    Module,
    System,
    Run,
}

impl fmt::Display for DocumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DocumentKind::Signature => "signature",
            DocumentKind::Structure => "structure",
            DocumentKind::Module => "module",
            DocumentKind::System => "system",
            DocumentKind::Run => "run",
        })
    }
}

/// A parsed model file. Equality ignores source positions.
#[derive(Debug, Clone)]
pub struct ModelDocument {
    pub body: DocumentBody,
    /// Spans of the document and its named entities, keyed like
    /// `place:menu`, `trans:enter`, `left:enter` or `symbol:Tables`.
    pub spans: BTreeMap<String, SourceSpan>,
}

impl PartialEq for ModelDocument {
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body
    }
}

impl ModelDocument {
    pub fn kind(&self) -> DocumentKind {
        match self.body {
            DocumentBody::Signature(_) => DocumentKind::Signature,
            DocumentBody::Structure(_) => DocumentKind::Structure,
            DocumentBody::Module(_) => DocumentKind::Module,
            DocumentBody::System(_) => DocumentKind::System,
            DocumentBody::Run(_) => DocumentKind::Run,
        }
    }

    pub fn name(&self) -> &str {
        match &self.body {
            DocumentBody::Signature(s) => &s.name,
            DocumentBody::Structure(s) => &s.name,
            DocumentBody::Module(m) => &m.name,
            DocumentBody::System(s) => &s.name,
            DocumentBody::Run(r) => &r.name,
        }
    }
}

pub fn parse(text: &str) -> Result<ModelDocument, ParseError> {
    parse_named(text, "<input>")
}

/// Parses `text`, attributing spans to `file`.
pub fn parse_named(text: &str, file: &str) -> Result<ModelDocument, ParseError> {
    parser::Parser::new(text, file)?.document()
}

pub fn parse_steps(text: &str, file: &str) -> Result<Vec<ScriptStep>, ParseError> {
    parser::Parser::new(text, file)?.steps()
}

pub fn parse_value(text: &str) -> Result<Value, ParseError> {
    let mut p = parser::Parser::new(text, "<value>")?;
    let v = p.value()?;
    p.expect_eof()?;
    Ok(v)
}

pub(crate) use parser::Parser;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{kind} `{name}` is defined in both {first} and {second}")]
    Duplicate { kind: DocumentKind, name: String, first: PathBuf, second: PathBuf },
    #[error("no {kind} named `{name}` was found")]
    Missing { kind: DocumentKind, name: String },
    #[error("{path}: expected a {expected} document, found a {found}")]
    WrongKind { path: PathBuf, expected: DocumentKind, found: DocumentKind },
    #[error(transparent)]
    Compose(#[from] ModuleError),
    #[error(transparent)]
    Instantiation(#[from] InstantiationError),
    #[error("marking of system `{system}`: {message}")]
    Marking { system: String, message: String },
}

/// Extensions of model files.
pub const MODEL_EXTENSIONS: [&str; 5] = ["hksig", "hks", "hk", "hksys", "hkrun"];

pub fn read_document(path: &Path) -> Result<ModelDocument, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(parse_named(&text, &path.display().to_string())?)
}

/// The model files of one directory, indexed by kind and name.
#[derive(Debug, Clone, Default)]
pub struct Library {
    pub documents: BTreeMap<(String, String), (PathBuf, ModelDocument)>,
}

impl Library {
    pub fn load_dir(dir: &Path) -> Result<Self, LoadError> {
        let io = |e: std::io::Error| LoadError::Io {
            path: dir.to_path_buf(),
            message: e.to_string(),
        };
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| MODEL_EXTENSIONS.contains(&e))
            })
            .collect();
        paths.sort();
        let mut lib = Library::default();
        for p in paths {
            let doc = read_document(&p)?;
            lib.add(p, doc)?;
        }
        Ok(lib)
    }

    pub fn add(&mut self, path: PathBuf, doc: ModelDocument) -> Result<(), LoadError> {
        let key = (doc.kind().to_string(), doc.name().to_string());
        if let Some((first, existing)) = self.documents.get(&key) {
            if *existing != doc {
                return Err(LoadError::Duplicate {
                    kind: doc.kind(),
                    name: key.1,
                    first: first.clone(),
                    second: path,
                });
            }
            return Ok(());
        }
        self.documents.insert(key, (path, doc));
        Ok(())
    }

    fn get(&self, kind: DocumentKind, name: &str) -> Result<&DocumentBody, LoadError> {
        self.documents
            .get(&(kind.to_string(), name.to_string()))
            .map(|(_, d)| &d.body)
            .ok_or_else(|| LoadError::Missing {
                kind,
                name: name.to_string(),
            })
    }

    pub fn signature(&self, name: &str) -> Result<&Signature, LoadError> {
        match self.get(DocumentKind::Signature, name)? {
            DocumentBody::Signature(s) => Ok(s),
            _ => unreachable!("indexed by kind"),
        }
    }

    pub fn structure(&self, name: &str) -> Result<&Structure, LoadError> {
        match self.get(DocumentKind::Structure, name)? {
            DocumentBody::Structure(s) => Ok(s),
            _ => unreachable!("indexed by kind"),
        }
    }

    pub fn module(&self, name: &str) -> Result<&Module<SchematicNet>, LoadError> {
        match self.get(DocumentKind::Module, name)? {
            DocumentBody::Module(m) => Ok(m),
            _ => unreachable!("indexed by kind"),
        }
    }

    /// Composes the referenced modules and instantiates them.
    pub fn system(&self, doc: &SystemDoc) -> Result<System, LoadError> {
        let modules = doc
            .modules
            .iter()
            .map(|m| self.module(m).cloned())
            .collect::<Result<Vec<_>, _>>()?;
        let module = compose_all(&modules)?;
        let sig = Arc::new(self.signature(&doc.signature)?.clone());
        let s = Arc::new(self.structure(&doc.structure)?.clone());
        let mut sys = instantiate(Arc::new(module), sig, s)?;
        sys.name = doc.name.clone();
        if let Some(m) = &doc.marking {
            for (p, tokens) in m.places() {
                let err = |message: String| LoadError::Marking {
                    system: doc.name.clone(),
                    message,
                };
                let place = sys.net().places.get(p).ok_or_else(|| err(format!("unknown place `{p}`")))?;
                if let Some(sort) = &place.sort {
                    if let Some(v) = tokens.distinct().find(|v| !sys.structure.sort_contains(sort, v)) {
                        return Err(err(format!("token {v} on `{p}` lies outside sort {sort}")));
                    }
                }
            }
            sys.initial = m.clone();
        }
        Ok(sys)
    }
}

/// Loads the system described by a `.hksys` file, resolving references
/// against the model files of its directory.
pub fn load_system(path: &Path) -> Result<System, LoadError> {
    let doc = read_document(path)?;
    let DocumentBody::System(sd) = &doc.body else {
        return Err(LoadError::WrongKind {
            path: path.to_path_buf(),
            expected: DocumentKind::System,
            found: doc.kind(),
        });
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    Library::load_dir(dir)?.system(sd)
}
