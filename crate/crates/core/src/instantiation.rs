//! Turning a schematic module and a structure into an executable system.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{evaluate_tokens, validate_structure, Binding, Signature, Structure, TermError, Violation};
use crate::composition::Module;
use crate::net::{Marking, NetDiagnostic, NetError, SchematicNet, Semantics};

/// A schematic module instantiated by a structure, with its initial marking.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    pub name: String,
    pub signature: Arc<Signature>,
    pub structure: Arc<Structure>,
    pub module: Arc<Module<SchematicNet>>,
    pub initial: Marking,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstantiationError {
    #[error("{what} refers to signature `{found}` but `{expected}` was supplied")]
    SignatureMismatch { what: String, expected: String, found: String },
    #[error("structure `{0}` is not a model of its signature: {list}", list = .1.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidStructure(String, Vec<Violation>),
    #[error("module is not well-formed: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    IllFormed(Vec<NetDiagnostic>),
    #[error("initial inscription of `{place}`: {source}")]
    Init { place: String, source: TermError },
}

impl System {
    pub fn semantics(&self) -> Result<Semantics<'_>, NetError> {
        Semantics::new(&self.module.inner, &self.signature, &self.structure)
    }

    pub fn net(&self) -> &SchematicNet {
        &self.module.inner
    }
}

/// Instantiates `module` with `structure`: every place with an initial
/// inscription receives its evaluated tokens, all others start empty.
pub fn instantiate(
    module: Arc<Module<SchematicNet>>,
    signature: Arc<Signature>,
    structure: Arc<Structure>,
) -> Result<System, InstantiationError> {
    if let Some(found) = &module.inner.signature {
        if *found != signature.name {
            return Err(InstantiationError::SignatureMismatch {
                what: format!("module `{}`", module.name),
                expected: signature.name.clone(),
                found: found.clone(),
            });
        }
    }
    if structure.signature != signature.name {
        return Err(InstantiationError::SignatureMismatch {
            what: format!("structure `{}`", structure.name),
            expected: signature.name.clone(),
            found: structure.signature.clone(),
        });
    }
    let violations = validate_structure(&signature, &structure);
    if !violations.is_empty() {
        return Err(InstantiationError::InvalidStructure(structure.name.clone(), violations));
    }
    let diagnostics = module.inner.check(&signature);
    if !diagnostics.is_empty() {
        return Err(InstantiationError::IllFormed(diagnostics));
    }
    let mut initial = Marking::new();
    for (name, place) in &module.inner.places {
        for t in &place.init {
            let tokens = evaluate_tokens(t, &structure, &Binding::new()).map_err(|source| {
                InstantiationError::Init {
                    place: name.clone(),
                    source,
                }
            })?;
            initial.add_all(name, &tokens);
        }
    }
    Ok(System {
        name: format!("{}_{}", module.name, structure.name),
        signature,
        structure,
        module,
        initial,
    })
}

/// Instantiates one schematic module with two structures. Both systems share
/// the same module object.
pub fn reinstantiate(
    module: Arc<Module<SchematicNet>>,
    signature: Arc<Signature>,
    first: Arc<Structure>,
    second: Arc<Structure>,
) -> Result<(System, System), InstantiationError> {
    let a = instantiate(Arc::clone(&module), Arc::clone(&signature), first)?;
    let b = instantiate(module, signature, second)?;
    Ok((a, b))
}
