use alloc::string::ToString;
use alloc::vec::Vec;

use super::Registry;
use crate::{Error, Result};

/// Partition of (part of) a registry into parameters `T` and variables `Y`.
///
/// Names that are in neither list are allowed in the registry but must not
/// occur in polynomials used with the split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSplit {
    registry: Registry,
    params: Vec<usize>,
    vars: Vec<usize>,
}

impl VarSplit {
    pub fn new<S: AsRef<str>, R: AsRef<str>>(registry: &Registry, params: &[S], vars: &[R]) -> Result<Self> {
        let lookup = |name: &str| {
            registry.index_of(name).ok_or_else(|| Error::InvalidSplit(alloc::format!("`{name}` is not registered")))
        };
        let params: Vec<usize> = params.iter().map(|s| lookup(s.as_ref())).collect::<Result<_>>()?;
        let vars: Vec<usize> = vars.iter().map(|s| lookup(s.as_ref())).collect::<Result<_>>()?;
        let mut all: Vec<usize> = params.iter().chain(&vars).copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSplit("parameter and variable names must be distinct".to_string()));
        }
        Ok(VarSplit { registry: registry.clone(), params, vars })
    }

    pub fn from_indices(registry: &Registry, params: Vec<usize>, vars: Vec<usize>) -> Result<Self> {
        let p: Vec<&str> = params.iter().map(|&i| registry.name(i)).collect();
        let v: Vec<&str> = vars.iter().map(|&i| registry.name(i)).collect();
        VarSplit::new(registry, &p, &v)
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    /// Registry indices of the parameters `T_1..T_k`.
    pub fn params(&self) -> &[usize] {
        &self.params
    }

    /// Registry indices of the variables `Y_1..Y_n`.
    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn k(&self) -> usize {
        self.params.len()
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn param_names(&self) -> Vec<&str> {
        self.params.iter().map(|&i| self.registry.name(i)).collect()
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.vars.iter().map(|&i| self.registry.name(i)).collect()
    }

    /// The split obtained after specializing the first parameter.
    pub fn drop_first_param(&self) -> VarSplit {
        VarSplit { registry: self.registry.clone(), params: self.params[1..].to_vec(), vars: self.vars.clone() }
    }

    /// The split that treats every parameter and variable as a parameter.
    pub fn all_as_params(&self) -> VarSplit {
        let params = self.params.iter().chain(&self.vars).copied().collect();
        VarSplit { registry: self.registry.clone(), params, vars: Vec::new() }
    }

    pub(crate) fn check_registry(&self, registry: &Registry) -> Result<()> {
        if &self.registry == registry {
            Ok(())
        } else {
            Err(Error::RegistryMismatch)
        }
    }

    pub(crate) fn require_params(&self) -> Result<()> {
        if self.params.is_empty() {
            return Err(Error::InvalidSplit("at least one parameter is required".to_string()));
        }
        Ok(())
    }

    pub(crate) fn require_vars(&self) -> Result<()> {
        if self.vars.is_empty() {
            return Err(Error::InvalidSplit("at least one variable is required".to_string()));
        }
        Ok(())
    }
}
