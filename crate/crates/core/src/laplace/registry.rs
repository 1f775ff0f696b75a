use super::methods::{Lminus, ModifiedLplus, NaiveLplus};
use super::{Method, Solution};
use crate::decomposition::SysSpec;
use crate::error::{Error, Result};

/// A transform-domain solution method, selectable by name.
pub trait Solver: Send + Sync {
    fn method(&self) -> Method;

    fn name(&self) -> &'static str {
        self.method().as_str()
    }

    fn solve(&self, sys: &SysSpec) -> Result<Solution>;
}

/// Name-keyed solvers in registration order.
pub struct SolverRegistry {
    solvers: Vec<Box<dyn Solver>>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        SolverRegistry {
            solvers: Vec::new(),
        }
    }

    /// The three built-in methods, reference method first.
    pub fn builtin() -> Self {
        let mut r = SolverRegistry::empty();
        r.register(Box::new(ModifiedLplus)).expect("unique");
        r.register(Box::new(Lminus)).expect("unique");
        r.register(Box::new(NaiveLplus)).expect("unique");
        r
    }

    pub fn register(&mut self, solver: Box<dyn Solver>) -> Result<()> {
        if self.get(solver.name()).is_some() {
            return Err(Error::UnsupportedInput(format!(
                "solver {} already registered",
                solver.name()
            )));
        }
        self.solvers.push(solver);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&dyn Solver> {
        self.solvers
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
    }

    pub fn must_get(&self, name: &str) -> Result<&dyn Solver> {
        self.get(name).ok_or_else(|| {
            Error::UnsupportedInput(format!(
                "unknown method '{name}' (available: {})",
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Solver> {
        self.solvers.iter().map(|s| s.as_ref())
    }
}

impl Default for SolverRegistry {
    fn default() -> Self {
        SolverRegistry::builtin()
    }
}
