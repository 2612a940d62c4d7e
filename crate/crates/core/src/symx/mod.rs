//! Symbolic kernel: rational functions over parameters and exp/sin/cos atoms.
//!
//! Expressions are quotients of polynomials whose variables are named
//! parameters plus transcendental atoms `exp(L)`, `sin(L)`, `cos(L)` of
//! atom-free polynomial arguments. Atoms are treated as algebraically
//! independent apart from `exp(a)exp(b) = exp(a+b)` and `sin² + cos² = 1`.

mod eval;
mod expr;
mod formula;
mod poly;
mod rank;
mod solve;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

pub use eval::{Dual, Env, MapEnv, Sampler, Scalar};
pub use expr::Expr;
pub use formula::{Cmp, Formula, Predicate};
pub use poly::{Atom, Monomial, Poly, Q};
pub(crate) use rank::matrix_rank;
pub use rank::{generic_rank, numeric_rank, symbolic_rank};
pub use solve::{solve_for, Condition, Solution, SolveOutcome};

pub const DEFAULT_SEED: u64 = 0x5EED;

static SEED: AtomicU64 = AtomicU64::new(DEFAULT_SEED);

/// Seed used by every sampling routine in the crate.
pub fn seed() -> u64 {
    SEED.load(Ordering::Relaxed)
}

pub fn set_seed(seed: u64) {
    SEED.store(seed, Ordering::Relaxed);
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymxError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("expression outside the supported class: {0}")]
    OutsideClass(String),
    #[error("symbolic and numeric zero tests disagree on {0}")]
    ZeroTestDisagreement(String),
}

/// What a parameter stands for. The order doubles as the variable order in
/// polynomials, so constants sort first and automorphism times last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamKind {
    Constant,
    Algebra,
    Coefficient,
    Time,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param(Arc<(ParamKind, String)>);

impl Param {
    pub fn new(kind: ParamKind, name: impl Into<String>) -> Param {
        Param(Arc::new((kind, name.into())))
    }

    pub fn time(name: impl Into<String>) -> Param {
        Param::new(ParamKind::Time, name)
    }

    pub fn algebra(name: impl Into<String>) -> Param {
        Param::new(ParamKind::Algebra, name)
    }

    pub fn coefficient(name: impl Into<String>) -> Param {
        Param::new(ParamKind::Coefficient, name)
    }

    /// The circle constant, kept symbolic so `t = π/2` substitutions stay exact.
    pub fn pi() -> Param {
        Param::new(ParamKind::Constant, "pi")
    }

    pub fn kind(&self) -> ParamKind {
        self.0 .0
    }

    pub fn name(&self) -> &str {
        &self.0 .1
    }

    pub fn is_pi(&self) -> bool {
        self.kind() == ParamKind::Constant && self.name() == "pi"
    }
}

impl fmt::Debug for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
