//! The moduli space context shared by ring elements.

use std::sync::{Arc, OnceLock};

use crate::hkn::{GradedBasis, PresentationError};
use crate::lengths::{IndexSubset, LengthError, LengthVector};

/// A generic nonempty length vector together with the lazily built basis
/// of its cohomology ring. Read-only once the basis is built.
#[derive(Debug)]
pub struct Moduli {
    lengths: LengthVector,
    basis: OnceLock<Result<GradedBasis, PresentationError>>,
}

impl Moduli {
    pub fn new(lengths: LengthVector) -> Result<Arc<Moduli>, LengthError> {
        lengths.validate()?;
        Ok(Arc::new(Moduli {
            lengths,
            basis: OnceLock::new(),
        }))
    }

    pub fn lengths(&self) -> &LengthVector {
        &self.lengths
    }

    pub fn n(&self) -> usize {
        self.lengths.n()
    }

    /// Complex dimension `n - 3`.
    pub fn dim(&self) -> usize {
        self.n() - 3
    }

    pub fn is_long(&self, set: IndexSubset) -> bool {
        self.lengths.is_long(set)
    }

    pub fn basis(&self) -> Result<&GradedBasis, PresentationError> {
        self.basis
            .get_or_init(|| GradedBasis::build(&self.lengths))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Moduli>) -> bool {
        Arc::ptr_eq(self, other) || self.lengths == other.lengths
    }
}
