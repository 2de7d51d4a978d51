//! Exhaustive scan of chambers of small length vectors.
//!
//! Candidates are non-decreasing integer vectors with entries in
//! `1..=bound`, which covers every chamber up to relabeling the edges.
//! Integer boxes this small rarely contain vectors whose signed subset sums
//! all differ, so a candidate only has to avoid the walls; its
//! [`LengthVector::generic_lift`] is the generic representative.

use std::collections::HashSet;

use thiserror::Error;

use crate::hkn::{GradedBasis, PresentationError};
use crate::lengths::{ChamberSignature, LengthVector};

pub const MAX_SCAN_EDGES: usize = 7;
pub const MAX_SCAN_BOUND: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("chamber scan needs at least 4 edges, got {0}")]
    TooFewEdges(usize),
    #[error("scan budget exceeded: n={n}, bound={bound} (limits n <= {MAX_SCAN_EDGES}, bound <= {MAX_SCAN_BOUND})")]
    BudgetExceeded { n: usize, bound: u64 },
}

#[derive(Debug, Clone)]
pub struct Chamber {
    /// First candidate found in the chamber, in scan order.
    pub witness: LengthVector,
    /// Generic vector of the same chamber.
    pub representative: LengthVector,
    pub signature: ChamberSignature,
    /// Ranks `b_0..b_{n-3}` in the complex grading.
    pub betti: Result<Vec<usize>, PresentationError>,
}

/// Every chamber with a nonempty moduli space met by the scan, in the
/// order they are first found.
pub fn scan(n: usize, bound: u64) -> Result<Vec<Chamber>, ScanError> {
    if n < 4 {
        return Err(ScanError::TooFewEdges(n));
    }
    if n > MAX_SCAN_EDGES || bound > MAX_SCAN_BOUND {
        return Err(ScanError::BudgetExceeded { n, bound });
    }
    let mut seen = HashSet::new();
    let mut found = Vec::new();
    let mut current = vec![0u64; n];
    visit(&mut current, 0, 1, bound, &mut |lengths| {
        let l = LengthVector::new(lengths.to_vec()).expect("positive entries");
        if !l.avoids_walls() || !l.is_nonempty() {
            return;
        }
        let signature = l.long_set_signature();
        if seen.insert(signature.clone()) {
            found.push((l, signature));
        }
    });
    Ok(found
        .into_iter()
        .map(|(witness, signature)| {
            let representative = if witness.is_generic() {
                witness.clone()
            } else {
                witness.generic_lift()
            };
            let betti = GradedBasis::build(&representative).map(|b| b.betti());
            Chamber {
                witness,
                representative,
                signature,
                betti,
            }
        })
        .collect())
}

fn visit(current: &mut [u64], at: usize, low: u64, bound: u64, f: &mut impl FnMut(&[u64])) {
    if at == current.len() {
        f(current);
        return;
    }
    for x in low..=bound {
        current[at] = x;
        visit(current, at + 1, x, bound, f);
    }
}
