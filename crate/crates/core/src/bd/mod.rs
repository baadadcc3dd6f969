//! Formula puzzles hidden in candidate names: CNF formulas, their byte
//! encoding, the recognizable set of accepted puzzles, and the vote-bit
//! codec that lets a ballot carry an assignment.

mod cnf;
mod puzzle;

pub use cnf::{
    decode_formula, encode_formula, find_satisfying, find_satisfying_within, is_satisfiable,
    satisfies, Assignment, CnfFormula, DEFAULT_MAX_VARS,
};
pub use puzzle::{candidate_bit, craft_vote, puzzle, vote_bit_len, vote_bits};

use crate::election::BitString;

/// The accepted puzzle set: canonical encodings of satisfiable formulas
/// whose variable count lies in `min_vars..=max_vars`.
///
/// Membership is decided by DPLL; the exhaustive [`find_satisfying`] is
/// kept as the slow solution finder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BdSet {
    pub min_vars: usize,
    pub max_vars: usize,
}

impl Default for BdSet {
    fn default() -> Self {
        BdSet {
            min_vars: 1,
            max_vars: DEFAULT_MAX_VARS,
        }
    }
}

impl BdSet {
    /// Every member has at least two variables.
    pub fn two_or_more() -> Self {
        BdSet {
            min_vars: 2,
            ..Self::default()
        }
    }

    /// The decoded formula if `x` is a member.
    pub fn member_formula(&self, x: &BitString) -> Option<CnfFormula> {
        let f = decode_formula(x)?;
        let d = f.var_count();
        (self.min_vars <= d && d <= self.max_vars.min(64) && is_satisfiable(&f)).then_some(f)
    }

    pub fn contains(&self, x: &BitString) -> bool {
        self.member_formula(x).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let b = BdSet::default();
        let unit = CnfFormula::new(1, vec![vec![1]]).unwrap();
        assert!(b.contains(&encode_formula(&unit)));
        assert!(!BdSet::two_or_more().contains(&encode_formula(&unit)));
        let contra = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert!(!b.contains(&encode_formula(&contra)));
        assert!(!b.contains(&BitString::empty()));
        let wide = CnfFormula::all_true_units(17).unwrap();
        assert!(!b.contains(&encode_formula(&wide)));
    }
}
