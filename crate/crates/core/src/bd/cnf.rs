//! CNF formulas, assignments and their canonical DIMACS byte encoding.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::election::BitString;
use crate::error::{Error, Result};

/// Largest variable count accepted by the exhaustive solver by default.
pub const DEFAULT_MAX_VARS: usize = 16;

/// A CNF formula over variables `1..=d`, kept in canonical form: literals
/// within a clause sorted by variable (positive before negative) without
/// repeats, clauses sorted and without repeats.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FormulaRepr", into = "FormulaRepr")]
pub struct CnfFormula {
    vars: usize,
    clauses: Vec<Vec<i32>>,
}

#[derive(Serialize, Deserialize)]
struct FormulaRepr {
    vars: usize,
    clauses: Vec<Vec<i32>>,
}

impl TryFrom<FormulaRepr> for CnfFormula {
    type Error = Error;
    fn try_from(r: FormulaRepr) -> Result<Self> {
        CnfFormula::new(r.vars, r.clauses)
    }
}

impl From<CnfFormula> for FormulaRepr {
    fn from(f: CnfFormula) -> Self {
        FormulaRepr {
            vars: f.vars,
            clauses: f.clauses,
        }
    }
}

fn literal_key(l: i32) -> (u32, bool) {
    (l.unsigned_abs(), l < 0)
}

impl CnfFormula {
    /// Validates and canonicalizes. Every variable `1..=vars` must occur.
    pub fn new(vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        if vars == 0 {
            return Err(Error::InvalidFormula("a formula needs at least one variable".into()));
        }
        if vars > i32::MAX as usize {
            return Err(Error::InvalidFormula(format!("too many variables ({vars})")));
        }
        let mut seen = vec![false; vars];
        let mut canonical = Vec::with_capacity(clauses.len());
        for mut clause in clauses {
            if clause.is_empty() {
                return Err(Error::InvalidFormula("empty clause".into()));
            }
            for &l in &clause {
                let v = l.unsigned_abs() as usize;
                if l == 0 || v > vars {
                    return Err(Error::InvalidFormula(format!(
                        "literal {l} outside variables 1..={vars}"
                    )));
                }
                seen[v - 1] = true;
            }
            clause.sort_by_key(|&l| literal_key(l));
            clause.dedup();
            canonical.push(clause);
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidFormula(format!("variable {} does not occur", v + 1)));
        }
        canonical.sort_by(|a, b| {
            a.iter()
                .map(|&l| literal_key(l))
                .cmp(b.iter().map(|&l| literal_key(l)))
        });
        canonical.dedup();
        Ok(CnfFormula {
            vars,
            clauses: canonical,
        })
    }

    /// The conjunction of the unit clauses `v1, ..., vd`; its only
    /// satisfying assignment is all-true.
    pub fn all_true_units(vars: usize) -> Result<Self> {
        Self::new(vars, (1..=vars as i32).map(|v| vec![v]).collect())
    }

    pub fn var_count(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Canonical DIMACS text: header, then one clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for clause in &self.clauses {
            for l in clause {
                s.push_str(&l.to_string());
                s.push(' ');
            }
            s.push_str("0\n");
        }
        s
    }

    /// Lenient DIMACS reader for input files: comment lines (`c ...`) and
    /// arbitrary whitespace are accepted, clauses may span lines.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let fields: Vec<&str> = line.split_whitespace().collect();
                match fields.as_slice() {
                    ["p", "cnf", d, m] => {
                        let d = d.parse().map_err(|_| Error::InvalidFormula(format!("bad header `{line}`")))?;
                        let m = m.parse().map_err(|_| Error::InvalidFormula(format!("bad header `{line}`")))?;
                        header = Some((d, m));
                    }
                    _ => return Err(Error::InvalidFormula(format!("bad header `{line}`"))),
                }
                continue;
            }
            if header.is_none() {
                return Err(Error::InvalidFormula("clause before `p cnf` header".into()));
            }
            for tok in line.split_whitespace() {
                let l: i32 = tok
                    .parse()
                    .map_err(|_| Error::InvalidFormula(format!("bad literal `{tok}`")))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(l);
                }
            }
        }
        let (vars, declared) = header.ok_or_else(|| Error::InvalidFormula("missing `p cnf` header".into()))?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != declared {
            return Err(Error::InvalidFormula(format!(
                "header declares {declared} clauses, found {}",
                clauses.len()
            )));
        }
        Self::new(vars, clauses)
    }

    /// Clause masks for fast evaluation; bit `i - 1` stands for variable `i`.
    pub(crate) fn masks(&self) -> Option<Vec<(u64, u64)>> {
        if self.vars > 64 {
            return None;
        }
        Some(
            self.clauses
                .iter()
                .map(|c| {
                    c.iter().fold((0u64, 0u64), |(pos, neg), &l| {
                        let bit = 1u64 << (l.unsigned_abs() - 1);
                        if l > 0 {
                            (pos | bit, neg)
                        } else {
                            (pos, neg | bit)
                        }
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Debug for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c
                    .iter()
                    .map(|&l| if l > 0 { format!("v{l}") } else { format!("¬v{}", -l) })
                    .collect();
                format!("({})", lits.join(" ∨ "))
            })
            .collect();
        write!(f, "{}", clauses.join(" ∧ "))
    }
}

/// Values for variables `1..=d`; index 0 holds variable 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn complement(&self) -> Assignment {
        Assignment(self.0.iter().map(|b| !b).collect())
    }

    pub fn to_bitstring(&self) -> BitString {
        BitString::from_bits(self.0.iter().copied())
    }

    fn mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |m, (i, &b)| if b { m | (1 << i) } else { m })
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bitstring().as_str())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bitstring().as_str())
    }
}

pub fn satisfies(formula: &CnfFormula, assignment: &Assignment) -> Result<bool> {
    if assignment.len() != formula.vars {
        return Err(Error::AssignmentLength {
            expected: formula.vars,
            got: assignment.len(),
        });
    }
    if let Some(masks) = formula.masks() {
        let a = assignment.mask();
        return Ok(masks.iter().all(|&(pos, neg)| pos & a != 0 || neg & !a != 0));
    }
    Ok(formula.clauses.iter().all(|c| {
        c.iter().any(|&l| assignment.0[l.unsigned_abs() as usize - 1] == (l > 0))
    }))
}

/// The first satisfying assignment in ascending binary order with
/// variable 1 as the most significant bit. Exhaustive by construction.
pub fn find_satisfying(formula: &CnfFormula) -> Result<Option<Assignment>> {
    find_satisfying_within(formula, DEFAULT_MAX_VARS)
}

pub fn find_satisfying_within(formula: &CnfFormula, max_vars: usize) -> Result<Option<Assignment>> {
    let d = formula.vars;
    if d > max_vars || d > 63 {
        return Err(Error::Budget(format!(
            "exhaustive assignment search over {d} variables (limit {max_vars})"
        )));
    }
    let masks = formula.masks().expect("d <= 63");
    for x in 0u64..(1u64 << d) {
        // Counter bit d-1 is variable 1; mask bit 0 is variable 1.
        let a = x.reverse_bits() >> (64 - d);
        if masks.iter().all(|&(pos, neg)| pos & a != 0 || neg & !a != 0) {
            return Ok(Some(Assignment((0..d).map(|i| a >> i & 1 == 1).collect())));
        }
    }
    Ok(None)
}

/// Satisfiability by DPLL with unit propagation. Agrees with
/// `find_satisfying(f).is_some()` but does not enumerate assignments.
///
/// Panics on formulas over more than 64 variables.
pub fn is_satisfiable(formula: &CnfFormula) -> bool {
    let masks = formula.masks().expect("at most 64 variables");
    dpll(&masks, 0, 0, formula.vars)
}

fn dpll(clauses: &[(u64, u64)], mut t: u64, mut f: u64, vars: usize) -> bool {
    loop {
        let mut forced = false;
        for &(pos, neg) in clauses {
            if pos & t != 0 || neg & f != 0 {
                continue;
            }
            let free_pos = pos & !(t | f);
            let free_neg = neg & !(t | f);
            match free_pos.count_ones() + free_neg.count_ones() {
                0 => return false,
                1 => {
                    if free_pos != 0 {
                        t |= free_pos;
                    } else {
                        f |= free_neg;
                    }
                    forced = true;
                }
                _ => {}
            }
        }
        if !forced {
            break;
        }
    }
    let all = if vars == 64 { u64::MAX } else { (1u64 << vars) - 1 };
    let free = all & !(t | f);
    if free == 0 {
        return true;
    }
    let bit = free & free.wrapping_neg();
    dpll(clauses, t | bit, f, vars) || dpll(clauses, t, f | bit, vars)
}

/// 8-bit big-endian bytes of the canonical DIMACS text. Since the text
/// spells out every variable index, `d <= |x| / 8`.
pub fn encode_formula(formula: &CnfFormula) -> BitString {
    let text = formula.to_dimacs();
    BitString::from_bits(
        text.bytes()
            .flat_map(|byte| (0..8).rev().map(move |i| byte >> i & 1 == 1)),
    )
}

/// Inverse of [`encode_formula`] on its range; `None` for anything else.
pub fn decode_formula(x: &BitString) -> Option<CnfFormula> {
    if x.is_empty() || !x.len().is_multiple_of(8) {
        return None;
    }
    let bytes: Vec<u8> = x
        .as_str()
        .as_bytes()
        .chunks(8)
        .map(|chunk| chunk.iter().fold(0u8, |acc, &b| (acc << 1) | (b - b'0')))
        .collect();
    let text = std::str::from_utf8(&bytes).ok()?;
    let formula = parse_canonical(text)?;
    (formula.to_dimacs() == text).then_some(formula)
}

fn parse_canonical(text: &str) -> Option<CnfFormula> {
    let mut lines = text.strip_suffix('\n')?.split('\n');
    let header = lines.next()?.strip_prefix("p cnf ")?;
    let (d, _m) = header.split_once(' ')?;
    let vars: usize = d.parse().ok()?;
    let mut clauses = Vec::new();
    for line in lines {
        let body = line.strip_suffix(" 0")?;
        let clause = body
            .split(' ')
            .map(|t| t.parse::<i32>().ok())
            .collect::<Option<Vec<i32>>>()?;
        clauses.push(clause);
    }
    CnfFormula::new(vars, clauses).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(vars: usize, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(vars, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(CnfFormula::new(0, vec![]).is_err());
        assert!(CnfFormula::new(2, vec![vec![1]]).is_err());
        assert!(CnfFormula::new(1, vec![vec![2]]).is_err());
        assert!(CnfFormula::new(1, vec![vec![]]).is_err());
        assert_eq!(f(2, &[&[2, -1], &[2]]), f(2, &[&[2], &[-1, 2, 2]]));
    }

    #[test]
    fn dimacs_text_is_canonical() {
        assert_eq!(f(2, &[&[2], &[-2, 1]]).to_dimacs(), "p cnf 2 2\n1 -2 0\n2 0\n");
        let parsed = CnfFormula::parse_dimacs("c hi\np cnf 2 2\n  -2 1\n 0 2 0\n").unwrap();
        assert_eq!(parsed, f(2, &[&[1, -2], &[2]]));
        assert!(CnfFormula::parse_dimacs("p cnf 2 3\n1 -2 0\n2 0\n").is_err());
    }

    #[test]
    fn satisfies_examples() {
        let unit = f(1, &[&[1]]);
        assert!(satisfies(&unit, &Assignment(vec![true])).unwrap());
        assert!(!satisfies(&unit, &Assignment(vec![false])).unwrap());
        let g = f(2, &[&[1, -2], &[2]]);
        assert!(satisfies(&g, &Assignment(vec![true, true])).unwrap());
        assert_eq!(
            satisfies(&g, &Assignment(vec![true])),
            Err(Error::AssignmentLength { expected: 2, got: 1 })
        );
    }

    #[test]
    fn find_satisfying_examples() {
        assert_eq!(find_satisfying(&f(1, &[&[1]])).unwrap(), Some(Assignment(vec![true])));
        assert_eq!(find_satisfying(&f(1, &[&[1], &[-1]])).unwrap(), None);
        assert_eq!(
            find_satisfying(&f(2, &[&[-1, 2]])).unwrap(),
            Some(Assignment(vec![false, false]))
        );
        // Ascending with v1 most significant: 00, 01, 10 ...
        assert_eq!(
            find_satisfying(&f(2, &[&[1, 2], &[-2]])).unwrap(),
            Some(Assignment(vec![true, false]))
        );
        assert!(find_satisfying(&CnfFormula::all_true_units(17).unwrap()).is_err());
    }

    #[test]
    fn codec_examples() {
        let unit = f(1, &[&[1]]);
        let x = encode_formula(&unit);
        assert_eq!(x.len(), 8 * "p cnf 1 1\n1 0\n".len());
        assert!(x.len() / 2 > 1);
        assert_eq!(decode_formula(&x), Some(unit));
        assert_eq!(decode_formula(&BitString::empty()), None);
        assert_eq!(decode_formula(&"0101".parse().unwrap()), None);
        // Valid DIMACS that is not in canonical form does not decode.
        let loose = BitString::from_bits("p cnf 1 1\n1  0\n".bytes().flat_map(|b| (0..8).rev().map(move |i| b >> i & 1 == 1)));
        assert_eq!(decode_formula(&loose), None);
    }

    fn arb_formula() -> impl Strategy<Value = CnfFormula> {
        (1usize..=6).prop_flat_map(|d| {
            let lit = (1..=d as i32, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v });
            proptest::collection::vec(proptest::collection::vec(lit, 1..4), 0..6).prop_map(move |mut cs| {
                // Ensure every variable occurs.
                cs.push((1..=d as i32).collect());
                CnfFormula::new(d, cs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(formula in arb_formula()) {
            let x = encode_formula(&formula);
            prop_assert!(formula.var_count() <= x.len() / 8);
            prop_assert_eq!(decode_formula(&x), Some(formula));
        }

        #[test]
        fn dpll_agrees_with_exhaustive(formula in arb_formula()) {
            prop_assert_eq!(is_satisfiable(&formula), find_satisfying(&formula).unwrap().is_some());
        }

        #[test]
        fn found_assignments_satisfy(formula in arb_formula()) {
            if let Some(a) = find_satisfying(&formula).unwrap() {
                prop_assert!(satisfies(&formula, &a).unwrap());
            }
        }
    }
}
