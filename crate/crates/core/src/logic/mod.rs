//! Propositional formulas, satisfiability, entailment and subset
//! enumeration.

mod encode;
mod formula;
mod parse;
pub mod sat;
pub mod subsets;

use alloc::vec::Vec;

pub use encode::{Encoder, SubsetChecker};
pub use formula::{is_identifier, Expr, Formula, FormulaSet, Nnf};
pub use parse::parse;
pub use subsets::SubsetFamilies;

use crate::error::Error;

/// Default bound on the number of candidates handed to subset enumeration.
pub const DEFAULT_CAP: usize = 20;

pub fn is_satisfiable<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> bool {
    let formulas: Vec<&Formula> = formulas.into_iter().collect();
    SubsetChecker::new(formulas.iter().copied(), []).consistent(0..formulas.len())
}

/// Weak inconsistency is unsatisfiability; strong inconsistency is a single
/// member holding some subformula conjoined with its own negation.
pub fn has_strong_inconsistency(formulas: &FormulaSet) -> bool {
    formulas.iter().any(|f| f.nnf().has_self_contradiction())
}

/// `background ∪ premises ⊢ conclusion`.
pub fn entails(background: &FormulaSet, premises: &FormulaSet, conclusion: &Formula) -> bool {
    let mut encoder = Encoder::new();
    let mut assumptions: Vec<_> = background
        .iter()
        .chain(premises.iter())
        .map(|f| encoder.root(f))
        .collect();
    assumptions.push(encoder.negated_root(conclusion));
    encoder.solver().solve(&assumptions).is_none()
}

/// Both subset families of `candidates` relative to `background`, after
/// checking the background and the cap.
pub fn subset_families(
    candidates: &FormulaSet,
    background: &FormulaSet,
    cap: usize,
) -> Result<SubsetFamilies, Error> {
    if candidates.len() > cap {
        return Err(Error::TooManyCandidates {
            count: candidates.len(),
            cap,
        });
    }
    subset_families_uncapped(candidates, background)
}

pub(crate) fn subset_families_uncapped(
    candidates: &FormulaSet,
    background: &FormulaSet,
) -> Result<SubsetFamilies, Error> {
    let mut checker = SubsetChecker::new(candidates, background);
    if !checker.consistent([]) {
        return Err(Error::UnsatisfiableBackground);
    }
    Ok(subsets::enumerate(&mut checker))
}

fn pick(candidates: &FormulaSet, indices: &[usize]) -> FormulaSet {
    indices
        .iter()
        .map(|&i| candidates.as_slice()[i].clone())
        .collect()
}

pub fn minimal_unsat_subsets(
    candidates: &FormulaSet,
    background: &FormulaSet,
    cap: usize,
) -> Result<Vec<FormulaSet>, Error> {
    let families = subset_families(candidates, background, cap)?;
    Ok(families
        .unsat_cores
        .iter()
        .map(|core| pick(candidates, core))
        .collect())
}

pub fn maximal_consistent_subsets(
    candidates: &FormulaSet,
    background: &FormulaSet,
    cap: usize,
) -> Result<Vec<FormulaSet>, Error> {
    let families = subset_families(candidates, background, cap)?;
    Ok(families
        .maximal_consistent
        .iter()
        .map(|mcs| pick(candidates, mcs))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    fn set(texts: &[&str]) -> FormulaSet {
        texts.iter().map(|t| parse(t).unwrap()).collect()
    }

    fn lottery3() -> (FormulaSet, FormulaSet) {
        let background = set(&[
            "wins_1 | wins_2 | wins_3",
            "wins_1 -> ~wins_2 & ~wins_3",
            "wins_2 -> ~wins_1 & ~wins_3",
            "wins_3 -> ~wins_1 & ~wins_2",
        ]);
        (set(&["~wins_1", "~wins_2", "~wins_3"]), background)
    }

    /// Truth-table satisfiability over the atoms of the set.
    fn brute_sat(formulas: &FormulaSet) -> bool {
        let atoms: Vec<&str> = formulas.atoms().into_iter().collect();
        (0u32..1 << atoms.len()).any(|mask| {
            let value = |a: &str| {
                let i = atoms.iter().position(|x| *x == a).unwrap();
                mask >> i & 1 == 1
            };
            formulas.iter().all(|f| f.eval(&value))
        })
    }

    #[test]
    fn satisfiability_examples() {
        assert!(!is_satisfiable(&set(&["s & ~s"])));
        assert!(is_satisfiable(&FormulaSet::new()));
        let (cands, bg) = lottery3();
        let all = bg.union(&cands);
        assert!(!brute_sat(&all));
        assert!(!is_satisfiable(&all));
    }

    #[test]
    fn strong_inconsistency_examples() {
        assert!(has_strong_inconsistency(&set(&["s & ~s"])));
        assert!(!has_strong_inconsistency(&set(&["s", "~s"])));
        assert!(!has_strong_inconsistency(&FormulaSet::new()));
    }

    #[test]
    fn entailment_examples() {
        let (_, bg) = lottery3();
        let premises = set(&["~wins_1", "~wins_2"]);
        assert!(entails(&bg, &premises, &parse("wins_3").unwrap()));
        let phi = parse("(a -> b) & c").unwrap();
        assert!(entails(&FormulaSet::new(), &set(&["(a -> b) & c"]), &phi));
        assert!(!entails(&FormulaSet::new(), &FormulaSet::new(), &parse("a").unwrap()));
    }

    #[test]
    fn unsat_core_examples() {
        let (cands, bg) = lottery3();
        let cores = minimal_unsat_subsets(&cands, &bg, DEFAULT_CAP).unwrap();
        assert_eq!(cores, vec![cands.clone()]);
        assert!(minimal_unsat_subsets(&set(&["a", "b"]), &FormulaSet::new(), DEFAULT_CAP)
            .unwrap()
            .is_empty());
        let direct = set(&["a", "~a"]);
        let cores = minimal_unsat_subsets(&direct, &FormulaSet::new(), DEFAULT_CAP).unwrap();
        assert_eq!(cores.len(), 1);
        assert!(cores[0].same_members(&direct));
    }

    #[test]
    fn maximal_consistent_examples() {
        let (cands, bg) = lottery3();
        let mcs = maximal_consistent_subsets(&cands, &bg, DEFAULT_CAP).unwrap();
        assert_eq!(mcs.len(), 3);
        assert!(mcs.iter().all(|m| m.len() == 2));

        let consistent = set(&["a", "b | c"]);
        let mcs = maximal_consistent_subsets(&consistent, &FormulaSet::new(), DEFAULT_CAP).unwrap();
        assert_eq!(mcs, vec![consistent]);

        let mcs = maximal_consistent_subsets(&set(&["a", "~a"]), &FormulaSet::new(), DEFAULT_CAP)
            .unwrap();
        assert_eq!(mcs, vec![set(&["a"]), set(&["~a"])]);
    }

    #[test]
    fn enumeration_errors() {
        let bad_bg = set(&["a & ~a"]);
        assert_eq!(
            minimal_unsat_subsets(&set(&["b"]), &bad_bg, DEFAULT_CAP),
            Err(Error::UnsatisfiableBackground)
        );
        let many: FormulaSet = (0..5).map(|i| parse(&format!("x{i}")).unwrap()).collect();
        assert_eq!(
            maximal_consistent_subsets(&many, &FormulaSet::new(), 4),
            Err(Error::TooManyCandidates { count: 5, cap: 4 })
        );
    }
}
