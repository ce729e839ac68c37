//! Bounded deductive closure for sets accepted at level `1 - ε`.
//!
//! A single accepted premise passes its level to everything it entails.
//! `k` premises jointly support their conjunction, and anything the
//! conjunction entails, only at `1 - kε`. That bound follows from the union
//! bound alone and needs no independence between the premises.

use alloc::format;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::acceptance::AcceptanceLevel;
use crate::error::Error;
use crate::logic::{self, Formula, FormulaSet};
use crate::rational::{ceil, Rational};
use crate::world::WorldModel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeveledStatement {
    pub statement: Formula,
    pub support_lower_bound: Rational,
    /// Present when a world model was available.
    pub exact_probability: Option<Rational>,
    /// `k`, the number of premises the support was derived from.
    pub premise_count: usize,
}

/// `max(0, 1 - kε)`.
pub fn conjunction_bound(epsilon: &Rational, k: usize) -> Rational {
    let bound = Rational::one() - epsilon * Rational::from_integer(BigInt::from(k));
    if bound.is_negative() {
        Rational::zero()
    } else {
        bound
    }
}

fn require_accepted(
    model: &WorldModel,
    formula: &Formula,
    level: &AcceptanceLevel,
) -> Result<(), Error> {
    let p = model.probability(formula)?;
    if level.admits(&p) {
        Ok(())
    } else {
        Err(Error::BelowThreshold {
            statement: format!("{formula}"),
            probability: format!("{p}"),
        })
    }
}

fn checked(statement: LeveledStatement) -> Result<LeveledStatement, Error> {
    match &statement.exact_probability {
        Some(p) if *p < statement.support_lower_bound => Err(Error::Invariant(format!(
            "`{}` has probability {p} below its bound {}",
            statement.statement, statement.support_lower_bound
        ))),
        _ => Ok(statement),
    }
}

/// The conjunction of `statements`, each accepted at `level`, with its
/// guaranteed support `1 - kε` and its exact probability in `model`.
pub fn conjunction_support(
    model: &WorldModel,
    statements: &FormulaSet,
    level: &AcceptanceLevel,
) -> Result<LeveledStatement, Error> {
    let conjunction = Formula::all(statements).ok_or(Error::Empty("statement set"))?;
    for s in statements {
        require_accepted(model, s, level)?;
    }
    checked(LeveledStatement {
        exact_probability: Some(model.probability(&conjunction)?),
        statement: conjunction,
        support_lower_bound: conjunction_bound(level.epsilon(), statements.len()),
        premise_count: statements.len(),
    })
}

/// Support for a conclusion drawn from `premises` accepted at `level`.
///
/// Background formulas may be used in the derivation. They must be certain
/// in `model`, so they add nothing to the error budget and are not counted
/// in `k`.
pub fn consequence_level(
    model: &WorldModel,
    background: &FormulaSet,
    premises: &FormulaSet,
    conclusion: &Formula,
    level: &AcceptanceLevel,
) -> Result<LeveledStatement, Error> {
    for b in background {
        let p = model.probability(b)?;
        if !p.is_one() {
            return Err(Error::InvalidBase(format!(
                "background `{b}` has probability {p}, not 1"
            )));
        }
    }
    for premise in premises {
        require_accepted(model, premise, level)?;
    }
    if !logic::entails(background, premises, conclusion) {
        return Err(Error::NotEntailed(format!("{conclusion}")));
    }
    checked(LeveledStatement {
        statement: conclusion.clone(),
        support_lower_bound: conjunction_bound(level.epsilon(), premises.len()),
        exact_probability: Some(model.probability(conclusion)?),
        premise_count: premises.len(),
    })
}

/// `⌈1/ε⌉`: the fewest statements accepted at `1 - ε` that can be jointly
/// inconsistent (or even jointly entail a probability-zero sentence).
pub fn contradiction_bound(level: &AcceptanceLevel) -> BigInt {
    ceil(&level.epsilon().recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;
    use crate::rational::{int, ratio};
    use crate::world::{fair_lottery, independent_lottery};

    fn level(n: i64, d: i64) -> AcceptanceLevel {
        AcceptanceLevel::new(ratio(n, d)).unwrap()
    }

    fn set(texts: &[&str]) -> FormulaSet {
        texts.iter().map(|t| parse(t).unwrap()).collect()
    }

    #[test]
    fn two_statements_at_ninety_nine_percent() {
        let base = independent_lottery(2, &ratio(1, 100)).unwrap();
        let s = conjunction_support(base.model(), &set(&["~wins_1", "~wins_2"]), &level(1, 100))
            .unwrap();
        assert_eq!(s.support_lower_bound, ratio(98, 100));
        assert_eq!(s.premise_count, 2);
        // independent tickets: the product, above the bound
        assert_eq!(s.exact_probability, Some(ratio(9801, 10000)));
    }

    #[test]
    fn single_statement_keeps_its_level() {
        let base = fair_lottery(100).unwrap();
        let s = conjunction_support(base.model(), &set(&["~wins_5"]), &level(1, 100)).unwrap();
        assert_eq!(s.support_lower_bound, ratio(99, 100));
        assert_eq!(s.statement, parse("~wins_5").unwrap());
    }

    #[test]
    fn lottery_bound_is_attained() {
        let base = fair_lottery(100).unwrap();
        let s = conjunction_support(
            base.model(),
            &set(&["~wins_1", "~wins_2", "~wins_3"]),
            &level(1, 100),
        )
        .unwrap();
        assert_eq!(s.support_lower_bound, ratio(97, 100));
        assert_eq!(s.exact_probability, Some(ratio(97, 100)));
    }

    #[test]
    fn below_threshold_is_rejected() {
        let base = fair_lottery(10).unwrap();
        let err = conjunction_support(base.model(), &set(&["wins_1"]), &level(1, 10)).unwrap_err();
        assert!(matches!(err, Error::BelowThreshold { .. }));
        assert!(conjunction_support(base.model(), &FormulaSet::new(), &level(1, 10)).is_err());
    }

    #[test]
    fn single_premise_consequence() {
        let base = fair_lottery(100).unwrap();
        let premise = set(&["~wins_1 & ~wins_2"]);
        let s = consequence_level(
            base.model(),
            &FormulaSet::new(),
            &premise,
            &parse("~wins_1").unwrap(),
            &level(1, 50),
        )
        .unwrap();
        assert_eq!(s.support_lower_bound, ratio(49, 50));
        assert_eq!(s.exact_probability, Some(ratio(99, 100)));
    }

    #[test]
    fn ninety_nine_premises_name_the_winner() {
        let base = fair_lottery(100).unwrap();
        let premises: FormulaSet = base.candidates().iter().take(99).cloned().collect();
        let s = consequence_level(
            base.model(),
            base.background(),
            &premises,
            &parse("wins_100").unwrap(),
            &level(1, 100),
        )
        .unwrap();
        assert_eq!(s.premise_count, 99);
        assert_eq!(s.support_lower_bound, ratio(1, 100));
        assert_eq!(s.exact_probability, Some(ratio(1, 100)));
    }

    #[test]
    fn non_entailed_conclusion() {
        let base = fair_lottery(10).unwrap();
        let err = consequence_level(
            base.model(),
            &FormulaSet::new(),
            &set(&["~wins_1"]),
            &parse("~wins_2").unwrap(),
            &level(1, 10),
        )
        .unwrap_err();
        assert_eq!(err, Error::NotEntailed("~wins_2".into()));
    }

    #[test]
    fn contradiction_bounds() {
        assert_eq!(contradiction_bound(&level(1, 100)), BigInt::from(100));
        assert_eq!(contradiction_bound(&level(1, 3)), BigInt::from(3));
        assert_eq!(contradiction_bound(&level(3, 200)), BigInt::from(67));
    }

    #[test]
    fn bound_floors_at_zero() {
        assert_eq!(conjunction_bound(&ratio(1, 3), 4), int(0));
        assert_eq!(conjunction_bound(&ratio(1, 3), 3), int(0));
        assert_eq!(conjunction_bound(&ratio(1, 3), 2), ratio(1, 3));
    }

    #[test]
    fn independence_gives_the_product() {
        let p = ratio(1, 10);
        let base = independent_lottery(4, &p).unwrap();
        let losers: FormulaSet = base.candidates().iter().take(4).cloned().collect();
        let s = conjunction_support(base.model(), &losers, &level(1, 10)).unwrap();
        let product = (0..4).fold(int(1), |acc: Rational, _| acc * (int(1) - &p));
        assert_eq!(s.exact_probability, Some(product));
    }
}
