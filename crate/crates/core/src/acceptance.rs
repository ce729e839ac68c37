//! Acceptance policies: plain thresholding, Lehrer's dominance rule and its
//! cascade on biased lotteries, order-dependent consistent acceptance, and
//! Teng's acceptance relative to what has already been accepted.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::logic::{self, Formula, FormulaSet, SubsetChecker};
use crate::rational::{int, Rational};
use crate::world::BeliefBase;

/// Seed used for permutation sampling when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x6c6f_7474_6572_7931;

/// The acceptance level `1 - ε`. Comparison against the threshold is
/// non-strict unless `strict` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcceptanceLevel {
    epsilon: Rational,
    strict: bool,
}

impl AcceptanceLevel {
    pub fn new(epsilon: Rational) -> Result<Self, Error> {
        if !epsilon.is_positive() || epsilon >= Rational::one() {
            return Err(Error::InvalidEpsilon(format!("{epsilon}")));
        }
        Ok(AcceptanceLevel {
            epsilon,
            strict: false,
        })
    }

    pub fn with_strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn threshold(&self) -> Rational {
        int(1) - &self.epsilon
    }

    pub fn admits(&self, probability: &Rational) -> bool {
        let threshold = self.threshold();
        if self.strict {
            *probability > threshold
        } else {
            *probability >= threshold
        }
    }
}

/// Maps the widest benefit-to-cost ratio met in a class of circumstances to
/// the level above which no available bet against a statement is worth
/// taking: `ε = 1 / (1 + r)`, threshold `r / (1 + r)`.
pub fn stakes_threshold(max_benefit_to_cost: &Rational) -> Result<AcceptanceLevel, Error> {
    if *max_benefit_to_cost < Rational::one() {
        return Err(Error::InvalidStakes(format!("{max_benefit_to_cost}")));
    }
    AcceptanceLevel::new((int(1) + max_benefit_to_cost).recip())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Policy {
    Threshold,
    Lehrer,
    Sequential,
    Teng,
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Threshold => "threshold",
            Policy::Lehrer => "lehrer",
            Policy::Sequential => "sequential",
            Policy::Teng => "teng",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One accepted statement with the probability that justified it (a
/// conditional probability under the order-relative policies).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Acceptance {
    pub label: String,
    pub formula: Formula,
    pub probability: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcceptedSet {
    /// Background plus every accepted statement.
    pub statements: FormulaSet,
    /// Accepted statements in acceptance order.
    pub accepted: Vec<Acceptance>,
    pub level: AcceptanceLevel,
    pub policy: Policy,
    pub weakly_consistent: bool,
}

impl AcceptedSet {
    fn assemble(
        base: &BeliefBase,
        level: &AcceptanceLevel,
        policy: Policy,
        accepted: Vec<Acceptance>,
    ) -> AcceptedSet {
        let mut statements = base.background().clone();
        statements.extend(accepted.iter().map(|a| a.formula.clone()));
        let weakly_consistent = logic::is_satisfiable(&statements);
        AcceptedSet {
            statements,
            accepted,
            level: level.clone(),
            policy,
            weakly_consistent,
        }
    }

    /// Labels in acceptance order.
    pub fn order(&self) -> Vec<&str> {
        self.accepted.iter().map(|a| a.label.as_str()).collect()
    }

    /// The accepted statements without the background.
    pub fn accepted_formulas(&self) -> FormulaSet {
        self.accepted.iter().map(|a| a.formula.clone()).collect()
    }
}

fn candidate_probabilities(base: &BeliefBase) -> Result<Vec<Rational>, Error> {
    base.candidates()
        .iter()
        .map(|c| base.model().probability(c))
        .collect()
}

fn acceptance(base: &BeliefBase, index: usize, probability: Rational) -> Acceptance {
    Acceptance {
        label: base.label_of(index).into(),
        formula: base.candidate(index).clone(),
        probability,
    }
}

/// Accepts every candidate whose probability clears the level.
pub fn threshold_accept(base: &BeliefBase, level: &AcceptanceLevel) -> Result<AcceptedSet, Error> {
    let accepted = candidate_probabilities(base)?
        .into_iter()
        .enumerate()
        .filter(|(_, p)| level.admits(p))
        .map(|(i, p)| acceptance(base, i, p))
        .collect();
    Ok(AcceptedSet::assemble(base, level, Policy::Threshold, accepted))
}

/// Accepts a candidate clearing the level only if it is strictly more
/// probable than each of its alternatives. Two candidates are alternatives
/// when both belong to some minimal set of level-clearing candidates that is
/// inconsistent with the background.
pub fn lehrer_accept(base: &BeliefBase, level: &AcceptanceLevel) -> Result<AcceptedSet, Error> {
    let probs = candidate_probabilities(base)?;
    let passing: Vec<usize> = (0..probs.len()).filter(|&i| level.admits(&probs[i])).collect();
    let passing_set: FormulaSet = passing.iter().map(|&i| base.candidate(i).clone()).collect();
    let families = logic::subset_families_uncapped(&passing_set, base.background())?;
    let accepted = passing
        .iter()
        .enumerate()
        .filter(|&(k, &i)| {
            families
                .unsat_cores
                .iter()
                .filter(|core| core.contains(&k))
                .flatten()
                .filter(|&&other| other != k)
                .all(|&other| probs[i] > probs[passing[other]])
        })
        .map(|(_, &i)| acceptance(base, i, probs[i].clone()))
        .collect();
    Ok(AcceptedSet::assemble(base, level, Policy::Lehrer, accepted))
}

/// Lehrer's rule applied stage by stage, conditioning on what has been
/// accepted so far. At each stage the uniquely most probable remaining
/// candidate is accepted if it clears the level; a tie or a shortfall ends
/// the cascade. A remaining candidate whose conditional probability has
/// dropped to zero is settled by accepting its negation, which is how the
/// last ticket of a lottery comes to be accepted as the winner.
pub fn lehrer_cascade(base: &BeliefBase, level: &AcceptanceLevel) -> Result<AcceptedSet, Error> {
    let mut view = base.model().conditioned();
    for b in base.background() {
        view.condition(b)?;
    }
    let mut remaining: Vec<usize> = (0..base.candidates().len()).collect();
    let mut accepted = Vec::new();
    while !remaining.is_empty() {
        let probs: Vec<Rational> = remaining
            .iter()
            .map(|&i| view.probability(base.candidate(i)))
            .collect::<Result<_, _>>()?;
        if let Some(pos) = probs.iter().position(Zero::is_zero) {
            let i = remaining.remove(pos);
            let negation = base.candidate(i).negate().canonical();
            view.condition(&negation)?;
            accepted.push(Acceptance {
                label: format!("not_{}", base.label_of(i)),
                formula: negation,
                probability: Rational::one(),
            });
            continue;
        }
        let best = probs.iter().max().expect("nonempty");
        if probs.iter().filter(|p| *p == best).count() > 1 || !level.admits(best) {
            break;
        }
        let pos = probs.iter().position(|p| p == best).unwrap();
        let i = remaining.remove(pos);
        view.condition(base.candidate(i))?;
        accepted.push(acceptance(base, i, probs[pos].clone()));
    }
    Ok(AcceptedSet::assemble(base, level, Policy::Lehrer, accepted))
}

/// Scans candidates in `order`, accepting each one that clears the level
/// and keeps the accepted statements consistent with the background.
pub fn sequential_accept(
    base: &BeliefBase,
    order: &[String],
    level: &AcceptanceLevel,
) -> Result<AcceptedSet, Error> {
    let order = base.permutation(order)?;
    let probs = candidate_probabilities(base)?;
    let mut checker = SubsetChecker::new(base.candidates(), base.background());
    Ok(sequential_run(base, &order, level, &probs, &mut checker))
}

fn sequential_run(
    base: &BeliefBase,
    order: &[usize],
    level: &AcceptanceLevel,
    probs: &[Rational],
    checker: &mut SubsetChecker,
) -> AcceptedSet {
    let mut taken: Vec<usize> = Vec::new();
    for &i in order {
        if !level.admits(&probs[i]) {
            continue;
        }
        taken.push(i);
        if !checker.consistent(taken.iter().copied()) {
            taken.pop();
        }
    }
    let accepted = taken
        .into_iter()
        .map(|i| acceptance(base, i, probs[i].clone()))
        .collect();
    AcceptedSet::assemble(base, level, Policy::Sequential, accepted)
}

/// Scans candidates in `order`, accepting each one whose probability
/// conditional on the background and everything accepted so far clears the
/// level.
pub fn teng_accept(
    base: &BeliefBase,
    order: &[String],
    level: &AcceptanceLevel,
) -> Result<AcceptedSet, Error> {
    let order = base.permutation(order)?;
    teng_run(base, &order, level)
}

fn teng_run(base: &BeliefBase, order: &[usize], level: &AcceptanceLevel) -> Result<AcceptedSet, Error> {
    let mut view = base.model().conditioned();
    for b in base.background() {
        view.condition(b)?;
    }
    let mut accepted = Vec::new();
    for &i in order {
        let p = view.probability(base.candidate(i))?;
        if level.admits(&p) {
            view.condition(base.candidate(i))?;
            accepted.push(acceptance(base, i, p));
        }
    }
    Ok(AcceptedSet::assemble(base, level, Policy::Teng, accepted))
}

/// Policies whose outcome depends on the order of candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderedPolicy {
    Sequential,
    Teng,
}

impl From<OrderedPolicy> for Policy {
    fn from(p: OrderedPolicy) -> Policy {
        match p {
            OrderedPolicy::Sequential => Policy::Sequential,
            OrderedPolicy::Teng => Policy::Teng,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extensions {
    pub policy: Policy,
    pub level: AcceptanceLevel,
    /// Distinct accepted sets in order of first appearance.
    pub extensions: Vec<AcceptedSet>,
    pub permutations_run: usize,
    /// Whether every ordering was tried.
    pub exhaustive: bool,
    pub seed: u64,
    /// Union of all extensions; taking them together.
    pub conjunctive: FormulaSet,
    pub conjunctive_consistent: bool,
    /// Intersection of all extensions; what holds in every one of them.
    pub disjunctive: FormulaSet,
}

fn factorial_at_most(n: usize, limit: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k).filter(|&v| v <= limit))
}

/// Lexicographic successor; false once the last ordering is reached.
fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm.iter().rposition(|&x| x > perm[i]).unwrap();
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// Runs an order-dependent policy over candidate orderings: all of them
/// when there are at most `max_permutations`, otherwise that many orderings
/// shuffled from `seed`.
pub fn enumerate_extensions(
    base: &BeliefBase,
    policy: OrderedPolicy,
    level: &AcceptanceLevel,
    max_permutations: usize,
    seed: u64,
) -> Result<Extensions, Error> {
    if max_permutations == 0 {
        return Err(Error::Empty("permutation budget"));
    }
    let n = base.candidates().len();
    let probs = candidate_probabilities(base)?;
    let mut checker = SubsetChecker::new(base.candidates(), base.background());
    let mut run = |order: &[usize]| match policy {
        OrderedPolicy::Sequential => Ok(sequential_run(base, order, level, &probs, &mut checker)),
        OrderedPolicy::Teng => teng_run(base, order, level),
    };

    let mut extensions: Vec<AcceptedSet> = Vec::new();
    let mut record = |set: AcceptedSet| {
        if !extensions.iter().any(|e| e.statements.same_members(&set.statements)) {
            extensions.push(set);
        }
    };
    let exhaustive = factorial_at_most(n, max_permutations).is_some();
    let mut permutations_run = 0;
    let mut order: Vec<usize> = (0..n).collect();
    if exhaustive {
        loop {
            record(run(&order)?);
            permutations_run += 1;
            if !next_permutation(&mut order) {
                break;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..max_permutations {
            order.shuffle(&mut rng);
            record(run(&order)?);
            permutations_run += 1;
        }
    }

    let mut conjunctive = base.background().clone();
    for e in &extensions {
        conjunctive.extend(e.statements.iter().cloned());
    }
    let conjunctive_consistent = logic::is_satisfiable(&conjunctive);
    let disjunctive = extensions
        .iter()
        .skip(1)
        .fold(extensions[0].statements.clone(), |acc, e| acc.intersection(&e.statements));
    Ok(Extensions {
        policy: policy.into(),
        level: level.clone(),
        extensions,
        permutations_run,
        exhaustive,
        seed,
        conjunctive,
        conjunctive_consistent,
        disjunctive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::world::{biased_lottery, fair_lottery, BeliefBase};
    use alloc::string::ToString;
    use alloc::vec;

    fn level(n: i64, d: i64) -> AcceptanceLevel {
        AcceptanceLevel::new(ratio(n, d)).unwrap()
    }

    fn natural(base: &BeliefBase) -> Vec<String> {
        base.labels().to_vec()
    }

    #[test]
    fn stakes_examples() {
        assert_eq!(stakes_threshold(&int(3)).unwrap().threshold(), ratio(3, 4));
        assert_eq!(stakes_threshold(&int(1)).unwrap().threshold(), ratio(1, 2));
        assert_eq!(stakes_threshold(&int(100)).unwrap().threshold(), ratio(100, 101));
        assert!(stakes_threshold(&ratio(1, 2)).is_err());
    }

    #[test]
    fn level_bounds() {
        assert!(AcceptanceLevel::new(int(0)).is_err());
        assert!(AcceptanceLevel::new(int(1)).is_err());
        let strict = level(1, 100).with_strict(true);
        assert!(!strict.admits(&ratio(99, 100)));
        assert!(level(1, 100).admits(&ratio(99, 100)));
    }

    #[test]
    fn threshold_lottery_paradox() {
        let base = fair_lottery(100).unwrap();
        let set = threshold_accept(&base, &level(1, 100)).unwrap();
        assert_eq!(set.accepted.len(), 100);
        assert!(!set.weakly_consistent);
        let none = threshold_accept(&base, &level(1, 200)).unwrap();
        assert!(none.accepted.is_empty());
        assert!(none.weakly_consistent);
    }

    #[test]
    fn threshold_accepts_tautology() {
        let fair = fair_lottery(3).unwrap();
        let base = BeliefBase::new(
            fair.model().clone(),
            fair.background().clone(),
            vec![("T".to_string(), crate::parse("wins_1 | ~wins_1").unwrap())],
        )
        .unwrap();
        let set = threshold_accept(&base, &level(1, 1000)).unwrap();
        assert_eq!(set.order(), vec!["T"]);
    }

    #[test]
    fn lehrer_examples() {
        let fair = fair_lottery(10).unwrap();
        assert!(lehrer_accept(&fair, &level(1, 10)).unwrap().accepted.is_empty());
        let biased = biased_lottery(&[ratio(1, 100), ratio(9, 100), ratio(90, 100)]).unwrap();
        let set = lehrer_accept(&biased, &level(1, 4)).unwrap();
        assert_eq!(set.order(), vec!["L1", "L2"]);
        assert!(set.weakly_consistent);
    }

    #[test]
    fn lehrer_dominance_breaks_unequal_cores() {
        // all three clear 1/2 and are jointly inconsistent; only the most
        // probable survives
        let biased = biased_lottery(&[ratio(1, 10), ratio(2, 10), ratio(7, 10)]).unwrap();
        let set = lehrer_accept(&biased, &level(7, 10)).unwrap();
        assert_eq!(set.order(), vec!["L1"]);
        assert!(set.weakly_consistent);
    }

    #[test]
    fn cascade_examples() {
        let biased = biased_lottery(&[ratio(1, 100), ratio(9, 100), ratio(90, 100)]).unwrap();
        let set = lehrer_cascade(&biased, &level(1, 10)).unwrap();
        assert_eq!(set.order(), vec!["L1", "L2", "not_L3"]);
        assert_eq!(set.accepted[1].probability, ratio(90, 99));
        assert_eq!(set.accepted[2].formula, crate::parse("wins_3").unwrap());
        assert!(set.weakly_consistent);

        let fair = fair_lottery(5).unwrap();
        assert!(lehrer_cascade(&fair, &level(1, 2)).unwrap().accepted.is_empty());

        let one = fair_lottery(1).unwrap();
        let set = lehrer_cascade(&one, &level(1, 2)).unwrap();
        assert_eq!(set.accepted.len(), 1);
        assert_eq!(set.accepted[0].formula, crate::parse("wins_1").unwrap());
    }

    #[test]
    fn sequential_examples() {
        let base = fair_lottery(100).unwrap();
        let lvl = level(1, 100);
        let forward = sequential_accept(&base, &natural(&base), &lvl).unwrap();
        assert_eq!(forward.accepted.len(), 99);
        assert!(!forward.order().contains(&"L100"));
        assert!(forward.weakly_consistent);
        let winner = crate::parse("wins_100").unwrap();
        assert!(logic::entails(&forward.statements, &FormulaSet::new(), &winner));

        let mut reversed = natural(&base);
        reversed.reverse();
        let backward = sequential_accept(&base, &reversed, &lvl).unwrap();
        assert_eq!(backward.accepted.len(), 99);
        assert!(!backward.order().contains(&"L1"));
        assert_eq!(backward.order()[0], "L100");

        let empty = BeliefBase::new(base.model().clone(), base.background().clone(), vec![]).unwrap();
        let set = sequential_accept(&empty, &[], &lvl).unwrap();
        assert!(set.accepted.is_empty());
        assert!(set.statements.same_members(base.background()));

        assert!(matches!(
            sequential_accept(&base, &["L1".to_string()], &lvl),
            Err(Error::NotAPermutation(_))
        ));
    }

    #[test]
    fn teng_examples() {
        let base = fair_lottery(100).unwrap();
        let one = teng_accept(&base, &natural(&base), &level(1, 100)).unwrap();
        assert_eq!(one.order(), vec!["L1"]);
        // after k acceptances the next ticket loses with probability
        // 1 - 1/(100 - k), which clears 1 - 1/50 exactly while k <= 50
        let loose = teng_accept(&base, &natural(&base), &level(1, 50)).unwrap();
        assert_eq!(loose.accepted.len(), 51);
        assert_eq!(loose.accepted[1].probability, ratio(98, 99));
        assert_eq!(loose.accepted[2].probability, ratio(97, 98));
        assert_eq!(loose.accepted[50].probability, ratio(49, 50));
        assert!(one.weakly_consistent && loose.weakly_consistent);
    }

    #[test]
    fn extensions_of_three_ticket_lottery() {
        let base = fair_lottery(3).unwrap();
        let ext = enumerate_extensions(&base, OrderedPolicy::Sequential, &level(1, 3), 720, DEFAULT_SEED)
            .unwrap();
        assert!(ext.exhaustive);
        assert_eq!(ext.permutations_run, 6);
        assert_eq!(ext.extensions.len(), 3);
        assert!(ext.extensions.iter().all(|e| e.accepted.len() == 2));
        assert!(ext.disjunctive.same_members(base.background()));
        assert!(!ext.conjunctive_consistent);
    }

    #[test]
    fn consistent_candidates_have_one_extension() {
        let fair = fair_lottery(4).unwrap();
        let cands = ["~wins_1", "~wins_2", "wins_3 | wins_4"]
            .iter()
            .enumerate()
            .map(|(i, t)| (format!("C{i}"), crate::parse(t).unwrap()))
            .collect();
        let base = BeliefBase::new(fair.model().clone(), fair.background().clone(), cands).unwrap();
        for policy in [OrderedPolicy::Sequential, OrderedPolicy::Teng] {
            let ext = enumerate_extensions(&base, policy, &level(1, 2), 100, 7).unwrap();
            assert_eq!(ext.extensions.len(), 1);
            assert!(ext.conjunctive_consistent);
        }
    }

    #[test]
    fn sampled_extensions_are_reproducible() {
        let base = fair_lottery(8).unwrap();
        let lvl = level(1, 8);
        let a = enumerate_extensions(&base, OrderedPolicy::Sequential, &lvl, 50, 42).unwrap();
        let b = enumerate_extensions(&base, OrderedPolicy::Sequential, &lvl, 50, 42).unwrap();
        assert!(!a.exhaustive);
        assert_eq!(a.permutations_run, 50);
        assert_eq!(a, b);
    }

    #[test]
    fn permutation_successor() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[5], vec![2, 1, 0]);
        assert_eq!(factorial_at_most(4, 24), Some(24));
        assert_eq!(factorial_at_most(5, 24), None);
        assert_eq!(factorial_at_most(0, 1), Some(1));
    }
}
