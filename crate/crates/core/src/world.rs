//! Finite possible-worlds probability models with exact weights, belief
//! bases built on them, and the lottery families.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::logic::{is_identifier, Expr, Formula, FormulaSet, Nnf};
use crate::rational::{int, Rational};

/// Largest ticket count accepted by [`independent_lottery`].
pub const INDEPENDENT_LOTTERY_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    pub valuation: Vec<bool>,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldModel {
    atoms: Vec<String>,
    index: BTreeMap<String, usize>,
    worlds: Vec<World>,
}

/// A formula resolved against a model's atom positions.
enum Compiled {
    Lit(usize, bool),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
}

impl Compiled {
    fn holds(&self, valuation: &[bool]) -> bool {
        match self {
            Compiled::Lit(i, positive) => valuation[*i] == *positive,
            Compiled::And(args) => args.iter().all(|a| a.holds(valuation)),
            Compiled::Or(args) => args.iter().any(|a| a.holds(valuation)),
        }
    }
}

impl WorldModel {
    pub fn new(atoms: Vec<String>, worlds: Vec<World>) -> Result<WorldModel, Error> {
        let invalid = |msg: String| Err(Error::InvalidModel(msg));
        let mut index = BTreeMap::new();
        for (i, atom) in atoms.iter().enumerate() {
            if !is_identifier(atom) {
                return invalid(format!("`{atom}` is not an identifier"));
            }
            if index.insert(atom.clone(), i).is_some() {
                return invalid(format!("atom `{atom}` listed twice"));
            }
        }
        if worlds.is_empty() {
            return invalid("no worlds".into());
        }
        let mut seen = BTreeSet::new();
        let mut total = Rational::zero();
        for (i, world) in worlds.iter().enumerate() {
            if world.valuation.len() != atoms.len() {
                return invalid(format!("world {} does not value every atom", i + 1));
            }
            if world.weight.is_negative() {
                return invalid(format!("world {} has negative weight", i + 1));
            }
            if !seen.insert(world.valuation.clone()) {
                return invalid(format!("world {} repeats an earlier valuation", i + 1));
            }
            total += &world.weight;
        }
        if !total.is_one() {
            return invalid(format!("weights sum to {total}, not 1"));
        }
        Ok(WorldModel {
            atoms,
            index,
            worlds,
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn has_atom(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    fn compile(&self, nnf: &Nnf) -> Result<Compiled, Error> {
        Ok(match nnf {
            Nnf::Lit { atom, positive } => {
                let i = *self
                    .index
                    .get(atom)
                    .ok_or_else(|| Error::UnknownAtom(atom.clone()))?;
                Compiled::Lit(i, *positive)
            }
            Nnf::And(args) => {
                Compiled::And(args.iter().map(|a| self.compile(a)).collect::<Result<_, _>>()?)
            }
            Nnf::Or(args) => {
                Compiled::Or(args.iter().map(|a| self.compile(a)).collect::<Result<_, _>>()?)
            }
        })
    }

    /// Which worlds satisfy `formula`.
    pub fn satisfying(&self, formula: &Formula) -> Result<Vec<bool>, Error> {
        let compiled = self.compile(formula.nnf())?;
        Ok(self
            .worlds
            .iter()
            .map(|w| compiled.holds(&w.valuation))
            .collect())
    }

    fn mass(&self, mask: &[bool]) -> Rational {
        self.worlds
            .iter()
            .zip(mask)
            .filter(|(_, &keep)| keep)
            .fold(Rational::zero(), |acc, (w, _)| acc + &w.weight)
    }

    /// Exact total weight of the worlds satisfying `formula`.
    pub fn probability(&self, formula: &Formula) -> Result<Rational, Error> {
        Ok(self.mass(&self.satisfying(formula)?))
    }

    /// `P(formula ∧ ⋀given) / P(⋀given)`.
    pub fn conditional_probability(
        &self,
        formula: &Formula,
        given: &FormulaSet,
    ) -> Result<Rational, Error> {
        let mut view = self.conditioned();
        for g in given {
            view.condition(g)?;
        }
        view.probability(formula)
    }

    pub fn conditioned(&self) -> Conditioned<'_> {
        Conditioned {
            model: self,
            alive: vec![true; self.worlds.len()],
            mass: Rational::one(),
        }
    }
}

/// The model restricted to the worlds satisfying everything conditioned on
/// so far.
#[derive(Debug, Clone)]
pub struct Conditioned<'a> {
    model: &'a WorldModel,
    alive: Vec<bool>,
    mass: Rational,
}

impl Conditioned<'_> {
    pub fn mass(&self) -> &Rational {
        &self.mass
    }

    pub fn condition(&mut self, formula: &Formula) -> Result<(), Error> {
        let sat = self.model.satisfying(formula)?;
        for (alive, s) in self.alive.iter_mut().zip(sat) {
            *alive &= s;
        }
        self.mass = self.model.mass(&self.alive);
        Ok(())
    }

    pub fn probability(&self, formula: &Formula) -> Result<Rational, Error> {
        if self.mass.is_zero() {
            return Err(Error::ZeroProbabilityCondition);
        }
        let sat = self.model.satisfying(formula)?;
        let joint: Vec<bool> = self.alive.iter().zip(sat).map(|(a, s)| *a && s).collect();
        Ok(self.model.mass(&joint) / &self.mass)
    }
}

/// An interval-valued probability; points are degenerate intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityBound {
    lower: Rational,
    upper: Rational,
}

impl ProbabilityBound {
    pub fn new(lower: Rational, upper: Rational) -> Result<Self, Error> {
        let unit = |r: &Rational| !r.is_negative() && *r <= Rational::one();
        if !unit(&lower) || !unit(&upper) || lower > upper {
            return Err(Error::InvalidModel(format!(
                "[{lower}, {upper}] is not a probability interval"
            )));
        }
        Ok(ProbabilityBound { lower, upper })
    }

    pub fn point(value: Rational) -> Result<Self, Error> {
        Self::new(value.clone(), value)
    }

    pub fn lower(&self) -> &Rational {
        &self.lower
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }
}

/// A world model with certain background knowledge and labelled
/// candidates for acceptance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeliefBase {
    model: WorldModel,
    background: FormulaSet,
    candidates: FormulaSet,
    labels: Vec<String>,
}

impl BeliefBase {
    pub fn new(
        model: WorldModel,
        background: FormulaSet,
        candidates: Vec<(String, Formula)>,
    ) -> Result<BeliefBase, Error> {
        let invalid = |msg: String| Err(Error::InvalidBase(msg));
        for f in &background {
            match model.probability(f) {
                Ok(p) if p.is_one() => {}
                Ok(p) => return invalid(format!("background `{f}` has probability {p}, not 1")),
                Err(e) => return Err(e),
            }
        }
        let mut set = FormulaSet::new();
        let mut labels = Vec::with_capacity(candidates.len());
        for (label, formula) in candidates {
            if !is_identifier(&label) {
                return invalid(format!("label `{label}` is not an identifier"));
            }
            if labels.contains(&label) {
                return invalid(format!("label `{label}` used twice"));
            }
            if let Some(atom) = formula.atoms().into_iter().find(|a| !model.has_atom(a)) {
                return Err(Error::UnknownAtom(atom.to_string()));
            }
            if !set.insert(formula.clone()) {
                return invalid(format!("candidate `{label}` duplicates an earlier formula"));
            }
            labels.push(label);
        }
        Ok(BeliefBase {
            model,
            background,
            candidates: set,
            labels,
        })
    }

    pub fn model(&self) -> &WorldModel {
        &self.model
    }

    pub fn background(&self) -> &FormulaSet {
        &self.background
    }

    pub fn candidates(&self) -> &FormulaSet {
        &self.candidates
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_of(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn candidate(&self, index: usize) -> &Formula {
        &self.candidates.as_slice()[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Resolves a list of labels to candidate indices, requiring a
    /// permutation of all candidates.
    pub fn permutation(&self, order: &[String]) -> Result<Vec<usize>, Error> {
        let mut seen = vec![false; self.labels.len()];
        let mut out = Vec::with_capacity(order.len());
        for label in order {
            let i = self
                .index_of(label)
                .ok_or_else(|| Error::NotAPermutation(format!("unknown label `{label}`")))?;
            if core::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAPermutation(format!("`{label}` listed twice")));
            }
            out.push(i);
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::NotAPermutation(format!("`{}` missing", self.labels[i])));
        }
        Ok(out)
    }
}

fn ticket_atoms(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("wins_{i}")).collect()
}

fn atom_expr(name: &str) -> Expr {
    Expr::Atom(name.to_owned())
}

fn any_wins(atoms: &[String]) -> Expr {
    match atoms {
        [single] => atom_expr(single),
        _ => Expr::Or(atoms.iter().map(|a| atom_expr(a)).collect()),
    }
}

/// `wins_1 | … | wins_n` conjoined with `wins_i -> ~wins_j & …` for each
/// ticket.
fn exactly_one_wins(atoms: &[String]) -> Formula {
    if atoms.len() == 1 {
        return Formula::var(&atoms[0]);
    }
    let mut parts = vec![any_wins(atoms)];
    for (i, winner) in atoms.iter().enumerate() {
        let others: Vec<Expr> = atoms
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, a)| Expr::Not(Box::new(atom_expr(a))))
            .collect();
        let losers = if others.len() == 1 {
            others.into_iter().next().unwrap()
        } else {
            Expr::And(others)
        };
        parts.push(Expr::Implies(Box::new(atom_expr(winner)), Box::new(losers)));
    }
    Formula::new(Expr::And(parts))
}

fn lose_candidates(atoms: &[String]) -> Vec<(String, Formula)> {
    atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (format!("L{}", i + 1), Formula::var(a).negate()))
        .collect()
}

/// One winning ticket out of `weights.len()`, ticket `i` winning with
/// probability `weights[i]`.
pub fn biased_lottery(weights: &[Rational]) -> Result<BeliefBase, Error> {
    if weights.is_empty() {
        return Err(Error::InvalidLottery("a lottery needs at least one ticket".into()));
    }
    if weights.iter().any(Signed::is_negative) {
        return Err(Error::InvalidLottery("negative ticket weight".into()));
    }
    let total = weights.iter().fold(Rational::zero(), |acc, w| acc + w);
    if !total.is_one() {
        return Err(Error::InvalidLottery(format!("weights sum to {total}, not 1")));
    }
    let n = weights.len();
    let atoms = ticket_atoms(n);
    let worlds = weights
        .iter()
        .enumerate()
        .map(|(i, w)| World {
            valuation: (0..n).map(|j| j == i).collect(),
            weight: w.clone(),
        })
        .collect();
    let model = WorldModel::new(atoms.clone(), worlds)?;
    let background = core::iter::once(exactly_one_wins(&atoms)).collect();
    BeliefBase::new(model, background, lose_candidates(&atoms))
}

/// The fair `n`-ticket lottery: exactly one ticket wins, all equally likely.
pub fn fair_lottery(n: usize) -> Result<BeliefBase, Error> {
    if n == 0 {
        return Err(Error::InvalidLottery("a lottery needs at least one ticket".into()));
    }
    let share = Rational::new(1.into(), (n as u64).into());
    biased_lottery(&vec![share; n])
}

/// `n` tickets each winning independently with probability `p`; any number
/// may win. Candidates are every `L_i` plus `some_wins`.
pub fn independent_lottery(n: usize, p: &Rational) -> Result<BeliefBase, Error> {
    if n == 0 || n > INDEPENDENT_LOTTERY_CAP {
        return Err(Error::InvalidLottery(format!(
            "ticket count must be in 1..={INDEPENDENT_LOTTERY_CAP}, got {n}"
        )));
    }
    if !p.is_positive() || *p >= Rational::one() {
        return Err(Error::InvalidLottery(format!("p must lie strictly between 0 and 1, got {p}")));
    }
    let q = int(1) - p;
    let mut p_pow = vec![Rational::one()];
    let mut q_pow = vec![Rational::one()];
    for k in 0..n {
        p_pow.push(&p_pow[k] * p);
        q_pow.push(&q_pow[k] * &q);
    }
    let atoms = ticket_atoms(n);
    let worlds = (0u32..1 << n)
        .map(|mask| {
            let winners = mask.count_ones() as usize;
            World {
                valuation: (0..n).map(|i| mask >> i & 1 == 1).collect(),
                weight: &p_pow[winners] * &q_pow[n - winners],
            }
        })
        .collect();
    let model = WorldModel::new(atoms.clone(), worlds)?;
    let mut candidates = lose_candidates(&atoms);
    candidates.push(("some_wins".into(), Formula::new(any_wins(&atoms))));
    BeliefBase::new(model, FormulaSet::new(), candidates)
}
