use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::formula::{Formula, Nnf};
use super::sat::{Cnf, Lit, Solver};

/// Polarity-aware definitional translation. Every subformula gets a
/// literal that implies it; the definition clauses alone are always
/// satisfiable, so asserting a set of formulas is asserting their root
/// literals.
#[derive(Debug, Clone, Default)]
pub struct Encoder {
    cnf: Cnf,
    atoms: BTreeMap<String, u32>,
    defined: BTreeMap<Nnf, Lit>,
}

impl Encoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn root(&mut self, formula: &Formula) -> Lit {
        self.encode(formula.nnf())
    }

    pub fn negated_root(&mut self, formula: &Formula) -> Lit {
        self.encode(&formula.nnf().negate())
    }

    fn encode(&mut self, nnf: &Nnf) -> Lit {
        match nnf {
            Nnf::Lit { atom, positive } => {
                let var = match self.atoms.get(atom) {
                    Some(&v) => v,
                    None => {
                        let v = self.cnf.new_var();
                        self.atoms.insert(atom.clone(), v);
                        v
                    }
                };
                Lit::new(var, *positive)
            }
            Nnf::And(args) | Nnf::Or(args) => {
                if let Some(&lit) = self.defined.get(nnf) {
                    return lit;
                }
                let children: Vec<Lit> = args.iter().map(|a| self.encode(a)).collect();
                let def = Lit::new(self.cnf.new_var(), true);
                if matches!(nnf, Nnf::And(_)) {
                    for child in children {
                        self.cnf.add_clause(alloc::vec![!def, child]);
                    }
                } else {
                    let mut clause = children;
                    clause.push(!def);
                    self.cnf.add_clause(clause);
                }
                self.defined.insert(nnf.clone(), def);
                def
            }
        }
    }

    pub fn solver(&self) -> Solver {
        Solver::new(&self.cnf, false)
    }
}

/// Answers "is this subset of candidates satisfiable together with the
/// background?" against a single shared encoding.
#[derive(Debug, Clone)]
pub struct SubsetChecker {
    solver: Solver,
    background: Vec<Lit>,
    candidates: Vec<Lit>,
}

impl SubsetChecker {
    pub fn new<'a>(
        candidates: impl IntoIterator<Item = &'a Formula>,
        background: impl IntoIterator<Item = &'a Formula>,
    ) -> Self {
        let mut encoder = Encoder::new();
        let background = background.into_iter().map(|f| encoder.root(f)).collect();
        let candidates = candidates.into_iter().map(|f| encoder.root(f)).collect();
        SubsetChecker {
            solver: encoder.solver(),
            background,
            candidates,
        }
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn consistent(&mut self, subset: impl IntoIterator<Item = usize>) -> bool {
        let mut assumptions = self.background.clone();
        assumptions.extend(subset.into_iter().map(|i| self.candidates[i]));
        self.solver.solve(&assumptions).is_some()
    }
}
