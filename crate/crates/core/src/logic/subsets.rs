//! Exhaustive enumeration of minimal unsatisfiable and maximal satisfiable
//! subsets.
//!
//! Both families are produced together by exploring the powerset through a
//! map formula over one selector per candidate. Each satisfiable seed is
//! grown to a maximal satisfiable subset and blocked downward; each
//! unsatisfiable seed is shrunk to a minimal unsatisfiable subset and
//! blocked upward. The search ends when the map has no model, at which
//! point both families are complete. Cost tracks the size of the output
//! rather than the size of the powerset.

use alloc::vec::Vec;

use super::encode::SubsetChecker;
use super::sat::{Cnf, Lit, Solver};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubsetFamilies {
    /// Minimal unsatisfiable subsets, as sorted candidate indices.
    pub unsat_cores: Vec<Vec<usize>>,
    /// Maximal satisfiable subsets, as sorted candidate indices.
    pub maximal_consistent: Vec<Vec<usize>>,
}

impl SubsetFamilies {
    pub fn smallest_core(&self) -> Option<usize> {
        self.unsat_cores.iter().map(Vec::len).min()
    }
}

/// Assumes the background alone is satisfiable.
pub fn enumerate(checker: &mut SubsetChecker) -> SubsetFamilies {
    let n = checker.len();
    let mut map = Cnf::new();
    for _ in 0..n {
        map.new_var();
    }
    let mut families = SubsetFamilies::default();
    // preferring `true` yields large seeds
    while let Some(model) = Solver::new(&map, true).solve(&[]) {
        let seed: Vec<usize> = (0..n).filter(|&i| model[i]).collect();
        if checker.consistent(seed.iter().copied()) {
            let grown = grow(checker, seed, n);
            let block: Vec<Lit> = (0..n)
                .filter(|i| grown.binary_search(i).is_err())
                .map(|i| Lit::new(i as u32, true))
                .collect();
            families.maximal_consistent.push(grown);
            if block.is_empty() {
                break;
            }
            map.add_clause(block);
        } else {
            let core = shrink(checker, seed);
            map.add_clause(core.iter().map(|&i| Lit::new(i as u32, false)).collect());
            families.unsat_cores.push(core);
        }
    }
    families.unsat_cores.sort();
    families.maximal_consistent.sort();
    families
}

fn grow(checker: &mut SubsetChecker, mut subset: Vec<usize>, n: usize) -> Vec<usize> {
    for i in 0..n {
        if subset.binary_search(&i).is_ok() {
            continue;
        }
        subset.push(i);
        if !checker.consistent(subset.iter().copied()) {
            subset.pop();
        }
    }
    subset.sort_unstable();
    subset
}

fn shrink(checker: &mut SubsetChecker, mut subset: Vec<usize>) -> Vec<usize> {
    let mut i = 0;
    while i < subset.len() {
        let removed = subset.remove(i);
        if checker.consistent(subset.iter().copied()) {
            subset.insert(i, removed);
            i += 1;
        }
    }
    subset
}
