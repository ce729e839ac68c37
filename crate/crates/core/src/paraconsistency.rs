//! Working with a weakly inconsistent set instead of repairing it: the
//! degree of inconsistency (fewest consistent subsets covering the set) and
//! strands (maximal consistent subsets queried through their closure).

use alloc::format;
use alloc::vec::Vec;

use crate::error::Error;
use crate::logic::{self, Formula, FormulaSet, SubsetChecker};

/// A maximal consistent subset of the candidates together with the
/// background. Its deductive closure is infinite, so it is only ever
/// queried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    kernel: FormulaSet,
    background: FormulaSet,
}

impl Strand {
    pub fn kernel(&self) -> &FormulaSet {
        &self.kernel
    }

    pub fn background(&self) -> &FormulaSet {
        &self.background
    }

    /// Whether `formula` lies in the strand's closure.
    pub fn entails(&self, formula: &Formula) -> bool {
        logic::entails(&self.background, &self.kernel, formula)
    }
}

pub fn strand_entails(strand: &Strand, formula: &Formula) -> bool {
    strand.entails(formula)
}

/// One strand per maximal consistent subset, in enumeration order.
pub fn strands(
    candidates: &FormulaSet,
    background: &FormulaSet,
    cap: usize,
) -> Result<Vec<Strand>, Error> {
    Ok(logic::maximal_consistent_subsets(candidates, background, cap)?
        .into_iter()
        .map(|kernel| Strand {
            kernel,
            background: background.clone(),
        })
        .collect())
}

/// Fewest background-consistent subsets whose union is all of
/// `candidates`; 1 for a consistent (or empty) set.
pub fn degree_of_inconsistency(
    candidates: &FormulaSet,
    background: &FormulaSet,
    cap: usize,
) -> Result<usize, Error> {
    let mut checker = SubsetChecker::new(candidates, background);
    if !checker.consistent([]) {
        return Err(Error::UnsatisfiableBackground);
    }
    for (i, c) in candidates.iter().enumerate() {
        if !checker.consistent([i]) {
            return Err(Error::InconsistentCandidate(format!("{c}")));
        }
    }
    let families = logic::subset_families(candidates, background, cap)?;
    let cover = minimum_cover(candidates.len(), &families.maximal_consistent);
    Ok(cover.len().max(1))
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Bits {
        Bits(alloc::vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Bits {
        let mut b = Bits::empty(n);
        (0..n).for_each(|i| b.set(i));
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn has(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn overlap(&self, other: &Bits) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn minus(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
}

/// Exact minimum set cover of `0..universe` by branch and bound. Returns
/// indices into `sets`; panics if some element is in no set.
pub fn minimum_cover(universe: usize, sets: &[Vec<usize>]) -> Vec<usize> {
    let bits: Vec<Bits> = sets
        .iter()
        .map(|s| {
            let mut b = Bits::empty(universe);
            s.iter().for_each(|&i| b.set(i));
            b
        })
        .collect();
    let all = Bits::full(universe);

    // greedy start gives the first incumbent
    let mut best = Vec::new();
    let mut left = all.clone();
    while !left.is_empty() {
        let pick = (0..bits.len())
            .max_by_key(|&s| (bits[s].overlap(&left), core::cmp::Reverse(s)))
            .expect("no sets");
        assert!(bits[pick].overlap(&left) > 0, "element outside every set");
        left = left.minus(&bits[pick]);
        best.push(pick);
    }
    let mut chosen = Vec::new();
    branch(&bits, &all, &mut chosen, &mut best);
    best.sort_unstable();
    best
}

fn branch(sets: &[Bits], uncovered: &Bits, chosen: &mut Vec<usize>, best: &mut Vec<usize>) {
    if uncovered.is_empty() {
        if chosen.len() < best.len() {
            *best = chosen.clone();
        }
        return;
    }
    let widest = sets.iter().map(|s| s.overlap(uncovered)).max().unwrap_or(0);
    if widest == 0 {
        return;
    }
    let lower = uncovered.count().div_ceil(widest);
    if chosen.len() + lower >= best.len() {
        return;
    }
    // branch on the element with the fewest covering sets
    let universe = uncovered.0.len() * 64;
    let element = (0..universe)
        .filter(|&e| uncovered.has(e))
        .min_by_key(|&e| sets.iter().filter(|s| s.has(e)).count())
        .unwrap();
    let mut options: Vec<usize> = (0..sets.len()).filter(|&s| sets[s].has(element)).collect();
    options.sort_by_key(|&s| core::cmp::Reverse(sets[s].overlap(uncovered)));
    for s in options {
        chosen.push(s);
        branch(sets, &uncovered.minus(&sets[s]), chosen, best);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::DEFAULT_CAP;
    use crate::parse;
    use crate::world::fair_lottery;
    use alloc::vec;

    fn set(texts: &[&str]) -> FormulaSet {
        texts.iter().map(|t| parse(t).unwrap()).collect()
    }

    /// Smallest k such that some k sets cover the universe, by trying every
    /// combination.
    fn brute_cover(universe: usize, sets: &[Vec<usize>]) -> usize {
        let m = sets.len();
        (0u32..1 << m)
            .filter(|mask| {
                (0..universe).all(|e| (0..m).any(|s| mask >> s & 1 == 1 && sets[s].contains(&e)))
            })
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn cover_matches_brute_force() {
        let families: [(usize, Vec<Vec<usize>>); 3] = [
            (5, vec![vec![0, 1, 2], vec![2, 3], vec![3, 4], vec![0, 4], vec![1]]),
            (6, vec![vec![0, 1], vec![2, 3], vec![4, 5], vec![0, 2, 4], vec![1, 3, 5]]),
            (4, vec![vec![0], vec![1], vec![2], vec![3], vec![0, 1, 2]]),
        ];
        for (n, sets) in families {
            assert_eq!(minimum_cover(n, &sets).len(), brute_cover(n, &sets));
        }
    }

    #[test]
    fn degree_examples() {
        let none = FormulaSet::new();
        assert_eq!(degree_of_inconsistency(&set(&["a", "b | c"]), &none, DEFAULT_CAP), Ok(1));
        assert_eq!(degree_of_inconsistency(&set(&["a", "~a"]), &none, DEFAULT_CAP), Ok(2));
        let lottery = fair_lottery(5).unwrap();
        assert_eq!(
            degree_of_inconsistency(lottery.candidates(), lottery.background(), DEFAULT_CAP),
            Ok(2)
        );
        assert_eq!(degree_of_inconsistency(&none, &none, DEFAULT_CAP), Ok(1));
    }

    #[test]
    fn degree_errors() {
        let none = FormulaSet::new();
        assert!(matches!(
            degree_of_inconsistency(&set(&["a & ~a", "b"]), &none, DEFAULT_CAP),
            Err(Error::InconsistentCandidate(_))
        ));
        assert_eq!(
            degree_of_inconsistency(&set(&["a"]), &set(&["b & ~b"]), DEFAULT_CAP),
            Err(Error::UnsatisfiableBackground)
        );
    }

    #[test]
    fn lottery_strands() {
        let lottery = fair_lottery(3).unwrap();
        let strands = strands(lottery.candidates(), lottery.background(), DEFAULT_CAP).unwrap();
        assert_eq!(strands.len(), 3);
        assert!(strands.iter().all(|s| s.kernel().len() == 2));
        let first = &strands[0];
        assert!(first.kernel().same_members(&set(&["~wins_1", "~wins_2"])));
        assert!(strand_entails(first, &parse("wins_3").unwrap()));
        for s in &strands {
            assert!(s.kernel().iter().all(|k| s.entails(k)));
            assert!(!s.entails(&parse("wins_1 & ~wins_1").unwrap()));
        }
    }

    #[test]
    fn degenerate_strands() {
        let none = FormulaSet::new();
        let consistent = set(&["a", "b"]);
        let single = strands(&consistent, &none, DEFAULT_CAP).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].kernel(), &consistent);
        let empty = strands(&none, &none, DEFAULT_CAP).unwrap();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].kernel().is_empty());
        assert!(!empty[0].entails(&parse("a").unwrap()));
        assert!(strands(&consistent, &set(&["c & ~c"]), DEFAULT_CAP).is_err());
    }
}
