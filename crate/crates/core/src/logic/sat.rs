//! Backtracking satisfiability search with unit propagation over clauses.
//!
//! Two watched literals per clause; chronological backtracking; decisions
//! are taken on the lowest unassigned variable with a fixed phase, so runs
//! are fully deterministic.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Not;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Lit {
        Lit(var << 1 | u32::from(!positive))
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_var(&mut self) -> u32 {
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn add_clause(&mut self, mut clause: Vec<Lit>) {
        clause.sort();
        clause.dedup();
        // tautologies constrain nothing
        if clause.windows(2).any(|w| w[0].var() == w[1].var()) {
            return;
        }
        for lit in &clause {
            debug_assert!(lit.var() < self.num_vars);
        }
        self.clauses.push(clause);
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }
}

const UNASSIGNED: i8 = 0;

#[derive(Debug, Clone)]
pub struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    units: Vec<Lit>,
    has_empty: bool,
    watches: Vec<Vec<usize>>,
    assign: Vec<i8>,
    trail: Vec<Lit>,
    qhead: usize,
    phase: bool,
}

struct Decision {
    trail_len: usize,
    lit: Lit,
    flipped: bool,
}

impl Solver {
    /// `phase` is the polarity tried first at every decision.
    pub fn new(cnf: &Cnf, phase: bool) -> Solver {
        let num_vars = cnf.num_vars as usize;
        let mut solver = Solver {
            num_vars,
            clauses: Vec::new(),
            units: Vec::new(),
            has_empty: false,
            watches: vec![Vec::new(); 2 * num_vars],
            assign: vec![UNASSIGNED; num_vars],
            trail: Vec::new(),
            qhead: 0,
            phase,
        };
        for clause in &cnf.clauses {
            match clause.len() {
                0 => solver.has_empty = true,
                1 => solver.units.push(clause[0]),
                _ => {
                    let id = solver.clauses.len();
                    solver.watches[clause[0].index()].push(id);
                    solver.watches[clause[1].index()].push(id);
                    solver.clauses.push(clause.clone());
                }
            }
        }
        solver
    }

    fn value(&self, lit: Lit) -> i8 {
        let v = self.assign[lit.var() as usize];
        if lit.is_positive() {
            v
        } else {
            -v
        }
    }

    fn enqueue(&mut self, lit: Lit) -> bool {
        match self.value(lit) {
            1 => true,
            -1 => false,
            _ => {
                self.assign[lit.var() as usize] = if lit.is_positive() { 1 } else { -1 };
                self.trail.push(lit);
                true
            }
        }
    }

    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let false_lit = !self.trail[self.qhead];
            self.qhead += 1;
            let mut watching = core::mem::take(&mut self.watches[false_lit.index()]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = false;
            while i < watching.len() {
                let id = watching[i];
                i += 1;
                if self.clauses[id][0] == false_lit {
                    self.clauses[id].swap(0, 1);
                }
                let first = self.clauses[id][0];
                if self.value(first) == 1 {
                    watching[j] = id;
                    j += 1;
                    continue;
                }
                let replacement = (2..self.clauses[id].len())
                    .find(|&k| self.value(self.clauses[id][k]) != -1);
                if let Some(k) = replacement {
                    self.clauses[id].swap(1, k);
                    let new_watch = self.clauses[id][1];
                    self.watches[new_watch.index()].push(id);
                    continue;
                }
                watching[j] = id;
                j += 1;
                if !self.enqueue(first) {
                    conflict = true;
                    while i < watching.len() {
                        watching[j] = watching[i];
                        i += 1;
                        j += 1;
                    }
                }
            }
            watching.truncate(j);
            self.watches[false_lit.index()] = watching;
            if conflict {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, trail_len: usize) {
        for lit in self.trail.drain(trail_len..) {
            self.assign[lit.var() as usize] = UNASSIGNED;
        }
        self.qhead = trail_len;
    }

    fn reset(&mut self) {
        self.undo_to(0);
    }

    /// Searches for a model extending `assumptions`. Returns the full
    /// assignment indexed by variable.
    pub fn solve(&mut self, assumptions: &[Lit]) -> Option<Vec<bool>> {
        self.reset();
        if self.has_empty {
            return None;
        }
        for i in 0..self.units.len() {
            if !self.enqueue(self.units[i]) {
                return None;
            }
        }
        for &lit in assumptions {
            if !self.enqueue(lit) {
                return None;
            }
        }
        if !self.propagate() {
            return None;
        }
        let mut decisions: Vec<Decision> = Vec::new();
        let mut cursor = 0;
        loop {
            while cursor < self.num_vars && self.assign[cursor] != UNASSIGNED {
                cursor += 1;
            }
            if cursor == self.num_vars {
                return Some(self.assign.iter().map(|&v| v == 1).collect());
            }
            let lit = Lit::new(cursor as u32, self.phase);
            decisions.push(Decision {
                trail_len: self.trail.len(),
                lit,
                flipped: false,
            });
            self.enqueue(lit);
            while !self.propagate() {
                loop {
                    let decision = decisions.pop()?;
                    self.undo_to(decision.trail_len);
                    if !decision.flipped {
                        decisions.push(Decision {
                            flipped: true,
                            lit: !decision.lit,
                            ..decision
                        });
                        self.enqueue(!decision.lit);
                        break;
                    }
                }
                // everything below the surviving decision level is assigned
                cursor = 0;
            }
        }
    }
}
