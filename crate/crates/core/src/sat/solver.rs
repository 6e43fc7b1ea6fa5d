//! Conflict-driven clause learning with two watched literals, VSIDS
//! activities, first-UIP learning, Luby restarts and phase saving.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Cnf;
use crate::error::{NrdError, Result};

#[derive(Clone, Debug, Default)]
pub struct SolverConfig {
    /// Stop with a budget error after this many conflicts.
    pub conflict_budget: Option<u64>,
    /// Perturbs initial activities; `None` keeps the pure index-ordered tie-break.
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    /// `model[v - 1]` is the value of DIMACS variable `v`.
    Sat(Vec<bool>),
    Unsat,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub restarts: u64,
}

/// Solves `cnf`; deterministic for a fixed configuration.
pub fn solve(cnf: &Cnf, config: &SolverConfig) -> Result<SolveResult> {
    solve_with_stats(cnf, config).map(|(r, _)| r)
}

pub fn solve_with_stats(cnf: &Cnf, config: &SolverConfig) -> Result<(SolveResult, SolverStats)> {
    let mut s = Solver::new(cnf.num_vars(), config);
    for c in &cnf.clauses {
        if !s.add_input_clause(c) {
            return Ok((SolveResult::Unsat, s.stats));
        }
    }
    let r = s.run(config.conflict_budget)?;
    Ok((r, s.stats))
}

type Lit = u32;

#[inline]
fn lit(dimacs: i32) -> Lit {
    let v = dimacs.unsigned_abs() - 1;
    2 * v + u32::from(dimacs < 0)
}

#[inline]
fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

#[inline]
fn neg(l: Lit) -> Lit {
    l ^ 1
}

const UNASSIGNED: i8 = -1;

struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    head: usize,
    activity: Vec<f64>,
    increment: f64,
    phase: Vec<bool>,
    seen: Vec<bool>,
    stats: SolverStats,
}

impl Solver {
    fn new(n: usize, config: &SolverConfig) -> Self {
        let mut activity = vec![0.0; n];
        if let Some(seed) = config.seed {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for a in activity.iter_mut() {
                *a = rng.gen::<f64>() * 1e-3;
            }
        }
        Solver {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            value: vec![UNASSIGNED; n],
            level: vec![0; n],
            reason: vec![None; n],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            head: 0,
            activity,
            increment: 1.0,
            phase: vec![false; n],
            seen: vec![false; n],
            stats: SolverStats::default(),
        }
    }

    #[inline]
    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[var(l)];
        if v == UNASSIGNED {
            UNASSIGNED
        } else {
            v ^ (l & 1) as i8
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn assign(&mut self, l: Lit, reason: Option<usize>) {
        let v = var(l);
        self.value[v] = i8::from(l & 1 == 0);
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds an input clause at level 0; returns false if the formula became trivially unsatisfiable.
    fn add_input_clause(&mut self, dimacs: &[i32]) -> bool {
        let mut c: Vec<Lit> = dimacs.iter().map(|&d| lit(d)).collect();
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] == neg(w[1])) {
            return true;
        }
        c.retain(|&l| self.lit_value(l) != 0);
        if c.iter().any(|&l| self.lit_value(l) == 1) {
            return true;
        }
        match c.len() {
            0 => false,
            1 => {
                self.assign(c[0], None);
                self.propagate().is_none()
            }
            _ => {
                self.attach(c);
                true
            }
        }
    }

    fn attach(&mut self, c: Vec<Lit>) -> usize {
        let idx = self.clauses.len();
        self.watches[c[0] as usize].push(idx);
        self.watches[c[1] as usize].push(idx);
        self.clauses.push(c);
        idx
    }

    /// Unit propagation; returns a conflicting clause index.
    fn propagate(&mut self) -> Option<usize> {
        while self.head < self.trail.len() {
            let p = self.trail[self.head];
            self.head += 1;
            self.stats.propagations += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                let clause = &mut self.clauses[ci];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.value_of(first) == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[ci].len() {
                    let l = self.clauses[ci][k];
                    if self.value_of(l) != 0 {
                        self.clauses[ci].swap(1, k);
                        self.watches[l as usize].push(ci);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if self.value_of(first) == 0 {
                    conflict = Some(ci);
                    break;
                }
                self.assign(first, Some(ci));
                i += 1;
            }
            self.watches[false_lit as usize] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    #[inline]
    fn value_of(&self, l: Lit) -> i8 {
        self.lit_value(l)
    }

    /// First-UIP conflict analysis: returns the learnt clause (asserting literal first) and backjump level.
    fn analyze(&mut self, mut conflict: usize) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut counter = 0;
        let mut index = self.trail.len();
        let mut p: Option<Lit> = None;
        loop {
            let start = usize::from(p.is_some());
            let clause = self.clauses[conflict].clone();
            for &q in &clause[start..] {
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= self.decision_level() {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[var(self.trail[index])] {
                    break;
                }
            }
            let pl = self.trail[index];
            p = Some(pl);
            self.seen[var(pl)] = false;
            counter -= 1;
            if counter == 0 {
                break;
            }
            conflict = self.reason[var(pl)].expect("non-decision literal has a reason");
        }
        learnt[0] = neg(p.unwrap());
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[var(learnt[i])] > self.level[var(learnt[max_i])] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            back = self.level[var(learnt[1])];
        }
        (learnt, back)
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.increment;
        if self.activity[v] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.increment *= 1e-100;
        }
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for &l in &self.trail[lim..] {
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.value[v] = UNASSIGNED;
            self.reason[v] = None;
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.head = lim;
    }

    /// Unassigned variable with the highest activity, ties to the lowest index.
    fn pick_branch(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for v in 0..self.value.len() {
            if self.value[v] == UNASSIGNED && best.is_none_or(|b| self.activity[v] > self.activity[b]) {
                best = Some(v);
            }
        }
        best
    }

    fn run(&mut self, budget: Option<u64>) -> Result<SolveResult> {
        if self.propagate().is_some() {
            return Ok(SolveResult::Unsat);
        }
        let mut restart_index = 1u64;
        let mut conflicts_until_restart = 100 * luby(restart_index);
        loop {
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                if budget.is_some_and(|b| self.stats.conflicts > b) {
                    return Err(NrdError::Budget { what: format!("SAT solver conflict budget of {}", budget.unwrap()), lower_bound: None });
                }
                if self.decision_level() == 0 {
                    return Ok(SolveResult::Unsat);
                }
                let (learnt, back) = self.analyze(conflict);
                self.backtrack(back);
                if learnt.len() == 1 {
                    self.assign(learnt[0], None);
                } else {
                    let asserting = learnt[0];
                    let ci = self.attach(learnt);
                    self.assign(asserting, Some(ci));
                }
                self.increment /= 0.95;
                conflicts_until_restart = conflicts_until_restart.saturating_sub(1);
            } else {
                if conflicts_until_restart == 0 {
                    self.stats.restarts += 1;
                    restart_index += 1;
                    conflicts_until_restart = 100 * luby(restart_index);
                    self.backtrack(0);
                    continue;
                }
                let Some(v) = self.pick_branch() else {
                    let model = self.value.iter().map(|&x| x == 1).collect();
                    return Ok(SolveResult::Sat(model));
                };
                self.stats.decisions += 1;
                self.trail_lim.push(self.trail.len());
                let l = 2 * v as u32 + u32::from(!self.phase[v]);
                self.assign(l, None);
            }
        }
    }
}

/// The Luby restart sequence 1, 1, 2, 1, 1, 2, 4, … (1-indexed).
fn luby(mut i: u64) -> u64 {
    loop {
        let mut k = 1;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if (1u64 << k) - 1 == i {
            return 1 << (k - 1);
        }
        i -= (1 << (k - 1)) - 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::VarTag;

    fn cnf(n: usize, clauses: &[&[i32]]) -> Cnf {
        let mut f = Cnf::new();
        for i in 0..n {
            f.add_var(VarTag::Aux(i.to_string()));
        }
        for c in clauses {
            f.add_clause(c.to_vec());
        }
        f
    }

    #[test]
    fn contradiction_is_unsat() {
        assert_eq!(solve(&cnf(1, &[&[1], &[-1]]), &SolverConfig::default()).unwrap(), SolveResult::Unsat);
    }

    #[test]
    fn empty_clause_is_unsat() {
        assert_eq!(solve(&cnf(1, &[&[]]), &SolverConfig::default()).unwrap(), SolveResult::Unsat);
    }

    #[test]
    fn model_satisfies_formula() {
        let f = cnf(3, &[&[1, 2], &[-1, 3], &[-2, -3], &[2, 3]]);
        let SolveResult::Sat(m) = solve(&f, &SolverConfig::default()).unwrap() else { panic!() };
        assert!(f.satisfied_by(&m));
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        // p(i,h) = 2i + h + 1
        let mut clauses: Vec<Vec<i32>> = (0..3).map(|i| vec![2 * i + 1, 2 * i + 2]).collect();
        for h in 0..2 {
            for a in 0..3 {
                for b in a + 1..3 {
                    clauses.push(vec![-(2 * a + h + 1), -(2 * b + h + 1)]);
                }
            }
        }
        let refs: Vec<&[i32]> = clauses.iter().map(Vec::as_slice).collect();
        assert_eq!(solve(&cnf(6, &refs), &SolverConfig::default()).unwrap(), SolveResult::Unsat);
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (1..=15).map(luby).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn budget_is_reported() {
        let mut clauses: Vec<Vec<i32>> = (0..6).map(|i| vec![5 * i + 1, 5 * i + 2, 5 * i + 3, 5 * i + 4, 5 * i + 5]).collect();
        for h in 0..5 {
            for a in 0..6 {
                for b in a + 1..6 {
                    clauses.push(vec![-(5 * a + h + 1), -(5 * b + h + 1)]);
                }
            }
        }
        let refs: Vec<&[i32]> = clauses.iter().map(Vec::as_slice).collect();
        let r = solve(&cnf(30, &refs), &SolverConfig { conflict_budget: Some(2), seed: None });
        assert!(matches!(r, Err(NrdError::Budget { .. })));
    }
}
