//! Genetic search over schedules.
//!
//! The chromosome holds one gene per interval in which some node can receive
//! key; intervals where nothing can be delivered are filled in afterwards so
//! that they never cost anything. The gap before each gene (in intervals,
//! capped at the switch length) is kept so that feasibility can be checked
//! and repaired on the compressed string.

use super::exact::{solve_exact, solve_greedy};
use super::{evaluate, kl_raw, Activity, SchedError, Schedule, StrategyConfig, StrategyKind, SwitchRule};
use crate::qkd::KeyMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    pub elitism: usize,
    pub tournament: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 200,
            generations: 500,
            crossover_rate: 0.8,
            mutation_rate: 0.02,
            elitism: 2,
            tournament: 2,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), SchedError> {
        let bad = |m: &str| Err(SchedError::Config(m.into()));
        if self.population < 2 {
            return bad("population must be at least 2");
        }
        if self.generations == 0 {
            return bad("generations must be positive");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) || !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad("crossover and mutation rates must lie in [0, 1]");
        }
        if self.elitism >= self.population {
            return bad("elitism must be smaller than the population");
        }
        if self.tournament == 0 {
            return bad("tournament size must be positive");
        }
        Ok(())
    }
}

type Gene = u32;
const IDLE: Gene = 0;
const SWITCH: Gene = 1;
const NONE: Gene = Gene::MAX;

fn node_gene(n: usize) -> Gene {
    n as Gene + 2
}

struct Problem {
    n: usize,
    k: usize,
    m: usize,
    /// Interval index of each gene.
    rows: Vec<usize>,
    /// Intervals skipped before each gene, capped at `k`.
    gaps: Vec<usize>,
    /// `values[i * n + node]`: fitness contribution of serving `node` at gene `i`.
    values: Vec<f64>,
    /// Nodes with positive contribution at each gene.
    useful: Vec<Vec<Gene>>,
}

impl Problem {
    fn new(km: &KeyMatrix, weights: &[f64], rule: &SwitchRule) -> Self {
        let n = km.n_nodes();
        let mut rows = Vec::new();
        let mut gaps = Vec::new();
        let mut values = Vec::new();
        let mut useful = Vec::new();
        let mut last: Option<usize> = None;
        for m in 0..km.n_intervals() {
            let row: Vec<f64> = km.row(m).iter().zip(weights).map(|(v, w)| v * w).collect();
            if row.iter().all(|&v| v <= 0.0) {
                continue;
            }
            let gap = match last {
                Some(l) => m - l - 1,
                None => m,
            };
            gaps.push(gap.min(rule.intervals));
            rows.push(m);
            useful.push((0..n).filter(|&j| row[j] > 0.0).map(node_gene).collect());
            values.extend(row);
            last = Some(m);
        }
        Self { n, k: rule.intervals, m: km.n_intervals(), rows, gaps, values, useful }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Replace every gene that violates the switching rule by a switch.
    fn repair(&self, genes: &mut [Gene]) {
        let mut prefix = true;
        let mut run = 0usize;
        let mut prev = NONE;
        for (i, g) in genes.iter_mut().enumerate() {
            let gap = self.gaps[i];
            if *g >= 2 && !(prefix || prev == *g || run + gap >= self.k) {
                *g = SWITCH;
            }
            match *g {
                SWITCH => run = (run + gap + 1).min(self.k),
                IDLE => {
                    prefix = false;
                    run = 0;
                }
                _ => {
                    prefix = false;
                    run = 0;
                }
            }
            prev = *g;
        }
    }

    fn totals(&self, genes: &[Gene], out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        for (i, &g) in genes.iter().enumerate() {
            if g >= 2 {
                let node = (g - 2) as usize;
                out[node] += self.values[i * self.n + node];
            }
        }
    }

    fn compress(&self, s: &Schedule) -> Vec<Gene> {
        let mut genes: Vec<Gene> = self
            .rows
            .iter()
            .map(|&m| match s.assignment[m] {
                Activity::Idle => IDLE,
                Activity::Switch => SWITCH,
                Activity::Node(n) => node_gene(n),
            })
            .collect();
        self.repair(&mut genes);
        genes
    }

    fn decompress(&self, genes: &[Gene]) -> Schedule {
        let act = |g: Gene| match g {
            IDLE => Activity::Idle,
            SWITCH => Activity::Switch,
            g => Activity::Node((g - 2) as usize),
        };
        let mut out = vec![Activity::Idle; self.m];
        let mut prev_row: Option<usize> = None;
        let mut prev = NONE;
        for (i, &g) in genes.iter().enumerate() {
            let row = self.rows[i];
            let from = prev_row.map_or(0, |r| r + 1);
            let gap = row - from;
            if gap > 0 && g != IDLE {
                if g >= 2 && g == prev {
                    out[from..row].fill(act(g));
                } else {
                    let fill = gap.min(self.k);
                    out[row - fill..row].fill(Activity::Switch);
                }
            }
            out[row] = act(g);
            prev_row = Some(row);
            prev = g;
        }
        Schedule { assignment: out }
    }
}

#[derive(Debug, Clone, Copy)]
struct Score {
    fitness: f64,
    kl: f64,
}

/// Ordering used for selection: `Less` means `a` is preferred.
fn prefer(a: &Score, b: &Score, band: Option<f64>) -> Ordering {
    match band {
        None => b.fitness.total_cmp(&a.fitness),
        Some(floor) => {
            let (ia, ib) = (a.fitness >= floor, b.fitness >= floor);
            match (ia, ib) {
                (true, false) => Ordering::Less,
                (false, true) => Ordering::Greater,
                (true, true) => a.kl.total_cmp(&b.kl).then(b.fitness.total_cmp(&a.fitness)),
                (false, false) => b.fitness.total_cmp(&a.fitness),
            }
        }
    }
}

/// Non-dominated (fitness up, divergence down) individuals seen so far.
struct Archive {
    tolerance: f64,
    best_fitness: f64,
    members: Vec<(Score, Vec<Gene>)>,
}

impl Archive {
    fn offer(&mut self, s: Score, genes: &[Gene]) {
        if s.fitness > self.best_fitness {
            self.best_fitness = s.fitness;
            let floor = self.floor();
            self.members.retain(|(m, _)| m.fitness >= floor);
        }
        if s.fitness < self.floor() {
            return;
        }
        if self.members.iter().any(|(m, _)| m.fitness >= s.fitness && m.kl <= s.kl) {
            return;
        }
        self.members.retain(|(m, _)| !(s.fitness >= m.fitness && s.kl <= m.kl));
        self.members.push((s, genes.to_vec()));
    }

    fn floor(&self) -> f64 {
        (1.0 - self.tolerance) * self.best_fitness
    }

    fn pick(&self) -> Option<&[Gene]> {
        let floor = self.floor();
        self.members
            .iter()
            .filter(|(m, _)| m.fitness >= floor)
            .min_by(|a, b| a.0.kl.total_cmp(&b.0.kl).then(b.0.fitness.total_cmp(&a.0.fitness)))
            .map(|(_, g)| g.as_slice())
    }
}

/// Initial schedules for the targeted strategy: the maximum-total schedule
/// and weighted optima whose weights are driven towards the target by
/// multiplicative updates `w <- w * (q / p)^eta`.
fn targeted_seeds(km: &KeyMatrix, target: &[f64], rule: &SwitchRule) -> Result<Vec<Schedule>, SchedError> {
    let n = km.n_nodes();
    let normalise = |w: &mut Vec<f64>| {
        let max = w.iter().copied().fold(0.0, f64::max);
        if max > 0.0 {
            w.iter_mut().for_each(|x| *x /= max);
        }
        max > 0.0
    };
    let mut seeds = vec![solve_exact(km, None, rule)?];
    let starts = [vec![1.0; n], target.to_vec()];
    for start in starts {
        for eta in [0.5, 1.0] {
            let mut w = start.clone();
            if !normalise(&mut w) {
                continue;
            }
            for _ in 0..8 {
                let s = solve_exact(km, Some(&w), rule)?;
                let e = evaluate(&s, km)?;
                seeds.push(s);
                let sum: f64 = e.iter().sum();
                if sum <= 0.0 {
                    break;
                }
                for j in 0..n {
                    let p = e[j] / sum;
                    w[j] = if target[j] <= 0.0 {
                        0.0
                    } else {
                        w[j] * (target[j] / p.max(1e-12)).powf(eta).clamp(0.1, 10.0)
                    };
                }
                if !normalise(&mut w) {
                    break;
                }
            }
        }
    }
    seeds.dedup();
    Ok(seeds)
}

/// Best feasible schedule found by a seeded genetic search.
///
/// S-GD maximises the total, S-PD the weighted total. S-TD maximises the
/// total but, among individuals within `kl_tolerance` of the best fitness,
/// prefers lower divergence from the target distribution.
pub fn solve_ga(km: &KeyMatrix, cfg: &StrategyConfig) -> Result<Schedule, SchedError> {
    cfg.validate()?;
    let n = km.n_nodes();
    let weights = cfg.objective_weights(n)?;
    let targeted = cfg.kind == StrategyKind::TargetedDelivery;
    let target = if targeted { cfg.target(n)?.probabilities().to_vec() } else { Vec::new() };
    let problem = Problem::new(km, &weights, &cfg.switch);
    let len = problem.len();
    if len == 0 {
        return Ok(Schedule::idle(km.n_intervals()));
    }
    let ga = &cfg.ga;
    let mut rng = ChaCha8Rng::seed_from_u64(ga.seed);

    let mut seeds = vec![solve_greedy(km, &cfg.switch)];
    if targeted {
        seeds.extend(targeted_seeds(km, &target, &cfg.switch)?);
    }
    let mut pop: Vec<Vec<Gene>> = seeds.iter().take(ga.population).map(|s| problem.compress(s)).collect();
    while pop.len() < ga.population {
        let mut genes = Vec::with_capacity(len);
        for i in 0..len {
            let g = if i > 0 && rng.gen_bool(0.7) {
                genes[i - 1]
            } else {
                let useful = &problem.useful[i];
                if rng.gen_bool(0.9) {
                    useful[rng.gen_range(0..useful.len())]
                } else {
                    SWITCH
                }
            };
            genes.push(g);
        }
        problem.repair(&mut genes);
        pop.push(genes);
    }

    let score = |genes: &[Gene], totals: &mut Vec<f64>| -> Score {
        problem.totals(genes, totals);
        let fitness: f64 = totals.iter().sum();
        let kl = if targeted {
            if fitness > 0.0 {
                let p: Vec<f64> = totals.iter().map(|x| x / fitness).collect();
                kl_raw(&p, &target)
            } else {
                f64::INFINITY
            }
        } else {
            0.0
        };
        Score { fitness, kl }
    };

    let mut totals = vec![0.0; n];
    let mut archive = Archive { tolerance: cfg.kl_tolerance, best_fitness: f64::NEG_INFINITY, members: Vec::new() };
    let mut best: Option<(Score, Vec<Gene>)> = None;
    let mut scores: Vec<Score> = Vec::with_capacity(ga.population);
    let mut order: Vec<usize> = (0..ga.population).collect();
    let mut rank = vec![0usize; ga.population];
    let skip_log = (1.0 - ga.mutation_rate).ln();
    let n_acts = n as u32 + 2;

    for generation in 0..=ga.generations {
        scores.clear();
        for genes in &pop {
            let s = score(genes, &mut totals);
            if targeted {
                archive.offer(s, genes);
            } else if best.as_ref().is_none_or(|(b, _)| s.fitness > b.fitness) {
                best = Some((s, genes.clone()));
            }
            scores.push(s);
        }
        if generation == ga.generations {
            break;
        }
        let band = if targeted {
            let top = scores.iter().map(|s| s.fitness).fold(f64::NEG_INFINITY, f64::max);
            Some((1.0 - cfg.kl_tolerance) * top)
        } else {
            None
        };
        order.sort_by(|&a, &b| prefer(&scores[a], &scores[b], band).then(a.cmp(&b)));
        for (pos, &idx) in order.iter().enumerate() {
            rank[idx] = pos;
        }
        let tournament = |rng: &mut ChaCha8Rng| -> usize {
            let mut winner = rng.gen_range(0..ga.population);
            for _ in 1..ga.tournament {
                let c = rng.gen_range(0..ga.population);
                if rank[c] < rank[winner] {
                    winner = c;
                }
            }
            winner
        };

        let mut next: Vec<Vec<Gene>> = order[..ga.elitism].iter().map(|&i| pop[i].clone()).collect();
        while next.len() < ga.population {
            let (pa, pb) = (tournament(&mut rng), tournament(&mut rng));
            let (mut a, mut b) = (pop[pa].clone(), pop[pb].clone());
            if len > 1 && rng.gen_bool(ga.crossover_rate) {
                let cut = rng.gen_range(1..len);
                a[cut..].copy_from_slice(&pop[pb][cut..]);
                b[cut..].copy_from_slice(&pop[pa][cut..]);
            }
            for child in [&mut a, &mut b] {
                if ga.mutation_rate > 0.0 {
                    let mut i = 0usize;
                    loop {
                        if ga.mutation_rate < 1.0 {
                            let u: f64 = rng.gen::<f64>();
                            let skip = ((1.0 - u).ln() / skip_log).floor();
                            if !(skip < (len - i) as f64) {
                                break;
                            }
                            i += skip as usize;
                        }
                        if i >= len {
                            break;
                        }
                        child[i] = rng.gen_range(0..n_acts);
                        i += 1;
                    }
                }
                problem.repair(child);
            }
            next.push(a);
            if next.len() < ga.population {
                next.push(b);
            }
        }
        pop = next;
    }

    let genes = if targeted {
        archive.pick().expect("archive holds at least one individual").to_vec()
    } else {
        best.expect("population is non-empty").1
    };
    Ok(problem.decompress(&genes))
}
