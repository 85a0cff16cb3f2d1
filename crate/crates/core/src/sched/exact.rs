//! Exact dynamic programme and greedy baseline.

use super::{Activity, SchedError, Schedule, SwitchRule};
use crate::qkd::KeyMatrix;

/// Switching state after an interval.
///
/// Layout: `READY`, `IDLE`, `run(c)` for `1 <= c < k`, then one state per node.
#[derive(Debug, Clone, Copy)]
pub(super) struct States {
    k: usize,
    n: usize,
}

pub(super) const READY: usize = 0;
const IDLE: usize = 1;

impl States {
    pub(super) fn new(k: usize, n: usize) -> Self {
        Self { k, n }
    }

    pub(super) fn count(&self) -> usize {
        self.k + 1 + self.n
    }

    pub(super) fn node(&self, n: usize) -> usize {
        self.k + 1 + n
    }

    fn run(&self, c: usize) -> usize {
        if c >= self.k {
            READY
        } else {
            1 + c
        }
    }

    /// State after a switch interval.
    pub(super) fn after_switch(&self, s: usize) -> usize {
        if s == READY {
            READY
        } else if s >= 2 && s <= self.k {
            self.run(s)
        } else {
            self.run(1)
        }
    }

    /// Whether node `n` may be served from state `s`.
    pub(super) fn allows(&self, s: usize, n: usize) -> bool {
        s == READY || s == self.node(n)
    }
}

fn check_weights(k: &KeyMatrix, weights: Option<&[f64]>) -> Result<Vec<f64>, SchedError> {
    match weights {
        None => Ok(vec![1.0; k.n_nodes()]),
        Some(w) if w.len() != k.n_nodes() => Err(SchedError::Dimension { expected: k.n_nodes(), found: w.len() }),
        Some(w) if w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) => {
            Err(SchedError::Weights("weights must be finite and non-negative".into()))
        }
        Some(w) => Ok(w.to_vec()),
    }
}

/// Provably optimal schedule for `sum_n w_n E_n` (uniform weights when `None`).
///
/// Ties are broken per interval in the order idle, switch, node 1, node 2, ...
pub fn solve_exact(k: &KeyMatrix, weights: Option<&[f64]>, rule: &SwitchRule) -> Result<Schedule, SchedError> {
    rule.validate()?;
    let w = check_weights(k, weights)?;
    let (m_len, n) = (k.n_intervals(), k.n_nodes());
    let st = States::new(rule.intervals, n);
    let s_count = st.count();

    // value[j * s_count + s]: best objective from interval j onward in state s.
    let mut value = vec![0.0f64; (m_len + 1) * s_count];
    for j in (0..m_len).rev() {
        let (head, tail) = value.split_at_mut((j + 1) * s_count);
        let next = &tail[..s_count];
        let cur = &mut head[j * s_count..];
        let row = k.row(j);
        let gains: Vec<f64> = row.iter().zip(&w).map(|(v, w)| v * w).collect();
        for s in 0..s_count {
            let mut best = next[IDLE].max(next[st.after_switch(s)]);
            for node in 0..n {
                if st.allows(s, node) {
                    best = best.max(gains[node] + next[st.node(node)]);
                }
            }
            cur[s] = best;
        }
    }

    let mut assignment = Vec::with_capacity(m_len);
    let mut s = READY;
    for j in 0..m_len {
        let next = &value[(j + 1) * s_count..(j + 2) * s_count];
        let target = value[j * s_count + s];
        let row = k.row(j);
        let (act, ns) = if next[IDLE] == target {
            (Activity::Idle, IDLE)
        } else if next[st.after_switch(s)] == target {
            (Activity::Switch, st.after_switch(s))
        } else {
            let node = (0..n)
                .find(|&node| st.allows(s, node) && row[node] * w[node] + next[st.node(node)] == target)
                .expect("dynamic programme reconstruction");
            (Activity::Node(node), st.node(node))
        };
        assignment.push(act);
        s = ns;
    }
    Ok(Schedule { assignment })
}

/// Myopic forward sweep: serve the best reachable node if it has key,
/// otherwise retarget if some other node has key. Intervals without key keep
/// the current node, or prepare a switch while key remains later on.
pub fn solve_greedy(k: &KeyMatrix, rule: &SwitchRule) -> Schedule {
    let n = k.n_nodes();
    let m_len = k.n_intervals();
    let st = States::new(rule.intervals.max(1), n);
    let mut key_ahead = vec![false; m_len + 1];
    for j in (0..m_len).rev() {
        key_ahead[j] = key_ahead[j + 1] || k.row(j).iter().any(|&v| v > 0.0);
    }
    let mut s = READY;
    let mut assignment = Vec::with_capacity(m_len);
    for (j, &ahead) in key_ahead[..m_len].iter().enumerate() {
        let row = k.row(j);
        let mut best: Option<usize> = None;
        for node in 0..n {
            if st.allows(s, node) && row[node] > 0.0 && best.is_none_or(|b| row[node] > row[b]) {
                best = Some(node);
            }
        }
        let current = (0..n).find(|&node| s == st.node(node));
        let act = match (best, current) {
            (Some(node), _) => Activity::Node(node),
            (None, Some(node)) if !row.iter().any(|&v| v > 0.0) && ahead => Activity::Node(node),
            (None, _) if ahead => Activity::Switch,
            (None, _) => Activity::Idle,
        };
        s = match act {
            Activity::Node(node) => st.node(node),
            Activity::Switch => st.after_switch(s),
            Activity::Idle => IDLE,
        };
        assignment.push(act);
    }
    Schedule { assignment }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sched::{evaluate, is_feasible};
    use Activity::{Idle, Node, Switch};

    fn fixture() -> KeyMatrix {
        KeyMatrix::from_rows(&[vec![5.0, 0.0], vec![0.0, 4.0], vec![0.0, 6.0]])
    }

    fn total(s: &Schedule, k: &KeyMatrix) -> f64 {
        evaluate(s, k).unwrap().iter().sum()
    }

    #[test]
    fn small_instance() {
        let k = fixture();
        let s = solve_exact(&k, None, &SwitchRule::default()).unwrap();
        assert_eq!(s.assignment, vec![Node(0), Switch, Node(1)]);
        assert_eq!(total(&s, &k), 11.0);
    }

    #[test]
    fn all_zero_is_idle() {
        let k = KeyMatrix::from_rows(&vec![vec![0.0, 0.0]; 4]);
        assert_eq!(solve_exact(&k, None, &SwitchRule::default()).unwrap(), Schedule::idle(4));
        assert_eq!(solve_greedy(&k, &SwitchRule::default()), Schedule::idle(4));
    }

    #[test]
    fn heavy_weight_on_second_node() {
        let k = fixture();
        let s = solve_exact(&k, Some(&[1.0, 1000.0]), &SwitchRule::default()).unwrap();
        assert_eq!(s.assignment, vec![Switch, Node(1), Node(1)]);
        let e = evaluate(&s, &k).unwrap();
        assert_eq!(e[0] + 1000.0 * e[1], 10_000.0);
    }

    #[test]
    fn greedy_examples() {
        let r = SwitchRule::default();
        let k = fixture();
        let g = solve_greedy(&k, &r);
        assert_eq!(g.assignment, vec![Node(0), Switch, Node(1)]);

        let single = KeyMatrix::from_rows(&[vec![1.0], vec![0.0], vec![3.0], vec![2.0]]);
        assert_eq!(
            total(&solve_greedy(&single, &r), &single),
            total(&solve_exact(&single, None, &r).unwrap(), &single)
        );

        let adv = KeyMatrix::from_rows(&[vec![10.0, 9.0], vec![0.0, 9.0], vec![0.0, 9.0]]);
        let g = solve_greedy(&adv, &r);
        assert_eq!(g.assignment, vec![Node(0), Switch, Node(1)]);
        assert_eq!(total(&g, &adv), 19.0);
        let e = solve_exact(&adv, None, &r).unwrap();
        assert_eq!(e.assignment, vec![Node(1), Node(1), Node(1)]);
        assert_eq!(total(&e, &adv), 27.0);
    }

    #[test]
    fn longer_switch_rule() {
        let r = SwitchRule { intervals: 2 };
        let k = KeyMatrix::from_rows(&[vec![5.0, 0.0], vec![0.0, 4.0], vec![0.0, 4.0], vec![0.0, 6.0]]);
        let s = solve_exact(&k, None, &r).unwrap();
        assert!(is_feasible(&s, 4, 2, &r));
        assert_eq!(total(&s, &k), 14.0);
        assert!(is_feasible(&solve_greedy(&k, &r), 4, 2, &r));
        assert!(solve_exact(&k, None, &SwitchRule { intervals: 0 }).is_err());
    }

    #[test]
    fn weight_errors() {
        let k = fixture();
        assert!(solve_exact(&k, Some(&[1.0]), &SwitchRule::default()).is_err());
        assert!(solve_exact(&k, Some(&[1.0, f64::NAN]), &SwitchRule::default()).is_err());
    }

    #[test]
    fn idle_breaks_readiness() {
        // Idle then node is not a valid handoff, so the solver must switch.
        let k = KeyMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 0.0], vec![0.0, 7.0]]);
        let s = solve_exact(&k, None, &SwitchRule::default()).unwrap();
        assert!(is_feasible(&s, 3, 2, &SwitchRule::default()));
        assert_eq!(s.assignment[2], Node(1));
        assert_eq!(s.assignment[..2], [Idle, Switch]);
    }
}
