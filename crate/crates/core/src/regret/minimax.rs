//! Minimax regret by optimistic multiplicative-weights self-play.
//!
//! Both players run optimistic Hedge on the payoff matrix rescaled to `[0, 1]`.
//! After every round the current and averaged strategies are scored exactly:
//! a mixed action `w` certifies `C_F ≤ maxᵢ (Dw)ᵢ` and a prior `t` certifies
//! `C_F ≥ minⱼ (tᵀD)ⱼ`. The loop stops once the best certificates are within ε.

use super::RegretGame;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimaxOptions {
    pub epsilon: f64,
    pub max_iterations: usize,
    /// Hedge step size on the rescaled matrix.
    pub step: f64,
}

impl Default for MinimaxOptions {
    fn default() -> Self {
        Self {
            epsilon: 1e-6,
            max_iterations: 1_000_000,
            step: 0.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimaxSolution {
    /// Midpoint of the certified interval `[lower, upper]`.
    pub value: f64,
    /// `min_j (tᵀD)_j` for the returned prior.
    pub lower: f64,
    /// `max_i (Dw)_i` for the returned mixed action.
    pub upper: f64,
    pub prior: Vec<f64>,
    pub action: Vec<f64>,
    pub iterations: usize,
}

impl MinimaxSolution {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn minimax_regret(game: &RegretGame, epsilon: f64) -> Result<MinimaxSolution> {
    minimax_regret_with(
        game,
        &MinimaxOptions {
            epsilon,
            ..MinimaxOptions::default()
        },
    )
}

fn softmax(logits: &[f64], out: &mut [f64]) {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for (o, l) in out.iter_mut().zip(logits) {
        *o = (l - m).exp();
        total += *o;
    }
    for o in out.iter_mut() {
        *o /= total;
    }
}

struct Certificates {
    upper: f64,
    action: Vec<f64>,
    lower: f64,
    prior: Vec<f64>,
}

impl Certificates {
    fn consider(&mut self, game: &RegretGame, t: &[f64], w: &[f64]) {
        let up = game.worst_case(w);
        if up < self.upper {
            self.upper = up;
            self.action = w.to_vec();
        }
        let low = game.guaranteed(t);
        if low > self.lower {
            self.lower = low;
            self.prior = t.to_vec();
        }
    }

    fn finish(self, iterations: usize) -> MinimaxSolution {
        MinimaxSolution {
            value: 0.5 * (self.upper + self.lower),
            lower: self.lower,
            upper: self.upper,
            prior: self.prior,
            action: self.action,
            iterations,
        }
    }
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.iter().map(|x| x / s).collect()
}

pub fn minimax_regret_with(game: &RegretGame, opts: &MinimaxOptions) -> Result<MinimaxSolution> {
    if !(opts.epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {} must be positive",
            opts.epsilon
        )));
    }
    let (n, m) = (game.rows(), game.cols());
    let d = game.payoff();
    let lo = d.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let hi = d.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;

    let mut best = Certificates {
        upper: f64::INFINITY,
        action: vec![1.0 / m as f64; m],
        lower: f64::NEG_INFINITY,
        prior: vec![1.0 / n as f64; n],
    };

    if range <= 0.0 {
        let (t, w) = (best.prior.clone(), best.action.clone());
        best.consider(game, &t, &w);
        return Ok(best.finish(0));
    }
    let a: Vec<Vec<f64>> = d
        .iter()
        .map(|r| r.iter().map(|v| (v - lo) / range).collect())
        .collect();
    let eta = opts.step;

    let mut t = vec![1.0 / n as f64; n];
    let mut w = vec![1.0 / m as f64; m];
    let mut gain_sum = vec![0.0; n];
    let mut loss_sum = vec![0.0; m];
    let mut t_avg = vec![0.0; n];
    let mut w_avg = vec![0.0; m];
    let mut gain = vec![0.0; n];
    let mut loss = vec![0.0; m];
    let mut logits_t = vec![0.0; n];
    let mut logits_w = vec![0.0; m];

    for iter in 1..=opts.max_iterations {
        for (i, g) in gain.iter_mut().enumerate() {
            *g = a[i].iter().zip(&w).map(|(x, y)| x * y).sum();
        }
        for (j, l) in loss.iter_mut().enumerate() {
            *l = (0..n).map(|i| a[i][j] * t[i]).sum();
        }
        for i in 0..n {
            t_avg[i] += t[i];
            gain_sum[i] += gain[i];
            logits_t[i] = eta * (gain_sum[i] + gain[i]);
        }
        for j in 0..m {
            w_avg[j] += w[j];
            loss_sum[j] += loss[j];
            logits_w[j] = -eta * (loss_sum[j] + loss[j]);
        }
        // scores of the strategies just played, in rescaled units
        let up_now = gain.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let low_now = loss.iter().copied().fold(f64::INFINITY, f64::min);
        if up_now * range + lo < best.upper || low_now * range + lo > best.lower {
            best.consider(game, &t, &w);
        }
        if iter % 8 == 0 {
            best.consider(game, &normalized(&t_avg), &normalized(&w_avg));
        }
        if best.upper - best.lower <= opts.epsilon {
            return Ok(best.finish(iter));
        }
        softmax(&logits_t, &mut t);
        softmax(&logits_w, &mut w);
    }
    Err(Error::SolverNoConvergence {
        solver: "minimax",
        iterations: opts.max_iterations,
        gap: best.upper - best.lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{rng, uniform};

    fn game(rows: Vec<Vec<f64>>) -> RegretGame {
        RegretGame::new(rows).unwrap()
    }

    #[test]
    fn single_entry() {
        let s = minimax_regret(&game(vec![vec![0.7]]), 1e-9).unwrap();
        assert_eq!(s.value, 0.7);
        assert_eq!(s.prior, vec![1.0]);
    }

    #[test]
    fn symmetric_two_by_two() {
        let s = minimax_regret(&game(vec![vec![0.0, 2.0], vec![2.0, 0.0]]), 1e-8).unwrap();
        assert!((s.value - 1.0).abs() < 1e-8);
        assert!((s.prior[0] - 0.5).abs() < 1e-6);
        assert!((s.action[0] - 0.5).abs() < 1e-6);
        assert!(s.gap() <= 1e-8);
    }

    #[test]
    fn dominated_action_and_pure_saddle() {
        // column 1 dominates column 0; saddle at (row 0, col 1) with value 1
        let s = minimax_regret(&game(vec![vec![3.0, 1.0], vec![2.0, 0.5]]), 1e-8).unwrap();
        assert!((s.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn random_games_close_their_gap() {
        let mut r = rng(7);
        for _ in 0..20 {
            let n = 2 + (uniform(&mut r, 0.0, 7.0) as usize);
            let m = 2 + (uniform(&mut r, 0.0, 7.0) as usize);
            let rows = (0..n)
                .map(|_| (0..m).map(|_| uniform(&mut r, 0.0, 1.0)).collect())
                .collect();
            let g = game(rows);
            let s = minimax_regret(&g, 1e-6).unwrap();
            assert!(s.gap() <= 1e-6);
            assert!((g.worst_case(&s.action) - s.upper).abs() < 1e-15);
            assert!((g.guaranteed(&s.prior) - s.lower).abs() < 1e-15);
        }
    }

    #[test]
    fn iteration_cap_reports_gap() {
        let g = game(vec![vec![0.0, 1.0, 0.3], vec![1.0, 0.0, 0.6], vec![0.2, 0.9, 0.0]]);
        let err = minimax_regret_with(
            &g,
            &MinimaxOptions {
                epsilon: 1e-12,
                max_iterations: 3,
                step: 0.2,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::SolverNoConvergence { iterations: 3, .. }));
        assert!(minimax_regret(&g, 0.0).is_err());
    }
}
