//! Capacity of a finite state family for the information divergence.
//!
//! `C = sup_q Σⱼ qⱼ D(σⱼ ‖ Σᵢ qᵢσᵢ)` by the Blahut–Arimoto iteration
//! `qⱼ ← qⱼ exp(D(σⱼ‖σ̄))/Z`. At every step `Σ qⱼ Dⱼ ≤ C ≤ maxⱼ Dⱼ`, so the
//! loop stops when that interval is shorter than ε.

use crate::error::{Error, Result};
use crate::info::{divergence, DivergenceValue};
use crate::jordan::{Element, StateElement};

/// Exponent used in place of an infinite divergence, which only arises when
/// round-off pushes a state out of the barycenter's numerical support.
const INFINITE_EXPONENT: f64 = 700.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapacityOptions {
    pub epsilon: f64,
    pub max_iterations: usize,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        Self {
            epsilon: 1e-9,
            max_iterations: 100_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CapacityResult {
    /// `Σ qⱼ D(σⱼ‖σ̄)` at the returned prior.
    pub capacity: f64,
    /// `maxⱼ D(σⱼ‖σ̄)`, an upper bound on the capacity.
    pub upper: f64,
    pub prior: Vec<f64>,
    pub barycenter: StateElement,
    /// `D(σⱼ‖σ̄)` for each state.
    pub divergences: Vec<f64>,
    pub iterations: usize,
}

pub fn capacity(states: &[StateElement], epsilon: f64) -> Result<CapacityResult> {
    capacity_with(
        states,
        &CapacityOptions {
            epsilon,
            ..CapacityOptions::default()
        },
    )
}

fn barycenter(states: &[StateElement], q: &[f64]) -> Element {
    let mut out = Element::zero(states[0].algebra());
    for (w, s) in q.iter().zip(states) {
        out.axpy(*w, s.element());
    }
    out
}

pub fn capacity_with(states: &[StateElement], opts: &CapacityOptions) -> Result<CapacityResult> {
    let first = states
        .first()
        .ok_or_else(|| Error::InvalidArgument("capacity needs at least one state".into()))?;
    if let Some(s) = states.iter().find(|s| s.algebra() != first.algebra()) {
        return Err(Error::AlgebraMismatch(first.algebra(), s.algebra()));
    }
    if !(opts.epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon = {} must be positive",
            opts.epsilon
        )));
    }
    let k = states.len();
    let mut q = vec![1.0 / k as f64; k];
    let mut last_gap = f64::INFINITY;
    for iter in 0..=opts.max_iterations {
        let bar = barycenter(states, &q);
        let mut ds = Vec::with_capacity(k);
        for s in states {
            ds.push(match divergence(s.element(), &bar)? {
                DivergenceValue::Finite(v) => v,
                DivergenceValue::Infinite => INFINITE_EXPONENT,
            });
        }
        let lower: f64 = q.iter().zip(&ds).map(|(a, b)| a * b).sum();
        let upper = ds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        last_gap = upper - lower;
        if last_gap <= opts.epsilon {
            return Ok(CapacityResult {
                capacity: lower,
                upper,
                prior: q,
                barycenter: StateElement::new_unchecked(bar),
                divergences: ds,
                iterations: iter,
            });
        }
        let shift = upper;
        let mut total = 0.0;
        for (qj, dj) in q.iter_mut().zip(&ds) {
            *qj = (*qj * (dj - shift).exp()).max(f64::MIN_POSITIVE);
            total += *qj;
        }
        for qj in q.iter_mut() {
            *qj /= total;
        }
    }
    Err(Error::SolverNoConvergence {
        solver: "capacity",
        iterations: opts.max_iterations,
        gap: last_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::Ring;
    use crate::jordan::Algebra;
    use crate::spectral::{combine_frame, random_frame, random_state};

    #[test]
    fn single_state_has_zero_capacity() {
        let s = random_state(Algebra::Herm(Ring::C, 2), 1, None).unwrap();
        let c = capacity(&[s], 1e-12).unwrap();
        assert!(c.capacity.abs() < 1e-12);
        assert_eq!(c.prior, vec![1.0]);
    }

    #[test]
    fn antipodal_qubit_states() {
        let alg = Algebra::Spin(3);
        let plus = StateElement::new(Element::spin(0.5, vec![0.0, 0.0, 0.5]).unwrap()).unwrap();
        let minus = StateElement::new(Element::spin(0.5, vec![0.0, 0.0, -0.5]).unwrap()).unwrap();
        let c = capacity(&[plus, minus], 1e-10).unwrap();
        assert!((c.capacity - 2f64.ln()).abs() < 1e-9);
        assert!((c.prior[0] - 0.5).abs() < 1e-9);
        let center = Element::unit(alg).scale(0.5);
        assert!(c.barycenter.element().distance(&center) < 1e-12);
    }

    #[test]
    fn orthogonal_pure_states_give_log_rank() {
        let alg = Algebra::Herm(Ring::C, 3);
        let frame = random_frame(alg, 4);
        let states: Vec<StateElement> = frame
            .iter()
            .map(|e| StateElement::new(e.clone()).unwrap())
            .collect();
        let c = capacity(&states, 1e-10).unwrap();
        assert!((c.capacity - 3f64.ln()).abs() < 1e-8);
    }

    /// Classical Blahut–Arimoto on column-stochastic data, used as an oracle.
    fn classical_capacity(p: &[Vec<f64>]) -> f64 {
        let k = p.len();
        let mut q = vec![1.0 / k as f64; k];
        for _ in 0..200_000 {
            let out: Vec<f64> = (0..p[0].len())
                .map(|y| (0..k).map(|j| q[j] * p[j][y]).sum())
                .collect();
            let d: Vec<f64> = p
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&out)
                        .filter(|(a, _)| **a > 0.0)
                        .map(|(a, b)| a * (a / b).ln())
                        .sum()
                })
                .collect();
            let lower: f64 = q.iter().zip(&d).map(|(a, b)| a * b).sum();
            let upper = d.iter().copied().fold(f64::MIN, f64::max);
            if upper - lower < 1e-12 {
                return lower;
            }
            let mut total = 0.0;
            for (qj, dj) in q.iter_mut().zip(&d) {
                *qj *= dj.exp();
                total += *qj;
            }
            q.iter_mut().for_each(|x| *x /= total);
        }
        panic!("oracle did not converge")
    }

    #[test]
    fn commuting_family_matches_classical_oracle() {
        let alg = Algebra::Herm(Ring::R, 3);
        let frame = random_frame(alg, 8);
        let rows = vec![
            vec![0.7, 0.2, 0.1],
            vec![0.1, 0.8, 0.1],
            vec![0.3, 0.3, 0.4],
            vec![0.2, 0.2, 0.6],
        ];
        let states: Vec<StateElement> = rows
            .iter()
            .map(|r| StateElement::new(combine_frame(&frame, r)).unwrap())
            .collect();
        let c = capacity(&states, 1e-11).unwrap();
        assert!((c.capacity - classical_capacity(&rows)).abs() < 1e-8);
        // KKT: every divergence is at most C + ε, with equality on the support
        for (d, q) in c.divergences.iter().zip(&c.prior) {
            assert!(*d <= c.capacity + 1e-10);
            if *q > 1e-3 {
                assert!((d - c.capacity).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(capacity(&[], 1e-6).is_err());
        let a = random_state(Algebra::Spin(3), 1, None).unwrap();
        let b = random_state(Algebra::Spin(4), 1, None).unwrap();
        assert!(capacity(&[a.clone(), b], 1e-6).is_err());
        assert!(capacity(&[a], 0.0).is_err());
    }
}
