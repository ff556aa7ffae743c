//! Seeded samplers for elements, unitaries and spectra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::division::{Coefficient, Ring};
use crate::jordan::{Algebra, Element};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn gaussian(rng: &mut SeededRng) -> f64 {
    StandardNormal.sample(rng)
}

/// Element with independent standard normal coordinates in the orthonormal basis.
pub fn random_element_with(algebra: Algebra, rng: &mut SeededRng) -> Element {
    let coords: Vec<f64> = (0..algebra.real_dim()).map(|_| gaussian(rng)).collect();
    Element::from_real_coords(algebra, &coords).expect("coordinate count matches")
}

pub fn random_element(algebra: Algebra, seed: u64) -> Element {
    random_element_with(algebra, &mut rng(seed))
}

/// Uniform point of the probability simplex with `k` entries.
pub fn random_simplex(k: usize, rng: &mut SeededRng) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

pub fn random_unit_vector(d: usize, rng: &mut SeededRng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Haar orthogonal `d × d` matrix (row-major) by Gram–Schmidt on Gaussian columns.
pub fn haar_orthogonal(d: usize, rng: &mut SeededRng) -> Vec<f64> {
    let u = haar_unitary(Ring::R, d, rng);
    u.iter().map(|c| c.re()).collect()
}

/// Haar unitary `n × n` matrix over ℝ, ℂ or ℍ (row-major).
///
/// Columns are orthonormalized with the left-conjugate inner product
/// `⟨u, v⟩ = Σ ūᵢvᵢ`, projecting as `v ← v − u⟨u, v⟩`.
pub fn haar_unitary(ring: Ring, n: usize, rng: &mut SeededRng) -> Vec<Coefficient> {
    assert!(ring.is_associative(), "unitary groups need an associative ring");
    let mut cols: Vec<Vec<Coefficient>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Coefficient> = (0..n)
            .map(|_| {
                let c: Vec<f64> = (0..ring.dim()).map(|_| gaussian(rng)).collect();
                Coefficient::new(ring, &c).unwrap()
            })
            .collect();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for u in &cols {
                let mut ip = Coefficient::zero(ring);
                for (ui, vi) in u.iter().zip(&v) {
                    ip += ui.conj() * *vi;
                }
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi = *vi - *ui * ip;
                }
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|c| c.scale(1.0 / norm)).collect());
    }
    let mut out = vec![Coefficient::zero(ring); n * n];
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col.iter().enumerate() {
            out[i * n + j] = *c;
        }
    }
    out
}

pub fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
