//! Jordan algebra automorphisms used to rotate frames and build channels.

use crate::division::Coefficient;
use crate::error::{Error, Result};
use crate::jordan::{Algebra, Element};
use crate::random::{self, SeededRng};

/// Number of inner-derivation exponentials composed for a random Albert automorphism.
const ALBERT_FLOW_STEPS: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub enum Automorphism {
    /// `(s, v) ↦ (s, O v)` for an orthogonal `d × d` matrix `O` (row-major).
    SpinRotation { matrix: Vec<f64> },
    /// `x ↦ U x U†` for a unitary over the algebra's ring.
    Conjugation {
        algebra: Algebra,
        unitary: Vec<Coefficient>,
    },
    /// Composition of `exp(t·[L_a, L_b])` over the listed `(a, b, t)`.
    ///
    /// Inner derivations `z ↦ a∘(b∘z) − b∘(a∘z)` generate the automorphism group,
    /// so this reaches generic frames of the Albert algebra without needing an
    /// associative matrix representation.
    DerivationFlow {
        generators: Vec<(Element, Element, f64)>,
    },
}

impl Automorphism {
    /// Haar rotation/reflection for spin factors, Haar unitary conjugation for
    /// `Herm`, a random derivation flow for the Albert algebra.
    pub fn random(algebra: Algebra, rng: &mut SeededRng) -> Automorphism {
        match algebra {
            Algebra::Spin(d) => Automorphism::SpinRotation {
                matrix: random::haar_orthogonal(d, rng),
            },
            Algebra::Herm(ring, n) => Automorphism::Conjugation {
                algebra,
                unitary: random::haar_unitary(ring, n, rng),
            },
            Algebra::Albert => {
                let generators = (0..ALBERT_FLOW_STEPS)
                    .map(|_| {
                        let a = random::random_element_with(algebra, rng);
                        let b = random::random_element_with(algebra, rng);
                        let a = a.scale(1.0 / a.norm());
                        let b = b.scale(1.0 / b.norm());
                        let t = random::uniform(rng, 0.5, 1.5);
                        (a, b, t)
                    })
                    .collect();
                Automorphism::DerivationFlow { generators }
            }
        }
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        match self {
            Automorphism::SpinRotation { matrix } => {
                let (s, v) = x.spin_parts().ok_or_else(|| {
                    Error::Unsupported(format!("spin rotation applied to {}", x.algebra()))
                })?;
                let d = v.len();
                if matrix.len() != d * d {
                    return Err(Error::InvalidArgument(format!(
                        "rotation of size {} applied to Spin({d})",
                        (matrix.len() as f64).sqrt()
                    )));
                }
                let w = (0..d)
                    .map(|i| (0..d).map(|j| matrix[i * d + j] * v[j]).sum())
                    .collect();
                Element::spin(s, w)
            }
            Automorphism::Conjugation { algebra, unitary } => {
                if x.algebra() != *algebra {
                    return Err(Error::AlgebraMismatch(*algebra, x.algebra()));
                }
                let (ring, n) = algebra.matrix_shape().unwrap();
                let m = x.entries().unwrap();
                // (U x)_{ij}
                let mut ux = vec![Coefficient::zero(ring); n * n];
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = Coefficient::zero(ring);
                        for k in 0..n {
                            acc += unitary[i * n + k] * m[k * n + j];
                        }
                        ux[i * n + j] = acc;
                    }
                }
                let mut out = vec![Coefficient::zero(ring); n * n];
                for i in 0..n {
                    for j in 0..n {
                        let mut acc = Coefficient::zero(ring);
                        for k in 0..n {
                            acc += ux[i * n + k] * unitary[j * n + k].conj();
                        }
                        out[i * n + j] = acc;
                    }
                }
                Ok(Element::symmetrized(*algebra, out))
            }
            Automorphism::DerivationFlow { generators } => {
                let mut y = x.clone();
                for (a, b, t) in generators {
                    if a.algebra() != x.algebra() {
                        return Err(Error::AlgebraMismatch(a.algebra(), x.algebra()));
                    }
                    y = exp_derivation(a, b, *t, &y);
                }
                Ok(y)
            }
        }
    }

    pub fn algebra_compatible(&self, algebra: Algebra) -> bool {
        match self {
            Automorphism::SpinRotation { matrix } => {
                matches!(algebra, Algebra::Spin(d) if d * d == matrix.len())
            }
            Automorphism::Conjugation { algebra: a, .. } => *a == algebra,
            Automorphism::DerivationFlow { generators } => {
                generators.iter().all(|(a, _, _)| a.algebra() == algebra)
            }
        }
    }
}

/// `exp(t·D) z` with `D z = a∘(b∘z) − b∘(a∘z)`, summed until terms vanish.
fn exp_derivation(a: &Element, b: &Element, t: f64, z: &Element) -> Element {
    let scale = z.norm().max(1e-300);
    let mut sum = z.clone();
    let mut term = z.clone();
    for k in 1..=80 {
        let d = &a.circ(&b.circ(&term)) - &b.circ(&a.circ(&term));
        term = d.scale(t / k as f64);
        sum.axpy(1.0, &term);
        if term.norm() <= 1e-18 * scale {
            break;
        }
    }
    sum
}
