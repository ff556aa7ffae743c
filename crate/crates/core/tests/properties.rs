use ejq_core::channels::{
    contraction, random_primitive, random_ptp_channel_with, ChannelFamily, ChannelKind,
};
use ejq_core::division::Ring;
use ejq_core::exec::Execution;
use ejq_core::info;
use ejq_core::jordan::{Algebra, Element, StateElement};
use ejq_core::polygon::{majorize_rational, rational, Point, PolygonSpace};
use ejq_core::random::{self, random_element};
use ejq_core::regret::{self, AffineAction, DecisionProblem, JordanSpace};
use ejq_core::spectral::{random_faithful_state, random_state, Majorization};
use proptest::prelude::*;

const ALGEBRAS: [Algebra; 5] = [
    Algebra::Spin(3),
    Algebra::Herm(Ring::R, 3),
    Algebra::Herm(Ring::C, 3),
    Algebra::Herm(Ring::H, 2),
    Algebra::Albert,
];

const SPECIAL: [Algebra; 4] = [
    Algebra::Spin(3),
    Algebra::Herm(Ring::R, 3),
    Algebra::Herm(Ring::C, 3),
    Algebra::Herm(Ring::H, 2),
];

fn algebra() -> impl Strategy<Value = Algebra> {
    prop::sample::select(ALGEBRAS.to_vec())
}

fn special() -> impl Strategy<Value = Algebra> {
    prop::sample::select(SPECIAL.to_vec())
}

fn div(p: &Element, q: &Element) -> f64 {
    info::divergence(p, q).unwrap().finite().unwrap()
}

fn maximally_mixed(alg: Algebra) -> Element {
    Element::unit(alg).scale(1.0 / alg.rank() as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn divergence_is_nonnegative_and_vanishes_on_the_diagonal(alg in algebra(), seed in any::<u64>()) {
        let rho = random_state(alg, seed, None).unwrap();
        let sigma = random_faithful_state(alg, seed ^ 1).unwrap();
        prop_assert!(div(rho.element(), sigma.element()) >= -1e-9);
        prop_assert!(div(sigma.element(), sigma.element()).abs() <= 1e-9);
    }

    #[test]
    fn unital_channels_do_not_decrease_entropy(alg in special(), seed in any::<u64>()) {
        let phi = random_ptp_channel_with(alg, seed, 3, ChannelFamily::Unital).unwrap();
        let rho = random_state(alg, seed ^ 2, None).unwrap();
        let out = phi.apply_state(&rho).unwrap();
        let h_in = info::entropy(rho.element()).unwrap();
        let h_out = info::entropy(out.element()).unwrap();
        prop_assert!(h_out >= h_in - 1e-9, "{h_out} < {h_in}");
        let u = maximally_mixed(alg);
        prop_assert!(div(out.element(), &u) <= div(rho.element(), &u) + 1e-9);
    }

    /// Actions closed under the adjoint of an idempotent channel cannot gain
    /// value from processing the state.
    #[test]
    fn lost_opportunities_under_pinching(alg in algebra(), seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let phi = random_primitive(alg, ChannelKind::Pinching, ChannelFamily::All, &mut r).unwrap();
        let mut actions = Vec::new();
        for k in 0..3 {
            let g = random_element(alg, seed ^ (10 + k));
            let c = random::uniform(&mut r, -1.0, 1.0);
            actions.push(AffineAction::new(phi.adjoint_apply(&g).unwrap(), c));
            actions.push(AffineAction::new(g, c));
        }
        let problem = DecisionProblem::new(JordanSpace { algebra: alg }, actions).unwrap();
        let sigma = random_state(alg, seed ^ 3, None).unwrap();
        let (f_in, _) = problem.optimal_value(sigma.element());
        let (f_out, _) = problem.optimal_value(&phi.apply(sigma.element()).unwrap());
        prop_assert!(f_out <= f_in + 1e-9, "{f_out} > {f_in}");
    }

    #[test]
    fn strict_contractions_strictly_decrease_divergence(
        alg in special(),
        seed in any::<u64>(),
        factor in 0.05f64..0.95,
    ) {
        let rho = random_faithful_state(alg, seed).unwrap();
        let sigma = random_faithful_state(alg, seed ^ 4).unwrap();
        let center = random_faithful_state(alg, seed ^ 5).unwrap();
        let phi = contraction(center, factor).unwrap();
        let before = div(rho.element(), sigma.element());
        let after = div(&phi.apply(rho.element()).unwrap(), &phi.apply(sigma.element()).unwrap());
        prop_assert!(after < before, "{after} ≥ {before}");
    }

    #[test]
    fn capacity_certificate(alg in special(), seed in any::<u64>(), k in 2usize..5) {
        let states: Vec<StateElement> = (0..k as u64)
            .map(|i| random_state(alg, seed.wrapping_add(i), None).unwrap())
            .collect();
        let eps = 1e-7;
        let c = regret::capacity(&states, eps).unwrap();
        // ε-optimality gives max D ≤ C + ε and Σ w (C − D) = 0, hence
        // w·(C − D) ≤ ε: states carrying weight sit within ε/w of C
        for (w, d) in c.prior.iter().zip(&c.divergences) {
            prop_assert!(*d <= c.capacity + eps + 1e-9, "D = {d} above C = {}", c.capacity);
            prop_assert!(w * (c.capacity - d) <= eps + 1e-9, "w = {w}, D = {d}, C = {}", c.capacity);
            if *w >= 0.1 {
                prop_assert!((d - c.capacity).abs() <= 10.0 * eps + 1e-9);
            }
        }
    }
}

/// The prediction game over a fine net of barycenters reproduces the capacity.
#[test]
fn capacity_equals_minimax_over_a_prediction_net() {
    let alg = Algebra::Herm(Ring::C, 2);
    let states: Vec<StateElement> = (0..2).map(|i| random_state(alg, 70 + i, None).unwrap()).collect();
    let eps = 1e-6;
    let cap = regret::capacity(&states, eps).unwrap();
    const NET: usize = 400;
    let predictions: Vec<Element> = (0..=NET)
        .map(|j| {
            let t = j as f64 / NET as f64;
            &states[0].element().scale(t) + &states[1].element().scale(1.0 - t)
        })
        .collect();
    let elems: Vec<Element> = states.iter().map(|s| s.element().clone()).collect();
    let (game, _) = regret::divergence_game(&elems, &predictions, Execution::default()).unwrap();
    let sol = regret::minimax_regret(&game, eps).unwrap();
    // the net only restricts the minimizer, so its value is at least C
    assert!(sol.value >= cap.capacity - 3.0 * eps, "{} < {}", sol.value, cap.capacity);
    assert!(sol.value <= cap.capacity + 3.0 * eps, "{} > {}", sol.value, cap.capacity);
}

fn square_point() -> impl Strategy<Value = Point> {
    (0i64..=12, 0i64..=12).prop_map(|(x, y)| Point::from_ratios((x, 12), (y, 12)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polygon_decompositions_are_exact(p in square_point()) {
        let sq = PolygonSpace::unit_square();
        let decs = sq.orthogonal_decompositions(&p, 4).unwrap();
        prop_assert!(!decs.is_empty());
        prop_assert!(decs.iter().any(|d| d.parts.len() <= 3));
        for d in &decs {
            prop_assert_eq!(d.reconstruct(), p.clone());
            let total: ejq_core::polygon::Rational = d.spectrum.iter().cloned().sum();
            prop_assert_eq!(total, rational(1, 1));
        }
    }
}

#[test]
fn quarter_point_spectrum_majorizes_every_decomposition() {
    let sq = PolygonSpace::unit_square();
    let p = Point::from_ratios((1, 2), (1, 4));
    let top = [rational(1, 2), rational(1, 4), rational(1, 4)];
    for d in sq.orthogonal_decompositions(&p, 4).unwrap() {
        let m = majorize_rational(&top, &d.spectrum).unwrap();
        assert!(
            matches!(m, Majorization::Dominates | Majorization::Equal),
            "{:?} vs {:?}: {m:?}",
            top,
            d.spectrum
        );
    }
}
