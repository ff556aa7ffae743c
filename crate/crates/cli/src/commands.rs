//! Subcommand implementations. Each returns a [`Report`] and whether it passed.

use std::path::Path;

use ejq_core::checks::{self, SweepConfig, SweepReport};
use ejq_core::exec::Execution;
use ejq_core::info;
use ejq_core::jordan::{Algebra, Element, StateElement};
use ejq_core::polygon::{self, Point, PolygonSpace, Rational};
use ejq_core::regret::{self, RegretGame};
use ejq_core::spectral;
use ejq_core::division::Ring;

use crate::input;
use crate::report::{Cell, Report, Section};
use crate::{CheckCommand, CliError, Command, DerivativeOrder, Fixture, MinimaxArgs, SweepArgs};

pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self {
            report,
            passed: true,
        }
    }
}

/// Algebras covered by `--algebra all`.
pub const ALL_ALGEBRAS: [Algebra; 5] = [
    Algebra::Spin(3),
    Algebra::Herm(Ring::R, 3),
    Algebra::Herm(Ring::C, 3),
    Algebra::Herm(Ring::H, 2),
    Algebra::Albert,
];

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Spectrum { file } => spectrum(&input::parse_element(&read(file)?)?),
        Command::Entropy { file } => {
            let x = input::parse_element(&read(file)?)?;
            let mut r = Report::new("entropy");
            r.push(Section::record("entropy", vec![("entropy", info::entropy(&x)?.into())]));
            Ok(Outcome::ok(r))
        }
        Command::Div { rho, sigma, alpha } => {
            let rho = input::parse_state(&read(rho)?)?;
            let sigma = input::parse_state(&read(sigma)?)?;
            divergence(&rho, &sigma, *alpha)
        }
        Command::Capacity { file, tol } => {
            capacity(&input::parse_state_list(&read(file)?)?, *tol)
        }
        Command::Minimax(args) => minimax(args),
        Command::Check(c) => check(c),
        Command::Square { point, polygon } => {
            let space = match polygon {
                Some(p) => input::parse_polygon(&read(p)?)?,
                None => PolygonSpace::unit_square(),
            };
            let point = Point::parse(point).map_err(|e| CliError::Usage(e.to_string()))?;
            square(&space, &point)
        }
        Command::ProbePolygon {
            file,
            grid,
            sequential,
        } => {
            let space = match file {
                Some(p) => input::parse_polygon(&read(p)?)?,
                None => PolygonSpace::unit_square(),
            };
            probe(&space, *grid, exec(*sequential))
        }
    }
}

fn exec(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

pub fn spectrum(x: &Element) -> Result<Outcome, CliError> {
    let d = spectral::eigendecompose(x)?;
    let mut s = Section::new("spectrum", &["eigenvalue", "multiplicity"]);
    for (l, m) in d.eigenvalues.iter().zip(&d.multiplicities) {
        s.row(vec![(*l).into(), (*m).into()]);
    }
    let mut r = Report::new("spectrum");
    r.push(s);
    Ok(Outcome::ok(r))
}

fn value(v: info::DivergenceValue) -> Cell {
    Cell::Num(v.finite().unwrap_or(f64::INFINITY))
}

pub fn divergence(
    rho: &StateElement,
    sigma: &StateElement,
    alpha: Option<f64>,
) -> Result<Outcome, CliError> {
    let (name, d) = match alpha {
        Some(a) => ("renyi", info::renyi_sandwiched(rho, sigma, a)?),
        None => ("divergence", info::divergence(rho.element(), sigma.element())?),
    };
    let mut r = Report::new("div");
    r.push(Section::record(name, vec![(name, value(d))]));
    Ok(Outcome::ok(r))
}

pub fn capacity(states: &[StateElement], tol: f64) -> Result<Outcome, CliError> {
    let c = regret::capacity(states, tol)?;
    let mut r = Report::new("capacity");
    r.push(Section::record(
        "capacity",
        vec![
            ("capacity", c.capacity.into()),
            ("upper", c.upper.into()),
            ("iterations", c.iterations.into()),
        ],
    ));
    let mut prior = Section::new("prior", &["state", "weight", "divergence"]);
    for (i, (w, d)) in c.prior.iter().zip(&c.divergences).enumerate() {
        prior.row(vec![i.into(), (*w).into(), (*d).into()]);
    }
    r.push(prior);
    Ok(Outcome::ok(r))
}

/// Weight vectors with denominator `n` on the `k`-simplex.
fn simplex_grid(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            go(k - 1, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n, &mut Vec::new(), &mut out);
    out
}

const MAX_PREDICTIONS: usize = 20_000;

fn minimax(args: &MinimaxArgs) -> Result<Outcome, CliError> {
    let src = &args.source;
    let mut r = Report::new("minimax");
    let (game, labels): (RegretGame, Vec<String>) = if let Some(path) = &src.game {
        let g = RegretGame::new(input::parse_payoff(&read(path)?)?)
            .map_err(|e| CliError::Schema {
                path: "$.payoff".into(),
                msg: e.to_string(),
            })?;
        let labels = (0..g.cols()).map(|j| format!("a{j}")).collect();
        (g, labels)
    } else if let Some(Fixture::Interval) = src.fixture {
        let f = regret::interval_fixture();
        let g = f.problem.game(&f.states, Execution::Sequential)?;
        (g, vec!["1-2s".into(), "2s-1".into()])
    } else {
        let path = src.file.as_ref().expect("clap enforces one source");
        let states = input::parse_state_list(&read(path)?)?;
        if args.grid == 0 {
            return Err(CliError::Usage("--grid must be positive".into()));
        }
        let weights = simplex_grid(states.len(), args.grid);
        if weights.len() > MAX_PREDICTIONS {
            return Err(CliError::Usage(format!(
                "{} predictions; lower --grid or use fewer states",
                weights.len()
            )));
        }
        let n = args.grid as f64;
        let predictions: Vec<Element> = weights
            .iter()
            .map(|w| {
                let mut e = Element::zero(states[0].algebra());
                for (k, s) in w.iter().zip(&states) {
                    e = &e + &s.element().scale(*k as f64 / n);
                }
                e
            })
            .collect();
        let elems: Vec<Element> = states.iter().map(|s| s.element().clone()).collect();
        let (g, kept) = regret::divergence_game(&elems, &predictions, Execution::default())?;
        let labels = kept
            .iter()
            .map(|&j| {
                weights[j]
                    .iter()
                    .map(|k| format!("{k}/{}", args.grid))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        (g, labels)
    };
    let sol = regret::minimax_regret(&game, args.tol)?;
    r.push(Section::record(
        "value",
        vec![
            ("value", sol.value.into()),
            ("lower", sol.lower.into()),
            ("upper", sol.upper.into()),
            ("gap", sol.gap().into()),
            ("iterations", sol.iterations.into()),
        ],
    ));
    let mut prior = Section::new("prior", &["state", "weight"]);
    for (i, w) in sol.prior.iter().enumerate() {
        prior.row(vec![i.into(), (*w).into()]);
    }
    r.push(prior);
    let mut action = Section::new("action", &["action", "weight"]);
    for (label, w) in labels.iter().zip(&sol.action) {
        if *w > 1e-12 {
            action.row(vec![label.as_str().into(), (*w).into()]);
        }
    }
    r.push(action);
    Ok(Outcome::ok(r))
}

fn algebras(spec: &str) -> Result<Vec<Algebra>, CliError> {
    if spec.trim() == "all" {
        Ok(ALL_ALGEBRAS.to_vec())
    } else {
        spec.split(',').map(input::parse_algebra_descriptor).collect()
    }
}

fn configs(args: &SweepArgs, default_trials: usize) -> Result<Vec<SweepConfig>, CliError> {
    let trials = args.trials.unwrap_or(default_trials);
    Ok(algebras(&args.algebra)?
        .into_iter()
        .map(|a| SweepConfig::new(a, trials, args.seed).with_exec(exec(args.sequential)))
        .collect())
}

/// Sweep results with the asserted flag; unasserted sweeps never fail the run.
struct Sweeps(Vec<(SweepReport, bool)>);

impl Sweeps {
    fn into_outcome(self, command: &str, extra: Vec<Section>) -> Outcome {
        let mut r = Report::new(command);
        let mut summary = Section::new(
            "summary",
            &[
                "check",
                "algebra",
                "trials",
                "evaluated",
                "failures",
                "worst",
                "tolerance",
                "status",
            ],
        );
        let mut worst = Section::new(
            "worst",
            &["check", "algebra", "index", "seed", "violation", "detail"],
        );
        let mut passed = true;
        for (s, asserted) in &self.0 {
            let status = match (s.passed(), asserted) {
                (true, true) => "pass",
                (false, true) => "FAIL",
                (_, false) => "reported",
            };
            passed &= s.passed() || !asserted;
            let w = s.worst();
            summary.row(vec![
                s.check.name().into(),
                input::algebra_descriptor(s.algebra).into(),
                s.trials.len().into(),
                s.evaluated().into(),
                s.failures().into(),
                w.and_then(|t| t.violation).map_or(Cell::text("-"), Cell::Num),
                s.tolerance.into(),
                status.into(),
            ]);
            if !s.passed() {
                if let Some(t) = w {
                    worst.row(vec![
                        s.check.name().into(),
                        input::algebra_descriptor(s.algebra).into(),
                        t.index.into(),
                        t.seed.into(),
                        t.violation.map_or(Cell::text("-"), Cell::Num),
                        t.detail.as_str().into(),
                    ]);
                }
            }
        }
        r.push(summary);
        for s in extra {
            r.push(s);
        }
        if !worst.rows.is_empty() {
            r.push(worst);
        }
        Outcome { report: r, passed }
    }
}

fn run_sweeps(
    cfgs: &[SweepConfig],
    f: impl Fn(&SweepConfig) -> ejq_core::Result<SweepReport>,
    asserted: impl Fn(Algebra) -> bool,
) -> Result<Sweeps, CliError> {
    cfgs.iter()
        .map(|c| Ok((f(c)?, asserted(c.algebra))))
        .collect::<Result<Vec<_>, CliError>>()
        .map(Sweeps)
}

fn check(cmd: &CheckCommand) -> Result<Outcome, CliError> {
    let always = |_: Algebra| true;
    match cmd {
        CheckCommand::Dpi { sweep, depth } => {
            let cfgs = configs(sweep, 1000)?;
            let d = *depth;
            let s = run_sweeps(
                &cfgs,
                |c| checks::dpi_sweep_with_depth(c, d),
                Algebra::is_special,
            )?;
            Ok(s.into_outcome("check dpi", vec![]))
        }
        CheckCommand::Concavity { sweep } => {
            let s = run_sweeps(&configs(sweep, 500)?, checks::concavity_sweep, always)?;
            Ok(s.into_outcome("check concavity", vec![square_concavity()?]))
        }
        CheckCommand::Derivative { sweep, order } => {
            let cfgs = configs(sweep, 100)?;
            let mut all = Vec::new();
            if matches!(order, DerivativeOrder::First | DerivativeOrder::Both) {
                all.extend(run_sweeps(&cfgs, checks::first_derivative_sweep, always)?.0);
            }
            if matches!(order, DerivativeOrder::Second | DerivativeOrder::Both) {
                all.extend(run_sweeps(&cfgs, checks::second_derivative_sweep, always)?.0);
            }
            Ok(Sweeps(all).into_outcome("check derivative", vec![]))
        }
        CheckCommand::Locality { sweep } => {
            let s = run_sweeps(&configs(sweep, 200)?, checks::locality_sweep, always)?;
            Ok(s.into_outcome("check locality", vec![]))
        }
        CheckCommand::BregmanIdentity { sweep } => {
            let s = run_sweeps(&configs(sweep, 100)?, checks::bregman_identity_sweep, always)?;
            let (section, exact) = interval_identity()?;
            let mut out = s.into_outcome("check bregman-identity", vec![section]);
            out.passed &= exact;
            Ok(out)
        }
        CheckCommand::StrongMonotonicity { sweep, depth } => {
            let mut cfgs = configs(sweep, 200)?;
            if sweep.algebra.trim() == "all" {
                cfgs.retain(|c| matches!(c.algebra, Algebra::Spin(_)));
            }
            let d = *depth;
            let s = run_sweeps(&cfgs, |c| checks::strong_monotonicity_sweep(c, d), always)?;
            Ok(s.into_outcome("check strong-monotonicity", vec![]))
        }
    }
}

/// The interval fixture terms, and whether they match `0, 2/3, 0` exactly.
fn interval_identity() -> Result<(Section, bool), CliError> {
    let f = regret::interval_fixture();
    let id = f
        .problem
        .bregman_identity(&f.prior, &f.states, &f.probe)?;
    let residual = id.residual();
    let expected = [
        polygon::rational(0, 1),
        polygon::rational(2, 3),
        polygon::rational(0, 1),
    ];
    let exact = [&id.lhs, &id.middle, &id.last]
        .into_iter()
        .zip(&expected)
        .all(|(a, b)| a == b);
    let section = Section::record(
        "interval",
        vec![
            ("lhs", (&id.lhs).into()),
            ("middle", (&id.middle).into()),
            ("last", (&id.last).into()),
            ("residual", residual.into()),
        ],
    );
    Ok((section, exact))
}

/// Entropy of the square's center against its endpoints `(1/2, 1/4)` and `(1/2, 3/4)`.
fn square_concavity() -> Result<Section, CliError> {
    let sq = PolygonSpace::unit_square();
    let h = |x: (i64, i64), y: (i64, i64)| sq.entropy(&Point::from_ratios(x, y)).map(|(h, _)| h);
    let a = h((1, 2), (1, 4))?;
    let b = h((1, 2), (3, 4))?;
    let center = h((1, 2), (1, 2))?;
    let mean = 0.5 * (a + b);
    Ok(Section::record(
        "square",
        vec![
            ("center", center.into()),
            ("endpoint_mean", mean.into()),
            ("concave", (center >= mean - 1e-12).into()),
        ],
    ))
}

fn spectrum_text(spec: &[Rational]) -> String {
    let parts: Vec<String> = spec.iter().map(polygon::format_rational).collect();
    format!("({})", parts.join(", "))
}

pub fn square(space: &PolygonSpace, point: &Point) -> Result<Outcome, CliError> {
    let (h, best) = space.entropy(point)?;
    let decs = space.orthogonal_decompositions(point, 4)?;
    let mut r = Report::new("square");
    let mut spec = Section::new("spectrum", &["index", "value"]);
    for (i, w) in best.spectrum.iter().enumerate() {
        spec.row(vec![i.into(), w.into()]);
    }
    r.push(spec);
    r.push(Section::record(
        "entropy",
        vec![("point", point.to_string().into()), ("entropy", h.into())],
    ));
    let mut all = Section::new("decompositions", &["kind", "spectrum", "parts", "entropy"]);
    for d in &decs {
        let parts: Vec<String> = d
            .parts
            .iter()
            .map(|(p, w)| format!("{}*{p}", polygon::format_rational(w)))
            .collect();
        all.row(vec![
            format!("{:?}", d.kind).to_lowercase().into(),
            spectrum_text(&d.spectrum).into(),
            parts.join(" + ").into(),
            d.entropy().into(),
        ]);
    }
    r.push(all);
    Ok(Outcome::ok(r))
}

pub fn probe(space: &PolygonSpace, grid: usize, exec: Execution) -> Result<Outcome, CliError> {
    let points = polygon::grid_points(space, grid);
    let p = polygon::spectrality_probe(space, &points, exec)?;
    let mut r = Report::new("probe-polygon");
    r.push(Section::record(
        "probe",
        vec![
            ("points", p.points.len().into()),
            ("rank", p.rank.into()),
            ("max_terms", p.max_terms.into()),
            ("decompositions", "orthogonal only".into()),
            ("spectral", p.spectral.into()),
            ("at_most_3_terms", p.caratheodory.into()),
        ],
    ));
    if let Some(w) = &p.witness {
        r.push(Section::record(
            "witness",
            vec![
                ("point", w.point.to_string().into()),
                ("low", spectrum_text(&w.low).into()),
                ("high", spectrum_text(&w.high).into()),
                ("low_entropy", polygon::spectrum_entropy(&w.low).into()),
                ("high_entropy", polygon::spectrum_entropy(&w.high).into()),
            ],
        ));
    }
    let mut ns = Section::new("non_spectral", &["point", "spectra", "entropy_gap"]);
    for pr in p.points.iter().filter(|r| !r.is_spectral()) {
        let spectra: Vec<String> = pr.spectra.iter().map(|s| spectrum_text(s)).collect();
        ns.row(vec![
            pr.point.to_string().into(),
            spectra.join(" ").into(),
            pr.entropy_gap().into(),
        ]);
    }
    r.push(ns);
    Ok(Outcome::ok(r))
}
