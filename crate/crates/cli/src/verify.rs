use std::time::Instant;

use clap::ValueEnum;
use grover_coherence::analytic::{
    c_alpha_ho_exact, c_alpha_max_asymptotic, c_alpha_two_level_exact, complementarity_residual, p_k,
    target_spectrum,
};
use grover_coherence::coherence::mixed::{
    c_alpha_mixed, coherence_objective, optimal_incoherent_state, SmallDensityMatrix,
};
use grover_coherence::coherence::{
    c_alpha_max_pure, c_alpha_pure, relative_entropy_coherence, skew_info_coherence, ProbabilityVector,
};
use grover_coherence::dynamics::{
    delta_between, delta_within, relation_residual, turning_point, Operator, PoweredCoherence, Units,
};
use grover_coherence::engine::{fwht, run, Detail, Stage, StageMask, StateVector};
use grover_coherence::model::{grover_angle, optimal_iterations, two_level_state};
use grover_coherence::{make_config, AlphaParam, GroverConfig, TargetSet, TargetSpec};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const GRID_ALPHAS: [f64; 7] = [0.3, 0.5, 0.7, 1.0 - 1e-7, 1.0 + 1e-7, 1.5, 2.0];
const MAX_LISTED: usize = 20;

const TOL_FWHT: f64 = 1e-12;
const TOL_NORM: f64 = 1e-10;
const TOL_INVARIANT: f64 = 1e-12;
const TOL_CLOSED_FORM: f64 = 1e-9;
const TOL_PROBABILITY: f64 = 1e-10;
const TOL_LIMIT: f64 = 1e-6;
const TOL_MINIMIZER: f64 = 1e-8;
const TOL_RAW_IDENTITY: f64 = 1e-12;
const TOL_RELATION: f64 = 0.03;
const TOL_ENDPOINT: f64 = 0.05;
const TOL_COMPLEMENTARITY: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// grids up to n = 10
    Fast,
    /// adds the n = 16 and n = 18 scenarios
    Full,
}

/// Deliberate defects for checking that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    None,
    /// oracle multiplies target amplitudes by +1 instead of -1
    SignFlippedOracle,
}

#[derive(Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub fatal: bool,
    pub passed: bool,
    pub checks: u64,
    pub failure_count: u64,
    pub counterexamples: Vec<String>,
    pub notes: Vec<String>,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub level: Level,
    pub mutation: Mutation,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

struct Suite {
    result: SuiteResult,
    start: Instant,
}

impl Suite {
    fn new(name: &'static str, fatal: bool) -> Self {
        Self {
            result: SuiteResult {
                name,
                fatal,
                passed: true,
                checks: 0,
                failure_count: 0,
                counterexamples: Vec::new(),
                notes: Vec::new(),
                seconds: 0.0,
            },
            start: Instant::now(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.result.checks += 1;
        if !ok {
            self.result.passed = false;
            self.result.failure_count += 1;
            if self.result.counterexamples.len() < MAX_LISTED {
                self.result.counterexamples.push(what());
            }
        }
    }

    fn note(&mut self, text: String) {
        self.result.notes.push(text);
    }

    fn finish(mut self) -> SuiteResult {
        self.result.seconds = self.start.elapsed().as_secs_f64();
        self.result
    }
}

fn alpha(a: f64) -> AlphaParam {
    AlphaParam::new(a).expect("grid alpha")
}

fn grid_alphas() -> Vec<AlphaParam> {
    GRID_ALPHAS.iter().map(|&a| alpha(a)).collect()
}

/// Deterministic `t` distinct targets spread over the register.
fn grid_config(n: u32, t: u64) -> GroverConfig {
    let size = 1u64 << n;
    let stride = size / 4 + 1;
    let idx = (0..t).map(|j| (j * stride + 3 * n as u64) % size).collect();
    make_config(n, &TargetSpec::Indices(idx)).expect("grid config")
}

fn grid(level: Level) -> Vec<GroverConfig> {
    let top = match level {
        Level::Fast => 10,
        Level::Full => 16,
    };
    let mut out: Vec<GroverConfig> = (3..=top).flat_map(|n| (1..=4).map(move |t| grid_config(n, t))).collect();
    if level == Level::Full {
        out.push(make_config(18, &TargetSpec::Pattern(format!("{}**", "0".repeat(16)))).expect("product"));
        out.push(make_config(18, &TargetSpec::Indices(vec![0, 3, 5, 6])).expect("entangled"));
    }
    out
}

fn example1() -> GroverConfig {
    make_config(16, &TargetSpec::Indices(vec![0, 1])).expect("example 1")
}

fn apply_oracle(state: &mut StateVector<f64>, targets: &TargetSet, mutation: Mutation) {
    match mutation {
        Mutation::None => state.apply_oracle(targets),
        Mutation::SignFlippedOracle => {}
    }
}

fn fwht_suite() -> SuiteResult {
    let mut s = Suite::new("fwht", true);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 0..=6u32 {
        let size = 1usize << n;
        let scale = (size as f64).sqrt().recip();
        let x: Vec<f64> = (0..size).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut y = x.clone();
        fwht(&mut y).expect("power of two");
        for (i, yi) in y.iter().enumerate() {
            let dense: f64 =
                (0..size).map(|j| if (i & j).count_ones() % 2 == 0 { x[j] } else { -x[j] }).sum::<f64>() * scale;
            s.check((yi - dense).abs() <= TOL_FWHT, || format!("n={n} i={i}: {yi} vs {dense}"));
        }
    }
    for n in [8u32, 12] {
        let x: Vec<f64> = (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut y = x.clone();
        fwht(&mut y).expect("power of two");
        fwht(&mut y).expect("power of two");
        let err = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        s.check(err <= 1e-9, || format!("involution n={n}: {err:e}"));
    }
    s.finish()
}

/// Stage-by-stage agreement of the simulation with the two-level closed forms.
fn engine_suite(level: Level, mutation: Mutation) -> SuiteResult {
    let mut s = Suite::new("engine-invariants", true);
    for config in grid(level) {
        let alphas = if config.qubits() > 16 { vec![alpha(0.5), alpha(1.5), alpha(2.0)] } else { grid_alphas() };
        let (n, t, size) = (config.qubits(), config.target_count(), config.size());
        let targets = config.targets();
        let spectrum = target_spectrum(&config);
        let theta: f64 = grover_angle(&config);
        let mut state = StateVector::<f64>::uniform(n);
        let coherence = |st: &StateVector<f64>| -> Vec<f64> {
            let h = st.histogram();
            alphas.iter().map(|&a| c_alpha_pure(&h, a)).collect()
        };
        for k in 0..=optimal_iterations(&config) {
            let two = two_level_state::<f64>(&config, k);
            let c_psi = coherence(&state);
            let p = state.success_probability(targets);
            s.check((p - p_k(theta, k)).abs() <= TOL_PROBABILITY, || {
                format!("n={n} t={t} k={k}: P_k {p} vs {}", p_k(theta, k))
            });
            for (c, &a) in c_psi.iter().zip(&alphas) {
                let e = c_alpha_two_level_exact(size, t, &two, a).value;
                s.check((c - e).abs() <= TOL_CLOSED_FORM * e.abs().max(1.0), || {
                    format!("n={n} t={t} k={k} alpha={a}: C(psi_k) {c} vs closed form {e}")
                });
            }
            apply_oracle(&mut state, targets, mutation);
            let c_o = coherence(&state);
            state.fwht();
            let c_ho = coherence(&state);
            for (c, &a) in c_ho.iter().zip(&alphas) {
                let e = c_alpha_ho_exact(&spectrum, &two, a).value;
                s.check((c - e).abs() <= TOL_CLOSED_FORM * e.abs().max(1.0), || {
                    format!("n={n} t={t} k={k} alpha={a}: C(psi_kH_O) {c} vs spectrum form {e}")
                });
            }
            state.apply_phase_shift();
            let c_p = coherence(&state);
            state.fwht();
            for i in 0..alphas.len() {
                let (d_o, d_p) = ((c_o[i] - c_psi[i]).abs(), (c_p[i] - c_ho[i]).abs());
                s.check(d_o.max(d_p) <= TOL_INVARIANT * c_psi[i].abs().max(1.0), || {
                    format!("n={n} t={t} k={k} alpha={}: O changed C by {d_o:e}, P by {d_p:e}", alphas[i])
                });
            }
            let norm = state.norm_sqr();
            s.check((norm - 1.0).abs() <= TOL_NORM, || format!("n={n} t={t} k={k}: norm^2 {norm}"));
        }
    }
    s.finish()
}

fn random_probabilities(rng: &mut ChaCha8Rng, d: usize) -> ProbabilityVector<f64> {
    let w: Vec<f64> = (0..d).map(|_| rng.gen::<f64>().powi(3)).collect();
    let total: f64 = w.iter().sum();
    ProbabilityVector::new(w.iter().map(|x| x / total).collect()).expect("normalized")
}

fn random_density(rng: &mut ChaCha8Rng, d: usize, rank: usize) -> SmallDensityMatrix {
    let g = DMatrix::from_fn(d, rank, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = &g * g.adjoint();
    let tr: f64 = (0..d).map(|i| m[(i, i)].re).sum();
    SmallDensityMatrix::new(m.map(|z| z / tr)).expect("density matrix")
}

fn coherence_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("coherence", true);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let alphas = grid_alphas();
    for _ in 0..500 {
        let d = rng.gen_range(2..=64);
        let p = random_probabilities(&mut rng, d);
        for &a in &alphas {
            let c: f64 = c_alpha_pure(&p, a);
            let cap: f64 = c_alpha_max_pure(d, a);
            s.check(c >= -1e-12 && c <= cap + 1e-9, || format!("d={d} alpha={a}: C={c} outside [0, {cap}]"));
        }
        let half: f64 = c_alpha_pure(&p, alpha(0.5));
        let skew: f64 = skew_info_coherence(&p);
        s.check((half - 2.0 * skew).abs() <= 1e-12, || format!("d={d}: C_1/2={half} vs 2 C_s={}", 2.0 * skew));
        let limit: f64 = c_alpha_pure(&p, AlphaParam::limit_one());
        let bits: f64 = relative_entropy_coherence(&p);
        s.check((limit - std::f64::consts::LN_2 * bits).abs() <= TOL_LIMIT, || {
            format!("d={d}: limit branch {limit} vs ln2 C_r {}", std::f64::consts::LN_2 * bits)
        });
    }
    let samples = match level {
        Level::Fast => 10_000,
        Level::Full => 100_000,
    };
    for d in [2usize, 3] {
        let rho = random_density(&mut rng, d, d);
        let minima: Vec<f64> = alphas.iter().map(|&a| c_alpha_mixed(&rho, a)).collect();
        for (&a, &m) in alphas.iter().zip(&minima) {
            let star = optimal_incoherent_state(&rho, a).expect("sigma*");
            let v = coherence_objective(&rho, &star, a).expect("objective");
            s.check((v - m).abs() <= 1e-10, || format!("d={d} alpha={a}: objective(sigma*) {v} vs {m}"));
        }
        for _ in 0..samples {
            let w: Vec<f64> = (0..d).map(|_| -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln()).collect();
            let total: f64 = w.iter().sum();
            let sigma = SmallDensityMatrix::diagonal(&w.iter().map(|x| x / total).collect::<Vec<_>>())
                .expect("diagonal");
            for (&a, &m) in alphas.iter().zip(&minima) {
                let f = coherence_objective(&rho, &sigma, a).expect("objective");
                s.check(f >= m - TOL_MINIMIZER, || format!("d={d} alpha={a}: sampled sigma gives {f} < {m}"));
            }
        }
    }
    s.finish()
}

fn spectrum_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("spectrum", true);
    for config in grid(level) {
        let r = target_spectrum(&config);
        s.check(r.parseval_holds() && r.parity_holds(), || {
            format!("n={} targets={:?}: Parseval or parity fails", config.qubits(), config.targets().indices())
        });
    }
    s.finish()
}

fn depletion_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("monotone-depletion", true);
    for config in grid(level) {
        let (size, t) = (config.size(), config.target_count());
        for a in grid_alphas() {
            let mut prev = f64::INFINITY;
            for k in 0..=optimal_iterations(&config) {
                let c: f64 = c_alpha_two_level_exact(size, t, &two_level_state(&config, k), a).value;
                s.check(c < prev, || format!("n={} t={t} alpha={a} k={k}: {c} >= {prev}", config.qubits()));
                prev = c;
            }
        }
    }
    s.finish()
}

fn dynamics_case(s: &mut Suite, config: &GroverConfig, gamma: f64, endpoints: bool) {
    let k_opt = optimal_iterations(config);
    let n = config.qubits();
    let tr = run::<f64>(config, k_opt, StageMask::WITH_PHASE, Detail::Histogram).expect("trajectory");
    let p = PoweredCoherence::new(&tr, alpha(2.0));
    let g = delta_between(&p, Operator::G).expect("G");
    let ho = delta_between(&p, Operator::HO).expect("H_O");
    let hp = delta_between(&p, Operator::HP).expect("H_P");
    for k in 1..=k_opt.saturating_sub(2) {
        s.check(g.values[k] < 0.0 && ho.values[k] > 0.0 && hp.values[k] < 0.0, || {
            format!("n={n} k={k}: signs G {:e} H_O {:e} H_P {:e}", g.values[k], ho.values[k], hp.values[k])
        });
    }
    for r in relation_residual(&p, config.size(), gamma, Units::Raw).expect("raw") {
        s.check(r.g_vs_hp.abs() <= TOL_RAW_IDENTITY, || format!("n={n} k={}: dG - dH_P(k-1) = {:e}", r.k, r.g_vs_hp));
    }
    let tp = turning_point(config, &p, gamma).expect("turning point");
    s.check(tp.agreement().is_some_and(|d| d <= 1), || {
        format!("n={n}: turning point empirical {:?} vs formula {}", tp.empirical, tp.formula)
    });
    s.note(format!(
        "n={n} t={} alpha=2: k_T formula {} empirical H_O {:?} H_P {:?}",
        config.target_count(),
        tp.formula,
        tp.empirical,
        tp.empirical_hp
    ));
    if endpoints {
        for r in relation_residual(&p, config.size(), gamma, Units::PaperUnits).expect("paper") {
            if r.k <= k_opt - 2 {
                s.check(r.g_vs_ho.abs() <= TOL_RELATION, || format!("n={n} k={}: dG + dH_O/gamma = {}", r.k, r.g_vs_ho));
            }
        }
        let within = |op| {
            delta_within(&p, op).and_then(|d| d.to_paper_units(config.size())).expect("within series").values
        };
        let (w_ho, w_hp) = (within(Operator::HO), within(Operator::HP));
        let ends = [(w_hp[0], 1.0), (w_hp[w_hp.len() - 1], -0.5), (w_ho[0], -1.0), (w_ho[w_ho.len() - 1], 0.5)];
        for (v, e) in ends {
            s.check((v - e).abs() <= TOL_ENDPOINT, || format!("n={n}: endpoint {v} vs {e}"));
        }
    }
}

fn dynamics_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("dynamics", true);
    dynamics_case(&mut s, &grid_config(10, 1), 1.0, false);
    if level == Level::Full {
        dynamics_case(&mut s, &grid_config(16, 1), 1.0, false);
        dynamics_case(&mut s, &example1(), 0.5, true);
    }
    s.finish()
}

fn complementarity_suite(level: Level) -> SuiteResult {
    let (config, fatal) = match level {
        Level::Fast => (grid_config(10, 2), false),
        Level::Full => (example1(), true),
    };
    let mut s = Suite::new("complementarity", fatal);
    let (size, t) = (config.size(), config.target_count());
    let tr = run::<f64>(&config, optimal_iterations(&config), StageMask::only(&[Stage::PsiK]), Detail::Histogram)
        .expect("trajectory");
    for a in [0.5, 1.5, 2.0] {
        let a = alpha(a);
        let mut worst = 0.0f64;
        for r in &tr.records {
            let res = complementarity_residual(size, t, r.success_prob, a, c_alpha_pure(&r.probs, a));
            worst = worst.max(res.abs());
            s.check(res.abs() <= TOL_COMPLEMENTARITY, || format!("n={} alpha={a} k={}: residual {res}", config.qubits(), r.k));
        }
        s.note(format!("n={} t={t} alpha={a}: max |residual| {worst:.4}", config.qubits()));
    }
    for a in [0.5, 0.7] {
        let a = alpha(a);
        let last = tr.records.last().expect("records");
        let c: f64 = c_alpha_pure(&last.probs, a);
        let normalized = c / c_alpha_max_asymptotic::<f64>(size, a);
        let av = a.get();
        s.note(format!(
            "alpha={a} at k_opt (P={:.6}): N(C) + t^(1-1/alpha) = {:.4}",
            last.success_prob,
            normalized + (t as f64).powf(1.0 - 1.0 / av)
        ));
    }
    s.finish()
}

fn conjecture_suite(level: Level) -> SuiteResult {
    let mut s = Suite::new("conjectured-ho-ordering", false);
    let sizes: Vec<u32> = match level {
        Level::Fast => vec![10],
        Level::Full => (10..=16).collect(),
    };
    for n in sizes {
        let product = make_config(n, &TargetSpec::Indices(vec![0, 1, 2, 3])).expect("product");
        let entangled = make_config(n, &TargetSpec::Indices(vec![0, 3, 5, 6])).expect("entangled");
        let (sp, se) = (target_spectrum(&product), target_spectrum(&entangled));
        for k in 0..=optimal_iterations(&product) {
            let two = two_level_state::<f64>(&product, k);
            for a in [0.5, 0.7, 1.5, 2.0] {
                let ap = alpha(a);
                let (cp, ce): (f64, f64) = (c_alpha_ho_exact(&sp, &two, ap).value, c_alpha_ho_exact(&se, &two, ap).value);
                let holds = if a > 1.0 { cp <= ce } else { cp >= ce };
                s.check(holds, || format!("n={n} k={k} alpha={a}: product {cp} entangled {ce}"));
            }
        }
    }
    s.finish()
}

pub fn run_suites(level: Level, mutation: Mutation) -> Report {
    let suites = vec![
        fwht_suite(),
        engine_suite(level, mutation),
        coherence_suite(level),
        spectrum_suite(level),
        depletion_suite(level),
        dynamics_suite(level),
        complementarity_suite(level),
        conjecture_suite(level),
    ];
    let passed = suites.iter().all(|s| s.passed || !s.fatal);
    Report { level, mutation, passed, suites }
}
