use anyhow::Result;
use clap::Args;
use grover_coherence::analytic::{
    c_alpha_ho_asymptotic, c_alpha_psi_k_asymptotic, gamma_case, p_k, target_spectrum, SpectrumReport,
};
use grover_coherence::coherence::c_alpha_pure;
use grover_coherence::dynamics::{
    classify, delta_between, delta_within, relation_residual, turning_point,
    turning_point_formula, Classification, DeltaKind, DeltaSeries, Operator, PoweredCoherence, TurningPoint, Units,
};
use grover_coherence::engine::{run, Detail, Stage, StageMask, Trajectory};
use grover_coherence::model::grover_angle;
use grover_coherence::{AlphaBranch, AlphaParam, GroverConfig};
use serde::Serialize;

use crate::output::{OutputDir, SeriesRow, COLUMNS};
use crate::scenario::{ScenarioArgs, ScenarioSpec, TargetArgs};
use crate::InvalidInput;

#[derive(Serialize)]
struct Meta<'a, E: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    scenario: &'a ScenarioSpec,
    size: u64,
    t: u64,
    product_targets: bool,
    columns: [&'static str; 8],
    data: String,
    #[serde(flatten)]
    extra: E,
}

fn meta<'a, E: Serialize>(command: &'static str, s: &'a ScenarioSpec, data: String, extra: E) -> Meta<'a, E> {
    Meta {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        scenario: s,
        size: s.config.size(),
        t: s.config.target_count(),
        product_targets: s.config.targets().structure().is_product(),
        columns: COLUMNS,
        data,
        extra,
    }
}

fn file_name(path: &std::path::Path) -> String {
    path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default()
}

/// The tabulated constant for up to four targets, or the exact effective one beyond.
fn tabulated_gamma(config: &GroverConfig, spectrum: &SpectrumReport, alpha: AlphaParam) -> f64 {
    gamma_case(config.target_count(), config.targets().structure()).unwrap_or_else(|_| spectrum.gamma_effective(alpha))
}

fn trajectory(s: &ScenarioSpec) -> Result<Trajectory<f64>> {
    Ok(run::<f64>(&s.config, s.k_max, s.captures, Detail::Histogram)?)
}

#[derive(Serialize)]
struct NoExtra {}

pub fn simulate(args: &ScenarioArgs, out: &mut OutputDir) -> Result<()> {
    for s in args.scenarios(StageMask::WITH_PHASE, &["coherence"])? {
        let tr = trajectory(&s)?;
        let spectrum = target_spectrum(&s.config);
        let (size, t) = (s.config.size(), s.config.target_count());
        let mut rows = Vec::new();
        for &a in &s.alphas {
            let gamma = tabulated_gamma(&s.config, &spectrum, a);
            for k in 0..=s.k_max {
                let p = tr.require(k, Stage::PsiK)?.success_prob;
                for stage in Stage::WITH_PHASE {
                    let rec = tr.require(k, stage)?;
                    let asym = match stage {
                        Stage::PsiK | Stage::PsiKO => c_alpha_psi_k_asymptotic(size, t, p, a).value,
                        Stage::PsiKHO | Stage::PsiKP => c_alpha_ho_asymptotic(gamma, p, size, t, a).value,
                        Stage::PsiKHP => c_alpha_psi_k_asymptotic(size, t, rec.success_prob, a).value,
                    };
                    rows.push(SeriesRow::new(k, stage.name(), a.get(), p, c_alpha_pure(&rec.probs, a), Some(asym), "raw"));
                }
            }
        }
        let data = out.rows(&format!("{}_simulate", s.name), &rows)?;
        out.json(&format!("{}_simulate.meta.json", s.name), &meta("simulate", &s, file_name(&data), NoExtra {}))?;
    }
    Ok(())
}

fn series_kinds() -> [(DeltaKind, Operator, bool); 7] {
    [
        (DeltaKind::G, Operator::G, false),
        (DeltaKind::HOBetween, Operator::HO, false),
        (DeltaKind::HPBetween, Operator::HP, false),
        (DeltaKind::OWithin, Operator::O, true),
        (DeltaKind::HOWithin, Operator::HO, true),
        (DeltaKind::PWithin, Operator::P, true),
        (DeltaKind::HPWithin, Operator::HP, true),
    ]
}

/// Large-database prediction in paper units, where `C^alpha(psi_k) ~ 1 - P_k`
/// and `C^alpha(psi_kH_O) ~ gamma P_k`.
fn predicted(kind: DeltaKind, gamma: f64, p: impl Fn(usize) -> f64, k: usize) -> f64 {
    match kind {
        DeltaKind::G => p(k) - p(k + 1),
        DeltaKind::HOBetween => gamma * (p(k + 1) - p(k)),
        DeltaKind::HPBetween => p(k + 1) - p(k + 2),
        DeltaKind::OWithin | DeltaKind::PWithin => 0.0,
        DeltaKind::HOWithin => gamma * p(k) - (1.0 - p(k)),
        DeltaKind::HPWithin => (1.0 - p(k + 1)) - gamma * p(k),
    }
}

#[derive(Serialize)]
struct RelationSummary {
    max_abs_raw_g_minus_previous_hp: f64,
    max_abs_paper_g_plus_ho_over_gamma: f64,
    through_k: usize,
}

#[derive(Serialize)]
struct AlphaSummary {
    alpha: f64,
    units: &'static str,
    gamma_tabulated: f64,
    gamma_effective: f64,
    turning_point: Option<TurningPoint>,
    turning_point_with_effective_gamma: Option<usize>,
    relation: Option<RelationSummary>,
    classification: Vec<Classification<f64>>,
}

#[derive(Serialize)]
struct DynamicsExtra {
    summary: String,
}

pub fn dynamics(args: &ScenarioArgs, out: &mut OutputDir) -> Result<()> {
    let names: Vec<&str> = series_kinds().iter().map(|(k, _, _)| k.name()).collect();
    for s in args.scenarios(StageMask::WITH_PHASE, &names)? {
        if s.k_max == 0 {
            anyhow::bail!(InvalidInput("dynamics needs --kmax of at least 1".into()));
        }
        let tr = trajectory(&s)?;
        let spectrum = target_spectrum(&s.config);
        let size = s.config.size();
        let theta: f64 = grover_angle(&s.config);
        let p = |k: usize| p_k(theta, k);
        let mut rows = Vec::new();
        let mut summaries = Vec::new();
        for &a in &s.alphas {
            let powered = PoweredCoherence::new(&tr, a);
            let gamma = tabulated_gamma(&s.config, &spectrum, a);
            let paper = a.branch() == AlphaBranch::Above;
            let units = if paper { Units::PaperUnits } else { Units::Raw };
            for (kind, op, within) in series_kinds() {
                let raw: DeltaSeries<f64> =
                    if within { delta_within(&powered, op)? } else { delta_between(&powered, op)? };
                let series = if paper { raw.to_paper_units(size)? } else { raw };
                for (k, &v) in series.values.iter().enumerate() {
                    let measured_p = tr.require(k, Stage::PsiK)?.success_prob;
                    let asym = paper.then(|| predicted(kind, gamma, p, k));
                    rows.push(SeriesRow::new(k, kind.name(), a.get(), measured_p, v, asym, units.name()));
                }
            }
            let gamma_effective = spectrum.gamma_effective(a);
            let (tp, tp_eff, relation) = if paper {
                let through = s.k_opt.min(s.k_max).saturating_sub(2);
                let raw = relation_residual(&powered, size, gamma, Units::Raw)?;
                let scaled = relation_residual(&powered, size, gamma, Units::PaperUnits)?;
                (
                    Some(turning_point(&s.config, &powered, gamma)?),
                    Some(turning_point_formula(theta, gamma_effective)),
                    Some(RelationSummary {
                        max_abs_raw_g_minus_previous_hp: raw.iter().map(|r| r.g_vs_hp.abs()).fold(0.0, f64::max),
                        max_abs_paper_g_plus_ho_over_gamma: scaled
                            .iter()
                            .filter(|r| r.k <= through)
                            .map(|r| r.g_vs_ho.abs())
                            .fold(0.0, f64::max),
                        through_k: through,
                    }),
                )
            } else {
                (None, None, None)
            };
            summaries.push(AlphaSummary {
                alpha: a.get(),
                units: units.name(),
                gamma_tabulated: gamma,
                gamma_effective,
                turning_point: tp,
                turning_point_with_effective_gamma: tp_eff,
                relation,
                classification: classify(&powered)?,
            });
        }
        let data = out.rows(&format!("{}_dynamics", s.name), &rows)?;
        let summary = out.json(&format!("{}_dynamics_summary.json", s.name), &summaries)?;
        let extra = DynamicsExtra { summary: file_name(&summary) };
        out.json(&format!("{}_dynamics.meta.json", s.name), &meta("dynamics", &s, file_name(&data), extra))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    /// Alphas at which to report the effective spectral constant
    #[arg(long = "alpha", value_parser = crate::scenario::parse_alpha, default_values_t = [AlphaParam::new(2.0).unwrap(), AlphaParam::new(1.5).unwrap()])]
    pub alphas: Vec<AlphaParam>,
}

#[derive(Serialize)]
struct GammaAt {
    alpha: f64,
    gamma_effective: f64,
}

#[derive(Serialize)]
struct SpectrumOut {
    scenario: String,
    n: u32,
    t: u64,
    product_targets: bool,
    report: SpectrumReport,
    magnitude_histogram: std::collections::BTreeMap<u64, u64>,
    sum_squares: i128,
    parseval_holds: bool,
    parity_holds: bool,
    gamma_tabulated: Option<f64>,
    gamma_rms: f64,
    gamma_effective: Vec<GammaAt>,
}

pub fn spectrum(args: &SpectrumArgs, out: &mut OutputDir) -> Result<()> {
    for (name, config) in args.target.resolve()? {
        let report = target_spectrum(&config);
        let value = SpectrumOut {
            scenario: name.clone(),
            n: config.qubits(),
            t: config.target_count(),
            product_targets: config.targets().structure().is_product(),
            magnitude_histogram: report.magnitude_histogram(),
            sum_squares: report.sum_squares(),
            parseval_holds: report.parseval_holds(),
            parity_holds: report.parity_holds(),
            gamma_tabulated: gamma_case(config.target_count(), config.targets().structure()).ok(),
            gamma_rms: report.gamma_rms(),
            gamma_effective: args
                .alphas
                .iter()
                .map(|&a| GammaAt { alpha: a.get(), gamma_effective: report.gamma_effective(a) })
                .collect(),
            report,
        };
        out.json(&format!("{name}_spectrum.json"), &value)?;
    }
    Ok(())
}
