//! Production and depletion of coherence by the individual operators.
//!
//! All differences are taken on the powered quantity `C_alpha^alpha`. In
//! "paper units" they are divided by `N^(alpha-1) / (alpha-1)^alpha`, which
//! turns the large-database laws into plain success-probability
//! differences, e.g. `Delta G ~ P_k - P_{k+1}`.

use serde::Serialize;

use crate::coherence::{c_alpha_pure, AlphaBranch, AlphaParam};
use crate::engine::{Stage, Trajectory};
use crate::error::{Error, Result};
use crate::model::{grover_angle, optimal_iterations, GroverConfig};
use crate::scalar::Real;

/// Changes smaller than this (raw units) count as no change.
pub const DEAD_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Operator {
    /// the whole iteration
    G,
    O,
    /// first Hadamard layer
    HO,
    P,
    /// second Hadamard layer
    HP,
}

impl Operator {
    pub fn name(self) -> &'static str {
        match self {
            Operator::G => "G",
            Operator::O => "O",
            Operator::HO => "H_O",
            Operator::P => "P",
            Operator::HP => "H_P",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeltaKind {
    /// `C(psi_{k+1}) - C(psi_k)`
    G,
    /// `C(psi_{(k+1)H_O}) - C(psi_kH_O)`
    HOBetween,
    /// `C(psi_{(k+1)H_P}) - C(psi_kH_P)`
    HPBetween,
    /// `C(psi_kO) - C(psi_k)`
    OWithin,
    /// `C(psi_kH_O) - C(psi_kO)`
    HOWithin,
    /// `C(psi_kP) - C(psi_kH_O)`
    PWithin,
    /// `C(psi_kH_P) - C(psi_kP)`
    HPWithin,
}

impl DeltaKind {
    pub fn name(self) -> &'static str {
        match self {
            DeltaKind::G => "G",
            DeltaKind::HOBetween => "HO_between",
            DeltaKind::HPBetween => "HP_between",
            DeltaKind::OWithin => "O_within",
            DeltaKind::HOWithin => "HO_within",
            DeltaKind::PWithin => "P_within",
            DeltaKind::HPWithin => "HP_within",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Units {
    Raw,
    PaperUnits,
}

impl Units {
    pub fn name(self) -> &'static str {
        match self {
            Units::Raw => "raw",
            Units::PaperUnits => "paper",
        }
    }
}

/// Per-`k` differences of `C_alpha^alpha`, `k = 0..k_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaSeries<T> {
    pub which: DeltaKind,
    pub alpha: AlphaParam,
    pub units: Units,
    pub values: Vec<T>,
}

/// `N^(alpha-1) / |alpha-1|^alpha`; undefined on the `alpha -> 1` branch.
pub fn paper_unit_scale<T: Real>(size: u64, alpha: AlphaParam) -> Result<T> {
    if alpha.branch() == AlphaBranch::Limit {
        return Err(Error::AlphaOutOfRange(alpha.get()));
    }
    let a = alpha.value::<T>();
    let n = T::from_u64(size).unwrap();
    Ok(n.powf(a - T::one()) / (a - T::one()).abs().powf(a))
}

impl<T: Real> DeltaSeries<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_paper_units(&self, size: u64) -> Result<Self> {
        if self.units == Units::PaperUnits {
            return Ok(self.clone());
        }
        let scale: T = paper_unit_scale(size, self.alpha)?;
        Ok(Self {
            which: self.which,
            alpha: self.alpha,
            units: Units::PaperUnits,
            values: self.values.iter().map(|&v| v / scale).collect(),
        })
    }
}

/// `C_alpha^alpha` of every stage along a trajectory.
#[derive(Debug, Clone)]
pub struct PoweredCoherence<T> {
    pub alpha: AlphaParam,
    pub k_max: usize,
    stages: Vec<(Stage, Vec<Option<T>>)>,
}

impl<T: Real> PoweredCoherence<T> {
    pub fn new(trajectory: &Trajectory<T>, alpha: AlphaParam) -> Self {
        let a = alpha.value::<T>();
        let stages = Stage::WITH_PHASE
            .iter()
            .map(|&stage| {
                let values = (0..=trajectory.k_max)
                    .map(|k| trajectory.get(k, stage).map(|r| c_alpha_pure(&r.probs, alpha).powf(a)))
                    .collect();
                (stage, values)
            })
            .collect();
        Self { alpha, k_max: trajectory.k_max, stages }
    }

    pub fn get(&self, k: usize, stage: Stage) -> Result<T> {
        if k > self.k_max {
            return Err(Error::TrajectoryTooShort { needed: k, have: self.k_max });
        }
        self.stages
            .iter()
            .find(|(s, _)| *s == stage)
            .and_then(|(_, v)| v[k])
            .ok_or(Error::MissingStage(stage.name()))
    }

    /// `C^alpha(psi_k)` for `k = 0..=k_max + 1`.
    pub fn psi(&self, k: usize) -> Result<T> {
        if k <= self.k_max {
            if let Ok(v) = self.get(k, Stage::PsiK) {
                return Ok(v);
            }
        }
        match k {
            0 => self.get(0, Stage::PsiK),
            _ => self.get(k - 1, Stage::PsiKHP),
        }
    }
}

fn series<T: Real>(
    powered: &PoweredCoherence<T>,
    which: DeltaKind,
    f: impl Fn(usize) -> Result<T>,
) -> Result<DeltaSeries<T>> {
    if powered.k_max == 0 {
        return Err(Error::TrajectoryTooShort { needed: 1, have: 0 });
    }
    let values = (0..powered.k_max).map(f).collect::<Result<_>>()?;
    Ok(DeltaSeries { which, alpha: powered.alpha, units: Units::Raw, values })
}

/// Changes of operator coherence between consecutive iterations.
pub fn delta_between<T: Real>(powered: &PoweredCoherence<T>, which: Operator) -> Result<DeltaSeries<T>> {
    let p = powered;
    match which {
        Operator::G => series(p, DeltaKind::G, |k| Ok(p.psi(k + 1)? - p.psi(k)?)),
        Operator::HO => series(p, DeltaKind::HOBetween, |k| {
            Ok(p.get(k + 1, Stage::PsiKHO)? - p.get(k, Stage::PsiKHO)?)
        }),
        Operator::HP => series(p, DeltaKind::HPBetween, |k| {
            Ok(p.get(k + 1, Stage::PsiKHP)? - p.get(k, Stage::PsiKHP)?)
        }),
        Operator::O | Operator::P => Err(Error::MissingStage("between-iteration series exist for G, H_O, H_P")),
    }
}

/// Changes produced by each operator inside iteration `k`.
///
/// `HO` is measured from `psi_k`, so it equals `C(psi_kH_O) - C(psi_k)`
/// whenever the oracle leaves the coherence unchanged; `HP` likewise is
/// measured from `psi_kH_O` unless the post-phase-shift stage was captured.
pub fn delta_within<T: Real>(powered: &PoweredCoherence<T>, which: Operator) -> Result<DeltaSeries<T>> {
    let p = powered;
    match which {
        Operator::O => series(p, DeltaKind::OWithin, |k| Ok(p.get(k, Stage::PsiKO)? - p.psi(k)?)),
        Operator::HO => series(p, DeltaKind::HOWithin, |k| Ok(p.get(k, Stage::PsiKHO)? - p.psi(k)?)),
        Operator::P => series(p, DeltaKind::PWithin, |k| Ok(p.get(k, Stage::PsiKP)? - p.get(k, Stage::PsiKHO)?)),
        Operator::HP => series(p, DeltaKind::HPWithin, |k| {
            Ok(p.get(k, Stage::PsiKHP)? - p.get(k, Stage::PsiKHO)?)
        }),
        Operator::G => delta_between(p, Operator::G),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoint {
    /// `round(arcsin(sqrt(1 / (gamma + 1))) / (2 theta))`
    pub formula: usize,
    /// First `k` where the within-iteration `H_O` change stops being negative.
    pub empirical: Option<usize>,
    /// Same scan on the `H_P` series (positive to non-positive).
    pub empirical_hp: Option<usize>,
    pub gamma: f64,
}

impl TurningPoint {
    pub fn agreement(&self) -> Option<usize> {
        self.empirical.map(|e| e.abs_diff(self.formula))
    }
}

pub fn turning_point_formula(theta: f64, gamma: f64) -> usize {
    ((1.0 / (gamma + 1.0)).sqrt().asin() / (2.0 * theta)).round() as usize
}

/// First index `k >= 1` where the sign leaves its initial value.
fn first_sign_change<T: Real>(values: &[T], from_negative: bool) -> Option<usize> {
    (1..values.len()).find(|&k| {
        let (prev, cur) = (values[k - 1], values[k]);
        if from_negative {
            prev < T::zero() && cur >= T::zero()
        } else {
            prev > T::zero() && cur <= T::zero()
        }
    })
}

/// Turning point of the `H_O` / `H_P` within-iteration changes.
pub fn turning_point<T: Real>(
    config: &GroverConfig,
    powered: &PoweredCoherence<T>,
    gamma: f64,
) -> Result<TurningPoint> {
    if powered.alpha.branch() != AlphaBranch::Above {
        return Err(Error::AlphaOutOfRange(powered.alpha.get()));
    }
    let theta: f64 = grover_angle(config);
    let ho = delta_within(powered, Operator::HO)?;
    let hp = delta_within(powered, Operator::HP)?;
    Ok(TurningPoint {
        formula: turning_point_formula(theta, gamma),
        empirical: first_sign_change(&ho.values, true),
        empirical_hp: first_sign_change(&hp.values, false),
        gamma,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelationResidual<T> {
    pub k: usize,
    /// `Delta G(k) - Delta H_P(k - 1)`
    pub g_vs_hp: T,
    /// `Delta G(k) + Delta H_O(k) / gamma`
    pub g_vs_ho: T,
}

/// Residuals of `Delta G(k) ~ Delta H_P(k-1) ~ -Delta H_O(k) / gamma` for
/// `k >= 1`, in the requested units.
pub fn relation_residual<T: Real>(
    powered: &PoweredCoherence<T>,
    size: u64,
    gamma: T,
    units: Units,
) -> Result<Vec<RelationResidual<T>>> {
    let convert = |s: DeltaSeries<T>| match units {
        Units::Raw => Ok(s),
        Units::PaperUnits => s.to_paper_units(size),
    };
    let g = convert(delta_between(powered, Operator::G)?)?;
    let ho = convert(delta_between(powered, Operator::HO)?)?;
    let hp = convert(delta_between(powered, Operator::HP)?)?;
    Ok((1..g.len())
        .map(|k| RelationResidual {
            k,
            g_vs_hp: g.values[k] - hp.values[k - 1],
            g_vs_ho: g.values[k] + ho.values[k] / gamma,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Effect {
    Produces,
    Depletes,
    Unchanged,
}

impl Effect {
    pub fn of<T: Real>(delta: T) -> Self {
        if delta.abs() < T::lit(DEAD_BAND) {
            Effect::Unchanged
        } else if delta > T::zero() {
            Effect::Produces
        } else {
            Effect::Depletes
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Effect::Produces => "produces",
            Effect::Depletes => "depletes",
            Effect::Unchanged => "unchanged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification<T> {
    pub k: usize,
    pub operator: Operator,
    pub delta: T,
    pub effect: Effect,
}

/// Tags each operator of each iteration by the sign of its within-iteration
/// change. Requires the post-phase-shift stage.
pub fn classify<T: Real>(powered: &PoweredCoherence<T>) -> Result<Vec<Classification<T>>> {
    let ops = [Operator::O, Operator::HO, Operator::P, Operator::HP];
    let series = ops.iter().map(|&op| delta_within_exact(powered, op)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(powered.k_max * ops.len());
    for k in 0..powered.k_max {
        for (op, s) in ops.iter().zip(&series) {
            out.push(Classification { k, operator: *op, delta: s[k], effect: Effect::of(s[k]) });
        }
    }
    Ok(out)
}

/// Stage-to-stage deltas with each operator measured against its own input.
fn delta_within_exact<T: Real>(p: &PoweredCoherence<T>, op: Operator) -> Result<Vec<T>> {
    let (from, to) = match op {
        Operator::O => (Stage::PsiK, Stage::PsiKO),
        Operator::HO => (Stage::PsiKO, Stage::PsiKHO),
        Operator::P => (Stage::PsiKHO, Stage::PsiKP),
        Operator::HP => (Stage::PsiKP, Stage::PsiKHP),
        Operator::G => (Stage::PsiK, Stage::PsiKHP),
    };
    (0..p.k_max).map(|k| Ok(p.get(k, to)? - p.get(k, from)?)).collect()
}

/// Largest `k` for which the large-database sign laws are asserted:
/// `P_{k+2}` must still exceed `P_{k+1}`.
pub fn sign_law_horizon(config: &GroverConfig) -> usize {
    optimal_iterations(config).saturating_sub(2)
}
