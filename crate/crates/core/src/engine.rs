//! Real-amplitude state vector simulation of Grover's iteration.
//!
//! `O`, `P` and `H^{(x)n}` are real orthogonal matrices and the initial
//! state is real, so amplitudes never pick up imaginary parts.

use std::ops::{Add, Sub};

use serde::Serialize;

use crate::coherence::{stable_sum, Masses, ProbabilityHistogram, ProbabilityVector};
use crate::error::{Error, Result};
use crate::model::{GroverConfig, TargetSet};
use crate::scalar::Real;

/// Butterfly span handled block-by-block so a block stays in L1 cache.
const FWHT_BLOCK: usize = 1 << 11;

/// Upper bound on stored probabilities (summed over all records) when full
/// vectors are requested.
pub const MAX_FULL_ENTRIES: usize = 1 << 28;

#[inline]
fn butterfly_pass<T, F>(data: &mut [T], h: usize, f: &F)
where
    T: Copy,
    F: Fn(T, T) -> (T, T),
{
    for chunk in data.chunks_exact_mut(2 * h) {
        let (lo, hi) = chunk.split_at_mut(h);
        for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
            let (s, d) = f(*x, *y);
            *x = s;
            *y = d;
        }
    }
}

fn butterflies<T, F>(data: &mut [T], f: F)
where
    T: Copy,
    F: Fn(T, T) -> (T, T),
{
    let len = data.len();
    let block = FWHT_BLOCK.min(len);
    for chunk in data.chunks_exact_mut(block) {
        let mut h = 1;
        while h < block {
            butterfly_pass(chunk, h, &f);
            h *= 2;
        }
    }
    let mut h = block;
    while h < len {
        butterfly_pass(data, h, &f);
        h *= 2;
    }
}

fn check_len(len: usize) -> Result<()> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(())
}

/// In-place normalized Walsh-Hadamard transform, `H^{(x)n}`.
///
/// Each pass scales by `1/sqrt(2)`, which keeps magnitudes bounded and
/// makes the transform an involution.
pub fn fwht<T: Real>(data: &mut [T]) -> Result<()> {
    check_len(data.len())?;
    let s = T::FRAC_1_SQRT_2();
    butterflies(data, |a, b| ((a + b) * s, (a - b) * s));
    Ok(())
}

/// Unnormalized Walsh transform `x_y -> sum_x (-1)^{x.y} x_x`; exact over integers.
pub fn walsh_unnormalized<T>(data: &mut [T]) -> Result<()>
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    check_len(data.len())?;
    butterflies(data, |a, b| (a + b, a - b));
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    amp: Vec<T>,
}

impl<T: Real> StateVector<T> {
    pub fn from_amplitudes(amp: Vec<T>) -> Result<Self> {
        check_len(amp.len())?;
        Ok(Self { amp })
    }

    pub fn basis(n: u32, index: usize) -> Self {
        let mut amp = vec![T::zero(); 1 << n];
        amp[index] = T::one();
        Self { amp }
    }

    /// `H^{(x)n} |0...0>`.
    pub fn uniform(n: u32) -> Self {
        let len = 1usize << n;
        Self { amp: vec![T::one() / T::from_count(len).sqrt(); len] }
    }

    pub fn amplitudes(&self) -> &[T] {
        &self.amp
    }

    pub fn len(&self) -> usize {
        self.amp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amp.is_empty()
    }

    pub fn norm_sqr(&self) -> T {
        stable_sum(self.amp.iter().map(|a| *a * *a))
    }

    pub fn probabilities(&self) -> Result<ProbabilityVector<T>> {
        ProbabilityVector::from_amplitudes(&self.amp)
    }

    pub fn histogram(&self) -> ProbabilityHistogram<T> {
        ProbabilityHistogram::from_amplitudes(&self.amp)
    }

    pub fn fwht(&mut self) {
        fwht(&mut self.amp).expect("state length is a power of two");
    }

    /// `O = sum_x (-1)^{f(x)} |x><x|`.
    pub fn apply_oracle(&mut self, targets: &TargetSet) {
        for &x in targets.indices() {
            let a = &mut self.amp[x as usize];
            *a = -*a;
        }
    }

    /// `P = 2|0><0| - I`.
    pub fn apply_phase_shift(&mut self) {
        for a in self.amp.iter_mut().skip(1) {
            *a = -*a;
        }
    }

    pub fn success_probability(&self, targets: &TargetSet) -> T {
        stable_sum(targets.indices().iter().map(|&x| {
            let a = self.amp[x as usize];
            a * a
        }))
    }

    /// Components along `|chi_0>`, `|chi_1>` and the norm of the remainder.
    pub fn two_level_projection(&self, targets: &TargetSet) -> (T, T, T) {
        let len = self.amp.len();
        let t = targets.len();
        let target_sum = stable_sum(targets.indices().iter().map(|&x| self.amp[x as usize]));
        let total = stable_sum(self.amp.iter().copied());
        let b = target_sum / T::from_count(t).sqrt();
        let a = if t < len {
            (total - target_sum) / T::from_count(len - t).sqrt()
        } else {
            T::zero()
        };
        let chi0 = if t < len { T::one() / T::from_count(len - t).sqrt() } else { T::zero() };
        let chi1 = T::one() / T::from_count(t).sqrt();
        let residual = stable_sum(self.amp.iter().enumerate().map(|(x, &v)| {
            let fit = if targets.contains(x as u64) { b * chi1 } else { a * chi0 };
            (v - fit) * (v - fit)
        }));
        (a, b, residual.sqrt())
    }
}

pub fn apply_oracle<T: Real>(mut state: StateVector<T>, targets: &TargetSet) -> StateVector<T> {
    state.apply_oracle(targets);
    state
}

pub fn apply_phase_shift<T: Real>(mut state: StateVector<T>) -> StateVector<T> {
    state.apply_phase_shift();
    state
}

pub fn success_probability<T: Real>(state: &StateVector<T>, targets: &TargetSet) -> T {
    state.success_probability(targets)
}

/// Snapshots inside one iteration `G = H P H O`.
#[derive(Debug, Clone)]
pub struct GroverStep<T> {
    /// `|psi_kO> = O |psi_k>`
    pub after_oracle: StateVector<T>,
    /// `|psi_kH_O> = H |psi_kO>`
    pub after_first_hadamard: StateVector<T>,
    /// `|psi_kH_P> = H P |psi_kH_O> = |psi_{k+1}>`
    pub next: StateVector<T>,
}

pub fn grover_step<T: Real>(state: &StateVector<T>, config: &GroverConfig) -> GroverStep<T> {
    let mut s = state.clone();
    s.apply_oracle(config.targets());
    let after_oracle = s.clone();
    s.fwht();
    let after_first_hadamard = s.clone();
    s.apply_phase_shift();
    s.fwht();
    GroverStep { after_oracle, after_first_hadamard, next: s }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Stage {
    /// `psi_k`
    PsiK,
    /// after the oracle
    PsiKO,
    /// after the first Hadamard layer
    PsiKHO,
    /// after the phase shift; optional, not part of [`StageMask::ALL`]
    PsiKP,
    /// after the phase shift and second Hadamard layer; equals `psi_{k+1}`
    PsiKHP,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::PsiK, Stage::PsiKO, Stage::PsiKHO, Stage::PsiKHP];
    pub const WITH_PHASE: [Stage; 5] = [Stage::PsiK, Stage::PsiKO, Stage::PsiKHO, Stage::PsiKP, Stage::PsiKHP];

    pub fn name(self) -> &'static str {
        match self {
            Stage::PsiK => "psi_k",
            Stage::PsiKO => "psi_kO",
            Stage::PsiKHO => "psi_kHO",
            Stage::PsiKP => "psi_kP",
            Stage::PsiKHP => "psi_kHP",
        }
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

/// Set of stages to record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageMask(u8);

impl StageMask {
    /// The four snapshots `psi_k`, `psi_kO`, `psi_kH_O`, `psi_kH_P`.
    pub const ALL: StageMask = StageMask(0b10111);
    pub const WITH_PHASE: StageMask = StageMask(0b11111);
    pub const NONE: StageMask = StageMask(0);

    pub fn only(stages: &[Stage]) -> Self {
        Self(stages.iter().fold(0, |m, s| m | s.bit()))
    }

    pub fn contains(self, stage: Stage) -> bool {
        self.0 & stage.bit() != 0
    }
}

/// How much of each probability vector a trajectory keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detail {
    Full,
    Histogram,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Snapshot<T> {
    Full(ProbabilityVector<T>),
    Histogram(ProbabilityHistogram<T>),
}

impl<T: Real> Snapshot<T> {
    fn capture(state: &StateVector<T>, detail: Detail) -> Result<Self> {
        Ok(match detail {
            Detail::Full => Snapshot::Full(state.probabilities()?),
            Detail::Histogram => Snapshot::Histogram(state.histogram()),
        })
    }

    pub fn as_full(&self) -> Option<&ProbabilityVector<T>> {
        match self {
            Snapshot::Full(p) => Some(p),
            Snapshot::Histogram(_) => None,
        }
    }
}

impl<T: Real> Masses<T> for Snapshot<T> {
    fn masses(&self) -> impl Iterator<Item = (T, usize)> + '_ {
        let (full, hist) = match self {
            Snapshot::Full(p) => (Some(p.masses()), None),
            Snapshot::Histogram(h) => (None, Some(h.masses())),
        };
        full.into_iter().flatten().chain(hist.into_iter().flatten())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord<T> {
    pub k: usize,
    pub stage: Stage,
    pub probs: Snapshot<T>,
    pub success_prob: T,
    /// `sum_j amp_j^2` at capture time.
    pub norm_sqr: T,
}

/// Recorded snapshots for `k = 0..=k_max`, ordered by `(k, stage)`.
#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    pub k_max: usize,
    pub records: Vec<StageRecord<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn get(&self, k: usize, stage: Stage) -> Option<&StageRecord<T>> {
        self.records
            .binary_search_by(|r| (r.k, r.stage).cmp(&(k, stage)))
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn require(&self, k: usize, stage: Stage) -> Result<&StageRecord<T>> {
        if k > self.k_max {
            return Err(Error::TrajectoryTooShort { needed: k, have: self.k_max });
        }
        self.get(k, stage).ok_or(Error::MissingStage(stage.name()))
    }

    pub fn stage(&self, stage: Stage) -> impl Iterator<Item = &StageRecord<T>> + '_ {
        self.records.iter().filter(move |r| r.stage == stage)
    }
}

/// Runs `k_max + 1` full iterations from the uniform state, recording the
/// requested stages of each. `PsiK` therefore covers `k = 0..=k_max` and
/// `PsiKHP` at `k_max` holds `psi_{k_max + 1}`.
pub fn run<T: Real>(
    config: &GroverConfig,
    k_max: usize,
    capture: StageMask,
    detail: Detail,
) -> Result<Trajectory<T>> {
    run_with(config, k_max, capture, detail, |_, _, _| {})
}

/// [`run`] with a callback observing every stage state in place.
pub fn run_with<T: Real, F>(
    config: &GroverConfig,
    k_max: usize,
    capture: StageMask,
    detail: Detail,
    mut observe: F,
) -> Result<Trajectory<T>>
where
    F: FnMut(usize, Stage, &StateVector<T>),
{
    let size = config.size() as usize;
    if detail == Detail::Full {
        let stages = Stage::WITH_PHASE.iter().filter(|s| capture.contains(**s)).count();
        let entries = size.saturating_mul(stages).saturating_mul(k_max + 1);
        if entries > MAX_FULL_ENTRIES {
            return Err(Error::Capacity(format!(
                "{entries} stored probabilities exceed {MAX_FULL_ENTRIES}; use histogram snapshots"
            )));
        }
    }
    let targets = config.targets();
    let mut state = StateVector::<T>::uniform(config.qubits());
    let mut records = Vec::new();
    let mut carried: Option<Snapshot<T>> = None;
    for k in 0..=k_max {
        let mut record = |stage: Stage, s: &StateVector<T>, reuse: Option<Snapshot<T>>| -> Result<Option<Snapshot<T>>> {
            observe(k, stage, s);
            if !capture.contains(stage) {
                return Ok(None);
            }
            let probs = match reuse {
                Some(p) => p,
                None => Snapshot::capture(s, detail)?,
            };
            records.push(StageRecord {
                k,
                stage,
                probs: probs.clone(),
                success_prob: s.success_probability(targets),
                norm_sqr: s.norm_sqr(),
            });
            Ok(Some(probs))
        };
        // psi_k is bit-for-bit the previous psi_{(k-1)HP}
        record(Stage::PsiK, &state, carried.take())?;
        state.apply_oracle(targets);
        record(Stage::PsiKO, &state, None)?;
        state.fwht();
        record(Stage::PsiKHO, &state, None)?;
        state.apply_phase_shift();
        record(Stage::PsiKP, &state, None)?;
        state.fwht();
        carried = record(Stage::PsiKHP, &state, None)?;
    }
    Ok(Trajectory { k_max, records })
}
