//! Closed-form coherence of every stage state, the Walsh spectrum of the
//! target set, and the large-database (`t << N`) approximations.
//!
//! "Exact" evaluators are identities for the simulated states and are
//! checked against the engine. "Asymptotic" evaluators drop terms that
//! vanish as `t / N -> 0` and carry no exactness guarantee.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coherence::{c_alpha_pure, AlphaBranch, AlphaParam, Masses};
use crate::engine::walsh_unnormalized;
use crate::error::{Error, Result};
use crate::model::{GroverConfig, TargetStructure, TwoLevelState};
use crate::scalar::Real;

/// Above this `t / N` the asymptotic forms are flagged as out of regime.
pub const ASYMPTOTIC_RATIO_WARNING: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Kind {
    Exact,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceValue<T> {
    pub value: T,
    pub kind: Kind,
    pub alpha: AlphaParam,
    /// Set for asymptotic values evaluated with `t / N` above
    /// [`ASYMPTOTIC_RATIO_WARNING`].
    pub out_of_regime: bool,
}

impl<T: Real> CoherenceValue<T> {
    fn exact(value: T, alpha: AlphaParam) -> Self {
        Self { value, kind: Kind::Exact, alpha, out_of_regime: false }
    }

    fn asymptotic(value: T, alpha: AlphaParam, size: u64, t: u64) -> Self {
        Self {
            value,
            kind: Kind::Asymptotic,
            alpha,
            out_of_regime: (t as f64) / (size as f64) > ASYMPTOTIC_RATIO_WARNING,
        }
    }
}

fn num<T: Real>(x: u64) -> T {
    T::from_u64(x).expect("integer representable in scalar type")
}

/// `x^e` with `0^e = 0`.
fn pow0<T: Real>(x: T, e: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x.powf(e)
    }
}

/// `x ln(c / x)` with the `x = 0` limit.
fn xlog<T: Real>(x: T, c: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * (c / x).ln()
    }
}

/// Success probability `sin^2((2k+1) theta)`.
pub fn p_k<T: Real>(theta: T, k: usize) -> T {
    let s = (T::from_count(2 * k + 1) * theta).sin();
    s * s
}

/// Coherence of `A|chi_0> + B|chi_1>` from the weights `A^2`, `B^2`.
fn two_level_coherence<T: Real>(size: u64, t: u64, w0: T, w1: T, alpha: AlphaParam) -> T {
    let rest = size - t;
    match alpha.branch() {
        AlphaBranch::Limit => {
            let a = if rest > 0 { xlog(w0, num(rest)) } else { T::zero() };
            a + xlog(w1, num(t))
        }
        _ => {
            let a = alpha.value::<T>();
            let inv = T::one() / a;
            let expo = T::one() - inv;
            let first = if rest > 0 { pow0(w0, inv) * num::<T>(rest).powf(expo) } else { T::zero() };
            (first + pow0(w1, inv) * num::<T>(t).powf(expo) - T::one()) / (a - T::one())
        }
    }
}

/// `C_alpha(psi_k)` in closed form:
/// `[(1-P)^(1/a) (N-t)^(1-1/a) + P^(1/a) t^(1-1/a) - 1] / (a - 1)`.
///
/// The `alpha -> 1` branch is `(1-P) ln((N-t)/(1-P)) + P ln(t/P)`, the
/// relative entropy of coherence in nats.
pub fn c_alpha_psi_k_exact<T: Real>(size: u64, t: u64, p: T, alpha: AlphaParam) -> CoherenceValue<T> {
    CoherenceValue::exact(two_level_coherence(size, t, T::one() - p, p, alpha), alpha)
}

/// [`c_alpha_psi_k_exact`] from the amplitudes directly; avoids forming
/// `1 - P` when `P` is close to one.
pub fn c_alpha_two_level_exact<T: Real>(
    size: u64,
    t: u64,
    state: &TwoLevelState<T>,
    alpha: AlphaParam,
) -> CoherenceValue<T> {
    CoherenceValue::exact(two_level_coherence(size, t, state.a * state.a, state.b * state.b, alpha), alpha)
}

/// Large-database form of `C_alpha(psi_k)`.
///
/// * `alpha < 1`: `(P^(1/a) t^(1-1/a) - 1) / (a - 1)`; at `a = 1/2` this is `2 (1 - P^2 / t)`.
/// * `alpha > 1`: `N / (a - 1) ((1 - P) / N)^(1/a)`.
/// * `alpha -> 1`: `(1 - P) ln(N / (1 - P))`.
pub fn c_alpha_psi_k_asymptotic<T: Real>(size: u64, t: u64, p: T, alpha: AlphaParam) -> CoherenceValue<T> {
    let n: T = num(size);
    let value = match alpha.branch() {
        AlphaBranch::Limit => xlog(T::one() - p, n),
        AlphaBranch::Below => {
            let a = alpha.value::<T>();
            (pow0(p, T::one() / a) * num::<T>(t).powf(T::one() - T::one() / a) - T::one()) / (a - T::one())
        }
        AlphaBranch::Above => {
            let a = alpha.value::<T>();
            n / (a - T::one()) * pow0((T::one() - p) / n, T::one() / a)
        }
    };
    CoherenceValue::asymptotic(value, alpha, size, t)
}

/// `C_alpha(psi_kH_P)`: the second Hadamard layer lands on `psi_{k+1}`.
pub fn c_alpha_hp_exact<T: Real>(size: u64, t: u64, p_next: T, alpha: AlphaParam) -> CoherenceValue<T> {
    c_alpha_psi_k_exact(size, t, p_next, alpha)
}

pub fn c_alpha_hp_asymptotic<T: Real>(size: u64, t: u64, p_next: T, alpha: AlphaParam) -> CoherenceValue<T> {
    c_alpha_psi_k_asymptotic(size, t, p_next, alpha)
}

/// Walsh spectrum `s_y = sum_{x in targets} (-1)^{x.y} = 2 t_y - t` of the
/// target set, as a histogram over `y != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub size: u64,
    pub t: u64,
    /// `s_0`, always `t`.
    pub s0: i64,
    /// `s_y -> #{y != 0}`.
    pub histogram: BTreeMap<i64, u64>,
}

impl SpectrumReport {
    /// `sum_{y != 0} s_y^2`.
    pub fn sum_squares(&self) -> i128 {
        self.histogram.iter().map(|(&s, &c)| (s as i128) * (s as i128) * c as i128).sum()
    }

    /// Parseval identity `sum_{y != 0} s_y^2 = N t - t^2`.
    pub fn parseval_holds(&self) -> bool {
        let (n, t) = (self.size as i128, self.t as i128);
        self.sum_squares() == n * t - t * t
    }

    /// Every `s_y` has the parity of `t`.
    pub fn parity_holds(&self) -> bool {
        self.histogram.keys().all(|&s| (s - self.t as i64).rem_euclid(2) == 0)
    }

    /// `|s_y| -> count` over `y != 0`.
    pub fn magnitude_histogram(&self) -> BTreeMap<u64, u64> {
        let mut out = BTreeMap::new();
        for (&s, &c) in &self.histogram {
            *out.entry(s.unsigned_abs()).or_insert(0) += c;
        }
        out
    }

    /// Mean of `s_y^2 / t` over `y != 0`: the root-mean-square `gamma`.
    pub fn gamma_rms(&self) -> f64 {
        if self.size < 2 {
            return 0.0;
        }
        self.sum_squares() as f64 / (self.t as f64 * (self.size - 1) as f64)
    }

    /// The single `gamma` that makes the uniform-spectrum formula
    /// `(N - 1) gamma^(1/a) ...` reproduce the per-`y` sum exactly:
    /// `[mean_{y != 0} (s_y^2 / t)^(1/a)]^a`. Equals [`Self::gamma_rms`] at `a = 1`.
    pub fn gamma_effective(&self, alpha: AlphaParam) -> f64 {
        if self.size < 2 {
            return 0.0;
        }
        let a = match alpha.branch() {
            AlphaBranch::Limit => return self.gamma_rms(),
            _ => alpha.get(),
        };
        let t = self.t as f64;
        let mean = self
            .histogram
            .iter()
            .map(|(&s, &c)| c as f64 * ((s * s) as f64 / t).powf(1.0 / a))
            .sum::<f64>()
            / (self.size - 1) as f64;
        mean.powf(a)
    }
}

pub fn target_spectrum(config: &GroverConfig) -> SpectrumReport {
    let size = config.size() as usize;
    let mut v = vec![0i64; size];
    for &x in config.targets().indices() {
        v[x as usize] = 1;
    }
    walsh_unnormalized(&mut v).expect("database size is a power of two");
    let mut histogram = BTreeMap::new();
    for &s in &v[1..] {
        *histogram.entry(s).or_insert(0) += 1;
    }
    SpectrumReport { size: config.size(), t: config.target_count(), s0: v[0], histogram }
}

/// Tabulated `gamma(t, t_y) = (t - 2 t_y)^2 / t` for `t <= 4`.
pub fn gamma_case<T: Real>(t: u64, structure: &TargetStructure) -> Result<T> {
    let g = match (t, structure.is_product()) {
        (1, _) => 1.0,
        (2, _) => 0.5,
        (3, _) => 0.75,
        (4, true) => 0.25,
        (4, false) => 9.0 / 16.0,
        _ => return Err(Error::UntabulatedTargetCount(t)),
    };
    Ok(T::lit(g))
}

/// Probabilities of `psi_kH_O = H O psi_k` grouped by `|s_y|`.
struct HadamardStage<T>(Vec<(T, usize)>);

impl<T: Real> Masses<T> for HadamardStage<T> {
    fn masses(&self) -> impl Iterator<Item = (T, usize)> + '_ {
        self.0.iter().copied()
    }
}

/// `C_alpha(psi_kH_O)` summed over the true per-`y` spectrum:
///
/// `psi_kH_O = [(A sqrt(N-t) - B sqrt t) |0> - sum_{y != 0} s_y (A / sqrt(N-t) + B / sqrt t) |y>] / sqrt N`.
pub fn c_alpha_ho_exact<T: Real>(
    spectrum: &SpectrumReport,
    state: &TwoLevelState<T>,
    alpha: AlphaParam,
) -> CoherenceValue<T> {
    let (size, t) = (spectrum.size, spectrum.t);
    let n: T = num(size);
    let rest = size - t;
    let (a, b) = (state.a, state.b);
    let tt: T = num(t);
    let (head, slope) = if rest > 0 {
        let r: T = num(rest);
        (a * r.sqrt() - b * tt.sqrt(), a / r.sqrt() + b / tt.sqrt())
    } else {
        (-b * tt.sqrt(), b / tt.sqrt())
    };
    let mut masses = vec![(head * head / n, 1usize)];
    for (&s, &count) in &spectrum.magnitude_histogram() {
        let amp = num::<T>(s) * slope;
        masses.push((amp * amp / n, count as usize));
    }
    CoherenceValue::exact(c_alpha_pure(&HadamardStage(masses), alpha), alpha)
}

/// Large-database `C_alpha(psi_kH_O)` with a single spectral constant `gamma`.
///
/// * `alpha < 1`: `[(gamma P)^(1/a) N^(1-1/a) - 1] / (a - 1)`
/// * `alpha > 1`: `N / (a - 1) (gamma P / N)^(1/a)`
/// * `alpha -> 1`: `gamma P ln(N / (gamma P))`
///
/// Product target sets use `gamma = 1 / t`.
pub fn c_alpha_ho_asymptotic<T: Real>(gamma: T, p: T, size: u64, t: u64, alpha: AlphaParam) -> CoherenceValue<T> {
    let n: T = num(size);
    let g = gamma * p;
    let value = match alpha.branch() {
        AlphaBranch::Limit => xlog(g, n),
        AlphaBranch::Below => {
            let a = alpha.value::<T>();
            (pow0(g, T::one() / a) * n.powf(T::one() - T::one() / a) - T::one()) / (a - T::one())
        }
        AlphaBranch::Above => {
            let a = alpha.value::<T>();
            n / (a - T::one()) * pow0(g / n, T::one() / a)
        }
    };
    CoherenceValue::asymptotic(value, alpha, size, t)
}

/// Bounds on `C_alpha(psi_kH_O)` attained by the single-target and the
/// product-target formulas, returned as `(lower, upper)`.
pub fn conjectured_ho_bounds<T: Real>(p: T, size: u64, t: u64, alpha: AlphaParam) -> (T, T) {
    let single = c_alpha_ho_asymptotic(T::one(), p, size, t, alpha).value;
    let product = c_alpha_ho_asymptotic(T::one() / num::<T>(t), p, size, t, alpha).value;
    if single <= product {
        (single, product)
    } else {
        (product, single)
    }
}

/// Bloch vector of `psi_k` in the `{chi_0, chi_1}` plane; `r_y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochTrack<T> {
    pub r_x: T,
    pub r_z: T,
    pub k: usize,
}

impl<T: Real> BlochTrack<T> {
    /// `cos^2 theta_k = (1 + r_z) / 2`
    pub fn non_target_weight(&self) -> T {
        (T::one() + self.r_z) / T::lit(2.0)
    }

    /// `sin^2 theta_k = (1 - r_z) / 2`, the success probability.
    pub fn success_probability(&self) -> T {
        (T::one() - self.r_z) / T::lit(2.0)
    }
}

/// `(r_x, r_z) = (-sin 2 theta_k, cos 2 theta_k)`, the sign convention after `G^k`.
pub fn bloch_track<T: Real>(theta: T, k: usize) -> BlochTrack<T> {
    let two_theta_k = T::from_count(2 * (2 * k + 1)) * theta;
    let (s, c) = two_theta_k.sin_cos();
    BlochTrack { r_x: -s, r_z: c, k }
}

/// Large-database maximum of `C_alpha` over the Grover orbit.
///
/// `1 / (1 - a)` below one, `N / (a - 1) N^(-1/a)` above, and `ln N` (the
/// `log2 N` bits in the same nats convention as the coherence values) at the limit.
pub fn c_alpha_max_asymptotic<T: Real>(size: u64, alpha: AlphaParam) -> T {
    let n: T = num(size);
    match alpha.branch() {
        AlphaBranch::Limit => n.ln(),
        AlphaBranch::Below => T::one() / (T::one() - alpha.value::<T>()),
        AlphaBranch::Above => {
            let a = alpha.value::<T>();
            n / (a - T::one()) * n.powf(-T::one() / a)
        }
    }
}

/// Deviation from the coherence / success probability complementarity.
///
/// With `N(C) = C / C_max` (asymptotic maximum):
/// * `alpha < 1`: `N(C) + P^(1/a) t^(1-1/a) - 1`
/// * `alpha > 1`: `N(C)^a + P - 1`
/// * `alpha -> 1`: `N(C) + P - 1`
pub fn complementarity_residual<T: Real>(size: u64, t: u64, p: T, alpha: AlphaParam, c_exact: T) -> T {
    let normalized = c_exact / c_alpha_max_asymptotic::<T>(size, alpha);
    match alpha.branch() {
        AlphaBranch::Limit => normalized + p - T::one(),
        AlphaBranch::Below => {
            let a = alpha.value::<T>();
            normalized + pow0(p, T::one() / a) * num::<T>(t).powf(T::one() - T::one() / a) - T::one()
        }
        AlphaBranch::Above => normalized.powf(alpha.value::<T>()) + p - T::one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_config, two_level_state, TargetSpec};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn alpha(a: f64) -> AlphaParam {
        AlphaParam::new(a).unwrap()
    }

    fn cfg(n: u32, t: &[u64]) -> GroverConfig {
        make_config(n, &TargetSpec::Indices(t.to_vec())).unwrap()
    }

    #[test]
    fn success_probability_examples() {
        let theta = (1.0f64 / 8.0).sqrt().asin();
        assert_abs_diff_eq!(p_k(theta, 0), 1.0 / 8.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p_k(PI / 6.0, 1), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p_k(theta, 1), 25.0 / 32.0, epsilon = 1e-14);
    }

    #[test]
    fn psi_k_exact_examples() {
        for (size, t) in [(8u64, 1u64), (1024, 3), (4, 4)] {
            for a in [0.3, 0.5, 1.5, 2.0] {
                let v = c_alpha_psi_k_exact(size, t, 1.0f64, alpha(a)).value;
                assert_abs_diff_eq!(v, ((t as f64).powf(1.0 - 1.0 / a) - 1.0) / (a - 1.0), epsilon = 1e-12);
            }
        }
        let v = c_alpha_psi_k_exact(8, 1, 25.0f64 / 32.0, alpha(2.0));
        assert_eq!(v.kind, Kind::Exact);
        assert_abs_diff_eq!(v.value, 3.0 / 2f64.sqrt() - 1.0, epsilon = 1e-14);
        // t = N: uniform target superposition reaches the maximum
        let v = c_alpha_psi_k_exact(16, 16, 1.0f64, alpha(1.5)).value;
        assert_abs_diff_eq!(v, crate::coherence::c_alpha_max_pure::<f64>(16, alpha(1.5)), epsilon = 1e-12);
    }

    #[test]
    fn psi_k_limit_branch() {
        let p = 0.3f64;
        let bits = (1.0 - p) * ((1000.0 - 2.0) / (1.0 - p)).log2() + p * (2.0 / p).log2();
        let v = c_alpha_psi_k_exact(1000, 2, p, alpha(1.0 + 1e-7)).value;
        assert_abs_diff_eq!(v, 2f64.ln() * bits, epsilon = 1e-12);
    }

    #[test]
    fn psi_k_asymptotic_examples() {
        let (n, t) = (1u64 << 20, 3u64);
        for p in [0.1f64, 0.6, 0.9] {
            let v = c_alpha_psi_k_asymptotic(n, t, p, AlphaParam::skew());
            assert_eq!(v.kind, Kind::Asymptotic);
            assert!(!v.out_of_regime);
            assert_abs_diff_eq!(v.value, 2.0 * (1.0 - p * p / t as f64), epsilon = 1e-12);
        }
        assert_eq!(c_alpha_psi_k_asymptotic(n, t, 1.0f64, alpha(2.0)).value, 0.0);
        assert!(c_alpha_psi_k_asymptotic(64, 4, 0.5f64, alpha(2.0)).out_of_regime);
        // n = 16, t = 2, k = 50, alpha = 1.5
        let c = cfg(16, &[0, 1]);
        let p = p_k(crate::model::grover_angle::<f64>(&c), 50);
        let exact = c_alpha_psi_k_exact(1 << 16, 2, p, alpha(1.5)).value;
        let asym = c_alpha_psi_k_asymptotic(1 << 16, 2, p, alpha(1.5)).value;
        let n = 65536.0f64;
        assert_abs_diff_eq!(asym, 2.0 * n * ((1.0 - p) / n).powf(2.0 / 3.0), epsilon = 1e-9);
        // the dropped terms are O(1) against O(N^(1/3)); measured 1.44e-2
        let rel = ((asym - exact) / exact).abs();
        assert!((0.0143..=0.0145).contains(&rel), "{rel}");
    }

    #[test]
    fn spectrum_examples() {
        let r = target_spectrum(&cfg(5, &[19]));
        assert_eq!(r.s0, 1);
        assert!(r.histogram.keys().all(|s| s.abs() == 1));
        assert_eq!(r.histogram.values().sum::<u64>(), 31);
        let r = target_spectrum(&cfg(2, &[0b00, 0b01]));
        assert_eq!(r.histogram, BTreeMap::from([(0, 2), (2, 1)]));
        let all = make_config(4, &TargetSpec::Pattern("****".into())).unwrap();
        let r = target_spectrum(&all);
        assert_eq!(r.s0, 16);
        assert_eq!(r.histogram, BTreeMap::from([(0, 15)]));
    }

    #[test]
    fn spectrum_parseval_and_parity_exhaustive_small() {
        for n in 1..=4u32 {
            let size = 1u64 << n;
            for mask in 1u64..(1 << size) {
                let set: Vec<u64> = (0..size).filter(|x| mask >> x & 1 == 1).collect();
                let r = target_spectrum(&cfg(n, &set));
                assert!(r.parseval_holds() && r.parity_holds(), "{set:?}");
            }
        }
    }

    #[test]
    fn gamma_table() {
        let p = TargetStructure::Subcube("00**".into());
        let g = TargetStructure::Generic;
        assert_eq!(gamma_case::<f64>(1, &p).unwrap(), 1.0);
        assert_eq!(gamma_case::<f64>(2, &p).unwrap(), 0.5);
        assert_eq!(gamma_case::<f64>(3, &g).unwrap(), 0.75);
        assert_eq!(gamma_case::<f64>(4, &p).unwrap(), 0.25);
        assert_eq!(gamma_case::<f64>(4, &g).unwrap(), 0.5625);
        assert!(matches!(gamma_case::<f64>(5, &g), Err(Error::UntabulatedTargetCount(5))));
    }

    #[test]
    fn gamma_measures() {
        let r = target_spectrum(&cfg(10, &[77]));
        assert_abs_diff_eq!(r.gamma_rms(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gamma_effective(alpha(1.5)), 1.0, epsilon = 1e-12);
        // two targets: |s_y| in {0, 2}, half each
        let r = target_spectrum(&cfg(10, &[0, 1]));
        let n: f64 = 1024.0;
        assert_abs_diff_eq!(r.gamma_effective(alpha(2.0)), (n / 2.0 - 1.0).powi(2) * 2.0 / (n - 1.0).powi(2), epsilon = 1e-12);
    }

    #[test]
    fn ho_exact_single_target_is_uniform_spectrum_formula() {
        let c = cfg(8, &[200]);
        let spec = target_spectrum(&c);
        let (n, t) = (256.0f64, 1.0f64);
        for k in [0usize, 3, 7] {
            let s = two_level_state::<f64>(&c, k);
            for a in [0.3, 0.7, 1.5, 2.0] {
                let head = (s.a * (n - t).sqrt() - s.b * t.sqrt()).powi(2).powf(1.0 / a) / n.powf(1.0 / a);
                let tail = (n - 1.0) * (s.a / (n - t).sqrt() + s.b / t.sqrt()).powi(2).powf(1.0 / a) / n.powf(1.0 / a);
                let closed = (head + tail - 1.0) / (a - 1.0);
                assert_abs_diff_eq!(c_alpha_ho_exact(&spec, &s, alpha(a)).value, closed, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn ho_exact_matches_simulation_n3() {
        use crate::coherence::c_alpha_pure;
        use crate::engine::{grover_step, StateVector};
        let c = cfg(3, &[6]);
        let step = grover_step(&StateVector::<f64>::uniform(3), &c);
        let sim = c_alpha_pure(&step.after_first_hadamard.probabilities().unwrap(), alpha(2.0));
        let s = two_level_state::<f64>(&c, 0);
        assert_abs_diff_eq!(c_alpha_ho_exact(&target_spectrum(&c), &s, alpha(2.0)).value, sim, epsilon = 1e-12);
    }

    #[test]
    fn ho_exact_half_marked_small_b() {
        use crate::coherence::c_alpha_pure;
        use crate::engine::{run, Detail, Stage, StageMask};
        // t = N/2: theta = pi/4, so the iteration oscillates with period 2
        let c = make_config(6, &TargetSpec::Pattern("1*****".into())).unwrap();
        let spec = target_spectrum(&c);
        let tr = run::<f64>(&c, 4, StageMask::ALL, Detail::Full).unwrap();
        for k in 0..=4 {
            let s = two_level_state::<f64>(&c, k);
            let sim = &tr.get(k, Stage::PsiKHO).unwrap().probs;
            for a in [0.5, 1.0 + 1e-7, 2.0] {
                assert_abs_diff_eq!(c_alpha_ho_exact(&spec, &s, alpha(a)).value, c_alpha_pure(sim, alpha(a)), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn ho_asymptotic_examples() {
        let n = 1u64 << 18;
        let nf = n as f64;
        for p in [0.2f64, 0.8] {
            for a in [1.5, 2.0] {
                let v = c_alpha_ho_asymptotic(1.0, p, n, 1, alpha(a)).value;
                assert_abs_diff_eq!(v, nf / (a - 1.0) * (p / nf).powf(1.0 / a), epsilon = 1e-9);
            }
            let a = 0.7;
            let v = c_alpha_ho_asymptotic(0.5, p, n, 2, alpha(a)).value;
            assert_abs_diff_eq!(v, ((p / 2.0).powf(1.0 / a) * nf.powf(1.0 - 1.0 / a) - 1.0) / (a - 1.0), epsilon = 1e-9);
            let v = c_alpha_ho_asymptotic(1.0, p, n, 1, AlphaParam::skew()).value;
            assert_abs_diff_eq!(v, 2.0 * (1.0 - p * p / nf), epsilon = 1e-12);
            let v = c_alpha_ho_asymptotic(0.25, p, n, 4, AlphaParam::limit_one()).value;
            assert_abs_diff_eq!(v / 2f64.ln(), p / 4.0 * (4.0 * nf / p).log2(), epsilon = 1e-9);
        }
    }

    #[test]
    fn hp_is_next_psi() {
        let c = cfg(12, &[5, 6]);
        let theta = crate::model::grover_angle::<f64>(&c);
        for k in [0usize, 4, 20] {
            for a in [0.3, 1.0 + 1e-7, 1.5] {
                let hp = c_alpha_hp_exact(c.size(), 2, p_k(theta, k + 1), alpha(a)).value;
                let next = c_alpha_psi_k_exact(c.size(), 2, p_k(theta, k + 1), alpha(a)).value;
                assert_eq!(hp, next);
            }
        }
        assert_eq!(c_alpha_hp_asymptotic(1 << 16, 2, 1.0f64, alpha(2.0)).value, 0.0);
        let c = cfg(16, &[0, 1]);
        let p = p_k(crate::model::grover_angle::<f64>(&c), 11);
        let exact = c_alpha_hp_exact(1 << 16, 2, p, alpha(1.5)).value;
        let asym = c_alpha_hp_asymptotic(1 << 16, 2, p, alpha(1.5)).value;
        assert!(((asym - exact) / exact).abs() <= 0.03);
    }

    #[test]
    fn bloch_examples() {
        let theta = 0.01f64;
        let b = bloch_track(theta, 0);
        assert_abs_diff_eq!(b.r_x, -(2.0 * theta).sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(b.r_z, (2.0 * theta).cos(), epsilon = 1e-15);
        let b = bloch_track(PI / 4.0, 0);
        assert_abs_diff_eq!(b.r_z, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.success_probability(), 0.5, epsilon = 1e-15);
        let b = bloch_track(PI / 6.0, 1);
        assert_abs_diff_eq!(b.r_z, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.success_probability(), 1.0, epsilon = 1e-15);
        for k in 0..50 {
            let b = bloch_track(0.0123f64, k);
            assert!(b.r_x * b.r_x + b.r_z * b.r_z <= 1.0 + 1e-9);
            assert_abs_diff_eq!(b.success_probability(), p_k(0.0123, k), epsilon = 1e-14);
            assert_abs_diff_eq!(b.non_target_weight() + b.success_probability(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn max_examples() {
        assert_abs_diff_eq!(c_alpha_max_asymptotic::<f64>(1 << 16, AlphaParam::skew()), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c_alpha_max_asymptotic::<f64>(65536, alpha(2.0)), 256.0, epsilon = 1e-10);
        let bits = c_alpha_max_asymptotic::<f64>(65536, AlphaParam::limit_one()) / 2f64.ln();
        assert_abs_diff_eq!(bits, 16.0, epsilon = 1e-12);
    }

    #[test]
    fn complementarity_examples() {
        let (n, t) = (65536u64, 2u64);
        for p in [0.0f64, 0.3, 0.99] {
            let c = c_alpha_psi_k_asymptotic(n, t, p, alpha(2.0)).value;
            assert_abs_diff_eq!(complementarity_residual(n, t, p, alpha(2.0), c), 0.0, epsilon = 1e-12);
        }
        let p0: f64 = 2.0 / 65536.0;
        let c0 = c_alpha_psi_k_exact(n, t, p0, AlphaParam::skew()).value;
        assert!(complementarity_residual(n, t, p0, AlphaParam::skew(), c0).abs() <= 0.01);
    }

    #[test]
    fn conjecture_bounds_order() {
        let (lo, hi) = conjectured_ho_bounds(0.5f64, 1 << 16, 4, alpha(2.0));
        assert!(lo < hi);
        assert_abs_diff_eq!(hi, c_alpha_ho_asymptotic(1.0, 0.5, 1 << 16, 4, alpha(2.0)).value, epsilon = 1e-12);
        let (lo, _) = conjectured_ho_bounds(0.5f64, 1 << 16, 4, alpha(0.5));
        assert_abs_diff_eq!(lo, c_alpha_ho_asymptotic(1.0, 0.5, 1 << 16, 4, alpha(0.5)).value, epsilon = 1e-12);
    }
}
