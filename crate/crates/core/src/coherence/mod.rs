//! Tsallis relative alpha entropy of coherence and its limits.
//!
//! For a pure state the `alpha` power of the density operator is the
//! operator itself, so every quantifier here only needs the computational
//! basis probabilities `p_j = |<j|psi>|^2`. The general density-matrix
//! path lives in [`mixed`].

pub mod mixed;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Half-width of the window around `alpha = 1` evaluated with the limit
/// formula instead of `1 / (alpha - 1)`.
pub const ALPHA_ONE_WINDOW: f64 = 1e-6;

/// Which closed form a given `alpha` selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaBranch {
    /// `alpha` in `(0, 1)`.
    Below,
    /// `|alpha - 1| < ALPHA_ONE_WINDOW`: relative entropy of coherence (nats).
    Limit,
    /// `alpha` in `(1, 2]`.
    Above,
}

/// Validated order `alpha` in `(0, 1) U (1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct AlphaParam(f64);

impl AlphaParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha > 2.0 || alpha == 1.0 {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(Self(alpha))
    }

    /// `alpha -> 1`, the relative entropy of coherence.
    pub fn limit_one() -> Self {
        Self(1.0)
    }

    pub fn skew() -> Self {
        Self(0.5)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn value<T: Real>(self) -> T {
        T::lit(self.0)
    }

    pub fn branch(self) -> AlphaBranch {
        if (self.0 - 1.0).abs() < ALPHA_ONE_WINDOW {
            AlphaBranch::Limit
        } else if self.0 < 1.0 {
            AlphaBranch::Below
        } else {
            AlphaBranch::Above
        }
    }
}

impl TryFrom<f64> for AlphaParam {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        if value == 1.0 {
            Ok(Self::limit_one())
        } else {
            Self::new(value)
        }
    }
}

impl From<AlphaParam> for f64 {
    fn from(a: AlphaParam) -> f64 {
        a.0
    }
}

impl std::fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Compensated (Neumaier) summation.
pub fn stable_sum<T: Real>(values: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut c = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// A multiset of probabilities: `(p, multiplicity)` pairs.
///
/// Every quantifier in this module is a symmetric function of the
/// probabilities, so both full vectors and compressed histograms feed them.
pub trait Masses<T: Real> {
    fn masses(&self) -> impl Iterator<Item = (T, usize)> + '_;

    /// Number of basis states `d`.
    fn dimension(&self) -> usize {
        self.masses().map(|(_, m)| m).sum()
    }
}

/// Computational-basis probabilities of a state, `sum p_j = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector<T>(Vec<T>);

impl<T: Real> ProbabilityVector<T> {
    pub fn new(p: Vec<T>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidProbabilities("empty".into()));
        }
        if let Some(bad) = p.iter().find(|x| !x.is_finite() || **x < T::zero()) {
            return Err(Error::InvalidProbabilities(format!("entry {bad} is negative or not finite")));
        }
        let total = stable_sum(p.iter().copied());
        let tol = T::lit(1e-10).max(T::epsilon() * T::from_count(p.len()));
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidProbabilities(format!("sum {total} != 1")));
        }
        Ok(Self(p))
    }

    /// Squared moduli of real amplitudes.
    pub fn from_amplitudes(amp: &[T]) -> Result<Self> {
        Self::new(amp.iter().map(|a| *a * *a).collect())
    }

    pub fn uniform(d: usize) -> Self {
        Self(vec![T::one() / T::from_count(d); d])
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<T: Real> Masses<T> for ProbabilityVector<T> {
    fn masses(&self) -> impl Iterator<Item = (T, usize)> + '_ {
        self.0.iter().map(|&p| (p, 1))
    }
}

/// Relative tolerance below which two probabilities share a histogram bin.
///
/// A bin keeps the exact sum of its members, so merging only perturbs
/// smooth symmetric functions at second order in the bin spread.
pub const HISTOGRAM_MERGE_TOL: f64 = 1e-9;

const LINEAR_BIN_LIMIT: usize = 64;

/// Value -> count compression of a probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityHistogram<T> {
    /// `(mean probability, count)`, sorted by probability.
    bins: Vec<(T, usize)>,
}

impl<T: Real> ProbabilityHistogram<T> {
    pub fn from_probabilities(p: impl IntoIterator<Item = T>) -> Self {
        let tol = T::lit(HISTOGRAM_MERGE_TOL);
        let tiny = T::min_positive_value();
        // (anchor, compensated sum, compensation, count)
        let mut bins: Vec<(T, T, T, usize)> = Vec::new();
        let mut overflow: Vec<T> = Vec::new();
        let mut hint = 0usize;
        let matches = |anchor: T, x: T| (x - anchor).abs() <= tol * anchor.max(x) + tiny;
        for x in p {
            let slot = if !bins.is_empty() && matches(bins[hint].0, x) {
                Some(hint)
            } else {
                bins.iter().position(|b| matches(b.0, x))
            };
            match slot {
                Some(i) => {
                    let b = &mut bins[i];
                    let t = b.1 + x;
                    if b.1.abs() >= x.abs() {
                        b.2 += (b.1 - t) + x;
                    } else {
                        b.2 += (x - t) + b.1;
                    }
                    b.1 = t;
                    b.3 += 1;
                    hint = i;
                }
                None if bins.len() < LINEAR_BIN_LIMIT => {
                    bins.push((x, x, T::zero(), 1));
                    hint = bins.len() - 1;
                }
                None => overflow.push(x),
            }
        }
        let mut out: Vec<(T, T, usize)> = bins.into_iter().map(|b| (b.0, b.1 + b.2, b.3)).collect();
        if !overflow.is_empty() {
            overflow.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut i = 0;
            while i < overflow.len() {
                let anchor = overflow[i];
                let mut j = i;
                while j < overflow.len() && matches(anchor, overflow[j]) {
                    j += 1;
                }
                out.push((anchor, stable_sum(overflow[i..j].iter().copied()), j - i));
                i = j;
            }
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let bins = out
            .into_iter()
            .map(|(_, sum, count)| (sum / T::from_count(count), count))
            .collect();
        Self { bins }
    }

    pub fn from_amplitudes(amp: &[T]) -> Self {
        Self::from_probabilities(amp.iter().map(|a| *a * *a))
    }

    pub fn bins(&self) -> &[(T, usize)] {
        &self.bins
    }

    pub fn total(&self) -> T {
        stable_sum(self.bins.iter().map(|&(p, c)| p * T::from_count(c)))
    }
}

impl<T: Real> Masses<T> for ProbabilityHistogram<T> {
    fn masses(&self) -> impl Iterator<Item = (T, usize)> + '_ {
        self.bins.iter().copied()
    }
}

/// `sum_j p_j^(1/alpha)` with `0^(1/alpha) = 0`.
pub fn power_sum<T: Real, P: Masses<T> + ?Sized>(p: &P, alpha: AlphaParam) -> T {
    let inv = T::one() / alpha.value::<T>();
    stable_sum(p.masses().map(|(x, m)| {
        if x <= T::zero() {
            T::zero()
        } else {
            T::from_count(m) * x.powf(inv)
        }
    }))
}

/// Shannon entropy of `p` in nats, `0 ln 0 = 0`.
pub fn entropy_nats<T: Real, P: Masses<T> + ?Sized>(p: &P) -> T {
    -stable_sum(p.masses().map(|(x, m)| {
        if x <= T::zero() {
            T::zero()
        } else {
            T::from_count(m) * x * x.ln()
        }
    }))
}

/// `C_alpha` of a pure state with basis probabilities `p`:
/// `(sum_j p_j^(1/alpha) - 1) / (alpha - 1)`.
///
/// Near `alpha = 1` this returns `ln 2 * C_r(p)`, i.e. the Shannon entropy
/// of `p` in nats.
pub fn c_alpha_pure<T: Real, P: Masses<T> + ?Sized>(p: &P, alpha: AlphaParam) -> T {
    match alpha.branch() {
        AlphaBranch::Limit => entropy_nats(p),
        _ => (power_sum(p, alpha) - T::one()) / (alpha.value::<T>() - T::one()),
    }
}

/// Relative entropy of coherence of a pure state, in bits.
pub fn relative_entropy_coherence<T: Real, P: Masses<T> + ?Sized>(p: &P) -> T {
    entropy_nats(p) / T::LN_2()
}

/// Skew information of coherence of a pure state, `1 - sum_j p_j^2`.
pub fn skew_info_coherence<T: Real, P: Masses<T> + ?Sized>(p: &P) -> T {
    T::one() - stable_sum(p.masses().map(|(x, m)| T::from_count(m) * x * x))
}

/// Largest `C_alpha` over pure states of dimension `d` (the uniform superposition).
pub fn c_alpha_max_pure<T: Real>(d: usize, alpha: AlphaParam) -> T {
    let d = T::from_count(d);
    match alpha.branch() {
        AlphaBranch::Limit => d.ln(),
        _ => {
            let a = alpha.value::<T>();
            (d.powf(T::one() - T::one() / a) - T::one()) / (a - T::one())
        }
    }
}

/// `c / c_max` with a flag for values outside `[0, 1 + 1e-6]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normalized<T> {
    pub value: T,
    pub in_range: bool,
}

pub fn normalized_coherence<T: Real>(c: T, c_max: T) -> Result<Normalized<T>> {
    if c_max.is_nan() || c_max <= T::zero() {
        return Err(Error::NonPositiveMaximum(c_max.to_f64_lossy()));
    }
    let value = c / c_max;
    let in_range = value >= T::zero() && value <= T::one() + T::lit(1e-6);
    Ok(Normalized { value, in_range })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn alpha(a: f64) -> AlphaParam {
        AlphaParam::new(a).unwrap()
    }

    fn psi1_n3() -> ProbabilityVector<f64> {
        let mut p = vec![1.0 / 32.0; 8];
        p[5] = 25.0 / 32.0;
        ProbabilityVector::new(p).unwrap()
    }

    #[test]
    fn alpha_domain() {
        assert!(AlphaParam::new(0.0).is_err());
        assert!(AlphaParam::new(1.0).is_err());
        assert!(AlphaParam::new(2.0001).is_err());
        assert!(AlphaParam::new(f64::NAN).is_err());
        assert_eq!(alpha(2.0).branch(), AlphaBranch::Above);
        assert_eq!(alpha(0.3).branch(), AlphaBranch::Below);
        assert_eq!(alpha(1.0 + 1e-7).branch(), AlphaBranch::Limit);
        assert_eq!(alpha(1.0 - 1e-7).branch(), AlphaBranch::Limit);
        assert_eq!(alpha(1.0 + 2e-6).branch(), AlphaBranch::Above);
        assert_eq!(AlphaParam::try_from(1.0).unwrap().branch(), AlphaBranch::Limit);
    }

    #[test]
    fn c_alpha_examples() {
        let basis = ProbabilityVector::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        for a in [0.3, 0.5, 1.5, 2.0] {
            assert_eq!(c_alpha_pure(&basis, alpha(a)), 0.0);
        }
        assert_eq!(c_alpha_pure(&basis, AlphaParam::limit_one()), 0.0);
        let u = ProbabilityVector::<f64>::uniform(4);
        assert_abs_diff_eq!(c_alpha_pure(&u, alpha(2.0)), 1.0, epsilon = 1e-15);
        // sqrt(49/32) + sqrt(25/32) - 1 = 3 / sqrt(2) - 1
        assert_abs_diff_eq!(c_alpha_pure(&psi1_n3(), alpha(2.0)), 3.0 / 2f64.sqrt() - 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c_alpha_pure(&psi1_n3(), alpha(2.0)), 1.121320, epsilon = 1e-6);
    }

    #[test]
    fn relative_entropy_examples() {
        let half = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(relative_entropy_coherence(&half), 1.0, epsilon = 1e-15);
        let basis = ProbabilityVector::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(relative_entropy_coherence(&basis), 0.0);
        let direct = -(25.0f64 / 32.0) * (25.0f64 / 32.0).log2() - 7.0 * (1.0f64 / 32.0) * (1.0f64 / 32.0).log2();
        assert_abs_diff_eq!(relative_entropy_coherence(&psi1_n3()), direct, epsilon = 1e-14);
        assert_abs_diff_eq!(relative_entropy_coherence(&psi1_n3()), 1.371987, epsilon = 1e-6);
    }

    #[test]
    fn skew_examples() {
        let half = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(skew_info_coherence(&half), 0.5, epsilon = 1e-15);
        let basis = ProbabilityVector::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(skew_info_coherence(&basis), 0.0);
        let u = ProbabilityVector::<f64>::uniform(16);
        assert_abs_diff_eq!(skew_info_coherence(&u), 1.0 - 1.0 / 16.0, epsilon = 1e-15);
    }

    #[test]
    fn normalization() {
        assert_eq!(normalized_coherence(0.0, 3.0).unwrap().value, 0.0);
        assert_eq!(normalized_coherence(3.0, 3.0).unwrap().value, 1.0);
        assert_eq!(normalized_coherence(1.0, 2.0).unwrap().value, 0.5);
        assert!(!normalized_coherence(2.5, 2.0).unwrap().in_range);
        assert!(normalized_coherence(1.0, 0.0).is_err());
    }

    #[test]
    fn probability_vector_validation() {
        assert!(ProbabilityVector::new(vec![0.5, 0.4]).is_err());
        assert!(ProbabilityVector::new(vec![1.5, -0.5]).is_err());
        assert!(ProbabilityVector::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn histogram_compresses_and_preserves_mass() {
        let mut p = vec![1.0 / 32.0; 7];
        p.insert(3, 25.0 / 32.0);
        let h = ProbabilityHistogram::from_probabilities(p.iter().copied());
        assert_eq!(h.bins(), &[(1.0 / 32.0, 7), (25.0 / 32.0, 1)]);
        assert_abs_diff_eq!(h.total(), 1.0, epsilon = 1e-15);
        let v = ProbabilityVector::new(p).unwrap();
        assert_abs_diff_eq!(c_alpha_pure(&h, alpha(1.5)), c_alpha_pure(&v, alpha(1.5)), epsilon = 1e-14);
    }

    #[test]
    fn histogram_overflow_path() {
        // more distinct values than the linear scan keeps
        let d = 500;
        let raw: Vec<f64> = (1..=d).map(|i| i as f64).collect();
        let s: f64 = raw.iter().sum();
        let p: Vec<f64> = raw.iter().map(|x| x / s).collect();
        let h = ProbabilityHistogram::from_probabilities(p.iter().copied());
        assert_eq!(h.bins().len(), d);
        assert_eq!(h.dimension(), d);
        let v = ProbabilityVector::new(p).unwrap();
        for a in [0.3, 2.0] {
            assert_abs_diff_eq!(c_alpha_pure(&h, alpha(a)), c_alpha_pure(&v, alpha(a)), epsilon = 1e-12);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let u = ProbabilityVector::<f32>::uniform(4);
        assert!((c_alpha_pure(&u, alpha(2.0)) - 1.0).abs() < 1e-6);
    }

    fn prob_vec(max_d: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, 2..=max_d).prop_filter_map("nonzero", |w| {
            let s: f64 = w.iter().sum();
            (s > 1e-3).then(|| w.iter().map(|x| x / s).collect())
        })
    }

    proptest! {
        #[test]
        fn nonnegative(p in prob_vec(8), a in prop::sample::select(vec![0.3, 0.5, 0.7, 1.5, 2.0])) {
            let v = ProbabilityVector::new(p).unwrap();
            prop_assert!(c_alpha_pure(&v, alpha(a)) >= -1e-12);
        }

        #[test]
        fn uniform_is_maximal(p in prob_vec(8), a in prop::sample::select(vec![0.3, 0.5, 0.7, 1.5, 2.0])) {
            let d = p.len();
            let v = ProbabilityVector::new(p).unwrap();
            prop_assert!(c_alpha_pure(&v, alpha(a)) <= c_alpha_max_pure::<f64>(d, alpha(a)) + 1e-12);
        }

        #[test]
        fn limit_consistency(p in prob_vec(8), sign in prop::sample::select(vec![-1.0, 1.0])) {
            let v = ProbabilityVector::new(p).unwrap();
            let lim = 2f64.ln() * relative_entropy_coherence(&v);
            // evaluate the generic formula just outside the limit window too
            let near = (power_sum(&v, alpha(1.0 + sign * 1e-5)) - 1.0) / (sign * 1e-5);
            prop_assert!((c_alpha_pure(&v, alpha(1.0 + sign * 1e-7)) - lim).abs() <= 1e-5);
            prop_assert!((near - lim).abs() <= 1e-4);
        }

        #[test]
        fn skew_identity(p in prob_vec(8)) {
            let v = ProbabilityVector::new(p).unwrap();
            prop_assert!((c_alpha_pure(&v, AlphaParam::skew()) - 2.0 * skew_info_coherence(&v)).abs() <= 1e-12);
        }

        #[test]
        fn histogram_matches_vector(p in prob_vec(16)) {
            let h = ProbabilityHistogram::from_probabilities(p.iter().copied());
            let v = ProbabilityVector::new(p).unwrap();
            for a in [0.5, 1.5, 2.0] {
                prop_assert!((c_alpha_pure(&h, alpha(a)) - c_alpha_pure(&v, alpha(a))).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn maximality_random_pure_states() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for &d in &[2usize, 4, 8] {
            for _ in 0..1000 {
                let w: Vec<f64> = (0..d).map(|_| rng.gen::<f64>().powi(2)).collect();
                let s: f64 = w.iter().sum();
                let v = ProbabilityVector::new(w.iter().map(|x| x / s).collect()).unwrap();
                for a in [0.3, 0.5, 1.5, 2.0] {
                    assert!(c_alpha_pure(&v, alpha(a)) <= c_alpha_max_pure::<f64>(d, alpha(a)) + 1e-12);
                }
            }
            let u = ProbabilityVector::<f64>::uniform(d);
            assert_abs_diff_eq!(c_alpha_pure(&u, alpha(2.0)), c_alpha_max_pure::<f64>(d, alpha(2.0)), epsilon = 1e-12);
        }
    }
}
