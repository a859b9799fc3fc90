//! Database configuration, target sets and the two-level analytic state.
//!
//! Grover's iteration never leaves the real plane spanned by the uniform
//! superpositions over non-targets and over targets, so the whole algorithm
//! can be described by one angle `theta` with `sin(theta) = sqrt(t / N)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest supported register: a state vector holds `2^n` reals.
pub const MAX_QUBITS: u32 = 30;

/// How a target set was given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetSpec {
    /// Pattern over `{0, 1, *}`, most significant qubit first.
    Pattern(String),
    Indices(Vec<u64>),
}

/// On-disk configuration: `{"n": 3, "targets": {"pattern": "0**"}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub n: u32,
    pub targets: TargetSpec,
}

impl ConfigFile {
    pub fn build(&self) -> Result<GroverConfig> {
        make_config(self.n, &self.targets)
    }
}

/// Structural classification of a target set.
///
/// `Subcube` sets are exactly those whose uniform superposition is a product
/// state; the pattern is the canonical witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TargetStructure {
    Subcube(String),
    Generic,
}

impl TargetStructure {
    pub fn is_product(&self) -> bool {
        matches!(self, TargetStructure::Subcube(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSet {
    indices: Vec<u64>,
    structure: TargetStructure,
}

impl TargetSet {
    /// Sorted, distinct target indices.
    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn structure(&self) -> &TargetStructure {
        &self.structure
    }

    pub fn contains(&self, index: u64) -> bool {
        self.indices.binary_search(&index).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroverConfig {
    n: u32,
    targets: TargetSet,
}

impl GroverConfig {
    pub fn qubits(&self) -> u32 {
        self.n
    }

    /// Database size `N = 2^n`.
    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    pub fn targets(&self) -> &TargetSet {
        &self.targets
    }

    /// Number of targets `t`.
    pub fn target_count(&self) -> u64 {
        self.targets.len() as u64
    }

    pub fn to_file(&self) -> ConfigFile {
        let targets = match &self.targets.structure {
            TargetStructure::Subcube(p) => TargetSpec::Pattern(p.clone()),
            TargetStructure::Generic => TargetSpec::Indices(self.targets.indices.clone()),
        };
        ConfigFile { n: self.n, targets }
    }
}

/// Validates `n` and the target description and classifies the target set.
pub fn make_config(n: u32, spec: &TargetSpec) -> Result<GroverConfig> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount { n, max: MAX_QUBITS });
    }
    let size = 1u64 << n;
    let indices = match spec {
        TargetSpec::Pattern(p) => expand_pattern(n, p)?,
        TargetSpec::Indices(list) => {
            if list.is_empty() {
                return Err(Error::EmptyTargets);
            }
            let mut sorted = list.clone();
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DuplicateIndex(w[0]));
                }
            }
            if let Some(&max) = sorted.last() {
                if max >= size {
                    return Err(Error::IndexOutOfRange { index: max, size });
                }
            }
            sorted
        }
    };
    let structure = match subcube_pattern(n, &indices) {
        Some(p) => TargetStructure::Subcube(p),
        None => TargetStructure::Generic,
    };
    Ok(GroverConfig {
        n,
        targets: TargetSet { indices, structure },
    })
}

fn expand_pattern(n: u32, pattern: &str) -> Result<Vec<u64>> {
    let malformed = |reason: &str| Error::MalformedPattern {
        pattern: pattern.to_string(),
        reason: reason.to_string(),
    };
    if pattern.chars().count() != n as usize {
        return Err(malformed(&format!("expected {n} symbols")));
    }
    let mut base = 0u64;
    let mut free = Vec::new();
    for (i, c) in pattern.chars().enumerate() {
        let bit = n - 1 - i as u32;
        match c {
            '0' => {}
            '1' => base |= 1 << bit,
            '*' => free.push(bit),
            _ => return Err(malformed("symbols must be 0, 1 or *")),
        }
    }
    let mut out = Vec::with_capacity(1 << free.len());
    for combo in 0u64..(1u64 << free.len()) {
        let mut x = base;
        for (j, &bit) in free.iter().enumerate() {
            if combo >> j & 1 == 1 {
                x |= 1 << bit;
            }
        }
        out.push(x);
    }
    out.sort_unstable();
    Ok(out)
}

/// Returns the `{0,1,*}` pattern matching exactly `indices`, if one exists.
///
/// A set of size `2^d` whose members differ only on `d` bit positions is
/// the whole subcube spanned by those positions.
pub fn subcube_pattern(n: u32, indices: &[u64]) -> Option<String> {
    let first = *indices.first()?;
    let free = indices.iter().fold(0u64, |acc, &x| acc | (x ^ first));
    if (indices.len() as u64) != 1u64 << free.count_ones() {
        return None;
    }
    let pattern = (0..n)
        .rev()
        .map(|bit| {
            if free >> bit & 1 == 1 {
                '*'
            } else if first >> bit & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect();
    Some(pattern)
}

/// Rotation angle with `sin(theta) = sqrt(t / N)`.
pub fn grover_angle<T: Real>(config: &GroverConfig) -> T {
    let ratio = T::from_u64(config.target_count()).unwrap() / T::from_u64(config.size()).unwrap();
    ratio.sqrt().min(T::one()).asin()
}

/// Standard iteration count `floor(pi / (4 theta))`.
pub fn optimal_iterations(config: &GroverConfig) -> usize {
    let theta: f64 = grover_angle(config);
    (std::f64::consts::FRAC_PI_4 / theta).floor() as usize
}

/// `psi_k = A_k |chi_0> + B_k |chi_1>` with `A_k = cos((2k+1) theta)`,
/// `B_k = sin((2k+1) theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelState<T> {
    pub theta: T,
    pub k: usize,
    pub a: T,
    pub b: T,
}

impl<T: Real> TwoLevelState<T> {
    pub fn new(theta: T, k: usize) -> Self {
        let theta_k = T::from_count(2 * k + 1) * theta;
        let (b, a) = theta_k.sin_cos();
        Self { theta, k, a, b }
    }

    /// `(2k+1) theta`.
    pub fn theta_k(&self) -> T {
        T::from_count(2 * self.k + 1) * self.theta
    }

    /// Success probability `B_k^2`.
    pub fn success_probability(&self) -> T {
        self.b * self.b
    }

    /// One Grover iteration as a rotation by `2 theta` in the two-level plane.
    pub fn rotated(&self) -> Self {
        let (s, c) = (self.theta + self.theta).sin_cos();
        Self {
            theta: self.theta,
            k: self.k + 1,
            a: c * self.a - s * self.b,
            b: s * self.a + c * self.b,
        }
    }
}

pub fn two_level_state<T: Real>(config: &GroverConfig, k: usize) -> TwoLevelState<T> {
    TwoLevelState::new(grover_angle(config), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn idx(n: u32, list: &[u64]) -> GroverConfig {
        make_config(n, &TargetSpec::Indices(list.to_vec())).unwrap()
    }

    #[test]
    fn pattern_expansion() {
        let c = make_config(3, &TargetSpec::Pattern("0**".into())).unwrap();
        assert_eq!(c.targets().indices(), &[0, 1, 2, 3]);
        assert_eq!(c.target_count(), 4);
        assert_eq!(c.targets().structure(), &TargetStructure::Subcube("0**".into()));
    }

    #[test]
    fn single_index_is_subcube() {
        let c = idx(3, &[5]);
        assert_eq!(c.targets().structure(), &TargetStructure::Subcube("101".into()));
    }

    #[test]
    fn generic_set_matches_no_pattern() {
        // exhaustive oracle over all 3^3 patterns
        let set = [0u64, 3, 5, 6];
        let mut hits = 0;
        for code in 0..27u32 {
            let mut c = code;
            let p: String = (0..3)
                .map(|_| {
                    let s = ['0', '1', '*'][(c % 3) as usize];
                    c /= 3;
                    s
                })
                .collect();
            if expand_pattern(3, &p).unwrap() == set {
                hits += 1;
            }
        }
        assert_eq!(hits, 0);
        assert_eq!(idx(3, &set).targets().structure(), &TargetStructure::Generic);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            make_config(3, &TargetSpec::Indices(vec![1, 1])),
            Err(Error::DuplicateIndex(1))
        ));
        assert!(matches!(
            make_config(3, &TargetSpec::Indices(vec![8])),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            make_config(3, &TargetSpec::Indices(vec![])),
            Err(Error::EmptyTargets)
        ));
        assert!(matches!(
            make_config(3, &TargetSpec::Pattern("0*".into())),
            Err(Error::MalformedPattern { .. })
        ));
        assert!(matches!(
            make_config(3, &TargetSpec::Pattern("0*2".into())),
            Err(Error::MalformedPattern { .. })
        ));
        assert!(matches!(make_config(0, &TargetSpec::Indices(vec![0])), Err(Error::QubitCount { .. })));
        assert!(matches!(make_config(31, &TargetSpec::Indices(vec![0])), Err(Error::QubitCount { .. })));
    }

    #[test]
    fn config_json_schema() {
        let f: ConfigFile = serde_json::from_str(r#"{"n": 3, "targets": {"pattern": "0**"}}"#).unwrap();
        assert_eq!(f.build().unwrap().target_count(), 4);
        let f: ConfigFile = serde_json::from_str(r#"{"n": 3, "targets": {"indices": [0, 3, 5, 6]}}"#).unwrap();
        let c = f.build().unwrap();
        assert_eq!(c.targets().structure(), &TargetStructure::Generic);
        let back: ConfigFile = serde_json::from_str(&serde_json::to_string(&c.to_file()).unwrap()).unwrap();
        assert_eq!(back.build().unwrap(), c);
    }

    #[test]
    fn angles() {
        assert_abs_diff_eq!(grover_angle::<f64>(&idx(2, &[0])), std::f64::consts::PI / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(grover_angle::<f64>(&idx(3, &[0])), (1.0f64 / 8.0).sqrt().asin(), epsilon = 1e-15);
        assert_abs_diff_eq!(grover_angle::<f64>(&idx(3, &[0])), 0.361367, epsilon = 1e-6);
        let all = make_config(3, &TargetSpec::Pattern("***".into())).unwrap();
        assert_abs_diff_eq!(grover_angle::<f64>(&all), std::f64::consts::FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn two_level_examples() {
        let c = idx(3, &[0]);
        let s0 = two_level_state::<f64>(&c, 0);
        assert_abs_diff_eq!(s0.a, (7.0f64 / 8.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(s0.b, (1.0f64 / 8.0).sqrt(), epsilon = 1e-15);
        let s1 = two_level_state::<f64>(&c, 1);
        assert_abs_diff_eq!(s1.b, 5.0 / (4.0 * 2f64.sqrt()), epsilon = 1e-14);
        let s = two_level_state::<f64>(&idx(2, &[3]), 1);
        assert_abs_diff_eq!(s.b, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rotation_matches_closed_form() {
        let c = idx(10, &[3, 17, 200]);
        let mut s = two_level_state::<f64>(&c, 0);
        for k in 0..60 {
            let direct = two_level_state::<f64>(&c, k);
            assert_abs_diff_eq!(s.a, direct.a, epsilon = 1e-12);
            assert_abs_diff_eq!(s.b, direct.b, epsilon = 1e-12);
            assert_abs_diff_eq!(direct.a * direct.a + direct.b * direct.b, 1.0, epsilon = 1e-12);
            s = s.rotated();
        }
    }

    /// Product test: every single-qubit cut of the amplitude tensor has rank one.
    fn is_product_state(n: u32, amp: &[f64]) -> bool {
        (0..n).all(|q| {
            let (mut g00, mut g11, mut g01) = (0.0, 0.0, 0.0);
            for rest in 0..(1usize << (n - 1)) {
                let lo = rest & ((1 << q) - 1);
                let hi = (rest >> q) << (q + 1);
                let a0 = amp[hi | lo];
                let a1 = amp[hi | lo | (1 << q)];
                g00 += a0 * a0;
                g11 += a1 * a1;
                g01 += a0 * a1;
            }
            (g00 * g11 - g01 * g01).abs() < 1e-12
        })
    }

    #[test]
    fn subcube_iff_product_exhaustive() {
        for n in 1..=4u32 {
            let size = 1usize << n;
            for mask in 1u32..(1u32 << size) {
                let set: Vec<u64> = (0..size as u64).filter(|&x| mask >> x & 1 == 1).collect();
                let norm = (set.len() as f64).sqrt();
                let mut amp = vec![0.0; size];
                for &x in &set {
                    amp[x as usize] = 1.0 / norm;
                }
                let c = idx(n, &set);
                assert_eq!(
                    c.targets().structure().is_product(),
                    is_product_state(n, &amp),
                    "n={n} set={set:?}"
                );
            }
        }
    }
}
