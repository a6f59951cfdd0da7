//! Bandlimit pairs: validation, normalization and the JSON file format.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::numeric;

/// Tolerance on the admissibility sum of a pair flagged as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Relative spacing below which consecutive nodes count as coincident.
pub const COINCIDENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSet {
    FiniteRange { lo: i64, hi: i64 },
    NonNegative,
    NonPositive,
    AllIntegers,
}

/// Closed-form family a finite pair was cut from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticFamily {
    /// Nodes `n*pi/a`, constant weights `(pi/a)*tanh(a)`.
    PaleyWiener { a: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub family: AnalyticFamily,
    /// Index set of the untruncated family.
    pub indices: IndexSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Violation {
    Empty,
    LengthMismatch { nodes: usize, weights: usize },
    IndexRange { lo: i64, hi: i64, len: usize },
    NonFiniteNode { index: i64 },
    NonFiniteWeight { index: i64 },
    NotIncreasing { index: i64 },
    NonPositiveWeight { index: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "pair has no nodes"),
            Violation::LengthMismatch { nodes, weights } => {
                write!(f, "{nodes} nodes but {weights} weights")
            }
            Violation::IndexRange { lo, hi, len } => {
                write!(f, "index range {lo}..={hi} does not match {len} nodes")
            }
            Violation::NonFiniteNode { index } => write!(f, "node {index} is not finite"),
            Violation::NonFiniteWeight { index } => write!(f, "weight {index} is not finite"),
            Violation::NotIncreasing { index } => {
                write!(f, "nodes not strictly increasing at index {index}")
            }
            Violation::NonPositiveWeight { index } => write!(f, "weight {index} is not positive"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexRange {
    pub lo: i64,
    pub hi: i64,
}

/// On-disk form of a pair. Nothing is checked until it is turned into a
/// [`BandlimitPair`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairFile {
    pub indices: IndexRange,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub normalized: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissibility_sum: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_of: Option<Truncation>,
}

/// Check everything about a pair except the normalization flag.
pub fn validate_pair(raw: &PairFile) -> ValidationReport {
    let mut violations = Vec::new();
    let (nodes, weights) = (&raw.nodes, &raw.weights);
    if nodes.is_empty() {
        violations.push(Violation::Empty);
    }
    if nodes.len() != weights.len() {
        violations.push(Violation::LengthMismatch { nodes: nodes.len(), weights: weights.len() });
    }
    let IndexRange { lo, hi } = raw.indices;
    if lo > hi || (hi - lo + 1) as i128 != nodes.len() as i128 {
        violations.push(Violation::IndexRange { lo, hi, len: nodes.len() });
    }
    for (i, t) in nodes.iter().enumerate() {
        if !t.is_finite() {
            violations.push(Violation::NonFiniteNode { index: lo + i as i64 });
        }
    }
    for (i, w) in nodes.windows(2).enumerate() {
        if w[0].is_finite()
            && w[1].is_finite()
            && !(w[1] - w[0] > COINCIDENCE_TOL * (1.0 + w[0].abs().max(w[1].abs())))
        {
            violations.push(Violation::NotIncreasing { index: lo + i as i64 });
        }
    }
    for (i, w) in weights.iter().enumerate() {
        if !w.is_finite() {
            violations.push(Violation::NonFiniteWeight { index: lo + i as i64 });
        } else if *w <= 0.0 {
            violations.push(Violation::NonPositiveWeight { index: lo + i as i64 });
        }
    }
    ValidationReport { violations }
}

/// A finite, validated bandlimit pair `(t, t')` with integer labels `lo..=hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandlimitPair {
    lo: i64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    normalized: bool,
    scale: f64,
    truncation_of: Option<Truncation>,
    // sum t'_n t_n/(1+t_n^2) and sum t'_n/(1+t_n^2)
    c_re: f64,
    c_im: f64,
}

impl BandlimitPair {
    /// Validate and build an unnormalized pair labelled `lo, lo+1, ...`.
    pub fn new(lo: i64, nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let hi = lo + nodes.len() as i64 - 1;
        let raw = PairFile {
            indices: IndexRange { lo, hi },
            nodes,
            weights,
            normalized: false,
            scale: None,
            admissibility_sum: None,
            truncation_of: None,
        };
        Self::from_file(raw)
    }

    /// Build from the file form. A `normalized: true` flag is honoured only
    /// if the admissibility sum really is pi.
    pub fn from_file(raw: PairFile) -> Result<Self> {
        let report = validate_pair(&raw);
        if !report.is_empty() {
            return Err(Error::InvalidPair(report));
        }
        let mut pair = BandlimitPair {
            lo: raw.indices.lo,
            nodes: raw.nodes,
            weights: raw.weights,
            normalized: false,
            scale: raw.scale.unwrap_or(1.0),
            truncation_of: raw.truncation_of,
            c_re: 0.0,
            c_im: 0.0,
        };
        pair.refresh_constants();
        if raw.normalized {
            if (pair.c_im - PI).abs() > NORMALIZATION_TOL {
                return Err(Error::NotNormalized { sum: pair.c_im });
            }
            pair.normalized = true;
        }
        Ok(pair)
    }

    pub fn to_file(&self) -> PairFile {
        PairFile {
            indices: IndexRange { lo: self.lo, hi: self.hi() },
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            normalized: self.normalized,
            scale: Some(self.scale),
            admissibility_sum: Some(self.c_im),
            truncation_of: self.truncation_of,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let raw: PairFile = serde_json::from_str(&text)?;
        Self::from_file(raw)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    /// Paley-Wiener truncation: nodes `n*pi/a` for `|n| <= n_max`, normalized.
    pub fn paley_wiener(a: f64, n_max: usize) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidArgument(format!("bandwidth must be positive, got {a}")));
        }
        let n = n_max as i64;
        let nodes = (-n..=n).map(|k| k as f64 * PI / a).collect();
        let w = PI / a * a.tanh();
        let mut pair = Self::new(-n, nodes, vec![w; 2 * n_max + 1])?;
        pair.truncation_of = Some(Truncation {
            family: AnalyticFamily::PaleyWiener { a },
            indices: IndexSet::AllIntegers,
        });
        normalize_pair(&pair)
    }

    fn refresh_constants(&mut self) {
        let mut re = numeric::NeumaierSum::new();
        let mut im = numeric::NeumaierSum::new();
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let d = 1.0 + t * t;
            re.add(w * t / d);
            im.add(w / d);
        }
        self.c_re = re.value();
        self.c_im = im.value();
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.nodes.len() as i64 - 1
    }

    pub fn indices(&self) -> IndexSet {
        IndexSet::FiniteRange { lo: self.lo, hi: self.hi() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Node with label `n`.
    pub fn node(&self, n: i64) -> Option<f64> {
        let i = usize::try_from(n - self.lo).ok()?;
        self.nodes.get(i).copied()
    }

    pub fn weight(&self, n: i64) -> Option<f64> {
        let i = usize::try_from(n - self.lo).ok()?;
        self.weights.get(i).copied()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Product of all scaling constants applied by [`normalize_pair`].
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn truncation_of(&self) -> Option<&Truncation> {
        self.truncation_of.as_ref()
    }

    /// `sum t'_n / (1 + t_n^2)`.
    pub fn admissibility_sum(&self) -> f64 {
        self.c_im
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized { sum: self.c_im })
        }
    }

    /// The node lattice viewed as the `theta = 0` sampling lattice.
    pub fn lattice(&self) -> Lattice<'_> {
        Lattice::new(0.0, self.lo, &self.nodes, &self.weights, self.c_re, self.c_im)
    }
}

/// Rescale the weights so that `sum t'_n/(1+t_n^2) = pi`.
pub fn normalize_pair(pair: &BandlimitPair) -> Result<BandlimitPair> {
    let s = pair.admissibility_sum();
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Degenerate(format!("admissibility sum {s}")));
    }
    let c = PI / s;
    let mut out = pair.clone();
    for w in &mut out.weights {
        *w *= c;
    }
    out.scale *= c;
    out.normalized = true;
    out.refresh_constants();
    Ok(out)
}

/// A random normalized pair with `n` nodes, for tests and demos. Gaps are
/// drawn from `[0.3, 1.5]` and raw weights from `[0.3, 2]`.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, n: usize) -> BandlimitPair {
    assert!(n > 0);
    let mut t = rng.gen_range(-4.0..-1.0);
    let mut nodes = Vec::with_capacity(n);
    for _ in 0..n {
        nodes.push(t);
        t += rng.gen_range(0.3..1.5);
    }
    let weights = (0..n).map(|_| rng.gen_range(0.3..2.0)).collect();
    let lo = -((n / 2) as i64);
    let pair = BandlimitPair::new(lo, nodes, weights).expect("generated pair is valid");
    normalize_pair(&pair).expect("generated pair is admissible")
}
