//! Finite nonnegative distributions and the statistics of a single law.
//!
//! Everything here works on the square-root scale `Y = sqrt(X)`: the
//! variance `V`, the spreads `E` (from the bottom of the support) and `F`
//! (from the top) are all second moments of `Y` about different centres.
//! They are computed in centred form so that laws whose atoms sit far from
//! the origin (shifted two-point families) keep their accuracy.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance on the total probability mass accepted by [`make_distribution`].
pub const TOL_P: f64 = 1e-12;
/// Gap values in `[-TOL_GAP, 0)` are treated as roundoff and clamped to zero.
pub const TOL_GAP: f64 = 1e-12;

/// A nonnegative extended real: finite or `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::Infinity => None,
        }
    }

    /// Maps `+inf` onto the IEEE infinity, for plotting and sorting only.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtReal::Infinity
        } else {
            ExtReal::Finite(x)
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            (ExtReal::Finite(_), ExtReal::Infinity) => Some(Ordering::Less),
            (ExtReal::Infinity, ExtReal::Finite(_)) => Some(Ordering::Greater),
            (ExtReal::Infinity, ExtReal::Infinity) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseExtRealError(pub String);

impl fmt::Display for ParseExtRealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expected a number or INF, got {:?}", self.0)
    }
}

impl std::error::Error for ParseExtRealError {}

impl FromStr for ExtReal {
    type Err = ParseExtRealError;

    /// Accepts a decimal number or the token `INF` (any case).
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("+inf") {
            return Ok(ExtReal::Infinity);
        }
        match t.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(ExtReal::Finite(x)),
            _ => Err(ParseExtRealError(s.to_string())),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => s.serialize_f64(*x),
            ExtReal::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(ExtReal::Finite(x)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// One support point and its probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub p: f64,
}

/// A probability law on finitely many nonnegative points.
///
/// Atoms are kept sorted by strictly increasing value, every probability is
/// positive and the probabilities sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution")]
pub struct DiscreteDistribution {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawDistribution {
    atoms: Vec<Atom>,
}

impl TryFrom<RawDistribution> for DiscreteDistribution {
    type Error = Error;

    fn try_from(raw: RawDistribution) -> Result<Self> {
        make_distribution(raw.atoms.iter().map(|a| (a.x, a.p)))
    }
}

impl DiscreteDistribution {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Least support point `m_X`.
    pub fn min(&self) -> f64 {
        self.atoms[0].x
    }

    /// Greatest support point `M_X`.
    pub fn max(&self) -> f64 {
        self.atoms[self.atoms.len() - 1].x
    }

    pub fn mean(&self) -> f64 {
        self.expect(|x| x)
    }

    /// `E f(X)` as a weighted sum over the atoms.
    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|a| a.p * f(a.x)).sum()
    }

    /// The law of `s * X`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        make_distribution(self.atoms.iter().map(|a| (s * a.x, a.p)))
    }
}

/// Builds a distribution from `(value, prob)` pairs.
///
/// Zero-probability pairs are dropped, exactly equal values are merged and
/// the probabilities are renormalized once their sum is within [`TOL_P`] of 1.
pub fn make_distribution<I>(pairs: I) -> Result<DiscreteDistribution>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut atoms = Vec::new();
    for (index, (x, p)) in pairs.into_iter().enumerate() {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::NegativeValue { index, value: x });
        }
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::NegativeProb { index, prob: p });
        }
        if p > 0.0 {
            // -0.0 becomes 0.0
            atoms.push(Atom { x: x + 0.0, p });
        }
    }
    if atoms.is_empty() {
        return Err(Error::EmptySupport);
    }
    let sum: f64 = atoms.iter().map(|a| a.p).sum();
    if (sum - 1.0).abs() > TOL_P {
        return Err(Error::ProbSumOutOfTolerance { sum });
    }

    atoms.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match merged.last_mut() {
            Some(last) if last.x == a.x => last.p += a.p,
            _ => merged.push(a),
        }
    }
    for a in &mut merged {
        a.p /= sum;
    }
    Ok(DiscreteDistribution { atoms: merged })
}

/// The empirical law of `values`: each distinct value gets multiplicity / n.
pub fn uniform_from_values(values: &[f64]) -> Result<DiscreteDistribution> {
    if values.is_empty() {
        return Err(Error::EmptySupport);
    }
    if let Some((index, &value)) = values
        .iter()
        .enumerate()
        .find(|(_, x)| !(x.is_finite() && **x >= 0.0))
    {
        return Err(Error::NegativeValue { index, value });
    }
    let mut sorted: Vec<f64> = values.iter().map(|x| x + 0.0).collect();
    sorted.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let mut atoms: Vec<Atom> = Vec::new();
    for x in sorted {
        match atoms.last_mut() {
            Some(last) if last.x == x => last.p += 1.0,
            _ => atoms.push(Atom { x, p: 1.0 }),
        }
    }
    for a in &mut atoms {
        a.p /= n;
    }
    Ok(DiscreteDistribution { atoms })
}

/// `E ln X`, equal to `-inf` exactly when some atom sits at zero.
pub fn log_mean(d: &DiscreteDistribution) -> f64 {
    if d.min() == 0.0 {
        return f64::NEG_INFINITY;
    }
    d.expect(f64::ln)
}

/// The geometric mean `exp E ln X`, with `exp(-inf) = 0`.
pub fn geometric_mean(d: &DiscreteDistribution) -> f64 {
    log_mean(d).exp()
}

/// The AM-GM gap `D_X = E X - exp E ln X`.
pub fn amgm_gap(d: &DiscreteDistribution) -> f64 {
    if d.len() == 1 {
        return 0.0;
    }
    let gap = d.mean() - geometric_mean(d);
    if (-TOL_GAP..0.0).contains(&gap) {
        0.0
    } else {
        gap
    }
}

/// Statistics of one distribution on the square-root scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mean: f64,
    /// `E ln X`; serialized as the string `"-inf"` when a zero atom is present.
    #[serde(with = "neg_inf_as_string")]
    pub log_mean: f64,
    pub gap: f64,
    /// `V_X = Var sqrt(X)`.
    #[serde(rename = "V")]
    pub var_sqrt: f64,
    #[serde(rename = "m")]
    pub min: f64,
    #[serde(rename = "M")]
    pub max: f64,
    /// `E_X = E (sqrt(X) - sqrt(m_X))^2`.
    #[serde(rename = "E")]
    pub spread_low: f64,
    /// `F_X = E (sqrt(M_X) - sqrt(X))^2`.
    #[serde(rename = "F")]
    pub spread_high: ExtReal,
}

mod neg_inf_as_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *x == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Str(s) if s.eq_ignore_ascii_case("-inf") => Ok(f64::NEG_INFINITY),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad log mean {s:?}"))),
        }
    }
}

/// Computes `(V, E, F)` and the mean/gap statistics of `d`.
///
/// `V`, `E` and `F` are second moments of `sqrt(X)` about its mean, its
/// minimum and its maximum respectively, summed atomwise.
pub fn sqrt_moments(d: &DiscreteDistribution) -> MomentSummary {
    let lo = d.min().sqrt();
    let hi = d.max().sqrt();
    let mean_sqrt = d.expect(f64::sqrt);
    let mut var = 0.0;
    let mut low = 0.0;
    let mut high = 0.0;
    for a in d.atoms() {
        let y = a.x.sqrt();
        var += a.p * (y - mean_sqrt).powi(2);
        low += a.p * (y - lo).powi(2);
        high += a.p * (hi - y).powi(2);
    }
    MomentSummary {
        mean: d.mean(),
        log_mean: log_mean(d),
        gap: amgm_gap(d),
        var_sqrt: var,
        min: d.min(),
        max: d.max(),
        spread_low: low,
        spread_high: ExtReal::Finite(high),
    }
}

/// `(Var Y, (E Y - a)(b - E Y))` for `Y = sqrt(X)` on `[a, b]`, `a = sqrt(m_X)`,
/// `b = sqrt(M_X)`. The first never exceeds the second, with equality exactly
/// when `Y` has at most two support points.
pub fn variance_envelope(d: &DiscreteDistribution) -> (f64, f64) {
    let lo = d.min().sqrt();
    let hi = d.max().sqrt();
    let mean_sqrt = d.expect(f64::sqrt);
    let var = d.expect(|x| (x.sqrt() - mean_sqrt).powi(2));
    (var, (mean_sqrt - lo) * (hi - mean_sqrt))
}
