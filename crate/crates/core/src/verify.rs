//! Seeded falsification campaigns.
//!
//! Every trial draws from its own ChaCha8 stream keyed by `(seed, suite,
//! trial index)`, so a report depends only on the configuration and never on
//! how trials were scheduled. Each trial yields a signed violation that is
//! positive exactly when the trial fails; the report keeps the count of
//! failures and the worst trial, whose distribution is attached as a witness
//! when it failed.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Serialize, Serializer};

use crate::bounds::{evaluate, lower_bound, upper_bound, TOL_B_REL};
use crate::error::{Error, Result};
use crate::extremal::{
    mixture_members, psi, spec_to_distribution, two_point_hi, two_point_lo, MixtureSpec,
    TwoPointSpec, DEFAULT_QUAD_NODES,
};
use crate::par::{map_indexed, map_reduce, Execution};
use crate::stats::{
    make_distribution, sqrt_moments, variance_envelope, DiscreteDistribution, ExtReal,
};

/// Name and version of the trial generator, recorded next to golden outputs.
pub const GENERATOR: &str = "rand_chacha 0.9 ChaCha8Rng, seed_from_u64(seed), set_stream(suite << 48 | trial)";

/// Equality tolerance for the symmetric two-point case, scaled by `max(1, mean)`.
pub const TOL_EQUALITY: f64 = 1e-10;
/// Tolerance on `Var Y <= (E Y - a)(b - E Y)`, scaled by `M_X`.
pub const TOL_LEMMA_VAR: f64 = 1e-12;
/// Near-equality in the variance lemma, scaled by `M_X`.
pub const TOL_LEMMA_VAR_TIGHT: f64 = 1e-10;
/// Relative tolerance of the grid extremum against the exact bound.
pub const TOL_ATTAIN: f64 = 1e-6;
/// Relative tolerance of the two-point member of the lower class.
pub const TOL_PROP2_TWO_POINT: f64 = 1e-10;
/// Relative tolerance of the discretized mixture against `(1 + eps) V`.
pub const TOL_MIXTURE: f64 = 1e-6;
/// Mixture parameters checked when `F = inf`.
pub const MIXTURE_EPS: [f64; 3] = [0.1, 0.01, 0.001];

const SUITE_RANDOM: u64 = 1;
const SUITE_SYMMETRIC: u64 = 2;
const SUITE_ASYMMETRIC: u64 = 3;
const SUITE_PROP2: u64 = 4;

/// Parameters shared by the random campaigns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CampaignConfig {
    pub trials: usize,
    pub max_atoms: usize,
    pub value_cap: f64,
    pub zero_atom_prob: f64,
    pub seed: u64,
    /// Give every atom the same probability instead of a flat Dirichlet draw.
    pub equal_probs: bool,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            trials: 10_000,
            max_atoms: 8,
            value_cap: 100.0,
            zero_atom_prob: 0.2,
            seed: 0,
            equal_probs: false,
            execution: Execution::default(),
        }
    }
}

impl CampaignConfig {
    pub fn with_trials(trials: usize, seed: u64) -> Self {
        Self { trials, seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InadmissibleParams(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.max_atoms == 0 {
            return bad("max atoms must be at least 1".into());
        }
        if !(self.value_cap.is_finite() && self.value_cap > 0.0) {
            return bad(format!("value cap must be positive, got {}", self.value_cap));
        }
        if !(0.0..=1.0).contains(&self.zero_atom_prob) {
            return bad(format!("zero atom probability must lie in [0, 1], got {}", self.zero_atom_prob));
        }
        Ok(())
    }
}

/// Outcome of one campaign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub trials: usize,
    pub failures: usize,
    /// Largest signed violation over all trials; positive iff some trial failed.
    #[serde(serialize_with = "finite_or_max")]
    pub worst_violation: f64,
    pub witness: Option<DiscreteDistribution>,
    #[serde(rename = "elapsed_ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn finite_or_max<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(if x.is_finite() { *x } else { f64::MAX.copysign(*x) })
}

fn as_millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Equality of everything except the elapsed time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.trials == other.trials
            && self.failures == other.failures
            && self.worst_violation.to_bits() == other.worst_violation.to_bits()
            && self.witness == other.witness
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.failures += other.failures;
        if other.worst_violation > self.worst_violation {
            self.worst_violation = other.worst_violation;
            self.witness = other.witness;
        }
        self.elapsed += other.elapsed;
        self
    }
}

/// Signed result of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Tally {
    failures: usize,
    worst: f64,
    index: usize,
}

impl Tally {
    const EMPTY: Tally = Tally { failures: 0, worst: f64::NEG_INFINITY, index: usize::MAX };

    fn trial(index: usize, violation: f64) -> Tally {
        let v = if violation.is_nan() { f64::INFINITY } else { violation };
        Tally { failures: usize::from(v > 0.0), worst: v, index }
    }

    fn combine(a: Tally, b: Tally) -> Tally {
        let keep_b = b.worst > a.worst || (b.worst == a.worst && b.index < a.index);
        let (worst, index) = if keep_b { (b.worst, b.index) } else { (a.worst, a.index) };
        Tally { failures: a.failures + b.failures, worst, index }
    }
}

/// Runs `trials` independent checks and builds the report; `witness`
/// regenerates the distribution of the worst trial when it failed.
fn campaign(
    exec: Execution,
    trials: usize,
    check: impl Fn(usize) -> f64 + Sync + Send,
    witness: impl Fn(usize) -> Option<DiscreteDistribution>,
) -> VerificationReport {
    let start = Instant::now();
    let t = map_reduce(exec, trials, Tally::EMPTY, |i| Tally::trial(i, check(i)), Tally::combine);
    VerificationReport {
        trials,
        failures: t.failures,
        worst_violation: t.worst,
        witness: if t.failures > 0 { witness(t.index) } else { None },
        elapsed: start.elapsed(),
    }
}

/// A violation value for a failed boolean check whose margin is `margin`
/// (nonpositive when the check failed).
fn failed_by(margin: f64) -> f64 {
    (-margin).max(f64::MIN_POSITIVE)
}

fn trial_rng(seed: u64, suite: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite << 48) | index as u64);
    rng
}

fn flat_simplex(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|e| e / total).collect()
}

fn draw_distribution(cfg: &CampaignConfig, rng: &mut impl Rng, min_atoms: usize) -> DiscreteDistribution {
    let k = rng.random_range(min_atoms.min(cfg.max_atoms).max(1)..=cfg.max_atoms.max(min_atoms));
    let mut values: Vec<f64> = (0..k).map(|_| rng.random::<f64>() * cfg.value_cap).collect();
    if rng.random::<f64>() < cfg.zero_atom_prob {
        let j = rng.random_range(0..k);
        values[j] = 0.0;
    }
    let probs = if cfg.equal_probs {
        vec![1.0 / k as f64; k]
    } else {
        flat_simplex(rng, k)
    };
    make_distribution(values.into_iter().zip(probs))
        .expect("generated atoms are nonnegative with unit mass")
}

/// The random law for trial `index` of the generic campaigns: 1 to
/// `max_atoms` atoms uniform on `[0, value_cap]`, one of them forced to 0 with
/// probability `zero_atom_prob`, weights from a flat Dirichlet law.
pub fn random_distribution(cfg: &CampaignConfig, index: usize) -> DiscreteDistribution {
    draw_distribution(cfg, &mut trial_rng(cfg.seed, SUITE_RANDOM, index), 1)
}

/// Scaled sandwich violation of `d` minus the `1e-9` tolerance, combined with
/// the equality-case consistency check.
fn sandwich_violation(d: &DiscreteDistribution) -> f64 {
    let (s, b) = evaluate(d);
    let scale = s.mean.max(1.0);
    let mut v = b.scaled_violation(s.mean) - TOL_B_REL;
    if b.equality_case {
        let off = (b.gap - b.upper).abs().max((b.gap - b.lower).abs()) / scale;
        v = v.max(off - TOL_EQUALITY);
    }
    v
}

/// Checks `lower <= gap <= upper` on `cfg.trials` random laws.
pub fn falsify_sandwich(cfg: &CampaignConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    Ok(campaign(
        cfg.execution,
        cfg.trials,
        |i| sandwich_violation(&random_distribution(cfg, i)),
        |i| Some(random_distribution(cfg, i)),
    ))
}

/// Symmetric family: one-point laws on every tenth trial, otherwise
/// `sqrt(X)` uniform on two random points.
fn symmetric_law(cfg: &CampaignConfig, index: usize) -> DiscreteDistribution {
    let mut rng = trial_rng(cfg.seed, SUITE_SYMMETRIC, index);
    let cap = cfg.value_cap.sqrt();
    let a = rng.random::<f64>() * cap;
    if index % 10 == 9 {
        return make_distribution([(a * a, 1.0)]).expect("one atom");
    }
    let b = rng.random::<f64>() * cap;
    let zero = rng.random::<f64>() < cfg.zero_atom_prob;
    let lo = if zero { 0.0 } else { a.min(b) };
    make_distribution([(lo * lo, 0.5), (a.max(b).powi(2), 0.5)]).expect("two atoms")
}

fn asymmetric_law(cfg: &CampaignConfig, index: usize) -> DiscreteDistribution {
    let mut rng = trial_rng(cfg.seed, SUITE_ASYMMETRIC, index);
    let wide = CampaignConfig { max_atoms: cfg.max_atoms.max(2), equal_probs: false, ..*cfg };
    draw_distribution(&wide, &mut rng, 2)
}

/// Both bounds are tight exactly for symmetric laws of `sqrt(X)` on at most
/// two points. Runs `cfg.trials` symmetric and `cfg.trials` other laws.
pub fn verify_prop3(cfg: &CampaignConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let symmetric = campaign(
        cfg.execution,
        cfg.trials,
        |i| {
            let d = symmetric_law(cfg, i);
            let (s, b) = evaluate(&d);
            let off = (b.gap - b.upper).abs().max((b.gap - b.lower).abs()) / s.mean.max(1.0);
            let mut v = off - TOL_EQUALITY;
            if !b.equality_case {
                v = v.max(f64::MIN_POSITIVE);
            }
            v
        },
        |i| Some(symmetric_law(cfg, i)),
    );
    let asymmetric = campaign(
        cfg.execution,
        cfg.trials,
        |i| {
            let d = asymmetric_law(cfg, i);
            let (s, b) = evaluate(&d);
            let scale = s.mean.max(1.0);
            let mut v = b.scaled_violation(s.mean) - TOL_B_REL;
            let slack = b.slack() / scale;
            if b.equality_case {
                // an unequal Dirichlet draw landing on weights 1/2 +- 1e-12
                v = v.max(-TOL_EQUALITY);
            } else if slack <= 0.0 {
                v = v.max(failed_by(slack));
            } else {
                v = v.max(-slack);
            }
            v
        },
        |i| Some(asymmetric_law(cfg, i)),
    );
    Ok(symmetric.merge(asymmetric))
}

/// `Var sqrt(X) <= (E sqrt X - sqrt m)(sqrt M - E sqrt X)` on random laws, with
/// near-equality only on supports of at most two points.
pub fn verify_lemma_var(cfg: &CampaignConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    Ok(campaign(
        cfg.execution,
        cfg.trials,
        |i| lemma_var_violation(&random_distribution(cfg, i)),
        |i| Some(random_distribution(cfg, i)),
    ))
}

fn lemma_var_violation(d: &DiscreteDistribution) -> f64 {
    let (var, env) = variance_envelope(d);
    let scale = d.max();
    if scale == 0.0 {
        return -TOL_LEMMA_VAR;
    }
    let excess = (var - env) / scale;
    let mut v = excess - TOL_LEMMA_VAR;
    let tight = -excess <= TOL_LEMMA_VAR_TIGHT;
    if d.len() <= 2 && !tight {
        v = v.max(failed_by(TOL_LEMMA_VAR_TIGHT + excess));
    } else if d.len() > 2 && tight {
        v = v.max(failed_by(-excess - TOL_LEMMA_VAR_TIGHT));
    }
    v
}

/// Which side of the sandwich a check concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Hi,
    Lo,
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hi" => Ok(Side::Hi),
            "lo" => Ok(Side::Lo),
            other => Err(format!("side must be hi or lo, got {other:?}")),
        }
    }
}

/// E_X of the attaining two-point member against `E_{V,F}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPointCheck {
    pub spread_low: f64,
    pub e_vf: f64,
    pub rel_error: f64,
}

/// `E_X` of the discretized `X_eps` against `(1 + eps) V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureRow {
    pub eps: f64,
    pub spread_low: f64,
    pub target: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop2Outcome {
    #[serde(flatten)]
    pub report: VerificationReport,
    pub two_point: Option<TwoPointCheck>,
    pub mixture: Vec<MixtureRow>,
}

/// A constructed member of the class with given `(V, F)` together with the
/// probability mass it puts strictly inside its support.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerClassMember {
    pub distribution: DiscreteDistribution,
    pub interior_mass: f64,
}

/// Draws a law of `X` with `V_X = V`, `F_X = F` and 3 to 5 support points.
///
/// The top point `b` of `sqrt(X)` and its mean `b - sqrt(F - V)` and second
/// moment are those of a two-point member with lower point `u0 > 0`; a new
/// bottom point `a < u0` and interior points are drawn, and the three masses
/// (bottom, top, interior block) are solved from the moment equations.
/// Draws with a negative mass are rejected. Returns `None` after
/// `max_attempts` rejections.
pub fn lower_class_member(
    v: f64,
    f: f64,
    rng: &mut impl Rng,
    max_attempts: usize,
) -> Option<LowerClassMember> {
    let width = f / (f - v).sqrt();
    for _ in 0..max_attempts {
        let u0 = width * (0.1 + 1.9 * rng.random::<f64>());
        let top = u0 + width;
        let mean = top - (f - v).sqrt();
        let second = v + mean * mean;
        let bottom = u0 * rng.random::<f64>();

        let k = rng.random_range(1..=3);
        let ys: Vec<f64> = (0..k).map(|_| bottom + (top - bottom) * rng.random::<f64>()).collect();
        if ys.iter().any(|&y| y <= bottom || y >= top) {
            continue;
        }
        let ws = flat_simplex(rng, k);
        let m1: f64 = ys.iter().zip(&ws).map(|(y, w)| w * y).sum();
        let m2: f64 = ys.iter().zip(&ws).map(|(y, w)| w * y * y).sum();

        let Some([pa, pb, t]) = solve3(
            [[1.0, 1.0, 1.0], [bottom, top, m1], [bottom * bottom, top * top, m2]],
            [1.0, mean, second],
        ) else {
            continue;
        };
        if !(pa > 0.0 && pb > 0.0 && t > 0.0) {
            continue;
        }
        let total = pa + pb + t;
        let atoms = [(bottom * bottom, pa / total), (top * top, pb / total)]
            .into_iter()
            .chain(ys.iter().zip(&ws).map(|(y, w)| (y * y, t * w / total)));
        if let Ok(d) = make_distribution(atoms) {
            return Some(LowerClassMember { distribution: d, interior_mass: t / total });
        }
    }
    None
}

/// Cramer's rule for a 3x3 system.
fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut m = a;
        for row in 0..3 {
            m[row][col] = b[row];
        }
        *slot = det(m) / d;
    }
    Some(out)
}

fn rel_err(x: f64, target: f64) -> f64 {
    (x - target).abs() / target.abs().max(f64::MIN_POSITIVE)
}

fn prop2_member_violation(v: f64, f: f64, e_vf: f64, m: &LowerClassMember) -> f64 {
    let s = sqrt_moments(&m.distribution);
    let excess = s.spread_low - e_vf;
    let mut out = -excess / e_vf.max(1.0) - 1e-9;
    // the member must really sit in the class
    let class_err = rel_err(s.var_sqrt, v).max(rel_err(s.spread_high.to_f64(), f));
    out = out.max(class_err - 1e-9);
    if m.interior_mass > 1e-12 && excess <= 1e-12 {
        out = out.max(failed_by(excess - 1e-12));
    }
    if m.interior_mass >= 0.1 && excess <= 1e-6 * v {
        out = out.max(failed_by(excess - 1e-6 * v));
    }
    out
}

/// `E_{V,F}` is the infimum of `E_X` given `(V_X, F_X) = (V, F)`, attained
/// only by two-point laws. For `F = inf` the mixture family `X_eps` is
/// checked instead: `E_X = (1 + eps) V` decreases towards `V` without reaching it.
pub fn verify_prop2(v: f64, f: ExtReal, cfg: &CampaignConfig) -> Result<Prop2Outcome> {
    cfg.validate()?;
    let target = crate::bounds::e_vf(v, f)?;
    if v <= 0.0 {
        return Err(Error::InadmissiblePair {
            name_v: "V",
            name_w: "F",
            v,
            w: f,
            reason: "the check needs V > 0",
        });
    }
    match f {
        ExtReal::Infinity => verify_prop2_mixture(v),
        ExtReal::Finite(fv) => {
            let start = Instant::now();
            let s = two_point_lo(v, f, 0.0)?;
            let e2 = sqrt_moments(&spec_to_distribution(&s, 0.0)?).spread_low;
            let two = TwoPointCheck { spread_low: e2, e_vf: target, rel_error: rel_err(e2, target) };

            let draw = |i: usize| {
                lower_class_member(v, fv, &mut trial_rng(cfg.seed, SUITE_PROP2, i), 10_000)
            };
            let mut report = campaign(
                cfg.execution,
                cfg.trials,
                |i| match draw(i) {
                    Some(m) => prop2_member_violation(v, fv, target, &m),
                    None => f64::MIN_POSITIVE,
                },
                |i| draw(i).map(|m| m.distribution),
            );
            let two_point_violation = two.rel_error - TOL_PROP2_TWO_POINT;
            if two_point_violation > 0.0 {
                report.failures += 1;
                if two_point_violation > report.worst_violation {
                    report.worst_violation = two_point_violation;
                    report.witness = spec_to_distribution(&s, 0.0).ok();
                }
            }
            report.elapsed = start.elapsed();
            Ok(Prop2Outcome { report, two_point: Some(two), mixture: Vec::new() })
        }
    }
}

fn verify_prop2_mixture(v: f64) -> Result<Prop2Outcome> {
    let start = Instant::now();
    let mut rows = Vec::with_capacity(MIXTURE_EPS.len());
    for eps in MIXTURE_EPS {
        let spec = MixtureSpec::new(v, eps)?;
        let e = sqrt_moments(&spec.distribution(DEFAULT_QUAD_NODES)?).spread_low;
        let target = spec.spread_low();
        rows.push(MixtureRow { eps, spread_low: e, target, rel_error: rel_err(e, target) });
    }
    let mut tally = Tally::EMPTY;
    for (i, row) in rows.iter().enumerate() {
        let mut viol = row.rel_error - TOL_MIXTURE;
        if row.spread_low <= v {
            viol = viol.max(failed_by(row.spread_low - v));
        }
        if i > 0 && row.spread_low >= rows[i - 1].spread_low {
            viol = viol.max(failed_by(rows[i - 1].spread_low - row.spread_low));
        }
        tally = Tally::combine(tally, Tally::trial(i, viol));
    }
    let report = VerificationReport {
        trials: rows.len(),
        failures: tally.failures,
        worst_violation: tally.worst,
        witness: if tally.failures > 0 {
            mixture_members(v, rows[tally.index].eps, DEFAULT_QUAD_NODES).ok()
        } else {
            None
        },
        elapsed: start.elapsed(),
    };
    Ok(Prop2Outcome { report, two_point: None, mixture: rows })
}

/// Where the extremum of `psi` over the grid sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// At `c = -u`, the unshifted law.
    Endpoint,
    /// At the far end of the grid, approaching `c -> inf`.
    Infinity,
    /// `psi` does not vary (`p = q`).
    Constant,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttainmentOutcome {
    #[serde(flatten)]
    pub report: VerificationReport,
    pub side: Side,
    pub spec: TwoPointSpec,
    pub extremum: f64,
    pub target: f64,
    pub arg_c: f64,
    pub regime: Regime,
}

/// `c`-grid used by [`verify_attainment`]: `-u` followed by `grid_size - 1`
/// log-spaced shifts up to `u + 1e9 (v - u)`.
pub fn attainment_grid(s: &TwoPointSpec, grid_size: usize) -> Vec<f64> {
    let w = s.width();
    let lo = (1e-6 * w).ln();
    let hi = (2.0 * s.u + 1e9 * w).ln();
    let n = grid_size - 1;
    std::iter::once(-s.u)
        .chain((0..n).map(|k| -s.u + (lo + (hi - lo) * k as f64 / (n - 1) as f64).exp()))
        .collect()
}

/// Evaluates `psi` over a logarithmic grid for the extremal family of
/// `(V, E)` (`Side::Hi`) or `(V, F)` (`Side::Lo`) and checks that every value
/// lies within the bounds of the shifted law and that the grid extremum
/// matches `max(2V, E)` resp. `min(2V, E_{V,F})`.
pub fn verify_attainment(
    v: f64,
    e_or_f: f64,
    side: Side,
    grid_size: usize,
    exec: Execution,
) -> Result<AttainmentOutcome> {
    if grid_size < 100 {
        return Err(Error::InadmissibleParams(format!("grid size must be at least 100, got {grid_size}")));
    }
    let start = Instant::now();
    let (spec, target) = match side {
        Side::Hi => (two_point_hi(v, e_or_f, 0.0)?, upper_bound(v, e_or_f)?),
        Side::Lo => {
            let f = ExtReal::Finite(e_or_f);
            (two_point_lo(v, f, 0.0)?, lower_bound(v, f)?)
        }
    };
    let grid = attainment_grid(&spec, grid_size);
    let values = map_indexed(exec, grid.len(), |k| {
        let c = grid[k];
        let value = psi(&spec, c).expect("grid starts at -u");
        let d = spec_to_distribution(&spec, c).expect("grid starts at -u");
        let (_, b) = evaluate(&d);
        let tol = TOL_ATTAIN * target.max(f64::MIN_POSITIVE);
        let viol = (b.lower - tol - value).max(value - b.upper - tol) / target;
        (value, viol)
    });

    let pick_better = |a: f64, b: f64| match side {
        Side::Hi => b > a,
        Side::Lo => b < a,
    };
    let mut best = 0;
    for k in 1..values.len() {
        if pick_better(values[best].0, values[k].0) {
            best = k;
        }
    }
    let extremum = values[best].0;
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| (lo.min(x), hi.max(x)));
    let regime = if max - min <= 1e-9 * target {
        Regime::Constant
    } else if best == 0 {
        Regime::Endpoint
    } else if best == values.len() - 1 {
        Regime::Infinity
    } else {
        Regime::Interior
    };

    let mut tally = Tally::EMPTY;
    for (k, &(_, viol)) in values.iter().enumerate() {
        tally = Tally::combine(tally, Tally::trial(k, viol));
    }
    let ext_viol = rel_err(extremum, target) - TOL_ATTAIN;
    tally = Tally::combine(tally, Tally::trial(values.len(), ext_viol));

    let report = VerificationReport {
        trials: values.len(),
        failures: tally.failures,
        worst_violation: tally.worst,
        witness: if tally.failures > 0 {
            let k = tally.index.min(grid.len() - 1);
            spec_to_distribution(&spec, grid[k]).ok()
        } else {
            None
        },
        elapsed: start.elapsed(),
    };
    Ok(AttainmentOutcome { report, side, spec, extremum, target, arg_c: grid[best], regime })
}
