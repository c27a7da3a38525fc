//! Exact two-sided bounds on the AM-GM gap in terms of `V`, `E` and `F`:
//!
//! ```text
//! (2V) ∧ E_{V,F}  <=  E X - exp E ln X  <=  (2V) ∨ E
//! ```
//!
//! with `E_{V,F} = FV / (F - V)`, read as `V` at `F = inf` and `0` at `F = V`.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::stats::{sqrt_moments, DiscreteDistribution, ExtReal, MomentSummary};

/// Relative half-width of the sandwich check: `TOL_B = 1e-9 * max(1, mean)`.
pub const TOL_B_REL: f64 = 1e-9;
/// A two-atom law counts as symmetric when both weights are this close to 1/2.
pub const SYMMETRY_TOL: f64 = 1e-12;

const ADMISSIBLE_RULE: &str = "require both zero, or the second strictly above the first above 0";

/// `(V, E)` is realized by some nonnegative law iff `E = V = 0` or `E > V > 0`.
pub fn admissible_hi(v: f64, e: f64) -> bool {
    (v == 0.0 && e == 0.0) || (v > 0.0 && e > v && e.is_finite())
}

/// Same dichotomy for `(V, F)`; `F = inf` is admissible with any `V > 0`.
pub fn admissible_lo(v: f64, f: ExtReal) -> bool {
    match f {
        ExtReal::Infinity => v > 0.0 && v.is_finite(),
        ExtReal::Finite(f) => (v == 0.0 && f == 0.0) || (v > 0.0 && f > v && f.is_finite()),
    }
}

fn inadmissible(name_w: &'static str, v: f64, w: ExtReal) -> Error {
    Error::InadmissiblePair { name_v: "V", name_w, v, w, reason: ADMISSIBLE_RULE }
}

/// `E_{V,F}`, the infimum of `E_X` over laws with the given `V_X` and `F_X`.
pub fn e_vf(v: f64, f: ExtReal) -> Result<f64> {
    if !admissible_lo(v, f) {
        return Err(inadmissible("F", v, f));
    }
    Ok(match f {
        ExtReal::Infinity => v,
        ExtReal::Finite(f) if f == v => 0.0,
        ExtReal::Finite(f) => f * v / (f - v),
    })
}

/// `sup D_X` over laws with the given `(V, E)`: `max(2V, E)`.
pub fn upper_bound(v: f64, e: f64) -> Result<f64> {
    if !admissible_hi(v, e) {
        return Err(inadmissible("E", v, ExtReal::Finite(e)));
    }
    Ok((2.0 * v).max(e))
}

/// `inf D_X` over laws with the given `(V, F)`: `min(2V, E_{V,F})`.
pub fn lower_bound(v: f64, f: ExtReal) -> Result<f64> {
    Ok((2.0 * v).min(e_vf(v, f)?))
}

/// Both bounds for one distribution together with its gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    pub upper: f64,
    pub lower: f64,
    #[serde(serialize_with = "finite_or_inf")]
    pub e_vf: f64,
    pub gap: f64,
    pub admissible_hi: bool,
    pub admissible_lo: bool,
    pub equality_case: bool,
}

fn finite_or_inf<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str("inf")
    }
}

impl BoundResult {
    /// Signed distance outside `[lower, upper]`, scaled by `max(1, mean)`;
    /// nonpositive when the gap is inside the sandwich.
    pub fn scaled_violation(&self, mean: f64) -> f64 {
        (self.lower - self.gap).max(self.gap - self.upper) / mean.max(1.0)
    }

    /// Largest one-sided slack `max(upper - gap, gap - lower)`.
    pub fn slack(&self) -> f64 {
        (self.upper - self.gap).max(self.gap - self.lower)
    }
}

/// Evaluates both bounds for `d` without asserting the sandwich.
///
/// `E - V` and `F - V` are taken from the identities `(E sqrt X - sqrt m)^2`
/// and `(sqrt M - E sqrt X)^2`, which stay positive for multi-atom laws
/// where the separately rounded `E`, `F` and `V` might not.
pub fn evaluate(d: &DiscreteDistribution) -> (MomentSummary, BoundResult) {
    let s = sqrt_moments(d);
    let v = s.var_sqrt;
    let e = s.spread_low;
    let f = s.spread_high;
    let mean_sqrt = d.expect(f64::sqrt);
    let top_gap = (d.max().sqrt() - mean_sqrt).max(0.0);

    let e_vf = if d.len() == 1 {
        0.0
    } else if top_gap > 0.0 {
        f.to_f64() * v / (top_gap * top_gap)
    } else {
        f64::INFINITY
    };
    let bounds = BoundResult {
        upper: (2.0 * v).max(e),
        lower: (2.0 * v).min(e_vf),
        e_vf,
        gap: s.gap,
        admissible_hi: admissible_hi(v, e),
        admissible_lo: admissible_lo(v, f),
        equality_case: is_equality_case(d),
    };
    (s, bounds)
}

/// Computes the bounds for `d` and checks `lower <= gap <= upper` within
/// `1e-9 * max(1, mean)`. A violation indicates a numerical defect.
pub fn check_bounds(d: &DiscreteDistribution) -> Result<BoundResult> {
    let (s, b) = evaluate(d);
    let tol = TOL_B_REL * s.mean.max(1.0);
    if b.gap < b.lower - tol || b.gap > b.upper + tol {
        return Err(Error::SandwichViolation {
            lower: b.lower,
            gap: b.gap,
            upper: b.upper,
            summary: Box::new(s),
        });
    }
    Ok(b)
}

/// True iff `sqrt(X)` is symmetric on at most two points: one atom, or two
/// atoms of weight 1/2 each.
pub fn is_equality_case(d: &DiscreteDistribution) -> bool {
    match d.atoms() {
        [_] => true,
        [a, b] => (a.p - 0.5).abs() <= SYMMETRY_TOL && (b.p - 0.5).abs() <= SYMMETRY_TOL,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{make_distribution, uniform_from_values};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const INF: ExtReal = ExtReal::Infinity;
    fn fin(x: f64) -> ExtReal {
        ExtReal::Finite(x)
    }

    #[test]
    fn e_vf_examples() {
        assert_eq!(e_vf(1.0, fin(2.0)), Ok(2.0));
        assert_eq!(e_vf(1.0, INF), Ok(1.0));
        assert_eq!(e_vf(0.0, fin(0.0)), Ok(0.0));
        assert!(e_vf(2.0, fin(1.0)).is_err());
        assert!(e_vf(1.0, fin(1.0)).is_err());
        assert!(e_vf(0.0, INF).is_err());
    }

    #[test]
    fn upper_examples() {
        assert_eq!(upper_bound(1.0, 4.0), Ok(4.0));
        assert_eq!(upper_bound(1.0, 1.5), Ok(2.0));
        assert_eq!(upper_bound(0.0, 0.0), Ok(0.0));
        assert!(matches!(upper_bound(1.0, 1.0), Err(Error::InadmissiblePair { .. })));
    }

    #[test]
    fn lower_examples() {
        assert_eq!(lower_bound(1.0, fin(2.0)), Ok(2.0));
        assert_eq!(lower_bound(1.0, INF), Ok(1.0));
        // e_vf(1, 1.25) = 1.25 / 0.25 = 5
        assert_eq!(lower_bound(1.0, fin(1.25)), Ok(2.0));
        assert!(lower_bound(0.0, fin(3.0)).is_err());
    }

    #[test]
    fn admissibility_examples() {
        assert!(admissible_hi(0.0, 0.0));
        assert!(admissible_hi(1.0, 4.0));
        assert!(!admissible_hi(1.0, 1.0));
        assert!(!admissible_hi(0.0, 1.0));
        assert!(!admissible_hi(-1.0, 1.0));
        assert!(!admissible_hi(f64::NAN, 1.0));
        assert!(admissible_lo(1.0, INF));
        assert!(!admissible_lo(0.0, fin(1.0)));
        assert!(!admissible_lo(2.0, fin(2.0)));
        assert!(admissible_lo(0.0, fin(0.0)));
    }

    #[test]
    fn check_bounds_examples() {
        let b = check_bounds(&uniform_from_values(&[1.0, 9.0]).unwrap()).unwrap();
        assert_relative_eq!(b.upper, 2.0, max_relative = 1e-14);
        assert_relative_eq!(b.lower, 2.0, max_relative = 1e-14);
        assert_relative_eq!(b.gap, 2.0, max_relative = 1e-14);
        assert!(b.equality_case);

        let d = make_distribution([(0.0, 0.25), (16.0 / 3.0, 0.75)]).unwrap();
        let b = check_bounds(&d).unwrap();
        assert_relative_eq!(b.upper, 4.0, max_relative = 1e-14);
        assert_relative_eq!(b.gap, 4.0, max_relative = 1e-14);
        assert_relative_eq!(b.e_vf, 4.0, max_relative = 1e-12);
        assert_relative_eq!(b.lower, 2.0, max_relative = 1e-14);
        assert!(!b.equality_case);

        let b = check_bounds(&make_distribution([(3.3, 1.0)]).unwrap()).unwrap();
        assert_eq!((b.upper, b.lower, b.gap), (0.0, 0.0, 0.0));
        assert!(b.admissible_hi && b.admissible_lo);
    }

    #[test]
    fn equality_case_examples() {
        assert!(is_equality_case(&uniform_from_values(&[1.0, 4.0]).unwrap()));
        assert!(!is_equality_case(&make_distribution([(1.0, 0.25), (9.0, 0.75)]).unwrap()));
        assert!(is_equality_case(&make_distribution([(7.0, 1.0)]).unwrap()));
        assert!(!is_equality_case(&uniform_from_values(&[1.0, 2.0, 3.0]).unwrap()));
    }

    #[test]
    fn json_shape() {
        let b = check_bounds(&uniform_from_values(&[1.0, 9.0]).unwrap()).unwrap();
        let v = serde_json::to_value(b).unwrap();
        for key in ["upper", "lower", "e_vf", "gap", "admissible_hi", "admissible_lo", "equality_case"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn lower_range_limits() {
        // F -> V+ drives E_{V,F} to infinity and the bound to 2V; F = inf gives V.
        let v = 1.5;
        assert_eq!(lower_bound(v, fin(v * (1.0 + 1e-9))).unwrap(), 2.0 * v);
        assert_eq!(lower_bound(v, INF).unwrap(), v);
    }

    proptest! {
        #[test]
        fn upper_monotone(v in 1e-3f64..10.0, dv in 0.0f64..5.0, r in 1.0001f64..10.0, dr in 0.0f64..5.0) {
            let e = r * (v + dv);
            let a = upper_bound(v, e).unwrap();
            prop_assert!(upper_bound(v + dv, e).unwrap() >= a);
            prop_assert!(upper_bound(v, e * (1.0 + dr)).unwrap() >= a);
        }

        #[test]
        fn lower_monotone(v in 1e-3f64..10.0, dv in 0.0f64..1.0, r in 2.0001f64..10.0, dr in 0.0f64..5.0) {
            let f = r * (v + dv);
            let a = lower_bound(v, fin(f)).unwrap();
            prop_assert!(lower_bound(v + dv, fin(f)).unwrap() >= a);
            prop_assert!(lower_bound(v, fin(f * (1.0 + dr))).unwrap() <= a);
            prop_assert!(lower_bound(v, INF).unwrap() <= a);
        }

        #[test]
        fn lower_within_v_and_2v(v in 1e-6f64..1e3, r in 1.000001f64..1e6) {
            let lb = lower_bound(v, fin(v * r)).unwrap();
            prop_assert!(lb >= v * (1.0 - 1e-12) && lb <= 2.0 * v);
        }

        #[test]
        fn scale_covariance(
            atoms in prop::collection::vec((0.0f64..100.0, 0.01f64..1.0), 1..8),
            s in 0.01f64..100.0,
        ) {
            let total: f64 = atoms.iter().map(|a| a.1).sum();
            let d = make_distribution(atoms.iter().map(|&(x, p)| (x, p / total))).unwrap();
            let (a, _) = evaluate(&d);
            let (b, _) = evaluate(&d.scaled(s).unwrap());
            let close = |x: f64, y: f64| (x - y).abs() <= 1e-10 * x.abs().max(y.abs()).max(1e-300) + 1e-12 * s * a.mean.max(1.0);
            prop_assert!(close(b.mean, s * a.mean));
            prop_assert!(close(b.gap, s * a.gap));
            prop_assert!(close(b.var_sqrt, s * a.var_sqrt));
            prop_assert!(close(b.spread_low, s * a.spread_low));
            prop_assert!(close(b.spread_high.to_f64(), s * a.spread_high.to_f64()));
            prop_assert!(close(b.min, s * a.min));
            prop_assert!(close(b.max, s * a.max));
        }
    }
}
