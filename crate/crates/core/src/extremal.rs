//! Extremal laws for the AM-GM bounds.
//!
//! A two-point law of `Y = sqrt(X)` with mass `p` at `u` and `q = 1 - p` at
//! `v > u` has `V_X = pq(v-u)^2`, `E_X = q(v-u)^2` and `F_X = p(v-u)^2`,
//! none of which change when both points are shifted by the same `c`. The
//! gap of the shifted law, `psi(c)`, is monotone in `c` and runs from
//! `q(v-u)^2` at `c = -u` to `2pq(v-u)^2` as `c -> inf`; those two numbers are
//! exactly the bounds.

use serde::{Deserialize, Serialize};

use crate::bounds::{admissible_hi, admissible_lo};
use crate::error::{Error, Result};
use crate::quadrature::gauss_laguerre;
use crate::stats::{make_distribution, DiscreteDistribution, ExtReal};

/// `psi` switches to its large-shift series once `c > C_SWITCH * (v - u)`.
pub const C_SWITCH: f64 = 1e6;
/// Default number of quadrature nodes for the exponential part of `U_eps`.
pub const DEFAULT_QUAD_NODES: usize = 64;

/// Two-point law of `sqrt(X)`: mass `p` at `u`, mass `1 - p` at `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPointSpec {
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl TwoPointSpec {
    pub fn new(u: f64, v: f64, p: f64) -> Result<Self> {
        if !(u.is_finite() && u >= 0.0 && v.is_finite() && v > u && p > 0.0 && p < 1.0) {
            return Err(Error::InadmissibleParams(format!(
                "two-point spec needs 0 <= u < v and 0 < p < 1, got u={u}, v={v}, p={p}"
            )));
        }
        Ok(Self { u, v, p })
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    pub fn width(&self) -> f64 {
        self.v - self.u
    }

    /// `V = pq(v-u)^2`, the same for every shift.
    pub fn var_sqrt(&self) -> f64 {
        self.p * self.q() * self.width().powi(2)
    }

    /// `E = q(v-u)^2`.
    pub fn spread_low(&self) -> f64 {
        self.q() * self.width().powi(2)
    }

    /// `F = p(v-u)^2`.
    pub fn spread_high(&self) -> f64 {
        self.p * self.width().powi(2)
    }

    fn check_shift(&self, c: f64) -> Result<()> {
        if c.is_nan() || c < -self.u {
            return Err(Error::ShiftOutOfRange { c, min: -self.u });
        }
        Ok(())
    }
}

/// The two-point law whose square has the given `(V, E)`, lower point `u`.
pub fn two_point_hi(v: f64, e: f64, u: f64) -> Result<TwoPointSpec> {
    if !(admissible_hi(v, e) && v > 0.0) {
        return Err(Error::InadmissiblePair {
            name_v: "V",
            name_w: "E",
            v,
            w: ExtReal::Finite(e),
            reason: "a two-point law needs E > V > 0",
        });
    }
    TwoPointSpec::new(u, u + e / (e - v).sqrt(), v / e)
}

/// The two-point law whose square has the given `(V, F)` and `E = E_{V,F}`.
pub fn two_point_lo(v: f64, f: ExtReal, u: f64) -> Result<TwoPointSpec> {
    let finite = match f {
        ExtReal::Finite(f) if admissible_lo(v, ExtReal::Finite(f)) && v > 0.0 => f,
        _ => {
            return Err(Error::InadmissiblePair {
                name_v: "V",
                name_w: "F",
                v,
                w: f,
                reason: if f.is_infinite() {
                    "no two-point law attains the infimum when F = inf"
                } else {
                    "a two-point law needs inf > F > V > 0"
                },
            })
        }
    };
    TwoPointSpec::new(u, u + finite / (finite - v).sqrt(), 1.0 - v / finite)
}

/// Law of `(Y + c)^2`: atoms `(u+c)^2` with mass `p`, `(v+c)^2` with mass `q`.
pub fn spec_to_distribution(s: &TwoPointSpec, c: f64) -> Result<DiscreteDistribution> {
    s.check_shift(c)?;
    make_distribution([((s.u + c).powi(2), s.p), ((s.v + c).powi(2), s.q())])
}

/// Gap of the shifted squared law,
/// `psi(c) = p(u+c)^2 + q(v+c)^2 - (u+c)^{2p} (v+c)^{2q}`.
pub fn psi(s: &TwoPointSpec, c: f64) -> Result<f64> {
    s.check_shift(c)?;
    if c > C_SWITCH * s.width() {
        Ok(psi_asymptotic(s, c))
    } else {
        Ok(psi_direct(s, c))
    }
}

/// Closed-form branch of [`psi`].
///
/// With `a = u + c` and `r = (v-u)/a` the power term is
/// `a^2 (1+r)^{2q} = a^2 exp(2q ln(1+r))`, so
/// `psi = a^2 [2qr + qr^2 - expm1(2q log1p(r))]`, which avoids subtracting
/// two `O(a^2)` numbers.
pub fn psi_direct(s: &TwoPointSpec, c: f64) -> f64 {
    let a = s.u + c;
    let d = s.width();
    let q = s.q();
    if a <= 0.0 {
        return q * d * d;
    }
    let r = d / a;
    let bracket = 2.0 * q * r + q * r * r - (2.0 * q * r.ln_1p()).exp_m1();
    a * a * bracket
}

/// Large-shift branch of [`psi`]: the binomial series of `(1+r)^{2q}` gives
/// `psi = (v-u)^2 [2pq - C(2q,3) r - C(2q,4) r^2 - ...]` with `r = (v-u)/(u+c)`.
pub fn psi_asymptotic(s: &TwoPointSpec, c: f64) -> f64 {
    let d = s.width();
    let r = d / (s.u + c);
    let g = 2.0 * s.q();
    let b3 = g * (g - 1.0) * (g - 2.0) / 6.0;
    let b4 = b3 * (g - 3.0) / 4.0;
    d * d * (2.0 * s.p * s.q() - b3 * r - b4 * r * r)
}

/// `psi(inf-) = 2pq(v-u)^2 = 2V`.
pub fn psi_limit(s: &TwoPointSpec) -> f64 {
    2.0 * s.p * s.q() * s.width().powi(2)
}

/// `sup_c psi(c)` over the `two_point_hi` family, taken from the endpoint
/// and the limit since `psi` is monotone.
pub fn psi_extremum_hi(v: f64, e: f64) -> Result<f64> {
    let s = two_point_hi(v, e, 0.0)?;
    Ok(psi(&s, -s.u)?.max(psi_limit(&s)))
}

/// `inf_c psi(c)` over the `two_point_lo` family.
pub fn psi_extremum_lo(v: f64, f: f64) -> Result<f64> {
    let s = two_point_lo(v, ExtReal::Finite(f), 0.0)?;
    Ok(psi(&s, -s.u)?.min(psi_limit(&s)))
}

/// `X_eps = (V/eps) U_eps^2`, where `U_eps` puts mass `1 - eps` at 0, mass
/// `eps - eps^2` at 1 and spreads `eps^2` as a standard exponential.
///
/// `E U = Var U = eps`, so `V_X = V` and `E_X = E X = (1 + eps) V`, while
/// `F_X = inf` for the exact law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixtureSpec {
    pub v: f64,
    pub eps: f64,
    pub scale: f64,
}

impl MixtureSpec {
    pub fn new(v: f64, eps: f64) -> Result<Self> {
        if !(v.is_finite() && v > 0.0 && eps > 0.0 && eps < 1.0) {
            return Err(Error::InadmissibleParams(format!(
                "mixture needs V > 0 and 0 < eps < 1, got V={v}, eps={eps}"
            )));
        }
        Ok(Self { v, eps, scale: v / eps })
    }

    pub fn mean_u(&self) -> f64 {
        self.eps
    }

    pub fn var_u(&self) -> f64 {
        self.eps
    }

    /// `E_{X_eps} = (1 + eps) V`.
    pub fn spread_low(&self) -> f64 {
        (1.0 + self.eps) * self.v
    }

    /// Discretizes the exponential component with an `n_quad`-point
    /// Gauss-Laguerre rule; the first two moments of `U` stay exact.
    pub fn distribution(&self, n_quad: usize) -> Result<DiscreteDistribution> {
        if n_quad < 16 {
            return Err(Error::InadmissibleParams(format!(
                "mixture needs at least 16 quadrature nodes, got {n_quad}"
            )));
        }
        let eps = self.eps;
        let (nodes, weights) = gauss_laguerre(n_quad);
        let wsum: f64 = weights.iter().sum();
        let tail = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| (self.scale * x * x, eps * eps * w / wsum));
        make_distribution([(0.0, 1.0 - eps), (self.scale, eps - eps * eps)].into_iter().chain(tail))
    }
}

/// The discretized `X_eps` for `(V, eps)` with `n_quad` nodes.
pub fn mixture_members(v: f64, eps: f64, n_quad: usize) -> Result<DiscreteDistribution> {
    MixtureSpec::new(v, eps)?.distribution(n_quad)
}
