//! Convex generators `Φ` of Φ-entropies.

use alloc::format;
use alloc::string::String;

use crate::error::{Error, Result};
use crate::math::{abs, exp, ln, pow};

/// A convex `Φ: [0, ∞) → ℝ` with `Φ(0) = Φ(1) = 0`, decreasing on `(0, t_o)`
/// and increasing on `(t_o, ∞)`.
pub trait Phi: Send + Sync {
    /// `Φ(t)`; must return 0 at `t = 0`.
    fn value(&self, t: f64) -> f64;
    fn d1(&self, t: f64) -> f64;
    fn d2(&self, t: f64) -> f64;
    /// The unique zero of `Φ'` in `(0, 1)`.
    fn t_o(&self) -> f64;
    fn name(&self) -> String;

    /// Whether `∫_1^∞ t^(−β) Φ''(t) dt < ∞`. `None` when unknown; user
    /// generators may override this with an asserted value.
    fn beta_condition(&self, _beta: f64) -> Option<bool> {
        None
    }

    /// Closed form of `∫_a^b (c0 + c1·t) Φ''(t) dt` when one is available.
    fn weighted_d2_integral(&self, _a: f64, _b: f64, _c0: f64, _c1: f64) -> Option<f64> {
        None
    }
}

/// The generators shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinPhi {
    /// `t ln t`, the Boltzmann–Shannon generator.
    Standard,
    /// `t^p − t` for `p > 1`.
    Power(f64),
}

impl BuiltinPhi {
    /// Parses `standard`, `power(p)` or `power:p`.
    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim();
        if name == "standard" {
            return Ok(BuiltinPhi::Standard);
        }
        let arg = name
            .strip_prefix("power(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| name.strip_prefix("power:"));
        match arg {
            Some(p) => {
                let p: f64 = p.trim().parse().map_err(|_| Error::UnknownPhi(name.into()))?;
                Self::power(p)
            }
            None => Err(Error::UnknownPhi(name.into())),
        }
    }

    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::BadExponent(p));
        }
        Ok(BuiltinPhi::Power(p))
    }
}

/// Looks up a builtin generator by name.
pub fn builtin_phi(name: &str) -> Result<BuiltinPhi> {
    BuiltinPhi::parse(name)
}

impl Phi for BuiltinPhi {
    fn value(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        match *self {
            BuiltinPhi::Standard => t * ln(t),
            BuiltinPhi::Power(p) => pow(t, p) - t,
        }
    }

    fn d1(&self, t: f64) -> f64 {
        match *self {
            BuiltinPhi::Standard => 1.0 + ln(t),
            BuiltinPhi::Power(p) => p * pow(t, p - 1.0) - 1.0,
        }
    }

    fn d2(&self, t: f64) -> f64 {
        match *self {
            BuiltinPhi::Standard => 1.0 / t,
            BuiltinPhi::Power(p) => p * (p - 1.0) * pow(t, p - 2.0),
        }
    }

    fn t_o(&self) -> f64 {
        match *self {
            BuiltinPhi::Standard => exp(-1.0),
            BuiltinPhi::Power(p) => pow(p, -1.0 / (p - 1.0)),
        }
    }

    fn name(&self) -> String {
        match *self {
            BuiltinPhi::Standard => "standard".into(),
            BuiltinPhi::Power(p) => format!("power({p})"),
        }
    }

    fn beta_condition(&self, beta: f64) -> Option<bool> {
        // Φ'' = 1/t, resp. p(p−1)t^(p−2): integrable against t^(−β) iff
        // β > 0, resp. β > p − 1.
        Some(match *self {
            BuiltinPhi::Standard => beta > 0.0,
            BuiltinPhi::Power(p) => beta > p - 1.0,
        })
    }

    fn weighted_d2_integral(&self, a: f64, b: f64, c0: f64, c1: f64) -> Option<f64> {
        match *self {
            BuiltinPhi::Standard => Some(c0 * ln(b / a) + c1 * (b - a)),
            BuiltinPhi::Power(_) => None,
        }
    }
}

/// Number of log-spaced grid points used by [`validate_phi`].
pub const VALIDATION_GRID: usize = 1000;

/// Sampled check of the generator axioms on `[1e-6, 1e3]`.
///
/// This is a semi-decision: a generator that passes may still violate
/// convexity or the sign pattern between grid points.
pub fn validate_phi(phi: &dyn Phi) -> Result<()> {
    let bad = |what: &str| Err(Error::UnknownPhi(format!("{}: {what}", phi.name())));
    let t_o = phi.t_o();
    if !(t_o > 0.0 && t_o < 1.0) {
        return bad("t_o must lie in (0, 1)");
    }
    if phi.value(0.0) != 0.0 || abs(phi.value(1.0)) > 1e-12 {
        return bad("needs Phi(0) = Phi(1) = 0");
    }
    if abs(phi.d1(t_o)) > 1e-9 {
        return bad("Phi' must vanish at t_o");
    }
    let (lo, hi) = (ln(1e-6), ln(1e3));
    for i in 0..VALIDATION_GRID {
        let t = exp(lo + (hi - lo) * i as f64 / (VALIDATION_GRID - 1) as f64);
        let d2 = phi.d2(t);
        if d2.is_nan() || d2 < -1e-12 {
            return bad("Phi'' is negative on the sample grid");
        }
        if abs(t - t_o) <= 1e-9 * t_o {
            continue;
        }
        let d1 = phi.d1(t);
        if (t < t_o && d1 >= 0.0) || (t > t_o && d1 <= 0.0) {
            return bad("Phi' has the wrong sign around t_o");
        }
    }
    let mut last = f64::INFINITY;
    for t in [1e-4, 1e-6, 1e-8] {
        let m = abs(t * phi.d1(t));
        if m.is_nan() || m >= last {
            return bad("t Phi'(t) does not decrease to 0");
        }
        last = m;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec::Vec;

    fn builtins() -> [BuiltinPhi; 4] {
        [
            BuiltinPhi::Standard,
            BuiltinPhi::Power(2.0),
            BuiltinPhi::Power(3.0),
            BuiltinPhi::Power(1.5),
        ]
    }

    #[test]
    fn parse_names() {
        assert_eq!(builtin_phi("standard").unwrap(), BuiltinPhi::Standard);
        assert_eq!(builtin_phi("power(2)").unwrap(), BuiltinPhi::Power(2.0));
        assert_eq!(builtin_phi("power:2.5").unwrap(), BuiltinPhi::Power(2.5));
        assert_eq!(builtin_phi("power(1)"), Err(Error::BadExponent(1.0)));
        assert_eq!(builtin_phi("power(0.5)"), Err(Error::BadExponent(0.5)));
        assert!(matches!(builtin_phi("renyi"), Err(Error::UnknownPhi(_))));
        assert!(matches!(builtin_phi("power(x)"), Err(Error::UnknownPhi(_))));
    }

    #[test]
    fn standard_values() {
        let phi = BuiltinPhi::Standard;
        assert_eq!(phi.value(1.0), 0.0);
        assert_eq!(phi.value(0.0), 0.0);
        assert!(abs(phi.t_o() - exp(-1.0)) < 1e-16);
        assert!(abs(phi.d1(exp(-1.0))) < 1e-15);
    }

    #[test]
    fn power_two_values() {
        let phi = BuiltinPhi::Power(2.0);
        assert!(abs(phi.t_o() - 0.5) < 1e-15);
        assert!(abs(phi.value(3.0) - 6.0) < 1e-15);
        assert!(abs(phi.d1(0.5)) < 1e-15);
    }

    #[test]
    fn builtins_validate() {
        for phi in builtins() {
            validate_phi(&phi).unwrap();
        }
    }

    #[test]
    fn finite_differences_match_derivatives() {
        let h = 1e-4;
        for phi in builtins() {
            let grid: Vec<f64> = (0..40).map(|i| exp(-3.0 + 0.15 * i as f64)).collect();
            for t in grid {
                let fd1 = (phi.value(t + h) - phi.value(t - h)) / (2.0 * h);
                let fd2 = (phi.d1(t + h) - phi.d1(t - h)) / (2.0 * h);
                // C·h² with C bounded by the third derivative on the grid
                let c = 50.0 * (1.0 + 1.0 / (t * t * t) + t * t);
                assert!(abs(phi.d1(t) - fd1) <= c * h * h, "{} d1 at {t}", phi.name());
                assert!(abs(phi.d2(t) - fd2) <= c * h * h, "{} d2 at {t}", phi.name());
            }
        }
    }

    #[test]
    fn beta_flags() {
        assert_eq!(BuiltinPhi::Standard.beta_condition(0.01), Some(true));
        assert_eq!(BuiltinPhi::Power(2.0).beta_condition(1.0), Some(false));
        assert_eq!(BuiltinPhi::Power(2.0).beta_condition(1.5), Some(true));
    }

    struct Concave;
    impl Phi for Concave {
        fn value(&self, t: f64) -> f64 {
            t - t * t
        }
        fn d1(&self, t: f64) -> f64 {
            1.0 - 2.0 * t
        }
        fn d2(&self, _t: f64) -> f64 {
            -2.0
        }
        fn t_o(&self) -> f64 {
            0.5
        }
        fn name(&self) -> String {
            "concave".into()
        }
    }

    #[test]
    fn rejects_concave_generator() {
        assert!(validate_phi(&Concave).is_err());
    }
}
