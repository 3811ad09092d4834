//! Convex generators `f` with `f(1) = 0`, their derivatives and the boundary
//! limits the integral engine needs for tails and closed-form bounds.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;

use crate::{Error, Result};

/// Names accepted by [`ConvexFunction::parse`].
pub const VALID_SPECS: &str = "kl, hellinger:alpha=<a>, chi2, js, lecam:lambda=<l>, linear:slope=<b>, \
     skew:base=<f>,lambda=<l>,mu=<m>, depol:base=<f>,p=<p>, star:base=<f>";

#[derive(Clone, Debug, PartialEq)]
pub enum ConvexFunction {
    /// `x ln x`: Umegaki relative entropy.
    Kl,
    /// `(x^α − 1)/(α − 1)`, `α ∈ (0, 1) ∪ (1, ∞)`.
    Hellinger { alpha: f64 },
    /// `x² − 1`.
    Chi2,
    /// `½(1 + x) ln(2/(1 + x)) + ½ x ln x`: Jensen–Shannon.
    Js,
    /// `λ(1 − λ)(x − 1)²/(λx + 1 − λ)`, `λ ∈ (0, 1)`.
    LeCam { lambda: f64 },
    /// `b(x − 1)`; its divergence vanishes identically.
    Linear { slope: f64 },
    /// `F(x) = m[μ f(1/m) + (1 − μ) f(x/m)]`, `m = 1 − λ + λx`.
    Skew { base: Box<ConvexFunction>, lambda: f64, mu: f64 },
    /// `f((1 − p)x + p)`.
    DepolPullback { base: Box<ConvexFunction>, p: f64 },
    /// `x f(1/x)`, which swaps the arguments of the divergence.
    Star { base: Box<ConvexFunction> },
    /// `Σ w_i f_i` with `w_i ≥ 0`.
    Combination { terms: Vec<(f64, ConvexFunction)> },
}

/// `w·v` with `0·∞ = 0`.
fn wmul(w: f64, v: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w * v
    }
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::Domain(format!("{name} = {v} must lie in (0, 1)")));
    }
    Ok(())
}

fn check_closed_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} = {v} must lie in [0, 1]")));
    }
    Ok(())
}

impl ConvexFunction {
    pub fn kl() -> Self {
        ConvexFunction::Kl
    }

    pub fn hellinger(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
            return Err(Error::Domain(format!("Hellinger order {alpha} must be positive, finite and ≠ 1")));
        }
        Ok(ConvexFunction::Hellinger { alpha })
    }

    pub fn chi2() -> Self {
        ConvexFunction::Chi2
    }

    pub fn js() -> Self {
        ConvexFunction::Js
    }

    pub fn lecam(lambda: f64) -> Result<Self> {
        check_open_unit("lambda", lambda)?;
        Ok(ConvexFunction::LeCam { lambda })
    }

    pub fn linear(slope: f64) -> Result<Self> {
        if !slope.is_finite() {
            return Err(Error::Domain("slope must be finite".into()));
        }
        Ok(ConvexFunction::Linear { slope })
    }

    pub fn skew(base: ConvexFunction, lambda: f64, mu: f64) -> Result<Self> {
        check_closed_unit("lambda", lambda)?;
        check_closed_unit("mu", mu)?;
        Ok(ConvexFunction::Skew { base: Box::new(base), lambda, mu })
    }

    pub fn depol_pullback(base: ConvexFunction, p: f64) -> Result<Self> {
        check_closed_unit("p", p)?;
        Ok(ConvexFunction::DepolPullback { base: Box::new(base), p })
    }

    pub fn star(base: ConvexFunction) -> Self {
        ConvexFunction::Star { base: Box::new(base) }
    }

    pub fn combination(terms: Vec<(f64, ConvexFunction)>) -> Result<Self> {
        if terms.is_empty() || terms.iter().any(|(w, _)| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::Domain("combination weights must be finite and non-negative".into()));
        }
        Ok(ConvexFunction::Combination { terms })
    }

    /// `f(x)` for `x > 0`.
    pub fn eval(&self, x: f64) -> f64 {
        use ConvexFunction::*;
        match self {
            Kl => x * x.ln(),
            Hellinger { alpha } => (x.powf(*alpha) - 1.0) / (alpha - 1.0),
            Chi2 => x * x - 1.0,
            Js => 0.5 * (1.0 + x) * (2.0 / (1.0 + x)).ln() + if x > 0.0 { 0.5 * x * x.ln() } else { 0.0 },
            LeCam { lambda } => lambda * (1.0 - lambda) * (x - 1.0).powi(2) / (lambda * x + 1.0 - lambda),
            Linear { slope } => slope * (x - 1.0),
            Skew { base, lambda, mu } => {
                let m = 1.0 - lambda + lambda * x;
                let mut acc = 0.0;
                if *mu > 0.0 {
                    acc += mu * base.eval(1.0 / m);
                }
                if *mu < 1.0 {
                    acc += (1.0 - mu) * base.eval(x / m);
                }
                m * acc
            }
            DepolPullback { base, p } => base.eval((1.0 - p) * x + p),
            Star { base } => x * base.eval(1.0 / x),
            Combination { terms } => terms.iter().map(|(w, f)| wmul(*w, f.eval(x))).sum(),
        }
    }

    /// `f'(x)` for `x > 0`.
    pub fn deriv(&self, x: f64) -> f64 {
        use ConvexFunction::*;
        match self {
            Kl => x.ln() + 1.0,
            Hellinger { alpha } => alpha * x.powf(alpha - 1.0) / (alpha - 1.0),
            Chi2 => 2.0 * x,
            Js => 0.5 * (2.0 * x / (1.0 + x)).ln(),
            LeCam { lambda } => {
                let m = lambda * x + 1.0 - lambda;
                lambda * (1.0 - lambda) * (2.0 * (x - 1.0) * m - lambda * (x - 1.0).powi(2)) / (m * m)
            }
            Linear { slope } => *slope,
            Skew { base, lambda, mu } => {
                let m = 1.0 - lambda + lambda * x;
                let mut acc = 0.0;
                if *mu > 0.0 {
                    acc += lambda * mu * base.eval(1.0 / m) - mu * lambda / m * base.deriv(1.0 / m);
                }
                if *mu < 1.0 {
                    acc += lambda * (1.0 - mu) * base.eval(x / m) + (1.0 - mu) * (1.0 - lambda) / m * base.deriv(x / m);
                }
                acc
            }
            DepolPullback { base, p } => wmul(1.0 - p, base.deriv((1.0 - p) * x + p)),
            Star { base } => base.eval(1.0 / x) - base.deriv(1.0 / x) / x,
            Combination { terms } => terms.iter().map(|(w, f)| wmul(*w, f.deriv(x))).sum(),
        }
    }

    /// `f''(x)` for `x > 0`.
    pub fn second(&self, x: f64) -> f64 {
        use ConvexFunction::*;
        match self {
            Kl => 1.0 / x,
            Hellinger { alpha } => alpha * x.powf(alpha - 2.0),
            Chi2 => 2.0,
            Js => 0.5 / (x * (1.0 + x)),
            LeCam { lambda } => {
                let m = lambda * x + 1.0 - lambda;
                2.0 * lambda * (1.0 - lambda) / (m * m * m)
            }
            Linear { .. } => 0.0,
            Skew { base, lambda, mu } => {
                let m = 1.0 - lambda + lambda * x;
                let mut acc = 0.0;
                if *mu > 0.0 && *lambda > 0.0 {
                    acc += mu * lambda * lambda * base.second(1.0 / m);
                }
                if *mu < 1.0 && *lambda < 1.0 {
                    acc += (1.0 - mu) * (1.0 - lambda).powi(2) * base.second(x / m);
                }
                acc / (m * m * m)
            }
            DepolPullback { base, p } => wmul((1.0 - p) * (1.0 - p), base.second((1.0 - p) * x + p)),
            Star { base } => base.second(1.0 / x) / (x * x * x),
            Combination { terms } => terms.iter().map(|(w, f)| wmul(*w, f.second(x))).sum(),
        }
    }

    /// `f(0⁺)`, possibly `+∞`.
    pub fn at_zero(&self) -> f64 {
        use ConvexFunction::*;
        match self {
            Kl => 0.0,
            Hellinger { alpha } => 1.0 / (1.0 - alpha),
            Chi2 => -1.0,
            Js => 0.5 * core::f64::consts::LN_2,
            LeCam { lambda } => *lambda,
            Linear { slope } => -slope,
            Skew { base, lambda, mu } => {
                if *lambda == 1.0 {
                    wmul(*mu, base.slope_at_infinity())
                } else {
                    let m0 = 1.0 - lambda;
                    m0 * (wmul(*mu, base.eval(1.0 / m0)) + wmul(1.0 - mu, base.at_zero()))
                }
            }
            DepolPullback { base, p } => {
                if *p > 0.0 {
                    base.eval(*p)
                } else {
                    base.at_zero()
                }
            }
            Star { base } => base.slope_at_infinity(),
            Combination { terms } => terms.iter().map(|(w, f)| wmul(*w, f.at_zero())).sum(),
        }
    }

    /// `lim_{x→0⁺} (f(x) − x f'(x))`, possibly `+∞`. Equals
    /// `∫₁^∞ γ⁻³ f''(1/γ) dγ − f'(1)`.
    pub fn conjugate_at_zero(&self) -> f64 {
        use ConvexFunction::*;
        match self {
            Kl => 0.0,
            Hellinger { alpha } => 1.0 / (1.0 - alpha),
            Chi2 => -1.0,
            Js => 0.5 * core::f64::consts::LN_2,
            LeCam { lambda } => *lambda,
            Linear { slope } => -slope,
            Skew { base, lambda, mu } => {
                if *lambda == 1.0 {
                    wmul(*mu, base.slope_at_infinity())
                } else {
                    let m0 = 1.0 - lambda;
                    m0 * (wmul(*mu, base.eval(1.0 / m0)) + wmul(1.0 - mu, base.conjugate_at_zero()))
                }
            }
            DepolPullback { base, p } => {
                if *p > 0.0 {
                    base.eval(*p)
                } else {
                    base.conjugate_at_zero()
                }
            }
            Star { base } => base.slope_at_infinity(),
            Combination { terms } => terms.iter().map(|(w, f)| wmul(*w, f.conjugate_at_zero())).sum(),
        }
    }

    /// `lim_{x→∞} f'(x)`, possibly `+∞`. Equals `∫₁^∞ f''(γ) dγ + f'(1)`.
    pub fn slope_at_infinity(&self) -> f64 {
        use ConvexFunction::*;
        match self {
            Kl | Chi2 => f64::INFINITY,
            Hellinger { alpha } => {
                if *alpha > 1.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            Js => 0.5 * core::f64::consts::LN_2,
            LeCam { lambda } => 1.0 - lambda,
            Linear { slope } => *slope,
            Skew { base, lambda, mu } => {
                if *lambda == 0.0 {
                    wmul(1.0 - mu, base.slope_at_infinity())
                } else {
                    wmul(lambda * mu, base.conjugate_at_zero()) + wmul(lambda * (1.0 - mu), base.eval(1.0 / lambda))
                }
            }
            DepolPullback { base, p } => wmul(1.0 - p, base.slope_at_infinity()),
            Star { base } => base.conjugate_at_zero(),
            Combination { terms } => terms.iter().map(|(w, f)| wmul(*w, f.slope_at_infinity())).sum(),
        }
    }

    /// `∫_Γ^∞ f''(γ) dγ` for `Γ ≥ 1`.
    pub fn upper_tail(&self, gamma: f64) -> f64 {
        let s = self.slope_at_infinity();
        if s.is_infinite() {
            return f64::INFINITY;
        }
        (s - self.deriv(gamma)).max(0.0)
    }

    /// `∫_Γ^∞ γ⁻³ f''(1/γ) dγ = ∫_0^{1/Γ} x f''(x) dx` for `Γ ≥ 1`.
    pub fn lower_tail(&self, gamma: f64) -> f64 {
        let c = self.conjugate_at_zero();
        if c.is_infinite() {
            return f64::INFINITY;
        }
        let x = 1.0 / gamma;
        (c - (self.eval(x) - x * self.deriv(x))).max(0.0)
    }

    /// `ξ(f) = ∫₁^∞ f''(γ) + γ⁻³ f''(1/γ) dγ`, the divergence of orthogonal
    /// states.
    pub fn xi(&self) -> f64 {
        let a = self.slope_at_infinity();
        let b = self.conjugate_at_zero();
        if a.is_infinite() || b.is_infinite() {
            f64::INFINITY
        } else {
            a + b
        }
    }

    pub fn second_at_one(&self) -> f64 {
        self.second(1.0)
    }

    /// Whether `f` is operator convex on `(0, ∞)`.
    pub fn operator_convex(&self) -> bool {
        use ConvexFunction::*;
        match self {
            Kl | Chi2 | Js | LeCam { .. } | Linear { .. } => true,
            Hellinger { alpha } => *alpha <= 2.0,
            Skew { base, .. } | DepolPullback { base, .. } | Star { base } => base.operator_convex(),
            Combination { terms } => terms.iter().all(|(_, f)| f.operator_convex()),
        }
    }

    /// Canonical spec string, parseable by [`ConvexFunction::parse`] for
    /// everything except combinations and nested composites.
    pub fn spec(&self) -> String {
        self.to_string()
    }

    /// Parses `name` or `name:key=value,...`. Composite generators take their
    /// base with `base=<name>`; base parameters are passed as `base_<key>`
    /// (or unprefixed when they do not clash).
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, rest) = match spec.split_once(':') {
            Some((n, r)) => (n.trim(), r.trim()),
            None => (spec, ""),
        };
        let mut params: Vec<(String, String)> = Vec::new();
        if !rest.is_empty() {
            for kv in rest.split(',') {
                let (k, v) = kv.split_once('=').ok_or_else(|| Error::BadSpec(spec.into()))?;
                params.push((k.trim().into(), v.trim().into()));
            }
        }
        let take = |params: &mut Vec<(String, String)>, key: &str| -> Option<String> {
            let i = params.iter().position(|(k, _)| k == key)?;
            Some(params.remove(i).1)
        };
        let num = |params: &mut Vec<(String, String)>, key: &str| -> Result<f64> {
            let v = take(params, key).ok_or_else(|| Error::BadSpec(format!("{spec}: missing `{key}`")))?;
            v.parse::<f64>().map_err(|_| Error::BadSpec(format!("{spec}: `{key}={v}` is not a number")))
        };
        let composite_base = |params: &mut Vec<(String, String)>| -> Result<ConvexFunction> {
            let base = take(params, "base").ok_or_else(|| Error::BadSpec(format!("{spec}: missing `base`")))?;
            let fwd: Vec<String> = params
                .drain(..)
                .map(|(k, v)| format!("{}={}", k.strip_prefix("base_").unwrap_or(&k), v))
                .collect();
            if fwd.is_empty() {
                ConvexFunction::parse(&base)
            } else {
                ConvexFunction::parse(&format!("{base}:{}", fwd.join(",")))
            }
        };
        let f = match name {
            "kl" => ConvexFunction::Kl,
            "chi2" => ConvexFunction::Chi2,
            "js" => ConvexFunction::Js,
            "hellinger" => ConvexFunction::hellinger(num(&mut params, "alpha")?)?,
            "lecam" => ConvexFunction::lecam(num(&mut params, "lambda")?)?,
            "linear" => ConvexFunction::linear(num(&mut params, "slope")?)?,
            "skew" => {
                let lambda = num(&mut params, "lambda")?;
                let mu = num(&mut params, "mu")?;
                ConvexFunction::skew(composite_base(&mut params)?, lambda, mu)?
            }
            "depol" => {
                let p = num(&mut params, "p")?;
                ConvexFunction::depol_pullback(composite_base(&mut params)?, p)?
            }
            "star" => ConvexFunction::star(composite_base(&mut params)?),
            _ => return Err(Error::UnknownFunction { name: name.into(), valid: VALID_SPECS.into() }),
        };
        if let Some((k, _)) = params.first() {
            return Err(Error::BadSpec(format!("{spec}: unexpected parameter `{k}`")));
        }
        Ok(f)
    }
}

fn base_params(base: &ConvexFunction) -> (String, String) {
    let s = base.to_string();
    match s.split_once(':') {
        Some((n, r)) => {
            let prefixed: Vec<String> = r.split(',').map(|kv| format!("base_{kv}")).collect();
            (n.into(), format!(",{}", prefixed.join(",")))
        }
        None => (s, String::new()),
    }
}

impl fmt::Display for ConvexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ConvexFunction::*;
        match self {
            Kl => write!(f, "kl"),
            Hellinger { alpha } => write!(f, "hellinger:alpha={alpha}"),
            Chi2 => write!(f, "chi2"),
            Js => write!(f, "js"),
            LeCam { lambda } => write!(f, "lecam:lambda={lambda}"),
            Linear { slope } => write!(f, "linear:slope={slope}"),
            Skew { base, lambda, mu } => {
                let (n, p) = base_params(base);
                write!(f, "skew:base={n}{p},lambda={lambda},mu={mu}")
            }
            DepolPullback { base, p } => {
                let (n, bp) = base_params(base);
                write!(f, "depol:base={n}{bp},p={p}")
            }
            Star { base } => {
                let (n, p) = base_params(base);
                write!(f, "star:base={n}{p}")
            }
            Combination { terms } => {
                write!(f, "combination(")?;
                for (i, (w, g)) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{w}*[{g}]")?;
                }
                write!(f, ")")
            }
        }
    }
}
