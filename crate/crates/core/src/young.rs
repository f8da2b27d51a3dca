//! Young functions: catalog, evaluation, numerical conjugation, the Δ2
//! condition and dilation indices near the origin.
//!
//! Values live in `[0, ∞]`; `f64::INFINITY` is a first-class value.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::numeric::{golden_max, logspace, ls_slope};

/// Serde helper for exponents in `[1, ∞]`: numbers, or the string `"inf"`.
pub mod ext_real {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => match s.to_ascii_lowercase().as_str() {
                "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
                other => Err(de::Error::custom(format!("not an exponent: {other}"))),
            },
        }
    }
}

/// Catalog tags, as they appear in experiment configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum YoungSpec {
    /// `t^p`; `p = ∞` is the jump function (0 on `[0,1]`, ∞ beyond).
    Power {
        #[serde(with = "ext_real")]
        p: f64,
    },
    /// `c·t^p`.
    ScaledPower { c: f64, p: f64 },
    /// `t^{p2}/p2` on `[0,1]`, `t^{p1}/p1 + 1/p2 − 1/p1` beyond.
    LpSum {
        #[serde(with = "ext_real")]
        p1: f64,
        #[serde(with = "ext_real")]
        p2: f64,
    },
    /// `tan t` below `π/2`, ∞ from there on.
    Tan,
    /// `−t/ln t` on `(0,1)`, ∞ on `[1,∞)`.
    NegLog,
    /// `t·ln(1+t)`.
    Xlog1p,
    /// `cosh t − 1`.
    CoshMinusOne,
    /// `−t² ln t` near the origin, extended convexly.
    Entropy,
    /// 0 on `[0,a]`, ∞ beyond.
    Threshold { a: f64 },
}

/// Point where the convex extension of the entropy function starts. The
/// function `−t² ln t` is convex exactly on `[0, e^{-3/2}]`.
pub fn entropy_knot() -> f64 {
    (-1.5f64).exp()
}

#[derive(Clone, Debug)]
enum Inner {
    Catalog(YoungSpec),
    Conjugate(Arc<ConjugateTable>),
}

/// A Young function. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Young {
    inner: Inner,
}

impl fmt::Display for Young {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner {
            Inner::Catalog(s) => write!(f, "{}", serde_json::to_string(s).unwrap_or_default()),
            Inner::Conjugate(t) => write!(f, "conjugate({})", t.base),
        }
    }
}

fn check_exponent(p: f64, name: &str) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return invalid(format!("{name} must lie in [1, ∞], got {p}"));
    }
    Ok(())
}

impl Young {
    /// Builds a catalog function after validating its parameters.
    pub fn from_spec(spec: &YoungSpec) -> Result<Young> {
        match spec {
            YoungSpec::Power { p } => check_exponent(*p, "p")?,
            YoungSpec::ScaledPower { c, p } => {
                check_exponent(*p, "p")?;
                if p.is_infinite() || !(*c > 0.0) || c.is_infinite() {
                    return invalid("scaled_power needs c > 0 and finite p");
                }
            }
            YoungSpec::LpSum { p1, p2 } => {
                check_exponent(*p1, "p1")?;
                check_exponent(*p2, "p2")?;
            }
            YoungSpec::Threshold { a } => {
                if !(*a > 0.0) || a.is_infinite() {
                    return invalid("threshold needs 0 < a < ∞");
                }
            }
            _ => {}
        }
        Ok(Young { inner: Inner::Catalog(spec.clone()) })
    }

    /// Catalog lookup by tag with a JSON parameter object, e.g.
    /// `make_catalog("power", json!({"p": 2}))`.
    pub fn make_catalog(kind: &str, params: serde_json::Value) -> Result<Young> {
        let mut obj = match params {
            serde_json::Value::Object(m) => m,
            serde_json::Value::Null => serde_json::Map::new(),
            _ => return invalid("catalog parameters must be a JSON object"),
        };
        obj.insert("kind".into(), serde_json::Value::String(kind.into()));
        let spec: YoungSpec = serde_json::from_value(serde_json::Value::Object(obj))
            .map_err(|e| Error::InvalidParameter(format!("young function {kind}: {e}")))?;
        Young::from_spec(&spec)
    }

    pub fn power(p: f64) -> Young {
        Young::from_spec(&YoungSpec::Power { p }).expect("p >= 1")
    }

    /// `Φ_[∞]`.
    pub fn sup() -> Young {
        Young::power(f64::INFINITY)
    }

    pub fn entropy() -> Young {
        Young { inner: Inner::Catalog(YoungSpec::Entropy) }
    }

    pub fn spec(&self) -> Option<&YoungSpec> {
        match &self.inner {
            Inner::Catalog(s) => Some(s),
            Inner::Conjugate(_) => None,
        }
    }

    /// Catalog tag, or `"custom"` for derived functions.
    pub fn kind(&self) -> &'static str {
        match &self.inner {
            Inner::Catalog(s) => match s {
                YoungSpec::Power { .. } => "power",
                YoungSpec::ScaledPower { .. } => "scaled_power",
                YoungSpec::LpSum { .. } => "lp_sum",
                YoungSpec::Tan => "tan",
                YoungSpec::NegLog => "neg_log",
                YoungSpec::Xlog1p => "xlog1p",
                YoungSpec::CoshMinusOne => "cosh_minus_one",
                YoungSpec::Entropy => "entropy",
                YoungSpec::Threshold { .. } => "threshold",
            },
            Inner::Conjugate(_) => "custom",
        }
    }

    /// JSON description used in report echoes.
    pub fn describe(&self) -> serde_json::Value {
        match &self.inner {
            Inner::Catalog(s) => serde_json::to_value(s).unwrap_or(serde_json::Value::Null),
            Inner::Conjugate(t) => serde_json::json!({"kind": "conjugate", "of": t.base.describe()}),
        }
    }

    /// Threshold of a jump function (0 up to `a`, ∞ beyond), if this is one.
    pub fn jump_threshold(&self) -> Option<f64> {
        match self.spec()? {
            YoungSpec::Power { p } if p.is_infinite() => Some(1.0),
            YoungSpec::Threshold { a } => Some(*a),
            YoungSpec::LpSum { p1, p2 } if p1.is_infinite() && p2.is_infinite() => Some(1.0),
            _ => None,
        }
    }

    /// Exponent when the function is exactly `t^p`.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.spec()? {
            YoungSpec::Power { p } => Some(*p),
            _ => None,
        }
    }

    /// Smallest `s` beyond which the function is `+∞`, if any.
    pub fn domain_end(&self) -> Option<f64> {
        match &self.inner {
            Inner::Catalog(s) => match s {
                YoungSpec::Power { p } if p.is_infinite() => Some(1.0),
                YoungSpec::Threshold { a } => Some(*a),
                YoungSpec::LpSum { p1, .. } if p1.is_infinite() => Some(1.0),
                YoungSpec::Tan => Some(FRAC_PI_2),
                YoungSpec::NegLog => Some(1.0),
                _ => None,
            },
            Inner::Conjugate(_) => None,
        }
    }

    /// Right end of the region where the function is pinned by definition
    /// (only the entropy function has an arbitrary extension beyond it).
    pub fn pinned_region(&self) -> Option<f64> {
        match self.spec()? {
            YoungSpec::Entropy => Some(entropy_knot()),
            _ => None,
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self.spec() {
            Some(YoungSpec::Power { .. }) | Some(YoungSpec::LpSum { .. }) => vec![1.0],
            Some(YoungSpec::Threshold { a }) => vec![*a],
            Some(YoungSpec::Tan) => vec![FRAC_PI_2],
            Some(YoungSpec::NegLog) => vec![1.0],
            Some(YoungSpec::Entropy) => vec![entropy_knot()],
            _ => vec![],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t.is_nan() {
            return f64::NAN;
        }
        if t == f64::INFINITY {
            return f64::INFINITY;
        }
        let t = t.max(0.0);
        match &self.inner {
            Inner::Catalog(s) => eval_catalog(s, t),
            Inner::Conjugate(c) => c.eval(t),
        }
    }

    /// Numerical Legendre transform on the default sample (log-spaced on
    /// `[1e-8, 1e4]`, 4096 points, plus 0 and the catalog breakpoints).
    pub fn conjugate(&self) -> Young {
        self.conjugate_with(&ConjugateGrid::default())
    }

    pub fn conjugate_with(&self, grid: &ConjugateGrid) -> Young {
        Young { inner: Inner::Conjugate(Arc::new(ConjugateTable::build(self.clone(), grid))) }
    }

    /// Checks `Φ(0)=0`, monotonicity, midpoint convexity (relative slack
    /// 1e-12) and growth at the largest sample point beyond
    /// `growth_threshold`.
    pub fn check_young(&self, samples: &[f64], growth_threshold: f64) -> Result<()> {
        let z = self.eval(0.0);
        if z != 0.0 {
            return Err(Error::Precondition(format!("Φ(0) = {z}")));
        }
        let mut ts: Vec<f64> = samples.iter().copied().filter(|t| *t >= 0.0).collect();
        ts.sort_by(|a, b| a.total_cmp(b));
        let vals: Vec<f64> = ts.iter().map(|&t| self.eval(t)).collect();
        for i in 1..ts.len() {
            if vals[i] < vals[i - 1] {
                return Err(Error::Precondition(format!(
                    "not non-decreasing at t = {} ({} < {})",
                    ts[i], vals[i], vals[i - 1]
                )));
            }
        }
        for i in 0..ts.len() {
            for j in (i + 1..ts.len()).step_by(((ts.len() - i) / 64).max(1)) {
                let (a, b) = (vals[i], vals[j]);
                if a.is_infinite() || b.is_infinite() {
                    continue;
                }
                let m = self.eval(0.5 * (ts[i] + ts[j]));
                let rhs = 0.5 * (a + b);
                if m > rhs + 1e-12 * rhs.abs().max(1e-300) {
                    return Err(Error::Precondition(format!(
                        "midpoint convexity fails on [{}, {}]",
                        ts[i], ts[j]
                    )));
                }
            }
        }
        if let Some(&t_last) = ts.iter().rev().find(|&&t| t >= growth_threshold) {
            let v = self.eval(t_last);
            if v < growth_threshold {
                return Err(Error::Precondition(format!(
                    "Φ({t_last}) = {v} does not indicate growth to ∞"
                )));
            }
        }
        Ok(())
    }

    /// Δ2 classification over a logarithmic sample of `(0, t_max]`.
    pub fn check_delta2(&self, t_max: f64) -> Delta2 {
        check_delta2(self, t_max)
    }

    /// Lower and upper dilation indices near the origin.
    pub fn dilation_indices(&self) -> Result<(f64, f64)> {
        dilation_indices(self)
    }
}

fn powi_or_powf(t: f64, p: f64) -> f64 {
    if p == 1.0 {
        t
    } else if p == 2.0 {
        t * t
    } else {
        t.powf(p)
    }
}

fn eval_catalog(s: &YoungSpec, t: f64) -> f64 {
    match *s {
        YoungSpec::Power { p } => {
            if p.is_infinite() {
                if t <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                powi_or_powf(t, p)
            }
        }
        YoungSpec::ScaledPower { c, p } => c * powi_or_powf(t, p),
        YoungSpec::LpSum { p1, p2 } => {
            let frac = |t: f64, p: f64| {
                if p.is_infinite() {
                    if t <= 1.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    powi_or_powf(t, p) / p
                }
            };
            if t <= 1.0 {
                frac(t, p2)
            } else {
                let inv = |p: f64| if p.is_infinite() { 0.0 } else { 1.0 / p };
                frac(t, p1) + inv(p2) - inv(p1)
            }
        }
        YoungSpec::Tan => {
            if t < FRAC_PI_2 {
                t.tan()
            } else {
                f64::INFINITY
            }
        }
        YoungSpec::NegLog => {
            if t == 0.0 {
                0.0
            } else if t < 1.0 {
                -t / t.ln()
            } else {
                f64::INFINITY
            }
        }
        YoungSpec::Xlog1p => t * t.ln_1p(),
        YoungSpec::CoshMinusOne => {
            let s = (0.5 * t).sinh();
            2.0 * s * s
        }
        YoungSpec::Entropy => {
            let t0 = entropy_knot();
            if t == 0.0 {
                0.0
            } else if t <= t0 {
                -t * t * t.ln()
            } else {
                let u = t - t0;
                1.5 * t0 * t0 + 2.0 * t0 * u + 0.5 * u * u
            }
        }
        YoungSpec::Threshold { a } => {
            if t <= a {
                0.0
            } else {
                f64::INFINITY
            }
        }
    }
}

/// Sample specification for numerical conjugation.
#[derive(Clone, Debug)]
pub struct ConjugateGrid {
    pub s_min: f64,
    pub s_max: f64,
    pub points: usize,
}

impl Default for ConjugateGrid {
    fn default() -> Self {
        ConjugateGrid { s_min: 1e-8, s_max: 1e4, points: 4096 }
    }
}

/// Lower convex hull of `(s, Φ(s))` samples plus the base function for local
/// refinement of the supremum.
#[derive(Debug)]
struct ConjugateTable {
    base: Young,
    s: Vec<f64>,
    phi: Vec<f64>,
    slopes: Vec<f64>,
    /// First sample where the base is infinite; the supremum never reaches it.
    s_bound: Option<f64>,
}

impl ConjugateTable {
    fn build(base: Young, grid: &ConjugateGrid) -> ConjugateTable {
        let mut ss = vec![0.0];
        ss.extend(logspace(grid.s_min, grid.s_max, grid.points));
        for b in base.breakpoints() {
            ss.push(b);
            ss.push(b * (1.0 - 1e-9));
            ss.push(b * (1.0 + 1e-9));
        }
        if let Some(e) = base.domain_end() {
            ss.push(e);
        }
        ss.sort_by(|a, b| a.total_cmp(b));
        ss.dedup();
        let mut pts = Vec::with_capacity(ss.len());
        let mut s_bound = None;
        for &s in &ss {
            let v = base.eval(s);
            if v.is_finite() {
                pts.push((s, v));
            } else if s_bound.is_none() {
                s_bound = Some(s);
                break;
            }
        }
        // Andrew's monotone chain, lower hull, collinear points dropped.
        let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for p in pts {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
                if cross <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let s: Vec<f64> = hull.iter().map(|p| p.0).collect();
        let phi: Vec<f64> = hull.iter().map(|p| p.1).collect();
        let slopes = (1..s.len()).map(|i| (phi[i] - phi[i - 1]) / (s[i] - s[i - 1])).collect();
        ConjugateTable { base, s, phi, slopes, s_bound }
    }

    fn eval(&self, t: f64) -> f64 {
        let k = self.s.len();
        let i = self.slopes.partition_point(|&sl| sl < t);
        let grid_val = self.s[i] * t - self.phi[i];
        let obj = |s: f64| s * t - self.base.eval(s);
        let lo = if i > 0 { self.s[i - 1] } else { self.s[0] };
        let refined = if i + 1 < k {
            golden_max(obj, lo, self.s[i + 1], 200).1
        } else if let Some(b) = self.s_bound {
            golden_max(obj, lo, b, 200).1
        } else {
            // Past the last sample: probe outward for unboundedness.
            let mut s = self.s[k - 1];
            let mut best = grid_val;
            let mut prev = s;
            let mut grew = true;
            for _ in 0..64 {
                let s2 = s * 2.0;
                let v = obj(s2);
                if !(v > best) {
                    grew = false;
                    break;
                }
                best = v;
                prev = s;
                s = s2;
            }
            if grew {
                return f64::INFINITY;
            }
            golden_max(obj, prev, s * 2.0, 200).1.max(best)
        };
        grid_val.max(refined).max(0.0)
    }
}

/// Result of the empirical Δ2 scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Delta2 {
    Global { c: f64 },
    Local { r: f64, c: f64 },
    None,
}

fn doubling_ratio(phi: &Young, t: f64) -> f64 {
    let a = phi.eval(t);
    let b = phi.eval(2.0 * t);
    if b.is_infinite() {
        return f64::INFINITY;
    }
    if a == 0.0 {
        return if b == 0.0 { 1.0 } else { f64::INFINITY };
    }
    b / a
}

fn check_delta2(phi: &Young, t_max: f64) -> Delta2 {
    let ts = logspace(t_max * 1e-10, t_max, 2001);
    if phi.eval(ts[0]) == 0.0 {
        return Delta2::None;
    }
    let ratios: Vec<f64> = ts.iter().map(|&t| doubling_ratio(phi, t)).collect();
    let fail = ratios.iter().position(|r| !r.is_finite());
    match fail {
        Some(0) => Delta2::None,
        Some(k) => {
            let c = ratios[..k].iter().fold(0.0f64, |m, &r| m.max(r));
            Delta2::Local { r: ts[k - 1], c }
        }
        None => {
            if let Some(t0) = phi.pinned_region() {
                let r = t_max.min(0.5 * t0);
                let c = ts
                    .iter()
                    .zip(&ratios)
                    .filter(|(t, _)| **t <= r)
                    .fold(0.0f64, |m, (_, &q)| m.max(q));
                return Delta2::Local { r, c };
            }
            let c_prefix = ratios.iter().fold(0.0f64, |m, &r| m.max(r));
            let tail: Vec<f64> = (1..=40).map(|j| doubling_ratio(phi, t_max * 2f64.powi(j))).collect();
            let mid = tail[19];
            let last = tail[39];
            if tail.iter().all(|r| r.is_finite()) && last <= mid * (1.0 + 1e-6) {
                let c = tail.iter().fold(c_prefix, |m, &r| m.max(r));
                Delta2::Global { c }
            } else {
                Delta2::Local { r: t_max, c: c_prefix }
            }
        }
    }
}

fn dilation_indices(phi: &Young) -> Result<(f64, f64)> {
    let mut t0: f64 = 0.1;
    if let Some(e) = phi.domain_end() {
        t0 = t0.min(0.25 * e);
    }
    if let Some(p) = phi.pinned_region() {
        t0 = t0.min(p);
    }
    if !(phi.eval(t0) > 0.0) || !phi.eval(t0).is_finite() {
        return Err(Error::Precondition(
            "Φ vanishes near the origin; dilation indices are undefined".into(),
        ));
    }
    let ts = logspace(t0 * 1e-6, t0, 241);
    let lams = logspace(1e-3, 1e-1, 21);
    let mut ln_sup = Vec::with_capacity(lams.len());
    let mut ln_inf = Vec::with_capacity(lams.len());
    for &lam in &lams {
        let mut hi = 0.0f64;
        let mut lo = f64::INFINITY;
        for &t in &ts {
            let r = phi.eval(lam * t) / phi.eval(t);
            hi = hi.max(r);
            lo = lo.min(r);
        }
        if !(lo > 0.0) {
            return Err(Error::Precondition(
                "Φ vanishes on part of the sample; dilation indices are undefined".into(),
            ));
        }
        ln_sup.push(hi.ln());
        ln_inf.push(lo.ln());
    }
    let x: Vec<f64> = lams.iter().map(|l| l.ln()).collect();
    let a = ls_slope(&x, &ln_sup);
    let b = ls_slope(&x, &ln_inf);
    Ok((a.min(b), a.max(b)))
}

/// `sup Φa/Φb` over a logarithmic sample of `(0, t_max]`; finite values
/// certify `Φa ≲ Φb` near the origin.
pub fn compare_near_origin(phi_a: &Young, phi_b: &Young, t_max: f64) -> f64 {
    let ratio = |t: f64| {
        let (a, b) = (phi_a.eval(t), phi_b.eval(t));
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a / b
        }
    };
    let sup = logspace(t_max * 1e-8, t_max, 801).into_iter().map(ratio).fold(0.0, f64::max);
    // a ratio still climbing at the bottom of the sample has no finite sup
    let (low, mid) = (ratio(t_max * 1e-8), ratio(t_max * 1e-4));
    if low >= 0.999 * sup && low > 1.01 * mid {
        return f64::INFINITY;
    }
    sup
}

/// Catalog functions that are finite and continuous on their domain and
/// closed convex, used for biconjugation sweeps.
pub fn finite_catalog() -> Vec<Young> {
    let specs = [
        YoungSpec::Power { p: 1.5 },
        YoungSpec::Power { p: 2.0 },
        YoungSpec::Power { p: 4.0 },
        YoungSpec::ScaledPower { c: 0.5, p: 2.0 },
        YoungSpec::LpSum { p1: 1.5, p2: 2.0 },
        YoungSpec::LpSum { p1: 3.0, p2: 2.0 },
        YoungSpec::Tan,
        YoungSpec::NegLog,
        YoungSpec::Xlog1p,
        YoungSpec::CoshMinusOne,
        YoungSpec::Entropy,
    ];
    specs.iter().map(|s| Young::from_spec(s).expect("valid catalog")).collect()
}

/// `Φ_[p]^*(t) = (p−1)p^{−p'}t^{p'}` for `1 < p < ∞`.
pub fn power_conjugate_exact(p: f64, t: f64) -> f64 {
    let q = p / (p - 1.0);
    (p - 1.0) * p.powf(-q) * t.powf(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_values() {
        assert_eq!(Young::power(2.0).eval(3.0), 9.0);
        assert_eq!(Young::sup().eval(0.5), 0.0);
        assert_eq!(Young::sup().eval(2.0), f64::INFINITY);
        let e = Young::entropy().eval(0.1);
        assert!((e - 0.023025850929940458).abs() < 1e-15);
    }

    #[test]
    fn make_catalog_parses_tags() {
        let y = Young::make_catalog("power", serde_json::json!({"p": 2})).unwrap();
        assert_eq!(y.eval(3.0), 9.0);
        let y = Young::make_catalog("lp_sum", serde_json::json!({"p1": 1, "p2": "inf"})).unwrap();
        assert_eq!(y.eval(0.5), 0.0);
        assert!(Young::make_catalog("power", serde_json::json!({"p": 0.5})).is_err());
        assert!(Young::make_catalog("nope", serde_json::Value::Null).is_err());
    }

    #[test]
    fn entropy_extension_is_c1() {
        let y = Young::entropy();
        let t0 = entropy_knot();
        let h = 1e-7;
        let left = (y.eval(t0) - y.eval(t0 - h)) / h;
        let right = (y.eval(t0 + h) - y.eval(t0)) / h;
        assert!((left - right).abs() < 1e-5);
    }

    #[test]
    fn catalog_passes_young_checks() {
        let ts = logspace(1e-6, 50.0, 400);
        for y in finite_catalog() {
            y.check_young(&ts, 10.0).unwrap_or_else(|e| panic!("{y}: {e}"));
        }
        Young::sup().check_young(&ts, 10.0).unwrap();
    }

    #[test]
    fn conjugate_of_power() {
        let c = Young::power(3.0).conjugate();
        for &t in &[0.1, 0.5, 1.0, 2.0, 7.0] {
            let exact = power_conjugate_exact(3.0, t);
            assert!((c.eval(t) - exact).abs() <= 1e-9 * exact.max(1.0), "t={t}");
        }
    }

    #[test]
    fn conjugate_of_linear_is_jump() {
        let c = Young::power(1.0).conjugate();
        assert_eq!(c.eval(0.5), 0.0);
        assert_eq!(c.eval(1.5), f64::INFINITY);
    }

    #[test]
    fn delta2_classes() {
        assert_eq!(Young::power(2.0).check_delta2(10.0), Delta2::Global { c: 4.0 });
        assert_eq!(Young::sup().check_delta2(10.0), Delta2::None);
        match Young::from_spec(&YoungSpec::CoshMinusOne).unwrap().check_delta2(5.0) {
            Delta2::Local { r, .. } => assert_eq!(r, 5.0),
            other => panic!("{other:?}"),
        }
        match Young::from_spec(&YoungSpec::Tan).unwrap().check_delta2(2.0) {
            Delta2::Local { r, .. } => assert!(r < FRAC_PI_2 / 2.0 && r > 0.7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dilation_of_power_and_sum() {
        let (q, p) = Young::power(3.0).dilation_indices().unwrap();
        assert!((q - 3.0).abs() < 0.05 && (p - 3.0).abs() < 0.05);
        let y = Young::from_spec(&YoungSpec::LpSum { p1: 1.0, p2: 2.0 }).unwrap();
        let (q, p) = y.dilation_indices().unwrap();
        assert!((q - 2.0).abs() < 0.1 && (p - 2.0).abs() < 0.1);
        assert!(Young::sup().dilation_indices().is_err());
    }

    #[test]
    fn exponent_serde_roundtrip() {
        let s = YoungSpec::LpSum { p1: 2.0, p2: f64::INFINITY };
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"kind":"lp_sum","p1":2.0,"p2":"inf"}"#);
        let back: YoungSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
