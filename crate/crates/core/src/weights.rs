//! Weight functions, their moderateness and class checks, and the weight
//! chains required by the continuity and Schatten estimates.
//!
//! All checks are empirical: "passes" means no counterexample was found on the
//! sampled box.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fio::PhaseFunction;
use crate::lattice::Grid;

/// A positive weight on `ℝ^k`, built from analytic pieces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    Flat,
    /// `(1+|x|²)^{r/2}`.
    Polynomial { r: f64 },
    /// `e^{r|x|^{1/s}}`.
    Subexp { r: f64, s: f64 },
    /// `inner(M x)`; rows of `matrix` are output coordinates.
    Linear { matrix: Vec<Vec<f64>>, inner: Box<Weight> },
    /// `inner(x[coords])`.
    Select { coords: Vec<usize>, inner: Box<Weight> },
    Product { factors: Vec<Weight> },
    Reciprocal { inner: Box<Weight> },
    /// Splits the argument into consecutive blocks of the given sizes.
    Tensor { blocks: Vec<(usize, Weight)> },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ClassTag {
    Polynomial { r: f64 },
    Subexp { r: f64, s: f64 },
    Custom,
}

impl Default for Weight {
    fn default() -> Self {
        Weight::Flat
    }
}

impl Weight {
    /// Catalog constructor with validation (`r ≥ 0`, `s > 0`).
    pub fn make(kind: &str, params: serde_json::Value) -> Result<Weight> {
        let mut obj = match params {
            serde_json::Value::Object(m) => m,
            serde_json::Value::Null => serde_json::Map::new(),
            _ => return invalid("weight parameters must be a JSON object"),
        };
        obj.insert("kind".into(), kind.into());
        let w: Weight = serde_json::from_value(serde_json::Value::Object(obj))
            .map_err(|e| Error::InvalidParameter(format!("weight {kind}: {e}")))?;
        w.validate()?;
        Ok(w)
    }

    pub fn polynomial(r: f64) -> Weight {
        Weight::Polynomial { r }
    }

    pub fn subexp(r: f64, s: f64) -> Weight {
        Weight::Subexp { r, s }
    }

    pub fn select(coords: Vec<usize>, inner: Weight) -> Weight {
        Weight::Select { coords, inner: Box::new(inner) }
    }

    pub fn linear(matrix: Vec<Vec<f64>>, inner: Weight) -> Weight {
        Weight::Linear { matrix, inner: Box::new(inner) }
    }

    pub fn recip(self) -> Weight {
        Weight::Reciprocal { inner: Box::new(self) }
    }

    pub fn times(self, other: Weight) -> Weight {
        match self {
            Weight::Product { mut factors } => {
                factors.push(other);
                Weight::Product { factors }
            }
            w => Weight::Product { factors: vec![w, other] },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Weight::Flat => Ok(()),
            Weight::Polynomial { r } => {
                if !(r.is_finite() && *r >= 0.0) {
                    return invalid(format!("polynomial weight needs finite r >= 0, got {r}"));
                }
                Ok(())
            }
            Weight::Subexp { r, s } => {
                if !(r.is_finite() && *r >= 0.0) {
                    return invalid(format!("subexp weight needs finite r >= 0, got {r}"));
                }
                if !(*s > 0.0) || s.is_infinite() {
                    return invalid(format!("subexp weight needs s > 0, got {s}"));
                }
                Ok(())
            }
            Weight::Linear { matrix, inner } => {
                if let Some(first) = matrix.first() {
                    if matrix.iter().any(|r| r.len() != first.len()) {
                        return invalid("linear weight matrix rows differ in length");
                    }
                }
                inner.validate()
            }
            Weight::Select { inner, .. } | Weight::Reciprocal { inner } => inner.validate(),
            Weight::Product { factors } => factors.iter().try_for_each(|w| w.validate()),
            Weight::Tensor { blocks } => blocks.iter().try_for_each(|(_, w)| w.validate()),
        }
    }

    pub fn class_tag(&self) -> ClassTag {
        match *self {
            Weight::Flat => ClassTag::Polynomial { r: 0.0 },
            Weight::Polynomial { r } => ClassTag::Polynomial { r },
            Weight::Subexp { r, s } => ClassTag::Subexp { r, s },
            _ => ClassTag::Custom,
        }
    }

    pub fn is_flat(&self) -> bool {
        match self {
            Weight::Flat => true,
            Weight::Polynomial { r } | Weight::Subexp { r, .. } => *r == 0.0,
            Weight::Linear { inner, .. } | Weight::Select { inner, .. } | Weight::Reciprocal { inner } => {
                inner.is_flat()
            }
            Weight::Product { factors } => factors.iter().all(|w| w.is_flat()),
            Weight::Tensor { blocks } => blocks.iter().all(|(_, w)| w.is_flat()),
        }
    }

    /// Minimal argument length, when the weight needs a specific one.
    pub fn required_dim(&self) -> Option<usize> {
        match self {
            Weight::Flat | Weight::Polynomial { .. } | Weight::Subexp { .. } => None,
            Weight::Linear { matrix, .. } => matrix.first().map(|r| r.len()),
            Weight::Select { coords, .. } => coords.iter().max().map(|m| m + 1),
            Weight::Reciprocal { inner } => inner.required_dim(),
            Weight::Product { factors } => factors.iter().filter_map(|w| w.required_dim()).max(),
            Weight::Tensor { blocks } => Some(blocks.iter().map(|b| b.0).sum()),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Weight::Flat => 1.0,
            Weight::Polynomial { r } => {
                if *r == 0.0 {
                    return 1.0;
                }
                let s: f64 = x.iter().map(|v| v * v).sum();
                (1.0 + s).powf(0.5 * r)
            }
            Weight::Subexp { r, s } => {
                let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                (r * n.powf(1.0 / s)).exp()
            }
            Weight::Linear { matrix, inner } => {
                let y: Vec<f64> = matrix
                    .iter()
                    .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
                    .collect();
                inner.eval(&y)
            }
            Weight::Select { coords, inner } => {
                let y: Vec<f64> = coords.iter().map(|&c| x[c]).collect();
                inner.eval(&y)
            }
            Weight::Product { factors } => factors.iter().map(|w| w.eval(x)).product(),
            Weight::Reciprocal { inner } => 1.0 / inner.eval(x),
            Weight::Tensor { blocks } => {
                let mut off = 0;
                let mut acc = 1.0;
                for (k, w) in blocks {
                    acc *= w.eval(&x[off..off + k]);
                    off += k;
                }
                acc
            }
        }
    }

    /// Values at every point of `grid`.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        if let Some(k) = self.required_dim() {
            if k > grid.dim() {
                return Err(Error::GridMismatch(format!(
                    "weight needs {k} coordinates, grid has {}",
                    grid.dim()
                )));
            }
        }
        if self.is_flat() {
            return Ok(vec![1.0; grid.len()]);
        }
        let v = grid.sample(|p| self.eval(p));
        if let Some(bad) = v.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter(format!("weight value {bad} is not positive and finite")));
        }
        Ok(v)
    }

    /// `ω(T x)` for a linear change of variables `T`.
    pub fn compose_linear(&self, t: &DMatrix<f64>) -> Weight {
        if self.is_flat() {
            return Weight::Flat;
        }
        let rows = (0..t.nrows()).map(|i| (0..t.ncols()).map(|j| t[(i, j)]).collect()).collect();
        Weight::linear(rows, self.clone())
    }
}

/// Sample points for pair scans: `xs` and shifts `ys`, restricted to
/// `x + y` inside the box.
#[derive(Clone, Debug)]
pub struct ShiftSet {
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<Vec<f64>>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl ShiftSet {
    /// Lattice points of `grid` thinned to at most `per_axis` per axis; the
    /// same set serves as shifts.
    pub fn from_grid(grid: &Grid, per_axis: usize) -> ShiftSet {
        let axes: Vec<Vec<f64>> = grid
            .axes
            .iter()
            .map(|a| {
                let stride = (a.n / per_axis.max(1)).max(1);
                (0..a.n).step_by(stride).map(|k| a.point(k)).collect()
            })
            .collect();
        let pts = cartesian(&axes);
        let lo = grid.axes.iter().map(|a| a.point(0)).collect();
        let hi = grid.axes.iter().map(|a| a.point(a.n - 1)).collect();
        ShiftSet { xs: pts.clone(), ys: pts, lo, hi }
    }

    /// Symmetric cube `[-half, half]^dim` with `per_axis` points per axis.
    pub fn cube(dim: usize, half: f64, per_axis: usize) -> ShiftSet {
        let axis = crate::numeric::linspace(-half, half, per_axis.max(2));
        let pts = cartesian(&vec![axis; dim]);
        ShiftSet { xs: pts.clone(), ys: pts, lo: vec![-half; dim], hi: vec![half; dim] }
    }

    fn inside(&self, z: &[f64]) -> bool {
        z.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| *v >= a - 1e-12 && *v <= b + 1e-12)
    }
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![vec![]];
    for ax in axes {
        let mut next = Vec::with_capacity(out.len() * ax.len());
        for p in &out {
            for &v in ax {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn pair_max<F>(set: &ShiftSet, f: F) -> f64
where
    F: Fn(&[f64], &[f64], &[f64]) -> f64 + Sync,
{
    set.xs
        .par_iter()
        .map(|x| {
            let mut m = 0.0f64;
            let mut z = vec![0.0; x.len()];
            for y in &set.ys {
                for k in 0..x.len() {
                    z[k] = x[k] + y[k];
                }
                if set.inside(&z) {
                    m = m.max(f(x, y, &z));
                }
            }
            m
        })
        .reduce(|| 0.0, f64::max)
}

/// `max ω(x+y)/(ω(x)v(y))` over the sample. Fails when `v` is not even on the
/// shifts.
pub fn check_moderate(omega: &Weight, v: &Weight, set: &ShiftSet) -> Result<f64> {
    for y in &set.ys {
        let neg: Vec<f64> = y.iter().map(|c| -c).collect();
        let (a, b) = (v.eval(y), v.eval(&neg));
        if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
            return Err(Error::Precondition(format!("v is not even at {y:?}")));
        }
    }
    Ok(pair_max(set, |x, y, z| omega.eval(z) / (omega.eval(x) * v.eval(y))))
}

/// Smallest `r` (to 1e-3) with `ω(x+y) ≤ 10·ω(x)e^{r|y|^{1/s}}` on the sample;
/// `∞` when `r = 64` does not suffice.
pub fn check_class_s(omega: &Weight, s: f64, set: &ShiftSet) -> Result<f64> {
    if !(s > 0.0) {
        return invalid("class check needs s > 0");
    }
    const C: f64 = 10.0;
    let norms: Vec<f64> = set.ys.iter().map(|y| y.iter().map(|v| v * v).sum::<f64>().sqrt().powf(1.0 / s)).collect();
    // log-ratios per (x, y), reduced to the max over x for each y
    let base: Vec<f64> = (0..set.ys.len())
        .into_par_iter()
        .map(|j| {
            let y = &set.ys[j];
            let mut m = f64::NEG_INFINITY;
            let mut z = vec![0.0; y.len()];
            for x in &set.xs {
                for k in 0..y.len() {
                    z[k] = x[k] + y[k];
                }
                if set.inside(&z) {
                    m = m.max((omega.eval(&z) / omega.eval(x)).ln());
                }
            }
            m
        })
        .collect();
    let holds = |r: f64| base.iter().zip(&norms).all(|(b, n)| *b - r * n <= C.ln());
    if holds(0.0) {
        return Ok(0.0);
    }
    if !holds(64.0) {
        return Ok(f64::INFINITY);
    }
    let (mut lo, mut hi) = (0.0, 64.0);
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Box for chain sampling: space-like coordinates in `[-space, space]`,
/// frequency-like in `[-freq, freq]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ChainBox {
    pub space: f64,
    pub freq: f64,
    pub per_axis: usize,
    pub max_points: usize,
    pub seed: u64,
}

impl ChainBox {
    pub fn new(space: f64, freq: f64) -> ChainBox {
        ChainBox { space, freq, per_axis: 7, max_points: 20_000, seed: 7 }
    }

    /// Lattice when small enough, otherwise seeded uniform points.
    fn points(&self, kinds: &[bool]) -> Vec<Vec<f64>> {
        let half = |is_space: bool| if is_space { self.space } else { self.freq };
        let total = (self.per_axis as f64).powi(kinds.len() as i32);
        if total <= self.max_points as f64 {
            let axes: Vec<Vec<f64>> = kinds
                .iter()
                .map(|&k| crate::numeric::linspace(-half(k), half(k), self.per_axis))
                .collect();
            cartesian(&axes)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            (0..self.max_points)
                .map(|_| kinds.iter().map(|&k| rng.random_range(-half(k)..=half(k))).collect())
                .collect()
        }
    }
}

/// Weight systems for the two families of estimates.
#[derive(Clone, Debug)]
pub enum WeightSystem {
    /// `ω₁, ω₂` on `ℝ^{2d}`, `ω₀` on `(x,y,ξ,η)`, `ω` on `(X,ξ,η,z)` with
    /// `X=(x,y,ζ)`, and `v₀` on `(ξ,η,z)`.
    Continuity { omega: Weight, omega0: Weight, omega1: Weight, omega2: Weight, v0: Weight },
    /// `ω` on `(x,ζ,ξ,z)`, `ω₀` on `(x,y,ξ,η)`, `v₁` on `η`, `v₂` on `(ξ,z)`;
    /// with `a` set, the shifted variant of the first condition is used.
    Schatten {
        omega: Weight,
        omega0: Weight,
        omega1: Weight,
        omega2: Weight,
        v1: Weight,
        v2: Weight,
        a: Option<DMatrix<f64>>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainEntry {
    pub name: String,
    pub max_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub variant: String,
    pub entries: Vec<ChainEntry>,
    pub threshold: f64,
    pub violated: bool,
}

impl ChainReport {
    pub fn max_ratio(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.max_ratio))
    }
}

fn max_over<F>(pts: &[Vec<f64>], f: F) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pts.par_iter().map(|p| f(p)).reduce(|| 0.0, f64::max)
}

fn check_dims(ws: &[(&Weight, usize, &str)]) -> Result<()> {
    for (w, k, name) in ws {
        if let Some(req) = w.required_dim() {
            if req > *k {
                return Err(Error::GridMismatch(format!("{name} needs {req} coordinates, has {k}")));
            }
        }
    }
    Ok(())
}

/// Max-ratio estimates for every inequality of the chosen weight chain, with
/// `violated` set when any exceeds `threshold`.
pub fn check_fio_weight_chain(
    system: &WeightSystem,
    phase: &PhaseFunction,
    bx: &ChainBox,
    threshold: f64,
) -> Result<ChainReport> {
    let (d, m) = (phase.d(), phase.m());
    let n = 2 * d + m;
    let mut entries = Vec::new();
    let variant;
    match system {
        WeightSystem::Continuity { omega, omega0, omega1, omega2, v0 } => {
            variant = "continuity".to_string();
            check_dims(&[
                (omega, 2 * n, "ω"),
                (omega0, 4 * d, "ω₀"),
                (omega1, 2 * d, "ω₁"),
                (omega2, 2 * d, "ω₂"),
                (v0, n, "v₀"),
            ])?;
            // x, y, ξ, η
            let kinds: Vec<bool> = [vec![true; 2 * d], vec![false; 2 * d]].concat();
            let pts = bx.points(&kinds);
            let r1 = max_over(&pts, |p| {
                let (x, y, xi, eta) = (&p[..d], &p[d..2 * d], &p[2 * d..3 * d], &p[3 * d..]);
                let neg: Vec<f64> = eta.iter().map(|v| -v).collect();
                omega2.eval(&[x, xi].concat()) / (omega1.eval(&[y, &neg[..]].concat()) * omega0.eval(p))
            });
            entries.push(ChainEntry { name: "omega2/omega1 <= omega0".into(), max_ratio: r1 });
            // X = (x, y, ζ), then ξ, η
            let kinds: Vec<bool> = [vec![true; 2 * d], vec![false; m], vec![false; 2 * d]].concat();
            let pts = bx.points(&kinds);
            let r2 = max_over(&pts, |p| {
                let xx = &p[..n];
                let (xi, eta) = (&p[n..n + d], &p[n + d..]);
                let g = phase.grad(xx);
                let mut arg = xx.to_vec();
                arg.extend(xi.iter().zip(&g[..d]).map(|(a, b)| a - b));
                arg.extend(eta.iter().zip(&g[d..2 * d]).map(|(a, b)| a - b));
                arg.extend(g[2 * d..].iter().map(|v| -v));
                omega0.eval(&[&p[..2 * d], xi, eta].concat()) / omega.eval(&arg)
            });
            entries.push(ChainEntry { name: "omega0 <= omega(X, xi - phi'_x, eta - phi'_y, -phi'_z)".into(), max_ratio: r2 });
            // ω moderate with respect to v₀ in the dual variables
            let kinds: Vec<bool> = [vec![true; 2 * d], vec![false; m], vec![false; 2 * n]].concat();
            let pts = bx.points(&kinds);
            let r3 = max_over(&pts, |p| {
                let xx = &p[..n];
                let (s1, s2) = (&p[n..2 * n], &p[2 * n..]);
                let sum: Vec<f64> = s1.iter().zip(s2).map(|(a, b)| a + b).collect();
                omega.eval(&[xx, &sum[..]].concat()) / (omega.eval(&[xx, s1].concat()) * v0.eval(s2))
            });
            entries.push(ChainEntry { name: "omega moderate w.r.t. v0".into(), max_ratio: r3 });
            entries.push(ChainEntry { name: "sup_t v0(t.)/v0".into(), max_ratio: v0_dilation(v0, n, bx) });
        }
        WeightSystem::Schatten { omega, omega0, omega1, omega2, v1, v2, a } => {
            if m != d {
                return Err(Error::GridMismatch("Schatten weight chain needs m = d".into()));
            }
            check_dims(&[
                (omega, 4 * d, "ω"),
                (omega0, 4 * d, "ω₀"),
                (omega1, 2 * d, "ω₁"),
                (omega2, 2 * d, "ω₂"),
                (v1, d, "v₁"),
                (v2, 2 * d, "v₂"),
            ])?;
            if let Some(a) = a {
                if a.nrows() != d || a.ncols() != d {
                    return Err(Error::GridMismatch(format!("A must be {d}x{d}")));
                }
            }
            variant = if a.is_some() { "schatten_a".into() } else { "schatten".into() };
            // x, y, ζ, ξ
            let kinds: Vec<bool> = [vec![true; 2 * d], vec![false; 2 * d]].concat();
            let pts = bx.points(&kinds);
            let r0 = max_over(&pts, |p| {
                let xx = &p[..3 * d];
                let xi = &p[3 * d..];
                let (x, y, z) = (&xx[..d], &xx[d..2 * d], &xx[2 * d..]);
                let g = phase.grad(xx);
                let rhs_arg = [x, z, xi, &g[2 * d..].iter().map(|v| -v).collect::<Vec<_>>()[..]].concat();
                let lhs_arg = match a {
                    None => {
                        let k1: Vec<f64> = xi.iter().zip(&g[..d]).map(|(u, v)| u + v).collect();
                        [x, y, &k1[..], &g[d..2 * d]].concat()
                    }
                    Some(a) => {
                        let diff: Vec<f64> = x.iter().zip(y).map(|(u, v)| u - v).collect();
                        let ad = matvec(a, &diff);
                        let xs: Vec<f64> = x.iter().zip(&ad).map(|(u, v)| u + v).collect();
                        let ys: Vec<f64> = y.iter().zip(&ad).map(|(u, v)| u + v).collect();
                        let atxi = matvec(&a.transpose(), xi);
                        let k1: Vec<f64> = (0..d).map(|i| xi[i] - atxi[i] + g[i]).collect();
                        let k2: Vec<f64> = (0..d).map(|i| atxi[i] + g[d + i]).collect();
                        [&xs[..], &ys[..], &k1[..], &k2[..]].concat()
                    }
                };
                omega0.eval(&lhs_arg) / omega.eval(&rhs_arg)
            });
            let name = if a.is_some() { "shifted omega0 <= omega (matrix A)" } else { "omega0 <= omega" };
            entries.push(ChainEntry { name: name.into(), max_ratio: r0 });
            let kinds: Vec<bool> = [vec![true; 2 * d], vec![false; 2 * d]].concat();
            let pts = bx.points(&kinds);
            let r1 = max_over(&pts, |p| {
                let (x, y, xi, eta) = (&p[..d], &p[d..2 * d], &p[2 * d..3 * d], &p[3 * d..]);
                let neg: Vec<f64> = eta.iter().map(|v| -v).collect();
                omega2.eval(&[x, xi].concat())
                    / (omega1.eval(&[y, eta].concat()) * omega0.eval(&[x, y, xi, &neg[..]].concat()))
            });
            entries.push(ChainEntry { name: "omega2/omega1 <= omega0".into(), max_ratio: r1 });
            let kinds: Vec<bool> = [vec![true; 2 * d], vec![false; 3 * d]].concat();
            let pts = bx.points(&kinds);
            let r2 = max_over(&pts, |p| {
                let head = &p[..3 * d];
                let (e1, e2) = (&p[3 * d..4 * d], &p[4 * d..]);
                let s: Vec<f64> = e1.iter().zip(e2).map(|(u, v)| u + v).collect();
                omega0.eval(&[head, &s[..]].concat()) / (omega0.eval(&[head, e1].concat()) * v1.eval(e2))
            });
            entries.push(ChainEntry { name: "omega0 moderate w.r.t. v1".into(), max_ratio: r2 });
            let kinds: Vec<bool> = [vec![true; d], vec![false; d], vec![false; 4 * d]].concat();
            let pts = bx.points(&kinds);
            let r3 = max_over(&pts, |p| {
                let head = &p[..2 * d];
                let (s1, s2) = (&p[2 * d..4 * d], &p[4 * d..]);
                let s: Vec<f64> = s1.iter().zip(s2).map(|(u, v)| u + v).collect();
                omega.eval(&[head, &s[..]].concat()) / (omega.eval(&[head, s1].concat()) * v2.eval(s2))
            });
            entries.push(ChainEntry { name: "omega moderate w.r.t. v2".into(), max_ratio: r3 });
        }
    }
    let violated = entries.iter().any(|e| !(e.max_ratio <= threshold));
    Ok(ChainReport { variant, entries, threshold, violated })
}

/// `sup ω₂(x,ξ)/(ω₁(y,−η)·ω(x,y,ξ,η))` over the box, the condition for a
/// kernel weight `ω` on `(x,y,ξ,η)`, with `x, y ∈ ℝ^d`.
pub fn kernel_weight_ratio(omega: &Weight, omega1: &Weight, omega2: &Weight, d: usize, bx: &ChainBox) -> Result<f64> {
    check_dims(&[(omega, 4 * d, "ω"), (omega1, 2 * d, "ω₁"), (omega2, 2 * d, "ω₂")])?;
    let kinds: Vec<bool> = [vec![true; 2 * d], vec![false; 2 * d]].concat();
    let pts = bx.points(&kinds);
    Ok(max_over(&pts, |p| {
        let (x, y, xi, eta) = (&p[..d], &p[d..2 * d], &p[2 * d..3 * d], &p[3 * d..]);
        let neg: Vec<f64> = eta.iter().map(|v| -v).collect();
        omega2.eval(&[x, xi].concat()) / (omega1.eval(&[y, &neg[..]].concat()) * omega.eval(p))
    }))
}

fn matvec(a: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum()).collect()
}

/// `max_{t∈{0,0.1,…,1}} v₀(t·p)/v₀(p)` with `t·p` snapped to the nearest
/// sample-lattice point.
fn v0_dilation(v0: &Weight, n: usize, bx: &ChainBox) -> f64 {
    let kinds: Vec<bool> = [vec![true; 0], vec![false; n]].concat();
    let per = bx.per_axis.max(2);
    let axis = crate::numeric::linspace(-bx.freq, bx.freq, per);
    let step = axis[1] - axis[0];
    let snap = |v: f64| {
        let k = ((v + bx.freq) / step).round().clamp(0.0, (per - 1) as f64);
        axis[k as usize]
    };
    let pts = ChainBox { max_points: usize::MAX, ..*bx }.points(&kinds);
    let pts = if pts.len() > bx.max_points { pts[..bx.max_points].to_vec() } else { pts };
    max_over(&pts, |p| {
        let base = v0.eval(p);
        (0..=10)
            .map(|k| {
                let t = k as f64 / 10.0;
                let q: Vec<f64> = p.iter().map(|v| snap(t * v)).collect();
                v0.eval(&q) / base
            })
            .fold(0.0, f64::max)
    })
}
