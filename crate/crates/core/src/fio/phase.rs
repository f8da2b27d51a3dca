use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Phase catalog entries as they appear in configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseSpec {
    /// `⟨x−y, ζ⟩`.
    Kpg,
    /// `φ ≡ 0`.
    Zero,
    /// `½⟨QX, X⟩` with `X = (x, y, ζ)`.
    Quadratic { q: Vec<Vec<f64>> },
    /// `⟨x−y, ζ⟩ + μ·exp(−1/(1−|X|²/R²))` inside `|X| < R`.
    Perturbed { mu: f64, radius: f64 },
}

#[derive(Clone, Debug)]
enum Kind {
    Kpg,
    Quadratic(DMatrix<f64>),
    Perturbed { mu: f64, radius: f64 },
}

/// Variable blocks of `X = (x, y, ζ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Z,
}

/// Real phase `φ(x, y, ζ)` with closed-form gradient and Hessian, optionally
/// composed with a linear change of variables `X ↦ JX`.
#[derive(Clone, Debug)]
pub struct PhaseFunction {
    d: usize,
    m: usize,
    kind: Kind,
    pre: Option<DMatrix<f64>>,
    tag: &'static str,
}

impl PhaseFunction {
    pub fn make(spec: &PhaseSpec, d: usize, m: usize) -> Result<PhaseFunction> {
        if d == 0 || m == 0 {
            return invalid("phase dimensions must be positive");
        }
        let n = 2 * d + m;
        let (kind, tag) = match spec {
            PhaseSpec::Kpg => {
                if m != d {
                    return invalid("kpg phase needs m = d");
                }
                (Kind::Kpg, "kpg")
            }
            PhaseSpec::Zero => (Kind::Quadratic(DMatrix::zeros(n, n)), "zero"),
            PhaseSpec::Quadratic { q } => {
                if q.len() != n || q.iter().any(|r| r.len() != n) {
                    return invalid(format!("quadratic phase needs a {n}x{n} matrix"));
                }
                let qm = DMatrix::from_fn(n, n, |i, j| q[i][j]);
                if (0..n).any(|i| (0..n).any(|j| (qm[(i, j)] - qm[(j, i)]).abs() > 1e-12 * (1.0 + qm[(i, j)].abs()))) {
                    return invalid("quadratic phase matrix is not symmetric");
                }
                (Kind::Quadratic(qm), "quadratic")
            }
            PhaseSpec::Perturbed { mu, radius } => {
                if m != d {
                    return invalid("perturbed phase needs m = d");
                }
                if !(*radius > 0.0) || !mu.is_finite() {
                    return invalid("perturbed phase needs radius > 0 and finite mu");
                }
                (Kind::Perturbed { mu: *mu, radius: *radius }, "perturbed")
            }
        };
        Ok(PhaseFunction { d, m, kind, pre: None, tag })
    }

    pub fn kpg(d: usize) -> PhaseFunction {
        PhaseFunction::make(&PhaseSpec::Kpg, d, d).expect("kpg")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        2 * self.d + self.m
    }

    pub fn tag(&self) -> &'static str {
        if self.pre.is_some() {
            "pullback"
        } else {
            self.tag
        }
    }

    /// `ψ(X) = φ(JX)`.
    pub fn pulled_back(&self, j: &DMatrix<f64>) -> PhaseFunction {
        let pre = match &self.pre {
            Some(j0) => j0 * j,
            None => j.clone(),
        };
        PhaseFunction { pre: Some(pre), ..self.clone() }
    }

    /// `(x, y, ζ) ↦ φ(x + sA(x−y), y + sA(x−y), ζ)`; `s = −1` gives `φ_A`.
    pub fn sheared(&self, a: &DMatrix<f64>, s: f64) -> PhaseFunction {
        self.pulled_back(&shear_jacobian(a, s, self.m))
    }

    fn to_base(&self, x: &[f64]) -> Vec<f64> {
        match &self.pre {
            None => x.to_vec(),
            Some(j) => (0..j.nrows()).map(|r| (0..j.ncols()).map(|c| j[(r, c)] * x[c]).sum()).collect(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let u = self.to_base(x);
        self.base_eval(&u)
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        let u = self.to_base(x);
        let g = self.base_grad(&u);
        match &self.pre {
            None => g,
            Some(j) => (0..j.ncols()).map(|c| (0..j.nrows()).map(|r| j[(r, c)] * g[r]).sum()).collect(),
        }
    }

    pub fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let u = self.to_base(x);
        let h = self.base_hess(&u);
        match &self.pre {
            None => h,
            Some(j) => j.transpose() * h * j,
        }
    }

    fn range(&self, v: Var) -> std::ops::Range<usize> {
        let d = self.d;
        match v {
            Var::X => 0..d,
            Var::Y => d..2 * d,
            Var::Z => 2 * d..2 * d + self.m,
        }
    }

    /// `∂_r ∂_c φ` as a matrix with rows indexed by `r` and columns by `c`.
    pub fn block(&self, x: &[f64], r: Var, c: Var) -> DMatrix<f64> {
        let h = self.hessian(x);
        let (rr, cc) = (self.range(r), self.range(c));
        DMatrix::from_fn(rr.len(), cc.len(), |i, j| h[(rr.start + i, cc.start + j)])
    }

    fn base_eval(&self, u: &[f64]) -> f64 {
        let d = self.d;
        match &self.kind {
            Kind::Kpg => kpg(u, d),
            Kind::Quadratic(q) => {
                let n = u.len();
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += u[i] * q[(i, j)] * u[j];
                    }
                }
                0.5 * s
            }
            Kind::Perturbed { mu, radius } => kpg(u, d) + mu * bump(u, *radius).0,
        }
    }

    fn base_grad(&self, u: &[f64]) -> Vec<f64> {
        let d = self.d;
        match &self.kind {
            Kind::Kpg => kpg_grad(u, d),
            Kind::Quadratic(q) => (0..u.len()).map(|i| (0..u.len()).map(|j| q[(i, j)] * u[j]).sum()).collect(),
            Kind::Perturbed { mu, radius } => {
                let mut g = kpg_grad(u, d);
                let (rho, dr, _) = bump(u, *radius);
                if rho > 0.0 {
                    let r2 = radius * radius;
                    for i in 0..u.len() {
                        g[i] += mu * dr * 2.0 * u[i] / r2;
                    }
                }
                g
            }
        }
    }

    fn base_hess(&self, u: &[f64]) -> DMatrix<f64> {
        let d = self.d;
        let n = u.len();
        match &self.kind {
            Kind::Kpg => kpg_hess(d),
            Kind::Quadratic(q) => q.clone(),
            Kind::Perturbed { mu, radius } => {
                let mut h = kpg_hess(d);
                let (rho, dr, ddr) = bump(u, *radius);
                if rho > 0.0 {
                    let r2 = radius * radius;
                    for i in 0..n {
                        for j in 0..n {
                            let mut v = ddr * (2.0 * u[i] / r2) * (2.0 * u[j] / r2);
                            if i == j {
                                v += dr * 2.0 / r2;
                            }
                            h[(i, j)] += mu * v;
                        }
                    }
                }
                h
            }
        }
    }
}

fn kpg(u: &[f64], d: usize) -> f64 {
    (0..d).map(|i| (u[i] - u[d + i]) * u[2 * d + i]).sum()
}

fn kpg_grad(u: &[f64], d: usize) -> Vec<f64> {
    let mut g = vec![0.0; 3 * d];
    for i in 0..d {
        g[i] = u[2 * d + i];
        g[d + i] = -u[2 * d + i];
        g[2 * d + i] = u[i] - u[d + i];
    }
    g
}

fn kpg_hess(d: usize) -> DMatrix<f64> {
    let mut h = DMatrix::zeros(3 * d, 3 * d);
    for i in 0..d {
        h[(i, 2 * d + i)] = 1.0;
        h[(2 * d + i, i)] = 1.0;
        h[(d + i, 2 * d + i)] = -1.0;
        h[(2 * d + i, d + i)] = -1.0;
    }
    h
}

/// `ρ = exp(−1/(1−s))`, `s = |u|²/R²`, with `dρ/ds` and `d²ρ/ds²`.
fn bump(u: &[f64], radius: f64) -> (f64, f64, f64) {
    let s = u.iter().map(|v| v * v).sum::<f64>() / (radius * radius);
    if s >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let w = 1.0 - s;
    let rho = (-1.0 / w).exp();
    let dr = -rho / (w * w);
    let ddr = rho * (2.0 * s - 1.0) / w.powi(4);
    (rho, dr, ddr)
}

/// Jacobian of `(x, y, ζ) ↦ (x + sA(x−y), y + sA(x−y), ζ)`.
pub fn shear_jacobian(a: &DMatrix<f64>, s: f64, m: usize) -> DMatrix<f64> {
    let d = a.nrows();
    let n = 2 * d + m;
    let mut j = DMatrix::zeros(n, n);
    for r in 0..d {
        for c in 0..d {
            let v = s * a[(r, c)];
            let id = if r == c { 1.0 } else { 0.0 };
            j[(r, c)] = id + v;
            j[(r, d + c)] = -v;
            j[(d + r, c)] = v;
            j[(d + r, d + c)] = id - v;
        }
    }
    for k in 0..m {
        j[(2 * d + k, 2 * d + k)] = 1.0;
    }
    j
}

/// Which determinant the non-degeneracy estimate uses.
#[derive(Clone, Debug)]
pub enum Nondegeneracy {
    /// `[[φ''_{y,x}, φ''_{ζ,x}], [φ''_{y,ζ}, φ''_{ζ,ζ}]]`.
    Full,
    /// `φ''_{y,ζ}`.
    Yz,
    /// `φ''_{y,ζ} − Aᵀ(φ''_{x,ζ} + φ''_{y,ζ})`.
    A(DMatrix<f64>),
    /// `φ''_{ζ,ζ}`.
    Zz,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DetRange {
    pub min: f64,
    pub max: f64,
}

fn det_at(phi: &PhaseFunction, x: &[f64], which: &Nondegeneracy) -> Result<f64> {
    let (d, m) = (phi.d(), phi.m());
    let h = phi.hessian(x);
    let blk = |r: std::ops::Range<usize>, c: std::ops::Range<usize>| {
        DMatrix::from_fn(r.len(), c.len(), |i, j| h[(r.start + i, c.start + j)])
    };
    let (xs, ys, zs) = (0..d, d..2 * d, 2 * d..2 * d + m);
    let det = match which {
        Nondegeneracy::Full => {
            let k = d + m;
            let mut mat = DMatrix::zeros(k, k);
            let rows: Vec<usize> = xs.clone().chain(zs.clone()).collect();
            let cols: Vec<usize> = ys.clone().chain(zs.clone()).collect();
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    mat[(i, j)] = h[(r, c)];
                }
            }
            mat.determinant()
        }
        Nondegeneracy::Yz | Nondegeneracy::A(_) | Nondegeneracy::Zz if m != d => {
            return invalid("this determinant needs m = d");
        }
        Nondegeneracy::Yz => blk(ys, zs).determinant(),
        Nondegeneracy::Zz => blk(zs.clone(), zs).determinant(),
        Nondegeneracy::A(a) => {
            if a.nrows() != d || a.ncols() != d {
                return invalid(format!("A must be {d}x{d}"));
            }
            let yz = blk(ys, zs.clone());
            let xz = blk(xs, zs);
            (&yz - a.transpose() * (&xz + &yz)).determinant()
        }
    };
    Ok(det.abs())
}

/// Min and max of the chosen `|det|` over sample points.
pub fn nondegeneracy(phi: &PhaseFunction, points: &[Vec<f64>], which: &Nondegeneracy) -> Result<DetRange> {
    let mut r = DetRange { min: f64::INFINITY, max: 0.0 };
    for p in points {
        if p.len() != phi.dim() {
            return invalid(format!("sample point has {} coordinates, phase needs {}", p.len(), phi.dim()));
        }
        let v = det_at(phi, p, which)?;
        r.min = r.min.min(v);
        r.max = r.max.max(v);
    }
    Ok(r)
}

/// Lattice sample of `(x, y, ζ)`: `per_axis` points per coordinate, space
/// coordinates in `[-space, space]`, frequency ones in `[-freq, freq]`.
pub fn phase_sample(phi: &PhaseFunction, space: f64, freq: f64, per_axis: usize) -> Vec<Vec<f64>> {
    let sx = crate::numeric::linspace(-space, space, per_axis.max(2));
    let sz = crate::numeric::linspace(-freq, freq, per_axis.max(2));
    let mut out = vec![vec![]];
    for k in 0..phi.dim() {
        let ax = if k < 2 * phi.d() { &sx } else { &sz };
        let mut next = Vec::new();
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
