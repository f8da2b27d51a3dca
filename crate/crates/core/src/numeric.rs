//! Small numerical helpers shared across modules.

use rayon::prelude::*;

/// Chunk length for deterministic parallel reductions. Partial sums are
/// formed per fixed chunk and combined in index order, so the result does not
/// depend on the thread count.
pub const REDUCE_CHUNK: usize = 4096;

/// Neumaier compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Compensated total; an infinite term makes the compensation NaN, so
    /// non-finite sums are returned as is.
    pub fn value(&self) -> f64 {
        if !self.sum.is_finite() {
            return self.sum;
        }
        self.sum + self.comp
    }
}

pub fn neumaier_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = Neumaier::default();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

/// Deterministic parallel sum of `f(x)` over a slice.
pub fn par_sum_map<T, F>(xs: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    if xs.len() <= REDUCE_CHUNK {
        return neumaier_sum(xs.iter().map(&f));
    }
    let partials: Vec<f64> = xs
        .par_chunks(REDUCE_CHUNK)
        .map(|c| neumaier_sum(c.iter().map(&f)))
        .collect();
    neumaier_sum(partials)
}

/// `n` points spaced logarithmically on `[a, b]`, endpoints included.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a && n >= 2);
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| {
            if i == n - 1 {
                b
            } else {
                (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Maximizes a unimodal `f` on `[a, b]` by golden-section search. Infinite or
/// NaN objective values count as `-inf`. Returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = g(c);
    let mut fd = g(d);
    for _ in 0..iters {
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = g(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Keys cubic convolution kernel (a = -1/2). Interpolating: equal to 1 at 0
/// and to 0 at every other integer.
pub fn keys_cubic(t: f64) -> f64 {
    let a = -0.5;
    let t = t.abs();
    if t <= 1.0 {
        ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0
    } else if t < 2.0 {
        ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a
    } else {
        0.0
    }
}

/// Four-tap cubic weights for a fractional index `p`: returns the base index
/// `floor(p) - 1` and the weights for offsets 0..4. Integer `p` yields exactly
/// one unit weight.
pub fn cubic_taps(p: f64) -> (i64, [f64; 4]) {
    let fl = p.floor();
    let frac = p - fl;
    let base = fl as i64 - 1;
    if frac == 0.0 {
        return (base, [0.0, 1.0, 0.0, 0.0]);
    }
    let w = [
        keys_cubic(frac + 1.0),
        keys_cubic(frac),
        keys_cubic(1.0 - frac),
        keys_cubic(2.0 - frac),
    ];
    (base, w)
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_terms_give_infinite_sums() {
        assert_eq!(neumaier_sum([1.0, f64::INFINITY, 2.0]), f64::INFINITY);
        assert!(neumaier_sum([f64::INFINITY, f64::NEG_INFINITY]).is_nan());
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(xs), 2.0);
    }

    #[test]
    fn par_sum_is_chunk_deterministic() {
        let xs: Vec<f64> = (0..50_000).map(|i| ((i * 7919) % 1000) as f64 * 1e-3).collect();
        let a = par_sum_map(&xs, |x| *x);
        let b = par_sum_map(&xs, |x| *x);
        assert_eq!(a.to_bits(), b.to_bits());
        assert!((a - neumaier_sum(xs.iter().copied())).abs() < 1e-9);
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, 0.0, 1.0, 200);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn cubic_kernel_interpolates() {
        assert_eq!(keys_cubic(0.0), 1.0);
        assert_eq!(keys_cubic(1.0), 0.0);
        assert_eq!(keys_cubic(2.0), 0.0);
        let (_, w) = cubic_taps(0.37);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert_eq!(cubic_taps(3.0), (2, [0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn cubic_reproduces_quadratics() {
        // Keys a = -1/2 is exact for polynomials up to degree 2.
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x;
        let p = 4.3;
        let (base, w) = cubic_taps(p);
        let v: f64 = (0..4).map(|k| w[k] * f((base + k as i64) as f64)).sum();
        assert!((v - f(p)).abs() < 1e-12);
    }
}
