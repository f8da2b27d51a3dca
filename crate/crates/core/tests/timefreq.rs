use std::f64::consts::PI;

use orlicz_fio::orlicz::circular_shift;
use orlicz_fio::timefreq::windows::{gaussian, hann, scaled_gaussian};
use orlicz_fio::timefreq::{
    entropy, istft, mixed_modulation_norm, modulation_norm, stft, stft_strided, stft_t, window_equivalence,
    GaborSystem, ModulationNorm,
};
use orlicz_fio::{Complex64, Error, Grid, SampledField, Weight, Young};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_field(grid: &Grid, seed: u64) -> SampledField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..grid.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    SampledField::new(grid.clone(), values).unwrap()
}

fn sum_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

#[test]
fn gaussian_ambiguity_modulus() {
    let grid = Grid::space(1, 8.0, 128);
    let g = gaussian(&grid);
    let v = stft(&g, &g).unwrap();
    let mut err = 0.0f64;
    for (i, z) in v.values.iter().enumerate() {
        let p = v.grid.point(i);
        err = err.max((z.norm() - (-(p[0] * p[0] + p[1] * p[1]) / 4.0).exp()).abs());
    }
    assert!(err < 1e-6, "max error {err}");
}

#[test]
fn stft_matches_direct_double_sum() {
    let grid = Grid::space(1, 8.0, 32);
    let n = 32;
    let h = grid.axes[0].step;
    let f = random_field(&grid, 1);
    let w = hann(&grid, 3.0);
    let v = stft(&f, &w).unwrap();
    let xs = grid.axes[0].points();
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            let xi = (k as f64 - (n / 2) as f64) * PI / 8.0;
            let mut acc = Complex64::default();
            for m in 0..n {
                // y − x_j wrapped into the box
                let off = (m + n + n / 2 - j) % n;
                acc += f.values[m] * w.values[off].conj() * Complex64::from_polar(1.0, -xs[m] * xi);
            }
            acc *= h;
            worst = worst.max((acc - v.values[j * n + k]).norm());
        }
    }
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn strided_stft_keeps_every_other_shift() {
    let grid = Grid::space(2, 4.0, 8);
    let f = random_field(&grid, 2);
    let w = gaussian(&grid);
    let full = stft(&f, &w).unwrap();
    let half = stft_strided(&f, &w, 2).unwrap();
    assert_eq!(half.grid.shape(), vec![4, 4, 8, 8]);
    for a in 0..4 {
        for b in 0..4 {
            for k in 0..8 {
                for l in 0..8 {
                    let x = half.values[half.grid.ravel(&[a, b, k, l])];
                    let y = full.values[full.grid.ravel(&[2 * a, 2 * b, k, l])];
                    assert!((x - y).norm() < 1e-13);
                }
            }
        }
    }
    assert!(stft_strided(&f, &w, 3).is_err());
}

#[test]
fn moyal_identity() {
    for (d, n) in [(1, 64), (2, 16)] {
        let grid = Grid::space(d, 6.0, n);
        let f = random_field(&grid, 3);
        let w = random_field(&grid, 4);
        let v = stft(&f, &w).unwrap();
        let lhs = sum_sq(&v.values) * v.grid.cell_volume();
        let h = grid.lebesgue_cell();
        let rhs = sum_sq(&f.values) * h * sum_sq(&w.values) * h;
        assert!((lhs - rhs).abs() < 1e-8 * rhs, "d={d}: {lhs} vs {rhs}");
    }
}

#[test]
fn istft_roundtrip() {
    let grid = Grid::space(1, 8.0, 64);
    let f = random_field(&grid, 5);
    let w = gaussian(&grid);
    let v = stft(&f, &w).unwrap();
    for gamma in [w.clone(), hann(&grid, 4.0), scaled_gaussian(&grid, 2.0, &[1.0])] {
        let back = istft(&v, &w, &gamma).unwrap();
        let e = back.rel_l2_error(&f).unwrap();
        assert!(e < 1e-8, "{e}");
    }
    let grid2 = Grid::space(2, 4.0, 8);
    let f2 = random_field(&grid2, 6);
    let w2 = gaussian(&grid2);
    let back = istft(&stft(&f2, &w2).unwrap(), &w2, &w2).unwrap();
    assert!(back.rel_l2_error(&f2).unwrap() < 1e-8);
}

#[test]
fn istft_rejects_orthogonal_windows() {
    let grid = Grid::space(1, 8.0, 32);
    let mut w = SampledField::zeros(grid.clone());
    w.values[3] = Complex64::new(1.0, 0.0);
    let mut gamma = SampledField::zeros(grid.clone());
    gamma.values[9] = Complex64::new(1.0, 0.0);
    let v = stft(&random_field(&grid, 1), &w).unwrap();
    assert!(matches!(istft(&v, &w, &gamma), Err(Error::ZeroNorm(_))));
}

#[test]
fn stft_t_is_a_phase_factor() {
    let grid = Grid::space(1, 8.0, 32);
    let f = random_field(&grid, 7);
    let w = gaussian(&grid);
    let v = stft(&f, &w).unwrap();
    let t = stft_t(&f, &w).unwrap();
    for i in 0..v.len() {
        let p = v.grid.point(i);
        let want = v.values[i] * Complex64::from_polar(1.0, p[0] * p[1]);
        assert!((t.values[i] - want).norm() < 1e-14);
    }
}

#[test]
fn translation_and_modulation_covariance() {
    let n = 32;
    let grid = Grid::space(1, 8.0, n);
    let f = random_field(&grid, 8);
    let w = gaussian(&grid);
    let v = stft(&f, &w).unwrap();
    let (s, k0) = (5usize, 3usize);
    let x0 = s as f64 * grid.axes[0].step;
    let xi0 = k0 as f64 * PI / 8.0;
    let shifted = stft(&circular_shift(&f, &[s as i64]).unwrap(), &w).unwrap();
    let modulated = SampledField::from_fn(grid.clone(), |p| Complex64::from_polar(1.0, p[0] * xi0))
        .values
        .iter()
        .zip(&f.values)
        .map(|(a, b)| a * b)
        .collect();
    let modulated = stft(&SampledField::new(grid.clone(), modulated).unwrap(), &w).unwrap();
    for j in 0..n {
        for k in 0..n {
            let xi = v.grid.point(j * n + k)[1];
            let a = shifted.values[j * n + k];
            let b = v.values[((j + n - s) % n) * n + k] * Complex64::from_polar(1.0, -x0 * xi);
            assert!((a - b).norm() < 1e-12);
            let c = modulated.values[j * n + k];
            let e = v.values[j * n + (k + n - k0) % n];
            assert!((c - e).norm() < 1e-12);
        }
    }
}

#[test]
fn hilbert_modulation_norm_is_product_of_norms() {
    let grid = Grid::space(1, 8.0, 64);
    let w = gaussian(&grid);
    let phi2 = Young::power(2.0);
    for seed in 0..5 {
        let f = random_field(&grid, 10 + seed);
        let want = f.l2_norm() * w.l2_norm();
        let a = modulation_norm(&f, &phi2, &Weight::Flat, &w).unwrap();
        assert!((a - want).abs() < 1e-10 * want);
        let b = mixed_modulation_norm(&f, 2.0, 2.0, &Weight::Flat, &w).unwrap();
        assert!((b - want).abs() < 1e-10 * want);
        let plan = ModulationNorm::new(&w, &Weight::Flat, &phi2, 1).unwrap();
        assert!((plan.norm(&f).unwrap() - a).abs() < 1e-14 * a);
    }
}

#[test]
fn mixed_and_orlicz_modulation_norms_agree_for_powers() {
    let grid = Grid::space(1, 8.0, 32);
    let w = gaussian(&grid);
    let f = random_field(&grid, 20);
    let omega = Weight::polynomial(1.0);
    for p in [1.0, 3.0] {
        let a = modulation_norm(&f, &Young::power(p), &omega, &w).unwrap();
        let b = mixed_modulation_norm(&f, p, p, &omega, &w).unwrap();
        assert!((a - b).abs() < 1e-10 * b);
    }
    let plan = ModulationNorm::new(&w, &omega, &Young::entropy(), 1).unwrap();
    let e = plan.norm(&f).unwrap();
    let p3 = plan.norm_with(&f, &Young::power(3.0)).unwrap();
    assert!((p3 - modulation_norm(&f, &Young::power(3.0), &omega, &w).unwrap()).abs() < 1e-12 * p3);
    assert!(e > 0.0 && e.is_finite());
}

#[test]
fn window_changes_give_equivalent_norms() {
    let grid = Grid::space(1, 8.0, 64);
    let fs: Vec<SampledField> = (0..10).map(|s| random_field(&grid, 30 + s)).collect();
    let w1 = gaussian(&grid);
    let w2 = scaled_gaussian(&grid, 1.5, &[0.0]);
    let phi = Young::entropy();
    let (lo, hi) = window_equivalence(&fs, &w1, &w1, &phi, &Weight::Flat).unwrap();
    assert_eq!((lo, hi), (1.0, 1.0));
    let (lo, hi) = window_equivalence(&fs, &w1, &w2, &phi, &Weight::Flat).unwrap();
    assert!(lo > 0.2 && hi < 5.0 && lo <= hi, "({lo}, {hi})");
    // Hilbert case: the ratio is exactly ‖w1‖/‖w2‖
    let (lo, hi) = window_equivalence(&fs, &w1, &w2, &Young::power(2.0), &Weight::Flat).unwrap();
    let want = w1.l2_norm() / w2.l2_norm();
    assert!((lo - want).abs() < 1e-10 && (hi - want).abs() < 1e-10);
}

#[test]
fn entropy_of_gaussian() {
    let grid = Grid::space(1, 8.0, 128);
    let g = gaussian(&grid);
    let e = entropy(&g, &g).unwrap();
    assert!((e - 2.0 * PI).abs() < 0.01 * 2.0 * PI, "{e}");
}

#[test]
fn entropy_scaling_identity() {
    // E(cf) = c²E(f) − c² ln(c²)·‖V f‖², with ‖V f‖² = 2π‖f‖²‖w‖² in Lebesgue measure
    let grid = Grid::space(1, 8.0, 64);
    let w = gaussian(&grid);
    let f = random_field(&grid, 40).scaled(Complex64::new(0.2, 0.0));
    let base = entropy(&f, &w).unwrap();
    let mass = 2.0 * PI * f.l2_norm().powi(2) * w.l2_norm().powi(2);
    for c in [0.5, 2.0, 3.0] {
        let e = entropy(&f.scaled(Complex64::new(c, 0.0)), &w).unwrap();
        let want = c * c * base - c * c * (c * c).ln() * mass;
        assert!((e - want).abs() < 1e-9 * want.abs().max(1.0), "c={c}: {e} vs {want}");
    }
    assert_eq!(entropy(&SampledField::zeros(grid.clone()), &w).unwrap(), 0.0);
}

#[test]
fn gabor_frame_reconstructs() {
    let grid = Grid::space(1, 8.0, 32);
    let w = gaussian(&grid);
    let sys = GaborSystem::new(&w, 1.0).unwrap();
    assert!(sys.condition >= 1.0 && sys.condition.is_finite());
    for seed in 0..3 {
        let f = random_field(&grid, 50 + seed);
        let e = sys.reconstruct(&f).unwrap().rel_l2_error(&f).unwrap();
        assert!(e < 1e-8, "{e}");
    }
    // synthesis with the dual and analysis with the atoms commute in the other order too
    let f = random_field(&grid, 60);
    let h = grid.lebesgue_cell();
    let c: Vec<Complex64> = (0..sys.len())
        .map(|k| (0..grid.len()).map(|m| f.values[m] * sys.dual[(m, k)].conj()).sum::<Complex64>() * h)
        .collect();
    assert!(sys.synthesis(&c).unwrap().rel_l2_error(&f).unwrap() < 1e-8);
}

#[test]
fn gabor_single_coefficient_is_one_atom() {
    let grid = Grid::space(1, 8.0, 32);
    let w = gaussian(&grid);
    let sys = GaborSystem::new(&w, 1.0).unwrap();
    let k = sys.len() / 2 + 3;
    let mut c = vec![Complex64::default(); sys.len()];
    c[k] = Complex64::new(1.0, 0.0);
    let g = sys.synthesis(&c).unwrap();
    let (j, iota) = &sys.labels[k];
    for (m, z) in g.values.iter().enumerate() {
        let x = grid.point(m)[0];
        // the atom is the window translated to j (wrapped) and modulated by ι
        let mut u = x - j[0];
        if u < -8.0 {
            u += 16.0;
        } else if u >= 8.0 {
            u -= 16.0;
        }
        let want = Complex64::from_polar(PI.powf(-0.25) * (-u * u / 2.0).exp(), x * iota[0]);
        assert!((z - want).norm() < 1e-12);
    }
}

#[test]
fn gabor_rejects_bad_lattices() {
    let grid = Grid::space(1, 8.0, 32);
    let w = gaussian(&grid);
    assert!(matches!(GaborSystem::new(&w, 0.7), Err(Error::InvalidParameter(_))));
    assert!(matches!(GaborSystem::new(&w, 4.0), Err(Error::SingularFrame { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn moyal_holds_for_random_pairs(seed in 0u64..10_000) {
        let grid = Grid::space(1, 4.0, 16);
        let f = random_field(&grid, seed);
        let w = random_field(&grid, seed + 1);
        let v = stft(&f, &w).unwrap();
        let lhs = sum_sq(&v.values) * v.grid.cell_volume();
        let rhs = f.l2_norm().powi(2) * w.l2_norm().powi(2);
        prop_assert!((lhs - rhs).abs() < 1e-10 * rhs);
    }

    #[test]
    fn stft_is_linear(seed in 0u64..10_000, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let grid = Grid::space(1, 4.0, 16);
        let f = random_field(&grid, seed);
        let g = random_field(&grid, seed + 7);
        let w = gaussian(&grid);
        let combo: Vec<Complex64> = f.values.iter().zip(&g.values).map(|(x, y)| x * a + y * b).collect();
        let lhs = stft(&SampledField::new(grid.clone(), combo).unwrap(), &w).unwrap();
        let (vf, vg) = (stft(&f, &w).unwrap(), stft(&g, &w).unwrap());
        for i in 0..lhs.len() {
            prop_assert!((lhs.values[i] - (vf.values[i] * a + vg.values[i] * b)).norm() < 1e-12);
        }
    }
}
