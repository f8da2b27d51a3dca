use orlicz_fio::orlicz::{
    circular_shift, holder_defect, luxemburg, luxemburg_norm, mixed_norm, modular, sequence_norm,
    sequence_norm_complex, translation_bound,
};
use orlicz_fio::weights::{check_moderate, ShiftSet};
use orlicz_fio::young::YoungSpec;
use orlicz_fio::{Complex64, Grid, SampledField, Weight, Young};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn random_field(grid: &Grid, rng: &mut ChaCha8Rng, scale: f64) -> SampledField {
    let values = (0..grid.len())
        .map(|_| {
            if rng.random_bool(0.1) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
            }
        })
        .collect();
    SampledField::new(grid.clone(), values).unwrap()
}

/// Plain weighted `L^p` sum written out by hand.
fn direct_lp(f: &SampledField, w: &Weight, p: f64) -> f64 {
    let cell: f64 = f.grid.cell_volume();
    let terms = f.values.iter().enumerate().map(|(i, z)| z.norm() * w.eval(&f.grid.point(i)));
    if p.is_infinite() {
        return terms.fold(0.0, f64::max);
    }
    (terms.map(|m| m.powf(p)).sum::<f64>() * cell).powf(1.0 / p)
}

#[test]
fn luxemburg_matches_lebesgue() {
    let grid = Grid::space(2, 4.0, 16);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..100 {
        let f = random_field(&grid, &mut rng, 10f64.powi(k % 7 - 3));
        let w = Weight::polynomial((k % 4) as f64);
        for p in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
            let phi = if p.is_infinite() { Young::sup() } else { Young::power(p) };
            let got = luxemburg_norm(&f, &phi, &w).unwrap();
            let want = direct_lp(&f, &w, p);
            assert!(rel(got, want) < 1e-10, "field {k}, p={p}: {got} vs {want}");
        }
    }
}

#[test]
fn zero_field_has_zero_norm() {
    let f = SampledField::zeros(Grid::space(1, 8.0, 32));
    for phi in [Young::power(2.0), Young::entropy(), Young::sup()] {
        assert_eq!(luxemburg_norm(&f, &phi, &Weight::Flat).unwrap(), 0.0);
    }
}

#[test]
fn sequence_identities() {
    assert!(rel(sequence_norm(&[3.0, 4.0], &Young::power(2.0)), 5.0) < 1e-14);
    assert_eq!(sequence_norm(&[3.0, -1.0], &Young::sup()), 3.0);
    let c = [Complex64::new(0.0, 3.0), Complex64::new(4.0, 0.0)];
    assert!(rel(sequence_norm_complex(&c, &Young::power(2.0)), 5.0) < 1e-14);
    assert!(rel(sequence_norm(&[1.0, -2.0, 3.0], &Young::power(1.0)), 6.0) < 1e-14);
}

#[test]
fn modular_brackets_one_at_the_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let grid = Grid::space(1, 8.0, 64);
    let mut specs: Vec<Young> = orlicz_fio::young::finite_catalog();
    specs.push(Young::entropy());
    for phi in specs {
        for _ in 0..10 {
            let f = random_field(&grid, &mut rng, 3.0);
            let n = luxemburg(&f.abs(), grid.cell_volume(), &phi);
            let m = modular(&f.abs(), grid.cell_volume(), &phi, n);
            assert!(m <= 1.0 + 1e-9, "{phi}: modular {m}");
            assert!(m >= 1.0 - 1e-6, "{phi}: modular {m}");
        }
    }
}

#[test]
fn norm_axioms() {
    let grid = Grid::space(1, 8.0, 64);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let w = Weight::polynomial(1.0);
    for phi in [Young::entropy(), Young::from_spec(&YoungSpec::Xlog1p).unwrap(), Young::power(3.0), Young::sup()] {
        for _ in 0..100 {
            let f = random_field(&grid, &mut rng, 1.0);
            let g = random_field(&grid, &mut rng, 5.0);
            let c = Complex64::new(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
            let nf = luxemburg_norm(&f, &phi, &w).unwrap();
            let ng = luxemburg_norm(&g, &phi, &w).unwrap();
            let ncf = luxemburg_norm(&f.scaled(c), &phi, &w).unwrap();
            assert!(rel(ncf, c.norm() * nf) < 1e-10, "{phi}: homogeneity");
            let sum = SampledField::new(grid.clone(), f.values.iter().zip(&g.values).map(|(a, b)| a + b).collect()).unwrap();
            let ns = luxemburg_norm(&sum, &phi, &w).unwrap();
            assert!(ns <= nf + ng + 1e-9 * (nf + ng), "{phi}: triangle {ns} > {nf} + {ng}");
        }
    }
}

#[test]
fn mixed_norm_equal_exponents_is_lebesgue() {
    let grid = Grid::phase(1, 8.0, 32);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let w = Weight::polynomial(2.0);
    for p in [1.0, 2.0, 3.5] {
        let f = random_field(&grid, &mut rng, 1.0);
        let a = mixed_norm(&f, p, p, &w).unwrap();
        let b = luxemburg_norm(&f, &Young::power(p), &w).unwrap();
        assert!(rel(a, b) < 1e-12, "p={p}: {a} vs {b}");
    }
}

#[test]
fn mixed_norm_of_one_cell() {
    let grid = Grid::phase(1, 8.0, 32);
    let (hx, hxi) = (grid.axes[0].measure(), grid.axes[1].measure());
    let mut f = SampledField::zeros(grid.clone());
    f.values[grid.ravel(&[5, 20])] = Complex64::new(1.0, 0.0);
    for (p, q) in [(1.0, 2.0), (2.0, 1.0), (3.0, 1.5)] {
        let want = hx.powf(1.0 / p) * hxi.powf(1.0 / q);
        assert!(rel(mixed_norm(&f, p, q, &Weight::Flat).unwrap(), want) < 1e-12);
    }
}

#[test]
fn mixed_norm_of_separable_product() {
    let grid = Grid::phase(1, 8.0, 32);
    let g = |x: f64| (-x * x / 3.0).exp() * (1.0 + x.sin());
    let k = |xi: f64| 1.0 / (1.0 + xi * xi);
    let f = SampledField::from_fn(grid.clone(), |p| Complex64::new(g(p[0]) * k(p[1]), 0.0));
    let gmax = grid.axes[0].points().into_iter().map(g).fold(0.0, f64::max);
    let ksum: f64 = grid.axes[1].points().into_iter().map(k).sum::<f64>() * grid.axes[1].measure();
    let got = mixed_norm(&f, f64::INFINITY, 1.0, &Weight::Flat).unwrap();
    assert!(rel(got, gmax * ksum) < 1e-12);
}

#[test]
fn mixed_norm_rejects_odd_grids_and_bad_exponents() {
    let f = SampledField::zeros(Grid::space(1, 8.0, 16));
    assert!(mixed_norm(&f, 2.0, 2.0, &Weight::Flat).is_err());
    let f = SampledField::zeros(Grid::phase(1, 8.0, 16));
    assert!(mixed_norm(&f, 0.5, 2.0, &Weight::Flat).is_err());
}

#[test]
fn holder_defect_cases() {
    let grid = Grid::space(1, 8.0, 64);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    // the Φ_[2] conjugate is t²/4, whose norm is half the L² norm
    let f = SampledField::from_fn(grid.clone(), |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
    let d = holder_defect(&f, &f, &Young::power(2.0)).unwrap();
    assert!((d - 2.0).abs() < 1e-9, "{d}");

    let mut g = SampledField::zeros(grid.clone());
    g.values[17] = Complex64::new(1.0, 0.0);
    for _ in 0..20 {
        let f = random_field(&grid, &mut rng, 2.0);
        if f.values[17].norm() == 0.0 {
            continue;
        }
        let d = holder_defect(&f, &g, &Young::power(1.0)).unwrap();
        assert!(d <= 2.0 + 1e-9, "{d}");
    }

    let phi4 = Young::power(4.0);
    let star = phi4.conjugate();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let f = random_field(&grid, &mut rng, 1.0);
        let g = random_field(&grid, &mut rng, 1.0);
        worst = worst.max(orlicz_fio::orlicz::holder_defect_with(&f, &g, &phi4, &star).unwrap());
    }
    assert!(worst <= 2.0 + 1e-9, "{worst}");

    assert!(holder_defect(&SampledField::zeros(grid.clone()), &f, &phi4).is_err());
}

#[test]
fn circular_shift_moves_samples() {
    let grid = Grid::space(2, 4.0, 8);
    let f = SampledField::from_fn(grid.clone(), |p| Complex64::new(p[0], p[1]));
    let s = circular_shift(&f, &[1, -2]).unwrap();
    assert_eq!(s.values[grid.ravel(&[1, 0])], f.values[grid.ravel(&[0, 2])]);
    assert_eq!(s.values[grid.ravel(&[0, 7])], f.values[grid.ravel(&[7, 1])]);
    assert!(circular_shift(&f, &[1]).is_err());
}

#[test]
fn translation_bounds() {
    let grid = Grid::space(1, 8.0, 64);
    let phi = Young::entropy();
    let interior = |rng: &mut ChaCha8Rng| {
        let mut f = SampledField::zeros(grid.clone());
        for k in 16..48 {
            f.values[k] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        f
    };
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let v = Weight::polynomial(2.0);
    let f = interior(&mut rng);
    let r = translation_bound(&f, &[0], &phi, &v, &v).unwrap();
    assert!(rel(r, 1.0 / v.eval(&[0.0])) < 1e-15);

    for s in -8i64..=8 {
        let r = translation_bound(&f, &[s], &phi, &Weight::Flat, &Weight::Flat).unwrap();
        assert!((r - 1.0).abs() < 1e-12, "shift {s}: {r}");
    }

    let omega = Weight::polynomial(3.0);
    let v = Weight::polynomial(3.0);
    let c = check_moderate(&omega, &v, &ShiftSet::from_grid(&grid, 64)).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let f = interior(&mut rng);
        let s = rng.random_range(-16i64..=16);
        worst = worst.max(translation_bound(&f, &[s], &phi, &omega, &v).unwrap());
    }
    assert!(worst <= c + 1e-6, "{worst} > {c}");
    assert!(translation_bound(&SampledField::zeros(grid.clone()), &[1], &phi, &omega, &v).is_err());
}

#[test]
fn smaller_young_function_near_origin_gives_smaller_norm() {
    // t² ≤ 2·Φ(t) on [0, 1] for Φ = t²/2 ∨ (t − ½)
    let phi1 = Young::from_spec(&YoungSpec::LpSum { p1: 1.0, p2: 2.0 }).unwrap();
    let phi2 = Young::power(2.0);
    let grid = Grid::space(1, 8.0, 128);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut used = 0;
    for _ in 0..100 {
        let f = random_field(&grid, &mut rng, 0.05);
        let n1 = luxemburg_norm(&f, &phi1, &Weight::Flat).unwrap();
        if f.max_abs() / n1 > 1.0 {
            continue;
        }
        used += 1;
        let n2 = luxemburg_norm(&f, &phi2, &Weight::Flat).unwrap();
        assert!(n2 <= 2.0 * n1 * (1.0 + 1e-12), "{n2} vs {n1}");
    }
    assert!(used >= 90, "only {used} fields in the small-value regime");
}

proptest! {
    #[test]
    fn power_norm_is_homogeneous(p in 1.0f64..6.0, c in 0.01f64..100.0, seed in 0u64..1000) {
        let grid = Grid::space(1, 4.0, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_field(&grid, &mut rng, 1.0);
        let phi = Young::power(p);
        let a = luxemburg_norm(&f, &phi, &Weight::Flat).unwrap();
        let b = luxemburg_norm(&f.scaled(Complex64::new(c, 0.0)), &phi, &Weight::Flat).unwrap();
        prop_assert!(rel(b, c * a) < 1e-10);
    }

    #[test]
    fn norm_grows_with_the_field(seed in 0u64..1000, k in 0usize..16, bump in 0.0f64..3.0) {
        let grid = Grid::space(1, 4.0, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_field(&grid, &mut rng, 1.0);
        let mut g = f.clone();
        g.values[k] *= 1.0 + bump;
        let phi = Young::entropy();
        prop_assert!(luxemburg_norm(&g, &phi, &Weight::Flat).unwrap() >= luxemburg_norm(&f, &phi, &Weight::Flat).unwrap() * (1.0 - 1e-12));
    }
}
