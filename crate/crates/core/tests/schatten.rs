use nalgebra::DMatrix;
use orlicz_fio::fio::OperatorMatrix;
use orlicz_fio::schatten::{
    embedding_report, frobenius, operator_norm_power, schatten_norm, schatten_norm_on, singular_values,
    singular_values_with, weighted_matrix, Metric, OnMode, SingularSpectrum,
};
use orlicz_fio::{Complex64, Grid, Weight, Young};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid() -> Grid {
    Grid::space(1, 4.0, 16)
}

fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn op(k: DMatrix<Complex64>) -> OperatorMatrix {
    OperatorMatrix::new(grid(), grid(), k)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn rank_one_kernel() {
    let g = grid();
    let h = g.lebesgue_cell();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = random_matrix(16, &mut rng).column(0).clone_owned();
    let v = random_matrix(16, &mut rng).column(0).clone_owned();
    let s = singular_values(&op(&u * v.adjoint()), &Weight::Flat, &Weight::Flat).unwrap();
    assert!(rel(s.values[0], h * u.norm() * v.norm()) < 1e-12);
    assert!(s.values[1] < 1e-12 * s.values[0]);
    // a single nonzero value σ has norm σ/Φ⁻¹(1) = σ for these
    for phi in [Young::power(1.0), Young::power(3.0), Young::sup()] {
        assert!(rel(schatten_norm(&s, &phi), s.values[0]) < 1e-9, "{phi}");
    }
}

#[test]
fn identity_has_unit_spectrum() {
    let h = grid().lebesgue_cell();
    let k = DMatrix::<Complex64>::identity(16, 16) * Complex64::new(1.0 / h, 0.0);
    let s = singular_values(&op(k), &Weight::Flat, &Weight::Flat).unwrap();
    assert_eq!(s.rank_bound, 16);
    assert!(s.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
    assert!(rel(schatten_norm(&s, &Young::power(1.0)), 16.0) < 1e-12);
    assert!(rel(schatten_norm(&s, &Young::power(2.0)), 4.0) < 1e-12);
    assert!(rel(schatten_norm(&s, &Young::sup()), 1.0) < 1e-12);
}

#[test]
fn hermitian_spectrum_matches_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = random_matrix(16, &mut rng);
    let k = &a + a.adjoint();
    let h = grid().lebesgue_cell();
    let mut eig: Vec<f64> = (k.clone() * Complex64::new(h, 0.0)).symmetric_eigen().eigenvalues.iter().map(|l| l.abs()).collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    let s = singular_values(&op(k), &Weight::Flat, &Weight::Flat).unwrap();
    for (x, y) in s.values.iter().zip(&eig) {
        assert!((x - y).abs() < 1e-10 * eig[0]);
    }
}

#[test]
fn power_norms_are_classical() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = op(random_matrix(16, &mut rng));
    let s = singular_values(&t, &Weight::Flat, &Weight::Flat).unwrap();
    let a = weighted_matrix(&t, &Weight::Flat, &Weight::Flat, &Metric::ZeroFrequency).unwrap();
    let trace: f64 = s.values.iter().sum();
    assert!(rel(schatten_norm(&s, &Young::power(1.0)), trace) < 1e-10);
    assert!(rel(schatten_norm(&s, &Young::power(2.0)), frobenius(&a)) < 1e-10);
    assert!(rel(schatten_norm(&s, &Young::sup()), s.largest()) < 1e-10);
    assert!(rel(operator_norm_power(&a, 2000, 7), s.largest()) < 1e-6);
}

#[test]
fn weighted_spaces_conjugate_by_diagonals() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = grid();
    let k = random_matrix(16, &mut rng);
    let (w1, w2) = (Weight::polynomial(2.0), Weight::polynomial(1.0));
    let a = weighted_matrix(&op(k.clone()), &w1, &w2, &Metric::ZeroFrequency).unwrap();
    let xs = g.axes[0].points();
    let h = g.lebesgue_cell();
    let want = DMatrix::from_fn(16, 16, |i, j| k[(i, j)] * h * w2.eval(&[xs[i], 0.0]) / w1.eval(&[xs[j], 0.0]));
    assert!((a - &want).norm() < 1e-12 * want.norm());
}

#[test]
fn stft_side_metric_is_unitarily_equivalent_for_flat_weights() {
    // with a flat weight the Gram matrix is ‖w‖²·I, an exact multiple of the identity
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = op(random_matrix(16, &mut rng));
    let plain = singular_values(&t, &Weight::Flat, &Weight::Flat).unwrap();
    let side = singular_values_with(&t, &Weight::Flat, &Weight::Flat, &Metric::StftSide { sigma: 1.0, stride: 1 }).unwrap();
    for (x, y) in side.values.iter().zip(&plain.values) {
        assert!((x - y).abs() < 1e-8 * plain.values[0]);
    }
}

#[test]
fn orthonormal_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let t = op(random_matrix(16, &mut rng));
    let (w1, w2) = (Weight::polynomial(1.0), Weight::Flat);
    let s = singular_values(&t, &w1, &w2).unwrap();
    for phi in [Young::power(1.0), Young::power(2.0), Young::entropy()] {
        let norm = schatten_norm(&s, &phi);
        let best = schatten_norm_on(&t, &w1, &w2, &phi, OnMode::Optimal, &Metric::ZeroFrequency).unwrap();
        assert!(rel(best, norm) < 1e-8, "{phi}: {best} vs {norm}");
        let random = schatten_norm_on(&t, &w1, &w2, &phi, OnMode::Random { trials: 50, seed: 9 }, &Metric::ZeroFrequency).unwrap();
        assert!(random <= norm * (1.0 + 1e-10), "{phi}: {random} vs {norm}");
    }
}

#[test]
fn diagonal_kernel_spectrum() {
    let h = grid().lebesgue_cell();
    let d: Vec<f64> = (0..16).map(|i| (i as f64 - 7.5) / h).collect();
    let k = DMatrix::from_fn(16, 16, |i, j| if i == j { Complex64::new(d[i], 0.0) } else { Complex64::default() });
    let s = singular_values(&op(k), &Weight::Flat, &Weight::Flat).unwrap();
    let mut want: Vec<f64> = d.iter().map(|v| (v * h).abs()).collect();
    want.sort_by(|a, b| b.total_cmp(a));
    for (x, y) in s.values.iter().zip(&want) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn embedding_ratios() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spectra: Vec<SingularSpectrum> = (0..20)
        .map(|_| {
            let t = op(random_matrix(16, &mut rng));
            singular_values(&t, &Weight::Flat, &Weight::Flat).unwrap()
        })
        .collect();
    let rep = embedding_report(&Young::power(1.0), &Young::power(2.0), &spectra).unwrap();
    assert_eq!(rep.ratios.len(), 20);
    assert!(rep.max_ratio <= 1.0 + 1e-12);
    assert!((rep.young_constant - 1.0).abs() < 1e-9);
    let same = embedding_report(&Young::entropy(), &Young::entropy(), &spectra).unwrap();
    assert!(same.ratios.iter().all(|r| (r - 1.0).abs() < 1e-12));
    assert!(embedding_report(&Young::power(2.0), &Young::power(1.0), &spectra).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn unitary_invariance(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = random_matrix(16, &mut rng);
        let u = random_matrix(16, &mut rng).qr().q();
        let v = random_matrix(16, &mut rng).qr().q();
        let a = singular_values(&op(k.clone()), &Weight::Flat, &Weight::Flat).unwrap();
        let b = singular_values(&op(&u * k * v.adjoint()), &Weight::Flat, &Weight::Flat).unwrap();
        for phi in [Young::power(1.0), Young::entropy(), Young::power(3.0)] {
            prop_assert!(rel(schatten_norm(&b, &phi), schatten_norm(&a, &phi)) < 1e-9);
        }
    }
}
