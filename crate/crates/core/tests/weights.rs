use orlicz_fio::fio::PhaseFunction;
use orlicz_fio::weights::{
    check_class_s, check_fio_weight_chain, check_moderate, kernel_weight_ratio, ChainBox, ShiftSet, WeightSystem,
};
use orlicz_fio::{Grid, Weight};
use proptest::prelude::*;
use serde_json::json;

fn poly(r: f64) -> Weight {
    Weight::polynomial(r)
}

/// Hand-rolled pair scan over the same sample, as an independent oracle.
fn brute_moderate(omega: &Weight, v: &Weight, pts: &[f64], half: f64) -> f64 {
    let mut m = 0.0f64;
    for &x in pts {
        for &y in pts {
            if (x + y).abs() <= half + 1e-12 {
                m = m.max(omega.eval(&[x + y]) / (omega.eval(&[x]) * v.eval(&[y])));
            }
        }
    }
    m
}

#[test]
fn catalog_formulas() {
    assert_eq!(Weight::make("polynomial", json!({"r": 0.0})).unwrap().eval(&[7.0, -2.0]), 1.0);
    assert!((Weight::make("subexp", json!({"r": 1.0, "s": 2.0})).unwrap().eval(&[4.0]) - 7.38905609893065).abs() < 1e-12);
    assert!((poly(2.0).eval(&[1.0]) - 2.0).abs() < 1e-15);
    assert!((poly(2.0).eval(&[0.6, 0.8]) - 2.0).abs() < 1e-15);
    assert!(Weight::make("subexp", json!({"r": 1.0, "s": -1.0})).is_err());
    assert!(Weight::make("banana", json!({})).is_err());
}

#[test]
fn sampling_checks_dimension() {
    let w = Weight::select(vec![2], poly(1.0));
    assert!(w.sample(&Grid::space(2, 4.0, 8)).is_err());
    assert_eq!(w.sample(&Grid::space(3, 4.0, 4)).unwrap().len(), 64);
}

#[test]
fn peetre_constant_for_polynomial_weights() {
    let half = 20.0;
    let set = ShiftSet::cube(1, half, 81);
    let pts = orlicz_fio::numeric::linspace(-half, half, 81);
    for r in [0.5, 1.0, 2.0, 4.0] {
        let w = poly(r);
        let c = check_moderate(&w, &w, &set).unwrap();
        assert!(c <= 2f64.powf(r / 2.0) + 1e-12, "r={r}: {c}");
        assert!((c - brute_moderate(&w, &w, &pts, half)).abs() < 1e-12);
    }
    let grid = Grid::space(2, 6.0, 16);
    let c = check_moderate(&poly(3.0), &poly(3.0), &ShiftSet::from_grid(&grid, 16)).unwrap();
    assert!(c <= 2f64.powf(1.5) + 1e-12);
}

#[test]
fn flat_and_subexponential_constants() {
    let set = ShiftSet::cube(2, 5.0, 11);
    assert_eq!(check_moderate(&Weight::Flat, &Weight::Flat, &set).unwrap(), 1.0);
    let w = Weight::subexp(1.0, 2.0);
    let c = check_moderate(&w, &w, &set).unwrap();
    assert!(c <= 1.0 + 1e-12, "{c}");
}

#[test]
fn class_membership() {
    let set = ShiftSet::cube(1, 50.0, 201);
    assert_eq!(check_class_s(&Weight::Flat, 2.0, &set).unwrap(), 0.0);
    // Peetre: ⟨x+y⟩⁴ ≤ 4⟨x⟩⁴⟨y⟩⁴, so r never needs to exceed sup ln(0.4⟨y⟩⁴)/|y|^{1/2}
    let r = check_class_s(&poly(4.0), 2.0, &set).unwrap();
    let bound = set
        .ys
        .iter()
        .filter(|y| y[0] != 0.0)
        .map(|y| (0.4 * poly(4.0).eval(y)).ln() / y[0].abs().sqrt())
        .fold(0.0, f64::max);
    assert!(r > 0.0 && r <= bound + 1e-3, "{r} vs {bound}");
    // the constant-10 slack hides the exponent on small boxes
    let wide = ShiftSet::cube(1, 1000.0, 401);
    let r = check_class_s(&Weight::subexp(1.0, 2.0), 2.0, &wide).unwrap();
    assert!((r - 1.0).abs() <= 0.1, "{r}");
    assert!(check_class_s(&poly(1.0), 0.0, &set).is_err());
}

#[test]
fn class_nesting() {
    let set = ShiftSet::cube(1, 100.0, 201);
    for s in [1.0, 1.5, 2.0, 4.0, 8.0] {
        for r in [1.0, 4.0] {
            assert!(check_class_s(&poly(r), s, &set).unwrap().is_finite(), "poly({r}) in class {s}");
        }
    }
    let w = Weight::subexp(1.0, 3.0);
    for s in [1.0, 2.0, 3.0] {
        assert!(check_class_s(&w, s, &set).unwrap().is_finite(), "s={s}");
    }
    let r1 = check_class_s(&w, 1.0, &set).unwrap();
    let r3 = check_class_s(&w, 3.0, &set).unwrap();
    assert!(r1 <= r3 + 1e-3);
}

#[test]
fn moderate_consequences() {
    let set = ShiftSet::cube(1, 10.0, 41);
    for (omega, v) in [(poly(2.0), poly(2.0)), (poly(1.5), poly(1.5)), (Weight::subexp(1.0, 2.0), Weight::subexp(1.0, 2.0))] {
        let c = check_moderate(&omega, &v, &set).unwrap();
        let w0 = omega.eval(&[0.0]);
        for x in orlicz_fio::numeric::linspace(-10.0, 10.0, 41) {
            let w = omega.eval(&[x]) / w0;
            assert!(w <= c * v.eval(&[x]) * (1.0 + 1e-12));
            assert!(w * c * v.eval(&[-x]) >= 1.0 - 1e-12);
        }
    }
}

#[test]
fn weight_chain_flat_matching_and_broken() {
    let phi = PhaseFunction::kpg(1);
    let bx = ChainBox::new(8.0, 8.0);
    let flat = WeightSystem::Continuity {
        omega: Weight::Flat,
        omega0: Weight::Flat,
        omega1: Weight::Flat,
        omega2: Weight::Flat,
        v0: Weight::Flat,
    };
    let rep = check_fio_weight_chain(&flat, &phi, &bx, 10.0).unwrap();
    assert!(!rep.violated);
    assert!(rep.entries.iter().all(|e| e.max_ratio == 1.0));

    // (x, y, ζ, ξ, η, z) ↦ ⟨(x, ξ+ζ)⟩^r / ⟨(y, η−ζ)⟩^r
    let r = 2.0;
    let row = |c: &[(usize, f64)]| {
        let mut v = vec![0.0; 6];
        for &(i, a) in c {
            v[i] = a;
        }
        v
    };
    let omega = Weight::linear(vec![row(&[(0, 1.0)]), row(&[(3, 1.0), (2, 1.0)])], poly(r))
        .times(Weight::linear(vec![row(&[(1, 1.0)]), row(&[(4, 1.0), (2, -1.0)])], poly(r)).recip());
    let omega0 = Weight::select(vec![0, 2], poly(r)).times(Weight::select(vec![1, 3], poly(r)).recip());
    let matching = WeightSystem::Continuity {
        omega,
        omega0: omega0.clone(),
        omega1: poly(r),
        omega2: poly(r),
        v0: Weight::Tensor { blocks: vec![(1, poly(r)), (1, poly(r)), (1, Weight::Flat)] },
    };
    let rep = check_fio_weight_chain(&matching, &phi, &bx, 10.0).unwrap();
    assert!(!rep.violated, "{rep:?}");
    assert!((rep.entries[0].max_ratio - 1.0).abs() < 1e-12);
    assert!((rep.entries[1].max_ratio - 1.0).abs() < 1e-12);
    assert!(rep.max_ratio().is_finite());

    let broken = WeightSystem::Continuity {
        omega: Weight::Flat,
        omega0: Weight::Flat,
        omega1: Weight::Flat,
        omega2: poly(4.0),
        v0: Weight::Flat,
    };
    let rep = check_fio_weight_chain(&broken, &phi, &bx, 10.0).unwrap();
    assert!(rep.violated);
    assert!(rep.max_ratio() > 1e4);

    let wrong_dim = WeightSystem::Continuity {
        omega: Weight::Flat,
        omega0: Weight::Flat,
        omega1: Weight::select(vec![4], poly(1.0)),
        omega2: Weight::Flat,
        v0: Weight::Flat,
    };
    assert!(check_fio_weight_chain(&wrong_dim, &phi, &bx, 10.0).is_err());
}

#[test]
fn kernel_weight_ratio_cases() {
    let bx = ChainBox::new(8.0, 8.0);
    assert_eq!(kernel_weight_ratio(&Weight::Flat, &Weight::Flat, &Weight::Flat, 1, &bx).unwrap(), 1.0);
    let r = 3.0;
    let omega = Weight::select(vec![0, 2], poly(r)).times(Weight::select(vec![1, 3], poly(r)).recip());
    let ratio = kernel_weight_ratio(&omega, &poly(r), &poly(r), 1, &bx).unwrap();
    assert!((ratio - 1.0).abs() < 1e-12, "{ratio}");
    let ratio = kernel_weight_ratio(&Weight::Flat, &Weight::Flat, &poly(r), 1, &bx).unwrap();
    assert!((ratio - poly(r).eval(&[8.0, 8.0])).abs() < 1e-9 * ratio);
}

proptest! {
    #[test]
    fn polynomial_weights_are_submultiplicative(r in 0.0f64..6.0, x in -50.0f64..50.0, y in -50.0f64..50.0, u in -50.0f64..50.0, w in -50.0f64..50.0) {
        let v = poly(r);
        prop_assert!(v.eval(&[x + y, u + w]) <= 2f64.powf(r / 2.0) * v.eval(&[x, u]) * v.eval(&[y, w]) * (1.0 + 1e-12));
    }

    #[test]
    fn subexp_is_submultiplicative(r in 0.0f64..3.0, s in 1.0f64..5.0, x in -50.0f64..50.0, y in -50.0f64..50.0) {
        let v = Weight::subexp(r, s);
        prop_assert!(v.eval(&[x + y]) <= v.eval(&[x]) * v.eval(&[y]) * (1.0 + 1e-12));
    }
}
