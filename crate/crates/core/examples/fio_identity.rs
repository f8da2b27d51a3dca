//! Fourier integral operators on a lattice: the identity `a ≡ 1` with the
//! pseudo-differential phase, a derivative symbol, a shifted amplitude and
//! the dense kernel.

use nalgebra::DMatrix;
use num_complex::Complex64;
use orlicz_fio::fio::{
    apply_fio, apply_fio_a, apply_pseudo, kernel_of, nondegeneracy, phase_sample, Amplitude, Nondegeneracy,
    PhaseFunction, PhaseSpec, Variant,
};
use orlicz_fio::{Grid, SampledField};

fn main() -> orlicz_fio::Result<()> {
    let space = Grid::space(1, 8.0, 64);
    let f = SampledField::from_fn(space.clone(), |x| Complex64::from_polar((-x[0] * x[0] / 2.0).exp(), x[0]));
    let kpg = PhaseFunction::kpg(1);

    let one = Amplitude::three(&space, 1, |_| Complex64::new(1.0, 0.0));
    println!("a = 1: rel error {:.2e}", apply_fio(&one, &kpg, &f)?.rel_l2_error(&f)?);

    let dx = Amplitude::two(&space, 1, |v| Complex64::new(0.0, v[1]));
    let df = SampledField::from_fn(space.clone(), |x| {
        Complex64::from_polar((-x[0] * x[0] / 2.0).exp(), x[0]) * Complex64::new(-x[0], 1.0)
    });
    println!("a = i zeta: derivative rel error {:.2e}", apply_pseudo(&dx, &f, None)?.rel_l2_error(&df)?);

    let perturbed = PhaseFunction::make(&PhaseSpec::Perturbed { mu: 0.1, radius: 3.0 }, 1, 1)?;
    let det = nondegeneracy(&perturbed, &phase_sample(&perturbed, 8.0, 8.0, 7), &Nondegeneracy::Full)?;
    println!("perturbed phase: det in [{:.4}, {:.4}]", det.min, det.max);

    let a = Amplitude::two(&space, 1, |v| Complex64::new((-v[0] * v[0] / 8.0).exp(), 0.0));
    let m = DMatrix::from_element(1, 1, 0.5);
    let g = apply_fio_a(&a, &m, &perturbed, &f, false)?;
    let k = kernel_of(&a, &perturbed, &space, &Variant::A(m))?;
    println!(
        "shifted amplitude: |Op f| = {:.6}, kernel matvec difference {:.2e}",
        g.l2_norm(),
        k.apply(&f)?.sub(&g)?.l2_norm() / g.l2_norm()
    );
    Ok(())
}
