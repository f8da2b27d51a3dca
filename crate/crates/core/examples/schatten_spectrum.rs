//! Singular spectrum of an FIO kernel between weighted spaces and its
//! Orlicz Schatten norms.

use num_complex::Complex64;
use orlicz_fio::bench::quadratic_phase;
use orlicz_fio::fio::{kernel_of, Amplitude, PhaseFunction, Variant};
use orlicz_fio::schatten::{embedding_report, schatten_norm, singular_values, singular_values_with, Metric};
use orlicz_fio::{Grid, Weight, Young};

fn main() -> orlicz_fio::Result<()> {
    let space = Grid::space(1, 8.0, 32);
    let phase = PhaseFunction::make(&quadratic_phase(1), 1, 1)?;
    let a = Amplitude::two(&space, 1, |v| Complex64::new((-(v[0] * v[0] + v[1] * v[1]) / 8.0).exp(), 0.0));
    let op = kernel_of(&a, &phase, &space, &Variant::Plain)?;

    let flat = singular_values(&op, &Weight::Flat, &Weight::Flat)?;
    let weighted = singular_values(&op, &Weight::polynomial(1.0), &Weight::Flat)?;
    let side = singular_values_with(&op, &Weight::Flat, &Weight::Flat, &Metric::StftSide { sigma: 1.0, stride: 2 })?;
    println!("leading singular values: {:.4?}", &flat.values[..6]);
    for phi in [Young::power(1.0), Young::power(2.0), Young::entropy(), Young::sup()] {
        println!(
            "{:<28} flat {:>10.5}  weighted {:>10.5}  stft-side {:>10.5}",
            phi.to_string(),
            schatten_norm(&flat, &phi),
            schatten_norm(&weighted, &phi),
            schatten_norm(&side, &phi)
        );
    }
    let rep = embedding_report(&Young::power(1.0), &Young::entropy(), &[flat, weighted, side])?;
    println!("entropy / trace norm ratios {:.4?}", rep.ratios);
    Ok(())
}
