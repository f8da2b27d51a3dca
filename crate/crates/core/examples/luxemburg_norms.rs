//! Luxemburg norms of one field under several Young functions and weights,
//! next to the mixed `L^{p,q}` norm of its STFT.

use num_complex::Complex64;
use orlicz_fio::timefreq::windows::gaussian;
use orlicz_fio::timefreq::{mixed_modulation_norm, modulation_norm};
use orlicz_fio::young::YoungSpec;
use orlicz_fio::{luxemburg_norm, Grid, SampledField, Weight, Young};

fn main() -> orlicz_fio::Result<()> {
    let grid = Grid::space(1, 8.0, 64);
    let f = SampledField::from_fn(grid.clone(), |x| {
        Complex64::from_polar((-(x[0] - 1.5).powi(2)).exp() + 0.5 * (-(x[0] + 2.0).powi(2) / 3.0).exp(), 2.0 * x[0])
    });
    let w = gaussian(&grid);
    let youngs = [
        Young::power(1.0),
        Young::power(2.0),
        Young::sup(),
        Young::entropy(),
        Young::from_spec(&YoungSpec::Xlog1p)?,
        Young::from_spec(&YoungSpec::LpSum { p1: 1.0, p2: 2.0 })?,
    ];
    println!("{:<40} {:>12} {:>12} {:>12}", "young", "L^Phi", "L^Phi <x>^2", "M^Phi");
    for phi in &youngs {
        println!(
            "{:<40} {:>12.6} {:>12.6} {:>12.6}",
            phi.to_string(),
            luxemburg_norm(&f, phi, &Weight::Flat)?,
            luxemburg_norm(&f, phi, &Weight::polynomial(2.0))?,
            modulation_norm(&f, phi, &Weight::Flat, &w)?,
        );
    }
    for (p, q) in [(2.0, 2.0), (1.0, 2.0), (2.0, 1.0)] {
        println!("M^({p},{q}) = {:.6}", mixed_modulation_norm(&f, p, q, &Weight::Flat, &w)?);
    }
    Ok(())
}
