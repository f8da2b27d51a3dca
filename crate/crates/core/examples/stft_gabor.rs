//! STFT of a two-packet signal, Moyal's identity, reconstruction with a
//! different synthesis window, a Gabor frame and the entropy functional.
//! Writes `stft_magnitude.csv` to the directory given as the first argument
//! (default `out/stft_gabor`).

use num_complex::Complex64;
use orlicz_fio::io::write_magnitude_csv;
use orlicz_fio::timefreq::windows::{gaussian, hann};
use orlicz_fio::timefreq::{entropy, istft, stft, GaborSystem};
use orlicz_fio::{Grid, SampledField};
use std::path::PathBuf;

fn main() -> orlicz_fio::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/stft_gabor".into()));
    let grid = Grid::space(1, 8.0, 128);
    let f = SampledField::from_fn(grid.clone(), |x| {
        Complex64::from_polar((-(x[0] + 3.0).powi(2) / 2.0).exp(), -2.0 * x[0])
            + Complex64::from_polar((-(x[0] - 3.0).powi(2) / 2.0).exp(), 4.0 * x[0])
    });
    let w = gaussian(&grid);
    let v = stft(&f, &w)?;
    let energy = v.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * v.grid.cell_volume();
    println!("Moyal: |Vf|^2 = {energy:.12}, |f|^2|w|^2 = {:.12}", f.l2_norm().powi(2) * w.l2_norm().powi(2));
    let back = istft(&v, &w, &hann(&grid, 4.0))?;
    println!("istft with a Hann synthesis window: rel error {:.2e}", back.rel_l2_error(&f)?);
    println!("entropy of the window itself: {:.6} (2pi = {:.6})", entropy(&w, &w)?, 2.0 * std::f64::consts::PI);

    let coarse = Grid::space(1, 8.0, 32);
    let g = GaborSystem::new(&gaussian(&coarse), 1.0)?;
    let h = SampledField::from_fn(coarse.clone(), |x| Complex64::new((-(x[0] - 1.0).powi(2)).exp(), 0.0));
    println!(
        "Gabor frame: {} atoms, condition {:.3}, reconstruction error {:.2e}",
        g.len(),
        g.condition,
        g.reconstruct(&h)?.rel_l2_error(&h)?
    );

    std::fs::create_dir_all(&out)?;
    write_magnitude_csv(&out.join("stft_magnitude.csv"), &v)?;
    println!("wrote {}", out.join("stft_magnitude.csv").display());
    Ok(())
}
