//! Numerical conjugates of a few catalog Young functions, with their Δ2
//! classification.
//!
//! ```text
//! cargo run --release --example young_conjugate
//! ```

use orlicz_fio::young::YoungSpec;
use orlicz_fio::Young;

fn main() -> orlicz_fio::Result<()> {
    let specs = [
        YoungSpec::Power { p: 3.0 },
        YoungSpec::Xlog1p,
        YoungSpec::NegLog,
        YoungSpec::Entropy,
        YoungSpec::Power { p: f64::INFINITY },
    ];
    for spec in specs {
        let phi = Young::from_spec(&spec)?;
        let star = phi.conjugate();
        println!("{phi}");
        println!("  delta2 {:?}, conjugate {:?}", phi.check_delta2(10.0), star.check_delta2(10.0));
        for t in [0.1, 0.5, 1.0, 2.0, 4.0] {
            println!("  t={t:<4} phi {:>12.6e}  phi* {:>12.6e}", phi.eval(t), star.eval(t));
        }
    }
    // closed form for t^3: (2/3^{3/2}) t^{3/2}
    let star = Young::power(3.0).conjugate();
    println!("t^3 conjugate at 2: {:.10} vs {:.10}", star.eval(2.0), 2.0 * 3f64.powf(-1.5) * 2f64.powf(1.5));
    Ok(())
}
