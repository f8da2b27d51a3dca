//! Runs one verification experiment on its default ensemble and, with
//! `--control`, on its negative control.
//!
//! ```text
//! cargo run --release --example verify_experiment -- cont1 --control
//! ```

use orlicz_fio::bench::{verify, ExperimentConfig, ExperimentKind};

fn main() -> orlicz_fio::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let kinds = match args.iter().find(|a| !a.starts_with("--")) {
        Some(name) => vec![ExperimentKind::parse(name)?],
        None => ExperimentKind::ALL.to_vec(),
    };
    let control = args.iter().any(|a| a == "--control");
    for kind in kinds {
        let cfg = if control { ExperimentConfig::negative_control(kind) } else { ExperimentConfig::default_for(kind) };
        let t = std::time::Instant::now();
        let rep = verify(&cfg)?;
        println!("{} ({:.1}s)", rep.experiment, t.elapsed().as_secs_f64());
        for s in &rep.series {
            println!(
                "  {:<13} max {:>10.4e} -> {:>10.4e}  growth {:.3}{}",
                s.name,
                s.base.max,
                s.refined.max,
                s.growth,
                if s.growth_flag { "  GROWTH" } else { "" }
            );
        }
        for c in &rep.checks {
            println!("  {:<30} {:.4e}", c.name, c.value);
        }
        let h = &rep.hypothesis;
        if let Some(ch) = &h.weight_chain {
            println!("  weight chain max {:.3e} / doubled {:.3e}", ch.base.max_ratio(), ch.doubled.max_ratio());
        }
        if let Some(det) = &h.det {
            println!("  det {} in [{:.3e}, {:.3e}]", det.which, det.range.min, det.range.max);
        }
        for n in &h.notes {
            println!("  note: {n}");
        }
        println!("  flags {:?}", rep.flags);
    }
    Ok(())
}
