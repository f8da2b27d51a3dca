//! Moderateness constants, subexponential class exponents and the weight
//! chain check for a matching and a broken weight system.

use orlicz_fio::fio::PhaseFunction;
use orlicz_fio::weights::{check_class_s, check_fio_weight_chain, check_moderate, ChainBox, ShiftSet, WeightSystem};
use orlicz_fio::Weight;

fn main() -> orlicz_fio::Result<()> {
    let set = ShiftSet::cube(1, 20.0, 81);
    for r in [1.0, 2.0, 4.0] {
        let w = Weight::polynomial(r);
        println!("<x>^{r}: moderate constant {:.4} (Peetre 2^(r/2) = {:.4})", check_moderate(&w, &w, &set)?, 2f64.powf(r / 2.0));
    }
    let wide = ShiftSet::cube(1, 1000.0, 401);
    let sub = Weight::subexp(1.0, 2.0);
    println!("e^(|x|^(1/2)): class exponent r for s=2 is {:.3}", check_class_s(&sub, 2.0, &wide)?);

    let phase = PhaseFunction::kpg(1);
    let bx = ChainBox::new(8.0, 8.0);
    let flat = WeightSystem::Continuity {
        omega: Weight::Flat,
        omega0: Weight::Flat,
        omega1: Weight::Flat,
        omega2: Weight::Flat,
        v0: Weight::Flat,
    };
    let broken = WeightSystem::Continuity {
        omega: Weight::Flat,
        omega0: Weight::Flat,
        omega1: Weight::Flat,
        omega2: Weight::select(vec![1], Weight::polynomial(4.0)),
        v0: Weight::Flat,
    };
    for (name, sys) in [("flat", flat), ("broken", broken)] {
        let rep = check_fio_weight_chain(&sys, &phase, &bx, 100.0)?;
        println!("{name}: violated {}", rep.violated);
        for e in &rep.entries {
            println!("  {:<40} {:.4e}", e.name, e.max_ratio);
        }
    }
    Ok(())
}
