//! Character map of E2 stability and the set S over (r, gamma).
//!
//! cargo run --example parameter_sweep
//!
//! Legend: `.` no E2, `a` attractive, `S` attractive and in S,
//! `R` repelling, `*` nonhyperbolic.

use phytozoo::discrete::in_param_set_s;
use phytozoo::linear::{classify_fixed_point, StabilityKind};
use phytozoo::model::fixed_points;
use phytozoo::{FixedPointLabel, Params};

fn main() -> phytozoo::Result<()> {
    let (nr, ng) = (60, 24);
    for j in (1..=ng).rev() {
        let g = 2.5 * j as f64 / ng as f64;
        let mut line = format!("{g:5.2} |");
        for i in 1..=nr {
            let r = i as f64 / nr as f64;
            let p = Params::new(r, g)?;
            let e2 = fixed_points(&p)
                .into_iter()
                .find(|f| f.label == FixedPointLabel::E2);
            let ch = match e2 {
                None => '.',
                Some(fp) => match classify_fixed_point(&fp, &p)?.kind {
                    StabilityKind::Attractive if in_param_set_s(&p).inside => 'S',
                    StabilityKind::Attractive => 'a',
                    StabilityKind::Repelling => 'R',
                    StabilityKind::Nonhyperbolic => '*',
                    StabilityKind::Saddle => 's',
                },
            };
            line.push(ch);
        }
        println!("{line}");
    }
    println!("      +{}", "-".repeat(nr));
    println!(
        "       r from {:.3} to 1; gamma on the vertical axis",
        1.0 / nr as f64
    );
    Ok(())
}
