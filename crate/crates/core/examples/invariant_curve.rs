//! Closed invariant curves past the bifurcation and their sqrt(gamma*) growth.
//!
//! cargo run --release --example invariant_curve

use phytozoo::ns::{detect_invariant_curve, ns_setup, CurveSettings};
use phytozoo::State;

fn main() -> phytozoo::Result<()> {
    let setup = ns_setup(0.5)?;
    let settings = CurveSettings::default();
    println!("gamma*     closed  r_min     r_max     mean      mean/sqrt(gamma*)");
    for gs in [-0.05, 0.0, 0.005, 0.01, 0.02, 0.04] {
        // at criticality the orbit decays only algebraically
        let run = if gs == 0.0 {
            CurveSettings {
                transient: 1_000_000,
                ..settings
            }
        } else {
            settings
        };
        let st = detect_invariant_curve(&setup, gs, State::new(0.3, 0.7), &run)?;
        let scaled = if gs > 0.0 {
            st.mean_radius / gs.sqrt()
        } else {
            f64::NAN
        };
        println!(
            "{gs:>7}   {:>6}  {:.6}  {:.6}  {:.6}  {scaled:.4}",
            st.closed, st.r_min, st.r_max, st.mean_radius
        );
    }

    let a = detect_invariant_curve(&setup, 0.01, State::new(0.3, 0.7), &settings)?;
    let b = detect_invariant_curve(&setup, 0.01, State::new(0.8, 1.0), &settings)?;
    println!(
        "seeds (0.3, 0.7) and (0.8, 1.0) at gamma = 1.51: bands [{:.5}, {:.5}] and [{:.5}, {:.5}], match {}",
        a.r_min,
        a.r_max,
        b.r_min,
        b.r_max,
        a.band_matches(&b, 0.05)
    );
    Ok(())
}
