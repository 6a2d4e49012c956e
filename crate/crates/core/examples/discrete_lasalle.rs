//! Invariance of M, membership in S and both LaSalle difference functions.
//!
//! cargo run --release --example discrete_lasalle

use phytozoo::discrete::{
    in_param_set_s, restricted_x_analysis, s_split, verify_lasalle, verify_m_invariance,
    LaSalleFunction, DELTA_TOL, REGION_TOL,
};
use phytozoo::Params;

fn main() -> phytozoo::Result<()> {
    println!("S splits at r = 3 - 2 sqrt 2 = {:.6}", s_split());
    for (r, g) in [(0.3, 0.9), (0.1, 0.3), (0.3, 0.25), (0.5, 1.5)] {
        let v = in_param_set_s(&Params::new(r, g)?);
        println!("  ({r}, {g}) in S: {} {:?}", v.inside, v.binding_constraint);
    }

    let linear = Params::new(0.3, 0.25)?;
    let log = Params::new(0.3, 0.9)?;
    let a = verify_lasalle(&linear, LaSalleFunction::Linear, 100)?;
    let b = verify_lasalle(&log, LaSalleFunction::PiecewiseLog, 100)?;
    println!(
        "linear L on M, (0.3, 0.25): max dL {:.1e}, pass {}",
        a.max_violation,
        a.passed(DELTA_TOL)
    );
    println!(
        "log L on M, (0.3, 0.9): max dL {:.1e}, pass {}",
        b.max_violation,
        b.passed(DELTA_TOL)
    );

    for p in [linear, log] {
        let m = verify_m_invariance(&p, 50)?;
        println!(
            "V(M) in M for ({}, {}): {} states, worst excursion {:.1e}, pass {}",
            p.r(),
            p.gamma(),
            m.points,
            m.max_violation,
            m.passed(REGION_TOL)
        );
    }

    let x = restricted_x_analysis();
    println!(
        "x -> x(2 - x) on (0, 2): globally attracting fixed point 1: {}",
        x.globally_attracting()
    );
    Ok(())
}
