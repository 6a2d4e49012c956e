//! Full Neimark-Sacker diagnostics at gamma0 = 1 + r.
//!
//! cargo run --example neimark_sacker_report -- 0.5

use phytozoo::ns::{ns_report, ns_setup, transformed_map};

fn main() -> phytozoo::Result<()> {
    let r: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("r must be a number"))
        .unwrap_or(0.5);
    let rep = ns_report(r)?;
    let s = rep.setup;
    println!(
        "r = {r}, gamma0 = {}, E2 = ({:.6}, {:.6})",
        s.gamma0, s.xhat, s.yhat
    );
    println!(
        "multipliers {} and {}",
        rep.multipliers.lambda1, rep.multipliers.lambda2
    );
    println!("|lambda| = {}", rep.modulus);
    println!(
        "d|lambda|/dgamma* = {} (finite difference {:.12})",
        rep.transversality.analytic, rep.transversality.finite_difference
    );
    println!("lambda^m != 1 for m = 1..4: {:?}", rep.nondegenerate);

    let lin = transformed_map(&ns_setup(r)?).linear_part();
    println!(
        "rotated linear part [[{:.6}, {:.6}], [{:.6}, {:.6}]]",
        lin.a11, lin.a12, lin.a21, lin.a22
    );
    let d = rep.coeffs.second;
    println!("Fxx {:.6} Fxy {:.6} Fyy {:.6}", d.fxx, d.fxy, d.fyy);
    println!("Gxx {:.6} Gxy {:.6} Gyy {:.6}", d.gxx, d.gxy, d.gyy);
    println!(
        "L20 {:.6}  L11 {:.6}  L02 {:.6}  L21 {}",
        rep.coeffs.l20, rep.coeffs.l11, rep.coeffs.l02, rep.coeffs.l21
    );
    println!("L (pipeline)    = {:.12}", rep.l_pipeline);
    println!("L (closed form) = {:.12}", rep.l_closed_form);
    println!(
        "attracting closed curve for gamma > gamma0: {}",
        rep.predicts_attracting_curve()
    );
    Ok(())
}
