//! Stability of E0, E1 and E2 across the main parameter regimes.
//!
//! cargo run --example classify_fixed_points

use phytozoo::linear::classify_fixed_point;
use phytozoo::model::fixed_points;
use phytozoo::Params;

fn main() -> phytozoo::Result<()> {
    let cases = [
        (0.3, 0.25, "prey only"),
        (0.5, 0.5, "gamma = r"),
        (0.3, 0.9, "coexistence"),
        (0.5, 1.5, "gamma = 1 + r"),
        (0.5, 2.0, "past the bifurcation"),
        (2.5, 1.0, "r > 2"),
    ];
    for (r, g, label) in cases {
        let p = Params::new(r, g)?;
        println!("r = {r}, gamma = {g} ({label})");
        for fp in fixed_points(&p) {
            let c = classify_fixed_point(&fp, &p)?;
            println!(
                "  {} at ({:.4}, {:.4}): |lambda| = ({:.4}, {:.4}) -> {}",
                fp.label, fp.state.x, fp.state.y, c.moduli.0, c.moduli.1, c.kind
            );
        }
    }
    Ok(())
}
