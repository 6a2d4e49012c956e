//! Orbits of the map from (0.8, 0.7) converging to E1 and to E2.
//!
//! cargo run --example map_orbits

use phytozoo::discrete::{
    converge_detect, iterate, predicted_limit, DEFAULT_CONVERGE_TOL, DEFAULT_CONVERGE_WINDOW,
};
use phytozoo::{Params, State};

fn main() -> phytozoo::Result<()> {
    let seed = State::new(0.8, 0.7);
    for (r, g) in [(0.3, 0.25), (0.3, 0.9)] {
        let p = Params::new(r, g)?;
        let orbit = iterate(seed, &p, 10_000);
        println!("r = {r}, gamma = {g}");
        for n in [0, 1, 2, 5, 10, 50, 100, 500, 10_000] {
            let s = orbit.states[n];
            println!("  n = {n:>5}: ({:.10}, {:.10})", s.x, s.y);
        }
        let limit = converge_detect(&orbit, DEFAULT_CONVERGE_TOL, DEFAULT_CONVERGE_WINDOW);
        println!("  detected limit {limit:?}");
        println!("  predicted limit {:?}", predicted_limit(&p));
    }
    Ok(())
}
