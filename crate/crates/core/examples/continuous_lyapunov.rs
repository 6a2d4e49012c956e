//! RK4 trajectories of the flow and grid checks of both Lyapunov functions.
//!
//! cargo run --release --example continuous_lyapunov

use phytozoo::flow::{integrate, verify_lyapunov, LyapunovFunction};
use phytozoo::{Params, State};

fn main() -> phytozoo::Result<()> {
    let seed = State::new(0.8, 0.7);
    for (r, g, which) in [
        (0.3, 0.25, LyapunovFunction::PreyOnly),
        (0.3, 0.9, LyapunovFunction::Coexistence),
    ] {
        let p = Params::new(r, g)?;
        let target = which.target(&p)?;
        let traj = integrate(seed, &p, 400.0, 1e-3)?;
        println!(
            "r = {r}, gamma = {g}: {which:?} targets ({:.6}, {:.6})",
            target.x, target.y
        );
        for t in [0usize, 10, 50, 100, 200, 400] {
            let s = traj.states[t * 1000];
            println!(
                "  t = {t:>3}: ({:.8}, {:.8})  L = {:.3e}",
                s.x,
                s.y,
                which.value(s, &p)?
            );
        }
        let rep = verify_lyapunov(&p, which, 100)?;
        println!(
            "  grid check: {} points, max violation {:.1e}, FD mismatch {:.1e}, radially unbounded {}, pass {}",
            rep.grid_points,
            rep.max_violation,
            rep.max_derivative_mismatch,
            rep.radially_unbounded,
            rep.passed()
        );
    }
    Ok(())
}
