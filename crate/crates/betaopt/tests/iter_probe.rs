#[test]
fn iteration_profile() {
    use betaopt::*;
    use betaopt::orbits::potential::HolderPotential;
    use betaopt::subaction::{calibrated_subaction, SubactionParams};
    use std::time::Instant;
    let beta = BetaParam::cubic_example().unwrap();
    let phi = HolderPotential::seeded_trig(3, 4, 1.0);
    let t0 = Instant::now();
    let br = betaopt::orbits::q_bracket(&beta, &phi, 16, 12, 2_000_000).unwrap();
    eprintln!("bracket: {:.2}s width {:.3e}", t0.elapsed().as_secs_f64(), br.width_f64());
    let t1 = Instant::now();
    let (_u, rep, _) = calibrated_subaction(&beta, &phi, &SubactionParams::default()).unwrap();
    eprintln!("subaction total: {:.2}s iterations {} converged {} residual {:.2e}",
        t1.elapsed().as_secs_f64(), rep.iterations, rep.converged, rep.residual);
}
