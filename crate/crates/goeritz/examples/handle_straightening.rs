//! The damping estimates behind straightening a diffeomorphism near a
//! point: bounded radial slope keeps the interpolation Jacobian bounded, a
//! strong shear defeats a fast profile, and a slope below the kappa
//! threshold keeps every fiber determinant positive.
//!
//! Run with: cargo run --example handle_straightening

use goeritz::numerics::mat::Mat;
use goeritz::numerics::{
    lambda_jacobian, stage5, worrisome, BumpProfile, GridSpec, KappaProfile, RadialProfile,
};

fn main() {
    let grid = GridSpec::default();

    // The committed bump profile: slope s*phi'(s) peaks at 4/sqrt(3).
    let bump = BumpProfile::new(1.0, 4.0).expect("bound holds");
    println!(
        "bump profile: grid sup of s*phi'(s) = {:.6} (exact 4/sqrt(3) = {:.6})",
        bump.grid_slope_sup(),
        4.0 / 3.0f64.sqrt()
    );

    // Jacobian norms of the radial damping stay below 1 + b0.
    let mut max_norm: f64 = 0.0;
    for k in 0..=16 {
        let t = k as f64 / 16.0;
        for s in bump.radial_samples(32) {
            for a in 0..32 {
                let theta = 2.0 * std::f64::consts::PI * a as f64 / 32.0;
                let y = [s * theta.cos(), s * theta.sin()];
                let jac = lambda_jacobian(&bump, t, &y).expect("valid radius");
                max_norm = max_norm.max(jac.op_norm());
            }
        }
    }
    println!("damping Jacobian norm over the grid: {max_norm:.6} <= 1 + b0 = 5");
    assert!(max_norm <= 5.0 + 1e-9);

    // A gentle shear stays injective; a strong one does not.
    for r in [0.1, 10.0] {
        let report = worrisome(r, &bump, &grid);
        println!(
            "shear r = {r}: min directional coefficient {:.4} at (s, theta) = ({:.3}, {:.3}) -> {}",
            report.min_value,
            report.argmin_radius,
            report.argmin_angle,
            if report.witness { "singular" } else { "injective" }
        );
        assert_eq!(report.witness, r > 2.0 / report.sup_slope);
    }

    // The determinant scan along the shear path: the bump profile fails
    // its hypothesis and the scan finds the singularity; the slow profile
    // satisfies kappa < kappa1*kappa2 and the scan stays positive.
    let r = 10.0;
    let path = |_: f64| Mat::from_rows(&[vec![1.0, r], vec![0.0, 1.0]]);
    let fast = stage5(path, &bump, &grid).expect("valid path");
    println!(
        "bump profile on the shear path: hypothesis {}, min det {:.4}",
        if fast.precondition_ok { "holds" } else { "fails" },
        fast.min_det
    );
    assert!(!fast.precondition_ok && fast.min_det <= 0.0);

    let slow = KappaProfile::new(0.009).expect("kappa > 0");
    println!(
        "slow profile: sup s*phi'(s) = {:.6}, plateau radius e^(2/kappa) = {:.3e}",
        slow.grid_slope_sup(),
        slow.plateau_radius()
    );
    let guarded = stage5(path, &slow, &grid).expect("valid path");
    println!(
        "slow profile on the shear path: kappa1*kappa2 = {:.6}, min det {:.6}",
        guarded.kappa1 * guarded.kappa2,
        guarded.min_det
    );
    assert!(guarded.precondition_ok && guarded.nonsingular);
    println!("slope below kappa1*kappa2 keeps every sampled fiber determinant positive");
}
