//! Saddle-node and transcritical points of `x' = -x³ + 2x² + λx`, with the
//! repulsive middle copy between them.

use skewfork::attractor::{repulsive_middle, AttractorConfig, FiberGrid};
use skewfork::diagram::{scan_lambda, BifurcationKind, DiagramConfig};
use skewfork::dynamics::autonomous_cubic;

fn main() -> skewfork::Result<()> {
    let (family, driver) = autonomous_cubic(1.0, 2.0, 0.0);
    let cfg = DiagramConfig::default();
    let grid = FiberGrid::uniform(&driver, cfg.fibers)?;
    let report = scan_lambda(&family, &driver, (-2.0, 1.0), &grid, &cfg)?;
    println!("pattern: {:?}, colliding side: {:?}", report.pattern, report.side);
    for kind in [
        BifurcationKind::SaddleNode,
        BifurcationKind::TranscriticalEndpointLower,
        BifurcationKind::TranscriticalEndpointUpper,
    ] {
        println!("{kind:?}: {:?}", report.point(kind));
    }
    let kappa = repulsive_middle(&family.with_lambda(-0.5), &driver, &grid, &AttractorConfig::new(1e-8))?;
    println!("repulsive copy at λ = -0.5: {:.6}", kappa.values[0]);
    Ok(())
}
