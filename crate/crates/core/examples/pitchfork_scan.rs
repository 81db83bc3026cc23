//! Classical pitchfork of `x' = -x³ + λx`.

use skewfork::attractor::FiberGrid;
use skewfork::diagram::{scan_lambda, BifurcationKind, DiagramConfig};
use skewfork::dynamics::autonomous_cubic;

fn main() -> skewfork::Result<()> {
    let (family, driver) = autonomous_cubic(1.0, 0.0, 0.0);
    let cfg = DiagramConfig {
        grid_points: 21,
        ..DiagramConfig::default()
    };
    let grid = FiberGrid::uniform(&driver, cfg.fibers)?;
    let report = scan_lambda(&family, &driver, (-1.0, 1.0), &grid, &cfg)?;
    println!("pattern: {:?}", report.pattern);
    println!("pitchfork at λ = {:?}", report.point(BifurcationKind::Pitchfork));
    for p in report.grid.iter().step_by(5) {
        println!(
            "λ = {:+.2}  {}  β = {:?}",
            p.value,
            p.signature.as_deref().unwrap_or("?"),
            p.beta_at_fiber0()
        );
    }
    Ok(())
}
