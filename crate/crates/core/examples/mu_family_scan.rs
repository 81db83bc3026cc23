//! Diagrams in the quadratic parameter: `x' = -x³ + c x + μx²` for c = 1, -1, 0.

use skewfork::attractor::FiberGrid;
use skewfork::diagram::{scan_mu, DiagramConfig};
use skewfork::dynamics::autonomous_cubic;

fn main() -> skewfork::Result<()> {
    let cfg = DiagramConfig::default();
    for c in [1.0, -1.0, 0.0] {
        let (family, driver) = autonomous_cubic(1.0, 0.0, c);
        let grid = FiberGrid::uniform(&driver, cfg.fibers)?;
        let report = scan_mu(&family, &driver, (-3.0, 3.0), &grid, &cfg)?;
        let points: Vec<String> = report
            .bifurcation_points
            .iter()
            .map(|b| format!("{:?} at {:.4}", b.kind, b.value))
            .collect();
        println!("c = {c:+}: {:?} {}", report.pattern, points.join(", "));
    }
    Ok(())
}
