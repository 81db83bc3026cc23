//! Periodic coefficients `a1 = cos t`, `a2 = c + sin t`: the closed-form
//! pitchfork criterion flips at one value of `c`, and a scan at that value
//! shows the classical pitchfork.

use std::f64::consts::PI;

use skewfork::attractor::FiberGrid;
use skewfork::criteria::classify_cp_case;
use skewfork::diagram::{scan_lambda, CollisionSide, DiagramConfig, Pattern};
use skewfork::{CoefficientFn, Driver, Family};

fn driver(c: f64) -> Driver {
    Driver::periodic(2.0 * PI)
        .with("a3", CoefficientFn::constant(1.0))
        .with("a2", CoefficientFn::trig(c, vec![0.0], vec![1.0]))
        .with("a1", CoefficientFn::trig(0.0, vec![1.0], vec![0.0]))
        .with("b", CoefficientFn::trig(0.0, vec![0.0], vec![1.0]))
}

fn upper_collides(c: f64) -> skewfork::Result<bool> {
    Ok(classify_cp_case(&driver(c), "a1", "b", "a2")?.side == CollisionSide::UpperCollides)
}

fn main() -> skewfork::Result<()> {
    for c in [-1.0, -0.5, 0.0, 0.5] {
        let v = classify_cp_case(&driver(c), "a1", "b", "a2")?;
        println!("c = {c:+.2}: ensured {:?}, side {:?}", v.ensured, v.side);
    }
    // The colliding side changes where the weighted mean of a2 changes sign;
    // exactly there the classical pitchfork is ensured.
    let (mut lo, mut hi) = (-1.0, 0.0);
    for _ in 0..40 {
        let m = 0.5 * (lo + hi);
        if upper_collides(m)? {
            lo = m;
        } else {
            hi = m;
        }
    }
    let c_star = 0.5 * (lo + hi);
    println!("criterion flips near c = {c_star:.6}");
    let v = classify_cp_case(&driver(-0.446389965923), "a1", "b", "a2")?;
    println!(
        "at c* = -I1(1)/I0(1): {:?}",
        v.ensured.filter(|p| *p == Pattern::ClassicalPitchfork)
    );

    let d = driver(c_star);
    let cfg = DiagramConfig {
        grid_points: 11,
        ..DiagramConfig::default()
    };
    let grid = FiberGrid::uniform(&d, cfg.fibers)?;
    let report = scan_lambda(&Family::cubic("a3", "a2", "a1"), &d, (-1.0, 1.0), &grid, &cfg)?;
    println!("scan at c*: {:?}", report.pattern);
    Ok(())
}
