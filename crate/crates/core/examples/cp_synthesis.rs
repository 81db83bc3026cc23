//! Builds a linear coefficient that forces the classical pitchfork for a
//! sign-changing periodic quadratic coefficient.

use std::f64::consts::PI;

use skewfork::construct::synthesize_a1_for_pitchfork;
use skewfork::{CoefficientFn, Driver};

fn main() -> skewfork::Result<()> {
    let driver = Driver::periodic(2.0 * PI).with("a2", CoefficientFn::trig(0.2, vec![0.5], vec![1.0]));
    let p = synthesize_a1_for_pitchfork(&driver, "a2")?;
    println!("weight split s = {:.8}", p.s);
    println!("residual of the weighted integral: {:.2e}", p.residual);
    println!("verdict: {:?}", p.verdict.ensured);
    Ok(())
}
