//! Delimiters of the global attractor and their exponents for a periodic
//! coefficient, fiber by fiber.

use std::f64::consts::PI;

use skewfork::attractor::{pullback_delimiters, AttractorConfig, FiberGrid};
use skewfork::spectrum::{lyapunov_on_equilibrium, EquilibriumRef};
use skewfork::{CoefficientFn, Driver, Family};

fn main() -> skewfork::Result<()> {
    let driver = Driver::periodic(2.0 * PI)
        .with("a3", CoefficientFn::trig(1.0, vec![0.3], vec![]))
        .with("a2", CoefficientFn::trig(0.0, vec![], vec![0.5]))
        .with("a1", CoefficientFn::trig(0.5, vec![1.0], vec![]));
    let family = Family::cubic("a3", "a2", "a1");
    let grid = FiberGrid::uniform(&driver, 8)?;
    let slice = pullback_delimiters(&family, &driver, &grid, &AttractorConfig::new(1e-8))?;
    for f in &slice.fibers {
        println!("s = {:.3}  α = {:+.6}  β = {:+.6}", f.s, f.alpha, f.beta);
    }
    let upper = lyapunov_on_equilibrium(
        &family,
        &driver,
        EquilibriumRef::Samples(&slice.beta_samples()),
        200.0,
        1e-8,
    )?;
    let lower = lyapunov_on_equilibrium(
        &family,
        &driver,
        EquilibriumRef::Samples(&slice.alpha_samples()),
        200.0,
        1e-8,
    )?;
    let zero = lyapunov_on_equilibrium(&family, &driver, EquilibriumRef::Zero, 200.0, 1e-8)?;
    println!(
        "exponents: lower {:.4}, zero {:.4}, upper {:.4}",
        lower.value, zero.value, upper.value
    );
    Ok(())
}
