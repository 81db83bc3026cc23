//! Estimated spectrum and delimiters for a quasi-periodic coefficient.

use skewfork::attractor::{pullback_delimiters, AttractorConfig, FiberGrid};
use skewfork::spectrum::sacker_sell;
use skewfork::{CoefficientFn, Driver, Family};

fn main() -> skewfork::Result<()> {
    let golden = 0.5 * (1.0 + 5f64.sqrt());
    let driver = Driver::quasi_periodic(vec![1.0, golden])
        .with("a3", CoefficientFn::constant(1.0))
        .with("a2", CoefficientFn::constant(0.0))
        .with(
            "a1",
            CoefficientFn::trig_multi(0.2, vec![vec![1.0], vec![0.5]], vec![vec![], vec![]]),
        );
    let sp = sacker_sell(&driver, "a1", 2000.0, 50.0)?;
    println!("spectrum of a1 ≈ [{:.4}, {:.4}] ({:?})", sp.lo, sp.hi, sp.exactness);
    let grid = FiberGrid::uniform(&driver, 8)?;
    let slice = pullback_delimiters(
        &Family::cubic("a3", "a2", "a1"),
        &driver,
        &grid,
        &AttractorConfig::new(1e-6),
    )?;
    let betas: Vec<String> = slice.fibers.iter().map(|f| format!("{:.4}", f.beta)).collect();
    println!("β along the orbit: {}", betas.join(" "));
    Ok(())
}
