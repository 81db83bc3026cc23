//! Threshold maps of `x' = -x³ + μx² + λx` and a diagram with a prescribed
//! lower bifurcation point.

use skewfork::dynamics::autonomous_cubic;
use skewfork::twoparam::{lambda_hat, mu_hat, realize_diagram, verify_laws, TwoParamConfig};

fn main() -> skewfork::Result<()> {
    let (family, driver) = autonomous_cubic(1.0, 0.0, 0.0);
    let cfg = TwoParamConfig::default();
    for l0 in [-2.25, -1.0, -0.25, 0.0] {
        let m = mu_hat(&family, &driver, l0, &cfg)?;
        println!("mu_hat({l0:+}) = {:.5}  (2√(-λ0) = {:.5})", m.value, 2.0 * (-l0).sqrt());
    }
    println!(
        "lambda_hat(1.5) = {:.5}",
        lambda_hat(&family, &driver, 1.5, &cfg)?.value
    );
    let laws = verify_laws(&family, &driver, &[-1.0, -0.25], &[0.0, 1.0, 2.0, 3.0], &cfg)?;
    println!("λ̂ values: {:?}", laws.lambda_hat_values);
    let d = realize_diagram(&family, &driver, -1.0, &cfg)?;
    println!(
        "realized for λ0 = -1: {:?} (expected {:?})",
        d.report.pattern, d.expected
    );
    Ok(())
}
