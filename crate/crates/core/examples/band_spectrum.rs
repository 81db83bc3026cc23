//! A linear coefficient with band spectrum on two ergodic measures, certified
//! to give the generalized pitchfork.

use skewfork::construct::{epsilon1, realize_band_spectrum};
use skewfork::spectrum::SpectrumInterval;
use skewfork::twoparam::{realize_diagram, TwoParamConfig};
use skewfork::Family;

fn main() -> skewfork::Result<()> {
    println!("epsilon1(2, 1) = {:.6}", epsilon1(2, 1.0));
    let r = realize_band_spectrum(SpectrumInterval::exact(-0.9, 0.9), 2, 1.0)?;
    println!("epsilon = {}, alphas = {:?}", r.epsilon, r.alphas);
    println!("a1 integrals = {:?}", r.a1.integrals);
    println!("a2 window = ({:.6}, {:.6})", r.a2_window.0, r.a2_window.1);
    println!("verdict: {:?}", r.verdict.ensured);

    let driver = r.driver(r.a2_midpoint());
    let d = realize_diagram(
        &Family::cubic("a3", "a2", "a1"),
        &driver,
        0.5,
        &TwoParamConfig::default(),
    )?;
    println!("λ0 = 0.5: expected {:?}; {}", d.expected, d.report.notes.join("; "));
    Ok(())
}
