//! Closed-form verdicts from coefficient bounds and the spectrum of a1.

use skewfork::criteria::{cubic_verdict, general_h_verdict, Bounds, HParams};
use skewfork::spectrum::SpectrumInterval;

fn main() -> skewfork::Result<()> {
    let bounds = Bounds::new(-1.0, 1.0, 1.0, 1.0);
    let sp = SpectrumInterval::exact(-0.9, 0.9);
    let probe = cubic_verdict(&bounds, &sp, (0.0, 0.0))?;
    println!("generalized-pitchfork window for a2: {:?}", probe.witnesses.window);
    for a2 in [(0.0, 0.0), (0.7, 1.2), (2.0, 2.5), (-0.5, 0.5)] {
        let v = cubic_verdict(&bounds, &sp, a2)?;
        println!("a2 in {a2:?}: ensured {:?}, precluded {:?}", v.ensured, v.precluded);
    }
    let h = HParams { rho0: 2.0, eps0: 0.05 };
    let v = general_h_verdict(&bounds, &sp, (0.7, 1.2), &h)?;
    println!("with a small higher-order term: ensured {:?}", v.ensured);
    Ok(())
}
