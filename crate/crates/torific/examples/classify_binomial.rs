//! Classify the binomial family over {0, ..., 4} and print its model data.

use torific::reduce::{binomial, binomial_equiv};
use torific::{classify, ClassifyOptions};

fn main() -> torific::Result<()> {
    let fam = binomial(4)?;
    let cls = classify(&fam, &ClassifyOptions::default())?;
    assert!(cls.toric);
    assert!((cls.c - 0.25).abs() < 1e-9); // model constant c = 1/n
    let (p, _witness) = binomial_equiv(&fam)?.expect("constant curvature");
    assert_eq!(p, 4);

    let phi = cls.phi.expect("toric classifications carry a model map");
    println!(
        "binomial(4): {} with c = {}, phi(x) = {}*x + {}",
        cls.form.tag(),
        cls.c,
        phi.alpha,
        phi.beta
    );
    Ok(())
}
