//! Arithmetic in the cord ring, a framing change and elimination of a
//! generator.

use cord_algebra::ring::{
    framing_transform, AlgebraElement, Generator, GeneratorTwist, Monomial, Presentation,
};
use cord_algebra::simplify::simplify_with_log;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x: AlgebraElement = "1 - u + l u.a.u^-1".parse()?;
    let y: AlgebraElement = "a.b - l^-1".parse()?;
    println!("x     = {x}");
    println!("y     = {y}");
    println!("x + y = {}", &x + &y);
    println!("x y   = {}", &x * &y);
    println!("y x   = {}", &y * &x);
    let b = Generator::new("b");
    println!("y[b := u a] = {}", y.substitute(&b, &"u.a".parse()?)?);

    let p = Presentation::new(
        vec![Generator::new("a"), Generator::new("b")],
        vec![
            "-a + u.b.l^-1 u^-2".parse()?,
            "1 - u - u.a + u.b.u^-1.a.u^-1".parse()?,
        ],
    )?;
    let twists = [GeneratorTwist::new(
        "a",
        Monomial::mu_pow(-1),
        Monomial::ONE,
    )];
    let q = framing_transform(&p, 3, &twists);
    println!("\nreframed by lk = 3:\n{q}");
    let (s, log) = simplify_with_log(&q);
    for e in &log {
        println!("eliminate {} = {}", e.generator, e.image);
    }
    print!("{s}");
    Ok(())
}
