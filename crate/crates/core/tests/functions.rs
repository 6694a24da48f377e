//! Special functions and Mellin transforms against independent routes.

use hsums::expr::Evaluator;
use hsums::identities::basis_cumulative;
use hsums::mellin::atom;
use hsums::num::Precision;
use hsums::specfun::{HplWord, SpecFun};
use rug::{Float, Rational};

const POINTS: [(i32, i32); 3] = [(1, 4), (1, 2), (3, 4)];

fn at(ctx: &SpecFun, p: i32, q: i32) -> Float {
    Float::with_val(ctx.bits(), Rational::from((p, q)))
}

fn diff(a: &Float, b: &Float) -> f64 {
    Float::with_val(a.prec().max(b.prec()), a - b).abs().to_f64()
}

#[test]
fn words_with_nielsen_shape_match_nielsen() {
    let ctx = SpecFun::shared(Precision::digits(40));
    for (p, n) in [(1, 2), (2, 1), (1, 3), (2, 2), (3, 2), (1, 4)] {
        let w = HplWord::nielsen(p, n);
        for (a, b) in POINTS {
            let x = at(&ctx, a, b);
            let h = ctx.hpl(&w, &x).unwrap();
            let s = ctx.nielsen(p, n, &x).unwrap();
            assert!(diff(&h, &s) < 1e-30, "H[{w}] vs S{p}{n} at {a}/{b}");
        }
    }
    // H_{0,1,1} is S_{1,2} with the 1/(1-x) convention
    let w = HplWord::new(vec![0, 1, 1]).unwrap();
    let x = at(&ctx, 1, 2);
    assert!(diff(&ctx.hpl(&w, &x).unwrap(), &ctx.nielsen(1, 2, &x).unwrap()) < 1e-30);
}

#[test]
fn nielsen_series_and_integral_agree() {
    let ctx = SpecFun::shared(Precision::digits(40));
    for (p, n) in [(1, 2), (1, 3), (2, 2), (1, 4), (3, 2), (2, 3)] {
        for (a, b) in POINTS {
            for sign in [1, -1] {
                let x = at(&ctx, sign * a, b);
                let s = ctx.nielsen(p, n, &x).unwrap();
                let q = ctx.nielsen_by_quadrature(p, n, &x).unwrap();
                assert!(diff(&s, &q) < 1e-30, "S{p}{n}({}{a}/{b})", if sign < 0 { "-" } else { "" });
            }
        }
    }
}

#[test]
fn polylog_values_outside_the_tables() {
    // Li2(1/2) = pi^2/12 - ln^2(2)/2
    let ctx = SpecFun::shared(Precision::digits(50));
    let half = at(&ctx, 1, 2);
    let pi = Float::with_val(ctx.bits(), rug::float::Constant::Pi);
    let ln2 = Float::with_val(ctx.bits(), rug::float::Constant::Log2);
    let expected = Float::with_val(ctx.bits(), pi.square_ref()) / 12u32 - Float::with_val(ctx.bits(), ln2.square_ref()) / 2u32;
    assert!(diff(&ctx.polylog(2, &half).unwrap(), &expected) < 1e-45);
}

fn basis_atoms() -> Vec<String> {
    basis_cumulative(4).iter().map(|b| format!("M[({})/({})]+(N)", b.numerator, b.denominator)).collect()
}

#[test]
fn derivative_matches_central_difference() {
    let ev = Evaluator::new(Precision::digits(30));
    let bits = ev.bits();
    let h = Float::with_val(bits, 1e-12);
    for text in basis_atoms() {
        let a = atom(&text).unwrap();
        for n in [2, 5, 10] {
            let n = Float::with_val(bits, n);
            let d = ev.mellin().differentiate(&a, &n, 1).unwrap().value;
            let up = ev.mellin().eval(&a, &Float::with_val(bits, &n + &h)).unwrap().value;
            let down = ev.mellin().eval(&a, &Float::with_val(bits, &n - &h)).unwrap().value;
            let fd = (up - down) / Float::with_val(bits, &h * 2u32);
            assert!(diff(&d, &fd) < 1e-15, "{text} at {n}");
        }
    }
}

#[test]
fn recursion_reaches_the_direct_value() {
    let ev = Evaluator::new(Precision::digits(30));
    let bits = ev.bits();
    for text in basis_atoms() {
        let a = atom(&text).unwrap();
        let mut n = Float::with_val(bits, 1);
        let mut v = ev.mellin().eval(&a, &n).unwrap();
        for _ in 0..10 {
            v = ev.mellin().recursion_step(&a, &v, &n).unwrap();
            n += 1u32;
        }
        let direct = ev.mellin().eval(&a, &n).unwrap();
        assert!(diff(&v.value, &direct.value) < 1e-25, "{text}");
    }
}

#[test]
fn plus_prescription_splits_for_integrable_kernels() {
    let ev = Evaluator::new(Precision::digits(30));
    let bits = ev.bits();
    for kernel in ["Li2(x)/(x+1)", "S12(-x)/(1+x)", "Li3(x)^2"] {
        let plus = atom(&format!("M[{kernel}]+(N)")).unwrap();
        let plain = atom(&format!("M[{kernel}](N)")).unwrap();
        for n in [1, 4, 9] {
            let nf = Float::with_val(bits, n);
            let lhs = ev.mellin().eval(&plus, &nf).unwrap().value;
            let at_n = ev.mellin().eval(&plain, &nf).unwrap().value;
            let at_0 = ev.mellin().eval(&plain, &Float::new(bits)).unwrap().value;
            assert!(diff(&lhs, &Float::with_val(bits, at_n - at_0)) < 1e-25, "{kernel} at {n}");
        }
    }
}
