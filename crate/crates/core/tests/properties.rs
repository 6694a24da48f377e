use std::sync::OnceLock;

use hsums::algebra::{algebraic_reduce, euler_pair, is_lyndon, product, SumPolynomial};
use hsums::asymptotics::{asym_eval, li_kernel, series_from_kernel, AsymptoticSeries, Branch, ContinuationConfig, Continuator};
use hsums::expr::{eval_rational, parse, Env};
use hsums::num::{complex_abs, Precision};
use hsums::specfun::SpecFun;
use hsums::sums::{eval_exact, eval_exact_upto, IndexVector};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

/// Index vectors of weight at most `max_w`.
fn vector(max_w: u32) -> impl Strategy<Value = IndexVector> {
    prop::collection::vec((1..=max_w as i32, any::<bool>()), 1..=max_w as usize).prop_map(move |raw| {
        let mut left = max_w as i32;
        let mut out = Vec::new();
        for (a, neg) in raw {
            if a > left {
                break;
            }
            left -= a;
            out.push(if neg { -a } else { a });
        }
        if out.is_empty() {
            out.push(1);
        }
        IndexVector::new(out).expect("nonzero entries")
    })
}

fn pair() -> impl Strategy<Value = (IndexVector, IndexVector)> {
    vector(5).prop_flat_map(|u| {
        let rest = 6 - u.weight();
        (Just(u), vector(rest.max(1)))
    })
}

fn eval_poly(p: &SumPolynomial, n: u32) -> Rational {
    p.eval_exact(n).expect("n >= 1")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn one_step_recursion(v in vector(6), n in 2i64..40) {
        let (b, tail) = (v.head(), v.tail());
        let inner = match &tail {
            Some(t) => eval_exact(t, n).unwrap().into_rational(),
            None => Rational::from(1),
        };
        let sign = if b < 0 && n % 2 == 1 { -1 } else { 1 };
        let step = Rational::from((sign, rug::Integer::from(n).pow(b.unsigned_abs())));
        let diff = eval_exact(&v, n).unwrap().into_rational() - eval_exact(&v, n - 1).unwrap().into_rational();
        prop_assert_eq!(diff, step * inner);
    }

    #[test]
    fn table_and_single_values_agree(v in vector(6), n in 1u32..25) {
        let table = eval_exact_upto(&v, n);
        let single = eval_exact(&v, i64::from(n)).unwrap().into_rational();
        prop_assert_eq!(&table[n as usize], &single);
    }

    #[test]
    fn index_vectors_round_trip(v in vector(6)) {
        let back: IndexVector = v.to_string().parse().unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn product_is_pointwise_exact((u, v) in pair()) {
        let p = product(&u, &v);
        let (su, sv) = (eval_exact_upto(&u, 30), eval_exact_upto(&v, 30));
        let sp = p.eval_exact_upto(30);
        for n in 1..=30 {
            prop_assert_eq!(&sp[n], &Rational::from(&su[n] * &sv[n]), "N = {}", n);
        }
    }

    #[test]
    fn product_is_homogeneous((u, v) in pair()) {
        let p = product(&u, &v);
        let w: Vec<u32> = p.weights().into_iter().collect();
        prop_assert_eq!(w, vec![u.weight() + v.weight()]);
    }

    #[test]
    fn printed_polynomials_parse_back((u, v) in pair(), n in 1i64..12) {
        let p = product(&u, &v);
        let e = parse(&p.to_string()).unwrap();
        let again = parse(&e.to_string()).unwrap();
        prop_assert_eq!(e.to_string(), again.to_string());
        let got = eval_rational(&e, &Env::at_n(n)).unwrap();
        prop_assert_eq!(got, Some(eval_poly(&p, n as u32)));
    }

    #[test]
    fn reduction_is_exact_and_lyndon(v in vector(6), n in 1u32..15) {
        let p = algebraic_reduce(&v);
        for f in p.factors() {
            prop_assert!(is_lyndon(f.entries()), "{} is not basic", f);
        }
        prop_assert_eq!(eval_poly(&p, n), eval_exact(&v, i64::from(n)).unwrap().into_rational());
        if is_lyndon(v.entries()) {
            prop_assert_eq!(p, SumPolynomial::single(v));
        }
    }

    #[test]
    fn euler_relation(a in -5i32..=5, b in -5i32..=5, n in 1i64..=20) {
        prop_assume!(a != 0 && b != 0);
        prop_assert!(euler_pair(a, b, n).unwrap().holds);
    }
}

fn li5_series() -> &'static AsymptoticSeries {
    static S: OnceLock<AsymptoticSeries> = OnceLock::new();
    S.get_or_init(|| series_from_kernel(&li_kernel(5)).unwrap())
}

fn engine() -> &'static Continuator {
    static C: OnceLock<Continuator> = OnceLock::new();
    C.get_or_init(|| Continuator::new(ContinuationConfig::new(Precision::digits(30), Branch::Even)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dropping_the_last_term_costs_at_most_that_term(r in 25.0f64..400.0, phase in -1.2f64..1.2) {
        let s = li5_series();
        let z = Complex::with_val(200, (r * phase.cos(), r * phase.sin()));
        let a = asym_eval(s, &z, 19).unwrap();
        let b = asym_eval(s, &z, 18).unwrap();
        let d = complex_abs(&Complex::with_val(200, &a.value - &b.value));
        let c19 = Float::with_val(200, s.coeff(19).unwrap()).abs();
        let term = c19 / Float::with_val(200, z.abs_ref()).pow(19u32);
        prop_assert!(d <= term * 1.000001f64);
    }

    #[test]
    fn continuation_does_not_depend_on_the_shift(
        re in 0.1f64..12.0,
        im in -6.0f64..6.0,
        which in 0usize..4,
    ) {
        let vs = [[2, 1, 1, 1, 1].as_slice(), &[1, 1, 1, 1, 2], &[3], &[2, 1]];
        let v = IndexVector::new(vs[which].to_vec()).unwrap();
        let c = engine();
        let z = c.complex(re, im);
        let a = c.value(&v, &z).unwrap();
        let b = c.value_shifted(&v, &z, 1).unwrap();
        let d = complex_abs(&Complex::with_val(c.bits(), &a - &b));
        prop_assert!(d < 1e-20, "S[{}]({}{:+}i): {}", v, re, im, d.to_f64());
    }

    #[test]
    fn doubling_the_precision_agrees(k in 2u32..=6, p in -9i64..=9) {
        let x = Rational::from((p, 10));
        let lo = SpecFun::shared(Precision::digits(30));
        let hi = SpecFun::shared(Precision::digits(60));
        let a = lo.polylog(k, &Float::with_val(lo.bits(), &x)).unwrap();
        let b = hi.polylog(k, &Float::with_val(hi.bits(), &x)).unwrap();
        let d = Float::with_val(hi.bits(), &b - &a).abs();
        prop_assert!(d < 1e-25, "Li{}({}): {}", k, x, d.to_f64());
    }
}
