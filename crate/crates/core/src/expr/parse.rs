use rug::ops::Pow;
use rug::{Integer, Rational};

use super::ast::{primitive_for, Affine, Denominator, Expr, MellinAtom};
use crate::error::{Error, Result};
use crate::specfun::{Arg, ConstantName, HplWord, Primitive};
use crate::sums::IndexVector;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Punct(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    /// 1-based character position.
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax { pos, msg: msg.into() })
}

fn lex(input: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            if text.matches('.').count() > 1 {
                return err(pos, format!("malformed number `{text}`"));
            }
            out.push(Token { tok: Tok::Num(text), pos });
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), pos });
        } else if "+-*/^()[],".contains(c) {
            out.push(Token { tok: Tok::Punct(c), pos });
            i += 1;
        } else {
            return err(pos, format!("unexpected character `{c}`"));
        }
    }
    out.push(Token { tok: Tok::End, pos: chars.len() + 1 });
    Ok(out)
}

fn decimal(text: &str, pos: usize) -> Result<Rational> {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let digits = format!("{int}{frac}");
    let Ok(num) = digits.parse::<Integer>() else {
        return err(pos, format!("malformed number `{text}`"));
    };
    Ok(Rational::from((num, Integer::from(10).pow(frac.len() as u32))))
}

/// `a*N + b` if `e` has that shape.
pub(crate) fn to_affine(e: &Expr) -> Option<Affine> {
    let scale = |a: Affine, s: &Rational| Affine { a: Rational::from(&a.a * s), b: Rational::from(&a.b * s) };
    Some(match e {
        Expr::N => Affine::n(),
        Expr::Num(q) => Affine::constant(q.clone()),
        Expr::Neg(x) => scale(to_affine(x)?, &Rational::from(-1)),
        Expr::Add(x, y) | Expr::Sub(x, y) => {
            let (p, q) = (to_affine(x)?, to_affine(y)?);
            if matches!(e, Expr::Add(..)) {
                Affine { a: p.a + q.a, b: p.b + q.b }
            } else {
                Affine { a: p.a - q.a, b: p.b - q.b }
            }
        }
        Expr::Mul(x, y) => {
            let (p, q) = (to_affine(x)?, to_affine(y)?);
            if p.is_constant() {
                scale(q, &p.b)
            } else if q.is_constant() {
                scale(p, &q.b)
            } else {
                return None;
            }
        }
        Expr::Div(x, y) => {
            let q = to_affine(y)?;
            if !q.is_constant() || q.b == 0 {
                return None;
            }
            scale(to_affine(x)?, &q.b.recip())
        }
        _ => return None,
    })
}

fn denominator_of(e: &Expr) -> Denominator {
    let text: String = e.to_string().chars().filter(|c| !c.is_whitespace()).collect();
    match text.as_str() {
        "x-1" => Denominator::XMinusOne,
        "x+1" => Denominator::XPlusOne,
        "1+x" => Denominator::OnePlusX,
        "1-x" => Denominator::OneMinusX,
        "x^2-1" => Denominator::XSquaredMinusOne,
        _ => Denominator::None,
    }
}

fn check_primitive(p: &Primitive) -> std::result::Result<(), String> {
    match p {
        Primitive::Li { k, arg } if !(1..=6).contains(k) || (*arg == Arg::XSquared && *k < 2) => {
            Err(format!("Li{k} is not supported"))
        }
        Primitive::Nielsen { p, n, .. } if *p < 1 || *n < 1 || p + n > 6 => Err(format!("S{p}{n} is not supported")),
        Primitive::Nielsen { arg: Arg::XSquared, .. } => Err("S_{p,n}(x^2) is not supported".into()),
        Primitive::Aux { i, .. } if !(1..=3).contains(i) => Err(format!("A{i} is not defined")),
        Primitive::Aux { arg: Arg::XSquared, .. } => Err("A_i(x^2) is not supported".into()),
        _ => Ok(()),
    }
}

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.describe();
            err(self.pos(), format!("expected `{c}`, found {found}"))
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Num(s) | Tok::Ident(s) => format!("`{s}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = lhs + self.term()?;
            } else if self.eat('-') {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = lhs * self.unary()?;
            } else if *self.peek() == Tok::Punct('/') {
                let pos = self.bump().pos;
                let rhs = self.unary()?;
                lhs = match (lhs, rhs) {
                    (Expr::Num(_), Expr::Num(d)) if d == 0 => return err(pos, "division by zero"),
                    (Expr::Num(n), Expr::Num(d)) => Expr::Num(n / d),
                    (l, r) => l / r,
                };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(match self.unary()? {
                Expr::Num(q) => Expr::Num(-q),
                e => Expr::Neg(Box::new(e)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let exponent = match self.peek().clone() {
            Tok::Num(text) => {
                self.bump();
                Affine::constant(decimal(&text, pos)?)
            }
            Tok::Ident(name) if name == "N" => {
                self.bump();
                Affine::n()
            }
            Tok::Punct('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                to_affine(&e).ok_or(Error::Syntax { pos, msg: "exponent must be an integer or affine in N".into() })?
            }
            _ => return err(pos, format!("expected exponent, found {}", self.describe())),
        };
        if exponent.is_constant() {
            if *exponent.b.denom() != 1 || exponent.b < 0 {
                return err(pos, "exponent must be a non-negative integer");
            }
            let k = exponent.b.numer().to_u32().ok_or(Error::Syntax { pos, msg: "exponent too large".into() })?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        if base != Expr::Num(Rational::from(-1)) {
            return err(pos, "only (-1) may be raised to a power depending on N");
        }
        Ok(Expr::Parity(exponent))
    }

    fn argument(&mut self) -> Result<Affine> {
        self.expect('(')?;
        let pos = self.pos();
        let e = self.expr()?;
        self.expect(')')?;
        to_affine(&e).ok_or(Error::Syntax { pos, msg: "argument must be affine in N".into() })
    }

    fn signed_ints(&mut self) -> Result<Vec<(i64, usize)>> {
        self.expect('[')?;
        let mut out = Vec::new();
        loop {
            let pos = self.pos();
            let neg = if self.eat('-') {
                true
            } else {
                self.eat('+');
                false
            };
            let tok = self.bump();
            let Tok::Num(text) = tok.tok else {
                return err(tok.pos, "expected an integer index");
            };
            if text.contains('.') {
                return err(tok.pos, format!("index `{text}` is not an integer"));
            }
            let v: i64 = text.parse().map_err(|_| Error::Syntax { pos: tok.pos, msg: "index too large".into() })?;
            out.push((if neg { -v } else { v }, pos));
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.bump();
        match tok.tok {
            Tok::Num(text) => Ok(Expr::Num(decimal(&text, tok.pos)?)),
            Tok::Punct('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => self.named(&name, tok.pos),
            Tok::End => err(tok.pos, "unexpected end of input"),
            Tok::Punct(c) => err(tok.pos, format!("unexpected `{c}`")),
        }
    }

    fn named(&mut self, name: &str, pos: usize) -> Result<Expr> {
        let bracket = *self.peek() == Tok::Punct('[');
        match name {
            "N" => return Ok(Expr::N),
            "x" => return Ok(Expr::X),
            "S" if bracket => return self.sum(),
            "H" if bracket => return self.hpl(pos),
            "M" if bracket => return self.mellin(),
            "Int" if bracket => {
                self.bump();
                let k = self.expr()?;
                self.expect(']')?;
                return Ok(Expr::Int(Box::new(k)));
            }
            "zeta" => {
                self.expect('(')?;
                let at = self.pos();
                let tok = self.bump();
                let Tok::Num(k) = tok.tok else {
                    return err(at, "zeta needs an integer argument");
                };
                self.expect(')')?;
                let k: u32 = k.parse().map_err(|_| Error::Syntax { pos: at, msg: format!("bad zeta argument `{k}`") })?;
                return ConstantName::Zeta(k)
                    .validate()
                    .map(Expr::Const)
                    .map_err(|_| Error::Syntax { pos, msg: format!("zeta({k}) is not a supported constant") });
            }
            _ => {}
        }
        if *self.peek() != Tok::Punct('(') {
            return match name.parse::<ConstantName>() {
                Ok(c) => Ok(Expr::Const(c)),
                Err(_) => err(pos, format!("unknown name `{name}`")),
            };
        }
        self.bump();
        let arg_pos = self.pos();
        let arg = self.expr()?;
        self.expect(')')?;
        if let Expr::Num(q) = &arg {
            if name == "ln" && *q == 2 {
                return Ok(Expr::Const(ConstantName::Ln2));
            }
            if *q == Rational::from((1, 2)) {
                if let Some(Primitive::Li { k, .. }) = primitive_for(name, "x") {
                    return ConstantName::LiHalf(k)
                        .validate()
                        .map(Expr::Const)
                        .map_err(|_| Error::Syntax { pos, msg: format!("{name}(1/2) is not supported") });
                }
            }
            let Some(p) = primitive_for(name, "x") else {
                return err(pos, format!("unknown function `{name}`"));
            };
            check_primitive(&p).or_else(|m| err(pos, m))?;
            if q.clone().abs() > 1 {
                return err(arg_pos, format!("{name} needs an argument in [-1, 1]"));
            }
            return Ok(Expr::FunAt(p, q.clone()));
        }
        let text: String = arg.to_string().chars().filter(|c| !c.is_whitespace()).collect();
        match primitive_for(name, &text) {
            Some(p) => {
                check_primitive(&p).or_else(|m| err(pos, m))?;
                Ok(Expr::Fun(p))
            }
            None if primitive_for(name, "x").is_some() || name == "ln" => {
                err(arg_pos, format!("unsupported argument `{text}` for {name}"))
            }
            None => err(pos, format!("unknown function `{name}`")),
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let entries = self.signed_ints()?;
        let mut v = Vec::with_capacity(entries.len());
        for (a, pos) in entries {
            if a == 0 {
                return err(pos, "zero index");
            }
            v.push(i32::try_from(a).map_err(|_| Error::Syntax { pos, msg: "index too large".into() })?);
        }
        let v = IndexVector::new(v).expect("indices checked");
        Ok(Expr::Sum(v, self.argument()?))
    }

    fn hpl(&mut self, pos: usize) -> Result<Expr> {
        let entries = self.signed_ints()?;
        let mut letters = Vec::with_capacity(entries.len());
        for (a, p) in entries {
            if !(-1..=1).contains(&a) {
                return err(p, "HPL letters must be 0, 1 or -1");
            }
            letters.push(a as i8);
        }
        let word = HplWord::new(letters).or_else(|e| err(pos, e.to_string()))?;
        self.expect('(')?;
        let arg_pos = self.pos();
        let arg = self.expr()?;
        self.expect(')')?;
        if let Expr::Num(q) = arg {
            if !(0..=1).contains(&q) {
                return err(arg_pos, "H needs an argument in [0, 1]");
            }
            return Ok(Expr::FunAt(Primitive::Hpl { word, arg: Arg::X }, q));
        }
        let text: String = arg.to_string().chars().filter(|c| !c.is_whitespace()).collect();
        let arg = match text.as_str() {
            "x" => Arg::X,
            "-x" => Arg::MinusX,
            "1-x" => Arg::OneMinusX,
            _ => return err(arg_pos, format!("unsupported argument `{text}` for H")),
        };
        Ok(Expr::Fun(Primitive::Hpl { word, arg }))
    }

    fn mellin(&mut self) -> Result<Expr> {
        self.expect('[')?;
        let content = self.expr()?;
        self.expect(']')?;
        let plus = *self.peek() == Tok::Punct('+') && *self.peek_at(1) == Tok::Punct('(');
        if plus {
            self.bump();
        }
        let arg = self.argument()?;
        let (kernel, denominator) = match content {
            Expr::Div(k, d) if denominator_of(&d) != Denominator::None => (*k, denominator_of(&d)),
            other => (other, Denominator::None),
        };
        let atom = MellinAtom { kernel, denominator, plus, arg: arg.clone() };
        let m = Expr::Mellin(Box::new(atom));
        if *self.peek() == Tok::Ident("alt".into()) {
            self.bump();
            return Ok(Expr::Parity(arg) * m);
        }
        Ok(m)
    }
}

/// Parses an expression of the catalog grammar.
///
/// ```
/// use hsums::expr::parse;
/// let e = parse("1/2*zeta(3) - S[3](4)").unwrap();
/// assert_eq!(e.to_string(), "1/2*zeta(3) - S[3](4)");
/// let bad = parse("S[-3,0,1](5)").unwrap_err();
/// assert_eq!(bad.to_string(), "zero index at position 6");
/// ```
pub fn parse(input: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(input)?, i: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        let found = p.describe();
        return err(p.pos(), format!("unexpected {found}"));
    }
    Ok(e)
}

impl std::str::FromStr for Expr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sums::iv;

    fn round_trip(s: &str) {
        let e = parse(s).unwrap_or_else(|e| panic!("{s}: {e}"));
        assert_eq!(e.to_string(), s);
        assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn sums_and_arithmetic() {
        assert_eq!(parse("S[2,1](10)").unwrap(), Expr::Sum(iv(&[2, 1]), Affine::constant(10.into())));
        round_trip("1/2*zeta(3) - S[3](4)");
        round_trip("S[-3,1,-2](N) + 2*S[1](N)^2*zeta(2)");
        round_trip("(-1)^N*M[Li5(-x)/(1+x)](N)");
        round_trip("(-1)^(N+1)*S[-2](N)");
        round_trip("M[S12(x)/(x-1)]+(N) - M[ln(x)*Li2(-x)/(x+1)](N)");
        round_trip("M[Li2(x^2)/(x^2-1)]+((N-1)/2)");
        round_trip("Int[Li2(x)^2/x]");
        round_trip("S22(1) - 1/10*zeta(2)^2");
        round_trip("H[0,-1,0,1,1](x)");
        round_trip("-M[1](N)");
    }

    #[test]
    fn constants() {
        assert_eq!(parse("zeta3").unwrap(), Expr::Const(ConstantName::Zeta(3)));
        assert_eq!(parse("ln(2)").unwrap(), Expr::Const(ConstantName::Ln2));
        assert_eq!(parse("Li4(1/2)").unwrap(), Expr::Const(ConstantName::LiHalf(4)));
        assert_eq!(parse("s6").unwrap(), Expr::Const(ConstantName::S6));
        assert_eq!(parse("0.25").unwrap(), Expr::num(1, 4));
    }

    #[test]
    fn mellin_atoms_are_split() {
        let e = parse("M[Li2(x)/(x-1)]+(N)").unwrap();
        let Expr::Mellin(m) = e else { panic!() };
        assert!(m.plus);
        assert_eq!(m.denominator, Denominator::XMinusOne);
        assert_eq!(m.kernel, Expr::Fun(Primitive::Li { k: 2, arg: Arg::X }));
        let alt = parse("M[Li2(x)/(x+1)](N) alt").unwrap();
        assert!(matches!(alt, Expr::Mul(ref p, _) if matches!(**p, Expr::Parity(_))));
    }

    #[test]
    fn errors_carry_positions() {
        let e = |s: &str| parse(s).unwrap_err().to_string();
        assert_eq!(e("S[-3,0,1](5)"), "zero index at position 6");
        assert_eq!(e("foo(x) + 1"), "unknown function `foo` at position 1");
        assert_eq!(e("1/0"), "division by zero at position 2");
        assert_eq!(e("1.2.3"), "malformed number `1.2.3` at position 1");
        assert_eq!(e("S[1](N"), "expected `)`, found end of input at position 7");
        assert_eq!(e("zeta(9)"), "zeta(9) is not a supported constant at position 1");
        assert_eq!(e("Li2(2*x)"), "unsupported argument `2*x` for Li2 at position 5");
        assert_eq!(e("x^N"), "only (-1) may be raised to a power depending on N at position 3");
        assert!(parse("S[1](N) S[2](N)").is_err());
    }
}
