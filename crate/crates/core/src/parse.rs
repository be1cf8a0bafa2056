//! Text input for commutative polynomials.
//!
//! ```text
//! expr   := ['+' | '-'] term (('+' | '-') term)*
//! term   := power (('*' | '/') power)*
//! power  := atom ['^' integer]
//! atom   := integer | 'hbar' | 'ħ' | 'I' | name | '(' expr ')'
//! ```
//!
//! Names are letters, digits and `_`, starting with a letter. Division is
//! only by nonzero constants. `I` is the imaginary unit. Whitespace is
//! ignored.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_traits::{One, Signed, Zero};

use crate::algebra::LieAlgebraSpec;
use crate::error::{Error, Result};
use crate::scalar::{format_rational, GaussianRational, HbarScalar, Rational};
use crate::std_star::AbelianPhasePoly;
use crate::sym::{Monomial, SymTensor};

/// Exponent vector over the variable list → coefficient.
pub type Poly = BTreeMap<Vec<u32>, HbarScalar>;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(num_bigint::BigInt),
    Name(String),
    Op(char),
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Int(s.parse().expect("digits")));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Name(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' at offset {i}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [String],
}

fn poly_add(a: &mut Poly, b: &Poly, sign: bool) {
    for (e, c) in b {
        let slot = a.entry(e.clone()).or_default();
        if sign {
            *slot += c;
        } else {
            *slot -= c;
        }
        if slot.is_zero() {
            a.remove(e);
        }
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let slot = out.entry(e.clone()).or_default();
            *slot += &(ca * cb);
            if slot.is_zero() {
                out.remove(&e);
            }
        }
    }
    out
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn constant(&self, c: HbarScalar) -> Poly {
        let mut p = Poly::new();
        if !c.is_zero() {
            p.insert(vec![0; self.vars.len()], c);
        }
        p
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut sign = !self.eat('-');
        if sign {
            self.eat('+');
        }
        let mut acc = Poly::new();
        loop {
            let t = self.term()?;
            poly_add(&mut acc, &t, sign);
            if self.eat('+') {
                sign = true;
            } else if self.eat('-') {
                sign = false;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = poly_mul(&acc, &self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                let zero = vec![0; self.vars.len()];
                let c = match (d.len(), d.get(&zero)) {
                    (1, Some(c)) if c.is_constant() => c.coeff(0),
                    (0, _) => return Err(Error::DivisionByZero),
                    _ => return Err(Error::Parse("division is only by nonzero constants".into())),
                };
                let inv = c.inv()?;
                acc = acc.into_iter().map(|(e, x)| (e, x.scale(&inv))).collect();
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let k: u32 = match self.tokens.get(self.pos) {
            Some(Token::Int(k)) => {
                self.pos += 1;
                u32::try_from(k).map_err(|_| Error::Parse(format!("exponent {k} too large")))?
            }
            _ => return Err(Error::Parse("expected an integer exponent after '^'".into())),
        };
        let mut out = self.constant(HbarScalar::one());
        for _ in 0..k {
            out = poly_mul(&out, &base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Poly> {
        let tok = self.peek().cloned().ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Token::Int(k) => Ok(self.constant(HbarScalar::rational(Rational::from_integer(k)))),
            Token::Op('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Token::Op(c) => Err(Error::Parse(format!("unexpected '{c}'"))),
            Token::Name(name) => {
                if let Some(k) = self.vars.iter().position(|v| *v == name) {
                    let mut e = vec![0; self.vars.len()];
                    e[k] = 1;
                    return Ok(Poly::from([(e, HbarScalar::one())]));
                }
                match name.as_str() {
                    "hbar" | "ħ" => Ok(self.constant(HbarScalar::hbar())),
                    "I" => Ok(self.constant(HbarScalar::constant(GaussianRational::i()))),
                    _ => Err(Error::Parse(format!("unknown name '{name}'"))),
                }
            }
        }
    }
}

/// Parses `input` as a polynomial in `vars` with coefficients in `Q(i)[hbar]`.
pub fn parse_poly(input: &str, vars: &[String]) -> Result<Poly> {
    let mut p = Parser { tokens: tokenize(input)?, pos: 0, vars };
    if p.tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input after token {}", p.pos)));
    }
    Ok(out)
}

/// Parses a symmetric tensor written in the basis names of `spec`.
pub fn parse_sym_tensor(spec: &LieAlgebraSpec, input: &str) -> Result<SymTensor> {
    let poly = parse_poly(input, spec.names())?;
    Ok(SymTensor::from_terms(spec.dim(), poly.into_iter().map(|(e, c)| (Monomial(e), c))))
}

/// Phase-space variable names on `T*R^n`: `q, p` for `n = 1`, else
/// `q1..qn, p1..pn`.
pub fn phase_space_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["q".into(), "p".into()]
    } else {
        (1..=n).map(|i| format!("q{i}")).chain((1..=n).map(|i| format!("p{i}"))).collect()
    }
}

/// Parses a polynomial on `T*R^n`.
pub fn parse_abelian(n: usize, input: &str) -> Result<AbelianPhasePoly> {
    let poly = parse_poly(input, &phase_space_names(n))?;
    let mut out = AbelianPhasePoly::zero(n);
    for (e, c) in poly {
        out.add_term(Monomial(e[..n].to_vec()), Monomial(e[n..].to_vec()), &c);
    }
    Ok(out)
}

fn format_gaussian(c: &GaussianRational) -> String {
    let (re, im) = (&c.re, &c.im);
    let im_part = |x: &Rational| if x.is_one() { "I".to_string() } else { format!("{}*I", format_rational(x)) };
    match (re.is_zero(), im.is_zero()) {
        (_, true) => format_rational(re),
        (true, false) => im_part(im),
        (false, false) => {
            let sign = if *im < Rational::zero() { "-" } else { "+" };
            format!("({}{sign}{})", format_rational(re), im_part(&im.abs()))
        }
    }
}

/// Writes `poly` back in the input language.
pub fn format_poly(poly: &Poly, vars: &[String]) -> String {
    if poly.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (e, c) in poly {
        for (j, cj) in c.coeffs().iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let negative = if cj.re.is_zero() { cj.im.is_negative() } else { cj.im.is_zero() && cj.re.is_negative() };
            let cj = if negative { -cj } else { cj.clone() };
            let mut factors = Vec::new();
            if !cj.is_one() || (j == 0 && e.iter().all(|&x| x == 0)) {
                factors.push(format_gaussian(&cj));
            }
            match j {
                0 => {}
                1 => factors.push("hbar".into()),
                _ => factors.push(format!("hbar^{j}")),
            }
            for (v, &k) in vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{k}")),
                }
            }
            match (out.is_empty(), negative) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
    }
    out
}

pub fn format_sym_tensor(spec: &LieAlgebraSpec, p: &SymTensor) -> String {
    let poly: Poly = p.terms().iter().map(|(m, c)| (m.0.clone(), c.clone())).collect();
    format_poly(&poly, spec.names())
}

pub fn format_abelian(f: &AbelianPhasePoly) -> String {
    let poly: Poly =
        f.terms().iter().map(|((q, p), c)| (q.0.iter().chain(&p.0).copied().collect(), c.clone())).collect();
    format_poly(&poly, &phase_space_names(f.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::scalar::rat;

    #[test]
    fn heisenberg_expression() {
        let h = catalog("heisenberg").unwrap();
        let p = parse_sym_tensor(&h, "q^2*p - 3/2*hbar*c + (1+I)").unwrap();
        let mut expected = SymTensor::zero(3);
        expected.add_term(Monomial(vec![2, 1, 0]), &HbarScalar::one());
        expected.add_term(Monomial(vec![0, 0, 1]), &HbarScalar::monomial(GaussianRational::real(rat(-3, 2)), 1));
        expected.add_term(Monomial(vec![0, 0, 0]), &HbarScalar::constant(GaussianRational::new(rat(1, 1), rat(1, 1))));
        assert_eq!(p, expected);
    }

    #[test]
    fn precedence_and_powers() {
        let vars = vec!["x".to_string()];
        assert_eq!(parse_poly("(x+1)^2", &vars).unwrap(), parse_poly("x^2 + 2*x + 1", &vars).unwrap());
        assert_eq!(parse_poly("-x^2", &vars).unwrap(), parse_poly("-(x*x)", &vars).unwrap());
        assert_eq!(parse_poly("x/2/3", &vars).unwrap(), parse_poly("x/6", &vars).unwrap());
        assert_eq!(parse_poly("x - x", &vars).unwrap(), Poly::new());
        assert_eq!(parse_poly("x*I^2", &vars).unwrap(), parse_poly("-x", &vars).unwrap());
    }

    #[test]
    fn errors() {
        let vars = vec!["x".to_string()];
        for bad in ["", "x +", "(x", "y", "x/x", "x/0", "x^", "x $ 2", "x)"] {
            assert!(parse_poly(bad, &vars).is_err(), "{bad}");
        }
    }

    #[test]
    fn format_roundtrip() {
        let s = catalog("sl2").unwrap();
        for text in ["h^2*e - 1/3*hbar^2*f + (2-I)", "0", "I*hbar*e*f", "-5/7"] {
            let p = parse_sym_tensor(&s, text).unwrap();
            assert_eq!(parse_sym_tensor(&s, &format_sym_tensor(&s, &p)).unwrap(), p, "{text}");
        }
        let f = parse_abelian(2, "q1*p2^2 - hbar*p1").unwrap();
        assert_eq!(parse_abelian(2, &format_abelian(&f)).unwrap(), f);
    }
}
