//! Expression trees over `x` and `y`, their parser, and jet evaluation.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' ['-'] integer)?
//! atom  := number | 'x' | 'y' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func  := sin | cos | exp | log | atan | arctan
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::jet::ScalarJet;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    X,
    Y,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Atan(Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    /// Evaluates the second-order jet of the expression at `(x, y)`.
    pub fn jet(&self, x: f64, y: f64) -> ScalarJet {
        self.jet_with(ScalarJet::var_x(x), ScalarJet::var_y(y))
    }

    /// Evaluates with arbitrary input jets for the two variables.
    pub fn jet_with(&self, x: ScalarJet, y: ScalarJet) -> ScalarJet {
        match self {
            Expr::Const(c) => ScalarJet::constant(*c),
            Expr::X => x,
            Expr::Y => y,
            Expr::Add(a, b) => a.jet_with(x, y) + b.jet_with(x, y),
            Expr::Sub(a, b) => a.jet_with(x, y) - b.jet_with(x, y),
            Expr::Mul(a, b) => a.jet_with(x, y) * b.jet_with(x, y),
            Expr::Div(a, b) => a.jet_with(x, y) / b.jet_with(x, y),
            Expr::Neg(a) => -a.jet_with(x, y),
            Expr::Pow(a, n) => a.jet_with(x, y).powi(*n),
            Expr::Sin(a) => a.jet_with(x, y).sin(),
            Expr::Cos(a) => a.jet_with(x, y).cos(),
            Expr::Exp(a) => a.jet_with(x, y).exp(),
            Expr::Log(a) => a.jet_with(x, y).ln(),
            Expr::Atan(a) => a.jet_with(x, y).atan(),
        }
    }

    /// Plain value evaluation.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::X => x,
            Expr::Y => y,
            Expr::Add(a, b) => a.eval(x, y) + b.eval(x, y),
            Expr::Sub(a, b) => a.eval(x, y) - b.eval(x, y),
            Expr::Mul(a, b) => a.eval(x, y) * b.eval(x, y),
            Expr::Div(a, b) => a.eval(x, y) / b.eval(x, y),
            Expr::Neg(a) => -a.eval(x, y),
            Expr::Pow(a, n) => a.eval(x, y).powi(*n),
            Expr::Sin(a) => a.eval(x, y).sin(),
            Expr::Cos(a) => a.eval(x, y).cos(),
            Expr::Exp(a) => a.eval(x, y).exp(),
            Expr::Log(a) => {
                let v = a.eval(x, y);
                if v <= 0.0 {
                    f64::NAN
                } else {
                    v.ln()
                }
            }
            Expr::Atan(a) => a.eval(x, y).atan(),
        }
    }

    /// Replaces the variables by the given expressions.
    pub fn substitute(&self, sx: &Expr, sy: &Expr) -> Expr {
        let s = |e: &Expr| Box::new(e.substitute(sx, sy));
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::X => sx.clone(),
            Expr::Y => sy.clone(),
            Expr::Add(a, b) => Expr::Add(s(a), s(b)),
            Expr::Sub(a, b) => Expr::Sub(s(a), s(b)),
            Expr::Mul(a, b) => Expr::Mul(s(a), s(b)),
            Expr::Div(a, b) => Expr::Div(s(a), s(b)),
            Expr::Neg(a) => Expr::Neg(s(a)),
            Expr::Pow(a, n) => Expr::Pow(s(a), *n),
            Expr::Sin(a) => Expr::Sin(s(a)),
            Expr::Cos(a) => Expr::Cos(s(a)),
            Expr::Exp(a) => Expr::Exp(s(a)),
            Expr::Log(a) => Expr::Log(s(a)),
            Expr::Atan(a) => Expr::Atan(s(a)),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{:?}` prints the shortest representation that round-trips.
            Expr::Const(c) if *c < 0.0 => write!(f, "(-{:?})", -c),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::X => write!(f, "x"),
            Expr::Y => write!(f, "y"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, n) => write!(f, "({a}^{n})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Atan(a) => write!(f, "atan({a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat(b'-') {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::mul(lhs, self.unary()?);
            } else if self.eat(b'/') {
                lhs = Expr::div(lhs, self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("exponent must be an integer literal"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let n: i32 = digits
            .parse()
            .map_err(|_| self.err("exponent out of range"))?;
        Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
                match ident {
                    "x" => Ok(Expr::X),
                    "y" => Ok(Expr::Y),
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    "sin" | "cos" | "exp" | "log" | "atan" | "arctan" => {
                        if !self.eat(b'(') {
                            return Err(self.err("expected '(' after function name"));
                        }
                        let arg = Box::new(self.expr()?);
                        if !self.eat(b')') {
                            return Err(self.err("expected ')'"));
                        }
                        Ok(match ident {
                            "sin" => Expr::Sin(arg),
                            "cos" => Expr::Cos(arg),
                            "exp" => Expr::Exp(arg),
                            "log" => Expr::Log(arg),
                            _ => Expr::Atan(arg),
                        })
                    }
                    _ => {
                        self.pos = start;
                        Err(self.err(&format!("unknown identifier '{ident}'")))
                    }
                }
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let s = self.src;
        let digits = |p: &mut usize| {
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
        };
        digits(&mut self.pos);
        if self.pos < s.len() && s[self.pos] == b'.' {
            self.pos += 1;
            digits(&mut self.pos);
        }
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < s.len() && (s[self.pos] == b'+' || s[self.pos] == b'-') {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(&mut self.pos);
            if exp_start == self.pos {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&s[start..self.pos]).expect("ascii number");
        text.parse::<f64>().map(Expr::Const).map_err(|_| {
            self.pos = start;
            self.err("malformed number")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_precedence() {
        let e = Expr::parse("-x^2 + 3*y/2").unwrap();
        assert_eq!(e.eval(2.0, 4.0), -4.0 + 6.0);
        let e = Expr::parse("2^3").unwrap();
        assert_eq!(e.eval(0.0, 0.0), 8.0);
        let e = Expr::parse("x^-2").unwrap();
        assert_eq!(e.eval(2.0, 0.0), 0.25);
    }

    #[test]
    fn parses_functions_and_constants() {
        let e = Expr::parse("log(cos(x)/cos(y)) + arctan(1) - pi/4").unwrap();
        assert!(e.eval(0.0, 0.0).abs() < 1e-15);
        let e = Expr::parse("exp(1.5e-1 * x) * sin(y)").unwrap();
        assert!((e.eval(2.0, 0.5) - (0.3f64).exp() * 0.5f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "", "x +", "sin x", "foo(x)", "x ^ y", "(x", "x)", "2 $ 3", "x^1.5",
        ] {
            assert!(
                matches!(Expr::parse(bad), Err(Error::Parse { .. })),
                "{bad:?} accepted"
            );
        }
    }

    #[test]
    fn substitution_composes() {
        let e = Expr::parse("x*x - y").unwrap();
        let s = e.substitute(&Expr::parse("y + 1").unwrap(), &Expr::parse("2*x").unwrap());
        assert_eq!(s.eval(3.0, 2.0), 9.0 - 6.0);
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            Just(Expr::X),
            Just(Expr::Y),
            (-5.0f64..5.0).prop_map(Expr::Const),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
                (inner.clone(), -3i32..4).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
                inner.clone().prop_map(|a| Expr::Sin(Box::new(a))),
                inner.clone().prop_map(|a| Expr::Atan(Box::new(a))),
                inner.prop_map(|a| Expr::Neg(Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(e in arb_expr(), x in -1.0f64..1.0, y in -1.0f64..1.0) {
            let printed = e.to_string();
            let back = Expr::parse(&printed).unwrap();
            let (a, b) = (e.jet(x, y), back.jet(x, y));
            // Bit-identical when finite; both non-finite otherwise.
            prop_assert_eq!(a.is_finite(), b.is_finite());
            if a.is_finite() {
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn jet_value_matches_plain_evaluation(e in arb_expr(), x in -1.0f64..1.0, y in -1.0f64..1.0) {
            let j = e.jet(x, y);
            let v = e.eval(x, y);
            if j.is_finite() && v.is_finite() {
                prop_assert!((j.v - v).abs() <= 1e-12 * (1.0 + v.abs()));
            }
        }
    }
}
