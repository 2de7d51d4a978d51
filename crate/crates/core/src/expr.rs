//! Text syntax for ring elements.
//!
//! ```text
//! sum     = product (("+" | "-") product)*
//! product = unary ("*" unary)*
//! unary   = "-" unary | power
//! power   = atom ("^" integer)?
//! atom    = integer | label | "Ch" "(" index ")" | "R" | "V" index | "U" index
//!         | "(" sum ")"
//! label   = factor ("." factor)*
//! factor  = "(" ("~"? index)+ ")"
//! ```
//!
//! Parentheses holding nothing but indices form a label factor, so `(2)`
//! is the one-index factor (the unit), not the integer two. Whitespace is
//! insignificant and positions in errors are 1-based character columns.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::hkn::HknPolynomial;
use crate::labels::NiceLabel;
use crate::lengths::IndexSubset;
use crate::moduli::Moduli;
use crate::nice_ring::{label_to_hkn, NiceElement, RingError};
use crate::perfect_ring::{psi, PerfectElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Nice,
    Perfect,
    Hkn,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("column {pos}: unexpected {found}, expected {expected}")]
    Unexpected {
        pos: usize,
        found: String,
        expected: &'static str,
    },
    #[error("column {pos}: index {index} out of range 1..={max}")]
    OutOfRange {
        pos: usize,
        index: usize,
        max: usize,
    },
    #[error("column {pos}: index {index} repeated within a label")]
    Repeated { pos: usize, index: usize },
    #[error("column {pos}: overlines are not allowed in perfect mode")]
    Overline { pos: usize },
    #[error("column {pos}: {name} is only available in hkn mode")]
    HknOnly { pos: usize, name: String },
    #[error("column {pos}: number {text} is too large")]
    TooLarge { pos: usize, text: String },
}

/// `(plus ~minus)` as written, before canonicalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorSyntax {
    pub plus: IndexSubset,
    pub minus: IndexSubset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Label(Vec<FactorSyntax>),
    Chern(usize),
    R,
    V(usize),
    U(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(s) => format!("number {s}"),
            Tok::Ident(s) => format!("name {s:?}"),
            Tok::Sym(c) => format!("{c:?}"),
            Tok::End => "end of input".to_string(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let pos = k + 1;
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            out.push((Tok::Num(chars[start..k].iter().collect()), pos));
        } else if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphabetic() {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().collect()), pos));
        } else if "()~.+-*^".contains(c) {
            out.push((Tok::Sym(c), pos));
            k += 1;
        } else {
            return Err(ParseError::Unexpected {
                pos,
                found: format!("{c:?}"),
                expected: "an expression",
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    mode: Mode,
    n: usize,
}

/// Parses `text` for a moduli space with `n` edges.
pub fn parse(text: &str, mode: Mode, n: usize) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    if toks.len() == 1 {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        toks,
        at: 0,
        mode,
        n,
    };
    let e = p.sum()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => Err(p.unexpected(t.clone(), "an operator or end of input")),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) {
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
    }

    fn unexpected(&self, found: Tok, expected: &'static str) -> ParseError {
        ParseError::Unexpected {
            pos: self.pos(),
            found: found.describe(),
            expected,
        }
    }

    fn expect_sym(&mut self, c: char, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(self.peek().clone(), expected))
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.product()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    e = Expr::Add(Box::new(e), Box::new(self.product()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    e = Expr::Sub(Box::new(e), Box::new(self.product()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        while *self.peek() == Tok::Sym('*') {
            self.bump();
            e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            let (text, pos) = self.number("an exponent")?;
            let e = text
                .parse::<u32>()
                .map_err(|_| ParseError::TooLarge { pos, text })?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn number(&mut self, expected: &'static str) -> Result<(String, usize), ParseError> {
        match self.peek().clone() {
            Tok::Num(text) => {
                let pos = self.pos();
                self.bump();
                Ok((text, pos))
            }
            t => Err(self.unexpected(t, expected)),
        }
    }

    fn index(&mut self, max: usize) -> Result<usize, ParseError> {
        let (text, pos) = self.number("an index")?;
        let index = text
            .parse::<usize>()
            .map_err(|_| ParseError::TooLarge { pos, text })?;
        if index == 0 || index > max {
            return Err(ParseError::OutOfRange { pos, index, max });
        }
        Ok(index)
    }

    /// Whether the parenthesis at the cursor opens a label factor.
    fn at_factor(&self) -> bool {
        let mut k = self.at + 1;
        let mut items = 0;
        loop {
            match &self.toks[k].0 {
                Tok::Sym('~') => k += 1,
                Tok::Num(_) => {
                    items += 1;
                    k += 1;
                }
                Tok::Sym(')') => return items > 0,
                _ => return false,
            }
        }
    }

    fn label(&mut self) -> Result<Expr, ParseError> {
        let mut used = IndexSubset::EMPTY;
        let mut factors = Vec::new();
        loop {
            self.expect_sym('(', "'('")?;
            let mut f = FactorSyntax {
                plus: IndexSubset::EMPTY,
                minus: IndexSubset::EMPTY,
            };
            while *self.peek() != Tok::Sym(')') {
                let overline = *self.peek() == Tok::Sym('~');
                if overline {
                    if self.mode == Mode::Perfect {
                        return Err(ParseError::Overline { pos: self.pos() });
                    }
                    self.bump();
                }
                let pos = self.pos();
                let i = self.index(self.n)?;
                if used.contains(i) {
                    return Err(ParseError::Repeated { pos, index: i });
                }
                used = used.with(i);
                if overline {
                    f.minus = f.minus.with(i);
                } else {
                    f.plus = f.plus.with(i);
                }
            }
            self.bump();
            factors.push(f);
            if *self.peek() != Tok::Sym('.') {
                return Ok(Expr::Label(factors));
            }
            self.bump();
            if *self.peek() != Tok::Sym('(') || !self.at_factor() {
                return Err(self.unexpected(self.peek().clone(), "a label factor"));
            }
        }
    }

    fn hkn_only(&self, name: &str, pos: usize) -> Result<(), ParseError> {
        if self.mode == Mode::Hkn {
            Ok(())
        } else {
            Err(ParseError::HknOnly {
                pos,
                name: name.to_string(),
            })
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(text) => {
                self.bump();
                Ok(Expr::Int(text.parse().expect("digits")))
            }
            Tok::Sym('(') if self.at_factor() => self.label(),
            Tok::Sym('(') => {
                self.bump();
                let e = self.sum()?;
                self.expect_sym(')', "')'")?;
                Ok(e)
            }
            Tok::Ident(name) if ["Ch", "R", "V", "U"].contains(&name.as_str()) => {
                self.bump();
                match name.as_str() {
                    "Ch" => {
                        self.expect_sym('(', "'('")?;
                        let i = self.index(self.n)?;
                        self.expect_sym(')', "')'")?;
                        Ok(Expr::Chern(i))
                    }
                    "R" => {
                        self.hkn_only("R", pos)?;
                        Ok(Expr::R)
                    }
                    "V" | "U" => {
                        self.hkn_only(&name, pos)?;
                        let i = self.index(self.n - 1)?;
                        Ok(if name == "V" { Expr::V(i) } else { Expr::U(i) })
                    }
                    _ => unreachable!("checked by the guard"),
                }
            }
            t @ Tok::Ident(_) => Err(self.unexpected(t, "Ch, R, V or U")),
            t => Err(self.unexpected(t, "an expression")),
        }
    }
}

/// A value in one of the three presentations.
#[derive(Debug, Clone)]
pub enum Value {
    Nice(NiceElement),
    Perfect(PerfectElement),
    Hkn(HknPolynomial),
}

fn chern_hkn(i: usize, n: usize) -> HknPolynomial {
    if i == n {
        -HknPolynomial::r()
    } else {
        HknPolynomial::v(i).scale(&BigInt::from(2)) + HknPolynomial::r()
    }
}

fn nice_label(moduli: &Arc<Moduli>, factors: &[FactorSyntax]) -> Result<NiceElement, RingError> {
    NiceElement::from_parts(moduli, factors.iter().map(|f| (f.plus, f.minus)))
}

/// Evaluates a parsed expression in the ring selected by `mode`.
pub fn evaluate(expr: &Expr, mode: Mode, moduli: &Arc<Moduli>) -> Result<Value, RingError> {
    match mode {
        Mode::Nice => Ok(Value::Nice(eval_nice(expr, moduli)?)),
        Mode::Perfect => Ok(Value::Perfect(eval_perfect(expr, moduli)?)),
        Mode::Hkn => Ok(Value::Hkn(
            eval_hkn(expr, moduli)?.without_long_products(moduli.lengths()),
        )),
    }
}

fn eval_nice(e: &Expr, m: &Arc<Moduli>) -> Result<NiceElement, RingError> {
    Ok(match e {
        Expr::Int(c) => NiceElement::one(m).scale(c.clone()),
        Expr::Label(fs) => nice_label(m, fs)?,
        Expr::Chern(i) => NiceElement::chern_default(m, *i)?,
        Expr::R | Expr::V(_) | Expr::U(_) => {
            let p = eval_hkn(e, m)?;
            NiceElement::from_hkn(m, &p)?
        }
        Expr::Neg(a) => -eval_nice(a, m)?,
        Expr::Add(a, b) => eval_nice(a, m)?.try_add(&eval_nice(b, m)?)?,
        Expr::Sub(a, b) => eval_nice(a, m)?.try_add(&-eval_nice(b, m)?)?,
        Expr::Mul(a, b) => eval_nice(a, m)?.cup(&eval_nice(b, m)?)?,
        Expr::Pow(a, k) => eval_nice(a, m)?.pow(*k)?,
    })
}

fn eval_perfect(e: &Expr, m: &Arc<Moduli>) -> Result<PerfectElement, RingError> {
    Ok(match e {
        Expr::Int(c) => PerfectElement::one(m).scale(c.clone()),
        Expr::Label(_) | Expr::Chern(_) | Expr::R | Expr::V(_) | Expr::U(_) => {
            psi(&eval_nice(e, m)?)?
        }
        Expr::Neg(a) => eval_perfect(a, m)?.scale(-1),
        Expr::Add(a, b) => eval_perfect(a, m)?.try_add(&eval_perfect(b, m)?)?,
        Expr::Sub(a, b) => eval_perfect(a, m)?.try_add(&eval_perfect(b, m)?.scale(-1))?,
        Expr::Mul(a, b) => eval_perfect(a, m)?.perfect_product(&eval_perfect(b, m)?)?,
        Expr::Pow(a, k) => eval_perfect(a, m)?.pow(*k)?,
    })
}

fn eval_hkn(e: &Expr, m: &Arc<Moduli>) -> Result<HknPolynomial, RingError> {
    let n = m.n();
    Ok(match e {
        Expr::Int(c) => HknPolynomial::constant(c.clone()),
        Expr::Label(fs) => {
            let (label, sign) = NiceLabel::from_parts(fs.iter().map(|f| (f.plus, f.minus)))?;
            label_to_hkn(&label, n).scale(&BigInt::from(sign.to_i64()))
        }
        Expr::Chern(i) => chern_hkn(*i, n),
        Expr::R => HknPolynomial::r(),
        Expr::V(i) => HknPolynomial::v(*i),
        Expr::U(i) => HknPolynomial::u(*i),
        Expr::Neg(a) => -eval_hkn(a, m)?,
        Expr::Add(a, b) => eval_hkn(a, m)? + eval_hkn(b, m)?,
        Expr::Sub(a, b) => eval_hkn(a, m)? - eval_hkn(b, m)?,
        Expr::Mul(a, b) => eval_hkn(a, m)?.multiply(&eval_hkn(b, m)?),
        Expr::Pow(a, k) => {
            let base = eval_hkn(a, m)?;
            (0..*k).fold(HknPolynomial::constant(BigInt::one()), |acc, _| {
                acc.multiply(&base)
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> IndexSubset {
        IndexSubset::from_indices(v.iter().copied())
    }

    #[test]
    fn labels_and_products() {
        let e = parse("(1 2 ~3)*(4 5 ~3)", Mode::Nice, 5).unwrap();
        let f = |p: &[usize], m: &[usize]| {
            Expr::Label(vec![FactorSyntax {
                plus: set(p),
                minus: set(m),
            }])
        };
        assert_eq!(
            e,
            Expr::Mul(Box::new(f(&[1, 2], &[3])), Box::new(f(&[4, 5], &[3])))
        );
        assert_eq!(parse("Ch(2)", Mode::Nice, 5).unwrap(), Expr::Chern(2));
        assert_eq!(
            parse(" V 1*R^2", Mode::Hkn, 5).unwrap(),
            Expr::Mul(
                Box::new(Expr::V(1)),
                Box::new(Expr::Pow(Box::new(Expr::R), 2))
            )
        );
    }

    #[test]
    fn grouping_versus_factors() {
        let e = parse("2*((1 2) - (1 ~2))", Mode::Nice, 4).unwrap();
        assert!(matches!(e, Expr::Mul(_, _)));
        let e = parse("(1 2).(3 4)", Mode::Nice, 4).unwrap();
        assert!(matches!(e, Expr::Label(ref fs) if fs.len() == 2));
        assert_eq!(
            parse("-2^3", Mode::Nice, 4).unwrap(),
            Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Int(2.into())), 3)))
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse("(1 ~1 2)", Mode::Nice, 5),
            Err(ParseError::Repeated { pos: 5, index: 1 })
        );
        assert_eq!(
            parse("(1 ~2)", Mode::Perfect, 5),
            Err(ParseError::Overline { pos: 4 })
        );
        assert_eq!(
            parse("(1 7)", Mode::Nice, 5),
            Err(ParseError::OutOfRange {
                pos: 4,
                index: 7,
                max: 5
            })
        );
        assert_eq!(
            parse("V5", Mode::Hkn, 5),
            Err(ParseError::OutOfRange {
                pos: 2,
                index: 5,
                max: 4
            })
        );
        assert_eq!(
            parse("R", Mode::Nice, 5),
            Err(ParseError::HknOnly {
                pos: 1,
                name: "R".into()
            })
        );
        assert_eq!(parse("", Mode::Nice, 5), Err(ParseError::Empty));
        assert!(matches!(
            parse("(1 2) +", Mode::Nice, 5),
            Err(ParseError::Unexpected { pos: 8, .. })
        ));
        assert!(matches!(
            parse("(1 2) (3 4)", Mode::Nice, 5),
            Err(ParseError::Unexpected { pos: 7, .. })
        ));
        assert!(matches!(
            parse("()", Mode::Nice, 5),
            Err(ParseError::Unexpected { pos: 2, .. })
        ));
        assert!(matches!(
            parse("(1 2) $", Mode::Nice, 5),
            Err(ParseError::Unexpected { pos: 7, .. })
        ));
        assert!(matches!(
            parse("(1 2)^", Mode::Nice, 5),
            Err(ParseError::Unexpected { pos: 7, .. })
        ));
        assert!(matches!(
            parse("Ch(", Mode::Nice, 5),
            Err(ParseError::Unexpected { pos: 4, .. })
        ));
        assert!(matches!(
            parse("X", Mode::Nice, 5),
            Err(ParseError::Unexpected { pos: 1, .. })
        ));
    }

    #[test]
    fn chern_of_the_last_edge_is_minus_r() {
        let m = Moduli::new("33,34,36,40,48".parse().unwrap()).unwrap();
        let Value::Hkn(p) =
            evaluate(&parse("Ch(5)", Mode::Hkn, 5).unwrap(), Mode::Hkn, &m).unwrap()
        else {
            panic!("hkn value expected");
        };
        assert_eq!(p.to_string(), "-R");
    }
}
