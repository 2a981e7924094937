//! Text grammar for residues, Laurent series, Witt vectors and symbols.
//!
//! ```text
//! residue := rterm (('+' | '-') rterm)*
//! rterm   := rfactor (('*' | '/') rfactor)*
//! rfactor := integer | 'u' ['^' integer] | '(' residue ')'
//! laurent := lterm (('+' | '-') lterm)*
//! lterm   := 'O(t^' int ')' | tpow | coeff [['*'] tpow]
//! tpow    := 't' ['^' int]
//! witt    := '[' laurent (';' laurent)* ']'
//! symbol  := '[' witt ';' laurent ')'
//! ```
//!
//! A series without an `O(t^N)` term gets the parser's default precision,
//! and the [`Printer`] omits the `O` term exactly when it equals that default.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::brauer::BrauerSymbol;
use crate::coeff::{FieldSpec, ResidueElem, ResidueKind};
use crate::error::{Error, Result};
use crate::valued::{LaurentElem, DEFAULT_PRECISION, EXACT};
use crate::witt::WittVector;

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    spec: FieldSpec,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, spec: FieldSpec) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
            spec,
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

    /// Next non-space byte after the current one.
    fn peek_second(&mut self) -> Option<u8> {
        self.skip_ws();
        let mut i = self.pos + 1;
        while i < self.src.len() && self.src[i].is_ascii_whitespace() {
            i += 1;
        }
        self.src.get(i).copied()
    }

    fn err<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&[&(c as char).to_string()])
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(&["integer"]);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().map_err(|_| Error::Parse {
            offset: start,
            expected: vec!["integer".into()],
        })
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let start = self.pos;
        let n = self.uint()?;
        let n = i64::try_from(n).map_err(|_| Error::Parse {
            offset: start,
            expected: vec!["integer".into()],
        })?;
        Ok(if neg { -n } else { n })
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(&["end of input"])
        }
    }

    fn residue(&mut self) -> Result<ResidueElem> {
        let mut acc = self.rterm()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.rterm()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.rterm()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn rterm(&mut self) -> Result<ResidueElem> {
        let mut acc = self.rfactor()?;
        self.rterm_rest(&mut acc, false)?;
        Ok(acc)
    }

    /// Continues a product; in Laurent context a `*` followed by `t` is left alone.
    fn rterm_rest(&mut self, acc: &mut ResidueElem, laurent: bool) -> Result<()> {
        loop {
            match self.peek() {
                Some(b'*') if !(laurent && self.peek_second() == Some(b't')) => {
                    self.pos += 1;
                    *acc = &*acc * &self.rfactor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.rfactor()?;
                    *acc = acc.checked_div(&d).map_err(|_| Error::Parse {
                        offset: at,
                        expected: vec!["nonzero divisor".into()],
                    })?;
                }
                Some(b'u') if self.spec.kind() == ResidueKind::RationalFunctionField => {
                    *acc = &*acc * &self.rfactor()?;
                }
                _ => return Ok(()),
            }
        }
    }

    fn rfactor(&mut self) -> Result<ResidueElem> {
        let fp_u = self.spec.kind() == ResidueKind::RationalFunctionField;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                Ok(self.spec.from_int((n % self.spec.p()) as i64))
            }
            Some(b'u') if fp_u => {
                self.pos += 1;
                let u = self.spec.u()?;
                if self.eat(b'^') {
                    let e = self.uint()?;
                    Ok(u.pow(e))
                } else {
                    Ok(u)
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let r = self.residue()?;
                self.expect(b')')?;
                Ok(r)
            }
            _ if fp_u => self.err(&["integer", "u", "("]),
            _ => self.err(&["integer", "("]),
        }
    }

    fn tpow(&mut self) -> Result<i64> {
        self.expect(b't')?;
        if self.eat(b'^') {
            self.int()
        } else {
            Ok(1)
        }
    }

    fn laurent(&mut self, default_prec: i64) -> Result<LaurentElem> {
        let mut terms = Vec::new();
        let mut prec: Option<i64> = None;
        let mut negate = self.eat(b'-');
        loop {
            let start = self.pos;
            match self.peek() {
                Some(b'O') => {
                    if prec.is_some() {
                        return self.err(&["single O(t^N) term"]);
                    }
                    self.pos += 1;
                    self.expect(b'(')?;
                    let n = self.tpow()?;
                    self.expect(b')')?;
                    prec = Some(n);
                }
                Some(b't') => {
                    let e = self.tpow()?;
                    terms.push((e, self.spec.one(), negate));
                }
                Some(_) => {
                    let mut c = self.rfactor()?;
                    self.rterm_rest(&mut c, true)?;
                    let e = match self.peek() {
                        Some(b'*') => {
                            self.pos += 1;
                            self.tpow()?
                        }
                        Some(b't') => self.tpow()?,
                        _ => 0,
                    };
                    terms.push((e, c, negate));
                }
                None => {
                    self.pos = start;
                    return self.err(&["term"]);
                }
            }
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        let prec = prec.unwrap_or(default_prec);
        let terms = terms
            .into_iter()
            .map(|(e, c, neg)| (e, if neg { -&c } else { c }));
        LaurentElem::from_terms(self.spec, terms, prec)
    }

    fn witt(&mut self, default_prec: i64) -> Result<WittVector<LaurentElem>> {
        self.expect(b'[')?;
        let mut comps = vec![self.laurent(default_prec)?];
        while self.eat(b';') {
            comps.push(self.laurent(default_prec)?);
        }
        self.expect(b']')?;
        Ok(WittVector::new(comps))
    }

    fn residue_witt(&mut self) -> Result<WittVector<ResidueElem>> {
        self.expect(b'[')?;
        let mut comps = vec![self.residue()?];
        while self.eat(b';') {
            comps.push(self.residue()?);
        }
        self.expect(b']')?;
        Ok(WittVector::new(comps))
    }
}

/// Parses an element of `k`.
pub fn parse_residue(src: &str, spec: FieldSpec) -> Result<ResidueElem> {
    let mut c = Cursor::new(src, spec);
    let r = c.residue()?;
    c.finish()?;
    Ok(r)
}

/// Parses a Laurent series; `default_prec` applies when no `O(t^N)` is given.
pub fn parse_laurent(src: &str, spec: FieldSpec, default_prec: i64) -> Result<LaurentElem> {
    let mut c = Cursor::new(src, spec);
    let r = c.laurent(default_prec)?;
    c.finish()?;
    Ok(r)
}

/// Parses `[e1; ...; em]` over `K`. A doubled outer bracket `[[...]]` is accepted.
pub fn parse_witt(
    src: &str,
    spec: FieldSpec,
    default_prec: i64,
) -> Result<WittVector<LaurentElem>> {
    let trimmed = src.trim();
    if trimmed.starts_with("[[") && trimmed.ends_with("]]") {
        let offset = src.find('[').unwrap() + 1;
        let inner = &trimmed[1..trimmed.len() - 1];
        return parse_witt(inner, spec, default_prec).map_err(|e| match e {
            Error::Parse {
                offset: o,
                expected,
            } => Error::Parse {
                offset: o + offset,
                expected,
            },
            other => other,
        });
    }
    let mut c = Cursor::new(src, spec);
    let r = c.witt(default_prec)?;
    c.finish()?;
    Ok(r)
}

/// Parses `[e1; ...; em]` over the residue field.
pub fn parse_residue_witt(src: &str, spec: FieldSpec) -> Result<WittVector<ResidueElem>> {
    let mut c = Cursor::new(src, spec);
    let r = c.residue_witt()?;
    c.finish()?;
    Ok(r)
}

/// Parses `[[e1; ...; em]; b)`.
pub fn parse_symbol(src: &str, spec: FieldSpec, default_prec: i64) -> Result<BrauerSymbol> {
    let mut c = Cursor::new(src, spec);
    c.expect(b'[')?;
    let omega = c.witt(default_prec)?;
    c.expect(b';')?;
    let at = c.pos;
    let b = c.laurent(default_prec)?;
    c.expect(b')')?;
    c.finish()?;
    BrauerSymbol::new(omega, b).map_err(|_| Error::Parse {
        offset: at,
        expected: vec!["nonzero b".into()],
    })
}

/// Formats values; the `O(t^N)` term is omitted when `N` equals `default_prec`.
#[derive(Debug, Clone, Copy)]
pub struct Printer {
    pub default_prec: Option<i64>,
}

impl Default for Printer {
    fn default() -> Self {
        Printer {
            default_prec: Some(DEFAULT_PRECISION),
        }
    }
}

impl Printer {
    /// Always prints the precision of inexact elements.
    pub fn verbose() -> Self {
        Printer { default_prec: None }
    }

    pub fn laurent(&self, a: &LaurentElem) -> String {
        let mut parts: Vec<String> = a.terms().map(|(e, c)| format_term(e, c)).collect();
        let prec = a.raw_precision();
        let show_prec = prec != EXACT && Some(prec) != self.default_prec;
        if parts.is_empty() {
            parts.push("0".into());
        }
        if show_prec {
            parts.push(match prec {
                1 => "O(t)".to_string(),
                n => format!("O(t^{n})"),
            });
        }
        parts.join(" + ")
    }

    pub fn witt(&self, w: &WittVector<LaurentElem>) -> String {
        let comps: Vec<String> = w.components().iter().map(|c| self.laurent(c)).collect();
        format!("[{}]", comps.join("; "))
    }

    pub fn symbol(&self, s: &BrauerSymbol) -> String {
        format!("[{}; {})", self.witt(s.omega()), self.laurent(s.b()))
    }
}

fn format_coeff(c: &ResidueElem) -> String {
    let single =
        c.is_polynomial() && c.numerator().coeffs().iter().filter(|&&x| x != 0).count() <= 1;
    if single {
        c.to_string()
    } else {
        format!("({c})")
    }
}

fn format_term(e: i64, c: &ResidueElem) -> String {
    let tpart = match e {
        1 => "t".to_string(),
        e => format!("t^{e}"),
    };
    match (e, c.is_one()) {
        (0, _) => format_coeff(c),
        (_, true) => tpart,
        _ => format!("{}*{}", format_coeff(c), tpart),
    }
}

impl fmt::Display for LaurentElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::verbose().laurent(self))
    }
}

impl fmt::Display for WittVector<LaurentElem> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::verbose().witt(self))
    }
}

impl fmt::Display for WittVector<ResidueElem> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps: Vec<String> = self.components().iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", comps.join("; "))
    }
}

impl Serialize for WittVector<LaurentElem> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for WittVector<ResidueElem> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for BrauerSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::verbose().symbol(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2u() -> FieldSpec {
        FieldSpec::rational_function_field(2).unwrap()
    }

    #[test]
    fn residue_grammar() {
        let k = f2u();
        let a = parse_residue("u^3+u+1", k).unwrap();
        assert_eq!(a.to_string(), "u^3+u+1");
        let q = parse_residue("(u^2+1)/(u+1)", k).unwrap();
        assert_eq!(q.to_string(), "u+1");
        let f5 = FieldSpec::prime_field(5).unwrap();
        assert_eq!(parse_residue("7", f5).unwrap(), f5.from_int(2));
        assert!(parse_residue("u", f5).is_err());
    }

    #[test]
    fn laurent_grammar() {
        let k = f2u();
        let a = parse_laurent("u*t^-1 + 1 + t^2 + O(t^64)", k, 64).unwrap();
        assert_eq!(a.val().unwrap(), -1);
        assert_eq!(a.precision(), Some(64));
        let b = parse_laurent("t^-1 + u + O(t^64)", k, 10).unwrap();
        assert_eq!(b.val().unwrap(), -1);
        assert_eq!(b.precision(), Some(64));
        let c = parse_laurent("(u+1)*t^2 - t", k, 12).unwrap();
        assert_eq!(c.precision(), Some(12));
        assert_eq!(Printer::verbose().laurent(&c), "t + (u+1)*t^2 + O(t^12)");
        assert_eq!(
            Printer {
                default_prec: Some(12)
            }
            .laurent(&c),
            "t + (u+1)*t^2"
        );
        let z = parse_laurent("0 + O(t^64)", k, 10).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn parse_error_offset() {
        let k = f2u();
        match parse_laurent("t^", k, 64) {
            Err(Error::Parse { offset, expected }) => {
                assert_eq!(offset, 2);
                assert_eq!(expected, vec!["integer".to_string()]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn symbols_and_vectors() {
        let k = f2u();
        let s = parse_symbol("[[t^-1; 0]; t^2)", k, 64).unwrap();
        assert_eq!(s.m(), 2);
        assert_eq!(Printer::default().symbol(&s), "[[t^-1; 0]; t^2)");
        let w = parse_witt("[[0;0]]", k, 64).unwrap();
        assert_eq!(w.len(), 2);
        let r = parse_residue_witt("[u; u^3]", k).unwrap();
        assert_eq!(r.to_string(), "[u; u^3]");
    }
}
