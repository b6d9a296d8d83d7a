//! Text form shared by the polynomial types:
//! `term (('+'|'-') term)*`, `term = factor ('*' factor)*`,
//! `factor = integer | integer '/' integer | name | name '^' integer`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{fmt_abs, Rational};
use crate::error::{Error, Result};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
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

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }
}

/// Parses into `(exponents, coefficient)` pairs; `lookup` maps a variable
/// name to its index. Repeated monomials are summed by the caller.
pub(crate) fn parse_terms(
    input: &str,
    nvars: usize,
    lookup: impl Fn(&str) -> Option<usize>,
) -> Result<Vec<(Vec<u32>, Rational)>> {
    let mut lx = Lexer { src: input.as_bytes(), pos: 0 };
    let mut out = Vec::new();
    let mut sign = Rational::one();
    match lx.peek() {
        Some(b'-') => {
            sign = -sign;
            lx.pos += 1;
        }
        Some(b'+') => lx.pos += 1,
        None => return lx.err("empty polynomial"),
        _ => {}
    }
    loop {
        let mut coeff = sign.clone();
        let mut exps = vec![0u32; nvars];
        loop {
            match lx.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = lx.digits()?;
                    let mut q = Rational::from_integer(n);
                    if lx.peek() == Some(b'/') {
                        lx.pos += 1;
                        let d = lx.digits()?;
                        if d.is_zero() {
                            return lx.err("zero denominator");
                        }
                        q /= Rational::from_integer(d);
                    }
                    coeff *= q;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let at = lx.pos;
                    let name = lx.ident();
                    let Some(i) = lookup(name) else {
                        return Err(Error::Parse { pos: at, msg: format!("unknown variable `{name}`") });
                    };
                    let mut e = 1u32;
                    if lx.peek() == Some(b'^') {
                        lx.pos += 1;
                        let d = lx.digits()?;
                        e = match u32::try_from(d) {
                            Ok(e) => e,
                            Err(_) => return lx.err("exponent too large"),
                        };
                    }
                    exps[i] += e;
                }
                Some(_) => return lx.err("expected a number or a variable"),
                None => return lx.err("unexpected end of input"),
            }
            if lx.peek() == Some(b'*') {
                lx.pos += 1;
            } else {
                break;
            }
        }
        out.push((exps, coeff));
        match lx.peek() {
            None => return Ok(out),
            Some(b'+') => sign = Rational::one(),
            Some(b'-') => sign = -Rational::one(),
            Some(_) => return lx.err("expected `+`, `-` or `*`"),
        }
        lx.pos += 1;
    }
}

/// Formats terms given in display order.
pub(crate) fn format_terms<'a>(
    terms: impl Iterator<Item = (&'a [u32], &'a Rational)>,
    names: &[String],
) -> String {
    let mut s = String::new();
    for (k, (exps, c)) in terms.enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        let unit = c.abs().is_one();
        let constant = exps.iter().all(|&e| e == 0);
        if !unit || constant {
            factors.push(fmt_abs(c));
        }
        for (i, &e) in exps.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[i].clone()),
                _ => factors.push(format!("{}^{}", names[i], e)),
            }
        }
        s.push_str(&factors.join("*"));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn xlookup(s: &str) -> Option<usize> {
        s.strip_prefix('x')?.parse().ok().filter(|&i: &usize| i < 3)
    }

    #[test]
    fn parse_basic() {
        let t = parse_terms("-7/2*x0*x1^2 + 3 - x2", 3, xlookup).unwrap();
        assert_eq!(t[0], (vec![1, 2, 0], rat(-7, 2)));
        assert_eq!(t[1], (vec![0, 0, 0], int(3)));
        assert_eq!(t[2], (vec![0, 0, 1], int(-1)));
    }

    #[test]
    fn parse_errors() {
        assert!(parse_terms("x0 +", 3, xlookup).is_err());
        assert!(parse_terms("y1", 3, xlookup).is_err());
        assert!(parse_terms("1/0*x0", 3, xlookup).is_err());
        assert!(parse_terms("", 3, xlookup).is_err());
        assert!(parse_terms("x0 x1", 3, xlookup).is_err());
    }
}
