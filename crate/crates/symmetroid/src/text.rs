//! Pencil text format.
//!
//! Four blocks of 15 numbers, the upper triangles of `A0..A3` row by row.
//! Blocks are separated by blank lines; `#` starts a comment. Numbers are
//! integers, `p/q` rationals or decimals, and are kept as exact rationals
//! together with their original spelling.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use symmetroid_core::certify::interval::Interval;
use symmetroid_core::{Pencil, PencilEnclosure, SymMat5};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

/// An exact number with the text it was read from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Number {
    text: String,
    value: BigRational,
}

impl Number {
    pub fn parse(s: &str) -> Result<Number, String> {
        Ok(Number { text: s.to_string(), value: parse_rational(s)? })
    }

    /// `p` or `p/q` in lowest terms.
    pub fn from_rational(r: BigRational) -> Number {
        let text = if r.denom().is_one() { r.numer().to_string() } else { format!("{}/{}", r.numer(), r.denom()) };
        Number { text, value: r }
    }

    pub fn from_i64(k: i64) -> Number {
        Number::from_rational(BigRational::from_integer(k.into()))
    }

    /// 17 significant digits, enough to recover `x` exactly.
    pub fn from_f64(x: f64) -> Number {
        let text = format!("{x:.16e}");
        let value = parse_rational(&text).expect("formatted float parses");
        Number { text, value }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// The nearest float, or one of the two neighbours of the exact value.
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// The tightest floating-point interval containing the exact value.
    pub fn enclosure(&self) -> Interval {
        enclose_rational(&self.value)
    }
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Bracket `r` between adjacent floats (a point when `r` is a float).
pub fn enclose_rational(r: &BigRational) -> Interval {
    let x = r.to_f64().unwrap_or(0.0);
    let (mut lo, mut hi) = (x, x);
    while exact(lo) > *r {
        lo = lo.next_down();
    }
    while exact(hi) < *r {
        hi = hi.next_up();
    }
    // A conversion that rounded by more than necessary is tightened here.
    while lo < hi && exact(lo.next_up()) <= *r {
        lo = lo.next_up();
    }
    while lo < hi && exact(hi.next_down()) >= *r {
        hi = hi.next_down();
    }
    Interval { lo, hi }
}

fn digits(s: &str) -> Result<BigInt, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("expected digits, found `{s}`"));
    }
    s.parse::<BigInt>().map_err(|e| e.to_string())
}

/// Integers, `p/q` and decimals with optional exponent, all exact.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let r = if let Some((p, q)) = body.split_once('/') {
        let q = digits(q)?;
        if q.is_zero() {
            return Err("zero denominator".into());
        }
        BigRational::new(digits(p)?, q)
    } else {
        let (mantissa, exp) = match body.find(['e', 'E']) {
            Some(k) => {
                let e = &body[k + 1..];
                let (eneg, ed) = match e.as_bytes().first() {
                    Some(b'-') => (true, &e[1..]),
                    Some(b'+') => (false, &e[1..]),
                    _ => (false, e),
                };
                let v: i64 = digits(ed)?.to_i64().filter(|v| *v < 10_000).ok_or("exponent out of range")?;
                (&body[..k], if eneg { -v } else { v })
            }
            None => (body, 0),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(format!("not a number: `{s}`"));
        }
        let all = format!("{int}{frac}");
        let m = digits(&all)?;
        let e = exp - frac.len() as i64;
        let ten = BigInt::from(10u32);
        if e >= 0 {
            BigRational::from_integer(m * num_traits::pow(ten, e as usize))
        } else {
            BigRational::new(m, num_traits::pow(ten, (-e) as usize))
        }
    };
    Ok(if neg { -r } else { r })
}

/// Four upper triangles of exact numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilText {
    pub blocks: [[Number; 15]; 4],
}

impl PencilText {
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Number) -> Self {
        PencilText { blocks: std::array::from_fn(|b| std::array::from_fn(|k| f(b, k))) }
    }

    /// Decimal text of a floating-point pencil.
    pub fn from_pencil(p: &Pencil) -> Self {
        Self::from_fn(|b, k| Number::from_f64(p.mats()[b].upper[k]))
    }

    pub fn rationals(&self) -> [[BigRational; 15]; 4] {
        std::array::from_fn(|b| std::array::from_fn(|k| self.blocks[b][k].value.clone()))
    }

    /// Nearest floating-point pencil. The independence check is left to the
    /// caller, so degenerate fixtures can be read.
    pub fn pencil(&self) -> Pencil {
        Pencil::new_unchecked(self.blocks.each_ref().map(|b| SymMat5::from_upper(b.each_ref().map(Number::to_f64))))
    }

    pub fn enclosure(&self) -> PencilEnclosure {
        PencilEnclosure::new(self.blocks.each_ref().map(|b| SymMat5::from_upper(b.each_ref().map(Number::enclosure))))
    }

    /// True when every entry is a float, so that [`PencilText::pencil`] is
    /// the pencil itself.
    pub fn is_exact(&self) -> bool {
        self.blocks.iter().flatten().all(|n| {
            let e = n.enclosure();
            e.lo == e.hi
        })
    }

    pub fn parse(src: &str) -> Result<Self, ParseError> {
        Self::parse_from_line(src, 1)
    }

    /// Parses with line numbers counted from `first_line`.
    pub fn parse_from_line(src: &str, first_line: usize) -> Result<Self, ParseError> {
        // (first line, numbers)
        let mut blocks: Vec<(usize, Vec<Number>)> = Vec::new();
        let mut open = false;
        for (i, raw) in src.lines().enumerate() {
            let line = first_line + i;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                // Comment-only lines do not close a block.
                if raw.trim().is_empty() {
                    open = false;
                }
                continue;
            }
            if !open {
                blocks.push((line, Vec::new()));
                open = true;
            }
            let current = &mut blocks.last_mut().expect("block opened").1;
            let mut col = 0;
            for tok in content.split_whitespace() {
                col += content[col..].find(tok).expect("token from this line");
                let n = Number::parse(tok).map_err(|m| ParseError::new(line, col + 1, m))?;
                current.push(n);
                col += tok.len();
            }
        }
        let last = first_line + src.lines().count();
        if blocks.len() != 4 {
            let at = blocks.get(4).map_or(last, |b| b.0);
            return Err(ParseError::new(at, 1, format!("expected 4 blocks, found {}", blocks.len())));
        }
        for (k, (line, nums)) in blocks.iter().enumerate() {
            if nums.len() != 15 {
                return Err(ParseError::new(
                    *line,
                    1,
                    format!("block {} (A{k}) has {} numbers, expected 15", k + 1, nums.len()),
                ));
            }
        }
        let mut it = blocks.into_iter().map(|(_, nums)| <[Number; 15]>::try_from(nums).expect("checked length"));
        Ok(PencilText { blocks: std::array::from_fn(|_| it.next().expect("four blocks")) })
    }

    /// Scaled copy `k·A_i` of every generator, exact.
    pub fn scaled(&self, k: &BigRational) -> Self {
        Self::from_fn(|b, i| Number::from_rational(self.blocks[b][i].value.clone() * k))
    }
}

impl fmt::Display for PencilText {
    /// One row of the upper triangle per line, a blank line between blocks.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (b, block) in self.blocks.iter().enumerate() {
            if b > 0 {
                writeln!(f)?;
            }
            let mut k = 0;
            for row in 0..5 {
                let texts: Vec<&str> = block[k..k + 5 - row].iter().map(Number::text).collect();
                writeln!(f, "{}", texts.join(" "))?;
                k += 5 - row;
            }
        }
        Ok(())
    }
}

/// Exact symmetric matrices as rationals, for family constructions.
pub fn rational_upper(m: &[[i64; 5]; 5]) -> [BigRational; 15] {
    let mut out: Vec<BigRational> = Vec::with_capacity(15);
    for i in 0..5 {
        for j in i..5 {
            out.push(BigRational::from_integer(m[i][j].into()));
        }
    }
    out.try_into().expect("15 entries")
}
