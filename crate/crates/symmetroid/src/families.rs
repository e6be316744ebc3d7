//! Exact family pencils built from the fixture files.

use num_rational::BigRational;

use crate::text::{Number, PencilText};

pub const TETRAHEDRAL_CONST: &str = include_str!("../fixtures/tetrahedral_const.pencil");
pub const TETRAHEDRAL_T: &str = include_str!("../fixtures/tetrahedral_t.pencil");
pub const PRISMATIC_CONST: &str = include_str!("../fixtures/prismatic_const.pencil");
pub const PRISMATIC_A: &str = include_str!("../fixtures/prismatic_a.pencil");
pub const PRISMATIC_B: &str = include_str!("../fixtures/prismatic_b.pencil");
pub const DEGENERATE: &str = include_str!("../fixtures/degenerate.pencil");

/// File name and contents of every fixture.
pub const FIXTURES: [(&str, &str); 6] = [
    ("degenerate.pencil", DEGENERATE),
    ("prismatic_a.pencil", PRISMATIC_A),
    ("prismatic_b.pencil", PRISMATIC_B),
    ("prismatic_const.pencil", PRISMATIC_CONST),
    ("tetrahedral_const.pencil", TETRAHEDRAL_CONST),
    ("tetrahedral_t.pencil", TETRAHEDRAL_T),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Tetrahedral { t: BigRational },
    Prismatic { a: BigRational, b: BigRational },
}

fn fixture(src: &str) -> PencilText {
    PencilText::parse(src).expect("fixture parses")
}

/// `C + Σ coefficient·M`, entrywise and exact.
fn combine(base: &str, terms: &[(&BigRational, &str)]) -> PencilText {
    let base = fixture(base).rationals();
    let terms: Vec<_> = terms.iter().map(|(c, src)| ((*c).clone(), fixture(src).rationals())).collect();
    PencilText::from_fn(|b, k| {
        let mut v = base[b][k].clone();
        for (c, m) in &terms {
            v += c * &m[b][k];
        }
        Number::from_rational(v)
    })
}

impl Family {
    pub fn text(&self) -> PencilText {
        match self {
            Family::Tetrahedral { t } => combine(TETRAHEDRAL_CONST, &[(t, TETRAHEDRAL_T)]),
            Family::Prismatic { a, b } => combine(PRISMATIC_CONST, &[(a, PRISMATIC_A), (b, PRISMATIC_B)]),
        }
    }

    pub fn name(&self) -> String {
        let num = |r: &BigRational| Number::from_rational(r.clone()).text().to_string();
        match self {
            Family::Tetrahedral { t } => format!("tetrahedral t={}", num(t)),
            Family::Prismatic { a, b } => format!("prismatic a={} b={}", num(a), num(b)),
        }
    }
}

pub fn degenerate_text() -> PencilText {
    fixture(DEGENERATE)
}

/// The rows of the prismatic table: `(a, b)` and the listed type.
pub const PRISMATIC_TABLE: [(&str, &str, (u32, u32)); 11] = [
    ("1/2", "-3/2", (20, 14)),
    ("2", "6", (20, 8)),
    ("1/2", "4", (18, 6)),
    ("1/2", "-2", (14, 14)),
    ("1", "1", (14, 8)),
    ("1", "6", (14, 2)),
    ("1", "-2", (10, 4)),
    ("1/2", "1", (8, 2)),
    ("1/3", "-2", (2, 2)),
    ("2", "-16", (6, 0)),
    ("1", "-16", (0, 0)),
];
