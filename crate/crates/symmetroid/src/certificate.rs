//! Human-readable certificate files.
//!
//! Every printed bound is moved one ulp outwards before printing, so the
//! decimal text is itself a valid enclosure.

use std::fmt::Write;

use sha2::{Digest, Sha256};

use symmetroid_core::certify::interval::{CInterval, Interval};
use symmetroid_core::certify::{BoxCertificate, Semidefiniteness};
use symmetroid_core::Certificate;

pub const CERTIFICATE_VERSION: u32 = 1;

fn lo(x: f64) -> String {
    format!("{:e}", x.next_down())
}

fn hi(x: f64) -> String {
    format!("{:e}", x.next_up())
}

fn interval(i: &Interval) -> String {
    format!("[{}, {}]", lo(i.lo), hi(i.hi))
}

fn cinterval(z: &CInterval) -> String {
    format!("{} + i{}", interval(&z.re), interval(&z.im))
}

fn sign_char(s: i8) -> char {
    match s {
        1 => '+',
        -1 => '-',
        _ => '0',
    }
}

fn write_box(out: &mut String, k: usize, b: &BoxCertificate) {
    let kind = if b.node { "node" } else { "regular" };
    let reality = if b.real { "real" } else { "nonreal" };
    let def = match b.semidefinite {
        Some(Semidefiniteness::Positive) => " semidefinite=positive",
        Some(Semidefiniteness::Negative) => " semidefinite=negative",
        Some(Semidefiniteness::Indefinite) => " indefinite",
        None => "",
    };
    let unique = if b.unique { "unique" } else { "not-unique" };
    writeln!(out, "box {k} {kind} {unique} {reality}{def}").unwrap();
    for (name, c) in ["t", "x1", "x2", "x3"].iter().zip(&b.enclosure) {
        writeln!(out, "  {name:<2} {}", cinterval(c)).unwrap();
    }
    writeln!(out, "  d  {}", cinterval(&b.d)).unwrap();
    if b.node {
        for (m, z) in b.minors.iter().enumerate() {
            writeln!(out, "  m{m:<2} {}", cinterval(z)).unwrap();
        }
    }
    if let Some(s) = &b.signs {
        writeln!(out, "  signs {}", s.iter().map(|&x| sign_char(x)).collect::<String>()).unwrap();
    }
}

/// The certificate as text; `source` names the certified pencil.
pub fn certificate_text(cert: &Certificate, source: &str, chart_seed: u64, solver_seed: u64) -> String {
    let mut out = String::new();
    writeln!(out, "symmetroid certificate {CERTIFICATE_VERSION}").unwrap();
    writeln!(out, "source {source}").unwrap();
    writeln!(out, "type {} {}", cert.comb_type.rho, cert.comb_type.sigma).unwrap();
    let nonzero = cert.boxes.iter().filter(|b| !b.node).count();
    writeln!(out, "boxes {} nonzero-d {} nodes {}", cert.boxes.len(), nonzero, cert.boxes.len() - nonzero).unwrap();
    writeln!(out, "chart-seed {chart_seed}").unwrap();
    writeln!(out, "solver-seed {solver_seed}").unwrap();
    let c: Vec<String> = cert.chart.c.iter().map(|x| format!("{x:e}")).collect();
    writeln!(out, "chart {}", c.join(" ")).unwrap();
    for row in &cert.chart.mix {
        let r: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
        writeln!(out, "mix {}", r.join(" ")).unwrap();
    }
    for (k, b) in cert.boxes.iter().enumerate() {
        write_box(&mut out, k, b);
    }
    out
}

/// Lower-case hex SHA-256.
pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
