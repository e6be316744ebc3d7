//! Witness files and the catalog of types.
//!
//! A witness file has `key value` header lines, a blank line, then the
//! pencil in text format. A catalog directory holds one
//! `type_RR_SS.witness` per type plus a `catalog.index` listing the file
//! digests.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use symmetroid_core::{admissible_types, CombType, Sequential};

use crate::certificate::digest;
use crate::session;
use crate::text::{ParseError, PencilText};

pub const WITNESS_VERSION: u32 = 1;
pub const INDEX_FILE: &str = "catalog.index";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRecord {
    pub comb_type: CombType,
    pub chart_seed: u64,
    pub solver_seed: u64,
    /// SHA-256 of the certificate text produced when the witness was found.
    pub certificate_digest: String,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub pencil: PencilText,
}

#[derive(Debug, thiserror::Error)]
pub enum WitnessError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("type {0} is not admissible")]
    Inadmissible(CombType),
}

const KEYS: [&str; 6] = ["type", "chart-seed", "solver-seed", "certificate-sha256", "version", "timestamp"];

impl WitnessRecord {
    pub fn file_name(t: CombType) -> String {
        format!("type_{:02}_{:02}.witness", t.rho, t.sigma)
    }

    pub fn to_text(&self) -> String {
        format!(
            "symmetroid witness {WITNESS_VERSION}\ntype {} {}\nchart-seed {}\nsolver-seed {}\ncertificate-sha256 {}\nversion {}\ntimestamp {}\n\n{}",
            self.comb_type.rho,
            self.comb_type.sigma,
            self.chart_seed,
            self.solver_seed,
            self.certificate_digest,
            self.version,
            self.timestamp,
            self.pencil
        )
    }

    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let mut lines = src.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim() == format!("symmetroid witness {WITNESS_VERSION}") => {}
            _ => return Err(ParseError::new(1, 1, format!("expected `symmetroid witness {WITNESS_VERSION}`"))),
        }
        let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        let mut body_line = None;
        for (i, l) in lines {
            if l.trim().is_empty() {
                body_line = Some(i + 1);
                break;
            }
            let (k, v) = l.split_once(' ').ok_or_else(|| ParseError::new(i + 1, 1, "expected `key value`"))?;
            if !KEYS.contains(&k) {
                return Err(ParseError::new(i + 1, 1, format!("unknown key `{k}`")));
            }
            if fields.insert(k, (i + 1, v.trim())).is_some() {
                return Err(ParseError::new(i + 1, 1, format!("duplicate key `{k}`")));
            }
        }
        let body_line = body_line.ok_or_else(|| ParseError::new(src.lines().count(), 1, "missing pencil"))?;
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| ParseError::new(1, 1, format!("missing key `{k}`")));
        let int = |k: &str| -> Result<u64, ParseError> {
            let (line, v) = get(k)?;
            v.parse().map_err(|_| ParseError::new(line, k.len() + 2, format!("`{k}` needs an unsigned integer")))
        };
        let (tline, tv) = get("type")?;
        let nums: Vec<u32> = tv.split_whitespace().filter_map(|x| x.parse().ok()).collect();
        if nums.len() != 2 || tv.split_whitespace().count() != 2 {
            return Err(ParseError::new(tline, 6, "`type` needs two unsigned integers"));
        }
        let body: String = src.lines().skip(body_line).map(|l| format!("{l}\n")).collect();
        Ok(WitnessRecord {
            comb_type: CombType::new(nums[0], nums[1]),
            chart_seed: int("chart-seed")?,
            solver_seed: int("solver-seed")?,
            certificate_digest: get("certificate-sha256")?.1.to_string(),
            version: get("version")?.1.to_string(),
            timestamp: int("timestamp")?,
            pencil: PencilText::parse_from_line(&body, body_line + 1)?,
        })
    }
}

pub fn save_witness(path: &Path, w: &WitnessRecord) -> Result<(), WitnessError> {
    std::fs::write(path, w.to_text()).map_err(|source| WitnessError::Io { path: path.into(), source })
}

pub fn load_witness(path: &Path) -> Result<WitnessRecord, WitnessError> {
    let src = std::fs::read_to_string(path).map_err(|source| WitnessError::Io { path: path.into(), source })?;
    WitnessRecord::parse(&src).map_err(|source| WitnessError::Parse { path: path.into(), source })
}

/// Witnesses keyed by type; keys are always admissible.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Catalog {
    entries: BTreeMap<CombType, WitnessRecord>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Files the witness under its claimed type, replacing any previous one.
    pub fn insert(&mut self, w: WitnessRecord) -> Result<(), WitnessError> {
        if !w.comb_type.is_admissible(5) {
            return Err(WitnessError::Inadmissible(w.comb_type));
        }
        self.entries.insert(w.comb_type, w);
        Ok(())
    }

    pub fn get(&self, t: CombType) -> Option<&WitnessRecord> {
        self.entries.get(&t)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &WitnessRecord> {
        self.entries.values()
    }

    pub fn missing(&self) -> Vec<CombType> {
        admissible_types(5).into_iter().filter(|t| !self.entries.contains_key(t)).collect()
    }

    /// Reads every `type_*.witness` in `dir`; a missing directory is an
    /// empty catalog.
    pub fn load_dir(dir: &Path) -> Result<Catalog, WitnessError> {
        let mut c = Catalog::new();
        let rd = match std::fs::read_dir(dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(c),
            Err(source) => return Err(WitnessError::Io { path: dir.into(), source }),
        };
        let mut paths: Vec<PathBuf> = rd.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for p in paths {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if name.starts_with("type_") && name.ends_with(".witness") {
                c.insert(load_witness(&p)?)?;
            }
        }
        Ok(c)
    }

    /// Writes all witness files and the index.
    pub fn save_dir(&self, dir: &Path) -> Result<(), WitnessError> {
        let io = |source| WitnessError::Io { path: dir.into(), source };
        std::fs::create_dir_all(dir).map_err(io)?;
        let mut index = String::new();
        for w in self.entries.values() {
            let name = WitnessRecord::file_name(w.comb_type);
            let text = w.to_text();
            save_witness(&dir.join(&name), w)?;
            index.push_str(&format!("{name} {}\n", digest(text.as_bytes())));
        }
        std::fs::write(dir.join(INDEX_FILE), index).map_err(io)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Certification failed or certified a different type.
    Fail(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogReport {
    pub results: Vec<(CombType, Verdict)>,
    pub missing: Vec<CombType>,
}

impl CatalogReport {
    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.1 == Verdict::Pass).count()
    }

    pub fn failed(&self) -> usize {
        self.results.len() - self.passed()
    }
}

impl fmt::Display for CatalogReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "catalog: {} pass, {} fail, {} missing of {}",
            self.passed(),
            self.failed(),
            self.missing.len(),
            admissible_types(5).len()
        )?;
        for (t, v) in &self.results {
            match v {
                Verdict::Pass => writeln!(f, "{t} pass")?,
                Verdict::Fail(why) => writeln!(f, "{t} FAIL {why}")?,
            }
        }
        for t in &self.missing {
            writeln!(f, "{t} missing")?;
        }
        Ok(())
    }
}

/// Re-certifies one witness with its recorded seeds.
pub fn verify_witness(w: &WitnessRecord) -> Verdict {
    match session::certify_once(&w.pencil, w.chart_seed, w.solver_seed, &Sequential) {
        Ok(c) if c.comb_type == w.comb_type => Verdict::Pass,
        Ok(c) => Verdict::Fail(format!("certified {} instead", c.comb_type)),
        Err(e) => Verdict::Fail(e.to_string()),
    }
}

/// Re-certifies every entry (in parallel); the catalog is not modified.
pub fn verify_catalog(catalog: &Catalog) -> CatalogReport {
    let entries: Vec<&WitnessRecord> = catalog.iter().collect();
    let results = entries.par_iter().map(|w| (w.comb_type, verify_witness(w))).collect();
    CatalogReport { results, missing: catalog.missing() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Number;

    fn record(t: CombType) -> WitnessRecord {
        WitnessRecord {
            comb_type: t,
            chart_seed: 42,
            solver_seed: 43,
            certificate_digest: "ab".repeat(32),
            version: "0.1.0".into(),
            timestamp: 1_700_000_000,
            pencil: PencilText::from_fn(|b, k| Number::from_i64((b * 15 + k) as i64)),
        }
    }

    #[test]
    fn witness_round_trip() {
        let w = record(CombType::new(14, 8));
        let text = w.to_text();
        let back = WitnessRecord::parse(&text).unwrap();
        assert_eq!(back, w);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn witness_errors_point_into_the_file() {
        let text = record(CombType::new(14, 8)).to_text();
        let e = WitnessRecord::parse(&text.replace("chart-seed 42", "chart-seed x")).unwrap_err();
        assert_eq!(e.line, 3);
        // pencil starts on line 9; break its second block
        let bad = text.replacen("\n\n15 ", "\n\n15 z ", 1);
        let e = WitnessRecord::parse(&bad).unwrap_err();
        assert!(e.line > 9 && e.message.contains("expected digits"), "{e}");
        let e = WitnessRecord::parse(&text.replace("type 14 8", "type 14")).unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn catalog_keys_are_admissible() {
        let mut c = Catalog::new();
        assert!(c.insert(record(CombType::new(0, 0))).is_err());
        assert!(c.insert(record(CombType::new(3, 2))).is_err());
        assert!(c.insert(record(CombType::new(20, 20))).is_ok());
        assert_eq!(c.len(), 1);
        assert_eq!(c.missing().len(), 64);
    }

    #[test]
    fn empty_catalog_report() {
        let r = verify_catalog(&Catalog::new());
        assert_eq!((r.passed(), r.failed(), r.missing.len()), (0, 0, 65));
    }
}
