use num_rational::BigRational;
use sha2::{Digest, Sha256};

use symmetroid::families::{Family, FIXTURES};
use symmetroid::{load_witness, save_witness, PencilText, WitnessRecord};
use symmetroid_core::families::{prismatic_pencil, tetrahedral_pencil};
use symmetroid_core::CombType;

fn q(s: &str) -> BigRational {
    symmetroid::text::parse_rational(s).unwrap()
}

fn prismatic(a: &str, b: &str) -> PencilText {
    Family::Prismatic { a: q(a), b: q(b) }.text()
}

#[test]
fn fixtures_match_their_checksums() {
    let sums = include_str!("../fixtures/SHA256SUMS");
    let mut seen = 0;
    for line in sums.lines() {
        let (hash, name) = line.split_once("  ").unwrap();
        let (_, body) = FIXTURES.iter().find(|f| f.0 == name).unwrap_or_else(|| panic!("unknown fixture {name}"));
        let got: String = Sha256::digest(body.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(got, hash, "{name}");
        seen += 1;
    }
    assert_eq!(seen, FIXTURES.len());
}

#[test]
fn family_texts_agree_with_the_float_generators() {
    for (a, b) in [(1.0, 1.0), (0.5, -1.5), (2.0, -16.0)] {
        let text = Family::Prismatic { a: BigRational::from_float(a).unwrap(), b: BigRational::from_float(b).unwrap() }.text();
        assert!(text.is_exact());
        assert_eq!(text.pencil().mats(), prismatic_pencil(a, b).mats());
    }
    for t in [60.0, 24.0, 6.0, -1.0, -3.0] {
        let text = Family::Tetrahedral { t: BigRational::from_float(t).unwrap() }.text();
        assert_eq!(text.pencil().mats(), tetrahedral_pencil(t).mats());
    }
}

#[test]
fn pencil_round_trip_is_byte_identical() {
    let p = prismatic("1", "1");
    let s = p.to_string();
    let back = PencilText::parse(&s).unwrap();
    assert_eq!(back, p);
    assert_eq!(back.to_string(), s);

    // Rational entries survive unchanged.
    let r = prismatic("1/3", "-2");
    assert_eq!(PencilText::parse(&r.to_string()).unwrap().rationals(), r.rationals());
}

#[test]
fn decimal_input_is_read_exactly() {
    let src = prismatic("1", "1").to_string().replacen("1 ", "0.5e1 ", 1);
    let p = PencilText::parse(&src).unwrap();
    assert_eq!(p.rationals()[0][0], q("5"));
    assert_eq!(PencilText::parse(&p.to_string()).unwrap(), p);
}

#[test]
fn malformed_pencils_are_rejected_with_positions() {
    let good = prismatic("1", "1").to_string();
    let three: String = good.split("\n\n").take(3).collect::<Vec<_>>().join("\n\n");
    let e = PencilText::parse(&three).unwrap_err();
    assert!(e.message.contains("expected 4 blocks, found 3"), "{e}");

    let bad = good.replacen("10", "1x0", 1);
    let e = PencilText::parse(&bad).unwrap_err();
    assert!(e.line >= 1 && e.column >= 1, "{e}");

    let short = good.replacen("3 2\n", "3\n", 1);
    assert!(PencilText::parse(&short).unwrap_err().message.contains("expected 15"));
}

#[test]
fn witness_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let w = WitnessRecord {
        comb_type: CombType::new(14, 8),
        chart_seed: 42,
        solver_seed: 42,
        certificate_digest: "0".repeat(64),
        version: "0.1.0".into(),
        timestamp: 1,
        pencil: prismatic("1", "1"),
    };
    let path = dir.path().join(WitnessRecord::file_name(w.comb_type));
    assert!(path.ends_with("type_14_08.witness"));
    save_witness(&path, &w).unwrap();
    assert_eq!(load_witness(&path).unwrap(), w);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), w.to_text());
}
