use num_complex::Complex64;
use proptest::prelude::*;

use symmetroid_core::certify::interval::{CInterval, Interval};
use symmetroid_core::classify::{admissible_types, phase_normalize, NodeSolution, NodeTag};
use symmetroid_core::hillclimb::{delta_values, lattice_distance, mu_values, Direction};
use symmetroid_core::linalg::{adjugate, sym_eigenvalues};
use symmetroid_core::pencil::{det_and_grad, eval_pencil};
use symmetroid_core::{CombType, SymMat5};

fn sym() -> impl Strategy<Value = SymMat5<f64>> {
    prop::array::uniform15(-2.0f64..2.0).prop_map(SymMat5::from_upper)
}

fn cpoint() -> impl Strategy<Value = [Complex64; 4]> {
    prop::array::uniform4((-1.0f64..1.0, -1.0f64..1.0)).prop_map(|a| a.map(|(r, i)| Complex64::new(r, i)))
}

fn tag() -> impl Strategy<Value = NodeTag> {
    prop_oneof![
        Just(NodeTag::RealSemidefinite),
        Just(NodeTag::RealIndefinite),
        Just(NodeTag::NonrealEta1),
        Just(NodeTag::NonrealEta0)
    ]
}

fn node() -> impl Strategy<Value = NodeSolution> {
    (tag(), 0.0f64..1.0, sym(), sym()).prop_map(|(tag, imag_norm, re, im)| NodeSolution {
        point: [Complex64::new(1.0, 0.0); 4],
        d: Complex64::new(0.0, 0.0),
        minors: [Complex64::new(0.0, 0.0); 25],
        tag,
        imag_norm,
        matrix: SymMat5::from_upper(core::array::from_fn(|k| Complex64::new(re.upper[k], im.upper[k]))),
    })
}

fn even_type() -> impl Strategy<Value = CombType> {
    (0u32..=10, 0u32..=10).prop_map(|(r, s)| CombType { rho: 2 * r.max(s), sigma: 2 * s.min(r) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn adjugate_times_matrix_is_determinant(m in sym()) {
        let prod = adjugate(&m).full() * m;
        let d = m.det();
        for i in 0..5 {
            for j in 0..5 {
                let e = if i == j { d } else { 0.0 };
                prop_assert!((prod[i][j] - e).abs() < 1e-10 * (1.0 + m.frobenius()));
            }
        }
    }

    #[test]
    fn eigenvalues_sum_to_trace_and_multiply_to_det(m in sym()) {
        let ev = sym_eigenvalues(&m).unwrap();
        let scale = 1.0 + m.frobenius().powi(5);
        prop_assert!((ev.iter().sum::<f64>() - m.trace()).abs() < 1e-9 * (1.0 + m.frobenius()));
        prop_assert!((ev.iter().product::<f64>() - m.det()).abs() < 1e-9 * scale);
    }

    #[test]
    fn euler_relation(a in sym(), b in sym(), c in sym(), e in sym(), p in cpoint()) {
        let mats = [a, b, c, e].map(|m| m.to_complex());
        let (d, g) = det_and_grad(&mats, &p);
        let lhs: Complex64 = (0..4).map(|k| p[k] * g[k]).sum();
        let scale = 1.0 + mats.iter().map(|m| m.frobenius()).fold(0.0, f64::max).powi(5) * 16.0;
        prop_assert!((lhs - d * 5.0).norm() < 1e-10 * scale);
    }

    #[test]
    fn interval_determinant_encloses_point_values(
        a in sym(), b in sym(), c in sym(), e in sym(), p in cpoint(), r in 1e-12f64..1e-2, t in prop::array::uniform4((-1.0f64..1.0, -1.0f64..1.0))
    ) {
        let mats = [a, b, c, e];
        let boxed: [CInterval; 4] = core::array::from_fn(|k| CInterval::around(p[k], r));
        let inner: [Complex64; 4] = core::array::from_fn(|k| p[k] + Complex64::new(t[k].0, t[k].1) * (0.99 * r));
        let im = mats.map(|m| m.map(|x| CInterval::real(Interval::point(x))));
        let (di, gi) = det_and_grad(&im, &boxed);
        let (d, g) = det_and_grad(&mats.map(|m| m.to_complex()), &inner);
        prop_assert!(di.contains(d));
        for k in 0..4 {
            prop_assert!(gi[k].contains(g[k]));
        }
        let bi = eval_pencil(&im, &boxed);
        let bp = eval_pencil(&mats.map(|m| m.to_complex()), &inner);
        for k in 0..15 {
            prop_assert!(bi.upper[k].contains(bp.upper[k]));
        }
    }

    #[test]
    fn phase_normalization_is_projective(p in cpoint(), s in 0.1f64..10.0, phi in 0.0f64..core::f64::consts::TAU) {
        let q = p.map(|z| z * Complex64::from_polar(s, phi));
        let (a, b) = (phase_normalize(&p), phase_normalize(&q));
        for k in 0..4 {
            prop_assert!((a[k] - b[k]).norm() < 1e-12);
        }
        let again = phase_normalize(&a);
        for k in 0..4 {
            prop_assert!((again[k] - a[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn lattice_distance_is_a_metric(a in even_type(), b in even_type(), c in even_type()) {
        let d = |x, y| lattice_distance(x, y).unwrap();
        prop_assert_eq!(d(a, b), d(b, a));
        prop_assert_eq!(d(a, a), 0);
        prop_assert!(d(a, c) <= d(a, b) + d(b, c));
        for dir in Direction::ALL {
            if let Some(n) = dir.apply(a) {
                prop_assert_eq!(d(a, n), 1);
            }
        }
    }

    #[test]
    fn mu_and_delta_match_exhaustive_scan(nodes in prop::collection::vec(node(), 0..20)) {
        let (mp, mm) = mu_values(&nodes);
        let scan_mu = |t| {
            let mut best = f64::INFINITY;
            for n in &nodes {
                if n.tag == t && n.imag_norm < best {
                    best = n.imag_norm;
                }
            }
            best
        };
        prop_assert_eq!(mp, scan_mu(NodeTag::NonrealEta1));
        prop_assert_eq!(mm, scan_mu(NodeTag::NonrealEta0));

        let (dp, dm) = delta_values(&nodes);
        let scan_delta = |t| {
            let mut best = f64::INFINITY;
            for (i, x) in nodes.iter().enumerate() {
                for y in &nodes[i + 1..] {
                    if x.tag != t || y.tag != t {
                        continue;
                    }
                    let (u, v) = (x.matrix.re(), y.matrix.re());
                    let (nu, nv) = (u.frobenius(), v.frobenius());
                    let mut minus = 0.0;
                    let mut plus = 0.0;
                    for i in 0..5 {
                        for j in 0..5 {
                            let (a, b) = (u.get(i, j) / nu, v.get(i, j) / nv);
                            minus += (a - b) * (a - b);
                            plus += (a + b) * (a + b);
                        }
                    }
                    best = best.min(minus.sqrt().min(plus.sqrt()));
                }
            }
            best
        };
        let close = |a: f64, b: f64| (a.is_infinite() && b.is_infinite()) || (a - b).abs() < 1e-12;
        prop_assert!(close(dp, scan_delta(NodeTag::RealSemidefinite)));
        prop_assert!(close(dm, scan_delta(NodeTag::RealIndefinite)));
    }

    #[test]
    fn admissible_types_satisfy_parity(n in 3u32..12) {
        for t in admissible_types(n) {
            prop_assert!(t.sigma % 2 == 0 && t.sigma <= t.rho);
            prop_assert!(t.is_admissible(n));
        }
    }
}

#[test]
fn quintic_admissible_set_is_exact() {
    let mut expect = Vec::new();
    for rho in (2..=20).step_by(2) {
        for sigma in (0..=rho).step_by(2) {
            expect.push(CombType { rho, sigma });
        }
    }
    let mut got = admissible_types(5);
    got.sort();
    expect.sort();
    assert_eq!(got, expect);
    assert_eq!(got.len(), 65);
}
