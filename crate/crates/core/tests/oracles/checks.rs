//! Independent re-computations of the numerical kernels. Each check
//! panics on the first violation.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, VecDeque};

use symmetroid_core::certify::interval::{CInterval, Interval};
use symmetroid_core::hillclimb::lattice_distance;
use symmetroid_core::linalg::{adjugate, det5, principal_minors, sym_eigenvalues, MINOR_SUBSETS};
use symmetroid_core::pencil::det_and_grad;
use symmetroid_core::polysys::{node_residual, node_residual_jacobian, Chart};
use symmetroid_core::{CombType, SymMat5};

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, i64)>) {
        if left.is_empty() {
            let mut inv = 0;
            for i in 0..prefix.len() {
                for j in i + 1..prefix.len() {
                    if prefix[i] > prefix[j] {
                        inv += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for k in 0..left.len() {
            let x = left.remove(k);
            prefix.push(x);
            go(prefix, left, out);
            prefix.pop();
            left.insert(k, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// Leibniz formula on the submatrix `rows × cols`, exact over i128.
fn leibniz(m: &[[i64; 5]; 5], rows: &[usize], cols: &[usize]) -> i128 {
    permutations(rows.len())
        .into_iter()
        .map(|(p, s)| s as i128 * p.iter().enumerate().map(|(i, &j)| m[rows[i]][cols[j]] as i128).product::<i128>())
        .sum()
}

fn random_int_sym(rng: &mut ChaCha8Rng) -> [[i64; 5]; 5] {
    let mut m = [[0i64; 5]; 5];
    for i in 0..5 {
        for j in i..5 {
            let v = rng.random_range(-9..=9);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

fn to_f64(m: &[[i64; 5]; 5]) -> SymMat5<f64> {
    SymMat5::from_full(&m.map(|r| r.map(|x| x as f64)))
}

fn random_sym(rng: &mut ChaCha8Rng) -> SymMat5<f64> {
    let mut m = SymMat5::<f64>::zeros();
    for x in m.upper.iter_mut() {
        *x = rng.random_range(-1.0..1.0);
    }
    m
}

pub fn determinant_matches_leibniz_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let all = [0, 1, 2, 3, 4];
    for _ in 0..500 {
        let m = random_int_sym(&mut rng);
        let d = det5(&to_f64(&m).full());
        assert_eq!(d as i128, leibniz(&m, &all, &all));
        assert_eq!(d, d.trunc());
    }
}

pub fn principal_minors_match_leibniz_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let m = random_int_sym(&mut rng);
        let minors = principal_minors(&to_f64(&m));
        for (k, s) in MINOR_SUBSETS.iter().enumerate() {
            assert_eq!(minors[k] as i128, leibniz(&m, s, s), "subset {s:?}");
        }
    }
}

pub fn adjugate_matches_cofactors() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let m = random_int_sym(&mut rng);
        let adj = adjugate(&to_f64(&m));
        for i in 0..5 {
            for j in 0..5 {
                // adj[i][j] = (−1)^{i+j} · minor with row j and column i removed.
                let rows: Vec<usize> = (0..5).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..5).filter(|&c| c != i).collect();
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                assert_eq!(adj.get(i, j) as i128, sign * leibniz(&m, &rows, &cols));
            }
        }
    }
}

pub fn adjugate_identity_on_real_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let m = random_sym(&mut rng);
        let prod = adjugate(&m).full() * m;
        let d = m.det();
        let norm = m.frobenius();
        for i in 0..5 {
            for j in 0..5 {
                let e = if i == j { d } else { 0.0 };
                assert!((prod[i][j] - e).abs() < 1e-10 * (1.0 + norm));
            }
        }
    }
}

/// Characteristic polynomial coefficients by Faddeev–LeVerrier:
/// `λ⁵ + c[4]λ⁴ + … + c[0]`.
fn char_poly(m: &[[f64; 5]; 5]) -> [f64; 5] {
    let mut c = [0.0; 5];
    let mut mk = [[0.0; 5]; 5];
    let mut prev_c = 1.0;
    let mut prev = [[0.0; 5]; 5];
    for k in 1..=5 {
        // M_k = A·(M_{k−1} + c_{n−k+1} I)
        let mut inner = prev;
        for i in 0..5 {
            inner[i][i] += prev_c;
        }
        if k == 1 {
            inner = [[0.0; 5]; 5];
            for i in 0..5 {
                inner[i][i] = 1.0;
            }
        }
        for i in 0..5 {
            for j in 0..5 {
                mk[i][j] = (0..5).map(|l| m[i][l] * inner[l][j]).sum();
            }
        }
        let tr: f64 = (0..5).map(|i| mk[i][i]).sum();
        let ck = -tr / k as f64;
        c[5 - k] = ck;
        prev = mk;
        prev_c = ck;
    }
    c
}

/// All roots by Durand–Kerner.
fn poly_roots(c: &[f64; 5]) -> [Complex64; 5] {
    let p = |z: Complex64| {
        let mut acc = Complex64::new(1.0, 0.0);
        for k in (0..5).rev() {
            acc = acc * z + c[k];
        }
        acc
    };
    let mut z: [Complex64; 5] = core::array::from_fn(|k| Complex64::new(0.4, 0.9).powu(k as u32) * 2.0);
    for _ in 0..2000 {
        let old = z;
        for i in 0..5 {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..5 {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            z[i] -= p(z[i]) / den;
        }
        if (0..5).all(|i| (z[i] - old[i]).norm() < 1e-15 * (1.0 + z[i].norm())) {
            break;
        }
    }
    z
}

pub fn eigenvalues_match_characteristic_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let m = random_sym(&mut rng);
        let ev = sym_eigenvalues(&m).unwrap();
        let mut roots: Vec<f64> = poly_roots(&char_poly(&m.full())).iter().map(|z| z.re).collect();
        roots.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in ev.iter().zip(&roots) {
            assert!((a - b).abs() < 1e-7, "{ev:?} vs {roots:?}");
        }
        let tr = m.trace();
        assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-9 * (1.0 + tr.abs()));
        let d = m.det();
        assert!((ev.iter().product::<f64>() - d).abs() < 1e-9 * (1.0 + d.abs()));
    }
}

fn random_pencil(rng: &mut ChaCha8Rng) -> [SymMat5<f64>; 4] {
    core::array::from_fn(|_| random_sym(rng))
}

pub fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..1000 {
        let mats = random_pencil(&mut rng);
        let p: [f64; 4] = core::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let (_, g) = det_and_grad(&mats, &p);
        let gnorm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        for k in 0..4 {
            let h = 1e-5;
            let (mut a, mut b) = (p, p);
            a[k] += h;
            b[k] -= h;
            let fd = (det_and_grad(&mats, &a).0 - det_and_grad(&mats, &b).0) / (2.0 * h);
            assert!((fd - g[k]).abs() <= 1e-5 * gnorm.max(1e-3), "k={k}: {fd} vs {}", g[k]);
        }
    }
}

pub fn residual_jacobian_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let mats = random_pencil(&mut rng).map(|m| m.to_complex());
        let chart = Chart::random(&mut rng);
        let (mix, c) = (chart.lift_mix(), chart.lift());
        let p: [Complex64; 4] =
            core::array::from_fn(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let (_, jac) = node_residual_jacobian(&mats, &mix, &c, &p);
        let scale = jac.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        for k in 0..4 {
            let h = 1e-5;
            let (mut a, mut b) = (p, p);
            a[k] += h;
            b[k] -= h;
            let (ra, rb) = (node_residual(&mats, &mix, &c, &a), node_residual(&mats, &mix, &c, &b));
            for i in 0..4 {
                let fd = (ra[i] - rb[i]) / (2.0 * h);
                assert!((fd - jac[i][k]).norm() <= 1e-5 * scale);
            }
        }
    }
}

pub fn lattice_distance_matches_bfs() {
    let gens = [(2i64, 2i64), (-2, -2), (2, 0), (-2, 0)];
    let mut dist = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert((0i64, 0i64), 0u32);
    queue.push_back((0i64, 0i64));
    while let Some((r, s)) = queue.pop_front() {
        let d = dist[&(r, s)];
        for (dr, ds) in gens {
            let n = (r + dr, s + ds);
            if n.0.abs() <= 80 && n.1.abs() <= 40 && !dist.contains_key(&n) {
                dist.insert(n, d + 1);
                queue.push_back(n);
            }
        }
    }
    let base = CombType { rho: 20, sigma: 20 };
    for dr in (-20..=20).step_by(2) {
        for ds in (-20..=20).step_by(2) {
            let to = CombType { rho: (20 + dr) as u32, sigma: (20 + ds) as u32 };
            assert_eq!(lattice_distance(base, to).unwrap(), dist[&(dr, ds)], "Δ=({dr},{ds})");
        }
    }
}

fn q(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

fn within(x: &BigRational, i: &Interval) -> bool {
    q(i.lo) <= *x && *x <= q(i.hi)
}

fn random_float(rng: &mut ChaCha8Rng) -> f64 {
    let m: f64 = rng.random_range(-1.0..1.0);
    m * 2f64.powi(rng.random_range(-30..30))
}

/// A random interval and an exact rational point inside it.
fn random_interval(rng: &mut ChaCha8Rng) -> (Interval, BigRational) {
    let a = random_float(rng);
    if rng.random_bool(0.5) {
        return (Interval::point(a), q(a));
    }
    let r = a.abs() * 2f64.powi(-rng.random_range(1..40));
    let i = Interval::around(a, r);
    let t = BigRational::new(BigInt::from(rng.random_range(0..=16u32)), BigInt::from(16));
    let x = q(i.lo) + (q(i.hi) - q(i.lo)) * t;
    (i, x)
}

pub fn interval_ops_enclose_rational_results() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ops = 0usize;
    while ops < 1_000_000 {
        // Chains of four operations; the exact value must stay inside.
        let (mut acc, mut exact) = random_interval(&mut rng);
        for _ in 0..4 {
            let (y, ye) = random_interval(&mut rng);
            match rng.random_range(0..6) {
                0 => {
                    acc = acc + y;
                    exact = exact + ye;
                }
                1 => {
                    acc = acc - y;
                    exact = exact - ye;
                }
                2 => {
                    acc = acc * y;
                    exact = exact * ye;
                }
                3 => match acc.checked_div(y) {
                    Ok(r) => {
                        acc = r;
                        exact = exact / ye;
                    }
                    Err(_) => assert!(y.contains_zero()),
                },
                4 => {
                    acc = acc.sq();
                    exact = &exact * &exact;
                }
                _ => {
                    acc = -acc;
                    exact = -exact;
                }
            }
            ops += 1;
            assert!(within(&exact, &acc), "{exact} not in {acc:?}");
        }
    }
}

pub fn complex_interval_ops_enclose_rational_results() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20_000 {
        let (ar, are) = random_interval(&mut rng);
        let (ai, aie) = random_interval(&mut rng);
        let (br, bre) = random_interval(&mut rng);
        let (bi, bie) = random_interval(&mut rng);
        let a = CInterval::new(ar, ai);
        let b = CInterval::new(br, bi);
        let p = a * b;
        assert!(within(&(&are * &bre - &aie * &bie), &p.re));
        assert!(within(&(&are * &bie + &aie * &bre), &p.im));
        let s = a - b;
        assert!(within(&(&are - &bre), &s.re) && within(&(&aie - &bie), &s.im));
        if let Ok(d) = a.checked_div(b) {
            let den = &bre * &bre + &bie * &bie;
            if !den.is_zero() {
                let re = (&are * &bre + &aie * &bie) / &den;
                let im = (&aie * &bre - &are * &bie) / &den;
                assert!(within(&re, &d.re) && within(&im, &d.im));
            }
        }
        let sq = a.sq();
        assert!(within(&(&are * &are - &aie * &aie), &sq.re));
        assert!(within(&(BigRational::from_integer(2.into()) * &are * &aie), &sq.im));
        assert!(!(a.mag() < 0.0) && (are.abs() <= q(a.mag()) || are.is_zero()));
    }
}
