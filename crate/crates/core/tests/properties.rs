use std::f64::consts::PI;

use proptest::prelude::*;

use wigner_asym::exact::{wigner3j, wigner6j, wigner9j, Pivot, Symbol9j};
use wigner_asym::geometry::{triangle_angle, Tetrahedron};
use wigner_asym::wigner_d::d;
use wigner_asym::{triad_allowed, HalfInt};

fn h(t: i64) -> HalfInt {
    HalfInt::from_twice(t)
}

fn fact(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn delta(a: i64, b: i64, c: i64) -> f64 {
    // twice-valued arguments
    (fact((a + b - c) / 2) * fact((a - b + c) / 2) * fact((-a + b + c) / 2) / fact((a + b + c) / 2 + 1)).sqrt()
}

/// Racah's single sum in plain floating point, for small spins.
fn racah_f64(t: [i64; 6]) -> f64 {
    let [a, b, c, dd, e, f] = t;
    let tri = [(a, b, c), (a, e, f), (dd, b, f), (dd, e, c)];
    if !tri.iter().all(|&(x, y, z)| triad_allowed(h(x), h(y), h(z))) {
        return 0.0;
    }
    let s: Vec<i64> = tri.iter().map(|&(x, y, z)| (x + y + z) / 2).collect();
    let q = [(a + b + dd + e) / 2, (a + c + dd + f) / 2, (b + c + e + f) / 2];
    let lo = *s.iter().max().unwrap();
    let hi = *q.iter().min().unwrap();
    let mut sum = 0.0;
    for z in lo..=hi {
        let den: f64 = s.iter().map(|&x| fact(z - x)).product::<f64>() * q.iter().map(|&x| fact(x - z)).product::<f64>();
        let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * fact(z + 1) / den;
    }
    tri.iter().map(|&(x, y, z)| delta(x, y, z)).product::<f64>() * sum
}

fn admissible_6j() -> impl Strategy<Value = [i64; 6]> {
    (0i64..=16, 0i64..=16, 0i64..=16, 0i64..=16, 0i64..=32, 0i64..=32).prop_filter_map(
        "admissible",
        |(a, b, dd, e, xc, xf)| {
            let c = (a - b).abs() + xc;
            let f = (a - e).abs() + xf;
            let t = [a, b, c, dd, e, f];
            wigner_asym::exact::six_j_admissible(t.map(h)).then_some(t)
        },
    )
}

fn six(t: [i64; 6]) -> wigner_asym::exact::SqrtRational {
    let [a, b, c, dd, e, f] = t.map(h);
    wigner6j(a, b, c, dd, e, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn six_j_matches_float_racah(t in admissible_6j()) {
        let exact = six(t).to_f64();
        let oracle = racah_f64(t);
        prop_assert!((exact - oracle).abs() < 1e-12 * oracle.abs().max(1e-3), "{exact} vs {oracle}");
    }

    #[test]
    fn six_j_tetrahedral_symmetry(t in admissible_6j()) {
        let [a, b, c, dd, e, f] = t;
        let v = six(t);
        // column permutations and swapping upper/lower in two columns
        prop_assert_eq!(&six([b, a, c, e, dd, f]), &v);
        prop_assert_eq!(&six([a, c, b, dd, f, e]), &v);
        prop_assert_eq!(&six([dd, e, c, a, b, f]), &v);
        prop_assert_eq!(&six([a, e, f, dd, b, c]), &v);
    }

    #[test]
    fn three_j_orthogonality(j1 in 0i64..=10, j2 in 0i64..=10, dj in 0i64..=20) {
        let j3 = (j1 - j2).abs() + 2 * (dj / 2);
        prop_assume!(j3 <= j1 + j2);
        let mut total = 0.0;
        for m1 in (-j1..=j1).step_by(2) {
            for m2 in (-j2..=j2).step_by(2) {
                let m3 = -m1 - m2;
                if m3.abs() <= j3 {
                    total += wigner3j(h(j1), h(j2), h(j3), h(m1), h(m2), h(m3)).to_f64().powi(2);
                }
            }
        }
        prop_assert!((total - 1.0).abs() < 1e-12, "{total}");
    }

    #[test]
    fn d_matrix_is_orthogonal(s in 0i64..=8, beta in 0.0..PI) {
        for mu in (-s..=s).step_by(2) {
            for mu2 in (-s..=s).step_by(2) {
                let dot: f64 = (-s..=s).step_by(2)
                    .map(|nu| d(h(s), h(mu), h(nu), beta).unwrap() * d(h(s), h(mu2), h(nu), beta).unwrap())
                    .sum();
                let expect = if mu == mu2 { 1.0 } else { 0.0 };
                prop_assert!((dot - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn d_matrix_composes(s in 0i64..=6, b1 in 0.0..PI / 2.0, b2 in 0.0..PI / 2.0) {
        for mu in (-s..=s).step_by(2) {
            for nu in (-s..=s).step_by(2) {
                let direct = d(h(s), h(mu), h(nu), b1 + b2).unwrap();
                let prod: f64 = (-s..=s).step_by(2)
                    .map(|k| d(h(s), h(mu), h(k), b1).unwrap() * d(h(s), h(k), h(nu), b2).unwrap())
                    .sum();
                prop_assert!((direct - prod).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn triangle_angle_against_law_of_cosines(a in 1.0..10.0f64, b in 1.0..10.0f64, t in 0.2..PI - 0.2) {
        let c = (a * a + b * b - 2.0 * a * b * t.cos()).sqrt();
        prop_assert!((triangle_angle(a, b, c).unwrap() - t).abs() < 1e-12);
    }

    #[test]
    fn cayley_menger_ignores_vertex_order(t in admissible_6j()) {
        let [a, b, c, dd, e, f] = t.map(|x| h(x).length());
        let v = Tetrahedron::new([a, b, c, dd, e, f]).unwrap().cayley_menger();
        // relabel vertices 0 ↔ 1: A fixed, B ↔ C, F ↔ E, D fixed
        let w = Tetrahedron::new([a, c, b, dd, f, e]).unwrap().cayley_menger();
        prop_assert!((v - w).abs() <= 1e-9 * v.abs().max(1.0));
    }

    #[test]
    fn nine_j_symmetries(seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let t: [i64; 9] = loop {
            let t: [i64; 9] = [(); 9].map(|_| rng.gen_range(0..=8));
            if Symbol9j::from_twice(t).is_admissible() {
                break t;
            }
        };
        let sym = Symbol9j::from_twice(t);
        let v = wigner9j(&sym, Pivot::J24, 40).value.to_f64();
        let sign = if (t.iter().sum::<i64>() / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let tr = wigner9j(&sym.transpose(), Pivot::J24, 40).value.to_f64();
        let sw = wigner9j(&sym.swap_rows(0, 1), Pivot::J24, 40).value.to_f64();
        prop_assert!((tr - v).abs() < 1e-14);
        prop_assert!((sw - sign * v).abs() < 1e-14);
    }
}

#[test]
fn regge_symmetry() {
    // {a b c; d e f} = {a s-c s-b; d s-f s-e} with s = (b+c+e+f)/2
    let t = [6, 8, 10, 8, 6, 4];
    let [a, b, c, dd, e, f] = t;
    let s = (b + c + e + f) / 2;
    let regge = [a, s - c, s - b, dd, s - f, s - e];
    assert_eq!(six(t), six(regge));
}
