use wigner_asym::asym::{
    asym_15j_four_small, asym_15j_one_small, asym_15j_three_small, asym_15j_two_small, asym_3nj,
    asym_9j_one_small, AsymOptions, AsymValue, SmallSpinMarking,
};
use wigner_asym::exact::{wigner15j, wigner9j, Pivot, Symbol3nj, Symbol9j};
use wigner_asym::HalfInt;

fn sym(j: &[i64], l: &[i64], k: &[i64]) -> Symbol3nj {
    Symbol3nj::from_twice(j, l, k).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn general(s: &Symbol3nj, ls: &[usize]) -> f64 {
    asym_3nj(s, &SmallSpinMarking::j1_with_l(ls), &AsymOptions::default()).unwrap().value
}

fn exact15(s: &Symbol3nj) -> f64 {
    let a = |v: &[HalfInt]| [v[0], v[1], v[2], v[3], v[4]];
    wigner15j(a(&s.j), a(&s.l), a(&s.k), 30).unwrap().to_f64()
}

/// 9j `{j1 j2 j12; s j4 j34; j13 j24 j5}` as the 3nj chain `j = (s, j34, j5)`,
/// `l = (j4, j12, j13)`, `k = (j24, j2, j1)` up to `(-1)^{R}`.
fn nine_as_chain(t: [i64; 9]) -> (Symbol3nj, f64) {
    let [j1, j2, j12, s, j4, j34, j13, j24, j5] = t;
    let total: i64 = t.iter().sum::<i64>() / 2;
    let sign = if total % 2 == 0 { 1.0 } else { -1.0 };
    (sym(&[s, j34, j5], &[j4, j12, j13], &[j24, j2, j1]), sign)
}

#[test]
fn chain_of_three_is_the_nine_j_formula() {
    for j24 in [14, 20, 26, 30] {
        let t = [172, 12, 172, 2, 24, 26, 174, j24, 172];
        let nine = asym_9j_one_small(&Symbol9j::from_twice(t), &AsymOptions::default()).unwrap().value;
        let (chain, sign) = nine_as_chain(t);
        let gen = sign * general(&chain, &[]);
        assert!(rel(gen, nine) < 1e-12, "j24 = {j24}: {gen} vs {nine}");
    }
    let t = [51, 53, 56, 1, 47, 48, 50, 54, 40];
    let nine = asym_9j_one_small(&Symbol9j::from_twice(t), &AsymOptions::default()).unwrap().value;
    let (chain, sign) = nine_as_chain(t);
    assert!(rel(sign * general(&chain, &[]), nine) < 1e-12);
}

#[test]
fn chain_of_three_exact_matches_nine_j() {
    let t = [51, 53, 56, 1, 47, 48, 50, 54, 40];
    let (chain, sign) = nine_as_chain(t);
    let a = wigner9j(&Symbol9j::from_twice(t), Pivot::J24, 40).value.to_f64();
    let b = sign * wigner_asym::exact::wigner3nj(&chain, 40).unwrap().to_f64();
    assert!(rel(b, a) < 1e-25, "{a} vs {b}");
}

fn check(name: &str, w: AsymValue, s: &Symbol3nj, ls: &[usize]) {
    let g = general(s, ls);
    assert!(rel(w.value, g) < 1e-12, "{name}: wrapper {} general {g}", w.value);
    let e = exact15(s);
    assert!(e != 0.0);
    assert!((w.value - e).abs() < 0.25 * e.abs(), "{name}: asym {} exact {e}", w.value);
}

#[test]
fn four_small_wrapper() {
    let s = sym(&[2, 160, 162, 160, 162], &[158, 2, 2, 2, 160], &[160, 160, 158, 160, 158]);
    let w = asym_15j_four_small(&s, &AsymOptions::default()).unwrap();
    check("four", w, &s, &[2, 3, 4]);
}

#[test]
fn three_small_wrapper() {
    let s = sym(&[2, 160, 162, 160, 160], &[158, 2, 2, 160, 158], &[160, 160, 158, 160, 160]);
    let w = asym_15j_three_small(&s, &AsymOptions::default()).unwrap();
    check("three", w, &s, &[2, 3]);
}

#[test]
fn two_small_wrapper_both_orderings() {
    let s = sym(&[2, 160, 162, 160, 160], &[158, 2, 152, 168, 160], &[160; 5]);
    let w = asym_15j_two_small(&s, &AsymOptions::default()).unwrap();
    check("two", w, &s, &[2]);
    let s = sym(&[2, 160, 162, 160, 160], &[158, 2, 168, 152, 160], &[160; 5]);
    let w = asym_15j_two_small(&s, &AsymOptions::default()).unwrap();
    check("two swapped", w, &s, &[2]);
}

#[test]
fn one_small_wrapper() {
    let s = sym(&[2, 160, 160, 160, 160], &[158, 150, 170, 156, 160], &[160; 5]);
    let w = asym_15j_one_small(&s, &AsymOptions::default()).unwrap();
    check("one", w, &s, &[]);
}

#[test]
fn half_integer_small_spin() {
    let s = sym(&[1, 161, 161, 161, 161], &[160, 150, 170, 156, 161], &[160; 5]);
    let w = asym_15j_one_small(&s, &AsymOptions::default()).unwrap();
    check("one, j1 = 1/2", w, &s, &[]);
    let s = sym(&[1, 161, 161, 161, 161], &[160, 2, 152, 168, 161], &[160; 5]);
    let w = asym_15j_two_small(&s, &AsymOptions::default()).unwrap();
    check("two, j1 = 1/2", w, &s, &[2]);
}
