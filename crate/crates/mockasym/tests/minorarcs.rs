use mockasym::cuspasym::Cusp;
use mockasym::minorarcs::*;
use mockasym::numkernel::{theta, Q};
use mockasym::{Cx, Prec, Real};
use std::time::Instant;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn phi(n: i64) -> i64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as i64
}

/// Fractions as reduced (num, den) pairs with den > 0.
fn red(n: i64, d: i64) -> (i64, i64) {
    let g = gcd(n, d).max(1);
    (n / g * d.signum(), d.abs() / g)
}

fn add(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    red(a.0 * b.1 + b.0 * a.1, a.1 * b.1)
}

fn scale(k: i64, a: (i64, i64)) -> (i64, i64) {
    red(k * a.0, a.1)
}

/// Straight-line F: P = (x^2 + 1/4 - x) / H^2 with x = {num/den}.
fn f_oracle(a: [i64; 4], p: i64, h: i64) -> (i64, i64) {
    let pp = |hn: i64, hd: i64, bn: i64, bd: i64| -> (i64, i64) {
        let xn = bn.rem_euclid(bd);
        // (xn^2/bd^2 + 1/4 - xn/bd) * hd^2 / hn^2
        red((4 * xn * xn + bd * bd - 4 * xn * bd) * hd * hd, 4 * bd * bd * hn * hn)
    };
    let m = |k: i64| (k * p) % h;
    let g288 = gcd(h, m(288));
    let g16 = gcd(h, m(16));
    let g96 = gcd(h, m(96));
    let p0 = pp(h, g288, m(96), g288);
    let p1 = pp(h, g16, (a[0] * p) % h, g16);
    let p2 = pp(h, g96, (a[1] * p) % h, g96);
    let p3 = pp(h, g96, (h + 2 * a[2] * p) % (2 * h), 2 * g96);
    let p4 = pp(h, g96, (h + 2 * a[3] * p) % (2 * h), 2 * g96);
    let g24 = gcd(h, m(24));
    let mut s = red(24 + g24 * g24, h * h);
    s = add(s, scale(-1, p0));
    s = add(s, scale(-6, p1));
    s = add(s, scale(-1, p2));
    s = add(s, p3);
    add(s, p4)
}

#[test]
fn cusp_sets_match_totient_counts() {
    for j in 2..=24 {
        let set = cusp_set(j);
        let want: i64 = (2..=j).step_by(2).map(phi).sum();
        assert_eq!(set.len() as i64, want, "j = {j}");
        let mut brute = vec![];
        for h in 1..=j {
            for p in 1..=j {
                if h % 2 == 0 && p < h && gcd(p, h) == 1 {
                    brute.push((p, h));
                }
            }
        }
        brute.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
        let got: Vec<_> = set.iter().map(|c| (c.p, c.h)).collect();
        assert_eq!(got, brute);
    }
    let x24 = cusp_set(24);
    assert_eq!(x24.len(), 63);
    assert_eq!(x24.iter().filter(|c| **c != Cusp { p: 1, h: 2 }).count(), 62);
}

#[test]
fn p_j_is_a_bounded_quadratic() {
    for a in T_VECTORS {
        for c in cusp_set(24) {
            for j in 0..5 {
                let (hh, b) = hj_betaj(j, a, c).unwrap();
                assert!(hh >= Q::from_integer(1));
                let x = b - b.floor();
                let top = x * x + Q::new(1, 4) - x;
                assert!(top >= Q::from_integer(0) && top <= Q::new(1, 4));
                assert_eq!(p_j(j, a, c).unwrap(), top / (hh * hh));
            }
        }
    }
    // beta = 1/2 gives P = 0
    let c = Cusp { p: 1, h: 2 };
    let (_, b) = hj_betaj(3, ExpVector([2, 2, 2, 2]), c).unwrap();
    assert_eq!(b - b.floor(), Q::new(1, 2));
    assert_eq!(p_j(3, ExpVector([2, 2, 2, 2]), c).unwrap(), Q::from_integer(0));
}

#[test]
fn f_agrees_with_straight_line_oracle() {
    for a in T_VECTORS {
        for c in cusp_set(24) {
            let f = f_value(a, c).unwrap();
            assert_eq!((*f.numer(), *f.denom()), f_oracle(a.0, c.p, c.h), "{a} at {c}");
        }
    }
}

#[test]
fn f_lemma() {
    let t0 = Instant::now();
    let r = verify_f_lemma();
    assert!(t0.elapsed().as_secs_f64() < 1.0);
    assert_eq!(r.global_max_q, Q::new(13, 9));
    assert!(r.all_below_2);
    for v in &r.per_vector {
        assert_eq!(v.count, 62);
        assert!(v.all_below_2);
        assert_eq!(v.at_half, "5");
    }
    // with 1/2 the statement fails: F(1/2) = 5
    assert_eq!(r.count_with_half, 63);
    assert!(!r.all_below_2_with_half);
    let csv = f_table_csv();
    assert_eq!(csv.lines().count(), 1 + 4 * 63);
    assert!(csv.lines().any(|l| l.ends_with(",13,9,1.444444444444444")));
}

#[test]
fn rough_cusp_bound() {
    let r = rough_cusp_bound_report(0.99).unwrap();
    assert!(r.h_threshold_even > 24.0 && r.h_threshold_even < 24.5);
    assert!(r.h_threshold_odd_ok && (r.h_threshold_odd - 0.998).abs() < 1e-3);
    assert!(rough_cusp_bound_report(0.2).is_err());
    assert!(rough_cusp_bound_report(1.5).is_err());
}

#[test]
fn envelopes_bound_reciprocal_thetas() {
    assert!((cone_epsilon(1.0) - 0.29289).abs() < 1e-5);
    // larger M means larger eps and a smaller envelope
    let e = |m| ln_bound_envelope(EnvelopeKind::Full, 4, 16, 1e4, 192f64.sqrt(), m).unwrap();
    assert!(e(2.0) < e(1.0) && e(4.0) < e(2.0));
    assert!(ln_bound_envelope(EnvelopeKind::Full, 16, 4, 1e4, 1.0, 1.0).is_err());

    const K: f64 = 1.0;
    let p = Prec::new(40);
    let delta = 192f64.sqrt();
    for n in [1e4, 1e5] {
        let v = 1.0 / (delta * f64::sqrt(n));
        let tau = Cx::new(Real::from_f64(2.5 * v, p.bits()), Real::from_f64(v, p.bits()));
        let full = theta(&tau.mul_int(4), &tau.mul_int(16), p).unwrap();
        let env = ln_bound_envelope(EnvelopeKind::Full, 4, 16, n, delta, 1.0).unwrap();
        assert!(-full.log2_abs() * std::f64::consts::LN_2 <= K.ln() + env, "n = {n}");
        let sh = theta(&tau.mul_int(4).add_real(&Real::from_ratio(1, 2, p.bits())), &tau.mul_int(16), p).unwrap();
        let env = ln_bound_envelope(EnvelopeKind::HalfShift, 4, 16, n, delta, 1.0).unwrap();
        assert!(-sh.log2_abs() * std::f64::consts::LN_2 <= K.ln() + env, "n = {n}");
        let half = theta(&Cx::from_real(Real::from_ratio(1, 2, p.bits())), &tau.mul_int(16), p).unwrap();
        let env = ln_bound_envelope(EnvelopeKind::ThetaHalf, 0, 16, n, delta, 1.0).unwrap();
        assert!(-half.log2_abs() * std::f64::consts::LN_2 <= K.ln() + env, "n = {n}");
    }
}
