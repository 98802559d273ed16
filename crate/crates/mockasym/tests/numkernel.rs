use mockasym::exactq;
use mockasym::numkernel::*;
use mockasym::{Cx, Prec, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P30: Prec = Prec { digits: 30 };

fn c(re: f64, im: f64, p: Prec) -> Cx {
    Cx::from_f64(re, im, p.bits())
}

fn tau_at(u: f64, v: f64, p: Prec) -> Cx {
    HPoint::from_f64(u, v, p).unwrap().tau()
}

fn close(a: &Cx, b: &Cx, tol: f64) -> bool {
    Cx::rel_err(a, b) <= tol
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(20240611)
}

/// `-i q^{1/8} zeta^{-1/2} prod (1-q^n)(1-zeta q^{n-1})(1-q^n/zeta)`, truncated by hand.
fn triple_product(z: &Cx, tau: &Cx, terms: usize) -> Cx {
    let w = tau.prec();
    let q = tau.e2pi();
    let zeta = z.e2pi();
    let zi = zeta.recip();
    let one = Cx::one(w);
    let mut p = one.clone();
    let mut qn = one.clone();
    for _ in 0..terms {
        let next = &qn * &q;
        p = p * (&one - &next) * (&one - &zeta * &qn) * (&one - &zi * &next);
        qn = next;
    }
    let pre = (tau.scale(&Real::from_ratio(1, 8, w)) - z.scale(&Real::from_ratio(1, 2, w))).e2pi();
    -(pre * p).mul_i()
}

fn eta_product(tau: &Cx, terms: usize) -> Cx {
    let w = tau.prec();
    let q = tau.e2pi();
    let one = Cx::one(w);
    let mut p = one.clone();
    let mut qn = one.clone();
    for _ in 0..terms {
        qn = &qn * &q;
        p = p * (&one - &qn);
    }
    tau.scale(&Real::from_ratio(1, 24, w)).e2pi() * p
}

#[test]
fn theta_vanishes_at_origin() {
    for (u, v) in [(0.0, 1.0), (0.3, 0.5), (-0.41, 1.7)] {
        let t = theta(&c(0.0, 0.0, P30), &tau_at(u, v, P30), P30).unwrap();
        assert!(t.abs_f64() < 1e-25);
    }
}

#[test]
fn theta_is_the_triple_product() {
    let p = P30;
    let mut r = rng();
    for _ in 0..20 {
        let tau = tau_at(r.gen_range(-0.5..0.5), r.gen_range(0.4..2.0), p);
        let z = c(r.gen_range(-1.0..1.0), r.gen_range(-0.5..0.5), p);
        let a = theta(&z, &tau, p).unwrap();
        let b = triple_product(&z.with_prec(p.bits() + 40), &tau.with_prec(p.bits() + 40), 120);
        assert!(close(&a, &b, p.eps() * 100.0), "{}", Cx::rel_err(&a, &b));
    }
}

#[test]
fn theta_half_is_an_eta_quotient() {
    let p = P30;
    let mut r = rng();
    for _ in 0..10 {
        let tau = tau_at(r.gen_range(-0.5..0.5), r.gen_range(0.3..2.0), p);
        let half = Cx::from_ratio(1, 2, p.bits());
        let a = theta(&half, &tau, p).unwrap();
        let w = p.bits() + 40;
        let e1 = eta_product(&tau.with_prec(w), 200);
        let e2 = eta_product(&tau.with_prec(w).mul_int(2), 200);
        let b = -(e2.sqr() / e1).mul_int(2);
        assert!(close(&a, &b, p.eps() * 100.0), "{}", Cx::rel_err(&a, &b));
    }
}

#[test]
fn theta_examples() {
    let p = P30;
    let tau = tau_at(0.17, 0.8, p);
    let z = c(0.3, -0.2, p);
    let a = theta(&z.add_real(&Real::one(p.bits())), &tau, p).unwrap();
    assert!(close(&a, &-theta(&z, &tau, p).unwrap(), 1e-25));
    // the cancellation flag fires only at a genuine zero
    let tau = tau_at(0.0, 1.0, p);
    assert!(theta_eval(&c(0.0, 0.0, p), &tau, p).unwrap().cancelled);
    assert!(!theta_eval(&z, &tau, p).unwrap().cancelled);
}

#[test]
fn eta_examples() {
    let p = P30;
    let e = eta(&tau_at(0.0, 10.0, p), p).unwrap();
    let want = (-Real::pi(p.bits()).mul_int(20).div_int(24)).exp();
    assert!(close(&Cx::from_real(e.abs()), &Cx::from_real(want), 1e-25));
    let tau = tau_at(0.23, 0.61, p);
    let a = eta(&tau.add_real(&Real::one(p.bits())), p).unwrap();
    let ph = Cx::from_ratio(1, 12, p.bits()).epi();
    assert!(close(&a, &(ph * eta(&tau, p).unwrap()), 1e-25));
    for tau in [tau_at(0.0, 1.0, p), tau_at(0.31, 0.77, p)] {
        let l = eta(&-tau.recip(), p).unwrap();
        let r = (-tau.mul_i()).sqrt() * eta(&tau, p).unwrap();
        assert!(close(&l, &r, 1e-25));
    }
    let tau = tau_at(0.1, 0.45, p);
    assert!(close(&eta(&tau, p).unwrap(), &eta_product(&tau.with_prec(p.bits() + 40), 400), 1e-25));
}

/// Bilateral sum over `|n| <= 60` with no tail logic.
fn naive_appell(z1: &Cx, z2: &Cx, tau: &Cx) -> Cx {
    let w = tau.prec();
    let q = tau.e2pi();
    let a = z1.e2pi();
    let b = z2.e2pi();
    let one = Cx::one(w);
    let mut s = Cx::zero(w);
    for n in -60i64..=60 {
        let qn = if n >= 0 { q.powi(n as u64) } else { q.powi((-n) as u64).recip() };
        let bn = if n >= 0 { b.powi(n as u64) } else { b.powi((-n) as u64).recip() };
        let tri = q.powi(((n * n + n) / 2) as u64);
        let sgn = if n % 2 == 0 { 1 } else { -1 };
        s = s + (tri * bn / (&one - qn * &a)).mul_int(sgn);
    }
    z1.epi() * s
}

#[test]
fn mu_normalization_and_laws() {
    let p = P30;
    let mut r = rng();
    for _ in 0..8 {
        let tau = tau_at(r.gen_range(-0.5..0.5), r.gen_range(0.5..1.5), p);
        let z1 = c(r.gen_range(-1.0..1.0), r.gen_range(-0.4..0.4), p);
        let z2 = c(r.gen_range(-1.0..1.0), r.gen_range(-0.4..0.4), p);
        let m = mu(&z1, &z2, &tau, p).unwrap();
        let lhs = &m * theta(&z2, &tau, p).unwrap();
        let w = p.bits() + 40;
        let rhs = naive_appell(&z1.with_prec(w), &z2.with_prec(w), &tau.with_prec(w));
        assert!(close(&lhs, &rhs, p.eps() * 100.0), "{}", Cx::rel_err(&lhs, &rhs));
        let one = Real::one(p.bits());
        assert!(close(&mu(&z1.add_real(&one), &z2, &tau, p).unwrap(), &-m.clone(), 1e-25));
        let ph = Cx::from_ratio(-1, 4, p.bits()).epi();
        assert!(close(&mu(&z1, &z2, &tau.add_real(&one), p).unwrap(), &(ph * &m), 1e-25));
    }
}

#[test]
fn mu_reports_poles_and_zero_divisors() {
    let p = P30;
    let tau = tau_at(0.1, 0.9, p);
    let z2 = c(0.3, 0.1, p);
    assert!(matches!(mu(&c(0.0, 0.0, p), &z2, &tau, p), Err(NumError::Pole(_))));
    assert!(matches!(mu(&(-tau.mul_int(2)), &z2, &tau, p), Err(NumError::Pole(_))));
    assert!(matches!(mu(&(&tau).add_real(&Real::one(p.bits())), &z2, &tau, p), Err(NumError::Pole(_))));
    assert!(matches!(mu(&z2, &c(0.0, 0.0, p), &tau, p), Err(NumError::Divide)));
    assert!(matches!(mu(&z2, &z2, &c(0.1, -0.2, p), p), Err(NumError::NotUpperHalfPlane)));
}

#[test]
fn mordell_integral() {
    let p = P30;
    let h0 = mordell_h(&c(0.0, 0.0, p), &tau_at(0.0, 1.0, p), p).unwrap();
    assert!(h0.re.signum() > 0 && h0.im.to_f64().abs() < 1e-28);
    // elliptic relations: h(z) + h(z+1) = 2/sqrt(-i tau) e^{pi i (z+1/2)^2/tau},
    // h(z) + e^{-2 pi i z - pi i tau} h(z+tau) = 2 e^{-pi i z - pi i tau/4}
    let mut r = rng();
    for _ in 0..4 {
        let tau = tau_at(r.gen_range(-0.5..0.5), r.gen_range(0.5..1.5), p);
        let z = c(r.gen_range(-0.8..0.8), r.gen_range(-0.4..0.4), p);
        let one = Real::one(p.bits());
        let h = mordell_h(&z, &tau, p).unwrap();
        let h1 = mordell_h(&z.add_real(&one), &tau, p).unwrap();
        let half = Real::from_ratio(1, 2, p.bits());
        let rhs = ((z.add_real(&half).sqr() / &tau).epi() / (-tau.mul_i()).sqrt()).mul_int(2);
        assert!(close(&(&h + &h1), &rhs, 1e-25), "{}", Cx::rel_err(&(&h + &h1), &rhs));
        let ht = mordell_h(&(&z + &tau), &tau, p).unwrap();
        let lhs = &h + ((z.mul_int(2) + &tau).mul_int(-1).epi() * ht);
        let rhs = (-(z + tau.scale(&Real::from_ratio(1, 4, p.bits())))).epi().mul_int(2);
        assert!(close(&lhs, &rhs, 1e-25), "{}", Cx::rel_err(&lhs, &rhs));
    }
    // h(alpha tau; tau) stays bounded as tau = it shrinks
    let p15 = Prec::new(20);
    for t in [1.0, 0.5, 0.2, 0.1, 0.05] {
        let tau = tau_at(0.0, t, p15);
        let v = mordell_h(&tau.scale(&Real::from_f64(0.3, p15.bits())), &tau, p15).unwrap();
        assert!(v.abs_f64() < 2.0, "t={t}: {}", v.abs_f64());
    }
}

#[test]
fn theta_big_and_appell_a() {
    let p = P30;
    let one = Cx::one(p.bits());
    assert!(close(&theta_big(&tau_at(0.0, 50.0, p), p).unwrap(), &one, 1e-28));
    let t = theta_big(&tau_at(0.0, 1.0, p), p).unwrap();
    assert!(t.re.to_f64() > 1.0 && t.im.to_f64().abs() < 1e-28);

    let tau = tau_at(0.13, 0.4, p);
    let w = p.bits();
    let half = Real::from_ratio(1, 2, w);
    let z1 = tau.mul_int(2).add_real(&half);
    let z2 = Cx::from_real(half.clone());
    let t24 = tau.mul_int(24);
    let want = theta(&z2, &t24, p).unwrap() * mu(&z1, &z2, &t24, p).unwrap();
    assert!(close(&appell_A(&tau, p).unwrap(), &want, p.eps() * 100.0));

    let tau = tau_at(0.2, 6.0, p);
    let q = tau.e2pi();
    let lead = (&q / (Cx::one(w) + q.sqr())).mul_i();
    assert!(close(&appell_A(&tau, p).unwrap(), &lead, 1e-28));

    let mut r = rng();
    for _ in 0..10 {
        let v = r.gen_range(0.05..1.0);
        let tau = tau_at(r.gen_range(-0.5..0.5), v, p);
        let a = appell_A(&tau, p).unwrap().abs_f64();
        let qa = (-2.0 * std::f64::consts::PI * v).exp();
        let bound = theta_big(&tau_at(0.0, v, p), p).unwrap().re.to_f64() / (1.0 - qa * qa);
        assert!(a <= bound, "v={v}: {a} > {bound}");
    }
}

#[test]
fn jacobi_triple_products() {
    let p = P30;
    let tau = tau_at(0.0, 0.3, p);
    let w = p.bits() + 40;
    let q = tau.with_prec(w).e2pi();
    let q3 = q.powi(3);
    let one = Cx::one(w);
    let mut prod = one.clone();
    let mut k = one.clone();
    for _ in 0..80 {
        prod = prod * (&one - &q * &k) * (&one - q.sqr() * &k) * (&one - &q3 * &k);
        k = &k * &q3;
    }
    let j = jtheta_convert(Q::from_integer(1), Q::from_integer(3), false, &tau, p).unwrap();
    assert!(close(&j, &prod, p.eps() * 100.0));

    let j = jtheta_convert(Q::from_integer(0), Q::from_integer(24), true, &tau_at(0.0, 0.2, p), p).unwrap();
    assert!(j.abs_f64() > 1.0);

    // theta -> j -> theta
    let tau = tau_at(0.11, 0.7, p);
    let (a, b) = (Q::new(5, 3), Q::new(7, 2));
    for half in [false, true] {
        let j = jtheta_convert(a, b, half, &tau, p).unwrap();
        let w = p.bits();
        let mut z = tau.scale(&Real::from_ratio(5, 3, w));
        if half {
            z = z.add_real(&Real::from_ratio(1, 2, w));
        }
        let th = theta(&z, &tau.scale(&Real::from_ratio(7, 2, w)), p).unwrap();
        let f = tau.scale(&Real::from_ratio(-19, 48, w)).e2pi();
        // theta = -i q^{b/8 - a/2} j  or  -q^{b/8 - a/2} j
        let back = if half { -(&f * &j) } else { -(&f * &j).mul_i() };
        assert!(close(&th, &back, 1e-25), "{}", Cx::rel_err(&th, &back));
    }
}

#[test]
fn t_forms_agree() {
    let p = P30;
    assert_eq!((Q_rs(1, 0), Q_rs(0, 1)), (6, 6));
    let tau = tau_at(0.22, 0.35, p);
    let a = T_fn(&tau, p).unwrap();
    let b = T_raw(&tau, p).unwrap();
    let cc = T_jform(&tau, p).unwrap();
    assert!(close(&a, &b, 1e-25), "{}", Cx::rel_err(&a, &b));
    assert!(close(&a, &cc, 1e-25), "{}", Cx::rel_err(&a, &cc));
    let tau = tau_at(0.0, 0.28, p);
    let a = T_fn(&tau, p).unwrap();
    let b = T_theta_np(&tau, p).unwrap();
    assert!(close(&a, &b, 1e-25), "{}", Cx::rel_err(&a, &b));
}

#[test]
fn varsigma_symmetries() {
    let p = P30;
    let tau = tau_at(0.0, 0.31, p);
    let scale = varsigma(1, 0, &tau, p).unwrap().abs_f64();
    for r in 0..4 {
        assert!(varsigma(r, r, &tau, p).unwrap().abs_f64() < 1e-25 * scale);
        for s in 0..4 {
            if r == s {
                continue;
            }
            let a = varsigma(s, r, &tau, p).unwrap();
            let b = varsigma(r, s, &tau, p).unwrap().mul_int(if (r + s) % 2 == 0 { -1 } else { 1 });
            assert!(close(&a, &b, 1e-25));
        }
    }
}

#[test]
fn t_decays_toward_zero() {
    // |T(it)| <= C t^{-1/2} |q0|^{1/96} with one constant along t in [0.05, 0.2]
    let p = Prec::new(40);
    let mut ratios = Vec::new();
    for t in [0.2, 0.15, 0.1, 0.07, 0.05] {
        let v = T_fn(&tau_at(0.0, t, p), p).unwrap().abs_f64();
        let env = t.powf(-0.5) * (-2.0 * std::f64::consts::PI / (96.0 * t)).exp();
        ratios.push(v / env);
    }
    assert!(ratios.iter().all(|r| *r < 30.0), "{ratios:?}");
    assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
}

fn series_value(s: &exactq::QSeries, tau: &Cx, p: Prec) -> Cx {
    q_sum(&s.coeffs, s.offset, tau, p)
}

/// The exact tail past q^200 is of size c(201)|q|^201 with c(201) in the
/// thousands (a) or millions (b), so the analytic forms are compared with
/// partial sums to q^260, whose tail sits far below 10|q|^201.
#[test]
fn analytic_forms_match_exact_coefficients() {
    let p = Prec::new(350);
    let n = 260;
    let a = exactq::expand_R3(3, n);
    let b = exactq::expand_nu_neg(n);
    for (u, v) in [(0.0, 0.6), (0.21, 0.55), (-0.37, 0.5)] {
        let tau = tau_at(u, v, p);
        let bound_l2 = 10f64.log2() + 201.0 * (-2.0 * std::f64::consts::PI * v) / std::f64::consts::LN_2;
        let d = (R33_fn(&tau, p).unwrap() - series_value(&a, &tau, p)).log2_abs();
        assert!(d <= bound_l2, "R33 at {u}+{v}i: 2^{d} > 2^{bound_l2}");
        let d = (R31_fn(&tau, p).unwrap() - series_value(&b, &tau, p)).log2_abs();
        assert!(d <= bound_l2, "R31 at {u}+{v}i: 2^{d} > 2^{bound_l2}");
    }
    let p = P30;
    let tau = tau_at(0.13, 0.45, p);
    let a = R33_fn(&tau, p).unwrap();
    let b = R33_fn(&tau.add_real(&Real::one(p.bits())), p).unwrap();
    assert!(close(&a, &b, 1e-25));
}

#[test]
fn validator_reports_every_law_passing() {
    let p = P30;
    let samples = Sample::random(20, 7, p);
    let reps = validate_transforms(&samples, p);
    for r in &reps {
        assert!(r.pass, "{} at {}: {} ({})", r.law, r.sample, r.rel_err, r.note);
    }
    assert!(reps.iter().any(|r| r.law.starts_with("mu(-1/tau)") && r.note == "printed sign holds"));
    let laws: std::collections::BTreeSet<_> = reps.iter().map(|r| r.law.clone()).collect();
    assert_eq!(laws.len(), 11 + 5 + 5);
    assert_eq!(reps.len(), laws.len() * 20);
}

#[test]
fn precision_doubling_never_hurts() {
    let lo = Prec::new(20);
    let hi = Prec::new(40);
    let a = validate_transforms(&Sample::random(4, 11, lo), lo);
    let b = validate_transforms(&Sample::random(4, 11, hi), hi);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        if x.pass {
            // an error reported below the coarse eps is rounding luck, not a baseline
            assert!(y.rel_err <= 10.0 * x.rel_err.max(lo.eps()), "{}: {} -> {}", x.law, x.rel_err, y.rel_err);
        }
    }
}
