use super::{check_tau, theta_eval, NResult, NumError};
use crate::mp::{Cx, Prec, Real};
use crate::quad;

/// Subdivision budget for the Mordell integral.
const H_BUDGET: usize = 4096;

/// Bare bilateral Appell sum
/// `e^{pi i z1} sum_n (-1)^n q^{n(n+1)/2} zeta2^n / (1 - q^n zeta1)`.
pub fn appell_sum(z1: &Cx, z2: &Cx, tau: &Cx, prec: Prec) -> NResult<Cx> {
    Ok(appell_sum_raw(z1, z2, tau, prec)?.0)
}

/// Returns the sum together with `log2` of its largest term.
fn appell_sum_raw(z1: &Cx, z2: &Cx, tau: &Cx, prec: Prec) -> NResult<(Cx, f64)> {
    check_tau(tau)?;
    let bits = prec.bits();
    let w = bits + 32;
    let tau = tau.with_prec(w);
    let q = tau.e2pi();
    let z1e = z1.with_prec(w).e2pi();
    let z2e = z2.with_prec(w).e2pi();
    let z1i = z1e.recip();
    let z2i = z2e.recip();
    let one = Cx::one(w);
    let pole_l2 = prec.eps_log2() + 10f64.log2();
    let stop = -(w as f64) - 8.0;
    let mut sum = Cx::zero(w);
    let mut maxl = f64::NEG_INFINITY;

    // n >= 0: numerator t_n, denominator 1 - x_n with x_n = q^n zeta1.
    let mut t = one.clone();
    let mut x = z1e.clone();
    let mut r = -(&q * &z2e);
    let mut n = 0i64;
    loop {
        let d = &one - &x;
        if d.log2_abs() < pole_l2 + x.log2_abs().max(0.0) {
            return Err(NumError::Pole(format!("1 - q^{n} zeta1 vanishes")));
        }
        let term = t.div(&d);
        let tl = term.log2_abs();
        sum = &sum + &term;
        maxl = maxl.max(tl);
        if r.log2_abs() < -1.0 && x.log2_abs() < -1.0 && tl < maxl + stop {
            break;
        }
        t = &t * &r;
        r = &r * &q;
        x = &x * &q;
        n += 1;
        assert!(n < 10_000_000, "Appell sum failed to terminate");
    }

    // n = -m < 0: y = q^m / zeta1, term = num * (-y) / (1 - y).
    let mut num = -z2i.clone();
    let mut y = &q * &z1i;
    let mut r = -(&q * &z2i);
    let mut m = 1i64;
    loop {
        let d = &one - &y;
        if d.log2_abs() < pole_l2 + y.log2_abs() {
            return Err(NumError::Pole(format!("1 - q^-{m} zeta1 vanishes")));
        }
        let term = -(&num * &y).div(&d);
        let tl = term.log2_abs();
        sum = &sum + &term;
        maxl = maxl.max(tl);
        if r.log2_abs() < -1.0 && y.log2_abs() < -1.0 && tl < maxl + stop {
            break;
        }
        num = &num * &r;
        r = &r * &q;
        y = &y * &q;
        m += 1;
        assert!(m < 10_000_000, "Appell sum failed to terminate");
    }
    let pre = z1.with_prec(w).epi();
    Ok(((&pre * &sum).with_prec(bits), maxl + pre.log2_abs()))
}

/// `mu(z1, z2; tau) = appell_sum / theta(z2; tau)`.
pub fn mu(z1: &Cx, z2: &Cx, tau: &Cx, prec: Prec) -> NResult<Cx> {
    let th = theta_eval(z2, tau, prec)?;
    if th.cancelled || th.value.is_zero() {
        return Err(NumError::Divide);
    }
    let (s, _) = appell_sum_raw(z1, z2, tau, prec)?;
    Ok(s.div(&th.value))
}

/// `A(2 tau + 1/2, 1/2; 24 tau) = i q sum_n q^{12(n^2+n)} / (1 + q^{24n+2})`.
#[allow(non_snake_case)]
pub fn appell_A(tau: &Cx, prec: Prec) -> NResult<Cx> {
    check_tau(tau)?;
    let bits = prec.bits();
    let w = bits + 32;
    let q = tau.with_prec(w).e2pi();
    let q2 = q.sqr();
    let q24 = q.powi(24);
    let one = Cx::one(w);
    let pole_l2 = prec.eps_log2() + 10f64.log2();
    let stop = -(w as f64) - 8.0;
    let mut sum = Cx::zero(w);
    let mut maxl = f64::NEG_INFINITY;
    // n >= 0: numerator q^{12 n(n+1)}, ratio q^{24(n+1)}.
    let mut t = one.clone();
    let mut r = q24.clone();
    let mut x = q2.clone();
    loop {
        let d = &one + &x;
        if d.log2_abs() < pole_l2 {
            return Err(NumError::Pole("1 + q^{24n+2} vanishes".into()));
        }
        let term = t.div(&d);
        let tl = term.log2_abs();
        sum = &sum + &term;
        maxl = maxl.max(tl);
        if tl < maxl + stop && r.log2_abs() < -1.0 {
            break;
        }
        t = &t * &r;
        r = &r * &q24;
        x = &x * &q24;
    }
    // n = -m: q^{12 m(m-1)} / (1 + q^{2-24m}) = q^{12 m(m-1)} y / (1 + y), y = q^{24m-2}.
    let q2i = q2.recip();
    let mut t = one.clone();
    let mut r = q24.clone();
    let mut y = &q24 * &q2i;
    loop {
        let d = &one + &y;
        if d.log2_abs() < pole_l2 + y.log2_abs() {
            return Err(NumError::Pole("1 + q^{24n+2} vanishes".into()));
        }
        let term = (&t * &y).div(&d);
        let tl = term.log2_abs();
        sum = &sum + &term;
        maxl = maxl.max(tl);
        if tl < maxl + stop && r.log2_abs() < -1.0 {
            break;
        }
        t = &t * &r;
        r = &r * &q24;
        y = &y * &q24;
    }
    Ok((&q * &sum).mul_i().with_prec(bits))
}

/// Mordell integral `h(z; tau) = int_R e^{pi i tau x^2 - 2 pi z x} / cosh(pi x) dx`.
pub fn mordell_h(z: &Cx, tau: &Cx, prec: Prec) -> NResult<Cx> {
    check_tau(tau)?;
    let v = tau.im.to_f64();
    let rez = z.re.to_f64().abs();
    let pi = std::f64::consts::PI;
    // log envelope L(x) = ln 2 - pi v x^2 + c1 |x|
    let c1 = pi * (2.0 * rez - 1.0);
    let xs = (c1 / (2.0 * pi * v)).max(0.0);
    let lmax = 2f64.ln() - pi * v * xs * xs + c1 * xs;
    let ln_eps = prec.eps_log2() * 2f64.ln() - 4.0;
    let k = 2f64.ln() - lmax - ln_eps;
    let xmax = (c1 + (c1 * c1 + 4.0 * pi * v * k).sqrt()) / (2.0 * pi * v);
    // extra bits cover cancellation against the envelope peak
    let w = prec.bits() + 32 + (lmax.max(0.0) / 2f64.ln()).ceil() as u32;
    let tau = tau.with_prec(w);
    let z = z.with_prec(w);
    let pi_r = Real::pi(w);
    let a = Real::from_f64(-xmax, w);
    let b = Real::from_f64(xmax, w);
    let tol = prec.eps_log2() - 8.0 + lmax / 2f64.ln();
    let f = |x: &Real| {
        let x2 = x.sqr();
        let e = Cx::new(-(&tau.im * &x2), &tau.re * &x2).scale(&pi_r) - z.scale(x).scale(&pi_r).mul_2k(1);
        e.exp().scale(&pi_r.mul(x).cosh().recip())
    };
    let r = quad::integrate(f, &a, &b, 0.25, tol, H_BUDGET).ok_or(NumError::NonConverged)?;
    Ok(r.with_prec(prec.bits()))
}
