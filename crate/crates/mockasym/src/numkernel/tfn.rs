#![allow(non_snake_case)]

use super::{eta, jtheta_eval, lattice_point, mu, qpow, scale_q, theta_eval, theta_np, NResult, NumError, QPowSpec, Q};
use crate::mp::{Cx, Prec, Real};
use num_bigint::BigInt;

fn half(w: u32) -> Real {
    Real::from_ratio(1, 2, w)
}

/// `theta(a tau (+ 1/2); b tau)`.
fn th(a: i64, b: i64, shift: bool, tau: &Cx, prec: Prec) -> NResult<Cx> {
    let z = lattice_point(Q::from_integer(a), shift, tau);
    Ok(theta_eval(&z, &tau.mul_int(b), prec)?.value)
}

/// Same, refusing values that are zero to working precision.
fn th_den(a: i64, b: i64, shift: bool, tau: &Cx, prec: Prec) -> NResult<Cx> {
    let z = lattice_point(Q::from_integer(a), shift, tau);
    let t = theta_eval(&z, &tau.mul_int(b), prec)?;
    if t.cancelled || t.value.is_zero() {
        return Err(NumError::Pole(format!("theta({}{a} tau; {b} tau) vanishes", if shift { "1/2 + " } else { "" })));
    }
    Ok(t.value)
}

fn theta_half(b: i64, tau: &Cx, prec: Prec) -> NResult<Cx> {
    let w = tau.prec();
    let t = theta_eval(&Cx::from_real(half(w)), &tau.mul_int(b), prec)?;
    if t.cancelled {
        return Err(NumError::Pole(format!("theta(1/2; {b} tau) vanishes")));
    }
    Ok(t.value)
}

/// `q^{417/8} theta^3(96 tau; 288 tau) / (theta(1/2; tau) theta(1/2; 24 tau))`.
fn outer(tau: &Cx, p: Prec) -> NResult<Cx> {
    let t96 = th(96, 288, false, tau, p)?;
    let den = theta_half(1, tau, p)? * theta_half(24, tau, p)?;
    Ok(qpow(Q::new(417, 8), tau) * t96.powi(3) / den)
}

pub fn Q_rs(r: i64, s: i64) -> i64 {
    r * (r - 1) / 2 + s * (s + 1) / 2 + 5 * s + 6 * r + 5 * r * s
}

/// One summand of the 16-term sum defining `T`.
pub fn varsigma(r: i64, s: i64, tau: &Cx, prec: Prec) -> NResult<Cx> {
    let p = prec.with_extra(4);
    let tau = tau.with_prec(p.bits());
    let num = th(4 * (s - r), 16, false, &tau, p)? * th(24 * (r + s) + 44, 96, false, &tau, p)?;
    let den = th_den(24 * r + 22, 96, true, &tau, p)? * th_den(24 * s + 22, 96, true, &tau, p)?;
    let sign = if r % 2 == 0 { 1 } else { -1 };
    Ok((qpow(Q::from_integer(Q_rs(r, s)), &tau) * num / den).mul_int(sign).with_prec(prec.bits()))
}

/// `T` as the unsimplified double sum over `r, s in {0..3}`.
pub fn T_raw(tau: &Cx, prec: Prec) -> NResult<Cx> {
    let p = prec.with_extra(4);
    let tau = tau.with_prec(p.bits());
    let mut s = Cx::zero(p.bits());
    for r in 0..4 {
        for ss in 0..4 {
            if r != ss {
                s = s + varsigma(r, ss, &tau, p)?;
            }
        }
    }
    Ok((outer(&tau, p)? * s).mul_i().mul_int(2).with_prec(prec.bits()))
}

/// `T` in its simplified four-term form.
pub fn T_fn(tau: &Cx, prec: Prec) -> NResult<Cx> {
    let p = prec.with_extra(4);
    let tau = tau.with_prec(p.bits());
    let t = |a, b, sh| th(a, b, sh, &tau, p);
    let d = |a| th_den(a, 96, true, &tau, p);
    let qp = |e: i64| qpow(Q::from_integer(e), &tau);
    let (a4, a12) = (t(4, 16, false)?, t(12, 16, false)?);
    let (a68, a20) = (t(68, 96, false)?, t(20, 96, false)?);
    let (d22, d46, d70, d94) = (d(22)?, d(46)?, d(70)?, d(94)?);
    let bracket = qp(6) * &a4 * &a68 / (&d46 * &d22) - qp(-47) * &a12 * &a20 / (&d94 * &d22)
        + qp(-39) * &a4 * &a20 / (&d46 * &d70)
        - qp(-52) * &a4 * &a68 / (&d94 * &d70);
    Ok((outer(&tau, p)? * bracket).mul_i().mul_int(4).with_prec(prec.bits()))
}

/// `T` through Jacobi triple products `j(x, q^m)`.
pub fn T_jform(tau: &Cx, prec: Prec) -> NResult<Cx> {
    let p = prec.with_extra(4);
    let tau = tau.with_prec(p.bits());
    let qi = |e: i64| Q::from_integer(e);
    let j = |a: i64, m: i64, neg: bool| jtheta_eval(qi(a), qi(m), neg, &tau, p);
    let jden = |a: i64| -> NResult<Cx> {
        let v = j(a, 96, true)?;
        if v.cancelled {
            return Err(NumError::Pole(format!("j(-q^{a}, q^96) vanishes")));
        }
        Ok(v.value)
    };
    let mut s = Cx::zero(p.bits());
    for r in 0..4i64 {
        for ss in 0..4i64 {
            if r == ss {
                continue;
            }
            let e = r * (r - 1) / 2 + ss * (ss + 1) / 2 + 5 * r * (ss + 1) + 3 * (r + ss);
            let term = qpow(qi(e), &tau) * j(4 * (ss - r), 16, false)?.value * j(24 * (r + ss) + 44, 96, false)?.value
                / (jden(24 * r + 22)? * jden(24 * ss + 22)?);
            s = if r % 2 == 0 { s + term } else { s - term };
        }
    }
    let pre = j(96, 288, false)?.value.powi(3) / j(0, 24, true)?.value;
    let th = theta_half(1, &tau, p)?;
    Ok(-(qpow(Q::new(25, 8), &tau) * pre * s / th).mul_int(2).with_prec(prec.bits()))
}

/// `T = -2 q^{1/8} theta_{1,4}(q^3, -q^3, q) / theta(1/2; tau)`.
pub fn T_theta_np(tau: &Cx, prec: Prec) -> NResult<Cx> {
    let p = prec.with_extra(4);
    let tau = tau.with_prec(p.bits());
    let x = QPowSpec::new(1, Q::from_integer(3))?;
    let y = QPowSpec::new(-1, Q::from_integer(3))?;
    let t = theta_np(1, 4, x, y, &tau, p)?;
    let th = theta_half(1, &tau, p)?;
    Ok(-(qpow(Q::new(1, 8), &tau) * t / th).mul_int(2).with_prec(prec.bits()))
}

/// `R_{3,3} = 2i q^{-1} mu(2 tau + 1/2, 1/2; 24 tau) + T`.
pub fn R33_fn(tau: &Cx, prec: Prec) -> NResult<Cx> {
    let p = prec.with_extra(4);
    let tau = tau.with_prec(p.bits());
    let w = p.bits();
    let z1 = tau.mul_int(2).add_real(&half(w));
    let z2 = Cx::from_real(half(w));
    let m = mu(&z1, &z2, &tau.mul_int(24), p)?;
    let a = (qpow(Q::from_integer(-1), &tau) * m).mul_i().mul_int(2);
    Ok((a + T_fn(&tau, p)?).with_prec(prec.bits()))
}

/// `R_1^{(3)} = -2i q^{-1/2} mu(5 tau, 3 tau; 12 tau)
///   + e^{-pi i/12} q^{-1/3} eta(tau+1/2) eta(3 tau+1/2) eta(12 tau) / (eta(2 tau) eta(6 tau))`.
pub fn R31_fn(tau: &Cx, prec: Prec) -> NResult<Cx> {
    let p = prec.with_extra(4);
    let tau = tau.with_prec(p.bits());
    let w = p.bits();
    let m = mu(&tau.mul_int(5), &tau.mul_int(3), &tau.mul_int(12), p)?;
    let a = -(qpow(Q::new(-1, 2), &tau) * m).mul_i().mul_int(2);
    let h = half(w);
    let num = eta(&tau.add_real(&h), p)? * eta(&tau.mul_int(3).add_real(&h), p)? * eta(&tau.mul_int(12), p)?;
    let den = eta(&tau.mul_int(2), p)? * eta(&tau.mul_int(6), p)?;
    let ph = scale_q(&Cx::from_real(Real::one(w)), Q::new(-1, 24)).e2pi();
    let b = ph * qpow(Q::new(-1, 3), &tau) * num / den;
    Ok((a + b).with_prec(prec.bits()))
}

/// `sum_n c_n q^n` for exact coefficients starting at `q^offset`.
pub fn q_sum(coeffs: &[BigInt], offset: i64, tau: &Cx, prec: Prec) -> Cx {
    let w = prec.bits() + 16;
    let q = tau.with_prec(w).e2pi();
    let mut acc = Cx::zero(w);
    for c in coeffs.iter().rev() {
        acc = &acc * &q + Cx::from_real(Real::from_int(c.clone(), w));
    }
    let base = qpow(Q::from_integer(offset), &tau.with_prec(w));
    (acc * base).with_prec(prec.bits())
}
