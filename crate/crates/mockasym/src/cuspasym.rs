//! Leading-order behaviour of theta, eta, Appell sums and `T` near the
//! cusps `0` and `1/2`, the eta multiplier system, and exact growth rates
//! of theta quotients at arbitrary cusps.
//!
//! Rates use one convention throughout: `rate` is the exact rational with
//! `log|f(p/h + iv)| = pi * rate / v + O(log(1/v))`.
#![allow(non_snake_case)]

use crate::mp::{Cx, Prec, Real};
use crate::numkernel::{eta, mordell_h, mu, qpow, theta_eval, NResult, NumError, Q};
use num_integer::Integer;
use serde::Serialize;
use std::fmt;

/// The variable in which a predictor's relative error is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Frame {
    /// `q0 = e^{-2 pi i / tau}`.
    Q0,
    /// `Q0 = e^{-2 pi i / (tau - 1/2)}`.
    Q0Half,
    /// Plain powers of `|tau|`.
    Tau,
}

/// A leading term together with the order of its relative error,
/// `f = main * (1 + O(frame^rate))`.
#[derive(Clone, Debug)]
pub struct CuspEstimate {
    pub main: Cx,
    pub rate: Q,
    pub frame: Frame,
}

impl CuspEstimate {
    /// `|f / main - 1|`.
    pub fn residual(&self, f: &Cx) -> f64 {
        Cx::rel_err(f, &self.main)
    }

    /// `|frame|^rate` at `tau`, as f64.
    pub fn frame_size(&self, tau: &Cx) -> f64 {
        let (u, v) = tau.to_f64();
        let r = *self.rate.numer() as f64 / *self.rate.denom() as f64;
        let pi = std::f64::consts::PI;
        match self.frame {
            Frame::Q0 => (-2.0 * pi * r * v / (u * u + v * v)).exp(),
            Frame::Q0Half => {
                let u = u - 0.5;
                (-2.0 * pi * r * v / (u * u + v * v)).exp()
            }
            Frame::Tau => (u * u + v * v).sqrt().powf(r),
        }
    }
}

/// A reduced cusp `p/h` with `h >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cusp {
    pub p: i64,
    pub h: i64,
}

impl Cusp {
    pub fn new(p: i64, h: i64) -> NResult<Cusp> {
        if h == 0 {
            return Err(NumError::Domain("cusp denominator is zero".into()));
        }
        let g = p.gcd(&h);
        let s = h.signum();
        Ok(Cusp { p: s * p / g, h: s * h / g })
    }

    pub fn parse(s: &str) -> NResult<Cusp> {
        let bad = || NumError::Domain(format!("cannot parse cusp {s:?}"));
        match s.split_once('/') {
            Some((a, b)) => Cusp::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => Cusp::new(s.trim().parse().map_err(|_| bad())?, 1),
        }
    }

    pub fn as_q(&self) -> Q {
        Q::new(self.p, self.h)
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.h)
    }
}

/// `[[a, b], [c, d]]` in `SL_2(Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntMatrix2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMatrix2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> NResult<IntMatrix2> {
        if a * d - b * c != 1 {
            return Err(NumError::Domain(format!("det [[{a},{b}],[{c},{d}]] != 1")));
        }
        Ok(IntMatrix2 { a, b, c, d })
    }

    pub fn mul(&self, o: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// `(a tau + b) / (c tau + d)`.
    pub fn act(&self, tau: &Cx) -> Cx {
        let num = tau.mul_int(self.a).add_real(&Real::from_int(self.b, tau.prec()));
        let den = tau.mul_int(self.c).add_real(&Real::from_int(self.d, tau.prec()));
        num / den
    }
}

/// Jacobi symbol `(a/n)` for odd `n > 0`.
pub fn jacobi_symbol(a: i64, n: i64) -> NResult<i32> {
    if n <= 0 || n % 2 == 0 {
        return Err(NumError::Domain(format!("Jacobi symbol needs odd n > 0, got {n}")));
    }
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut s = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                s = -s;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            s = -s;
        }
        a %= n;
    }
    Ok(if n == 1 { s } else { 0 })
}

/// `e^{2 pi i turn}` for an exact fraction of a turn.
pub fn root_of_unity(turn: Q, prec: Prec) -> Cx {
    qpow(turn, &Cx::one(prec.bits()))
}

/// Eta multiplier `eps(A)` with `eta(A tau) = eps(A) (c tau + d)^{1/2} eta(tau)`
/// (principal square root), returned as the exact turn `r` in `[0, 1)` with
/// `eps(A) = e^{2 pi i r}`.
pub fn eta_multiplier(m: &IntMatrix2) -> NResult<Q> {
    let IntMatrix2 { a, b, c, d } = *m;
    if a * d - b * c != 1 {
        return Err(NumError::Domain("matrix is not in SL_2(Z)".into()));
    }
    if c == 0 && d.abs() != 1 {
        return Err(NumError::Domain("c = 0 requires d = +-1".into()));
    }
    // exponent of e^{pi i / 12}, plus a sign from the Jacobi symbol and rho
    let (k, sym) = if c % 2 != 0 {
        ((a + d - 3) * c - b * d * (c * c - 1), jacobi_symbol(d, c.abs())?)
    } else {
        // rho = -1 only for c < 0: with the principal root, -I needs rho = 1
        let rho = if c < 0 && d < 0 { -1 } else { 1 };
        ((a - 2 * d) * c - b * d * (c * c - 1) + 3 * d - 3, rho * jacobi_symbol(c, d.abs())?)
    };
    let mut turn = Q::new(k, 24);
    if sym < 0 {
        turn += Q::new(1, 2);
    }
    Ok(turn - turn.floor())
}

pub fn eta_multiplier_cx(m: &IntMatrix2, prec: Prec) -> NResult<Cx> {
    Ok(root_of_unity(eta_multiplier(m)?, prec))
}

fn neg_inv(tau: &Cx) -> Cx {
    -tau.recip()
}

/// `q0^x = e^{-2 pi i x / tau}`.
fn q0pow(x: Q, tau: &Cx) -> Cx {
    qpow(x, &neg_inv(tau))
}

/// `sqrt(-i k tau)`, principal branch.
fn sqrt_mik(k: i64, tau: &Cx) -> Cx {
    (-tau.mul_int(k).mul_i()).sqrt()
}

fn q_to_real(x: Q, w: u32) -> Real {
    Real::from_ratio(*x.numer(), *x.denom(), w)
}

/// `(cos(2 pi x), sin(2 pi x))`.
fn cos_sin_turn(x: Q, w: u32) -> (Real, Real) {
    let t = Real::pi(w + 8).mul_2k(1).mul(&q_to_real(x, w + 8));
    let (c, s) = t.cos_sin();
    (c.with_prec(w), s.with_prec(w))
}

fn work(tau: &Cx, prec: Prec) -> (Cx, u32) {
    let w = prec.bits() + 16;
    (tau.with_prec(w), w)
}

fn check_alpha(alpha: Q) -> NResult<()> {
    if alpha < Q::from_integer(0) || alpha >= Q::from_integer(1) {
        return Err(NumError::Domain(format!("alpha = {alpha} is outside [0, 1)")));
    }
    Ok(())
}

/// `theta(alpha tau; tau) ~ -2i sin(pi alpha) q^{-alpha^2/2} q0^{1/8} / sqrt(-i tau)`
/// as `tau -> 0` in a cone.
pub fn theta_cusp0_leading(alpha: Q, tau: &Cx, prec: Prec) -> NResult<CuspEstimate> {
    check_alpha(alpha)?;
    if alpha == Q::from_integer(0) {
        return Err(NumError::Degenerate);
    }
    let (tau, w) = work(tau, prec);
    let (_, s) = cos_sin_turn(alpha / 2, w);
    let main = (qpow(-alpha * alpha / 2, &tau) * q0pow(Q::new(1, 8), &tau) / sqrt_mik(1, &tau))
        .scale(&s)
        .mul_i()
        .mul_int(-2);
    Ok(CuspEstimate { main: main.with_prec(prec.bits()), rate: Q::from_integer(1), frame: Frame::Q0 })
}

/// `theta(1/k + alpha tau; tau)
///   ~ -q^{-alpha^2/2} e^{pi i alpha (1 - 2/k)} q0^{1/(2k^2) - 1/(2k) + 1/8} / sqrt(-i tau)`.
pub fn theta_cusp0_shift(k: Q, alpha: Q, tau: &Cx, prec: Prec) -> NResult<CuspEstimate> {
    check_alpha(alpha)?;
    if k <= Q::from_integer(1) {
        return Err(NumError::Domain(format!("shift denominator k = {k} must exceed 1")));
    }
    let (tau, w) = work(tau, prec);
    let kr = k.recip();
    let e = kr * kr / 2 - kr / 2 + Q::new(1, 8);
    let phase = root_of_unity(alpha * (Q::from_integer(1) - kr * 2) / 2, prec.with_extra(4)).with_prec(w);
    let main = -(qpow(-alpha * alpha / 2, &tau) * phase * q0pow(e, &tau) / sqrt_mik(1, &tau));
    Ok(CuspEstimate { main: main.with_prec(prec.bits()), rate: kr, frame: Frame::Q0 })
}

/// Through order `q0^3`:
/// `theta(alpha tau; tau) = -2i sin(pi alpha) q^{-alpha^2/2} q0^{1/8} / sqrt(-i tau)
///   * (1 - a1 q0 + a3 q0^3)` with `a1 = 1 + 2cos(2 pi alpha)`,
/// `a3 = a1 + 2cos(4 pi alpha)`. The next correction is `q0^6`.
pub fn theta_cusp0_higher(alpha: Q, tau: &Cx, prec: Prec) -> NResult<Cx> {
    let lead = theta_cusp0_leading(alpha, tau, prec.with_extra(4))?;
    let (tau, w) = work(tau, prec.with_extra(4));
    let (a1, a3) = theta_higher_coeffs(alpha, w);
    let q0 = q0pow(Q::from_integer(1), &tau);
    let bracket = (Cx::one(w) - q0.scale(&a1) + q0.powi(3).scale(&a3)).with_prec(w);
    Ok((lead.main * bracket).with_prec(prec.bits()))
}

/// `(a1, a3)` of the order-`q0^3` expansion.
pub fn theta_higher_coeffs(alpha: Q, w: u32) -> (Real, Real) {
    let (c2, _) = cos_sin_turn(alpha, w);
    let (c4, _) = cos_sin_turn(alpha * 2, w);
    let a1 = Real::one(w) + c2.mul_2k(1);
    let a3 = &a1 + &c4.mul_2k(1);
    (a1, a3)
}

/// Through order `q0^2`:
/// `theta(1/2 + alpha tau; tau) = -q^{-alpha^2/2} / sqrt(-i tau)
///   * (1 - 2cos(2 pi alpha) q0^{1/2} + 2cos(4 pi alpha) q0^2)`.
/// The next correction is `q0^{9/2}`.
pub fn theta_cusp0_half_higher(alpha: Q, tau: &Cx, prec: Prec) -> NResult<Cx> {
    check_alpha(alpha)?;
    let (tau, w) = work(tau, prec.with_extra(4));
    let (c2, _) = cos_sin_turn(alpha, w);
    let (c4, _) = cos_sin_turn(alpha * 2, w);
    let bracket = Cx::one(w) - q0pow(Q::new(1, 2), &tau).scale(&c2.mul_2k(1))
        + q0pow(Q::from_integer(2), &tau).scale(&c4.mul_2k(1));
    let main = -(qpow(-alpha * alpha / 2, &tau) * bracket / sqrt_mik(1, &tau));
    Ok(main.with_prec(prec.bits()))
}

/// `theta(1/2; tau) ~ -2 e^{-pi i/8} e^{-pi i/(16 w)} / sqrt(-2w)` with
/// `w = tau - 1/2`, relative error `O(e^{-pi i/(2w)}) = O(Q0^{1/4})`.
pub fn theta_half_near_half(tau: &Cx, prec: Prec) -> NResult<CuspEstimate> {
    let (tau, w) = work(tau, prec);
    let wv = tau.add_real(&Real::from_ratio(-1, 2, w));
    let e = qpow(Q::new(-1, 32), &wv.recip()) * root_of_unity(Q::new(-1, 16), prec.with_extra(4)).with_prec(w);
    let main = -(e / wv.mul_int(-2).sqrt()).mul_int(2);
    Ok(CuspEstimate { main: main.with_prec(prec.bits()), rate: Q::new(1, 4), frame: Frame::Q0Half })
}

/// `T(tau) ~ (sqrt 3 / 6) e^{pi i/4} Q0^{-1/192} / sqrt(tau - 1/2)`, error `O(Q0^{1/96})`.
pub fn T_mainterm(tau: &Cx, prec: Prec) -> NResult<CuspEstimate> {
    let (tau, w) = work(tau, prec);
    let wv = tau.add_real(&Real::from_ratio(-1, 2, w));
    let amp = Real::from_int(3, w).sqrt().div_int(6);
    let e = qpow(Q::new(1, 192), &wv.recip()) * root_of_unity(Q::new(1, 8), prec.with_extra(4)).with_prec(w);
    let main = (e / wv.sqrt()).scale(&amp);
    Ok(CuspEstimate { main: main.with_prec(prec.bits()), rate: Q::new(1, 96), frame: Frame::Q0Half })
}

/// `1 / (2 sin(pi/4) sin(5 pi/12))`.
fn r31_amp(w: u32) -> Real {
    let (_, s1) = cos_sin_turn(Q::new(1, 8), w);
    let (_, s2) = cos_sin_turn(Q::new(5, 24), w);
    s1.mul(&s2).mul_2k(1).recip()
}

/// `mu(5 tau, 3 tau; 12 tau) ~ -e^{pi i/(48 tau)} / (4i sin(pi/4) sin(5 pi/12) sqrt(-12 i tau))`.
/// The dropped factor `q^{1/6}` makes the relative error `O(|tau|)`; the
/// Mordell term adds `O(q0^{1/96})`.
pub fn mu_R31_near0(tau: &Cx, prec: Prec) -> NResult<CuspEstimate> {
    let (tau, w) = work(tau, prec);
    let e = q0pow(Q::new(-1, 96), &tau);
    let main = (e / sqrt_mik(12, &tau)).scale(&r31_amp(w)).mul_i().mul_2k(-1);
    Ok(CuspEstimate { main: main.with_prec(prec.bits()), rate: Q::from_integer(1), frame: Frame::Tau })
}

/// The right-hand side of
/// `mu(5 tau, 3 tau; 12 tau) = -q^{1/6} mu(5/12, 1/4; -1/(12 tau)) / sqrt(-12 i tau) + h(2 tau; 12 tau) / 2i`,
/// which stays cheap as `tau -> 0`. Returns `(total, h-term)`.
pub fn mu_R31_via_transform(tau: &Cx, prec: Prec) -> NResult<(Cx, Cx)> {
    let p = prec.with_extra(4);
    let (tau, w) = work(tau, p);
    let t2 = neg_inv(&tau.mul_int(12));
    let m = mu(
        &Cx::from_real(Real::from_ratio(5, 12, w)),
        &Cx::from_real(Real::from_ratio(1, 4, w)),
        &t2,
        p,
    )?;
    let a = -(qpow(Q::new(1, 6), &tau) * m / sqrt_mik(12, &tau));
    let h = mordell_h(&tau.mul_int(2), &tau.mul_int(12), p)?;
    let hterm = -h.mul_i().mul_2k(-1);
    Ok(((a + &hterm).with_prec(prec.bits()), hterm.with_prec(prec.bits())))
}

/// `eta(tau+1/2) eta(3tau+1/2) eta(12tau) / (eta(2tau) eta(6tau))`.
pub fn etaprod(tau: &Cx, prec: Prec) -> NResult<Cx> {
    let (tau, w) = work(tau, prec);
    let h = Real::from_ratio(1, 2, w);
    let num = eta(&tau.add_real(&h), prec)? * eta(&tau.mul_int(3).add_real(&h), prec)? * eta(&tau.mul_int(12), prec)?;
    let den = eta(&tau.mul_int(2), prec)? * eta(&tau.mul_int(6), prec)?;
    Ok((num / den).with_prec(prec.bits()))
}

/// `etaprod(tau) ~ i e^{-5 pi i/12} q0^{-1/96} / sqrt(-12 i tau)`, error `O(q0^{1/12})`.
pub fn etaprod_near0(tau: &Cx, prec: Prec) -> NResult<CuspEstimate> {
    let (tau, w) = work(tau, prec);
    let ph = root_of_unity(Q::new(-5, 24), prec.with_extra(4)).with_prec(w);
    let main = (ph * q0pow(Q::new(-1, 96), &tau) / sqrt_mik(12, &tau)).mul_i();
    Ok(CuspEstimate { main: main.with_prec(prec.bits()), rate: Q::new(1, 12), frame: Frame::Q0 })
}

/// Leading estimates of the five eta factors of [`etaprod`] near `0`, in the
/// order `eta(tau+1/2), eta(3tau+1/2), eta(12tau), eta(2tau), eta(6tau)`.
/// `eta(m tau) ~ q0^{1/(24m)} / sqrt(-i m tau)` and
/// `eta(m tau + 1/2) ~ e^{pi i/24} q0^{-1/(48m)} / (... )` from
/// `eta(x + 1/2) = e^{pi i/24} eta(2x)^3 / (eta(x) eta(4x))`.
pub fn etaprod_factors_near0(tau: &Cx, prec: Prec) -> NResult<[Cx; 5]> {
    let (tau, w) = work(tau, prec);
    let plain = |m: i64| q0pow(Q::new(1, 24 * m), &tau) / sqrt_mik(m, &tau);
    let shifted = |m: i64| {
        let ph = root_of_unity(Q::new(1, 48), prec.with_extra(4)).with_prec(w);
        ph * plain(2 * m).powi(3) / (plain(m) * plain(4 * m))
    };
    let r = [shifted(1), shifted(3), plain(12), plain(2), plain(6)];
    Ok(r.map(|x| x.with_prec(prec.bits())))
}

/// `R_1^{(3)}(tau) ~ (1/(2 sin(pi/4) sin(5pi/12)) + 1) e^{pi i/(48 tau)} / sqrt(-12 i tau)`.
pub fn R31_near0(tau: &Cx, prec: Prec) -> NResult<CuspEstimate> {
    let (tau, w) = work(tau, prec);
    let amp = r31_amp(w) + Real::one(w);
    let main = (q0pow(Q::new(-1, 96), &tau) / sqrt_mik(12, &tau)).scale(&amp);
    Ok(CuspEstimate { main: main.with_prec(prec.bits()), rate: Q::from_integer(1), frame: Frame::Tau })
}

/// `|mu(2tau + 1/2, 1/2; 24tau)|`, which stays bounded as `tau -> 0` and `tau -> 1/2`.
pub fn mu_R33_near0_check(tau: &Cx, prec: Prec) -> NResult<f64> {
    let (tau, w) = work(tau, prec);
    let h = Real::from_ratio(1, 2, w);
    let m = mu(&tau.mul_int(2).add_real(&h), &Cx::from_real(h), &tau.mul_int(24), prec)?;
    Ok(m.abs_f64())
}

fn frac(x: Q) -> Q {
    x - x.floor()
}

fn reduce_mod(x: i64, h: i64) -> (i64, i64) {
    // (x mod h) / g and h / g with g = gcd(h, x mod h)
    let r = x.rem_euclid(h);
    let g = h.gcd(&r);
    (r / g, h / g)
}

fn check_a1b1(a1: i64, b1: i64) -> NResult<()> {
    if !(0 < a1 && a1 < b1) {
        return Err(NumError::Domain(format!("need 0 < a1 < b1, got a1 = {a1}, b1 = {b1}")));
    }
    Ok(())
}

fn rate_from(num: i64, den: i64, b1: i64, big_h: i64) -> Q {
    let x = frac(Q::new(big_h * num, den));
    -(x * x + Q::new(1, 4) - x) / Q::from_integer(b1 * big_h * big_h)
}

/// Growth rate of `theta(a1 tau; b1 tau)` at `cusp`:
/// `-({H g/h}^2 + 1/4 - {H g/h}) / (b1 H^2)` with `g/h` the reduced form
/// of `a1 p mod h` over `h` and `H` the reduced denominator of `b1 p / h`.
pub fn cusp_rate_full(a1: i64, b1: i64, cusp: Cusp) -> NResult<Q> {
    check_a1b1(a1, b1)?;
    let (g, ht) = reduce_mod(a1 * cusp.p, cusp.h);
    let (_, big_h) = reduce_mod(b1 * cusp.p, cusp.h);
    Ok(rate_from(g, ht, b1, big_h))
}

/// Growth rate of `theta(1/2 + a1 tau; b1 tau)` at `cusp`: as
/// [`cusp_rate_full`] with `g/h` replaced by the reduced form of
/// `(h + 2 a1 p) mod 2h` over `2h`.
pub fn cusp_rate_half_shift(a1: i64, b1: i64, cusp: Cusp) -> NResult<Q> {
    check_a1b1(a1, b1)?;
    let (phi, omega) = reduce_mod(cusp.h + 2 * a1 * cusp.p, 2 * cusp.h);
    let (_, big_h) = reduce_mod(b1 * cusp.p, cusp.h);
    Ok(rate_from(phi, omega, b1, big_h))
}

/// Growth rate of `theta(1/2; tau)` at a cusp with denominator `h`.
pub fn cusp_rate_theta_half(h: i64) -> NResult<Q> {
    if h < 1 {
        return Err(NumError::Domain(format!("cusp denominator {h} < 1")));
    }
    Ok(if h % 2 == 0 { -Q::new(1, 4 * h * h) } else { Q::from_integer(0) })
}

/// Lower-bound rate for `theta(1/2; 24 tau)` at `cusp`: `0` when `h | 24`,
/// otherwise `-1/(96 h~^2)` with `h~ = h / gcd(24p mod h, h)`.
pub fn cusp_rate_theta_half24(cusp: Cusp) -> Q {
    if 24 % cusp.h == 0 {
        return Q::from_integer(0);
    }
    let (_, ht) = reduce_mod(24 * cusp.p, cusp.h);
    -Q::new(1, 96 * ht * ht)
}

/// Two-point slope fit of `log|f * v^{1/2}|` against `pi / v` along
/// `tau = cusp + iv`.
#[derive(Clone, Debug, Serialize)]
pub struct RateReport {
    pub law: String,
    pub cusp: String,
    pub v: Vec<f64>,
    pub log_abs: Vec<f64>,
    pub fitted: f64,
    pub exact: String,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn cusp_point(cusp: Cusp, v: f64, prec: Prec) -> Cx {
    let w = prec.bits() + 16;
    Cx::new(Real::from_ratio(cusp.p, cusp.h, w), Real::from_f64(v, w))
}

/// Fits `log|f(cusp + iv)| = pi r / v - (1/2) log v + c` at two values of `v`.
pub fn slope_fit<F>(f: F, cusp: Cusp, v: [f64; 2], prec: Prec) -> NResult<(f64, [f64; 2])>
where
    F: Fn(&Cx) -> NResult<Cx>,
{
    let ln2 = std::f64::consts::LN_2;
    let mut l = [0.0; 2];
    for (i, &vi) in v.iter().enumerate() {
        let val = f(&cusp_point(cusp, vi, prec))?;
        l[i] = val.log2_abs() * ln2 + 0.5 * vi.ln();
    }
    let r = (l[0] - l[1]) / (std::f64::consts::PI * (1.0 / v[0] - 1.0 / v[1]));
    Ok((r, l))
}

/// Compares an exact rate with the slope fit, relative tolerance `tol`
/// (absolute when the exact rate is zero).
pub fn rate_report<F>(law: &str, f: F, exact: Q, cusp: Cusp, v: [f64; 2], tol: f64, prec: Prec) -> NResult<RateReport>
where
    F: Fn(&Cx) -> NResult<Cx>,
{
    let (fitted, l) = slope_fit(f, cusp, v, prec)?;
    let e = *exact.numer() as f64 / *exact.denom() as f64;
    let rel_err = if e == 0.0 { fitted.abs() } else { ((fitted - e) / e).abs() };
    Ok(RateReport {
        law: law.to_string(),
        cusp: cusp.to_string(),
        v: v.to_vec(),
        log_abs: l.to_vec(),
        fitted,
        exact: exact.to_string(),
        rel_err,
        tol,
        pass: rel_err <= tol,
    })
}

/// `theta(a tau (+ 1/2); b tau)` for rate fits.
pub fn theta_ab(a: i64, b: i64, half: bool, tau: &Cx, prec: Prec) -> NResult<Cx> {
    let mut z = tau.mul_int(a);
    if half {
        z = z.add_real(&Real::from_ratio(1, 2, tau.prec()));
    }
    Ok(theta_eval(&z, &tau.mul_int(b), prec)?.value)
}

/// The three certified rate cases: `theta(4tau;16tau)` and
/// `theta(1/2+22tau;96tau)` at `1/4`, `theta(1/2+46tau;96tau)` at `1/6`.
pub fn certified_rate_reports(prec: Prec) -> NResult<Vec<RateReport>> {
    let v = [0.02, 0.01];
    let c4 = Cusp::new(1, 4)?;
    let c6 = Cusp::new(1, 6)?;
    let cases = [(4, 16, false, c4), (22, 96, true, c4), (46, 96, true, c6)];
    cases
        .iter()
        .map(|&(a, b, half, c)| {
            let exact = if half { cusp_rate_half_shift(a, b, c)? } else { cusp_rate_full(a, b, c)? };
            let law = format!("theta({}{a}tau; {b}tau)", if half { "1/2 + " } else { "" });
            rate_report(&law, |t| theta_ab(a, b, half, t, prec), exact, c, v, 0.02, prec)
        })
        .collect()
}
