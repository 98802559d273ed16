use super::{check_tau, lattice_point, qpow, NResult, NumError, Q};
use crate::mp::{Cx, Prec, Real};

/// Result of a theta summation with its cancellation diagnostics.
#[derive(Clone, Debug)]
pub struct ThetaEval {
    pub value: Cx,
    /// `log2` of the largest summand.
    pub max_term_log2: f64,
    /// Set when `|value| < eps * max term` even after the precision retry.
    pub cancelled: bool,
}

/// Symmetric sum over `m in 1/2 + Z` at `w` working bits.
fn theta_sum(z: &Cx, tau: &Cx, w: u32) -> (Cx, f64) {
    let z = z.with_prec(w);
    let tau = tau.with_prec(w);
    let q = tau.e2pi();
    let zeta = z.e2pi();
    let zinv = zeta.recip();
    let quarter = Cx::new(tau.re.mul_2k(-2), tau.im.mul_2k(-2));
    let half = Real::from_ratio(1, 2, w);
    let mut sum = Cx::zero(w);
    let mut maxl = f64::NEG_INFINITY;
    let stop = -(w as f64) - 8.0;
    for (start, zf) in [((&quarter + &z).add_real(&half), &zeta), ((&quarter - &z).add_real(&(-&half)), &zinv)] {
        let mut t = start.epi();
        let mut r = -(&q * zf);
        let mut steps = 0usize;
        loop {
            let tl = t.log2_abs();
            sum = &sum + &t;
            maxl = maxl.max(tl);
            let rl = r.log2_abs();
            if rl < -1.0 && tl < maxl + stop {
                break;
            }
            t = &t * &r;
            r = &r * &q;
            steps += 1;
            assert!(steps < 10_000_000, "theta series failed to terminate");
        }
    }
    (sum, maxl)
}

/// `theta(z; tau) = sum_{m in 1/2+Z} e^{pi i m} q^{m^2/2} zeta^m`, with one
/// retry at raised precision when the sum cancels.
pub fn theta_eval(z: &Cx, tau: &Cx, prec: Prec) -> NResult<ThetaEval> {
    check_tau(tau)?;
    let bits = prec.bits();
    let w = bits + 32;
    let (mut value, maxl) = theta_sum(z, tau, w);
    let mut acc_bits = w as f64;
    let loss = maxl - value.log2_abs();
    if loss > 24.0 {
        let extra = (loss.ceil() as u32 + 16).min(4 * bits);
        let (v2, _) = theta_sum(z, tau, w + extra);
        value = v2;
        acc_bits += extra as f64;
    }
    let cancelled = value.log2_abs() < maxl + prec.eps_log2() || value.log2_abs() < maxl - acc_bits + 16.0;
    Ok(ThetaEval { value: value.with_prec(bits), max_term_log2: maxl, cancelled })
}

pub fn theta(z: &Cx, tau: &Cx, prec: Prec) -> NResult<Cx> {
    Ok(theta_eval(z, tau, prec)?.value)
}

/// `eta(tau) = q^{1/24} prod (1 - q^n)`.
pub fn eta(tau: &Cx, prec: Prec) -> NResult<Cx> {
    check_tau(tau)?;
    let bits = prec.bits();
    let w = bits + 32;
    let tau = tau.with_prec(w);
    let q = tau.e2pi();
    let v = tau.im.to_f64();
    let tail = (-(-2.0 * std::f64::consts::PI * v).exp_m1()).log2();
    let one = Cx::one(w);
    let mut p = Cx::one(w);
    let mut qn = q.clone();
    loop {
        p = &p * &(&one - &qn);
        if qn.log2_abs() - tail < -(w as f64) - 8.0 {
            break;
        }
        qn = &qn * &q;
    }
    Ok((&qpow(Q::new(1, 24), &tau) * &p).with_prec(bits))
}

/// `Theta(tau) = sum_{n in Z} q^{n^2}`.
pub fn theta_big(tau: &Cx, prec: Prec) -> NResult<Cx> {
    check_tau(tau)?;
    let bits = prec.bits();
    let w = bits + 32;
    let q = tau.with_prec(w).e2pi();
    let q2 = q.sqr();
    let mut s = Cx::zero(w);
    let mut t = q.clone();
    let mut r = &q2 * &q;
    loop {
        s = &s + &t;
        if t.log2_abs() < -(w as f64) - 8.0 && r.log2_abs() < -1.0 {
            break;
        }
        t = &t * &r;
        r = &r * &q2;
    }
    Ok((s.mul_2k(1) + Cx::one(w)).with_prec(bits))
}

/// `j(x, q^b)` with `x = q^a` (or `-q^a` when `half_shift`), read off
/// `theta(a tau; b tau) = -i q^{b/8 - a/2} j(q^a, q^b)` and
/// `theta(1/2 + a tau; b tau) = -q^{b/8 - a/2} j(-q^a, q^b)`.
pub fn jtheta_eval(a: Q, b: Q, half_shift: bool, tau: &Cx, prec: Prec) -> NResult<ThetaEval> {
    if b <= Q::from_integer(0) {
        return Err(NumError::Domain("j(x, q^b) needs b > 0".into()));
    }
    let w = Prec { digits: prec.digits + 3 };
    let z = lattice_point(a, half_shift, &tau.with_prec(w.bits()));
    let bt = super::scale_q(&tau.with_prec(w.bits()), b);
    let th = theta_eval(&z, &bt, prec)?;
    let f = qpow(a / 2 - b / 8, &tau.with_prec(w.bits()));
    let v = if half_shift { -(&th.value * &f) } else { (&th.value * &f).mul_i() };
    Ok(ThetaEval { value: v.with_prec(prec.bits()), ..th })
}

pub fn jtheta_convert(a: Q, b: Q, half_shift: bool, tau: &Cx, prec: Prec) -> NResult<Cx> {
    Ok(jtheta_eval(a, b, half_shift, tau, prec)?.value)
}

/// `sign * q^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QPowSpec {
    pub sign: i8,
    pub a: Q,
}

impl QPowSpec {
    pub fn new(sign: i8, a: Q) -> NResult<QPowSpec> {
        if sign != 1 && sign != -1 {
            return Err(NumError::Domain("QPowSpec sign must be +1 or -1".into()));
        }
        Ok(QPowSpec { sign, a })
    }

    fn mul(self, o: QPowSpec) -> QPowSpec {
        QPowSpec { sign: self.sign * o.sign, a: self.a + o.a }
    }

    fn pow(self, e: i64) -> QPowSpec {
        QPowSpec { sign: if e.rem_euclid(2) == 1 { self.sign } else { 1 }, a: self.a * e }
    }

    fn neg(self) -> QPowSpec {
        QPowSpec { sign: -self.sign, a: self.a }
    }

    fn recip(self) -> QPowSpec {
        QPowSpec { sign: self.sign, a: -self.a }
    }

    fn qpow(a: Q) -> QPowSpec {
        QPowSpec { sign: 1, a }
    }

    fn eval(self, tau: &Cx) -> Cx {
        let v = qpow(self.a, tau);
        if self.sign < 0 { -v } else { v }
    }
}

fn binom2(x: Q) -> Q {
    x * (x - 1) / 2
}

fn j_of(x: QPowSpec, m: Q, tau: &Cx, prec: Prec) -> NResult<ThetaEval> {
    jtheta_eval(x.a, m, x.sign < 0, tau, prec)
}

/// Hickerson-Mortenson `theta_{n,p}(x, y, q)` for `x, y = +-q^rational`.
pub fn theta_np(n: i64, p: i64, xs: QPowSpec, ys: QPowSpec, tau: &Cx, prec: Prec) -> NResult<Cx> {
    if n < 1 || p < 1 {
        return Err(NumError::Domain("theta_{n,p} needs n, p >= 1".into()));
    }
    let w = prec.with_extra(6);
    let tau = tau.with_prec(w.bits());
    let nq = Q::from_integer(n);
    let pq = Q::from_integer(p);
    let frac = {
        let h = Q::new(n - 1, 2);
        h - h.floor()
    };
    let m1 = pq * pq * (nq * 2 + pq);
    let pre_num = j_of(QPowSpec::qpow(m1), m1 * 3, &tau, w)?.value;
    let pre_den = j_of(QPowSpec::new(-1, Q::from_integer(0))?, nq * pq * (nq * 2 + pq), &tau, w)?;
    if pre_den.cancelled {
        return Err(NumError::Pole("j(-1, q^{np(2n+p)}) vanishes".into()));
    }
    let pre = pre_num.powi(3).div(&pre_den.value);
    let hn = Q::new(n - 1, 2);
    let hp = Q::new(n + 1, 2);
    let mx = xs.neg();
    let my = ys.neg();
    let yx = my.pow(n + p).mul(mx.pow(n).recip());
    let mut total = Cx::zero(w.bits());
    for rs in 0..p {
        for ss in 0..p {
            let r = Q::from_integer(rs) + frac;
            let s = Q::from_integer(ss) + frac;
            let er = r - hn;
            let es = s + hp;
            let expo = nq * binom2(er) + (nq + pq) * er * es + nq * binom2(es);
            debug_assert!(er.is_integer() && es.is_integer());
            let mono = QPowSpec::qpow(expo).mul(mx.pow(er.to_integer())).mul(my.pow(es.to_integer()));
            let n1 = QPowSpec::qpow(pq * nq * (s - r)).neg().mul(xs.pow(n)).mul(ys.pow(n).recip());
            let n2 = QPowSpec::qpow(pq * (nq * 2 + pq) * (r + s) + pq * (nq + pq)).mul(xs.pow(p)).mul(ys.pow(p));
            let d1 = QPowSpec::qpow(pq * r * (nq * 2 + pq) + pq * (nq + pq) / 2).mul(yx);
            let d2 = QPowSpec::qpow(pq * s * (nq * 2 + pq) + pq * (nq + pq) / 2).mul(yx);
            let jn1 = j_of(n1, nq * pq * pq, &tau, w)?.value;
            let jn2 = j_of(n2, m1, &tau, w)?.value;
            let jd1 = j_of(d1, m1, &tau, w)?;
            let jd2 = j_of(d2, m1, &tau, w)?;
            if jd1.cancelled || jd2.cancelled {
                return Err(NumError::Pole(format!("vanishing j-denominator at r*={rs}, s*={ss}")));
            }
            let term = mono.eval(&tau) * jn1 * jn2 / (jd1.value * jd2.value);
            total = total + term;
        }
    }
    Ok((pre * total).with_prec(prec.bits()))
}
