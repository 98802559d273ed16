//! Binary floating point with arbitrary precision, real and complex.
//!
//! A `Real` is `man * 2^exp` where the mantissa is rounded to at most `prec`
//! bits. Every value carries its own precision; binary operations use the
//! larger of the two. Transcendentals are evaluated in fixed point with guard
//! bits and rounded back.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prec {
    pub digits: u32,
}

impl Prec {
    /// Digits held back from the working precision when judging convergence.
    pub const GUARD: u32 = 5;

    pub fn new(digits: u32) -> Prec {
        Prec { digits: digits.max(15) }
    }

    /// Mantissa bits used for values created at this precision.
    pub fn bits(&self) -> u32 {
        (self.digits as f64 * LOG2_10).ceil() as u32 + 16
    }

    /// Relative tolerance `10^-(digits - guard)`.
    pub fn eps(&self) -> f64 {
        10f64.powi(-((self.digits - Self::GUARD) as i32))
    }

    /// `log2` of `eps`, usable when eps underflows an f64.
    pub fn eps_log2(&self) -> f64 {
        -((self.digits - Self::GUARD) as f64) * LOG2_10
    }

    pub fn with_extra(&self, digits: u32) -> Prec {
        Prec { digits: self.digits + digits }
    }
}

impl Default for Prec {
    fn default() -> Self {
        Prec::new(30)
    }
}

#[derive(Clone)]
pub struct Real {
    man: BigInt,
    exp: i64,
    prec: u32,
}

fn round_shr(m: &BigInt, sh: u64) -> BigInt {
    if sh == 0 {
        return m.clone();
    }
    let (sign, mag) = (m.sign(), m.magnitude());
    let half = BigUint::one() << (sh - 1);
    let r: BigUint = (mag + half) >> sh;
    BigInt::from_biguint(if r.is_zero() { Sign::NoSign } else { sign }, r)
}

impl Real {
    fn make(man: BigInt, exp: i64, prec: u32) -> Real {
        let mut r = Real { man, exp, prec };
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        let bits = self.man.bits();
        if bits > self.prec as u64 {
            let sh = bits - self.prec as u64;
            self.man = round_shr(&self.man, sh);
            self.exp += sh as i64;
            if self.man.bits() > self.prec as u64 {
                self.man >>= 1u32;
                self.exp += 1;
            }
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero(prec: u32) -> Real {
        Real { man: BigInt::zero(), exp: 0, prec }
    }

    pub fn one(prec: u32) -> Real {
        Real { man: BigInt::one(), exp: 0, prec }
    }

    pub fn from_int<T: Into<BigInt>>(n: T, prec: u32) -> Real {
        Real::make(n.into(), 0, prec)
    }

    pub fn from_ratio<T: Into<BigInt>, U: Into<BigInt>>(n: T, d: U, prec: u32) -> Real {
        Real::from_int(n, prec + 8).div(&Real::from_int(d, prec + 8)).with_prec(prec)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64, prec: u32) -> Real {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Real::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, ex) = if e == 0 { (frac, -1074) } else { (frac | (1u64 << 52), e - 1075) };
        Real::make(BigInt::from(m) * sign, ex, prec.max(53))
    }

    /// Parses a decimal literal such as `-0.21` or `1.5e-3`.
    pub fn parse(s: &str, prec: u32) -> Option<Real> {
        let s = s.trim();
        let (mant, ex) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
            None => (s, 0),
        };
        let (neg, mant) = match mant.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, mant.strip_prefix('+').unwrap_or(mant)),
        };
        let (ip, fp) = match mant.find('.') {
            Some(i) => (&mant[..i], &mant[i + 1..]),
            None => (mant, ""),
        };
        if ip.is_empty() && fp.is_empty() {
            return None;
        }
        if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{ip}{fp}");
        let mut n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
        if neg {
            n = -n;
        }
        let e10 = ex - fp.len() as i64;
        let p = prec + 8;
        let r = if e10 >= 0 {
            Real::from_int(n * BigInt::from(10).pow(e10 as u32), p)
        } else {
            Real::from_int(n, p).div(&Real::from_int(BigInt::from(10).pow((-e10) as u32), p))
        };
        Some(r.with_prec(prec))
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Real {
        Real::make(self.man.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// Position of the leading bit: `2^(top-1) <= |x| < 2^top`.
    fn top(&self) -> i64 {
        self.exp + self.man.bits() as i64
    }

    pub fn abs(&self) -> Real {
        Real { man: self.man.abs(), exp: self.exp, prec: self.prec }
    }

    /// `x * 2^k`, exact.
    pub fn mul_2k(&self, k: i64) -> Real {
        if self.is_zero() {
            return self.clone();
        }
        Real { man: self.man.clone(), exp: self.exp + k, prec: self.prec }
    }

    pub fn mul_int(&self, k: i64) -> Real {
        Real::make(&self.man * k, self.exp, self.prec)
    }

    pub fn div_int(&self, k: i64) -> Real {
        self.div(&Real::from_int(k, self.prec))
    }

    /// Approximate `log2 |x|`; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.man.bits();
        let sh = bits.saturating_sub(60);
        let top = (self.man.magnitude() >> sh).to_f64().unwrap();
        top.log2() + (self.exp + sh as i64) as f64
    }

    pub fn ln_f64(&self) -> f64 {
        self.log2_abs() * std::f64::consts::LN_2
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits();
        let sh = bits.saturating_sub(62);
        let top = (&self.man >> sh).to_i64().unwrap() as f64;
        let e = self.exp + sh as i64;
        if e > 1100 {
            return top.signum() * f64::INFINITY;
        }
        if e < -1200 {
            return 0.0;
        }
        top * 2f64.powi(e as i32)
    }

    /// Nearest integer, ties away from zero.
    pub fn round_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            round_shr(&self.man, (-self.exp) as u64)
        }
    }

    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            self.man.div_floor(&(BigInt::one() << (-self.exp) as u64))
        }
    }

    /// `round(x * 2^w)` as an integer.
    fn to_fixed(&self, w: u32) -> BigInt {
        let e = self.exp + w as i64;
        if e >= 0 {
            &self.man << e as u64
        } else {
            round_shr(&self.man, (-e) as u64)
        }
    }

    fn add_ref(&self, o: &Real) -> Real {
        let prec = self.prec.max(o.prec);
        if o.is_zero() {
            return self.with_prec(prec);
        }
        if self.is_zero() {
            return o.with_prec(prec);
        }
        let (ta, tb) = (self.top(), o.top());
        if ta > tb + prec as i64 + 3 {
            return self.with_prec(prec);
        }
        if tb > ta + prec as i64 + 3 {
            return o.with_prec(prec);
        }
        let e = self.exp.min(o.exp);
        let m = (&self.man << (self.exp - e) as u64) + (&o.man << (o.exp - e) as u64);
        Real::make(m, e, prec)
    }

    fn mul_ref(&self, o: &Real) -> Real {
        Real::make(&self.man * &o.man, self.exp + o.exp, self.prec.max(o.prec))
    }

    fn div_ref(&self, o: &Real) -> Real {
        assert!(!o.is_zero(), "division by zero");
        let prec = self.prec.max(o.prec);
        if self.is_zero() {
            return Real::zero(prec);
        }
        let sh = (prec as i64 + 2 + o.man.bits() as i64 - self.man.bits() as i64).max(0);
        let q = (&self.man << sh as u64) / &o.man;
        Real::make(q, self.exp - sh - o.exp, prec)
    }

    pub fn sqr(&self) -> Real {
        self.mul_ref(self)
    }

    pub fn recip(&self) -> Real {
        Real::one(self.prec).div_ref(self)
    }

    pub fn sqrt(&self) -> Real {
        assert!(!self.is_negative(), "sqrt of negative");
        if self.is_zero() {
            return self.clone();
        }
        let want = 2 * self.prec as i64 + 4;
        let mut sh = (want - self.man.bits() as i64).max(0);
        if (self.exp - sh) % 2 != 0 {
            sh += 1;
        }
        let m = (&self.man << sh as u64).sqrt();
        Real::make(m, (self.exp - sh) / 2, self.prec)
    }

    pub fn max_abs(a: &Real, b: &Real) -> Real {
        if a.abs() >= b.abs() { a.abs() } else { b.abs() }
    }

    pub fn pi(prec: u32) -> Real {
        cached_const(ConstKind::Pi, prec)
    }

    pub fn ln2(prec: u32) -> Real {
        cached_const(ConstKind::Ln2, prec)
    }

    pub fn exp(&self) -> Real {
        let p = self.prec;
        if self.is_zero() {
            return Real::one(p);
        }
        let xf = self.to_f64();
        assert!(xf.abs() < 1e15, "exp argument out of range");
        let k = (xf / std::f64::consts::LN_2).round() as i64;
        let wk = p + 64 + 64 - (k.unsigned_abs().leading_zeros());
        let r = if k == 0 {
            self.with_prec(wk)
        } else {
            self.with_prec(wk).sub(&Real::ln2(wk).mul_int(k))
        };
        let s = ((p as f64).sqrt() * 0.5) as u32 + 2;
        let w = p + s + 40;
        let rf = r.to_fixed(w) >> s;
        let one = BigInt::one() << w;
        let mut sum = one.clone();
        let mut term = one;
        let mut n = 1i64;
        loop {
            term = (&term * &rf) >> w;
            term /= n;
            if term.is_zero() {
                break;
            }
            sum += &term;
            n += 1;
        }
        for _ in 0..s {
            sum = (&sum * &sum) >> w;
        }
        Real::make(sum, k - w as i64, p)
    }

    /// `(cos x, sin x)`.
    pub fn cos_sin(&self) -> (Real, Real) {
        let p = self.prec;
        if self.is_zero() {
            return (Real::one(p), Real::zero(p));
        }
        let mag = self.top().max(0) as u32;
        let wp = p + mag + 40;
        let half_pi = Real::pi(wp).mul_2k(-1);
        let x = self.with_prec(wp);
        let k = (&x).div(&half_pi).round_int();
        let r = (&x).sub(&half_pi.mul(&Real::from_int(k.clone(), wp)));
        let s = ((p as f64).sqrt() * 0.5) as u32 + 2;
        let w = p + s + 40;
        let rf = r.to_fixed(w) >> s;
        let mut c = BigInt::one() << w;
        let mut sn = BigInt::zero();
        let mut term = c.clone();
        let mut n = 1i64;
        loop {
            term = (&term * &rf) >> w;
            term /= n;
            if term.is_zero() {
                break;
            }
            match n % 4 {
                1 => sn += &term,
                2 => c -= &term,
                3 => sn -= &term,
                _ => c += &term,
            }
            n += 1;
        }
        for _ in 0..s {
            let c2 = ((&c * &c) - (&sn * &sn)) >> w;
            sn = (&c * &sn) >> (w - 1);
            c = c2;
        }
        let (cr, sr) = (Real::make(c, -(w as i64), p), Real::make(sn, -(w as i64), p));
        match k.mod_floor(&BigInt::from(4)).to_u8().unwrap() {
            0 => (cr, sr),
            1 => (-sr, cr),
            2 => (-cr, -sr),
            _ => (sr, -cr),
        }
    }

    pub fn cos(&self) -> Real {
        self.cos_sin().0
    }

    pub fn sin(&self) -> Real {
        self.cos_sin().1
    }

    pub fn cosh(&self) -> Real {
        let e = self.exp();
        (&e).add(&e.recip()).mul_2k(-1)
    }

    /// Natural logarithm of a positive number.
    pub fn ln(&self) -> Real {
        assert!(self.signum() > 0, "ln of non-positive");
        let p = self.prec;
        let wp = p + 32;
        let b = self.man.bits() as i64;
        // y in [1/2, 1)
        let y = Real { man: self.man.clone(), exp: -b, prec: wp };
        let k = self.exp + b;
        // ln y = 2 atanh(t), t = (y-1)/(y+1), |t| <= 1/3
        let one = Real::one(wp);
        let t = (&y).sub(&one).div(&(&y).add(&one));
        let w = wp + 16;
        let neg = t.is_negative();
        let tf = t.abs().to_fixed(w);
        let t2 = (&tf * &tf) >> w;
        let mut pw = tf.clone();
        let mut sum = BigInt::zero();
        let mut j = 1i64;
        while !pw.is_zero() {
            sum += &pw / j;
            pw = (&pw * &t2) >> w;
            j += 2;
        }
        let sum = if neg { -sum } else { sum };
        let ln_y = Real::make(sum << 1u32, -(w as i64), wp);
        ln_y.add(&Real::ln2(wp).mul_int(k)).with_prec(p)
    }

    pub fn pow_f(&self, e: &Real) -> Real {
        self.ln().mul(e).exp()
    }

    /// Scientific notation with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let digits = digits.max(1);
        let neg = self.is_negative();
        let mut k = (self.log2_abs() / LOG2_10).floor() as i64;
        let mut n;
        loop {
            let s = digits as i64 - 1 - k;
            n = scaled_decimal(&self.abs(), s);
            let len = n.to_string().len() as i64;
            if len > digits as i64 {
                k += 1;
            } else if len < digits as i64 {
                k -= 1;
            } else {
                break;
            }
        }
        let ds = n.to_string();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&ds[..1]);
        if ds.len() > 1 {
            out.push('.');
            out.push_str(&ds[1..]);
        }
        out.push_str(&format!("e{k}"));
        out
    }

    /// Fixed notation with `dp` digits after the point.
    pub fn to_fixed_string(&self, dp: usize) -> String {
        let n = scaled_decimal(&self.abs(), dp as i64);
        let mut s = n.to_string();
        if s.len() <= dp {
            s = format!("{}{}", "0".repeat(dp + 1 - s.len()), s);
        }
        let (ip, fp) = s.split_at(s.len() - dp);
        let sign = if self.is_negative() && !n.is_zero() { "-" } else { "" };
        if dp == 0 { format!("{sign}{ip}") } else { format!("{sign}{ip}.{fp}") }
    }

    /// Digits roughly matching the precision.
    pub fn digits10(&self) -> usize {
        ((self.prec.saturating_sub(16)) as f64 / LOG2_10).floor().max(1.0) as usize
    }
}

/// `round(x * 10^s)` for `x >= 0`.
fn scaled_decimal(x: &Real, s: i64) -> BigInt {
    let (mut num, mut den) = (x.man.clone(), BigInt::one());
    if s >= 0 {
        num *= BigInt::from(10).pow(s as u32);
    } else {
        den *= BigInt::from(10).pow((-s) as u32);
    }
    if x.exp >= 0 {
        num <<= x.exp as u64;
    } else {
        den <<= (-x.exp) as u64;
    }
    (num * 2 + &den) / (den * 2)
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or_else(|| self.digits10());
        write!(f, "{}", self.to_sci(d))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(20))
    }
}

impl PartialEq for Real {
    fn eq(&self, o: &Real) -> bool {
        self.partial_cmp(o) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, o: &Real) -> Option<Ordering> {
        let d = self.sub(o);
        Some(d.signum().cmp(&0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                self.$imp(o)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                (&self).$imp(&o)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                (&self).$imp(o)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                self.$imp(&o)
            }
        }
    };
}

impl Real {
    pub fn add(&self, o: &Real) -> Real {
        self.add_ref(o)
    }
    pub fn sub(&self, o: &Real) -> Real {
        self.add_ref(&o.neg_ref())
    }
    pub fn mul(&self, o: &Real) -> Real {
        self.mul_ref(o)
    }
    pub fn div(&self, o: &Real) -> Real {
        self.div_ref(o)
    }
    fn neg_ref(&self) -> Real {
        Real { man: -&self.man, exp: self.exp, prec: self.prec }
    }
}

real_binop!(Add, add, add_ref);
real_binop!(Mul, mul, mul_ref);
real_binop!(Div, div, div_ref);

impl Sub<&Real> for &Real {
    type Output = Real;
    fn sub(self, o: &Real) -> Real {
        self.add_ref(&o.neg_ref())
    }
}
impl Sub<Real> for Real {
    type Output = Real;
    fn sub(self, o: Real) -> Real {
        self.add_ref(&o.neg_ref())
    }
}
impl Sub<&Real> for Real {
    type Output = Real;
    fn sub(self, o: &Real) -> Real {
        self.add_ref(&o.neg_ref())
    }
}
impl Sub<Real> for &Real {
    type Output = Real;
    fn sub(self, o: Real) -> Real {
        self.add_ref(&o.neg_ref())
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        self.neg_ref()
    }
}
impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        self.neg_ref()
    }
}

#[derive(Clone, Copy, Hash, PartialEq, Eq)]
enum ConstKind {
    Pi,
    Ln2,
}

thread_local! {
    static CONSTS: RefCell<HashMap<(ConstKind, u32), Real>> = RefCell::new(HashMap::new());
}

fn cached_const(kind: ConstKind, prec: u32) -> Real {
    // bucket so nearby precisions share one computation
    let bucket = prec.div_ceil(256) * 256 + 64;
    let v = CONSTS.with(|c| c.borrow().get(&(kind, bucket)).cloned());
    let v = match v {
        Some(v) => v,
        None => {
            let v = match kind {
                ConstKind::Pi => compute_pi(bucket),
                ConstKind::Ln2 => compute_ln2(bucket),
            };
            CONSTS.with(|c| c.borrow_mut().insert((kind, bucket), v.clone()));
            v
        }
    };
    v.with_prec(prec)
}

/// `atan(1/x) * 2^w` in fixed point.
fn atan_inv(x: u64, w: u32) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut pw = (BigInt::one() << w) / x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !pw.is_zero() {
        let t = &pw / (2 * k + 1);
        if k % 2 == 0 { sum += t } else { sum -= t }
        pw /= &x2;
        k += 1;
    }
    sum
}

fn compute_pi(prec: u32) -> Real {
    let w = prec + 32;
    let s = atan_inv(5, w) * 16 - atan_inv(239, w) * 4;
    Real::make(s, -(w as i64), prec)
}

fn compute_ln2(prec: u32) -> Real {
    // ln 2 = sum 1/(k 2^k)
    let w = prec + 32;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    loop {
        if k as u32 > w {
            break;
        }
        let t = (BigInt::one() << (w - k as u32)) / k;
        if t.is_zero() {
            break;
        }
        sum += t;
        k += 1;
    }
    Real::make(sum, -(w as i64), prec)
}

/// Complex number over `Real`.
#[derive(Clone)]
pub struct Cx {
    pub re: Real,
    pub im: Real,
}

impl Cx {
    pub fn new(re: Real, im: Real) -> Cx {
        Cx { re, im }
    }

    pub fn zero(prec: u32) -> Cx {
        Cx::new(Real::zero(prec), Real::zero(prec))
    }

    pub fn one(prec: u32) -> Cx {
        Cx::new(Real::one(prec), Real::zero(prec))
    }

    pub fn i(prec: u32) -> Cx {
        Cx::new(Real::zero(prec), Real::one(prec))
    }

    pub fn from_real(re: Real) -> Cx {
        let p = re.prec();
        Cx::new(re, Real::zero(p))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Cx {
        Cx::new(Real::from_f64(re, prec), Real::from_f64(im, prec))
    }

    pub fn from_ratio(n: i64, d: i64, prec: u32) -> Cx {
        Cx::from_real(Real::from_ratio(n, d, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, p: u32) -> Cx {
        Cx::new(self.re.with_prec(p), self.im.with_prec(p))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Cx {
        Cx::new(self.re.clone(), -&self.im)
    }

    pub fn mul_i(&self) -> Cx {
        Cx::new(-&self.im, self.re.clone())
    }

    pub fn scale(&self, r: &Real) -> Cx {
        Cx::new(&self.re * r, &self.im * r)
    }

    pub fn mul_int(&self, k: i64) -> Cx {
        Cx::new(self.re.mul_int(k), self.im.mul_int(k))
    }

    pub fn mul_2k(&self, k: i64) -> Cx {
        Cx::new(self.re.mul_2k(k), self.im.mul_2k(k))
    }

    pub fn add_real(&self, r: &Real) -> Cx {
        Cx::new(&self.re + r, self.im.clone())
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    /// Approximate `log2 |z|`.
    pub fn log2_abs(&self) -> f64 {
        let a = self.re.log2_abs();
        let b = self.im.log2_abs();
        let m = a.max(b);
        if m == f64::NEG_INFINITY {
            return m;
        }
        m + 0.5 * (2f64.powf(2.0 * (a - m)) + 2f64.powf(2.0 * (b - m))).log2()
    }

    pub fn abs_f64(&self) -> f64 {
        2f64.powf(self.log2_abs())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn recip(&self) -> Cx {
        let n = self.norm_sqr();
        Cx::new((&self.re).div(&n), (-&self.im).div(&n))
    }

    pub fn sqr(&self) -> Cx {
        self.mul(self)
    }

    pub fn powi(&self, mut e: u64) -> Cx {
        let mut base = self.clone();
        let mut acc = Cx::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Cx {
        let p = self.prec();
        if self.is_zero() {
            return Cx::zero(p);
        }
        let r = self.abs();
        if !self.re.is_negative() {
            let a = (&r + &self.re).mul_2k(-1).sqrt();
            let b = (&self.im).div(&a.mul_2k(1));
            Cx::new(a, b)
        } else {
            let mut b = (&r - &self.re).mul_2k(-1).sqrt();
            if self.im.is_negative() {
                b = -b;
            }
            let a = (&self.im).div(&b.mul_2k(1));
            Cx::new(a, b)
        }
    }

    pub fn exp(&self) -> Cx {
        let m = self.re.exp();
        let (c, s) = self.im.cos_sin();
        Cx::new(&m * &c, &m * &s)
    }

    /// `e^{2 pi i z}`.
    pub fn e2pi(&self) -> Cx {
        let tp = Real::pi(self.prec() + 8).mul_2k(1);
        self.mul_i().scale(&tp).exp().with_prec(self.prec())
    }

    /// `e^{pi i z}`.
    pub fn epi(&self) -> Cx {
        let pi = Real::pi(self.prec() + 8);
        self.mul_i().scale(&pi).exp().with_prec(self.prec())
    }

    /// Relative distance `|a/b - 1|` as f64.
    pub fn rel_err(a: &Cx, b: &Cx) -> f64 {
        if b.is_zero() {
            return if a.is_zero() { 0.0 } else { f64::INFINITY };
        }
        2f64.powf((a - b).log2_abs() - b.log2_abs())
    }

    pub fn to_string_digits(&self, d: usize) -> String {
        let im = &self.im;
        let sign = if im.is_negative() { "-" } else { "+" };
        format!("{} {} {}i", self.re.to_sci(d), sign, im.abs().to_sci(d))
    }

    fn add_ref(&self, o: &Cx) -> Cx {
        Cx::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub_ref(&self, o: &Cx) -> Cx {
        Cx::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul_ref(&self, o: &Cx) -> Cx {
        Cx::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn div_ref(&self, o: &Cx) -> Cx {
        let n = o.norm_sqr();
        let re = (&self.re * &o.re + &self.im * &o.im).div(&n);
        let im = (&self.im * &o.re - &self.re * &o.im).div(&n);
        Cx::new(re, im)
    }
    pub fn add(&self, o: &Cx) -> Cx {
        self.add_ref(o)
    }
    pub fn sub(&self, o: &Cx) -> Cx {
        self.sub_ref(o)
    }
    pub fn mul(&self, o: &Cx) -> Cx {
        self.mul_ref(o)
    }
    pub fn div(&self, o: &Cx) -> Cx {
        self.div_ref(o)
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or_else(|| self.re.digits10());
        write!(f, "{}", self.to_string_digits(d))
    }
}

impl fmt::Debug for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(20))
    }
}

macro_rules! cx_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&Cx> for &Cx {
            type Output = Cx;
            fn $m(self, o: &Cx) -> Cx {
                self.$imp(o)
            }
        }
        impl $tr<Cx> for Cx {
            type Output = Cx;
            fn $m(self, o: Cx) -> Cx {
                (&self).$imp(&o)
            }
        }
        impl $tr<&Cx> for Cx {
            type Output = Cx;
            fn $m(self, o: &Cx) -> Cx {
                (&self).$imp(o)
            }
        }
        impl $tr<Cx> for &Cx {
            type Output = Cx;
            fn $m(self, o: Cx) -> Cx {
                self.$imp(&o)
            }
        }
    };
}

cx_binop!(Add, add, add_ref);
cx_binop!(Sub, sub, sub_ref);
cx_binop!(Mul, mul, mul_ref);
cx_binop!(Div, div, div_ref);

impl Neg for Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::new(-self.re, -self.im)
    }
}
impl Neg for &Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::new(-&self.re, -&self.im)
    }
}
