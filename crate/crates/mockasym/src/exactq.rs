//! Truncated power series in `q` with exact integer coefficients, and the
//! multi-sum expansions built on them.

#![allow(non_snake_case)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;
use std::fmt::Write as _;

/// The published head of `R_3^(3)` through `q^49`, used by the CLI check.
pub const R33_HEAD: [i64; 50] = [
    1, 0, 0, -1, 1, -1, 1, 0, 1, -1, 1, -2, 2, -2, 1, -2, 2, -1, 3, -3, 3, -4, 3, -2, 4, -4, 4, -6, 5, -6, 6, -5, 6,
    -6, 7, -9, 9, -9, 9, -9, 11, -10, 12, -14, 13, -16, 15, -14, 17, -16,
];

/// `sum_i coeffs[i] q^(offset+i) + O(q^(order+1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub offset: i64,
    pub coeffs: Vec<BigInt>,
    pub order: i64,
}

/// Length of `(a;q^b)_m`: finite or infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Len {
    Fin(usize),
    Inf,
}

impl QSeries {
    pub fn zero(order: i64) -> QSeries {
        QSeries::from_coeffs(0, vec![BigInt::zero(); (order + 1).max(0) as usize], order)
    }

    pub fn one(order: i64) -> QSeries {
        QSeries::monomial(BigInt::one(), 0, order)
    }

    pub fn monomial(c: BigInt, e: i64, order: i64) -> QSeries {
        let mut s = QSeries::zero(order);
        if e >= 0 && e <= order {
            s.coeffs[e as usize] = c;
        }
        s
    }

    /// Builds a series; `coeffs` is padded or cut to `order - offset + 1` entries.
    pub fn from_coeffs(offset: i64, mut coeffs: Vec<BigInt>, order: i64) -> QSeries {
        coeffs.resize((order - offset + 1).max(0) as usize, BigInt::zero());
        QSeries { offset, coeffs, order }
    }

    pub fn from_i64s(offset: i64, cs: &[i64], order: i64) -> QSeries {
        QSeries::from_coeffs(offset, cs.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    /// Coefficient of `q^n`; zero below the offset. Panics above the order.
    pub fn coeff(&self, n: i64) -> BigInt {
        assert!(n <= self.order, "coefficient q^{n} beyond order {}", self.order);
        if n < self.offset {
            BigInt::zero()
        } else {
            self.coeffs[(n - self.offset) as usize].clone()
        }
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| self.offset + i as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn truncate(&self, order: i64) -> QSeries {
        assert!(order <= self.order);
        QSeries::from_coeffs(self.offset, self.coeffs.clone(), order)
    }

    /// Re-expresses the series with a different (lower or equal) offset.
    fn rebase(&self, offset: i64) -> Vec<BigInt> {
        debug_assert!(offset <= self.offset);
        let mut v = vec![BigInt::zero(); (self.order - offset + 1).max(0) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[(self.offset - offset) as usize + i] = c.clone();
        }
        v
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        let order = self.order.min(o.order);
        let off = self.offset.min(o.offset);
        let mut a = self.rebase(off);
        let b = o.rebase(off);
        a.truncate((order - off + 1).max(0) as usize);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        QSeries::from_coeffs(off, a, order)
    }

    pub fn neg(&self) -> QSeries {
        QSeries { offset: self.offset, coeffs: self.coeffs.iter().map(|c| -c).collect(), order: self.order }
    }

    pub fn sub(&self, o: &QSeries) -> QSeries {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigInt) -> QSeries {
        QSeries { offset: self.offset, coeffs: self.coeffs.iter().map(|c| c * k).collect(), order: self.order }
    }

    /// Product; the order is `min(N1 + o2, N2 + o1)`.
    pub fn mul(&self, o: &QSeries) -> QSeries {
        let order = (self.order + o.offset).min(o.order + self.offset);
        let off = self.offset + o.offset;
        let len = (order - off + 1).max(0) as usize;
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries::from_coeffs(off, out, order)
    }

    /// Multiplication by `q^k`; shifts the order along with the offset.
    pub fn shift(&self, k: i64) -> QSeries {
        QSeries { offset: self.offset + k, coeffs: self.coeffs.clone(), order: self.order + k }
    }

    /// Substitutes `q -> q^k`.
    pub fn substitute(&self, k: i64) -> QSeries {
        assert!(k >= 1);
        let off = self.offset * k;
        let order = self.order * k + (k - 1);
        let mut v = vec![BigInt::zero(); (order - off + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k as usize] = c.clone();
        }
        QSeries::from_coeffs(off, v, order)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "offset": self.offset,
            "order": self.order,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Option<QSeries> {
        let offset = v.get("offset")?.as_i64()?;
        let order = v.get("order")?.as_i64()?;
        let coeffs = v
            .get("coeffs")?
            .as_array()?
            .iter()
            .map(|c| c.as_str()?.parse().ok())
            .collect::<Option<Vec<BigInt>>>()?;
        if coeffs.len() as i64 != order - offset + 1 {
            return None;
        }
        Some(QSeries { offset, coeffs, order })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,c\n");
        for (i, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(s, "{},{}", self.offset + i as i64, c);
        }
        s
    }
}

/// Dense working series with offset 0, used by the in-place product loops.
#[derive(Clone, Debug)]
pub(crate) struct Dense {
    c: Vec<BigInt>,
    val: usize,
}

impl Dense {
    pub(crate) fn one(n: usize) -> Dense {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::one();
        Dense { c, val: 0 }
    }

    fn top(&self) -> usize {
        self.c.len() - 1
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.val > self.top()
    }

    /// Multiplication by `q^k` (with sign).
    pub(crate) fn shift(&mut self, k: usize, negate: bool) {
        if self.is_zero() {
            return;
        }
        let n = self.top();
        if self.val + k > n {
            self.val = n + 1;
            self.c.iter_mut().for_each(|x| x.set_zero());
            return;
        }
        if k > 0 {
            self.c.truncate(n + 1 - k);
            let mut v = vec![BigInt::zero(); k];
            v.append(&mut self.c);
            self.c = v;
            self.val += k;
        }
        if negate {
            for x in &mut self.c[self.val..] {
                *x = -std::mem::take(x);
            }
        }
    }

    /// Multiplication by `(1 - s q^e)`, `s = +-1`.
    pub(crate) fn mul_binom(&mut self, s: i32, e: usize) {
        if self.is_zero() || e == 0 {
            return;
        }
        let n = self.top();
        let mut i = n;
        while i >= self.val + e {
            let (lo, hi) = self.c.split_at_mut(i);
            if s > 0 { hi[0] -= &lo[i - e] } else { hi[0] += &lo[i - e] }
            i -= 1;
        }
    }

    /// Division by `(1 - s q^e)`, `s = +-1`.
    pub(crate) fn div_binom(&mut self, s: i32, e: usize) {
        if self.is_zero() {
            return;
        }
        assert!(e > 0);
        let n = self.top();
        for i in self.val + e..=n {
            let (lo, hi) = self.c.split_at_mut(i);
            if s > 0 { hi[0] += &lo[i - e] } else { hi[0] -= &lo[i - e] }
        }
    }

    pub(crate) fn add_assign(&mut self, o: &Dense) {
        if o.is_zero() {
            return;
        }
        for i in o.val..=o.top() {
            self.c[i] += &o.c[i];
        }
        self.val = self.val.min(o.val);
    }

    pub(crate) fn zero(n: usize) -> Dense {
        Dense { c: vec![BigInt::zero(); n + 1], val: n + 1 }
    }

    pub(crate) fn into_series(self) -> QSeries {
        let n = self.top() as i64;
        QSeries::from_coeffs(0, self.c, n)
    }
}

fn check_order(n: i64) -> usize {
    assert!(n >= 0, "order must be nonnegative");
    n as usize
}

/// `(sign q^a; q^b)_m` truncated at `q^N`.
pub fn qpoch(sign: i32, a: usize, b: usize, m: Len, n: i64) -> QSeries {
    assert!(a >= 1 && b >= 1 && (sign == 1 || sign == -1));
    let n = check_order(n);
    let mut d = Dense::one(n);
    let mut j = 0;
    loop {
        if let Len::Fin(m) = m {
            if j >= m {
                break;
            }
        }
        let e = a + j * b;
        if e > n {
            break;
        }
        d.mul_binom(sign, e);
        j += 1;
    }
    d.into_series()
}

/// Reciprocal of `qpoch(sign, a, b, m, N)`.
pub fn qpoch_inv(sign: i32, a: usize, b: usize, m: Len, n: i64) -> QSeries {
    assert!(a >= 1 && b >= 1 && (sign == 1 || sign == -1));
    let n = check_order(n);
    let mut d = Dense::one(n);
    let mut j = 0;
    loop {
        if let Len::Fin(m) = m {
            if j >= m {
                break;
            }
        }
        let e = a + j * b;
        if e > n {
            break;
        }
        d.div_binom(sign, e);
        j += 1;
    }
    d.into_series()
}

/// Gaussian binomial `[m choose k]` in the variable `q^base`.
pub fn gauss_binom(m: usize, k: usize, base: usize, n: i64) -> QSeries {
    assert!(base >= 1);
    let nn = check_order(n);
    if k > m {
        return QSeries::zero(n);
    }
    let mut d = Dense::one(nn);
    for j in 1..=k {
        d.mul_binom(1, base * (m - k + j));
        d.div_binom(1, base * j);
    }
    d.into_series()
}

/// Index `n_1 <= ... <= n_k`; `nvec[0]` is `n_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiIndex {
    nvec: Vec<usize>,
}

impl MultiIndex {
    pub fn new(nvec: Vec<usize>) -> Option<MultiIndex> {
        if nvec.len() < 3 || nvec.windows(2).any(|w| w[0] > w[1]) {
            return None;
        }
        Some(MultiIndex { nvec })
    }

    pub fn k(&self) -> usize {
        self.nvec.len()
    }

    /// `n_i` for `1 <= i <= k`, with `n_0 = 0`.
    pub fn n(&self, i: usize) -> usize {
        if i == 0 { 0 } else { self.nvec[i - 1] }
    }

    /// All nondecreasing indices of length `k` with `n_k <= max`.
    pub fn all(k: usize, max: usize) -> Vec<MultiIndex> {
        fn rec(k: usize, lo: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() == k {
                out.push(MultiIndex { nvec: cur.clone() });
                return;
            }
            for v in lo..=max {
                cur.push(v);
                rec(k, v, max, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(k, 0, max, &mut Vec::new(), &mut out);
        out
    }
}

fn tri(n: usize) -> usize {
    n * (n + 1) / 2
}

/// `B_k(n_k, ..., n_1; q^scale)` truncated at `q^N`.
pub fn bailey_B(idx: &MultiIndex, scale: usize, n: i64) -> QSeries {
    assert!(scale == 1 || scale == 2);
    let nn = check_order(n);
    let inner = nn / scale;
    let k = idx.k();
    let mut d = Dense::one(inner);
    let nk1 = idx.n(k - 1);
    d.shift(tri(nk1), idx.n(1) % 2 == 1);
    for j in 1..=nk1 {
        d.mul_binom(-1, j);
    }
    for j in 2..k {
        let s = 1usize << (j - 2);
        let m = idx.n(k - j);
        d.shift(s * m, false);
        for t in 1..=2 * m {
            d.mul_binom(-1, s * t);
        }
    }
    for j in 1..=k {
        let s = 1usize << (j - 1);
        for t in 1..=idx.n(k - j + 1) - idx.n(k - j) {
            d.div_binom(1, s * t);
        }
    }
    let s = d.into_series();
    if scale == 1 { s } else { s.substitute(2).truncate(n) }
}

/// One summation level of a nested Bailey sum.
struct Level {
    /// Base `b` of the denominator `(q^b; q^b)_{n_i - n_{i-1}}`.
    base: usize,
    numer: Box<dyn Fn(usize, &mut Dense)>,
}

/// Evaluates `sum over n_1 <= ... <= n_k` of the product of level factors,
/// innermost level first in `levels`, outer index bounded by `cap`.
///
/// `G_i(m) = sum_{n >= m} N_i(n) G_{i+1}(n) / (q^b;q^b)_{n-m}`, computed for
/// every `m` at once by dividing one running term by `(1 - q^{b(n-m)})` as `m`
/// steps down.
fn nested(levels: &[Level], cap: usize, n: usize) -> Dense {
    let mut next: Vec<Option<Dense>> = (0..=cap).map(|_| Some(Dense::one(n))).collect();
    for level in levels.iter().rev() {
        let mut g: Vec<Option<Dense>> = (0..=cap).map(|_| None).collect();
        for top in 0..=cap {
            let Some(src) = &next[top] else { continue };
            let mut cur = src.clone();
            (level.numer)(top, &mut cur);
            if cur.is_zero() {
                continue;
            }
            let mut m = top;
            loop {
                match &mut g[m] {
                    Some(acc) => acc.add_assign(&cur),
                    slot @ None => *slot = Some(cur.clone()),
                }
                if m == 0 {
                    break;
                }
                cur.div_binom(1, level.base * (top - m + 1));
                m -= 1;
            }
        }
        next = g;
    }
    next.swap_remove(0).unwrap_or_else(|| Dense::zero(n))
}

/// Level factors of `B_k` in `q^scale`, innermost first. `outer` supplies the
/// extra factor carried by the outermost index.
fn bailey_levels(k: usize, scale: usize, outer: Box<dyn Fn(usize, &mut Dense)>, outer_base: usize) -> Vec<Level> {
    let mut levels: Vec<Level> = Vec::new();
    for i in 1..=k - 2 {
        let s = scale << (k - i - 2);
        let sign = i == 1;
        levels.push(Level {
            base: scale << (k - i),
            numer: Box::new(move |nv, d| {
                d.shift(s * nv, sign && nv % 2 == 1);
                for t in 1..=2 * nv {
                    d.mul_binom(-1, s * t);
                }
            }),
        });
    }
    levels.push(Level {
        base: 2 * scale,
        numer: Box::new(move |nv, d| {
            d.shift(scale * tri(nv), k == 2 && nv % 2 == 1);
            for j in 1..=nv {
                d.mul_binom(-1, scale * j);
            }
        }),
    });
    levels.push(Level { base: outer_base, numer: outer });
    levels
}

/// Default outer bound `ceil(sqrt(2N)) + 1`.
pub fn default_outer_bound(n: i64) -> usize {
    ((2.0 * n.max(0) as f64).sqrt().ceil() as usize) + 1
}

pub fn expand_R1(k: usize, n: i64) -> QSeries {
    expand_R1_bounded(k, n, default_outer_bound(n))
}

/// `R_1^(k)` with an explicit outer-index bound.
pub fn expand_R1_bounded(k: usize, n: i64, cap: usize) -> QSeries {
    assert!(k >= 3, "k must be at least 3");
    let nn = check_order(n);
    let outer = Box::new(|nv: usize, d: &mut Dense| d.shift(tri(nv), false));
    nested(&bailey_levels(k, 1, outer, 1), cap, nn).into_series()
}

pub fn expand_R3(k: usize, n: i64) -> QSeries {
    expand_R3_bounded(k, n, default_outer_bound(n))
}

/// `R_3^(k)` with an explicit outer-index bound. `B_k` in `q^2` is realised by
/// doubling every base and exponent inside the levels.
pub fn expand_R3_bounded(k: usize, n: i64, cap: usize) -> QSeries {
    assert!(k >= 3, "k must be at least 3");
    let nn = check_order(n);
    let outer = Box::new(|nv: usize, d: &mut Dense| {
        d.shift(nv * nv + 2 * nv, nv % 2 == 1);
        for j in 0..nv {
            d.mul_binom(1, 2 * j + 1);
        }
        for j in 1..=nv {
            d.div_binom(-1, 2 * j);
        }
    });
    nested(&bailey_levels(k, 2, outer, 2), cap, nn).into_series()
}

/// `nu(-q) = sum q^{n^2+n} / (q;q^2)_{n+1}`.
pub fn expand_nu_neg(n: i64) -> QSeries {
    let nn = check_order(n);
    let mut acc = Dense::zero(nn);
    let mut j = 0;
    while j * j + j <= nn {
        let mut d = Dense::one(nn);
        d.shift(j * j + j, false);
        for t in 0..=j {
            d.div_binom(1, 2 * t + 1);
        }
        acc.add_assign(&d);
        j += 1;
    }
    acc.into_series()
}

/// Tenth-order `phi(q) = sum q^{n(n+1)/2} / (q;q^2)_{n+1}`.
pub fn expand_phi10(n: i64) -> QSeries {
    let nn = check_order(n);
    let mut acc = Dense::zero(nn);
    let mut j = 0;
    while tri(j) <= nn {
        let mut d = Dense::one(nn);
        d.shift(tri(j), false);
        for t in 0..=j {
            d.div_binom(1, 2 * t + 1);
        }
        acc.add_assign(&d);
        j += 1;
    }
    acc.into_series()
}

/// Smallest exponent `n` with `c(n+1) < c(n)`.
pub fn monotone_check(s: &QSeries) -> Option<i64> {
    assert!(s.offset >= 0, "monotone_check needs offset >= 0");
    let c: Vec<BigInt> = (0..=s.order).map(|n| s.coeff(n)).collect();
    c.windows(2).position(|w| w[1] < w[0]).map(|i| i as i64)
}

/// First exponent with a negative coefficient.
pub fn first_negative(s: &QSeries) -> Option<i64> {
    s.coeffs.iter().position(|c| c.is_negative()).map(|i| s.offset + i as i64)
}

/// The Gaussian-binomial form of `B_4(n_4, n_3, n_2, n_1; q)`.
pub fn b4_gaussian(idx: &MultiIndex, n: i64) -> QSeries {
    assert_eq!(idx.k(), 4);
    let (n1, n2, n3, n4) = (idx.n(1), idx.n(2), idx.n(3), idx.n(4));
    let e = (tri(n3) + n2 + 2 * n1) as i64;
    if e > n {
        return QSeries::zero(n);
    }
    let w = n - e;
    let mut s = gauss_binom(n4, n3, 1, w)
        .mul(&gauss_binom(n3, n2, 2, w))
        .mul(&gauss_binom(n2, n1, 4, w))
        .mul(&qpoch(-1, 1, 2, Len::Fin(n2), w))
        .mul(&qpoch(-1, 2, 4, Len::Fin(n1), w))
        .mul(&qpoch_inv(1, 1, 1, Len::Fin(n4), w));
    if n1 % 2 == 1 {
        s = s.neg();
    }
    s.shift(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &QSeries) -> Vec<i64> {
        s.coeffs.iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn euler_product() {
        assert_eq!(ints(&qpoch(1, 1, 1, Len::Inf, 7)), vec![1, -1, -1, 0, 0, 1, 0, 1]);
        assert_eq!(ints(&qpoch(1, 1, 1, Len::Fin(0), 10)), vec![1; 1].into_iter().chain([0; 10]).collect::<Vec<_>>());
        assert_eq!(ints(&qpoch(-1, 1, 1, Len::Fin(1), 5)), vec![1, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn odd_partitions() {
        assert_eq!(qpoch_inv(1, 1, 2, Len::Inf, 3).coeff(3), BigInt::from(2));
        let a = qpoch(1, 2, 3, Len::Fin(5), 30);
        let b = qpoch_inv(1, 2, 3, Len::Fin(5), 30);
        assert_eq!(a.mul(&b), QSeries::one(30));
    }

    #[test]
    fn gauss_small() {
        assert_eq!(ints(&gauss_binom(2, 1, 1, 4)), vec![1, 1, 0, 0, 0]);
        assert!(gauss_binom(3, 5, 1, 10).is_zero());
        assert_eq!(gauss_binom(7, 0, 1, 6), QSeries::one(6));
        // [4 choose 2] = 1 + q + 2q^2 + q^3 + q^4
        assert_eq!(ints(&gauss_binom(4, 2, 1, 5)), vec![1, 1, 2, 1, 1, 0]);
        assert_eq!(ints(&gauss_binom(4, 2, 2, 5)), vec![1, 0, 1, 0, 2, 0]);
    }

    #[test]
    fn bailey_small() {
        let i0 = MultiIndex::new(vec![0, 0, 0]).unwrap();
        assert_eq!(bailey_B(&i0, 1, 10), QSeries::one(10));
        let i1 = MultiIndex::new(vec![0, 0, 1]).unwrap();
        assert_eq!(ints(&bailey_B(&i1, 1, 5)), vec![1; 6]);
        assert!(MultiIndex::new(vec![1, 0, 2]).is_none());
    }

    #[test]
    fn series_ops() {
        let a = QSeries::from_i64s(1, &[1, 2, 3], 3);
        let b = QSeries::from_i64s(0, &[1, -1], 1);
        let p = a.mul(&b);
        assert_eq!(p.order, 2);
        assert_eq!(p.offset, 1);
        assert_eq!(ints(&p), vec![1, 1]);
        assert_eq!(a.add(&b).order, 1);
        let s = a.substitute(2);
        assert_eq!((s.offset, s.order), (2, 7));
        assert_eq!(s.coeff(4), BigInt::from(2));
        assert_eq!(s.coeff(5), BigInt::zero());
    }

    #[test]
    fn json_roundtrip() {
        let s = expand_nu_neg(30);
        let j = s.to_json();
        assert_eq!(QSeries::from_json(&j).unwrap(), s);
        assert!(s.to_csv().starts_with("n,c\n0,1\n1,1\n2,2\n"));
    }

    #[test]
    fn nu_and_phi_heads() {
        assert_eq!(ints(&expand_nu_neg(8)), vec![1, 1, 2, 2, 2, 3, 4, 4, 5]);
        // phi(q) = 1/(1-q) + q/((1-q)(1-q^3)) + ..., expanded by hand
        assert_eq!(ints(&expand_phi10(5)), vec![1, 2, 2, 3, 4, 4]);
    }

    #[test]
    fn monotone_examples() {
        assert_eq!(monotone_check(&QSeries::from_i64s(0, &[1, 2, 1], 2)), Some(1));
        assert_eq!(monotone_check(&expand_R3(3, 50)), Some(0));
        assert_eq!(monotone_check(&expand_nu_neg(200)), None);
    }
}
