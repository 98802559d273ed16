//! Exact bookkeeping for the minor arcs: the cusp sets `X(j)`, the exponent
//! budget `F(a, p/h)` and the envelopes bounding reciprocal theta functions
//! away from the dominant cusp.

use crate::cuspasym::Cusp;
use crate::numkernel::{NResult, NumError, Q};
use num_integer::Integer;
use serde::Serialize;
use std::f64::consts::PI;

/// The four exponent vectors `(a1, a2, a3, a4)` appearing in `T`.
pub const T_VECTORS: [ExpVector; 4] = [
    ExpVector([4, 20, 46, 70]),
    ExpVector([4, 68, 46, 22]),
    ExpVector([4, 68, 94, 70]),
    ExpVector([12, 20, 94, 22]),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExpVector(pub [i64; 4]);

impl std::fmt::Display for ExpVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// Reduced `p/h` with `0 < p < h`, `h` even, `h <= j`, sorted ascending.
pub fn cusp_set(j: i64) -> Vec<Cusp> {
    let mut out: Vec<Cusp> = (2..=j)
        .step_by(2)
        .flat_map(|h| (1..h).filter(move |p| p.gcd(&h) == 1).map(move |p| Cusp { p, h }))
        .collect();
    out.sort_by(|a, b| (a.p * b.h).cmp(&(b.p * a.h)));
    out
}

fn frac(x: Q) -> Q {
    x - x.floor()
}

/// `(H_j, beta_j)` at the cusp `c`; residues are taken in `[0, h)` (resp.
/// `[0, 2h)`) and `gcd(h, 0) = h`.
pub fn hj_betaj(j: usize, a: ExpVector, c: Cusp) -> NResult<(Q, Q)> {
    let (p, h) = (c.p, c.h);
    let g = |m: i64| h.gcd(&(m * p).rem_euclid(h));
    let r = |m: i64| (m * p).rem_euclid(h);
    Ok(match j {
        0 => (Q::new(h, g(288)), Q::new(r(96), g(288))),
        1 => (Q::new(h, g(16)), Q::new(r(a.0[0]), g(16))),
        2 => (Q::new(h, g(96)), Q::new(r(a.0[1]), g(96))),
        3 | 4 => {
            let num = (h + 2 * a.0[j - 1] * p).rem_euclid(2 * h);
            (Q::new(h, g(96)), Q::new(num, 2 * g(96)))
        }
        _ => return Err(NumError::Domain(format!("j = {j} is outside 0..=4"))),
    })
}

/// `P_j = ({beta_j}^2 + 1/4 - {beta_j}) / H_j^2`.
pub fn p_j(j: usize, a: ExpVector, c: Cusp) -> NResult<Q> {
    let (hh, b) = hj_betaj(j, a, c)?;
    let f = frac(b);
    Ok((f * f + Q::new(1, 4) - f) / (hh * hh))
}

/// `F(a, p/h) = 24/h^2 + gcd(h, 24p mod h)^2/h^2 - P0 - 6P1 - P2 + P3 + P4`.
pub fn f_value(a: ExpVector, c: Cusp) -> NResult<Q> {
    let h = c.h;
    let g = h.gcd(&(24 * c.p).rem_euclid(h));
    let p = |j| p_j(j, a, c);
    Ok(Q::new(24, h * h) + Q::new(g * g, h * h) - p(0)? - p(1)? * 6 - p(2)? + p(3)? + p(4)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct VectorSummary {
    pub vector: ExpVector,
    /// Cases in `X(24)` other than `1/2`.
    pub count: usize,
    pub max: String,
    pub argmax: String,
    pub all_below_2: bool,
    /// `F` at `1/2`, the major-arc cusp.
    pub at_half: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FLemmaReport {
    pub per_vector: Vec<VectorSummary>,
    /// Over all vectors, `1/2` excluded.
    pub global_max: String,
    pub argmax: String,
    pub all_below_2: bool,
    /// Same check with `1/2` included (63 cases per vector).
    pub count_with_half: usize,
    pub all_below_2_with_half: bool,
    #[serde(skip)]
    pub global_max_q: Q,
}

/// Exhaustive exact evaluation of `F` over the four vectors and `X(24)`.
pub fn verify_f_lemma() -> FLemmaReport {
    let half = Cusp { p: 1, h: 2 };
    let set = cusp_set(24);
    let two = Q::from_integer(2);
    let mut per_vector = vec![];
    let mut global: Option<(Q, String)> = None;
    let mut with_half_ok = true;
    for a in T_VECTORS {
        let mut best: Option<(Q, Cusp)> = None;
        let mut count = 0;
        let mut ok = true;
        for &c in &set {
            let f = f_value(a, c).expect("F is finite on X(24)");
            if c == half {
                with_half_ok &= f < two;
                continue;
            }
            count += 1;
            ok &= f < two;
            with_half_ok &= f < two;
            if best.is_none_or(|(m, _)| f > m) {
                best = Some((f, c));
            }
        }
        let (m, c) = best.expect("X(24) has cusps besides 1/2");
        let at_half = f_value(a, half).expect("F is finite at 1/2");
        if global.as_ref().is_none_or(|(g, _)| m > *g) {
            global = Some((m, format!("{c} for {a}")));
        }
        per_vector.push(VectorSummary {
            vector: a,
            count,
            max: m.to_string(),
            argmax: c.to_string(),
            all_below_2: ok,
            at_half: at_half.to_string(),
        });
    }
    let (g, arg) = global.expect("four vectors");
    FLemmaReport {
        all_below_2: per_vector.iter().all(|v| v.all_below_2),
        per_vector,
        global_max: g.to_string(),
        argmax: arg,
        count_with_half: set.len(),
        all_below_2_with_half: with_half_ok,
        global_max_q: g,
    }
}

/// `vector,p,h,F_num,F_den,F_decimal` for every vector and cusp of `X(24)`.
pub fn f_table_csv() -> String {
    let mut s = String::from("vector,p,h,F_num,F_den,F_decimal\n");
    for a in T_VECTORS {
        for c in cusp_set(24) {
            let f = f_value(a, c).expect("F is finite on X(24)");
            let d = *f.numer() as f64 / *f.denom() as f64;
            s += &format!("\"{a}\",{},{},{},{},{d:.15}\n", c.p, c.h, f.numer(), f.denom());
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EnvelopeKind {
    Full,
    HalfShift,
    ThetaHalf,
}

/// `eps = 1 - 1/sqrt(1 + M^2)`.
pub fn cone_epsilon(m: f64) -> f64 {
    1.0 - 1.0 / (1.0 + m * m).sqrt()
}

/// Natural log of the envelope bounding `1/theta` at `v = 1/(delta sqrt n)`,
/// `|u| > M v`:
/// `n^{-1/4} e^{(3 delta sqrt n / (2 pi b)) (pi^2/6 - eps)}` for `theta(a tau (+1/2); b tau)`,
/// `n^{-3/4} e^{(delta sqrt n / (pi b)) (pi^2/6 - eps)}` for `theta(1/2; b tau)`.
pub fn ln_bound_envelope(kind: EnvelopeKind, a: i64, b: i64, n: f64, delta: f64, m: f64) -> NResult<f64> {
    if kind != EnvelopeKind::ThetaHalf && !(0 < a && a < b) {
        return Err(NumError::Domain(format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    if b <= 0 || delta <= 0.0 || m <= 0.0 || n <= 0.0 {
        return Err(NumError::Domain("b, delta, M and n must be positive".into()));
    }
    let eps = cone_epsilon(m);
    let budget = PI * PI / 6.0 - eps;
    let b = b as f64;
    Ok(match kind {
        EnvelopeKind::Full | EnvelopeKind::HalfShift => -0.25 * n.ln() + 3.0 * delta * n.sqrt() / (2.0 * PI * b) * budget,
        EnvelopeKind::ThetaHalf => -0.75 * n.ln() + delta * n.sqrt() / (PI * b) * budget,
    })
}

/// The envelope itself (may overflow to infinity for huge `n`).
pub fn log_bound_envelope(kind: EnvelopeKind, a: i64, b: i64, n: f64, delta: f64, m: f64) -> NResult<f64> {
    Ok(ln_bound_envelope(kind, a, b, n, delta, m)?.exp())
}

#[derive(Clone, Debug, Serialize)]
pub struct RoughCuspBound {
    pub epsilon: f64,
    /// Smallest `h~` for which `1/(2h~^2) + 5/4 - 15 eps/(2 pi^2) < 1`.
    pub h_threshold_odd: f64,
    /// Whether every `h~ >= 1` passes the odd-`h` inequality.
    pub h_threshold_odd_ok: bool,
    /// `5 sqrt(24 / (15 eps/pi^2 - 1/2))`: even `h` above it cannot compete with `1/2`.
    pub h_threshold_even: f64,
}

pub fn rough_cusp_bound_report(epsilon: f64) -> NResult<RoughCuspBound> {
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(NumError::Domain(format!("epsilon = {epsilon} is outside (0, 1)")));
    }
    let s = 15.0 * epsilon / (PI * PI);
    if s <= 0.5 {
        return Err(NumError::Domain(format!("15 eps / pi^2 = {s} <= 1/2, threshold undefined")));
    }
    // 1/(2h^2) < s/2 - 1/4
    let h_odd = 1.0 / (2.0 * (s / 2.0 - 0.25)).sqrt();
    Ok(RoughCuspBound {
        epsilon,
        h_threshold_odd: h_odd,
        h_threshold_odd_ok: h_odd < 1.0,
        h_threshold_even: 5.0 * (24.0 / (s - 0.5)).sqrt(),
    })
}
