//! Closed-form coefficient predictors, the Ingham Tauberian formula, the
//! Bessel-type contour integral of the circle method, and ratio tables
//! against exact coefficients.
#![allow(non_snake_case)]

use crate::exactq::{expand_R1, expand_R3, QSeries};
use crate::mp::{Cx, Prec, Real};
use crate::numkernel::{NResult, NumError};
use crate::quad;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::f64::consts::PI;
use std::str::FromStr;

/// Which mock theta function: `a(n)` from `R_{3,3}`, `b(n)` from `R_1^{(3)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Which {
    A,
    B,
}

impl FromStr for Which {
    type Err = String;
    fn from_str(s: &str) -> Result<Which, String> {
        match s {
            "a" | "A" => Ok(Which::A),
            "b" | "B" => Ok(Which::B),
            _ => Err(format!("unknown series {s:?}, expected a or b")),
        }
    }
}

/// `1/(2 sin(pi/4) sin(5 pi/12)) + 1`.
pub fn amp_b() -> f64 {
    1.0 / (2.0 * (PI / 4.0).sin() * (5.0 * PI / 12.0).sin()) + 1.0
}

/// `a(n) ~ (-1)^n sqrt(6) / (12 sqrt n) e^{pi sqrt(n/12)}`.
pub fn predict_a(n: u64) -> f64 {
    let nf = n as f64;
    let s = if n % 2 == 0 { 1.0 } else { -1.0 };
    s * 6f64.sqrt() / (12.0 * nf.sqrt()) * (PI * (nf / 12.0).sqrt()).exp()
}

/// `b(n) ~ (1/(2 sin(pi/4) sin(5pi/12)) + 1) e^{pi sqrt(n/6)} / sqrt(24 n)`.
pub fn predict_b(n: u64) -> f64 {
    let nf = n as f64;
    amp_b() * (PI * (nf / 6.0).sqrt()).exp() / (24.0 * nf).sqrt()
}

/// Hypotheses `C(e^{-t}) ~ lambda t^alpha e^{A/t}` of Ingham's theorem.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TauberianParams {
    pub lambda: f64,
    pub alpha: f64,
    pub a: f64,
}

impl TauberianParams {
    /// The parameters for `R_1^{(3)}`: near `t = 0` it grows like
    /// `amp_b sqrt(pi/6) t^{-1/2} e^{pi^2/(24 t)}`.
    pub fn r31() -> TauberianParams {
        TauberianParams { lambda: amp_b() * (PI / 6.0).sqrt(), alpha: -0.5, a: PI * PI / 24.0 }
    }
}

/// `c(n) ~ lambda A^{alpha/2 + 1/4} / (2 sqrt(pi) n^{alpha/2 + 3/4}) e^{2 sqrt(A n)}`.
pub fn tauberian(p: TauberianParams, n: f64) -> NResult<f64> {
    if p.a <= 0.0 {
        return Err(NumError::Domain(format!("A = {} must be positive", p.a)));
    }
    let e = p.alpha / 2.0;
    Ok(p.lambda * p.a.powf(e + 0.25) / (2.0 * PI.sqrt() * n.powf(e + 0.75)) * (2.0 * (p.a * n).sqrt()).exp())
}

/// `u = sqrt(3n) pi / 12`.
pub fn wright_u(n: u64) -> f64 {
    (3.0 * n as f64).sqrt() * PI / 12.0
}

const WRIGHT_BUDGET: usize = 20_000;

/// `I = int_{1-iM}^{1+iM} e^{u(v + 1/v)} / sqrt(v) dv` along `Re v = 1`.
pub fn wright_I(n: u64, m: f64, prec: Prec) -> NResult<Cx> {
    if n == 0 || m <= 0.0 {
        return Err(NumError::Domain("need n >= 1 and M > 0".into()));
    }
    let u = wright_u(n);
    // the integrand peaks at e^{2u}; keep that many extra bits
    let w = prec.bits() + 32 + (2.0 * u / std::f64::consts::LN_2).ceil() as u32;
    let ur = Real::from_f64(u, w);
    let one = Real::one(w);
    let f = |t: &Real| {
        let v = Cx::new(one.clone(), t.clone());
        let e = (&v + &v.recip()).scale(&ur).exp();
        (e / v.sqrt()).mul_i()
    };
    let tol = prec.eps_log2() - 8.0 + 2.0 * u / std::f64::consts::LN_2;
    let h0 = (0.5 / u.sqrt()).min(0.25);
    let r = quad::integrate(f, &Real::from_f64(-m, w), &Real::from_f64(m, w), h0, tol, WRIGHT_BUDGET)
        .ok_or(NumError::NonConverged)?;
    Ok(r.with_prec(prec.bits()))
}

/// Leading asymptotic of `wright_I`: `i sqrt(12) / (3^{1/4} n^{1/4}) e^{pi sqrt(n/12)}`.
pub fn wright_I_asymptotic(n: u64) -> f64 {
    let nf = n as f64;
    12f64.sqrt() / (3f64.powf(0.25) * nf.powf(0.25)) * (PI * (nf / 12.0).sqrt()).exp()
}

/// `-i (-1)^n sqrt(3) sqrt(y) / 6 * I` with `y = 1/sqrt(192 n)`.
pub fn a_mainterm_from_I(n: u64, m: f64, prec: Prec) -> NResult<f64> {
    let i = wright_I(n, m, prec)?;
    let y = 1.0 / (192.0 * n as f64).sqrt();
    let s = if n % 2 == 0 { 1.0 } else { -1.0 };
    // -i * I is real up to quadrature noise
    let re = i.im.to_f64();
    Ok(s * 3f64.sqrt() * y.sqrt() / 6.0 * re)
}

/// Exact coefficients of `R_{3,3}` (for `a`) or `R_1^{(3)}` (for `b`) through `q^n`.
pub fn exact_series(which: Which, n: i64) -> QSeries {
    match which {
        Which::A => expand_R3(3, n),
        Which::B => expand_R1(3, n),
    }
}

pub fn predict(which: Which, n: u64) -> f64 {
    match which {
        Which::A => predict_a(n),
        Which::B => predict_b(n),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictionRow {
    pub n: u64,
    pub exact: String,
    pub predicted: f64,
    pub ratio: f64,
}

/// Rows `predicted / exact` with exact coefficients from an already expanded
/// series; rows with `exact = 0` are skipped.
pub fn ratio_rows(which: Which, series: &QSeries, ns: &[u64]) -> Vec<PredictionRow> {
    ns.iter()
        .filter_map(|&n| {
            let c: BigInt = series.coeff(n as i64);
            if c.is_zero() {
                return None;
            }
            let p = predict(which, n);
            Some(PredictionRow { n, exact: c.to_string(), predicted: p, ratio: p / c.to_f64()? })
        })
        .collect()
}

pub fn ratio_table(which: Which, ns: &[u64]) -> Vec<PredictionRow> {
    let top = ns.iter().copied().max().unwrap_or(0) as i64;
    ratio_rows(which, &exact_series(which, top), ns)
}

/// `n,exact,predicted,ratio,ratio_full`.
pub fn rows_csv(rows: &[PredictionRow]) -> String {
    let mut s = String::from("n,exact,predicted,ratio,ratio_full\n");
    for r in rows {
        s += &format!("{},{},{:.14e},{:.5},{}\n", r.n, r.exact, r.predicted, r.ratio, r.ratio);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs_and_amplitudes() {
        for n in 1..20 {
            assert_eq!(predict_a(n) < 0.0, n % 2 == 1);
            assert!(predict_b(n) > 0.0);
        }
        let c = predict_b(50) * (24.0 * 50f64).sqrt() / (PI * (50f64 / 6.0).sqrt()).exp();
        assert!((c - amp_b()).abs() < 1e-12);
        assert!("c".parse::<Which>().is_err());
    }
}
