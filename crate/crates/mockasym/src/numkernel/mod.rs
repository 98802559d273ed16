//! Multiprecision evaluation of theta functions, eta, Appell sums, Mordell
//! integrals and the analytic forms of the mock theta functions.

mod appell;
mod tfn;
mod theta;
mod validate;

pub use appell::{appell_A, appell_sum, mordell_h, mu};
pub use tfn::{q_sum, varsigma, R31_fn, R33_fn, T_fn, T_jform, T_raw, T_theta_np, Q_rs};
pub use theta::{
    eta, jtheta_convert, jtheta_eval, theta, theta_big, theta_eval, theta_np, QPowSpec, ThetaEval,
};
pub use validate::{validate_transforms, EvalReport, Sample};

use crate::mp::{Cx, Prec, Real};
use num_rational::Ratio;
use thiserror::Error;

pub type Q = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("tau is not in the upper half-plane")]
    NotUpperHalfPlane,
    #[error("pole: {0}")]
    Pole(String),
    #[error("division by a theta value indistinguishable from zero")]
    Divide,
    #[error("quadrature did not converge within the subdivision budget")]
    NonConverged,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("main term vanishes identically")]
    Degenerate,
}

pub type NResult<T> = Result<T, NumError>;

/// A point `tau = u + iv` of the upper half-plane.
#[derive(Clone, Debug)]
pub struct HPoint {
    pub u: Real,
    pub v: Real,
}

impl HPoint {
    pub fn new(u: Real, v: Real) -> NResult<HPoint> {
        if v.signum() <= 0 {
            return Err(NumError::NotUpperHalfPlane);
        }
        Ok(HPoint { u, v })
    }

    pub fn from_f64(u: f64, v: f64, prec: Prec) -> NResult<HPoint> {
        HPoint::new(Real::from_f64(u, prec.bits()), Real::from_f64(v, prec.bits()))
    }

    /// Parses decimal strings exactly, e.g. `("0.21", "0.55")`.
    pub fn parse(u: &str, v: &str, prec: Prec) -> NResult<HPoint> {
        let bad = || NumError::Domain(format!("cannot parse tau = {u} + {v}i"));
        HPoint::new(Real::parse(u, prec.bits()).ok_or_else(bad)?, Real::parse(v, prec.bits()).ok_or_else(bad)?)
    }

    pub fn tau(&self) -> Cx {
        Cx::new(self.u.clone(), self.v.clone())
    }
}

pub(crate) fn check_tau(tau: &Cx) -> NResult<()> {
    if tau.im.signum() <= 0 {
        Err(NumError::NotUpperHalfPlane)
    } else {
        Ok(())
    }
}

/// `r * z` for rational `r`.
pub fn scale_q(z: &Cx, r: Q) -> Cx {
    let z = z.mul_int(*r.numer());
    if *r.denom() == 1 {
        z
    } else {
        let d = Real::from_int(*r.denom(), z.prec());
        Cx::new(z.re.div(&d), z.im.div(&d))
    }
}

/// `q^r = e^{2 pi i r tau}`, taken directly from `tau`.
pub fn qpow(r: Q, tau: &Cx) -> Cx {
    scale_q(tau, r).e2pi()
}

pub fn qpow_int(r: i64, tau: &Cx) -> Cx {
    qpow(Q::from_integer(r), tau)
}

/// `1/2 + r tau` (or `r tau`).
pub(crate) fn lattice_point(r: Q, half: bool, tau: &Cx) -> Cx {
    let z = scale_q(tau, r);
    if half {
        z.add_real(&Real::from_ratio(1, 2, tau.prec()))
    } else {
        z
    }
}
