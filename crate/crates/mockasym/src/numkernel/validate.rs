use super::{eta, mordell_h, mu, theta, theta_eval, NResult};
use crate::mp::{Cx, Prec, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Relative tolerance every law is judged against.
pub const LAW_TOL: f64 = 1e-9;

/// A test point `(tau, z1, z2)`; single-variable laws use `z1`.
#[derive(Clone, Debug)]
pub struct Sample {
    pub tau: Cx,
    pub z1: Cx,
    pub z2: Cx,
}

impl Sample {
    /// Seeded samples with `v in [0.4, 2]`, `|u| <= 1/2`, `|Re z| <= 1`,
    /// `|Im z| <= 1/2`, rejecting points near zeros of theta or poles of mu.
    pub fn random(count: usize, seed: u64, prec: Prec) -> Vec<Sample> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = prec.bits();
        let mut out = Vec::with_capacity(count);
        let mut pick = |lo: f64, hi: f64| {
            let x: f64 = rng.gen_range(lo..hi);
            // round to a short decimal so samples print exactly
            Real::parse(&format!("{x:.6}"), b).unwrap()
        };
        while out.len() < count {
            let tau = Cx::new(pick(-0.5, 0.5), pick(0.4, 2.0));
            let z1 = Cx::new(pick(-1.0, 1.0), pick(-0.5, 0.5));
            let z2 = Cx::new(pick(-1.0, 1.0), pick(-0.5, 0.5));
            let s = Sample { tau, z1, z2 };
            if s.well_separated(prec) {
                out.push(s);
            }
        }
        out
    }

    fn well_separated(&self, prec: Prec) -> bool {
        let far = |z: &Cx| match theta_eval(z, &self.tau, prec) {
            Ok(t) => t.value.log2_abs() > t.max_term_log2 - 6.0,
            Err(_) => false,
        };
        far(&self.z1) && far(&self.z2) && mu(&self.z1, &self.z2, &self.tau, prec).is_ok()
    }

    fn describe(&self) -> String {
        format!("tau={} z1={} z2={}", self.tau.to_string_digits(8), self.z1.to_string_digits(8), self.z2.to_string_digits(8))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalReport {
    pub law: String,
    pub sample: String,
    pub left: String,
    pub right: String,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
    pub note: String,
}

struct Law {
    id: &'static str,
    /// Whether the law carries a quadratic exponential that may be flipped.
    flippable: bool,
    /// `(left, right)` with the quadratic-exponential sign `sgn`.
    eval: fn(&Sample, Prec, i64) -> NResult<(Cx, Cx)>,
}

fn one(w: u32) -> Real {
    Real::one(w)
}

/// `sqrt(-i tau)`, principal branch.
fn sqrt_mit(tau: &Cx) -> Cx {
    (-tau.mul_i()).sqrt()
}

/// `e^{sgn pi i z^2 / tau}`.
fn quad_exp(z: &Cx, tau: &Cx, sgn: i64) -> Cx {
    (z.sqr() / tau).mul_int(sgn).epi()
}

fn inv_tau(tau: &Cx) -> Cx {
    -tau.recip()
}

fn phase(num: i64, den: i64, w: u32) -> Cx {
    Cx::from_real(Real::from_ratio(num, den, w)).epi()
}

fn laws() -> Vec<Law> {
    vec![
        Law { id: "mu(tau+1)", flippable: false, eval: |s, p, _| {
            let w = p.bits();
            let l = mu(&s.z1, &s.z2, &s.tau.add_real(&one(w)), p)?;
            Ok((l, phase(-1, 4, w) * mu(&s.z1, &s.z2, &s.tau, p)?))
        }},
        Law { id: "mu(z1+1)", flippable: false, eval: |s, p, _| {
            let w = p.bits();
            Ok((mu(&s.z1.add_real(&one(w)), &s.z2, &s.tau, p)?, -mu(&s.z1, &s.z2, &s.tau, p)?))
        }},
        Law { id: "mu(z2+1)", flippable: false, eval: |s, p, _| {
            let w = p.bits();
            Ok((mu(&s.z1, &s.z2.add_real(&one(w)), &s.tau, p)?, -mu(&s.z1, &s.z2, &s.tau, p)?))
        }},
        Law { id: "mu(-1/tau)", flippable: true, eval: |s, p, sgn| {
            let t = &s.tau;
            let l = mu(&(&s.z1 / t), &(&s.z2 / t), &inv_tau(t), p)?;
            let d = &s.z1 - &s.z2;
            let f = sqrt_mit(t) * quad_exp(&d, t, -sgn);
            let h = mordell_h(&d, t, p)?;
            let two_i = Cx::i(p.bits()).mul_int(2);
            let r = -(&f * mu(&s.z1, &s.z2, t, p)?) + &f * h / two_i;
            Ok((l, r))
        }},
        Law { id: "h(-1/tau)", flippable: true, eval: |s, p, sgn| {
            let t = &s.tau;
            let l = mordell_h(&(&s.z1 / t), &inv_tau(t), p)?;
            Ok((l, sqrt_mit(t) * quad_exp(&s.z1, t, -sgn) * mordell_h(&s.z1, t, p)?))
        }},
        Law { id: "theta(z+tau)", flippable: false, eval: |s, p, _| {
            let t = &s.tau;
            let l = theta(&(&s.z1 + t), t, p)?;
            let e = (t + s.z1.mul_int(2)).mul_int(-1).epi();
            Ok((l, -(e * theta(&s.z1, t, p)?)))
        }},
        Law { id: "theta(tau+1)", flippable: false, eval: |s, p, _| {
            let w = p.bits();
            let l = theta(&s.z1, &s.tau.add_real(&one(w)), p)?;
            Ok((l, phase(1, 4, w) * theta(&s.z1, &s.tau, p)?))
        }},
        Law { id: "theta(z+1)", flippable: false, eval: |s, p, _| {
            let w = p.bits();
            Ok((theta(&s.z1.add_real(&one(w)), &s.tau, p)?, -theta(&s.z1, &s.tau, p)?))
        }},
        Law { id: "theta(-1/tau)", flippable: true, eval: |s, p, sgn| {
            let t = &s.tau;
            let l = theta(&(&s.z1 / t), &inv_tau(t), p)?;
            let r = (sqrt_mit(t) * quad_exp(&s.z1, t, sgn) * theta(&s.z1, t, p)?).mul_i();
            Ok((l, -r))
        }},
        Law { id: "eta(-1/tau)", flippable: false, eval: |s, p, _| {
            Ok((eta(&inv_tau(&s.tau), p)?, sqrt_mit(&s.tau) * eta(&s.tau, p)?))
        }},
        Law { id: "eta(tau+1)", flippable: false, eval: |s, p, _| {
            let w = p.bits();
            Ok((eta(&s.tau.add_real(&one(w)), p)?, phase(1, 12, w) * eta(&s.tau, p)?))
        }},
    ]
}

/// Matrices for the modular half of the Jacobi-form law.
const MATRICES: [[i64; 4]; 5] = [[0, -1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1], [2, 1, 1, 1], [1, -1, 2, -1]];
/// `(lambda, k)` pairs for the elliptic half.
const SHIFTS: [(i64, i64); 5] = [(1, 0), (1, 1), (2, 0), (-1, 1), (3, 2)];

fn report(law: &str, s: &Sample, l: &Cx, r: &Cx, note: String, prec: Prec) -> EvalReport {
    let e = Cx::rel_err(l, r);
    let d = prec.digits as usize;
    EvalReport {
        law: law.to_string(),
        sample: s.describe(),
        left: l.to_string_digits(d),
        right: r.to_string_digits(d),
        rel_err: e,
        tol: LAW_TOL,
        pass: e <= LAW_TOL,
        note,
    }
}

fn failed(law: &str, s: &Sample, err: super::NumError) -> EvalReport {
    EvalReport {
        law: law.to_string(),
        sample: s.describe(),
        left: String::new(),
        right: String::new(),
        rel_err: f64::INFINITY,
        tol: LAW_TOL,
        pass: false,
        note: format!("evaluation error: {err}"),
    }
}

/// Names the 24th root of unity closest to `x`, with its distance.
fn root_of_unity(x: &Cx) -> (i64, f64) {
    let (re, im) = x.to_f64();
    let k = (im.atan2(re) / (2.0 * std::f64::consts::PI) * 24.0).round() as i64;
    let k = k.rem_euclid(24);
    let w = x.prec();
    let zeta = phase(k, 12, w);
    (k, (x - &zeta).abs_f64())
}

/// Multiplier-unknown checks: each ratio must be a 24th root of unity and
/// equal to the ratio at the first sample.
fn multiplier_reports(
    law: String,
    samples: &[Sample],
    prec: Prec,
    ratio: impl Fn(&Sample) -> NResult<Cx>,
) -> Vec<EvalReport> {
    let mut out = Vec::new();
    let mut first: Option<Cx> = None;
    for s in samples {
        match ratio(s) {
            Ok(chi) => {
                let reference = first.get_or_insert_with(|| chi.clone()).clone();
                let (k, dist) = root_of_unity(&chi);
                let mut rep = report(&law, s, &chi, &reference, format!("multiplier = e^(2 pi i {k}/24), distance {dist:.2e}"), prec);
                if dist > LAW_TOL {
                    rep.pass = false;
                    rep.rel_err = rep.rel_err.max(dist);
                }
                out.push(rep);
            }
            Err(e) => out.push(failed(&law, s, e)),
        }
    }
    out
}

/// Checks every transformation law at every sample. Laws that fail at all
/// samples and carry a quadratic exponential are retried with its sign
/// flipped, and the outcome is recorded in the notes.
pub fn validate_transforms(samples: &[Sample], prec: Prec) -> Vec<EvalReport> {
    let mut out = Vec::new();
    for law in laws() {
        let mut reps: Vec<EvalReport> = samples
            .iter()
            .map(|s| match (law.eval)(s, prec, 1) {
                Ok((l, r)) => report(law.id, s, &l, &r, "as printed".into(), prec),
                Err(e) => failed(law.id, s, e),
            })
            .collect();
        let all_fail = !samples.is_empty() && reps.iter().all(|r| !r.pass);
        if law.flippable && all_fail {
            let flipped: Vec<EvalReport> = samples
                .iter()
                .map(|s| match (law.eval)(s, prec, -1) {
                    Ok((l, r)) => report(&format!("{} [sign flipped]", law.id), s, &l, &r, "quadratic exponential sign flipped".into(), prec),
                    Err(e) => failed(law.id, s, e),
                })
                .collect();
            let holds = flipped.iter().all(|r| r.pass);
            for r in reps.iter_mut() {
                r.note = if holds {
                    "printed sign fails at all samples; flipped sign holds".into()
                } else {
                    "printed sign fails at all samples; flipped sign also fails".into()
                };
            }
            reps.extend(flipped);
        } else if law.flippable {
            for r in reps.iter_mut() {
                r.note = "printed sign holds".into();
            }
        }
        out.extend(reps);
    }
    for m in MATRICES {
        let [a, b, c, d] = m;
        let law = format!("jacobi modular [{a} {b}; {c} {d}]");
        out.extend(multiplier_reports(law, samples, prec, |s| {
            let ct = s.tau.mul_int(c).add_real(&Real::from_int(d, prec.bits()));
            let at = s.tau.mul_int(a).add_real(&Real::from_int(b, prec.bits()));
            let l = theta(&(&s.z1 / &ct), &(at / &ct), prec)?;
            let e = (s.z1.sqr().mul_int(c) / &ct).epi();
            Ok(l / (ct.sqrt() * e * theta(&s.z1, &s.tau, prec)?))
        }));
    }
    for (lam, k) in SHIFTS {
        let law = format!("jacobi elliptic lambda={lam} k={k}");
        out.extend(multiplier_reports(law, samples, prec, |s| {
            let w = prec.bits();
            let z = (&s.z1 + s.tau.mul_int(lam)).add_real(&Real::from_int(k, w));
            let l = theta(&z, &s.tau, prec)?;
            let e = (s.tau.mul_int(lam * lam) + s.z1.mul_int(2 * lam)).mul_int(-1).epi();
            Ok(l / (e * theta(&s.z1, &s.tau, prec)?))
        }));
    }
    out
}
