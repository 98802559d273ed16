//! Adaptive Gauss-Legendre quadrature at arbitrary precision.

use crate::mp::{Cx, Real};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

type Rule = Rc<(Vec<Real>, Vec<Real>)>;

thread_local! {
    static RULES: RefCell<HashMap<(usize, u32), Rule>> = RefCell::new(HashMap::new());
}

/// Nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize, bits: u32) -> Rule {
    if let Some(r) = RULES.with(|c| c.borrow().get(&(n, bits)).cloned()) {
        return r;
    }
    let w = bits + 32;
    let one = Real::one(w);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Real::from_f64(guess, w);
        let mut dp = Real::zero(w);
        for it in 0..200 {
            let (p, d) = legendre(n, &x);
            let dx = p.div(&d);
            x = &x - &dx;
            dp = d;
            if dx.is_zero() || dx.log2_abs() < -(w as f64) + 4.0 {
                if it > 0 {
                    let (_, d) = legendre(n, &x);
                    dp = d;
                    break;
                }
            }
        }
        let wt = one.mul_2k(1).div(&(&(&one - &x.sqr()) * &dp.sqr()));
        nodes.push(x.with_prec(bits));
        weights.push(wt.with_prec(bits));
    }
    let r = Rc::new((nodes, weights));
    RULES.with(|c| c.borrow_mut().insert((n, bits), r.clone()));
    r
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Real) -> (Real, Real) {
    let w = x.prec();
    let mut p0 = Real::one(w);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as i64;
        let p2 = (&x.mul(&p1).mul_int(2 * k - 1) - &p0.mul_int(k - 1)).div_int(k);
        p0 = p1;
        p1 = p2;
    }
    let one = Real::one(w);
    let d = (&x.mul(&p1) - &p0).mul_int(n as i64).div(&(&x.sqr() - &one));
    (p1, d)
}

fn panel<F: FnMut(&Real) -> Cx>(f: &mut F, a: &Real, b: &Real, rule: &Rule) -> Cx {
    let w = a.prec();
    let half = (b - a).mul_2k(-1);
    let mid = (a + b).mul_2k(-1);
    let mut s = Cx::zero(w);
    for (x, wt) in rule.0.iter().zip(rule.1.iter()) {
        let t = &mid + &half.mul(x);
        s = &s + &f(&t).scale(wt);
    }
    s.scale(&half)
}

/// Integrates `f` over `[a, b]`, starting from panels no wider than `h0`
/// and bisecting until successive estimates agree to `2^tol_log2` relative
/// to `scale`. Returns `None` once more than `budget` panels are needed.
pub fn integrate<F: FnMut(&Real) -> Cx>(
    mut f: F,
    a: &Real,
    b: &Real,
    h0: f64,
    tol_log2: f64,
    budget: usize,
) -> Option<Cx> {
    let w = a.prec();
    let n = ((w as f64) / 6.0).ceil().max(12.0) as usize;
    let rule = gauss_legendre(n, w);
    let len = (b - a).to_f64();
    let npan = ((len / h0).ceil().max(1.0)) as i64;
    let mut stack: Vec<(Real, Real, Cx)> = Vec::new();
    for k in (0..npan).rev() {
        let lo = a + &(b - a).mul_int(k).div_int(npan);
        let hi = a + &(b - a).mul_int(k + 1).div_int(npan);
        let est = panel(&mut f, &lo, &hi, &rule);
        stack.push((lo, hi, est));
    }
    let mut total = Cx::zero(w);
    let mut used = npan as usize;
    while let Some((lo, hi, est)) = stack.pop() {
        let mid = (&lo + &hi).mul_2k(-1);
        let l = panel(&mut f, &lo, &mid, &rule);
        let r = panel(&mut f, &mid, &hi, &rule);
        let refined = &l + &r;
        let diff = (&refined - &est).log2_abs();
        if diff < tol_log2 || diff == f64::NEG_INFINITY {
            total = &total + &refined;
            continue;
        }
        used += 1;
        if used > budget {
            return None;
        }
        stack.push((mid.clone(), hi, r));
        stack.push((lo, mid, l));
    }
    Some(total)
}
