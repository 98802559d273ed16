//! Browser bindings: exact expansions, the minor-arc table and the ratio
//! check, each returning a string the page renders directly.

use mockasym::exactq::{expand_R1, expand_R3, expand_nu_neg, expand_phi10};
use mockasym::minorarcs::{f_table_csv, verify_f_lemma};
use mockasym::predict::{ratio_table, Which};
use wasm_bindgen::prelude::*;

/// Largest order the page will expand; keeps the tab responsive.
const MAX_ORDER: u32 = 3000;

/// CSV `n,c` of `which` in {R1, R3, nu, phi} through `q^n`.
#[wasm_bindgen]
pub fn expand(which: &str, k: u32, n: u32) -> Result<String, JsError> {
    if n > MAX_ORDER {
        return Err(JsError::new(&format!("order {n} is above {MAX_ORDER}")));
    }
    if matches!(which, "R1" | "R3") && !(3..=8).contains(&k) {
        return Err(JsError::new("k must be between 3 and 8"));
    }
    let n = n as i64;
    let s = match which {
        "R1" => expand_R1(k as usize, n),
        "R3" => expand_R3(k as usize, n),
        "nu" => expand_nu_neg(n),
        "phi" => expand_phi10(n),
        _ => return Err(JsError::new(&format!("unknown series {which:?}"))),
    };
    Ok(s.to_csv())
}

/// Summary line plus the full `F` table as CSV.
#[wasm_bindgen]
pub fn f_lemma() -> String {
    let r = verify_f_lemma();
    format!("max F = {} at {}, all below 2: {}\n{}", r.global_max, r.argmax, r.all_below_2, f_table_csv())
}

/// `n,exact,predicted,ratio` rows for `a` or `b` at the given comma-separated `ns`.
#[wasm_bindgen]
pub fn ratios(which: &str, ns: &str) -> Result<String, JsError> {
    let w: Which = which.parse().map_err(|e: String| JsError::new(&e))?;
    let ns: Vec<u64> = ns
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|e| JsError::new(&e.to_string()))?;
    if ns.iter().any(|&n| n == 0 || n > MAX_ORDER as u64) {
        return Err(JsError::new(&format!("n must be in 1..={MAX_ORDER}")));
    }
    let mut out = String::from("n,exact,predicted,ratio\n");
    for r in ratio_table(w, &ns) {
        out += &format!("{},{},{:.6e},{:.5}\n", r.n, r.exact, r.predicted, r.ratio);
    }
    Ok(out)
}
