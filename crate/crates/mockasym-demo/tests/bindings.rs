use mockasym_demo::*;

#[test]
fn expand_returns_csv() {
    let s = expand("R3", 3, 49).unwrap();
    assert_eq!(s.lines().count(), 51);
    assert!(s.lines().any(|l| l == "49,-16"));
    assert!(expand("nu", 0, 3).unwrap().starts_with("n,c\n0,1\n1,1\n2,2\n"));
}

#[test]
fn ratios_and_f_table() {
    let r = ratios("b", "100").unwrap();
    assert_eq!(r.lines().nth(1).unwrap().rsplit(',').next(), Some("0.98067"));
    let f = f_lemma();
    assert!(f.starts_with("max F = 13/9"));
    assert_eq!(f.lines().count(), 2 + 4 * 63);
}
