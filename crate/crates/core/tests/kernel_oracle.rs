//! Cross-validation of the continued-fraction expansion kernel against the
//! independent lattice-path transfer-matrix oracle.

mod common;

use common::{dyck_series, motzkin_series, schroeder_series};
use cyclefrac::cfkit::FractionSpec;
use cyclefrac::polyring::{Polynomial, VarId};

#[test]
fn s_fraction_with_arithmetic_weights_matches_dyck_paths() {
    // alpha_n = n; the classic check — the oracle defines the expected values
    let spec = FractionSpec::<i128>::s_fraction(|n| i128::from(n));
    let expanded = spec.expand(6);
    let oracle = dyck_series(|h| i128::from(h), 6);
    assert_eq!(expanded.coeffs(), &oracle[..]);
    // sanity anchor: this family starts 1, 1, 3, 15 (odd double factorials)
    assert_eq!(&oracle[..4], &[1, 1, 3, 15]);
}

#[test]
fn j_fraction_matches_motzkin_paths() {
    let spec = FractionSpec::<i128>::j_fraction(|n| i128::from(n) + 1, |n| 2 * i128::from(n) - 1);
    assert_eq!(
        spec.expand(7).coeffs(),
        &motzkin_series(|h| i128::from(h) + 1, |h| 2 * i128::from(h) - 1, 7)[..]
    );
}

#[test]
fn t_fraction_matches_schroeder_paths() {
    let spec = FractionSpec::<i128>::t_fraction(|n| i128::from(n), |n| i128::from(n % 3) - 1);
    assert_eq!(
        spec.expand(6).coeffs(),
        &schroeder_series(|h| i128::from(h), |h| i128::from(h % 3) - 1, 6)[..]
    );
}

#[test]
fn symbolic_expansion_matches_symbolic_paths() {
    // polynomial generators: gamma_n = g[n], beta_n = b[n]
    let g = |n: u32| Polynomial::var(VarId::indexed("g", n));
    let b = |n: u32| Polynomial::var(VarId::indexed("b", n));
    let spec = FractionSpec::<Polynomial>::j_fraction(g, b);
    assert_eq!(spec.expand(5).coeffs(), &motzkin_series(g, b, 5)[..]);
}

#[test]
fn trivial_fractions_are_constant_one() {
    let j = FractionSpec::<i128>::j_fraction(|_| 0, |_| 0);
    let s = FractionSpec::<i128>::s_fraction(|_| 0);
    let t = FractionSpec::<i128>::t_fraction(|_| 0, |_| 0);
    for spec in [j, s, t] {
        let series = spec.expand(5);
        assert_eq!(series.coeff(0), &1);
        for k in 1..=5 {
            assert_eq!(series.coeff(k), &0);
        }
    }
}
