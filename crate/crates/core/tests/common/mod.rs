//! Shared test oracles, independent of the implementation paths they check.
//!
//! The lattice-path counters give a second route to every continued-fraction
//! expansion: J-fractions count weighted Motzkin paths, S-fractions weighted
//! Dyck paths, and T-fractions weighted Schroeder paths (up steps free, a
//! down step from height h weighted by the level-h coefficient, level steps
//! weighted by the corresponding gamma or delta). The quadruplet scanners
//! recount crossings and nestings directly from their four-index patterns.

// Not every test target uses every oracle.
#![allow(dead_code)]

use cyclefrac::cfkit::Coeff;
use cyclefrac::permstat::Permutation;

/// Coefficients `c_0..c_order` of a J-fraction via weighted Motzkin paths:
/// level steps at height h carry `gamma(h)`, down steps from height h carry
/// `beta(h)`, up steps carry 1.
pub fn motzkin_series<R: Coeff>(
    gamma: impl Fn(u32) -> R,
    beta: impl Fn(u32) -> R,
    order: usize,
) -> Vec<R> {
    let max_h = order + 1;
    let mut dp = vec![R::zero(); max_h + 2];
    dp[0] = R::one();
    let mut out = vec![dp[0].clone()];
    for _ in 1..=order {
        let mut next = vec![R::zero(); max_h + 2];
        for h in 0..=max_h {
            if dp[h].is_zero() {
                continue;
            }
            next[h + 1] = next[h + 1].add(&dp[h]);
            next[h] = next[h].add(&dp[h].mul(&gamma(h as u32)));
            if h > 0 {
                next[h - 1] = next[h - 1].add(&dp[h].mul(&beta(h as u32)));
            }
        }
        dp = next;
        out.push(dp[0].clone());
    }
    out
}

/// Coefficients `c_0..c_order` of an S-fraction via weighted Dyck paths of
/// length `2n`: down steps from height h carry `alpha(h)`.
pub fn dyck_series<R: Coeff>(alpha: impl Fn(u32) -> R, order: usize) -> Vec<R> {
    let max_h = 2 * order + 2;
    let mut dp = vec![R::zero(); max_h + 2];
    dp[0] = R::one();
    let mut out = vec![dp[0].clone()];
    for step in 1..=2 * order {
        let mut next = vec![R::zero(); max_h + 2];
        for h in 0..=max_h {
            if dp[h].is_zero() {
                continue;
            }
            next[h + 1] = next[h + 1].add(&dp[h]);
            if h > 0 {
                next[h - 1] = next[h - 1].add(&dp[h].mul(&alpha(h as u32)));
            }
        }
        dp = next;
        if step % 2 == 0 {
            out.push(dp[0].clone());
        }
    }
    out
}

/// Coefficients `c_0..c_order` of a T-fraction via weighted Schroeder paths
/// of length `2n`: down steps from height h carry `alpha(h)`, double-width
/// level steps at height h carry `delta(h + 1)`.
pub fn schroeder_series<R: Coeff>(
    alpha: impl Fn(u32) -> R,
    delta: impl Fn(u32) -> R,
    order: usize,
) -> Vec<R> {
    let units = 2 * order;
    let max_h = units + 2;
    // dp[t][h]: weighted prefixes of t half-units ending at height h
    let mut dp = vec![vec![R::zero(); max_h + 2]; units + 1];
    dp[0][0] = R::one();
    for t in 0..units {
        for h in 0..=max_h {
            if dp[t][h].is_zero() {
                continue;
            }
            let cur = dp[t][h].clone();
            dp[t + 1][h + 1] = dp[t + 1][h + 1].add(&cur);
            if h > 0 {
                dp[t + 1][h - 1] = dp[t + 1][h - 1].add(&cur.mul(&alpha(h as u32)));
            }
            if t + 2 <= units {
                dp[t + 2][h] = dp[t + 2][h].add(&cur.mul(&delta(h as u32 + 1)));
            }
        }
    }
    (0..=order).map(|n| dp[2 * n][0].clone()).collect()
}

/// Index-refined counts recomputed by scanning every quadruplet
/// `i < j < k < l` (and every pair for pseudo-nestings) against the raw
/// four-index patterns.
pub fn quadruplet_index_refined(p: &Permutation, target: usize) -> (u64, u64, u64, u64, u64) {
    let n = p.n();
    let s = |i: usize| p.apply(i);
    let mut ucross = 0;
    let mut unest = 0;
    let mut lcross = 0;
    let mut lnest = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for l in k + 1..=n {
                    if j == target && k == s(i) && l == s(j) {
                        ucross += 1;
                    }
                    if j == target && k == s(j) && l == s(i) {
                        unest += 1;
                    }
                    if k == target && i == s(k) && j == s(l) {
                        lcross += 1;
                    }
                    if k == target && i == s(l) && j == s(k) {
                        lnest += 1;
                    }
                }
            }
        }
    }
    let mut psnest = 0;
    if s(target) == target {
        for i in 1..target {
            if s(i) > target {
                psnest += 1;
            }
        }
    }
    (ucross, unest, lcross, lnest, psnest)
}
