//! Truncated formal power series and continued-fraction expansion.
//!
//! Three continued-fraction shapes are supported, always in the canonical
//! forms with minus signs:
//!
//! ```text
//! S:  1 / (1 - α₁ t / (1 - α₂ t / (1 - ...)))
//! T:  1 / (1 - δ₁ t - α₁ t / (1 - δ₂ t - α₂ t / (1 - ...)))
//! J:  1 / (1 - γ₀ t - β₁ t² / (1 - γ₁ t - β₂ t² / (1 - ...)))
//! ```
//!
//! Coefficients come from level-indexed generator functions, so one
//! [`FractionSpec`] can be expanded at any order. Expansion is bottom-up:
//! the innermost tail is the constant series 1 and each level applies its
//! Möbius step via one truncated reciprocal. Series keep exactly `order + 1`
//! coefficients and arithmetic never consults or produces anything beyond
//! `t^order`, so expanding with a deeper tail cannot change the reported
//! coefficients (each S/T level feeds through at least one power of `t`,
//! each J level through `t²`).

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::polyring::{Mod61, Polynomial};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CfkitError {
    #[error("series reciprocal requires constant term 1")]
    ConstantTermNotOne,
    #[error("series orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("even contraction requires a T-type fraction")]
    NotThronType,
    #[error("even contraction requires delta = 0 at level {0}")]
    NonzeroDelta(u32),
}

/// Coefficient ring for truncated series. Implemented for [`Polynomial`]
/// (symbolic work), [`Mod61`] (randomized modular verification), and `i128`
/// (plain integer series).
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
}

impl Coeff for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        Polynomial::add(self, rhs)
    }
    fn neg(&self) -> Self {
        self.negate()
    }
    fn mul(&self, rhs: &Self) -> Self {
        Polynomial::mul(self, rhs)
    }
}

impl Coeff for Mod61 {
    fn zero() -> Self {
        Mod61::new(0)
    }
    fn one() -> Self {
        Mod61::new(1)
    }
    fn is_zero(&self) -> bool {
        self.value() == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        Mod61::add(*self, *rhs)
    }
    fn neg(&self) -> Self {
        Mod61::neg(*self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Mod61::mul(*self, *rhs)
    }
}

impl Coeff for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

// ---------------------------------------------------------------------------
// Truncated series
// ---------------------------------------------------------------------------

/// A formal power series in `t` truncated at a fixed order: exactly
/// `order + 1` stored coefficients `c_0 .. c_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<R: Coeff = Polynomial> {
    coeffs: Vec<R>,
}

impl<R: Coeff> TruncatedSeries<R> {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![R::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = TruncatedSeries::zero(order);
        s.coeffs[0] = R::one();
        s
    }

    /// Builds a series from its coefficient list (`order = len - 1`).
    /// Panics on an empty list.
    pub fn from_coeffs(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^k`. Panics when `k > order`.
    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    fn check_order(&self, rhs: &Self) -> Result<(), CfkitError> {
        if self.order() == rhs.order() {
            Ok(())
        } else {
            Err(CfkitError::OrderMismatch(self.order(), rhs.order()))
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_order(rhs).expect("series orders must agree");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        TruncatedSeries { coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.check_order(rhs).expect("series orders must agree");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect();
        TruncatedSeries { coeffs }
    }

    /// Truncated product: coefficients beyond the order are never formed.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_order(rhs).expect("series orders must agree");
        let n = self.order();
        let mut out = TruncatedSeries::<R>::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n + 1 - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&a.mul(b));
            }
        }
        out
    }

    /// Reciprocal of a series with constant term exactly 1.
    ///
    /// With `a_0 = 1` the recurrence `c_0 = 1`,
    /// `c_n = -(a_1 c_{n-1} + ... + a_n c_0)` involves no division at all.
    pub fn reciprocal(&self) -> Result<Self, CfkitError> {
        if self.coeffs[0] != R::one() {
            return Err(CfkitError::ConstantTermNotOne);
        }
        let n = self.order();
        let mut out = TruncatedSeries::zero(n);
        out.coeffs[0] = R::one();
        for k in 1..=n {
            let mut acc = R::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc = acc.add(&self.coeffs[j].mul(&out.coeffs[k - j]));
            }
            out.coeffs[k] = acc.neg();
        }
        Ok(out)
    }

    /// Drop down to a smaller order. Panics when `m > order`.
    pub fn truncate(&self, m: usize) -> Self {
        assert!(
            m <= self.order(),
            "cannot truncate order {} to {}",
            self.order(),
            m
        );
        TruncatedSeries {
            coeffs: self.coeffs[..=m].to_vec(),
        }
    }

    /// Map the coefficients into another ring.
    pub fn map<S: Coeff>(&self, f: impl Fn(&R) -> S) -> TruncatedSeries<S> {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl fmt::Display for TruncatedSeries<Polynomial> {
    /// Text form `c0; c1; c2; ...` using canonical polynomial text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

// ---------------------------------------------------------------------------
// Fraction specifications and expansion
// ---------------------------------------------------------------------------

/// Level-indexed coefficient generator.
pub type CoeffFn<R> = Arc<dyn Fn(u32) -> R + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractionKind {
    S,
    T,
    J,
}

/// A continued fraction given by its kind and coefficient generators.
///
/// Levels are numbered as in the canonical forms: `α` and `δ` from level 1,
/// `γ` from level 0, `β` from level 1. Generators must be pure functions of
/// the level; an expansion at order `N` consults levels `1..=N+1` (S, T) or
/// `γ` on `0..=N` and `β` on `1..=N+1` (J).
#[derive(Clone)]
pub enum FractionSpec<R: Coeff = Polynomial> {
    S {
        alpha: CoeffFn<R>,
    },
    T {
        alpha: CoeffFn<R>,
        delta: CoeffFn<R>,
    },
    J {
        gamma: CoeffFn<R>,
        beta: CoeffFn<R>,
    },
}

impl<R: Coeff + 'static> FractionSpec<R> {
    pub fn s_fraction(alpha: impl Fn(u32) -> R + Send + Sync + 'static) -> Self {
        FractionSpec::S {
            alpha: Arc::new(alpha),
        }
    }

    pub fn t_fraction(
        alpha: impl Fn(u32) -> R + Send + Sync + 'static,
        delta: impl Fn(u32) -> R + Send + Sync + 'static,
    ) -> Self {
        FractionSpec::T {
            alpha: Arc::new(alpha),
            delta: Arc::new(delta),
        }
    }

    pub fn j_fraction(
        gamma: impl Fn(u32) -> R + Send + Sync + 'static,
        beta: impl Fn(u32) -> R + Send + Sync + 'static,
    ) -> Self {
        FractionSpec::J {
            gamma: Arc::new(gamma),
            beta: Arc::new(beta),
        }
    }

    pub fn kind(&self) -> FractionKind {
        match self {
            FractionSpec::S { .. } => FractionKind::S,
            FractionSpec::T { .. } => FractionKind::T,
            FractionSpec::J { .. } => FractionKind::J,
        }
    }

    /// Expand the fraction as a truncated series with exact coefficients
    /// `c_0 .. c_order`.
    pub fn expand(&self, order: usize) -> TruncatedSeries<R> {
        let depth = order as u32 + 1;
        let mut tail = TruncatedSeries::one(order);
        match self {
            FractionSpec::S { alpha } => {
                for k in (1..=depth).rev() {
                    tail = level_step(order, &tail, None, Some((&alpha(k), 1)));
                }
            }
            FractionSpec::T { alpha, delta } => {
                for k in (1..=depth).rev() {
                    tail = level_step(order, &tail, Some(&delta(k)), Some((&alpha(k), 1)));
                }
            }
            FractionSpec::J { gamma, beta } => {
                for k in (0..depth).rev() {
                    tail = level_step(order, &tail, Some(&gamma(k)), Some((&beta(k + 1), 2)));
                }
            }
        }
        tail
    }

    /// Even contraction of a T-fraction with `δ_n = 0` for `n ≥ 2` into the
    /// equivalent J-fraction:
    ///
    /// ```text
    /// γ₀ = δ₁ + α₁,   γₙ = α₂ₙ + α₂ₙ₊₁ (n ≥ 1),   βₙ = α₂ₙ₋₁ α₂ₙ
    /// ```
    ///
    /// The hypothesis is checked on levels `2..=check_levels` (generators are
    /// functions, so it cannot be checked everywhere); `check_levels` should
    /// be at least one more than the largest expansion order intended.
    pub fn contract_even(&self, check_levels: u32) -> Result<FractionSpec<R>, CfkitError> {
        let (alpha, delta) = match self {
            FractionSpec::T { alpha, delta } => (alpha.clone(), delta.clone()),
            _ => return Err(CfkitError::NotThronType),
        };
        for k in 2..=check_levels {
            if !delta(k).is_zero() {
                return Err(CfkitError::NonzeroDelta(k));
            }
        }
        let gamma = {
            let alpha = alpha.clone();
            let delta = delta.clone();
            move |n: u32| {
                if n == 0 {
                    delta(1).add(&alpha(1))
                } else {
                    alpha(2 * n).add(&alpha(2 * n + 1))
                }
            }
        };
        let beta = move |n: u32| alpha(2 * n - 1).mul(&alpha(2 * n));
        Ok(FractionSpec::j_fraction(gamma, beta))
    }
}

/// One bottom-up level: returns `1 / (1 - c t - w t^shift * tail)`, where the
/// linear part `c` is optional and `(w, shift)` the weighted tail term.
fn level_step<R: Coeff>(
    order: usize,
    tail: &TruncatedSeries<R>,
    linear: Option<&R>,
    weighted_tail: Option<(&R, usize)>,
) -> TruncatedSeries<R> {
    let mut denom = TruncatedSeries::<R>::one(order);
    if let Some(c) = linear {
        if order >= 1 && !c.is_zero() {
            denom.coeffs[1] = denom.coeffs[1].sub(c);
        }
    }
    if let Some((w, shift)) = weighted_tail {
        if !w.is_zero() && shift <= order {
            for j in 0..=order - shift {
                let contrib = w.mul(&tail.coeffs[j]);
                denom.coeffs[j + shift] = denom.coeffs[j + shift].sub(&contrib);
            }
        }
    }
    denom
        .reciprocal()
        .expect("level denominators always have constant term 1")
}
