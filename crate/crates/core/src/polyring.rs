//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients.
//!
//! Variables are identified by a short family name plus zero, one, or two
//! non-negative subscripts (`x1`, `e[2]`, `a[0,1]`), so the doubly-indexed
//! coefficient families used by the continued-fraction identities are
//! first-class. Polynomials keep a canonical form at all times: no zero
//! exponents inside monomials, no zero coefficients in the term map, and
//! structural equality is polynomial equality.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Default modulus for randomized verification: the 61-bit Mersenne prime.
pub const DEFAULT_PRIME: u64 = (1u64 << 61) - 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    /// `substitute` met a variable with no image in the map.
    #[error("no substitution provided for variable {0}")]
    UnmappedVariable(VarId),
    /// `eval_mod` met a variable with no assigned residue.
    #[error("no residue assigned to variable {0}")]
    MissingAssignment(VarId),
}

// ---------------------------------------------------------------------------
// Variables
// ---------------------------------------------------------------------------

/// Subscripts attached to a variable family name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subscripts {
    None,
    One(u32),
    Two(u32, u32),
}

/// A variable: family name plus subscripts, e.g. `x1`, `e[2]`, `a[0,1]`.
///
/// The derived ordering (family name, then subscripts) is the canonical
/// variable order used for monomial normal forms and text output.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    family: Cow<'static, str>,
    subs: Subscripts,
}

impl VarId {
    /// A plain variable with no subscripts.
    pub fn plain(family: impl Into<Cow<'static, str>>) -> Self {
        VarId {
            family: family.into(),
            subs: Subscripts::None,
        }
    }

    /// A singly-indexed variable, e.g. `e[3]`.
    pub fn indexed(family: impl Into<Cow<'static, str>>, i: u32) -> Self {
        VarId {
            family: family.into(),
            subs: Subscripts::One(i),
        }
    }

    /// A doubly-indexed variable, e.g. `a[0,1]`.
    pub fn indexed2(family: impl Into<Cow<'static, str>>, i: u32, j: u32) -> Self {
        VarId {
            family: family.into(),
            subs: Subscripts::Two(i, j),
        }
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn subscripts(&self) -> Subscripts {
        self.subs
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.subs {
            Subscripts::None => write!(f, "{}", self.family),
            Subscripts::One(i) => write!(f, "{}[{}]", self.family, i),
            Subscripts::Two(i, j) => write!(f, "{}[{},{}]", self.family, i, j),
        }
    }
}

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

/// A power product of variables. Zero exponents are never stored; the empty
/// map is the unit monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(BTreeMap<VarId, u32>);

impl Monomial {
    /// The unit monomial (empty power product).
    pub fn unit() -> Self {
        Monomial(BTreeMap::new())
    }

    /// The monomial consisting of a single variable to the first power.
    pub fn var(v: VarId) -> Self {
        Monomial::unit().with(v, 1)
    }

    /// Multiply `v^exp` into the monomial, dropping zero exponents.
    pub fn with(mut self, v: VarId, exp: u32) -> Self {
        self.push(v, exp);
        self
    }

    /// In-place form of [`Monomial::with`].
    pub fn push(&mut self, v: VarId, exp: u32) {
        if exp == 0 {
            return;
        }
        *self.0.entry(v).or_insert(0) += exp;
    }

    /// Product of two monomials (exponents add).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (v, &e) in &other.0 {
            out.push(v.clone(), e);
        }
        out
    }

    pub fn total_degree(&self) -> u64 {
        self.0.values().map(|&e| u64::from(e)).sum()
    }

    /// Exponent of `v`, zero when absent.
    pub fn exponent(&self, v: &VarId) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, u32)> {
        self.0.iter().map(|(v, &e)| (v, e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// A sparse multivariate polynomial over `BigInt`.
///
/// Invariant: the term map never holds a zero coefficient, so the zero
/// polynomial is exactly the empty map and `==` is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial(BTreeMap<Monomial, BigInt>);

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial(BTreeMap::new())
    }

    pub fn one() -> Self {
        Polynomial::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = Polynomial::zero();
        p.add_term(Monomial::unit(), c);
        p
    }

    pub fn var(v: VarId) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::var(v), BigInt::one());
        p
    }

    /// Monomial with coefficient 1.
    pub fn from_monomial(m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1
            && self
                .0
                .get(&Monomial::unit())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// Number of (nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.0.len()
    }

    /// Add `coeff * m` into the polynomial, keeping canonical form.
    pub fn add_term(&mut self, m: Monomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Stored coefficient of `m`, or zero.
    pub fn coefficient_of(&self, m: &Monomial) -> BigInt {
        self.0.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.0.iter()
    }

    /// All variables occurring in the polynomial.
    pub fn variables(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        for m in self.0.keys() {
            for (v, _) in m.iter() {
                out.insert(v.clone());
            }
        }
        out
    }

    pub fn negate(&self) -> Polynomial {
        Polynomial(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.negate())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Ring-homomorphic substitution: every variable must have an image.
    pub fn substitute(&self, map: &BTreeMap<VarId, Polynomial>) -> Result<Polynomial, PolyError> {
        self.substitute_with(|v| map.get(v).cloned())
    }

    /// Substitution with images supplied by a closure; `None` is an error.
    pub fn substitute_with(
        &self,
        image: impl Fn(&VarId) -> Option<Polynomial>,
    ) -> Result<Polynomial, PolyError> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.0 {
            let mut term = Polynomial::constant(c.clone());
            for (v, e) in m.iter() {
                let img = image(v).ok_or_else(|| PolyError::UnmappedVariable(v.clone()))?;
                term = term.mul(&img.pow(e));
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Partial substitution: variables absent from `map` stay symbolic.
    pub fn specialize(&self, map: &BTreeMap<VarId, Polynomial>) -> Polynomial {
        self.substitute_with(|v| {
            Some(
                map.get(v)
                    .cloned()
                    .unwrap_or_else(|| Polynomial::var(v.clone())),
            )
        })
        .expect("specialize is total")
    }

    /// Value of the polynomial mod `prime` under a residue assignment.
    pub fn eval_mod(
        &self,
        assignment: &BTreeMap<VarId, u64>,
        prime: u64,
    ) -> Result<u64, PolyError> {
        self.eval_mod_with(|v| assignment.get(v).copied(), prime)
    }

    /// Modular evaluation with residues supplied by a closure.
    pub fn eval_mod_with(
        &self,
        assign: impl Fn(&VarId) -> Option<u64>,
        prime: u64,
    ) -> Result<u64, PolyError> {
        let mut acc: u64 = 0;
        for (m, c) in &self.0 {
            let mut term = bigint_mod(c, prime);
            for (v, e) in m.iter() {
                let val = assign(v).ok_or_else(|| PolyError::MissingAssignment(v.clone()))?;
                term = mul_mod(term, pow_mod(val % prime, u64::from(e), prime), prime);
            }
            acc = add_mod(acc, term, prime);
        }
        Ok(acc)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Self) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Self) -> Polynomial {
        Polynomial::sub(self, rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Self) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.negate()
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text form: terms sorted by total degree, then by the
    /// lexicographic monomial order, e.g. `3*a[0,1]*b[1,0] - 2*x1^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &BigInt)> = self.0.iter().collect();
        terms.sort_by(|a, b| {
            a.0.total_degree()
                .cmp(&b.0.total_degree())
                .then_with(|| a.0.cmp(b.0))
        });
        for (idx, (m, c)) in terms.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_unit() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// q-brackets
// ---------------------------------------------------------------------------

/// The two-parameter bracket `[n]_{p,q} = sum_{i=0}^{n-1} p^i q^{n-1-i}`.
///
/// `[0] = 0` and `[1] = 1` for any `p`, `q`.
pub fn qbracket(n: u32, p: &Polynomial, q: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero();
    for i in 0..n {
        out = out.add(&p.pow(i).mul(&q.pow(n - 1 - i)));
    }
    out
}

// ---------------------------------------------------------------------------
// Modular scalar arithmetic
// ---------------------------------------------------------------------------

pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) + u128::from(b)) % u128::from(m)) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Least non-negative residue of a `BigInt`.
pub fn bigint_mod(c: &BigInt, m: u64) -> u64 {
    let m_big = BigInt::from(m);
    let mut r = c % &m_big;
    if r.is_negative() {
        r += &m_big;
    }
    r.to_u64().expect("residue fits in u64")
}

/// Residue arithmetic modulo [`DEFAULT_PRIME`], used as a series coefficient
/// ring when verifying identities by random specialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mod61(u64);

impl Mod61 {
    pub fn new(value: u64) -> Self {
        Mod61(value % DEFAULT_PRIME)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn add(self, rhs: Self) -> Self {
        Mod61(add_mod(self.0, rhs.0, DEFAULT_PRIME))
    }

    pub fn mul(self, rhs: Self) -> Self {
        Mod61(mul_mod(self.0, rhs.0, DEFAULT_PRIME))
    }

    pub fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Mod61(DEFAULT_PRIME - self.0)
        }
    }
}
