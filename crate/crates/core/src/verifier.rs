//! The identity registry and its verification engine.
//!
//! Each series identity pairs an enumeration side (a weighted generating
//! series over a family, at a fixed `lambda`) with a continued-fraction side
//! (a [`FractionSpec`] whose generators implement the identity's coefficient
//! formulas verbatim). Identities are verified either symbolically — exact
//! polynomial equality of coefficients order by order — or modularly, by
//! evaluating both sides at random variable assignments over the 61-bit
//! prime field (three independent assignments by default). Predicate
//! identities run a per-permutation check over a whole family.
//!
//! Generators always feed the canonical fraction forms with minus signs, so
//! the `lambda = -1` cases store negative coefficient values rather than
//! special-casing any display convention.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::cfkit::{FractionSpec, TruncatedSeries};
use crate::families::{self, Caps, FamiliesError, Family, FamilyKind, Substitution, WeightScheme};
use crate::permstat::Permutation;
use crate::polyring::{qbracket, Mod61, Polynomial, VarId, DEFAULT_PRIME};

/// Random assignments per modular check.
pub const DEFAULT_TRIALS: usize = 3;

#[derive(Debug, Error)]
pub enum VerifierError {
    #[error("unknown identity \"{0}\"; known identities: {1}")]
    UnknownIdentity(String, String),
    #[error("identity {id} does not support {mode} mode")]
    ModeMismatch { id: String, mode: VerifyMode },
    #[error(transparent)]
    Families(#[from] FamiliesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Symbolic,
    Modular,
    Predicate,
}

impl std::fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerifyMode::Symbolic => "symbolic",
            VerifyMode::Modular => "modular",
            VerifyMode::Predicate => "predicate",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for VerifyMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "symbolic" => Ok(VerifyMode::Symbolic),
            "modular" => Ok(VerifyMode::Modular),
            "predicate" => Ok(VerifyMode::Predicate),
            other => Err(format!(
                "unknown mode \"{other}\" (expected symbolic, modular, or predicate)"
            )),
        }
    }
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// One registered identity.
pub struct IdentityCase {
    pub id: &'static str,
    pub description: &'static str,
    pub payload: Payload,
}

pub enum Payload {
    /// An enumeration series equals a continued-fraction expansion.
    Series {
        family: FamilyKind,
        scheme: &'static str,
        lambda: i64,
        fraction: fn() -> FractionSpec<Polynomial>,
        default_symbolic: usize,
        default_modular: usize,
    },
    /// A per-permutation check over every family member up to a size.
    Predicate {
        family: FamilyKind,
        check: fn(&Permutation) -> bool,
        default_size: usize,
    },
}

impl IdentityCase {
    pub fn default_mode(&self) -> VerifyMode {
        match self.payload {
            Payload::Series { .. } => VerifyMode::Symbolic,
            Payload::Predicate { .. } => VerifyMode::Predicate,
        }
    }

    /// Default order (series) or maximum family size (predicates) for a mode.
    pub fn default_order(&self, mode: VerifyMode) -> usize {
        match (&self.payload, mode) {
            (
                Payload::Series {
                    default_symbolic, ..
                },
                VerifyMode::Symbolic,
            ) => *default_symbolic,
            (
                Payload::Series {
                    default_modular, ..
                },
                VerifyMode::Modular,
            ) => *default_modular,
            (Payload::Predicate { default_size, .. }, _) => *default_size,
            (
                Payload::Series {
                    default_symbolic, ..
                },
                _,
            ) => *default_symbolic,
        }
    }
}

static REGISTRY: [IdentityCase; 15] = [
    IdentityCase {
        id: "PERM-J-MASTER-L1",
        description: "master J-fraction for permutations, lambda = 1",
        payload: Payload::Series {
            family: FamilyKind::Perm,
            scheme: "master-perm",
            lambda: 1,
            fraction: perm_j_master_l1,
            default_symbolic: 5,
            default_modular: 7,
        },
    },
    IdentityCase {
        id: "PERM-J-MASTER-LM1",
        description: "master J-fraction for permutations, lambda = -1",
        payload: Payload::Series {
            family: FamilyKind::Perm,
            scheme: "master-perm",
            lambda: -1,
            fraction: perm_j_master_lm1,
            default_symbolic: 5,
            default_modular: 7,
        },
    },
    IdentityCase {
        id: "PERM-J-PQ-LM1",
        description: "p,q J-fraction for permutations, lambda = -1",
        payload: Payload::Series {
            family: FamilyKind::Perm,
            scheme: "big-perm-pq",
            lambda: -1,
            fraction: perm_j_pq_lm1,
            default_symbolic: 5,
            default_modular: 7,
        },
    },
    IdentityCase {
        id: "PERM-J-SIMPLE-LM1",
        description: "simple J-fraction for permutations, lambda = -1",
        payload: Payload::Series {
            family: FamilyKind::Perm,
            scheme: "simple-perm",
            lambda: -1,
            fraction: perm_j_simple_lm1,
            default_symbolic: 7,
            default_modular: 8,
        },
    },
    IdentityCase {
        id: "CA-S-MASTER-LM1",
        description: "master S-fraction for cycle-alternating permutations, lambda = -1",
        payload: Payload::Series {
            family: FamilyKind::CycleAlt,
            scheme: "master-cyclealt",
            lambda: -1,
            fraction: ca_s_master_lm1,
            default_symbolic: 4,
            default_modular: 6,
        },
    },
    IdentityCase {
        id: "CA-S-PQ-LM1",
        description: "p,q S-fraction for cycle-alternating permutations, lambda = -1",
        payload: Payload::Series {
            family: FamilyKind::CycleAlt,
            scheme: "evenodd-cyclealt-pq",
            lambda: -1,
            fraction: ca_s_pq_lm1,
            default_symbolic: 4,
            default_modular: 6,
        },
    },
    IdentityCase {
        id: "CA-S-SIMPLE-LM1",
        description: "simple S-fraction for cycle-alternating permutations, lambda = -1",
        payload: Payload::Series {
            family: FamilyKind::CycleAlt,
            scheme: "simple-cyclealt",
            lambda: -1,
            fraction: ca_s_simple_lm1,
            default_symbolic: 4,
            default_modular: 6,
        },
    },
    IdentityCase {
        id: "DP-T-MASTER-L1",
        description: "master T-fraction for D-permutations, lambda = 1",
        payload: Payload::Series {
            family: FamilyKind::DPerm,
            scheme: "master-dperm",
            lambda: 1,
            fraction: dp_t_master_l1,
            default_symbolic: 4,
            default_modular: 6,
        },
    },
    IdentityCase {
        id: "DP-T-MASTER-LM1",
        description: "master T-fraction for D-permutations, lambda = -1",
        payload: Payload::Series {
            family: FamilyKind::DPerm,
            scheme: "master-dperm",
            lambda: -1,
            fraction: dp_t_master_lm1,
            default_symbolic: 4,
            default_modular: 6,
        },
    },
    IdentityCase {
        id: "DP-T-PQ-LM1",
        description: "p,q T-fraction for D-permutations, lambda = -1",
        payload: Payload::Series {
            family: FamilyKind::DPerm,
            scheme: "pq-dperm",
            lambda: -1,
            fraction: dp_t_pq_lm1,
            default_symbolic: 4,
            default_modular: 5,
        },
    },
    IdentityCase {
        id: "DP-T-SIMPLE-LM1",
        description: "simple T-fraction for D-permutations, lambda = -1",
        payload: Payload::Series {
            family: FamilyKind::DPerm,
            scheme: "simple-dperm",
            lambda: -1,
            fraction: dp_t_simple_lm1,
            default_symbolic: 4,
            default_modular: 5,
        },
    },
    IdentityCase {
        id: "DP-J-XY-LM1",
        description: "J-fraction for x^arec y^erec over D-permutations, lambda = -1",
        payload: Payload::Series {
            family: FamilyKind::DPerm,
            scheme: "xy-dperm",
            lambda: -1,
            fraction: dp_j_xy_lm1,
            default_symbolic: 6,
            default_modular: 6,
        },
    },
    IdentityCase {
        id: "LEMMA-1-1",
        description: "cyc = fix + cpeak + ucross + lcross (mod 2), both peak and valley forms",
        payload: Payload::Predicate {
            family: FamilyKind::Perm,
            check: check_lemma_1_1,
            default_size: 8,
        },
    },
    IdentityCase {
        id: "INV-FORMULA",
        description: "inv = cval + cdrise + cdfall + ucross + lcross + 2(unest + lnest + psnest)",
        payload: Payload::Predicate {
            family: FamilyKind::Perm,
            check: check_inv_formula,
            default_size: 8,
        },
    },
    IdentityCase {
        id: "LEMMA-4-2",
        description: "on cycle-alternating permutations, ucross_i + unest_i = i - 1 (mod 2) at \
                      valleys and lcross_i + lnest_i = i (mod 2) at peaks",
        payload: Payload::Predicate {
            family: FamilyKind::CycleAlt,
            check: check_lemma_4_2,
            default_size: 10,
        },
    },
];

fn check_lemma_1_1(p: &Permutation) -> bool {
    p.check_lemma_1_1()
}

fn check_inv_formula(p: &Permutation) -> bool {
    p.check_inv_formula()
}

fn check_lemma_4_2(p: &Permutation) -> bool {
    p.check_lemma_4_2()
        .expect("family members are cycle-alternating")
}

pub fn registry() -> &'static [IdentityCase] {
    &REGISTRY
}

pub fn find(id: &str) -> Result<&'static IdentityCase, VerifierError> {
    REGISTRY.iter().find(|c| c.id == id).ok_or_else(|| {
        let known: Vec<&str> = REGISTRY.iter().map(|c| c.id).collect();
        VerifierError::UnknownIdentity(id.to_string(), known.join(", "))
    })
}

// ---------------------------------------------------------------------------
// Generator builders
// ---------------------------------------------------------------------------

fn pvar(name: &'static str) -> Polynomial {
    Polynomial::var(VarId::plain(name))
}

fn fam1(name: &'static str, i: u32) -> Polynomial {
    Polynomial::var(VarId::indexed(name, i))
}

fn fam2(name: &'static str, i: u32, j: u32) -> Polynomial {
    Polynomial::var(VarId::indexed2(name, i, j))
}

/// `sum_{l=0}^{n-1} fam[l, n-1-l]`.
fn row_sum(name: &'static str, n: u32) -> Polynomial {
    let mut out = Polynomial::zero();
    for l in 0..n {
        out = out.add(&fam2(name, l, n - 1 - l));
    }
    out
}

/// `sum_{l=0}^{n-1} (-1)^l fam[l, n-1-l]`.
fn row_sum_alt(name: &'static str, n: u32) -> Polynomial {
    let mut out = Polynomial::zero();
    for l in 0..n {
        let term = fam2(name, l, n - 1 - l);
        out = out.add(&if l % 2 == 0 { term } else { term.negate() });
    }
    out
}

/// `(-p)^m * main + q * [m]_{-p,q} * sub` — the signed q-bracket factor the
/// p,q coefficient formulas are built from.
fn pq_factor(
    p: &'static str,
    q: &'static str,
    main: &'static str,
    sub: &'static str,
    m: u32,
) -> Polynomial {
    let p = pvar(p);
    let q = pvar(q);
    let lead = p.negate().pow(m).mul(&pvar(main));
    let tail = q.mul(&qbracket(m, &p.negate(), &q)).mul(&pvar(sub));
    lead.add(&tail)
}

fn perm_j_master_l1() -> FractionSpec<Polynomial> {
    FractionSpec::j_fraction(
        |n| row_sum("c", n).add(&row_sum("d", n)).add(&fam1("e", n)),
        |n| row_sum("a", n).mul(&row_sum("b", n)),
    )
}

fn perm_j_master_lm1() -> FractionSpec<Polynomial> {
    FractionSpec::j_fraction(
        |n| {
            row_sum_alt("c", n)
                .add(&row_sum_alt("d", n))
                .sub(&fam1("e", n))
        },
        |n| row_sum_alt("a", n).mul(&row_sum_alt("b", n)).negate(),
    )
}

fn perm_j_pq_lm1() -> FractionSpec<Polynomial> {
    FractionSpec::j_fraction(
        |n| {
            if n == 0 {
                fam1("w", 0).negate()
            } else {
                pq_factor("pm2", "qm2", "x2", "u2", n - 1)
                    .add(&pq_factor("pp2", "qp2", "y2", "v2", n - 1))
                    .sub(&pvar("s").pow(n).mul(&fam1("w", n)))
            }
        },
        |n| {
            pq_factor("pm1", "qm1", "x1", "u1", n - 1)
                .mul(&pq_factor("pp1", "qp1", "y1", "v1", n - 1))
                .negate()
        },
    )
}

fn perm_j_simple_lm1() -> FractionSpec<Polynomial> {
    FractionSpec::j_fraction(
        |n| {
            if n == 0 {
                fam1("w", 0).negate()
            } else if n % 2 == 1 {
                pvar("x2").add(&pvar("y2")).sub(&fam1("w", n))
            } else {
                pvar("u2")
                    .sub(&pvar("x2"))
                    .add(&pvar("v2"))
                    .sub(&pvar("y2"))
                    .sub(&fam1("w", n))
            }
        },
        |n| {
            if n % 2 == 1 {
                pvar("x1").mul(&pvar("y1")).negate()
            } else {
                pvar("x1")
                    .sub(&pvar("u1"))
                    .mul(&pvar("y1").sub(&pvar("v1")))
                    .negate()
            }
        },
    )
}

fn ca_s_master_lm1() -> FractionSpec<Polynomial> {
    FractionSpec::s_fraction(|n| row_sum_alt("a", n).mul(&row_sum_alt("b", n)).negate())
}

fn ca_s_pq_lm1() -> FractionSpec<Polynomial> {
    FractionSpec::s_fraction(|n| {
        if n % 2 == 1 {
            // n = 2k - 1: both factors at exponent 2k - 2
            let m = n - 1;
            pq_factor("pm1", "qm1", "xe", "ue", m)
                .mul(&pq_factor("pp1", "qp1", "yo", "vo", m))
                .negate()
        } else {
            // n = 2k: both factors at exponent 2k - 1
            let m = n - 1;
            pq_factor("pm2", "qm2", "xo", "uo", m)
                .mul(&pq_factor("pp2", "qp2", "ye", "ve", m))
                .negate()
        }
    })
}

fn ca_s_simple_lm1() -> FractionSpec<Polynomial> {
    FractionSpec::s_fraction(|n| {
        if n % 2 == 1 {
            pvar("xe").mul(&pvar("yo")).negate()
        } else {
            pvar("xo")
                .sub(&pvar("uo"))
                .mul(&pvar("ye").sub(&pvar("ve")))
                .negate()
        }
    })
}

fn dp_t_master_l1() -> FractionSpec<Polynomial> {
    FractionSpec::t_fraction(
        |n| {
            if n % 2 == 1 {
                let k = (n + 1) / 2;
                row_sum("a", k).mul(&row_sum("b", k))
            } else {
                let k = n / 2;
                fam1("e", k)
                    .add(&row_sum("c", k))
                    .mul(&fam1("f", k).add(&row_sum("d", k)))
            }
        },
        |n| {
            if n == 1 {
                fam1("e", 0).mul(&fam1("f", 0))
            } else {
                Polynomial::zero()
            }
        },
    )
}

fn dp_t_master_lm1() -> FractionSpec<Polynomial> {
    FractionSpec::t_fraction(
        |n| {
            if n % 2 == 1 {
                let k = (n + 1) / 2;
                row_sum_alt("a", k).mul(&row_sum_alt("b", k)).negate()
            } else {
                let k = n / 2;
                row_sum_alt("c", k)
                    .sub(&fam1("e", k))
                    .mul(&row_sum_alt("d", k).sub(&fam1("f", k)))
            }
        },
        |n| {
            if n == 1 {
                fam1("e", 0).mul(&fam1("f", 0))
            } else {
                Polynomial::zero()
            }
        },
    )
}

fn dp_t_pq_lm1() -> FractionSpec<Polynomial> {
    FractionSpec::t_fraction(
        |n| {
            if n % 2 == 1 {
                let k = (n + 1) / 2;
                pq_factor("pm1", "qm1", "x1", "u1", k - 1)
                    .mul(&pq_factor("pp1", "qp1", "y1", "v1", k - 1))
                    .negate()
            } else {
                let k = n / 2;
                let left = pq_factor("pm2", "qm2", "x2", "u2", k - 1)
                    .sub(&pvar("se").pow(k).mul(&pvar("we")));
                let right = pq_factor("pp2", "qp2", "y2", "v2", k - 1)
                    .sub(&pvar("so").pow(k).mul(&pvar("wo")));
                left.mul(&right)
            }
        },
        |n| {
            if n == 1 {
                pvar("ze").mul(&pvar("zo"))
            } else {
                Polynomial::zero()
            }
        },
    )
}

fn dp_t_simple_lm1() -> FractionSpec<Polynomial> {
    FractionSpec::t_fraction(
        |n| {
            if n % 2 == 1 {
                let k = (n + 1) / 2;
                if k % 2 == 1 {
                    pvar("x1").mul(&pvar("y1")).negate()
                } else {
                    pvar("x1")
                        .sub(&pvar("u1"))
                        .mul(&pvar("y1").sub(&pvar("v1")))
                        .negate()
                }
            } else {
                let k = n / 2;
                if k % 2 == 1 {
                    pvar("x2")
                        .sub(&pvar("we"))
                        .mul(&pvar("y2").sub(&pvar("wo")))
                } else {
                    pvar("x2")
                        .sub(&pvar("u2"))
                        .add(&pvar("we"))
                        .mul(&pvar("y2").sub(&pvar("v2")).add(&pvar("wo")))
                }
            }
        },
        |n| {
            if n == 1 {
                pvar("ze").mul(&pvar("zo"))
            } else {
                Polynomial::zero()
            }
        },
    )
}

fn dp_j_xy_lm1() -> FractionSpec<Polynomial> {
    FractionSpec::j_fraction(
        |n| {
            if n == 0 {
                pvar("x").mul(&pvar("x").sub(&pvar("y")))
            } else {
                Polynomial::zero()
            }
        },
        |_| {
            pvar("x")
                .mul(&pvar("y"))
                .mul(&pvar("x").sub(&Polynomial::one()))
                .mul(&pvar("y").sub(&Polynomial::one()))
                .negate()
        },
    )
}

/// The T-fraction for `x^arec y^erec` over D-permutations at `lambda = -1`
/// (the simple T-fraction under `x1 = x2 = ze = zo = x`, `y1 = y2 = y`,
/// everything else 1). Its even contraction is the registered J-fraction
/// `DP-J-XY-LM1`.
pub fn xy_dperm_tfraction() -> FractionSpec<Polynomial> {
    FractionSpec::t_fraction(
        |n| {
            let x = pvar("x");
            let y = pvar("y");
            let xy = x.mul(&y);
            let corner = x.sub(&Polynomial::one()).mul(&y.sub(&Polynomial::one()));
            if n % 2 == 1 {
                let k = (n + 1) / 2;
                if k % 2 == 1 {
                    xy.negate()
                } else {
                    corner.negate()
                }
            } else {
                let k = n / 2;
                if k % 2 == 1 {
                    corner
                } else {
                    xy
                }
            }
        },
        |n| {
            if n == 1 {
                pvar("x").pow(2)
            } else {
                Polynomial::zero()
            }
        },
    )
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Expand the identity's continued-fraction side at the given order.
pub fn cf_side(id: &str, order: usize) -> Result<TruncatedSeries<Polynomial>, VerifierError> {
    case_cf_side(find(id)?, order)
}

/// Build the identity's enumeration side at the given order.
pub fn enum_side(
    id: &str,
    order: usize,
    caps: &Caps,
) -> Result<TruncatedSeries<Polynomial>, VerifierError> {
    case_enum_side(find(id)?, order, caps)
}

fn case_cf_side(
    case: &IdentityCase,
    order: usize,
) -> Result<TruncatedSeries<Polynomial>, VerifierError> {
    match &case.payload {
        Payload::Series { fraction, .. } => Ok(fraction().expand(order)),
        Payload::Predicate { .. } => Err(VerifierError::ModeMismatch {
            id: case.id.to_string(),
            mode: VerifyMode::Symbolic,
        }),
    }
}

fn case_enum_side(
    case: &IdentityCase,
    order: usize,
    caps: &Caps,
) -> Result<TruncatedSeries<Polynomial>, VerifierError> {
    match &case.payload {
        Payload::Series {
            family,
            scheme,
            lambda,
            ..
        } => {
            let scheme = WeightScheme::by_name(scheme)?;
            let subst = Substitution::symbolic().lambda(*lambda);
            Ok(families::series_of_family(
                *family, scheme, &subst, order, caps,
            )?)
        }
        Payload::Predicate { .. } => Err(VerifierError::ModeMismatch {
            id: case.id.to_string(),
            mode: VerifyMode::Symbolic,
        }),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderOutcome {
    /// Series order, or family size for predicate identities.
    pub order: usize,
    pub pass: bool,
    /// Permutations checked (predicate) or trials compared (modular).
    pub checked: u64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    CoefficientMismatch {
        order: usize,
        enumeration: String,
        fraction: String,
        difference: String,
    },
    ModularMismatch {
        order: usize,
        trial: usize,
        enumeration: String,
        fraction: String,
    },
    Counterexample {
        word: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub id: String,
    pub mode: String,
    #[serde(rename = "status", serialize_with = "status_string")]
    pub pass: bool,
    pub orders: Vec<OrderOutcome>,
    pub witness: Option<Witness>,
    pub millis: u128,
}

fn status_string<S: serde::Serializer>(pass: &bool, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(if *pass { "pass" } else { "fail" })
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let max_order = self.orders.iter().map(|o| o.order).max().unwrap_or(0);
        let checked: u64 = self.orders.iter().map(|o| o.checked).sum();
        write!(
            f,
            "{:<20} {:<9} orders 0..={:<2} {} ({} checks, {} ms)",
            self.id,
            self.mode,
            max_order,
            if self.pass { "PASS" } else { "FAIL" },
            checked,
            self.millis
        )?;
        if let Some(w) = &self.witness {
            match w {
                Witness::CoefficientMismatch {
                    order,
                    enumeration,
                    fraction,
                    difference,
                } => {
                    write!(
                        f,
                        "\n  first mismatch at t^{order}:\n    enumeration: {enumeration}\n    fraction:    {fraction}\n    difference:  {difference}"
                    )?;
                }
                Witness::ModularMismatch {
                    order,
                    trial,
                    enumeration,
                    fraction,
                } => {
                    write!(
                        f,
                        "\n  first mismatch at t^{order} (trial {trial}): enumeration {enumeration} vs fraction {fraction}"
                    )?;
                }
                Witness::Counterexample { word } => {
                    write!(f, "\n  counterexample: {word}")?;
                }
            }
        }
        Ok(())
    }
}

/// Verify one identity. `order` defaults per identity and mode; the check is
/// deterministic given `seed` (only modular mode consumes it).
pub fn verify(
    id: &str,
    order: Option<usize>,
    mode: Option<VerifyMode>,
    seed: u64,
    caps: &Caps,
) -> Result<VerifyReport, VerifierError> {
    let case = find(id)?;
    let mode = mode.unwrap_or_else(|| case.default_mode());
    let start = Instant::now();
    let mut report = match (&case.payload, mode) {
        (Payload::Series { .. }, VerifyMode::Symbolic) => {
            let n = order.unwrap_or(case.default_order(mode));
            verify_symbolic(case, n, caps)?
        }
        (Payload::Series { .. }, VerifyMode::Modular) => {
            let n = order.unwrap_or(case.default_order(mode));
            verify_modular(case, n, seed, caps)?
        }
        (Payload::Predicate { .. }, VerifyMode::Predicate) => {
            let n = order.unwrap_or(case.default_order(mode));
            verify_predicate(case, n, caps)?
        }
        _ => {
            return Err(VerifierError::ModeMismatch {
                id: id.to_string(),
                mode,
            });
        }
    };
    report.millis = start.elapsed().as_millis();
    Ok(report)
}

fn verify_symbolic(
    case: &IdentityCase,
    order: usize,
    caps: &Caps,
) -> Result<VerifyReport, VerifierError> {
    let enumeration = case_enum_side(case, order, caps)?;
    let fraction = case_cf_side(case, order)?;
    let mut orders = Vec::with_capacity(order + 1);
    let mut witness = None;
    for k in 0..=order {
        let lhs = enumeration.coeff(k);
        let rhs = fraction.coeff(k);
        let pass = lhs == rhs;
        if !pass && witness.is_none() {
            witness = Some(Witness::CoefficientMismatch {
                order: k,
                enumeration: lhs.to_string(),
                fraction: rhs.to_string(),
                difference: lhs.sub(rhs).to_string(),
            });
        }
        orders.push(OrderOutcome {
            order: k,
            pass,
            checked: 1,
        });
    }
    Ok(VerifyReport {
        id: case.id.to_string(),
        mode: VerifyMode::Symbolic.to_string(),
        pass: witness.is_none(),
        orders,
        witness,
        millis: 0,
    })
}

/// Deterministic residue stream: FNV-1a over `(seed, trial, variable)`.
fn assigned_residue(seed: u64, trial: u64, var: &VarId) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    eat(&seed.to_le_bytes());
    eat(&trial.to_le_bytes());
    eat(var.to_string().as_bytes());
    h % DEFAULT_PRIME
}

/// Variables consulted by the fraction's generators at the given order.
fn generator_variables(spec: &FractionSpec<Polynomial>, order: usize) -> BTreeSet<VarId> {
    let depth = order as u32 + 1;
    let mut vars = BTreeSet::new();
    let mut absorb = |p: Polynomial| vars.extend(p.variables());
    match spec {
        FractionSpec::S { alpha } => {
            for k in 1..=depth {
                absorb(alpha(k));
            }
        }
        FractionSpec::T { alpha, delta } => {
            for k in 1..=depth {
                absorb(alpha(k));
                absorb(delta(k));
            }
        }
        FractionSpec::J { gamma, beta } => {
            for k in 0..depth {
                absorb(gamma(k));
                absorb(beta(k + 1));
            }
        }
    }
    vars
}

/// Evaluate a polynomial fraction spec into the fixed-prime residue field.
fn spec_mod(spec: &FractionSpec<Polynomial>, table: BTreeMap<VarId, u64>) -> FractionSpec<Mod61> {
    let eval = move |p: Polynomial| {
        Mod61::new(
            p.eval_mod(&table, DEFAULT_PRIME)
                .expect("assignment covers every generator variable"),
        )
    };
    match spec {
        FractionSpec::S { alpha } => {
            let alpha = alpha.clone();
            FractionSpec::s_fraction(move |k| eval(alpha(k)))
        }
        FractionSpec::T { alpha, delta } => {
            let alpha = alpha.clone();
            let delta = delta.clone();
            let eval2 = eval.clone();
            FractionSpec::T {
                alpha: std::sync::Arc::new(move |k| eval(alpha(k))),
                delta: std::sync::Arc::new(move |k| eval2(delta(k))),
            }
        }
        FractionSpec::J { gamma, beta } => {
            let gamma = gamma.clone();
            let beta = beta.clone();
            let eval2 = eval.clone();
            FractionSpec::J {
                gamma: std::sync::Arc::new(move |k| eval(gamma(k))),
                beta: std::sync::Arc::new(move |k| eval2(beta(k))),
            }
        }
    }
}

fn verify_modular(
    case: &IdentityCase,
    order: usize,
    seed: u64,
    caps: &Caps,
) -> Result<VerifyReport, VerifierError> {
    let Payload::Series {
        family,
        scheme,
        lambda,
        fraction,
        ..
    } = &case.payload
    else {
        unreachable!("modular mode is only reachable for series identities");
    };
    let scheme = WeightScheme::by_name(scheme)?;
    let spec = fraction();

    // Assign residues to the whole variable universe of both sides, one
    // table per trial; lambda is pinned, not random.
    let max_level = family.size_for_order(order) as u32 + 1;
    let mut universe = scheme.universe(max_level);
    universe.extend(generator_variables(&spec, order));
    let lambda_residue = if *lambda >= 0 { 1 } else { DEFAULT_PRIME - 1 };
    let tables: Vec<BTreeMap<VarId, u64>> = (0..DEFAULT_TRIALS as u64)
        .map(|trial| {
            let mut t: BTreeMap<VarId, u64> = universe
                .iter()
                .map(|v| (v.clone(), assigned_residue(seed, trial, v)))
                .collect();
            t.insert(VarId::plain("lambda"), lambda_residue);
            t
        })
        .collect();

    let enum_values =
        families::series_of_family_mod(*family, scheme, &tables, order, caps, DEFAULT_PRIME)?;
    let cf_values: Vec<Vec<u64>> = tables
        .iter()
        .map(|t| {
            spec_mod(&spec, t.clone())
                .expand(order)
                .coeffs()
                .iter()
                .map(|m| m.value())
                .collect()
        })
        .collect();

    let mut orders = Vec::with_capacity(order + 1);
    let mut witness = None;
    for k in 0..=order {
        let mut pass = true;
        for trial in 0..DEFAULT_TRIALS {
            if enum_values[trial][k] != cf_values[trial][k] {
                pass = false;
                if witness.is_none() {
                    witness = Some(Witness::ModularMismatch {
                        order: k,
                        trial,
                        enumeration: enum_values[trial][k].to_string(),
                        fraction: cf_values[trial][k].to_string(),
                    });
                }
            }
        }
        orders.push(OrderOutcome {
            order: k,
            pass,
            checked: DEFAULT_TRIALS as u64,
        });
    }
    Ok(VerifyReport {
        id: case.id.to_string(),
        mode: VerifyMode::Modular.to_string(),
        pass: witness.is_none(),
        orders,
        witness,
        millis: 0,
    })
}

fn verify_predicate(
    case: &IdentityCase,
    max_size: usize,
    caps: &Caps,
) -> Result<VerifyReport, VerifierError> {
    let Payload::Predicate { family, check, .. } = &case.payload else {
        unreachable!("predicate mode is only reachable for predicate identities");
    };
    let step = match family {
        FamilyKind::Perm => 1,
        _ => 2,
    };
    let mut orders = Vec::new();
    let mut witness = None;
    for size in (0..=max_size).step_by(step) {
        let mut checked = 0u64;
        let mut pass = true;
        families::for_each_member(Family::new(*family, size)?, caps, |p| {
            checked += 1;
            if !check(p) && witness.is_none() {
                pass = false;
                witness = Some(Witness::Counterexample {
                    word: p.to_string(),
                });
            }
        })?;
        orders.push(OrderOutcome {
            order: size,
            pass,
            checked,
        });
    }
    Ok(VerifyReport {
        id: case.id.to_string(),
        mode: VerifyMode::Predicate.to_string(),
        pass: witness.is_none(),
        orders,
        witness,
        millis: 0,
    })
}
