//! Combinatorial families and their weighted generating polynomials.
//!
//! Three families are enumerated:
//!
//! * `perm(n)` — all permutations of `{1..n}`;
//! * `dperm(2n)` — permutations of `{1..2n}` with `2k-1 ≤ σ(2k-1)` and
//!   `2k ≥ σ(2k)` for all `k`;
//! * `cyclealt(2n)` — permutations of `{1..2n}` with no cycle double rises,
//!   cycle double falls, or fixed points.
//!
//! A [`WeightScheme`] maps each index of a permutation to a variable factor
//! (chosen by its cycle class, position parity, and record status, with
//! crossing/nesting counts as subscripts or exponents), always together with
//! a factor `lambda^cyc`. The scheme table is data: each built-in scheme is
//! a list of per-index rules, so the ten generating polynomials used by the
//! verifier differ only in their rule lists.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cfkit::TruncatedSeries;
use crate::permstat::{CycleClass, IndexData, Permutation, RecordClass};
use crate::polyring::{mul_mod, pow_mod, Monomial, Polynomial, VarId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamiliesError {
    #[error("{kind} family size must be even, got {size}")]
    OddSize { kind: FamilyKind, size: usize },
    #[error("{kind} size {size} exceeds the configured cap {cap} (override with CYCLEFRAC_MAX_N)")]
    SizeOverCap {
        kind: FamilyKind,
        size: usize,
        cap: usize,
    },
    #[error("unknown weight scheme \"{0}\"")]
    UnknownScheme(String),
    #[error("unknown family \"{0}\" (expected perm, dperm, or cyclealt)")]
    UnknownFamily(String),
    #[error("variable {var} has no assigned residue")]
    MissingAssignment { var: VarId },
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Perm,
    DPerm,
    CycleAlt,
}

impl FamilyKind {
    /// Family size whose generating polynomial is the coefficient of `t^k`.
    pub fn size_for_order(self, k: usize) -> usize {
        match self {
            FamilyKind::Perm => k,
            FamilyKind::DPerm | FamilyKind::CycleAlt => 2 * k,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyKind::Perm => "perm",
            FamilyKind::DPerm => "dperm",
            FamilyKind::CycleAlt => "cyclealt",
        };
        write!(f, "{s}")
    }
}

impl FromStr for FamilyKind {
    type Err = FamiliesError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "perm" => Ok(FamilyKind::Perm),
            "dperm" => Ok(FamilyKind::DPerm),
            "cyclealt" => Ok(FamilyKind::CycleAlt),
            other => Err(FamiliesError::UnknownFamily(other.to_string())),
        }
    }
}

/// A family kind together with a concrete size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Family {
    pub kind: FamilyKind,
    pub size: usize,
}

impl Family {
    pub fn new(kind: FamilyKind, size: usize) -> Result<Self, FamiliesError> {
        if matches!(kind, FamilyKind::DPerm | FamilyKind::CycleAlt) && size % 2 != 0 {
            return Err(FamiliesError::OddSize { kind, size });
        }
        Ok(Family { kind, size })
    }

    pub fn perm(n: usize) -> Self {
        Family {
            kind: FamilyKind::Perm,
            size: n,
        }
    }

    pub fn dperm(size: usize) -> Result<Self, FamiliesError> {
        Family::new(FamilyKind::DPerm, size)
    }

    pub fn cyclealt(size: usize) -> Result<Self, FamiliesError> {
        Family::new(FamilyKind::CycleAlt, size)
    }
}

/// Desk-scale enumeration caps. Exceeding a cap is an error, never a silent
/// truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest `n` for `perm(n)`.
    pub perm_max: usize,
    /// Largest `2n` for `dperm(2n)` and `cyclealt(2n)`.
    pub even_max: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            perm_max: 9,
            even_max: 12,
        }
    }
}

impl Caps {
    /// Uniform cap on every family size.
    pub fn uniform(max: usize) -> Self {
        Caps {
            perm_max: max,
            even_max: max,
        }
    }

    pub fn check(&self, family: Family) -> Result<(), FamiliesError> {
        let cap = match family.kind {
            FamilyKind::Perm => self.perm_max,
            FamilyKind::DPerm | FamilyKind::CycleAlt => self.even_max,
        };
        if family.size > cap {
            Err(FamiliesError::SizeOverCap {
                kind: family.kind,
                size: family.size,
                cap,
            })
        } else {
            Ok(())
        }
    }
}

/// `2k-1 ≤ σ(2k-1)` and `2k ≥ σ(2k)` for all `k`.
pub fn is_dperm(p: &Permutation) -> bool {
    if p.n() % 2 != 0 {
        return false;
    }
    (1..=p.n()).all(|i| {
        let v = p.apply(i);
        if i % 2 == 1 {
            v >= i
        } else {
            v <= i
        }
    })
}

/// No cycle double rises, cycle double falls, or fixed points.
pub fn is_cycle_alternating(p: &Permutation) -> bool {
    if p.n() % 2 != 0 {
        return false;
    }
    (1..=p.n()).all(|i| matches!(p.classify_cycle(i), CycleClass::Cpeak | CycleClass::Cval))
}

/// Visit every member of the family exactly once; returns the member count.
///
/// D-permutations are generated by restricting the candidate values at each
/// position; cycle-alternating permutations by rejecting any placement that
/// creates a fixed point, cycle double rise, or cycle double fall.
pub fn for_each_member(
    family: Family,
    caps: &Caps,
    mut f: impl FnMut(&Permutation),
) -> Result<u64, FamiliesError> {
    Family::new(family.kind, family.size)?;
    caps.check(family)?;
    let n = family.size;
    let mut word: Vec<u32> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut count = 0u64;
    backtrack(family.kind, n, &mut word, &mut used, &mut count, &mut f);
    Ok(count)
}

fn backtrack(
    kind: FamilyKind,
    n: usize,
    word: &mut Vec<u32>,
    used: &mut [bool],
    count: &mut u64,
    f: &mut impl FnMut(&Permutation),
) {
    if word.len() == n {
        *count += 1;
        f(&Permutation::from_valid(word.clone()));
        return;
    }
    let i = word.len() + 1; // 1-based position being filled
    let (lo, hi) = match kind {
        FamilyKind::DPerm => {
            if i % 2 == 1 {
                (i, n)
            } else {
                (1, i)
            }
        }
        _ => (1, n),
    };
    for v in lo..=hi {
        if used[v - 1] {
            continue;
        }
        if kind == FamilyKind::CycleAlt && !cyclealt_placement_ok(used, i, v) {
            continue;
        }
        used[v - 1] = true;
        word.push(v as u32);
        backtrack(kind, n, word, used, count, f);
        word.pop();
        used[v - 1] = false;
    }
}

/// Filling position `i` with value `v` must not force a fixed point, cycle
/// double rise, or cycle double fall at index `i`. Indices before `i` were
/// validated when their positions were filled, and the class of the index
/// `v` (for `v > i`) is validated later when position `v` is filled.
fn cyclealt_placement_ok(used: &[bool], i: usize, v: usize) -> bool {
    if v == i {
        return false; // fixed point
    }
    if used[i - 1] {
        // value i already sits at some position p < i, so inv(i) < i; an
        // image above i would make i a cycle double rise
        v < i
    } else {
        // value i is still unused, so inv(i) > i; an image below i would
        // make i a cycle double fall
        v > i
    }
}

/// Collect the family into a vector (convenient at small sizes).
pub fn enumerate(family: Family, caps: &Caps) -> Result<Vec<Permutation>, FamiliesError> {
    let mut out = Vec::new();
    for_each_member(family, caps, |p| out.push(p.clone()))?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Weight schemes
// ---------------------------------------------------------------------------

/// Which positions a rule applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Parity {
    Any,
    Even,
    Odd,
}

impl Parity {
    fn matches(self, index: usize) -> bool {
        match self {
            Parity::Any => true,
            Parity::Even => index % 2 == 0,
            Parity::Odd => index % 2 == 1,
        }
    }
}

/// The base variable a rule emits with exponent one.
#[derive(Debug, Clone, Copy)]
enum Base {
    /// Kill the whole weight (the scheme excludes this index class).
    Zero,
    /// A doubly-indexed family subscripted by the refined counts of the
    /// index: `fam[ucross, unest]` on excedances, `fam[lcross, lnest]` on
    /// anti-excedances.
    CrossNest(&'static str),
    /// A singly-indexed family subscripted by the pseudo-nesting level of a
    /// fixed point: `fam[psnest]`.
    Level(&'static str),
    /// Variable chosen by record status: records (excedance classes),
    /// antirecords (anti-excedance classes), or record-antirecords (fixed
    /// points) take `fav`; every other index takes `other`. `None` means no
    /// factor.
    ByRecord {
        fav: Option<&'static str>,
        other: Option<&'static str>,
    },
}

#[derive(Debug, Clone, Copy)]
struct Rule {
    class: CycleClass,
    parity: Parity,
    base: Base,
    /// Variable raised to the crossing count of the index.
    cross: Option<&'static str>,
    /// Variable raised to the nesting count of the index.
    nest: Option<&'static str>,
    /// Variable raised to the pseudo-nesting level (fixed points).
    level: Option<&'static str>,
}

impl Rule {
    const fn new(class: CycleClass, parity: Parity, base: Base) -> Self {
        Rule {
            class,
            parity,
            base,
            cross: None,
            nest: None,
            level: None,
        }
    }

    const fn arcs(mut self, cross: &'static str, nest: &'static str) -> Self {
        self.cross = Some(cross);
        self.nest = Some(nest);
        self
    }

    const fn level_var(mut self, level: &'static str) -> Self {
        self.level = Some(level);
        self
    }
}

/// A named weight rule: permutation → monomial over a declared variable
/// universe, with `lambda^cyc` always included.
pub struct WeightScheme {
    pub name: &'static str,
    pub description: &'static str,
    rules: &'static [Rule],
}

const fn by_record(fav: &'static str, other: &'static str) -> Base {
    Base::ByRecord {
        fav: Some(fav),
        other: Some(other),
    }
}

const fn fav_only(fav: &'static str) -> Base {
    Base::ByRecord {
        fav: Some(fav),
        other: None,
    }
}

static MASTER_PERM: WeightScheme = WeightScheme {
    name: "master-perm",
    description: "a[ucross,unest] per cycle valley, b[lcross,lnest] per cycle peak, \
                  c per cycle double fall, d per cycle double rise, e[psnest] per fixed point",
    rules: &[
        Rule::new(CycleClass::Cval, Parity::Any, Base::CrossNest("a")),
        Rule::new(CycleClass::Cpeak, Parity::Any, Base::CrossNest("b")),
        Rule::new(CycleClass::Cdfall, Parity::Any, Base::CrossNest("c")),
        Rule::new(CycleClass::Cdrise, Parity::Any, Base::CrossNest("d")),
        Rule::new(CycleClass::Fix, Parity::Any, Base::Level("e")),
    ],
};

static BIG_PERM_PQ: WeightScheme = WeightScheme {
    name: "big-perm-pq",
    description: "record-refined variables x/y/u/v, w[psnest] on fixed points, and \
                  p/q exponents on refined crossings and nestings",
    rules: &[
        Rule::new(CycleClass::Cval, Parity::Any, by_record("y1", "v1")).arcs("pp1", "qp1"),
        Rule::new(CycleClass::Cdrise, Parity::Any, by_record("y2", "v2")).arcs("pp2", "qp2"),
        Rule::new(CycleClass::Cpeak, Parity::Any, by_record("x1", "u1")).arcs("pm1", "qm1"),
        Rule::new(CycleClass::Cdfall, Parity::Any, by_record("x2", "u2")).arcs("pm2", "qm2"),
        Rule::new(CycleClass::Fix, Parity::Any, Base::Level("w")).level_var("s"),
    ],
};

static SIMPLE_PERM: WeightScheme = WeightScheme {
    name: "simple-perm",
    description: "record-refined variables x/y/u/v and w[psnest] on fixed points",
    rules: &[
        Rule::new(CycleClass::Cval, Parity::Any, by_record("y1", "v1")),
        Rule::new(CycleClass::Cdrise, Parity::Any, by_record("y2", "v2")),
        Rule::new(CycleClass::Cpeak, Parity::Any, by_record("x1", "u1")),
        Rule::new(CycleClass::Cdfall, Parity::Any, by_record("x2", "u2")),
        Rule::new(CycleClass::Fix, Parity::Any, Base::Level("w")),
    ],
};

static MASTER_DPERM: WeightScheme = WeightScheme {
    name: "master-dperm",
    description: "master scheme with fixed points split by position parity: \
                  e[psnest] on even, f[psnest] on odd",
    rules: &[
        Rule::new(CycleClass::Cval, Parity::Any, Base::CrossNest("a")),
        Rule::new(CycleClass::Cpeak, Parity::Any, Base::CrossNest("b")),
        Rule::new(CycleClass::Cdfall, Parity::Any, Base::CrossNest("c")),
        Rule::new(CycleClass::Cdrise, Parity::Any, Base::CrossNest("d")),
        Rule::new(CycleClass::Fix, Parity::Even, Base::Level("e")),
        Rule::new(CycleClass::Fix, Parity::Odd, Base::Level("f")),
    ],
};

static PQ_DPERM: WeightScheme = WeightScheme {
    name: "pq-dperm",
    description: "record-refined variables, parity-split fixed-point weights \
                  (ze/zo on record-antirecords, we/wo otherwise, se/so^psnest), \
                  and p/q exponents on refined crossings and nestings",
    rules: &[
        Rule::new(CycleClass::Cval, Parity::Any, by_record("y1", "v1")).arcs("pp1", "qp1"),
        Rule::new(CycleClass::Cdrise, Parity::Any, by_record("y2", "v2")).arcs("pp2", "qp2"),
        Rule::new(CycleClass::Cpeak, Parity::Any, by_record("x1", "u1")).arcs("pm1", "qm1"),
        Rule::new(CycleClass::Cdfall, Parity::Any, by_record("x2", "u2")).arcs("pm2", "qm2"),
        Rule::new(CycleClass::Fix, Parity::Even, by_record("ze", "we")).level_var("se"),
        Rule::new(CycleClass::Fix, Parity::Odd, by_record("zo", "wo")).level_var("so"),
    ],
};

static SIMPLE_DPERM: WeightScheme = WeightScheme {
    name: "simple-dperm",
    description: "record-refined variables with parity-split fixed-point weights",
    rules: &[
        Rule::new(CycleClass::Cval, Parity::Any, by_record("y1", "v1")),
        Rule::new(CycleClass::Cdrise, Parity::Any, by_record("y2", "v2")),
        Rule::new(CycleClass::Cpeak, Parity::Any, by_record("x1", "u1")),
        Rule::new(CycleClass::Cdfall, Parity::Any, by_record("x2", "u2")),
        Rule::new(CycleClass::Fix, Parity::Even, by_record("ze", "we")),
        Rule::new(CycleClass::Fix, Parity::Odd, by_record("zo", "wo")),
    ],
};

static XY_DPERM: WeightScheme = WeightScheme {
    name: "xy-dperm",
    description: "x^arec * y^erec",
    rules: &[
        Rule::new(CycleClass::Cval, Parity::Any, fav_only("y")),
        Rule::new(CycleClass::Cdrise, Parity::Any, fav_only("y")),
        Rule::new(CycleClass::Cpeak, Parity::Any, fav_only("x")),
        Rule::new(CycleClass::Cdfall, Parity::Any, fav_only("x")),
        Rule::new(CycleClass::Fix, Parity::Any, fav_only("x")),
    ],
};

static MASTER_CYCLEALT: WeightScheme = WeightScheme {
    name: "master-cyclealt",
    description: "a[ucross,unest] per cycle valley and b[lcross,lnest] per cycle peak; \
                  zero on any double rise, double fall, or fixed point",
    rules: &[
        Rule::new(CycleClass::Cval, Parity::Any, Base::CrossNest("a")),
        Rule::new(CycleClass::Cpeak, Parity::Any, Base::CrossNest("b")),
        Rule::new(CycleClass::Cdrise, Parity::Any, Base::Zero),
        Rule::new(CycleClass::Cdfall, Parity::Any, Base::Zero),
        Rule::new(CycleClass::Fix, Parity::Any, Base::Zero),
    ],
};

static EVENODD_CYCLEALT_PQ: WeightScheme = WeightScheme {
    name: "evenodd-cyclealt-pq",
    description: "cycle peaks and valleys split by position parity, with p/q \
                  exponents on their crossings and nestings",
    rules: &[
        Rule::new(CycleClass::Cpeak, Parity::Even, by_record("xe", "ue")).arcs("pm1", "qm1"),
        Rule::new(CycleClass::Cpeak, Parity::Odd, by_record("xo", "uo")).arcs("pm2", "qm2"),
        Rule::new(CycleClass::Cval, Parity::Odd, by_record("yo", "vo")).arcs("pp1", "qp1"),
        Rule::new(CycleClass::Cval, Parity::Even, by_record("ye", "ve")).arcs("pp2", "qp2"),
        Rule::new(CycleClass::Cdrise, Parity::Any, Base::Zero),
        Rule::new(CycleClass::Cdfall, Parity::Any, Base::Zero),
        Rule::new(CycleClass::Fix, Parity::Any, Base::Zero),
    ],
};

static SIMPLE_CYCLEALT: WeightScheme = WeightScheme {
    name: "simple-cyclealt",
    description: "cycle peaks and valleys split by position parity and record status",
    rules: &[
        Rule::new(CycleClass::Cpeak, Parity::Even, by_record("xe", "ue")),
        Rule::new(CycleClass::Cpeak, Parity::Odd, by_record("xo", "uo")),
        Rule::new(CycleClass::Cval, Parity::Odd, by_record("yo", "vo")),
        Rule::new(CycleClass::Cval, Parity::Even, by_record("ye", "ve")),
        Rule::new(CycleClass::Cdrise, Parity::Any, Base::Zero),
        Rule::new(CycleClass::Cdfall, Parity::Any, Base::Zero),
        Rule::new(CycleClass::Fix, Parity::Any, Base::Zero),
    ],
};

static ALL_SCHEMES: [&WeightScheme; 10] = [
    &MASTER_PERM,
    &BIG_PERM_PQ,
    &SIMPLE_PERM,
    &MASTER_DPERM,
    &PQ_DPERM,
    &SIMPLE_DPERM,
    &XY_DPERM,
    &MASTER_CYCLEALT,
    &EVENODD_CYCLEALT_PQ,
    &SIMPLE_CYCLEALT,
];

impl WeightScheme {
    pub fn all() -> &'static [&'static WeightScheme] {
        &ALL_SCHEMES
    }

    pub fn by_name(name: &str) -> Result<&'static WeightScheme, FamiliesError> {
        WeightScheme::all()
            .iter()
            .find(|s| s.name == name)
            .copied()
            .ok_or_else(|| FamiliesError::UnknownScheme(name.to_string()))
    }

    /// Every variable the scheme can emit with subscript levels up to
    /// `max_level`, plus `lambda`.
    pub fn universe(&self, max_level: u32) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        out.insert(VarId::plain("lambda"));
        for rule in self.rules {
            match rule.base {
                Base::Zero => {}
                Base::CrossNest(fam) => {
                    for i in 0..=max_level {
                        for j in 0..=(max_level - i) {
                            out.insert(VarId::indexed2(fam, i, j));
                        }
                    }
                }
                Base::Level(fam) => {
                    for i in 0..=max_level {
                        out.insert(VarId::indexed(fam, i));
                    }
                }
                Base::ByRecord { fav, other } => {
                    for v in [fav, other].into_iter().flatten() {
                        out.insert(VarId::plain(v));
                    }
                }
            }
            for v in [rule.cross, rule.nest, rule.level].into_iter().flatten() {
                out.insert(VarId::plain(v));
            }
        }
        out
    }

    fn rule_for(&self, d: &IndexData) -> Option<&Rule> {
        self.rules
            .iter()
            .find(|r| r.class == d.cycle && r.parity.matches(d.index))
    }

    /// Emit the `(variable, exponent)` factors of one permutation's weight,
    /// `lambda^cyc` included. Returns `false` when the weight is zero.
    fn emit_weight(&self, p: &Permutation, mut emit: impl FnMut(VarId, u32)) -> bool {
        for d in p.index_data() {
            let Some(rule) = self.rule_for(&d) else {
                continue;
            };
            let upper = matches!(d.cycle, CycleClass::Cval | CycleClass::Cdrise);
            let (cross_count, nest_count) = if upper {
                (d.refined.ucross, d.refined.unest)
            } else {
                (d.refined.lcross, d.refined.lnest)
            };
            match rule.base {
                Base::Zero => return false,
                Base::CrossNest(fam) => emit(
                    VarId::indexed2(fam, cross_count as u32, nest_count as u32),
                    1,
                ),
                Base::Level(fam) => emit(VarId::indexed(fam, d.refined.psnest as u32), 1),
                Base::ByRecord { fav, other } => {
                    let favored = match d.cycle {
                        CycleClass::Cval | CycleClass::Cdrise => {
                            matches!(d.record, RecordClass::Erec | RecordClass::Rar)
                        }
                        CycleClass::Cpeak | CycleClass::Cdfall => {
                            matches!(d.record, RecordClass::Earec | RecordClass::Rar)
                        }
                        CycleClass::Fix => matches!(d.record, RecordClass::Rar),
                    };
                    if let Some(name) = if favored { fav } else { other } {
                        emit(VarId::plain(name), 1);
                    }
                }
            }
            if let Some(name) = rule.cross {
                emit(VarId::plain(name), cross_count as u32);
            }
            if let Some(name) = rule.nest {
                emit(VarId::plain(name), nest_count as u32);
            }
            if let Some(name) = rule.level {
                emit(VarId::plain(name), d.refined.psnest as u32);
            }
        }
        emit(VarId::plain("lambda"), p.cycle_count() as u32);
        true
    }

    /// The weight monomial of one permutation, or `None` when the scheme
    /// gives it weight zero.
    pub fn weight_monomial(&self, p: &Permutation) -> Option<Monomial> {
        let mut m = Monomial::unit();
        if self.emit_weight(p, |v, e| m.push(v, e)) {
            Some(m)
        } else {
            None
        }
    }

    /// The weight evaluated mod `prime` under one residue assignment per
    /// trial. Fails on a variable missing from an assignment.
    fn weight_mod(
        &self,
        p: &Permutation,
        assignments: &[BTreeMap<VarId, u64>],
        prime: u64,
    ) -> Result<Option<Vec<u64>>, FamiliesError> {
        let mut acc = vec![1u64; assignments.len()];
        let mut missing: Option<VarId> = None;
        let nonzero = self.emit_weight(p, |v, e| {
            if e == 0 || missing.is_some() {
                return;
            }
            for (t, table) in assignments.iter().enumerate() {
                match table.get(&v) {
                    Some(&val) => {
                        acc[t] = mul_mod(acc[t], pow_mod(val, u64::from(e), prime), prime)
                    }
                    None => {
                        missing = Some(v.clone());
                        return;
                    }
                }
            }
        });
        if let Some(var) = missing {
            return Err(FamiliesError::MissingAssignment { var });
        }
        Ok(if nonzero { Some(acc) } else { None })
    }
}

// ---------------------------------------------------------------------------
// Substitutions and generating polynomials
// ---------------------------------------------------------------------------

/// A partial variable substitution applied while summing weights.
///
/// Variables in `map` take their image; with `all_one` set, every other
/// variable except `lambda` becomes 1; anything remaining stays symbolic.
#[derive(Debug, Clone, Default)]
pub struct Substitution {
    pub all_one: bool,
    pub map: BTreeMap<VarId, Polynomial>,
}

impl Substitution {
    /// Leave every variable symbolic.
    pub fn symbolic() -> Self {
        Substitution::default()
    }

    /// Send every variable except `lambda` to 1.
    pub fn ones() -> Self {
        Substitution {
            all_one: true,
            map: BTreeMap::new(),
        }
    }

    pub fn set(mut self, v: VarId, image: Polynomial) -> Self {
        self.map.insert(v, image);
        self
    }

    /// Pin `lambda` to an integer value (normally 1 or -1).
    pub fn lambda(self, value: i64) -> Self {
        self.set(VarId::plain("lambda"), Polynomial::constant(value))
    }

    fn image(&self, v: &VarId) -> Option<Polynomial> {
        if let Some(p) = self.map.get(v) {
            return Some(p.clone());
        }
        if self.all_one && v.family() != "lambda" {
            return Some(Polynomial::one());
        }
        None
    }

    /// Image of a whole monomial.
    pub fn apply_monomial(&self, m: &Monomial) -> Polynomial {
        let mut sym = Monomial::unit();
        let mut out = Polynomial::one();
        for (v, e) in m.iter() {
            match self.image(v) {
                Some(p) => out = out.mul(&p.pow(e)),
                None => sym.push(v.clone(), e),
            }
        }
        out.mul(&Polynomial::from_monomial(sym))
    }
}

/// Exact sum of scheme weights over the family, with the substitution
/// applied term by term. The empty member gives `P_0 = 1`.
pub fn generating_polynomial(
    family: Family,
    scheme: &WeightScheme,
    subst: &Substitution,
    caps: &Caps,
) -> Result<Polynomial, FamiliesError> {
    let mut sum = Polynomial::zero();
    for_each_member(family, caps, |p| {
        if let Some(m) = scheme.weight_monomial(p) {
            sum = sum.add(&subst.apply_monomial(&m));
        }
    })?;
    Ok(sum)
}

/// Ordinary generating series of the family: the coefficient of `t^k` is
/// the generating polynomial at size `k` (perm) or `2k` (dperm, cyclealt).
pub fn series_of_family(
    kind: FamilyKind,
    scheme: &WeightScheme,
    subst: &Substitution,
    order: usize,
    caps: &Caps,
) -> Result<TruncatedSeries<Polynomial>, FamiliesError> {
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let family = Family::new(kind, kind.size_for_order(k))?;
        coeffs.push(generating_polynomial(family, scheme, subst, caps)?);
    }
    Ok(TruncatedSeries::from_coeffs(coeffs))
}

/// Modular counterpart of [`series_of_family`]: for each residue assignment
/// (one per trial) the coefficients `c_0 .. c_order` mod `prime`.
/// Assignments must cover the scheme universe, `lambda` included. Each
/// family size is enumerated once, all trials evaluated in the same pass.
pub fn series_of_family_mod(
    kind: FamilyKind,
    scheme: &WeightScheme,
    assignments: &[BTreeMap<VarId, u64>],
    order: usize,
    caps: &Caps,
    prime: u64,
) -> Result<Vec<Vec<u64>>, FamiliesError> {
    let mut out = vec![Vec::with_capacity(order + 1); assignments.len()];
    for k in 0..=order {
        let family = Family::new(kind, kind.size_for_order(k))?;
        let mut sums = vec![0u64; assignments.len()];
        let mut failure: Option<FamiliesError> = None;
        for_each_member(family, caps, |p| {
            if failure.is_some() {
                return;
            }
            match scheme.weight_mod(p, assignments, prime) {
                Ok(Some(vals)) => {
                    for (t, v) in vals.into_iter().enumerate() {
                        sums[t] = crate::polyring::add_mod(sums[t], v, prime);
                    }
                }
                Ok(None) => {}
                Err(e) => failure = Some(e),
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        for (t, s) in sums.into_iter().enumerate() {
            out[t].push(s);
        }
    }
    Ok(out)
}
