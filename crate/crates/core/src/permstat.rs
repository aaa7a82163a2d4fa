//! Permutations and their statistics.
//!
//! A permutation is stored as its one-line word on `{1, ..., n}`; all public
//! semantics are 1-based. The module computes the cycle classification
//! (cycle peak / valley / double rise / double fall / fixed point), the
//! record classification, the ten record-and-cycle categories, the
//! index-refined crossing and nesting counts, pseudo-nesting levels of fixed
//! points, inversions, and the parity identities tying them together.
//!
//! Definitions, with `inv(i)` short for `σ⁻¹(i)`:
//!
//! * `i` is a cycle peak when `inv(i) < i > σ(i)`, a cycle valley when
//!   `inv(i) > i < σ(i)`, a cycle double rise when `inv(i) < i < σ(i)`, a
//!   cycle double fall when `inv(i) > i > σ(i)`, and a fixed point when
//!   `σ(i) = i`.
//! * `i` is a record when `σ(j) < σ(i)` for all `j < i`, and an antirecord
//!   when `σ(j) > σ(i)` for all `j > i`.
//! * a quadruplet `i < j < k < l` is an upper crossing when `k = σ(i)` and
//!   `l = σ(j)`, an upper nesting when `l = σ(i)` and `k = σ(j)`, a lower
//!   crossing when `i = σ(k)` and `j = σ(l)`, and a lower nesting when
//!   `i = σ(l)` and `j = σ(k)`. The index-refined counts attribute each
//!   quadruplet to its second (upper) or third (lower) index.
//! * `psnest(j)`, for a fixed point `j`, counts the arcs passing over `j`:
//!   `#{i < j : σ(i) > j}`, which equals `#{i > j : σ(i) < j}`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermutationError {
    #[error("not a permutation: duplicate value {0}")]
    DuplicateValue(u32),
    #[error("not a permutation: value {value} out of range for length {n}")]
    ValueOutOfRange { value: u32, n: usize },
    #[error("not a permutation: invalid token \"{0}\"")]
    InvalidToken(String),
    #[error("index {index} is a {class}, so the permutation is not cycle-alternating")]
    NotCycleAlternating { index: usize, class: CycleClass },
}

/// Cycle classification of an index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleClass {
    Cpeak,
    Cval,
    Cdrise,
    Cdfall,
    Fix,
}

impl fmt::Display for CycleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CycleClass::Cpeak => "cpeak",
            CycleClass::Cval => "cval",
            CycleClass::Cdrise => "cdrise",
            CycleClass::Cdfall => "cdfall",
            CycleClass::Fix => "fix",
        };
        write!(f, "{s}")
    }
}

/// Record classification of an index: exclusive record, exclusive
/// antirecord, record-antirecord, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordClass {
    Erec,
    Earec,
    Rar,
    Nrar,
}

/// The ten disjoint categories of the combined record-and-cycle
/// classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordCycleClass {
    Ereccval,
    Ereccdrise,
    Eareccpeak,
    Eareccdfall,
    Rar,
    Nrcpeak,
    Nrcval,
    Nrcdrise,
    Nrcdfall,
    Nrfix,
}

/// Index-refined crossing/nesting counts at one index.
///
/// `ucross`/`unest` vanish unless the index is an excedance, `lcross`/`lnest`
/// unless it is an anti-excedance, and `psnest` unless it is a fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IndexRefined {
    pub ucross: u64,
    pub unest: u64,
    pub lcross: u64,
    pub lnest: u64,
    pub psnest: u64,
}

macro_rules! stat_profile {
    ($($field:ident),+ $(,)?) => {
        /// Every aggregate and refined statistic of one permutation.
        #[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
        pub struct StatProfile {
            $(pub $field: u64,)+
        }

        impl StatProfile {
            /// `(name, value)` pairs in declaration order, for tabular output.
            pub fn fields(&self) -> Vec<(&'static str, u64)> {
                vec![$((stringify!($field), self.$field),)+]
            }
        }
    };
}

stat_profile!(
    // cycle classification and excedance aggregates
    cyc,
    fix,
    cpeak,
    cval,
    cdrise,
    cdfall,
    exc,
    aexc,
    // the ten record-and-cycle categories
    ereccval,
    ereccdrise,
    eareccpeak,
    eareccdfall,
    rar,
    nrcpeak,
    nrcval,
    nrcdrise,
    nrcdfall,
    nrfix,
    // parity refinements (parity of the index position)
    evenfix,
    oddfix,
    evenrar,
    oddrar,
    evennrfix,
    oddnrfix,
    eareccpeakeven,
    eareccpeakodd,
    ereccvaleven,
    ereccvalodd,
    nrcpeakeven,
    nrcpeakodd,
    nrcvaleven,
    nrcvalodd,
    // aggregate crossings, nestings, pseudo-nestings
    ucross,
    lcross,
    unest,
    lnest,
    psnest,
    epsnest,
    opsnest,
    // crossings/nestings refined by the class of the inner index
    ucrosscval,
    ucrosscdrise,
    lcrosscpeak,
    lcrosscdfall,
    unestcval,
    unestcdrise,
    lnestcpeak,
    lnestcdfall,
    // parity splits of the cycle-peak/valley refinements
    lcrosscpeakeven,
    lcrosscpeakodd,
    ucrosscvalodd,
    ucrosscvaleven,
    lnestcpeakeven,
    lnestcpeakodd,
    unestcvalodd,
    unestcvaleven,
    // inversions
    inv,
);

/// Per-index data computed in one pass; consumed by [`Permutation::profile`]
/// and by the weighted enumeration in [`crate::families`].
#[derive(Debug, Clone, Copy)]
pub struct IndexData {
    /// 1-based position.
    pub index: usize,
    pub cycle: CycleClass,
    pub record: RecordClass,
    pub refined: IndexRefined,
}

impl IndexData {
    pub fn record_cycle(&self) -> RecordCycleClass {
        combine(self.cycle, self.record)
    }
}

fn combine(cycle: CycleClass, record: RecordClass) -> RecordCycleClass {
    match (record, cycle) {
        (RecordClass::Rar, _) => RecordCycleClass::Rar,
        (RecordClass::Erec, CycleClass::Cval) => RecordCycleClass::Ereccval,
        (RecordClass::Erec, CycleClass::Cdrise) => RecordCycleClass::Ereccdrise,
        (RecordClass::Earec, CycleClass::Cpeak) => RecordCycleClass::Eareccpeak,
        (RecordClass::Earec, CycleClass::Cdfall) => RecordCycleClass::Eareccdfall,
        (RecordClass::Nrar, CycleClass::Cpeak) => RecordCycleClass::Nrcpeak,
        (RecordClass::Nrar, CycleClass::Cval) => RecordCycleClass::Nrcval,
        (RecordClass::Nrar, CycleClass::Cdrise) => RecordCycleClass::Nrcdrise,
        (RecordClass::Nrar, CycleClass::Cdfall) => RecordCycleClass::Nrcdfall,
        (RecordClass::Nrar, CycleClass::Fix) => RecordCycleClass::Nrfix,
        // records are weak excedances and antirecords weak anti-excedances,
        // so the remaining combinations cannot occur
        (r, c) => unreachable!("impossible record/cycle combination {r:?}/{c:?}"),
    }
}

/// A permutation of `{1, ..., n}` in one-line notation.
///
/// `word[i-1]` holds the image of `i`; `n = 0` is the empty permutation.
/// Values are immutable after construction and every operation is a pure
/// function of the word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    word: Vec<u32>,
}

impl Permutation {
    /// Validates that `word` is a bijection of `{1, .., n}`.
    pub fn new(word: Vec<u32>) -> Result<Self, PermutationError> {
        let n = word.len();
        let mut seen = vec![false; n];
        for &v in &word {
            if v == 0 || v as usize > n {
                return Err(PermutationError::ValueOutOfRange { value: v, n });
            }
            if seen[v as usize - 1] {
                return Err(PermutationError::DuplicateValue(v));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation { word })
    }

    pub fn empty() -> Self {
        Permutation { word: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n as u32).collect(),
        }
    }

    /// Internal constructor for words already known to be valid.
    pub(crate) fn from_valid(word: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(word.clone()).is_ok());
        Permutation { word }
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    /// `σ(i)` for a 1-based index. Panics when `i` is out of range.
    pub fn apply(&self, i: usize) -> usize {
        assert!(
            i >= 1 && i <= self.n(),
            "index {i} out of range 1..={}",
            self.n()
        );
        self.word[i - 1] as usize
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.n()];
        for (pos, &val) in self.word.iter().enumerate() {
            inv[val as usize - 1] = pos as u32 + 1;
        }
        Permutation { word: inv }
    }

    fn inverse_word(&self) -> Vec<u32> {
        self.inverse().word
    }

    /// Number of cycles, counting fixed points.
    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Cycle decomposition; each cycle starts at its smallest element and the
    /// cycles are sorted by that element.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur - 1] {
                seen[cur - 1] = true;
                cycle.push(cur as u32);
                cur = self.apply(cur);
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle decomposition rendered as `(1,9,10)(2,3,7)(4)`.
    pub fn cycles_string(&self) -> String {
        if self.n() == 0 {
            return "()".to_string();
        }
        self.cycles()
            .iter()
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                format!("({})", inner.join(","))
            })
            .collect()
    }

    /// Cycle class of index `i` (1-based). Panics when out of range.
    pub fn classify_cycle(&self, i: usize) -> CycleClass {
        let si = self.apply(i);
        let pre = self.inverse().apply(i);
        classify_cycle_raw(pre, i, si)
    }

    /// Record class of index `i` (1-based). Panics when out of range.
    pub fn classify_record(&self, i: usize) -> RecordClass {
        let si = self.apply(i);
        let is_record = (1..i).all(|j| self.apply(j) < si);
        let is_antirecord = (i + 1..=self.n()).all(|j| self.apply(j) > si);
        record_class(is_record, is_antirecord)
    }

    /// One of the ten record-and-cycle categories for index `i`.
    pub fn record_cycle_category(&self, i: usize) -> RecordCycleClass {
        combine(self.classify_cycle(i), self.classify_record(i))
    }

    /// Index-refined crossing/nesting counts at index `i` (1-based).
    ///
    /// Direct definition scan: for each count the two outer endpoints are
    /// forced by `σ`, so the scan runs over the one free index.
    pub fn index_refined(&self, i: usize) -> IndexRefined {
        let si = self.apply(i);
        index_refined_scan(&self.word, i, si)
    }

    /// Full statistic profile.
    pub fn profile(&self) -> StatProfile {
        let data = self.index_data();
        let mut p = StatProfile::default();
        p.cyc = self.cycle_count() as u64;
        p.inv = self.inversions();
        for d in &data {
            let even = d.index % 2 == 0;
            let r = d.refined;
            match d.cycle {
                CycleClass::Cpeak => {
                    p.cpeak += 1;
                    p.aexc += 1;
                    p.lcross += r.lcross;
                    p.lnest += r.lnest;
                    p.lcrosscpeak += r.lcross;
                    p.lnestcpeak += r.lnest;
                    if even {
                        p.lcrosscpeakeven += r.lcross;
                        p.lnestcpeakeven += r.lnest;
                    } else {
                        p.lcrosscpeakodd += r.lcross;
                        p.lnestcpeakodd += r.lnest;
                    }
                }
                CycleClass::Cval => {
                    p.cval += 1;
                    p.exc += 1;
                    p.ucross += r.ucross;
                    p.unest += r.unest;
                    p.ucrosscval += r.ucross;
                    p.unestcval += r.unest;
                    if even {
                        p.ucrosscvaleven += r.ucross;
                        p.unestcvaleven += r.unest;
                    } else {
                        p.ucrosscvalodd += r.ucross;
                        p.unestcvalodd += r.unest;
                    }
                }
                CycleClass::Cdrise => {
                    p.cdrise += 1;
                    p.exc += 1;
                    p.ucross += r.ucross;
                    p.unest += r.unest;
                    p.ucrosscdrise += r.ucross;
                    p.unestcdrise += r.unest;
                }
                CycleClass::Cdfall => {
                    p.cdfall += 1;
                    p.aexc += 1;
                    p.lcross += r.lcross;
                    p.lnest += r.lnest;
                    p.lcrosscdfall += r.lcross;
                    p.lnestcdfall += r.lnest;
                }
                CycleClass::Fix => {
                    p.fix += 1;
                    p.psnest += r.psnest;
                    if even {
                        p.evenfix += 1;
                        p.epsnest += r.psnest;
                    } else {
                        p.oddfix += 1;
                        p.opsnest += r.psnest;
                    }
                }
            }
            match d.record_cycle() {
                RecordCycleClass::Ereccval => {
                    p.ereccval += 1;
                    if even {
                        p.ereccvaleven += 1
                    } else {
                        p.ereccvalodd += 1
                    }
                }
                RecordCycleClass::Ereccdrise => p.ereccdrise += 1,
                RecordCycleClass::Eareccpeak => {
                    p.eareccpeak += 1;
                    if even {
                        p.eareccpeakeven += 1
                    } else {
                        p.eareccpeakodd += 1
                    }
                }
                RecordCycleClass::Eareccdfall => p.eareccdfall += 1,
                RecordCycleClass::Rar => {
                    p.rar += 1;
                    if even {
                        p.evenrar += 1
                    } else {
                        p.oddrar += 1
                    }
                }
                RecordCycleClass::Nrcpeak => {
                    p.nrcpeak += 1;
                    if even {
                        p.nrcpeakeven += 1
                    } else {
                        p.nrcpeakodd += 1
                    }
                }
                RecordCycleClass::Nrcval => {
                    p.nrcval += 1;
                    if even {
                        p.nrcvaleven += 1
                    } else {
                        p.nrcvalodd += 1
                    }
                }
                RecordCycleClass::Nrcdrise => p.nrcdrise += 1,
                RecordCycleClass::Nrcdfall => p.nrcdfall += 1,
                RecordCycleClass::Nrfix => {
                    p.nrfix += 1;
                    if even {
                        p.evennrfix += 1
                    } else {
                        p.oddnrfix += 1
                    }
                }
            }
        }
        p
    }

    /// Classification and refined counts for every index, in one sweep.
    pub fn index_data(&self) -> Vec<IndexData> {
        let n = self.n();
        let inv = self.inverse_word();
        // records: running maximum from the left
        let mut is_record = vec![false; n];
        let mut max = 0u32;
        for i in 0..n {
            if self.word[i] > max {
                max = self.word[i];
                is_record[i] = true;
            }
        }
        // antirecords: running minimum from the right
        let mut is_antirecord = vec![false; n];
        let mut min = u32::MAX;
        for i in (0..n).rev() {
            if self.word[i] < min {
                min = self.word[i];
                is_antirecord[i] = true;
            }
        }
        (1..=n)
            .map(|i| {
                let si = self.word[i - 1] as usize;
                let pre = inv[i - 1] as usize;
                IndexData {
                    index: i,
                    cycle: classify_cycle_raw(pre, i, si),
                    record: record_class(is_record[i - 1], is_antirecord[i - 1]),
                    refined: index_refined_scan(&self.word, i, si),
                }
            })
            .collect()
    }

    /// Number of inversions: pairs `i < j` with `σ(i) > σ(j)`.
    pub fn inversions(&self) -> u64 {
        let n = self.n();
        let mut count = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                if self.word[i] > self.word[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Exact inversion-count identity:
    /// `inv = cval + cdrise + cdfall + ucross + lcross + 2(unest + lnest + psnest)`.
    pub fn check_inv_formula(&self) -> bool {
        let p = self.profile();
        p.inv
            == p.cval
                + p.cdrise
                + p.cdfall
                + p.ucross
                + p.lcross
                + 2 * (p.unest + p.lnest + p.psnest)
    }

    /// Cycle-count parity identity, both forms:
    /// `cyc ≡ fix + cpeak + ucross + lcross` and
    /// `cyc ≡ fix + cval + ucross + lcross` (mod 2).
    pub fn check_lemma_1_1(&self) -> bool {
        let p = self.profile();
        let a = (p.fix + p.cpeak + p.ucross + p.lcross) % 2;
        let b = (p.fix + p.cval + p.ucross + p.lcross) % 2;
        p.cyc % 2 == a && p.cyc % 2 == b
    }

    /// Parity of refined counts on cycle-alternating permutations: every
    /// cycle valley `i` has `ucross_i + unest_i ≡ i - 1 (mod 2)` and every
    /// cycle peak `i` has `lcross_i + lnest_i ≡ i (mod 2)`.
    ///
    /// Signals an error when the permutation has a fixed point, cycle double
    /// rise, or cycle double fall, keeping the hypothesis explicit.
    pub fn check_lemma_4_2(&self) -> Result<bool, PermutationError> {
        let data = self.index_data();
        for d in &data {
            match d.cycle {
                CycleClass::Cval | CycleClass::Cpeak => {}
                class => {
                    return Err(PermutationError::NotCycleAlternating {
                        index: d.index,
                        class,
                    })
                }
            }
        }
        Ok(data.iter().all(|d| {
            let i = d.index as u64;
            match d.cycle {
                CycleClass::Cval => (d.refined.ucross + d.refined.unest) % 2 == (i - 1) % 2,
                CycleClass::Cpeak => (d.refined.lcross + d.refined.lnest) % 2 == i % 2,
                _ => unreachable!(),
            }
        }))
    }
}

fn classify_cycle_raw(pre: usize, i: usize, si: usize) -> CycleClass {
    if si == i {
        CycleClass::Fix
    } else if pre < i && i > si {
        CycleClass::Cpeak
    } else if pre > i && i < si {
        CycleClass::Cval
    } else if pre < i && i < si {
        CycleClass::Cdrise
    } else {
        CycleClass::Cdfall
    }
}

fn record_class(is_record: bool, is_antirecord: bool) -> RecordClass {
    match (is_record, is_antirecord) {
        (true, true) => RecordClass::Rar,
        (true, false) => RecordClass::Erec,
        (false, true) => RecordClass::Earec,
        (false, false) => RecordClass::Nrar,
    }
}

/// Refined counts at 1-based index `i` with image `si`.
///
/// Each quadruplet pattern leaves exactly one endpoint free once the inner
/// index is fixed, so each count is a single scan:
///
/// * `ucross(i)` counts `h < i` with `i < σ(h) < σ(i)`;
/// * `unest(i)` counts `h < i` with `σ(h) > σ(i) > i`;
/// * `lcross(i)` counts `l > i` with `σ(i) < σ(l) < i`;
/// * `lnest(i)` counts `l > i` with `σ(l) < σ(i) < i`;
/// * `psnest(i)` (fixed points) counts `h < i` with `σ(h) > i`.
fn index_refined_scan(word: &[u32], i: usize, si: usize) -> IndexRefined {
    let n = word.len();
    let mut r = IndexRefined::default();
    if si > i {
        for h in 1..i {
            let sh = word[h - 1] as usize;
            if sh > i && sh < si {
                r.ucross += 1;
            }
            if sh > si {
                r.unest += 1;
            }
        }
    } else if si < i {
        for l in i + 1..=n {
            let sl = word[l - 1] as usize;
            if sl > si && sl < i {
                r.lcross += 1;
            }
            if sl < si {
                r.lnest += 1;
            }
        }
    } else {
        for h in 1..i {
            if word[h - 1] as usize > i {
                r.psnest += 1;
            }
        }
    }
    r
}

impl FromStr for Permutation {
    type Err = PermutationError;

    /// Parses a one-line word of comma-separated integers, e.g.
    /// `"9,3,7,4,6,11,2,8,10,1,5"`. The empty string is the empty
    /// permutation.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Ok(Permutation::empty());
        }
        let mut word = Vec::new();
        for token in trimmed.split(',') {
            let token = token.trim();
            let value: u32 = token
                .parse()
                .map_err(|_| PermutationError::InvalidToken(token.to_string()))?;
            word.push(value);
        }
        Permutation::new(word)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}
