//! Acceptance suite: one test per criterion, each printing a pass line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//!
//! Every identity here is exact: symbolic checks compare polynomial
//! coefficients for equality, modular checks compare residues under three
//! independent random assignments over the 61-bit prime field, and the
//! predicate checks are exhaustive loops. No tolerances anywhere.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{dyck_series, motzkin_series, quadruplet_index_refined, schroeder_series};
use cyclefrac::cfkit::{FractionSpec, TruncatedSeries};
use cyclefrac::families::{
    self, is_cycle_alternating, is_dperm, Caps, Family, FamilyKind, Substitution, WeightScheme,
};
use cyclefrac::permstat::Permutation;
use cyclefrac::polyring::{Monomial, Polynomial, VarId};
use cyclefrac::verifier::{self, VerifyMode};

fn caps() -> Caps {
    Caps::default()
}

fn assert_verified(id: &str, order: usize, mode: VerifyMode, seed: u64) {
    let report = verifier::verify(id, Some(order), Some(mode), seed, &caps()).unwrap();
    assert!(
        report.pass,
        "{id} {mode} at order {order} failed:\n{report}"
    );
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut word: Vec<u32> = (1..=n as u32).collect();
    word.shuffle(rng);
    Permutation::new(word).unwrap()
}

#[test]
fn criterion_01_cycle_parity_identity_exhaustive() {
    let start = Instant::now();
    let report = verifier::verify("LEMMA-1-1", Some(8), None, 0, &caps()).unwrap();
    assert!(report.pass, "{report}");
    let checked: u64 = report.orders.iter().map(|o| o.checked).sum();
    assert!(checked >= 46233, "only {checked} permutations checked");
    println!(
        "[PASS] criterion 1: cycle parity identity on all of S_0..S_8 ({checked} permutations, {} ms)",
        start.elapsed().as_millis()
    );
}

#[test]
fn criterion_02_inversion_formula_exhaustive() {
    let start = Instant::now();
    let report = verifier::verify("INV-FORMULA", Some(8), None, 0, &caps()).unwrap();
    assert!(report.pass, "{report}");
    let checked: u64 = report.orders.iter().map(|o| o.checked).sum();
    assert!(checked >= 46233, "only {checked} permutations checked");
    println!(
        "[PASS] criterion 2: exact inversion formula on all of S_0..S_8 ({checked} permutations, {} ms)",
        start.elapsed().as_millis()
    );
}

#[test]
fn criterion_03_base_identities_at_lambda_one() {
    let start = Instant::now();
    assert_verified("PERM-J-MASTER-L1", 5, VerifyMode::Symbolic, 0);
    assert_verified("DP-T-MASTER-L1", 4, VerifyMode::Symbolic, 0);
    println!(
        "[PASS] criterion 3: lambda = 1 master J (orders <= 5) and master T (orders <= 4) symbolically ({} ms)",
        start.elapsed().as_millis()
    );
}

#[test]
fn criterion_04_master_j_at_lambda_minus_one() {
    let start = Instant::now();
    assert_verified("PERM-J-MASTER-LM1", 5, VerifyMode::Symbolic, 0);
    assert_verified("PERM-J-MASTER-LM1", 7, VerifyMode::Modular, 1);
    println!(
        "[PASS] criterion 4: lambda = -1 master J symbolically (<= 5) and modularly (<= 7, 3 assignments) ({} ms)",
        start.elapsed().as_millis()
    );
}

#[test]
fn criterion_05_pq_and_simple_j_at_lambda_minus_one() {
    let start = Instant::now();
    assert_verified("PERM-J-PQ-LM1", 5, VerifyMode::Symbolic, 0);
    assert_verified("PERM-J-SIMPLE-LM1", 7, VerifyMode::Symbolic, 0);

    // with every variable sent to 1 the signed series collapses to 1 - t
    let series = families::series_of_family(
        FamilyKind::Perm,
        WeightScheme::by_name("simple-perm").unwrap(),
        &Substitution::ones().lambda(-1),
        8,
        &caps(),
    )
    .unwrap();
    assert_eq!(series.coeff(0), &Polynomial::one());
    assert_eq!(series.coeff(1), &Polynomial::constant(-1));
    for k in 2..=8 {
        assert!(
            series.coeff(k).is_zero(),
            "order {k} of the collapsed series"
        );
    }
    // and the fraction side agrees after the same specialization
    let cf = verifier::cf_side("PERM-J-SIMPLE-LM1", 8).unwrap();
    for k in 0..=8 {
        let ones: BTreeMap<VarId, Polynomial> = cf
            .coeff(k)
            .variables()
            .into_iter()
            .map(|v| (v, Polynomial::one()))
            .collect();
        assert_eq!(
            cf.coeff(k).specialize(&ones),
            *series.coeff(k),
            "cf order {k}"
        );
    }
    println!(
        "[PASS] criterion 5: p,q J (<= 5) and simple J (<= 7) symbolically; all-ones collapse to 1 - t through order 8 ({} ms)",
        start.elapsed().as_millis()
    );
}

#[test]
fn criterion_06_cycle_alternating_suite() {
    let start = Instant::now();

    // secant-number counts, with the backtracking enumerator matching the
    // brute-force filter member for member
    let expected = [(2usize, 1usize), (4, 5), (6, 61), (8, 1385)];
    for (size, count) in expected {
        let generated = families::enumerate(Family::cyclealt(size).unwrap(), &caps()).unwrap();
        assert_eq!(generated.len(), count, "cyclealt({size}) count");
        let filtered: Vec<Permutation> = families::enumerate(Family::perm(size), &caps())
            .unwrap()
            .into_iter()
            .filter(is_cycle_alternating)
            .collect();
        assert_eq!(generated, filtered, "filter oracle at size {size}");
    }

    // the refined parity identity over every member up to size 10
    let report = verifier::verify("LEMMA-4-2", Some(10), None, 0, &caps()).unwrap();
    assert!(report.pass, "{report}");

    for id in ["CA-S-MASTER-LM1", "CA-S-PQ-LM1", "CA-S-SIMPLE-LM1"] {
        assert_verified(id, 4, VerifyMode::Symbolic, 0);
        assert_verified(id, 6, VerifyMode::Modular, 2);
    }
    println!(
        "[PASS] criterion 6: cycle-alternating counts 1,5,61,1385; parity identity to size 10; S-fraction identities symbolic <= 4, modular <= 6 ({} ms)",
        start.elapsed().as_millis()
    );
}

#[test]
fn criterion_07_d_permutation_suite() {
    let start = Instant::now();

    for size in [0usize, 2, 4, 6, 8] {
        let generated = families::enumerate(Family::dperm(size).unwrap(), &caps()).unwrap();
        let filtered: Vec<Permutation> = families::enumerate(Family::perm(size), &caps())
            .unwrap()
            .into_iter()
            .filter(is_dperm)
            .collect();
        assert_eq!(generated, filtered, "dperm({size}) vs brute-force filter");
    }

    for id in ["DP-T-MASTER-LM1", "DP-T-PQ-LM1", "DP-T-SIMPLE-LM1"] {
        assert_verified(id, 4, VerifyMode::Symbolic, 0);
        assert_verified(id, 5, VerifyMode::Modular, 3);
    }
    println!(
        "[PASS] criterion 7: D-permutation enumerator matches filter to size 8; T-fraction identities symbolic <= 4, modular <= 5 ({} ms)",
        start.elapsed().as_millis()
    );
}

#[test]
fn criterion_08_xy_j_fraction_and_contraction() {
    let start = Instant::now();

    // symbolic equality in x and y through order 6
    assert_verified("DP-J-XY-LM1", 6, VerifyMode::Symbolic, 0);

    // the even contraction of the underlying T-fraction reproduces the
    // J-fraction coefficients exactly
    let x = Polynomial::var(VarId::plain("x"));
    let y = Polynomial::var(VarId::plain("y"));
    let contracted = verifier::xy_dperm_tfraction().contract_even(12).unwrap();
    let FractionSpec::J { gamma, beta } = &contracted else {
        panic!("even contraction must yield a J fraction")
    };
    assert_eq!(gamma(0), x.mul(&x.sub(&y)));
    let expected_beta = x
        .mul(&y)
        .mul(&x.sub(&Polynomial::one()))
        .mul(&y.sub(&Polynomial::one()))
        .negate();
    for n in 1..=8 {
        assert!(gamma(n).is_zero(), "gamma({n})");
        assert_eq!(beta(n), expected_beta, "beta({n})");
    }

    // the uncontracted T-form also collapses to the constant series 1 at
    // x = y = 1
    let t_series = verifier::xy_dperm_tfraction().expand(4);
    let ones_xy: BTreeMap<VarId, Polynomial> = [
        (VarId::plain("x"), Polynomial::one()),
        (VarId::plain("y"), Polynomial::one()),
    ]
    .into();
    assert_eq!(t_series.coeff(0).specialize(&ones_xy), Polynomial::one());
    for k in 1..=4 {
        assert!(
            t_series.coeff(k).specialize(&ones_xy).is_zero(),
            "T order {k}"
        );
    }

    // at x = y = 1 the series is identically 1 ...
    let subst = Substitution::ones().lambda(-1);
    let series = families::series_of_family(
        FamilyKind::DPerm,
        WeightScheme::by_name("xy-dperm").unwrap(),
        &subst,
        5,
        &caps(),
    )
    .unwrap();
    assert_eq!(series.coeff(0), &Polynomial::one());
    for k in 1..=5 {
        assert!(series.coeff(k).is_zero(), "order {k}");
    }
    // ... equivalently the signed cycle sum over each family vanishes
    for n in 1..=5usize {
        let mut sum = 0i64;
        families::for_each_member(Family::dperm(2 * n).unwrap(), &caps(), |p| {
            sum += if p.cycle_count() % 2 == 0 { 1 } else { -1 };
        })
        .unwrap();
        assert_eq!(sum, 0, "signed cycle sum over dperm({})", 2 * n);
    }
    println!(
        "[PASS] criterion 8: x,y J-fraction symbolic <= 6; contraction gives gamma_0 = x(x-y), beta_n = -xy(x-1)(y-1); signed sums vanish to size 10 ({} ms)",
        start.elapsed().as_millis()
    );
}

#[test]
fn criterion_09_kernel_vs_lattice_path_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    for case in 0..200 {
        let order = rng.gen_range(0..=8usize);
        // the path oracle explores (harmless, never-closing) prefixes up to
        // height 2*order, so give the weight tables that much room
        let levels = 2 * order + 4;
        let rand_vec = |rng: &mut ChaCha8Rng| -> Vec<i128> {
            (0..=levels).map(|_| rng.gen_range(-4i128..=4)).collect()
        };
        match case % 3 {
            0 => {
                let alpha = rand_vec(&mut rng);
                let a = alpha.clone();
                let spec = FractionSpec::<i128>::s_fraction(move |k| a[k as usize]);
                let oracle = dyck_series(|h| alpha[h as usize], order);
                assert_eq!(spec.expand(order).coeffs(), &oracle[..], "S case {case}");
            }
            1 => {
                let alpha = rand_vec(&mut rng);
                let delta = rand_vec(&mut rng);
                let (a, d) = (alpha.clone(), delta.clone());
                let spec = FractionSpec::<i128>::t_fraction(
                    move |k| a[k as usize],
                    move |k| d[k as usize],
                );
                let oracle = schroeder_series(|h| alpha[h as usize], |h| delta[h as usize], order);
                assert_eq!(spec.expand(order).coeffs(), &oracle[..], "T case {case}");
            }
            _ => {
                let gamma = rand_vec(&mut rng);
                let beta = rand_vec(&mut rng);
                let (g, b) = (gamma.clone(), beta.clone());
                let spec = FractionSpec::<i128>::j_fraction(
                    move |k| g[k as usize],
                    move |k| b[k as usize],
                );
                let oracle = motzkin_series(|h| gamma[h as usize], |h| beta[h as usize], order);
                assert_eq!(spec.expand(order).coeffs(), &oracle[..], "J case {case}");
            }
        }
    }
    println!(
        "[PASS] criterion 9: expansion kernel matches the lattice-path oracle on 200 random specs ({} ms)",
        start.elapsed().as_millis()
    );
}

#[test]
fn criterion_10_randomized_property_suites() {
    let start = Instant::now();

    // --- ring axioms, 1000 random triples --------------------------------
    let mut rng = ChaCha8Rng::seed_from_u64(0xABCDE);
    let vars = [VarId::plain("x"), VarId::plain("y"), VarId::plain("z")];
    let rand_poly = |rng: &mut ChaCha8Rng| {
        let mut p = Polynomial::zero();
        for _ in 0..rng.gen_range(0..=4) {
            let mut m = Monomial::unit();
            for v in &vars {
                m.push(v.clone(), rng.gen_range(0..=3));
            }
            p.add_term(m, num_bigint::BigInt::from(rng.gen_range(-9i64..=9)));
        }
        p
    };
    for _ in 0..1000 {
        let p = rand_poly(&mut rng);
        let q = rand_poly(&mut rng);
        let r = rand_poly(&mut rng);
        assert_eq!(p.add(&q), q.add(&p));
        assert_eq!(p.mul(&q), q.mul(&p));
        assert_eq!(p.add(&q).add(&r), p.add(&q.add(&r)));
        assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        assert_eq!(p.mul(&Polynomial::one()), p);
        assert!(p.add(&p.negate()).is_zero());
    }

    // --- depth stability and truncation consistency, 1000 specs each -----
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    for case in 0..1000 {
        let order = rng.gen_range(0..=6usize);
        let depth = order as u32 + 1;
        let vals: Vec<i128> = (0..=order + 8).map(|_| rng.gen_range(-3i128..=3)).collect();
        let junk: Vec<i128> = (0..=order + 8)
            .map(|_| rng.gen_range(-50i128..=50))
            .collect();
        // generators that agree on the consulted levels but differ wildly
        // beyond them must expand identically
        let (v1, v2, j2) = (vals.clone(), vals.clone(), junk);
        let spec = FractionSpec::<i128>::s_fraction(move |k| v1[k as usize]);
        let deep_junk = FractionSpec::<i128>::s_fraction(move |k| {
            if k <= depth {
                v2[k as usize]
            } else {
                j2[k as usize]
            }
        });
        assert_eq!(
            spec.expand(order),
            deep_junk.expand(order),
            "depth case {case}"
        );
        // truncation consistency: expand high, drop down
        let extended = spec.expand(order + 4);
        assert_eq!(
            extended.truncate(order),
            spec.expand(order),
            "truncate case {case}"
        );
    }

    // --- partition invariants on 1000 random permutations ----------------
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for _ in 0..1000 {
        let n = rng.gen_range(0..=10usize);
        let p = random_perm(&mut rng, n);
        let prof = p.profile();
        assert_eq!(
            prof.fix + prof.cpeak + prof.cval + prof.cdrise + prof.cdfall,
            n as u64
        );
        assert_eq!(prof.cpeak, prof.cval);
        let ten = prof.ereccval
            + prof.ereccdrise
            + prof.eareccpeak
            + prof.eareccdfall
            + prof.rar
            + prof.nrcpeak
            + prof.nrcval
            + prof.nrcdrise
            + prof.nrcdfall
            + prof.nrfix;
        assert_eq!(ten, n as u64);
        assert_eq!(prof.ucross, prof.ucrosscval + prof.ucrosscdrise);
        assert_eq!(prof.lcross, prof.lcrosscpeak + prof.lcrosscdfall);
        assert_eq!(prof.psnest, prof.epsnest + prof.opsnest);
        assert!(p.check_lemma_1_1());
        assert!(p.check_inv_formula());
        // spot-check one index against the quadruplet oracle
        if n > 0 {
            let i = rng.gen_range(1..=n);
            let r = p.index_refined(i);
            let q = quadruplet_index_refined(&p, i);
            assert_eq!((r.ucross, r.unest, r.lcross, r.lnest, r.psnest), q);
        }
    }

    // --- specialization coherence on 1000 random weights -----------------
    let mut rng = ChaCha8Rng::seed_from_u64(0xFACADE);
    let master = WeightScheme::by_name("master-perm").unwrap();
    let big = WeightScheme::by_name("big-perm-pq").unwrap();
    let simple_dp = WeightScheme::by_name("simple-dperm").unwrap();
    let xy = WeightScheme::by_name("xy-dperm").unwrap();
    let pq_map = master_to_pq_map(10);
    let xy_map = simple_to_xy_map();
    let dperm_pool: Vec<Permutation> = [2usize, 4, 6, 8]
        .iter()
        .flat_map(|&s| families::enumerate(Family::dperm(s).unwrap(), &caps()).unwrap())
        .collect();
    for _ in 0..1000 {
        let n = rng.gen_range(0..=8usize);
        let p = random_perm(&mut rng, n);
        let master_weight = Polynomial::from_monomial(master.weight_monomial(&p).unwrap());
        let big_weight = Polynomial::from_monomial(big.weight_monomial(&p).unwrap());
        assert_eq!(
            master_weight.specialize(&pq_map),
            big_weight,
            "pq coherence on {p}"
        );

        let d = dperm_pool[rng.gen_range(0..dperm_pool.len())].clone();
        let simple_weight = Polynomial::from_monomial(simple_dp.weight_monomial(&d).unwrap());
        let xy_weight = Polynomial::from_monomial(xy.weight_monomial(&d).unwrap());
        assert_eq!(
            simple_weight.specialize(&xy_map),
            xy_weight,
            "xy coherence on {d}"
        );
    }

    println!(
        "[PASS] criterion 10: ring axioms, depth stability, truncation consistency, partition invariants, specialization coherence (1000 seeded cases each, {} ms)",
        start.elapsed().as_millis()
    );
}

/// Images of the master families under the p,q specialization, for
/// subscripts up to `max_level`.
fn master_to_pq_map(max_level: u32) -> BTreeMap<VarId, Polynomial> {
    let var = |n: &'static str| Polynomial::var(VarId::plain(n));
    let mut map = BTreeMap::new();
    for l in 0..=max_level {
        for lp in 0..=(max_level - l) {
            let pick = |zero: &'static str, pos: &'static str| {
                if lp == 0 {
                    var(zero)
                } else {
                    var(pos)
                }
            };
            map.insert(
                VarId::indexed2("a", l, lp),
                var("pp1")
                    .pow(l)
                    .mul(&var("qp1").pow(lp))
                    .mul(&pick("y1", "v1")),
            );
            map.insert(
                VarId::indexed2("b", l, lp),
                var("pm1")
                    .pow(l)
                    .mul(&var("qm1").pow(lp))
                    .mul(&pick("x1", "u1")),
            );
            map.insert(
                VarId::indexed2("c", l, lp),
                var("pm2")
                    .pow(l)
                    .mul(&var("qm2").pow(lp))
                    .mul(&pick("x2", "u2")),
            );
            map.insert(
                VarId::indexed2("d", l, lp),
                var("pp2")
                    .pow(l)
                    .mul(&var("qp2").pow(lp))
                    .mul(&pick("y2", "v2")),
            );
        }
        map.insert(
            VarId::indexed("e", l),
            var("s")
                .pow(l)
                .mul(&Polynomial::var(VarId::indexed("w", l))),
        );
    }
    map
}

/// Images collapsing the simple D-permutation variables onto x and y.
fn simple_to_xy_map() -> BTreeMap<VarId, Polynomial> {
    let var = |n: &'static str| Polynomial::var(VarId::plain(n));
    let mut map = BTreeMap::new();
    for v in ["x1", "x2", "ze", "zo"] {
        map.insert(VarId::plain(v), var("x"));
    }
    for v in ["y1", "y2"] {
        map.insert(VarId::plain(v), var("y"));
    }
    for v in ["u1", "u2", "v1", "v2", "we", "wo"] {
        map.insert(VarId::plain(v), Polynomial::one());
    }
    map
}

#[test]
fn modular_pass_is_implied_by_symbolic_pass() {
    // consistency of the two modes: every series identity passes both ways
    // at its default symbolic order
    for case in verifier::registry() {
        if let verifier::Payload::Series {
            default_symbolic, ..
        } = case.payload
        {
            let order = Some(default_symbolic);
            let sym =
                verifier::verify(case.id, order, Some(VerifyMode::Symbolic), 9, &caps()).unwrap();
            let md =
                verifier::verify(case.id, order, Some(VerifyMode::Modular), 9, &caps()).unwrap();
            assert!(sym.pass, "{} symbolic at {default_symbolic}", case.id);
            assert!(md.pass, "{} modular at {default_symbolic}", case.id);
        }
    }
}

#[test]
fn series_equality_holds_for_every_registered_series_identity() {
    // quick symbolic sweep across the whole registry at low order
    for case in verifier::registry() {
        if let verifier::Payload::Series { .. } = case.payload {
            let report =
                verifier::verify(case.id, Some(3), Some(VerifyMode::Symbolic), 0, &caps()).unwrap();
            assert!(report.pass, "{}:\n{report}", case.id);
        }
    }
}

#[test]
fn truncated_series_text_form() {
    let series: TruncatedSeries = TruncatedSeries::from_coeffs(vec![
        Polynomial::one(),
        Polynomial::constant(-1),
        Polynomial::zero(),
    ]);
    assert_eq!(series.to_string(), "1; -1; 0");
}
