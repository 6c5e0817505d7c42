//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (visible with `-- --nocapture`) and enforcing its runtime
//! budget. Criteria are asserted exactly as stated; where a stated value is
//! contradicted by independent computation, the test fails with the full
//! analysis in its message rather than silently substituting.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};

use dsieve_core::constant::{dm_affine_check, threshold_scan, ConstantCurveSetup};
use dsieve_core::curves::{
    count_points, count_points_fpoly, good_reduction, is_ordinary, lpolynomial, Base, CurveModel,
    EllipticModel, HyperellipticModel, LPolynomial,
};
use dsieve_core::factorint::{factor, primes_up_to};
use dsieve_core::ff::FieldCtx;
use dsieve_core::group::{
    check_split_properties, element_order, scalar_mul, AmbientGroupInfo, CyclicGroup, Group,
};
use dsieve_core::heuristic::{emptying_probability, forced_torsion_contrast, HeuristicConfig};
use dsieve_core::jacobian::{cantor_add, JacobianGroup};
use dsieve_core::localsol::{local_solubility, Place, ZeroDimScheme};
use dsieve_core::places::{coprime_chain, verify_chain};
use dsieve_core::poly::{FPoly, IntPoly};
use dsieve_core::sieve::{hasse_counterexample_certify, hypex_scan, torsion_packet_certify,
                         MordellWeilInput};
use dsieve_core::{Error, DEFAULT_BUDGET};

struct Criterion {
    name: &'static str,
    budget: Duration,
    started: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str, budget: Duration) -> Criterion {
        Criterion {
            name,
            budget,
            started: Instant::now(),
            failures: vec![],
        }
    }

    fn check(&mut self, what: &str, ok: bool, detail: String) {
        if !ok {
            self.failures.push(format!("{what}: {detail}"));
        }
    }

    fn finish(mut self) {
        let elapsed = self.started.elapsed();
        if elapsed > self.budget {
            self.failures.push(format!(
                "runtime {elapsed:?} exceeds the stated budget {:?}",
                self.budget
            ));
        }
        if self.failures.is_empty() {
            println!("acceptance {}: PASS ({} ms)", self.name, elapsed.as_millis());
        } else {
            println!("acceptance {}: FAIL ({} ms)", self.name, elapsed.as_millis());
            for f in &self.failures {
                println!("  - {f}");
            }
            panic!(
                "acceptance {} failed:\n{}",
                self.name,
                self.failures.join("\n")
            );
        }
    }
}

fn index2_model() -> HyperellipticModel {
    HyperellipticModel::new(
        IntPoly::from_i64(&[14, 14, 7, 0, 14, 0, 7]),
        Base::Rational,
        Some("index2".into()),
    )
    .unwrap()
}

fn brodd_parts() -> (ZeroDimScheme, IntPoly) {
    (
        ZeroDimScheme::with_factors(vec![
            IntPoly::from_i64(&[3, 0, 1]),
            IntPoly::from_i64(&[-19, 0, 0, 1]),
        ])
        .unwrap(),
        IntPoly::from_i64(&[2, 2, 0, 2]),
    )
}

fn e67a1() -> EllipticModel {
    EllipticModel::new(
        [0, 1, 1, -12, -21].map(BigInt::from),
        Base::Rational,
        Some("67a1".into()),
    )
    .unwrap()
}

#[test]
fn criterion_01_index2_jacobian_orders() {
    let mut c = Criterion::new("criterion 1 (index2 Jacobian orders)", Duration::from_secs(1));
    let m = CurveModel::Hyperelliptic(index2_model());
    let mut got = vec![];
    for v in [3u64, 5, 17] {
        let (_, reduced) = good_reduction(&m, v).unwrap();
        let l = lpolynomial(&reduced.unwrap(), DEFAULT_BUDGET).unwrap();
        got.push((v, l.order().to_string()));
    }
    c.check("order at v = 3", got[0].1 == "9", format!("computed {}", got[0].1));
    c.check("order at v = 5", got[1].1 == "25", format!("computed {}", got[1].1));
    c.check(
        "order at v = 17 equals the stated 343",
        got[2].1 == "343",
        format!(
            "computed {} by exhaustive counting (N1 = 16, N2 = 320, L(1) = 271), \
             cross-checked by an independent pair-loop oracle; 343 is the order of the \
             UNTWISTED sextic y^2 = x^6+2x^4+x^2+2x+2 (the stated curve is its quadratic \
             twist by 7, and L_twist(1) = L(-1) = 271 exactly); the stated value is a \
             transcription slip in the source example",
            got[2].1
        ),
    );
    // supporting computation for the analysis above: the untwisted model
    let untw = CurveModel::Hyperelliptic(
        HyperellipticModel::new(IntPoly::from_i64(&[2, 2, 1, 0, 2, 0, 1]), Base::Rational, None)
            .unwrap(),
    );
    let (_, reduced) = good_reduction(&untw, 17).unwrap();
    let l_untw = lpolynomial(&reduced.unwrap(), DEFAULT_BUDGET).unwrap();
    c.check(
        "untwisted model order at 17 is 343 (locating the slip)",
        l_untw.order() == BigUint::from(343u32),
        format!("computed {}", l_untw.order()),
    );
    c.finish();
}

#[test]
fn criterion_02_hypex_scan_range_2_20() {
    let mut c = Criterion::new("criterion 2 (no-linear-factor scan)", Duration::from_secs(1));
    let mw = MordellWeilInput::trivial("external 2-descent", true);
    let report = hypex_scan(&index2_model(), &mw, 2, 20, DEFAULT_BUDGET).unwrap();
    let hits: Vec<u64> = report.places.iter().filter(|r| r.hit).map(|r| r.v).collect();
    c.check(
        "hits exactly {3, 5, 17}",
        hits == vec![3, 5, 17],
        format!(
            "computed hits {hits:?}: the no-linear-factor condition also holds at 11, 13, 19 \
             (verified by exhaustive root search and an independent oracle), as the scan's \
             own contract requires a hit at every such good place; the source example lists \
             3, 5, 17 'and possibly infinitely many other primes'"
        ),
    );
    let rad_at = |v: u64| -> Option<Vec<u64>> {
        report
            .claims
            .iter()
            .find(|cl| cl.statement.contains(&format!("at v = {v}")))
            .map(|cl| cl.radical_primes.clone())
    };
    c.check(
        "radical primes {3} at v = 3",
        rad_at(3) == Some(vec![3]),
        format!("{:?}", rad_at(3)),
    );
    c.check(
        "radical primes {5} at v = 5",
        rad_at(5) == Some(vec![5]),
        format!("{:?}", rad_at(5)),
    );
    c.check(
        "radical primes {7} at v = 17",
        rad_at(17) == Some(vec![7]),
        format!(
            "computed {:?}: #J(F_17) = 271 (prime) for the stated twisted curve, so the \
             radical is {{271}}; the stated {{7}} descends from the 343 erratum (see \
             criterion 1)",
            rad_at(17)
        ),
    );
    c.finish();
}

#[test]
fn criterion_03_f3_elliptic_counts_and_ordinarity() {
    let mut c = Criterion::new("criterion 3 (F_3 curves)", Duration::from_secs(1));
    let f3 = FieldCtx::prime(3).unwrap();
    let e = FPoly::from_ints(&f3, &[2, -1, 0, 1]);
    let n = count_points_fpoly(&e, &f3, DEFAULT_BUDGET).unwrap();
    c.check("#E(F_3) = 1 for y^2 = x^3 - x + 2", n == 1, format!("computed {n}"));
    let hyper = |f: &[i64]| {
        CurveModel::Hyperelliptic(
            HyperellipticModel::new(IntPoly::from_i64(f), Base::Finite { p: 3, n: 1 }, None)
                .unwrap(),
        )
    };
    let ss = is_ordinary(&hyper(&[-1, 1, 0, -1]), DEFAULT_BUDGET).unwrap();
    c.check(
        "y^2 = -x^3 + x - 1 is supersingular",
        !ss,
        format!("is_ordinary = {ss}"),
    );
    let ord = is_ordinary(&hyper(&[-1, 0, 1, -1]), DEFAULT_BUDGET).unwrap();
    c.check(
        "y^2 = -x^3 + x^2 - 1 is ordinary",
        ord,
        format!("is_ordinary = {ord}"),
    );
    c.finish();
}

#[test]
fn criterion_04_c0_count_and_lpolynomial() {
    let mut c = Criterion::new("criterion 4 (C0 L-polynomial)", Duration::from_secs(5));
    // independent oracle first: pair-loop counts over F_3 and F_9
    let oracle = |n: usize| -> u64 {
        let ctx = FieldCtx::extension(3, n).unwrap();
        let f = FPoly::from_ints(&ctx, &[-1, 0, 1, 0, 0, 0, -1]);
        let mut count = 0u64;
        for x in ctx.iter_elems() {
            let fx = f.eval(&x, &ctx);
            for y in ctx.iter_elems() {
                if ctx.square(&y) == fx {
                    count += 1;
                }
            }
        }
        // even degree: two points at infinity iff lc is a square
        count
            + if ctx.is_square(&ctx.from_i64(-1)).unwrap() {
                2
            } else {
                0
            }
    };
    let n1 = oracle(1);
    let n2 = oracle(2);
    c.check("oracle N1 = 0", n1 == 0, format!("{n1}"));
    let l = LPolynomial::from_counts(3, 2, &[n1, n2]).unwrap();
    let expected: Vec<BigInt> = [1i64, -4, 9, -12, 9].map(BigInt::from).to_vec();
    c.check(
        "L = (1 - T + 3T^2)(1 - 3T + 3T^2)",
        l.coeffs == expected,
        format!("computed {:?}", l.coeffs),
    );
    // and the production counting path agrees with the oracle
    let c0 = CurveModel::Hyperelliptic(
        HyperellipticModel::new(
            IntPoly::from_i64(&[-1, 0, 1, 0, 0, 0, -1]),
            Base::Finite { p: 3, n: 1 },
            None,
        )
        .unwrap(),
    );
    let fast_n1 = count_points(&c0, DEFAULT_BUDGET).unwrap();
    c.check("production N1 agrees", fast_n1 == n1, format!("{fast_n1} vs {n1}"));
    c.finish();
}

#[test]
fn criterion_05_threshold_scan_c0() {
    let mut c = Criterion::new("criterion 5 (threshold scan)", Duration::from_secs(1));
    let f3 = FieldCtx::prime(3).unwrap();
    let f = FPoly::from_ints(&f3, &[-1, 0, 1, 0, 0, 0, -1]);
    let setup = ConstantCurveSetup::new(f, f3, 2, DEFAULT_BUDGET).unwrap();
    // orders 3, 105, 1008 via resultants, cross-checked against the
    // elliptic factor orders 1*3, 15*7, 36*28
    let orders: Vec<BigUint> = (1..=3).map(|n| setup.lpoly.jacobian_order(n)).collect();
    c.check(
        "orders (3, 105, 1008)",
        orders == vec![BigUint::from(3u32), BigUint::from(105u32), BigUint::from(1008u32)],
        format!("computed {orders:?}"),
    );
    let report = threshold_scan(&setup, 3);
    let rs: Vec<u32> = report.rows.iter().map(|r| r.r_n).collect();
    c.check("(r1, r2, r3) = (0, 0, 4)", rs == vec![0, 0, 4], format!("computed {rs:?}"));
    c.finish();
}

#[test]
fn criterion_06_dm_emptiness() {
    let mut c = Criterion::new("criterion 6 (D_m affine emptiness)", Duration::from_secs(5));
    for m in 1..=3u32 {
        let r = dm_affine_check(m, true).unwrap();
        c.check(
            &format!("m = {m} algebraic certificate gives 0"),
            r.affine_points == 0,
            format!("{}", r.affine_points),
        );
        c.check(
            &format!("m = {m} brute force gives 0"),
            r.brute_force_count == Some(0),
            format!("{:?}", r.brute_force_count),
        );
    }
    c.finish();
}

#[test]
fn criterion_07_hasse_certificate_and_scan() {
    let mut c = Criterion::new("criterion 7 (Hasse counterexample)", Duration::from_secs(30));
    let cert = hasse_counterexample_certify(&BigInt::from(19)).unwrap();
    c.check("certificate passes", cert.pass, format!("failures {:?}", cert.failures));
    c.check(
        "no rational root",
        cert.rational_roots.is_empty(),
        format!("{:?}", cert.rational_roots),
    );
    // independent brute scan at every p <= 10^4 agrees (certificate says
    // soluble everywhere)
    let (scheme, _) = brodd_parts();
    let mut bad = None;
    for p in primes_up_to(10_000) {
        if !local_solubility(&scheme, Place::Finite(p)).unwrap() {
            bad = Some(p);
            break;
        }
    }
    c.check(
        "brute-force scan soluble at every p <= 10^4",
        bad.is_none(),
        format!("insoluble at {bad:?}"),
    );
    c.check(
        "soluble at the real place",
        local_solubility(&scheme, Place::Real).unwrap(),
        String::new(),
    );
    c.finish();
}

#[test]
fn criterion_08_torsion_packet_certificate() {
    let mut c = Criterion::new("criterion 8 (torsion packet)", Duration::from_secs(30));
    let (packet, g) = brodd_parts();
    let report = torsion_packet_certify(&packet, &g, 100).unwrap();
    c.check("certificate passes", report.pass, format!("{:?}", report.claims));
    let claim_ok = report
        .claims
        .iter()
        .any(|cl| cl.statement.contains("(Br C)[2^perp] does not obstruct"));
    c.check(
        "claim '(Br C)[2^perp] does not obstruct' emitted",
        claim_ok,
        format!("claims: {:?}", report.claims.iter().map(|x| &x.statement).collect::<Vec<_>>()),
    );
    c.check(
        "claim carries its assumption ledger",
        report.claims.iter().all(|cl| {
            // the special-shape certificate needs no extra assumptions
            cl.assumptions_used.is_empty()
        }),
        "expected an empty assumption list for the fully certified shape".into(),
    );
    c.finish();
}

#[test]
fn criterion_09_coprime_chain() {
    let mut c = Criterion::new("criterion 9 (coprime chain)", Duration::from_secs(60));
    let e = e67a1();
    let state = coprime_chain(&e, 17, 10_000, 5, DEFAULT_BUDGET).unwrap();
    c.check(
        "chain length >= 5",
        state.chain.len() >= 5,
        format!("length {}", state.chain.len()),
    );
    let verified = verify_chain(&e, &state, DEFAULT_BUDGET);
    c.check(
        "re-verification (pairwise gcd 1, inertness, Hasse bounds, recounts)",
        verified.is_ok(),
        format!("{verified:?}"),
    );
    c.finish();
}

#[test]
fn criterion_10_property_suites() {
    let mut c = Criterion::new("criterion 10 (property suites)", Duration::from_secs(120));

    // --- Cantor group axioms on 10^3 random reduced-divisor triples ---
    // The stated F_7 instance y^2 = x^5 + x + 1 is singular there:
    // x^5+x+1 = (x-2)(x-4)^2(x^2+3x+5) mod 7. The artifact must reject it,
    // and the axiom suite runs on the squarefree substitute x^5 + 2x + 1.
    let f7 = FieldCtx::prime(7).unwrap();
    let stated = FPoly::from_ints(&f7, &[1, 1, 0, 0, 0, 1]);
    let rejected = matches!(
        JacobianGroup::new(f7.clone(), stated),
        Err(Error::NotSquarefree)
    );
    c.check(
        "stated F_7 instance is rejected as singular (documented defect)",
        rejected,
        "expected NotSquarefree".into(),
    );
    println!(
        "  note: y^2 = x^5+x+1 has a double root at x = 4 mod 7; axioms run on \
         y^2 = x^5+2x+1 over F_7 instead (see the repository notes)"
    );
    let suites = [
        (JacobianGroup::new(f7, FPoly::from_ints(&FieldCtx::prime(7).unwrap(), &[1, 2, 0, 0, 0, 1])).unwrap(), 101u64),
        (
            JacobianGroup::new(
                FieldCtx::prime(11).unwrap(),
                FPoly::from_ints(&FieldCtx::prime(11).unwrap(), &[1, 1, 0, 0, 0, 1]),
            )
            .unwrap(),
            102,
        ),
    ];
    for (jac, seed) in suites {
        let ctx = &jac.ctx;
        let mut pts = vec![];
        for x in ctx.iter_elems() {
            let fx = jac.f.eval(&x, ctx);
            for y in ctx.iter_elems() {
                if ctx.square(&y) == fx {
                    pts.push((x.clone(), y));
                }
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let random_divisor = |rng: &mut rand_chacha::ChaCha8Rng| {
            let a = &pts[rng.random_range(0..pts.len())];
            let b = &pts[rng.random_range(0..pts.len())];
            let da = jac.embed_point(&a.0, &a.1).unwrap();
            let db = jac.embed_point(&b.0, &b.1).unwrap();
            jac.add(&da, &db)
        };
        let p = ctx.characteristic();
        let mut bad = 0u32;
        for _ in 0..1000 {
            let a = random_divisor(&mut rng);
            let b = random_divisor(&mut rng);
            let d = random_divisor(&mut rng);
            let assoc = jac.add(&jac.add(&a, &b), &d) == jac.add(&a, &jac.add(&b, &d));
            let comm = jac.add(&a, &b) == jac.add(&b, &a);
            let ident = cantor_add(&jac, &a, &jac.identity()).unwrap() == a;
            let inv = jac.is_identity(&jac.add(&a, &jac.neg(&a)));
            if !(assoc && comm && ident && inv) {
                bad += 1;
            }
        }
        c.check(
            &format!("Cantor axioms on 1000 random triples over F_{p}"),
            bad == 0,
            format!("{bad} failing triples"),
        );

        // Lagrange on sampled divisors
        let l = dsieve_core::curves::lpolynomial_fpoly(&jac.f, ctx, DEFAULT_BUDGET).unwrap();
        let n = l.order();
        let lagrange_ok = (0..20).all(|_| {
            let d = random_divisor(&mut rng);
            jac.is_identity(&scalar_mul(&jac, &BigInt::from(n.clone()), &d))
        });
        c.check(
            &format!("Lagrange N D = 0 over F_{p}"),
            lagrange_ok,
            "a sampled divisor survived multiplication by the group order".into(),
        );

        // split projections on Jacobian samples
        let info = AmbientGroupInfo::new(n.clone(), &BigUint::from(2u32)).unwrap();
        let split_ok = (0..20).all(|_| {
            let d = random_divisor(&mut rng);
            check_split_properties(&jac, &d, &info).is_ok()
        });
        c.check(
            &format!("split projections on J(F_{p}) samples"),
            split_ok,
            "reconstruction/purity/idempotence failed".into(),
        );
    }

    // --- split projections on the cyclic benchmark orders ---
    for (n, d) in [(12u64, 2u64), (343, 7), (1008, 2), (1008, 6)] {
        let g = CyclicGroup::new(n);
        let info = AmbientGroupInfo::new(BigUint::from(n), &BigUint::from(d)).unwrap();
        let ok = (0..n).step_by(1 + n as usize / 50).all(|v| {
            check_split_properties(&g, &g.elem(v), &info).is_ok()
        });
        c.check(
            &format!("split projections on Z/{n} with d = {d}"),
            ok,
            "failed".into(),
        );
    }

    // --- L-polynomial functional equation across the corpus ---
    let mut corpus: Vec<LPolynomial> = vec![];
    let index2 = CurveModel::Hyperelliptic(index2_model());
    for v in [3u64, 5, 11, 13, 17, 19] {
        let (_, reduced) = good_reduction(&index2, v).unwrap();
        corpus.push(lpolynomial(&reduced.unwrap(), DEFAULT_BUDGET).unwrap());
    }
    let (packet, g) = brodd_parts();
    let brodd = CurveModel::Hyperelliptic(
        HyperellipticModel::new(packet.poly.mul(&g), Base::Rational, None).unwrap(),
    );
    for v in primes_up_to(30) {
        if let Ok((info, Some(reduced))) = good_reduction(&brodd, v) {
            if info.good {
                corpus.push(lpolynomial(&reduced, DEFAULT_BUDGET).unwrap());
            }
        }
    }
    let e = CurveModel::Elliptic(e67a1());
    for v in [3u64, 5, 7, 11, 13, 17] {
        let (_, reduced) = good_reduction(&e, v).unwrap();
        corpus.push(lpolynomial(&reduced.unwrap(), DEFAULT_BUDGET).unwrap());
    }
    let all_ok = corpus.iter().all(|l| l.check_invariants().is_ok());
    c.check(
        &format!("functional equation and Weil bounds on {} corpus L-polynomials", corpus.len()),
        all_ok,
        "an invariant failed".into(),
    );

    // --- analytic vs sampling agreement at fixed seeds ---
    for (d, seed) in [(1u64, 2024u64), (2, 2025)] {
        let cfg = HeuristicConfig {
            d,
            bound: 40,
            trials: 3000,
            seed,
            budget: DEFAULT_BUDGET,
        };
        let curve = emptying_probability(&index2, 1, &cfg).unwrap();
        let ok = curve.rows.iter().all(|r| {
            (r.sampled - r.analytic).abs() <= r.half_width_3sigma + 1e-9
        });
        c.check(
            &format!("analytic vs sampling within 3 sigma (d = {d})"),
            ok,
            "a row disagrees beyond 3 sigma".into(),
        );
    }
    c.finish();
}

#[test]
fn criterion_11_forced_torsion_contrast() {
    let mut c = Criterion::new("criterion 11 (forced-torsion contrast)", Duration::from_secs(60));
    let (packet, g) = brodd_parts();
    let cfg = HeuristicConfig {
        d: 2,
        bound: 60,
        trials: 10_000,
        seed: 424242,
        budget: DEFAULT_BUDGET,
    };
    let report = forced_torsion_contrast(&packet, &g, &cfg).unwrap();
    c.check("packet certificate passed", report.certificate_pass, String::new());
    let last = report.rows.last().expect("nonempty");
    c.check(
        "random-model emptying >= 0.99 at the largest S",
        last.random_model_emptying >= 0.99,
        format!("{}", last.random_model_emptying),
    );
    c.check(
        "actual-model emptying exactly 0 at every S",
        report.rows.iter().all(|r| r.actual_model_emptying == 0.0),
        "a row was nonzero".into(),
    );
    // determinism of the seeded Monte Carlo side
    let again = forced_torsion_contrast(&packet, &g, &cfg).unwrap();
    c.check(
        "seeded run is deterministic",
        serde_json::to_string(&report).unwrap() == serde_json::to_string(&again).unwrap(),
        "reports differ".into(),
    );
    c.finish();
}

// Lagrange on an elliptic curve sample, part of the criterion-10 family but
// cheap enough to keep separate for clearer failure attribution.
#[test]
fn criterion_10_supplement_elliptic_lagrange() {
    let e = EllipticModel::new(
        [0, 0, 0, -1, 0].map(BigInt::from),
        Base::Finite { p: 5, n: 1 },
        None,
    )
    .unwrap();
    let g = dsieve_core::elliptic::EllipticGroup::new(&e).unwrap();
    let pts = g.points(DEFAULT_BUDGET).unwrap();
    let n = pts.len() as u64;
    let fact = factor(&BigUint::from(n)).unwrap();
    for p in &pts {
        assert!(g.is_identity(&scalar_mul(&g, &BigInt::from(n), p)));
        let o = element_order(&g, p, &fact).unwrap();
        assert!((BigUint::from(n) % o).is_zero());
    }
}

use num_traits::Zero;
