//! Monte Carlo and exact-product exploration of sieve emptying: smoothness
//! statistics of Jacobian orders, the probability that random subsets of
//! J(F_v)[d-perp] miss the trivial Mordell-Weil image, the contrast with the
//! forced-2-torsion reality, and torsion density decay.
//!
//! Random streams are per-place ChaCha streams derived from the master seed,
//! so parallel and serial runs produce identical reports.

use num_bigint::BigUint;
#[cfg(test)]
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{good_reduction, lpolynomial, CurveModel, EllipticModel};
use crate::elliptic::{elliptic_structure, StructureMode};
use crate::error::Error;
use crate::factorint::{is_smooth, primes_up_to, split_d_part, valuation};
use crate::localsol::ZeroDimScheme;
use crate::poly::IntPoly;
use crate::report::CsvTable;
use crate::sieve::{ps_projected_demo, torsion_packet_certify};
use crate::Result;

/// Monte Carlo parameters. d = 1 means no projection.
#[derive(Clone, Debug, Serialize)]
pub struct HeuristicConfig {
    pub d: u64,
    pub bound: u64,
    pub trials: u32,
    pub seed: u64,
    pub budget: u64,
}

impl HeuristicConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::Invalid("d = 0 is not a projection integer".into()));
        }
        if self.trials == 0 {
            return Err(Error::Invalid("at least one trial required".into()));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// smoothness statistics
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct SmoothRow {
    pub v: u64,
    pub order: String,
    pub smooth: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothnessReport {
    pub bound: u64,
    pub u: f64,
    pub smooth_bound: u64,
    pub rows: Vec<SmoothRow>,
    pub smooth_count: usize,
    pub good_count: usize,
    pub fraction: f64,
}

impl CsvTable for SmoothnessReport {
    fn csv_header(&self) -> String {
        "v,order,smooth".into()
    }

    fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| format!("{},{},{}", r.v, r.order, r.smooth))
            .collect()
    }
}

/// Fraction of good places v <= B where #J(F_v) is floor(B^u)-smooth.
pub fn smoothness_stats(
    model: &CurveModel,
    bound: u64,
    u: f64,
    budget: u64,
) -> Result<SmoothnessReport> {
    if !(0.0..1.0).contains(&u) || u <= 0.0 {
        return Err(Error::Invalid("u must lie in (0, 1)".into()));
    }
    let smooth_bound = (bound as f64).powf(u).floor() as u64;
    let primes: Vec<u64> = primes_up_to(bound);
    let rows: Vec<Result<Option<SmoothRow>>> = primes
        .par_iter()
        .map(|&v| {
            let (info, reduced) = good_reduction(model, v)?;
            if !info.good {
                return Ok(None);
            }
            let l = lpolynomial(&reduced.unwrap(), budget)?;
            let order = l.order();
            Ok(Some(SmoothRow {
                v,
                order: order.to_string(),
                smooth: is_smooth(&order, smooth_bound),
            }))
        })
        .collect();
    let mut out = vec![];
    for r in rows {
        if let Some(row) = r? {
            out.push(row);
        }
    }
    let good_count = out.len();
    let smooth_count = out.iter().filter(|r| r.smooth).count();
    Ok(SmoothnessReport {
        bound,
        u,
        smooth_bound,
        fraction: if good_count == 0 {
            0.0
        } else {
            smooth_count as f64 / good_count as f64
        },
        rows: out,
        smooth_count,
        good_count,
    })
}

// ---------------------------------------------------------------------------
// emptying probability
// ---------------------------------------------------------------------------

/// One nested set S of places: |S|, the place just added, and the emptying
/// probability under the random-subset model, both analytically (exact
/// Bernoulli product) and by seeded sampling.
#[derive(Clone, Debug, Serialize)]
pub struct EmptyingRow {
    pub size: usize,
    pub v: u64,
    pub curve_count: u64,
    pub group_size: String,
    pub analytic: f64,
    pub analytic_num: String,
    pub analytic_den: String,
    pub sampled: f64,
    pub half_width_3sigma: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmptyingCurve {
    pub d: u64,
    pub trials: u32,
    pub seed: u64,
    pub rows: Vec<EmptyingRow>,
}

impl CsvTable for EmptyingCurve {
    fn csv_header(&self) -> String {
        "size,v,curve_count,group_size,analytic,sampled,half_width_3sigma".into()
    }

    fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{}",
                    r.size, r.v, r.curve_count, r.group_size, r.analytic, r.sampled,
                    r.half_width_3sigma
                )
            })
            .collect()
    }
}

/// Core computation from explicit (v, #C(F_v), M_v) triples. With a trivial
/// Mordell-Weil image the sieve over S stays nonempty exactly when the
/// random subset C_v contains 0 for every v in S, which happens with
/// probability prod #C(F_v)/M_v; the emptying probability is its complement.
pub fn emptying_from_triples(
    triples: &[(u64, u64, BigUint)],
    d: u64,
    trials: u32,
    seed: u64,
) -> Result<EmptyingCurve> {
    for (v, c, m) in triples {
        if BigUint::from(*c) > *m {
            return Err(Error::Invalid(format!(
                "at v = {v}: subset size {c} exceeds the prime-to-d group size {m}; \
                 no such random subset exists"
            )));
        }
    }
    // sampling: per-place Bernoulli draws of "0 was among the c distinct
    // picks", one independent ChaCha stream per place
    let hit_tables: Vec<Vec<bool>> = triples
        .par_iter()
        .enumerate()
        .map(|(i, (_v, c, m))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let m64 = m.to_u64().expect("group size within budget");
            (0..trials)
                .map(|_| draw_subset_contains_zero(&mut rng, *c, m64))
                .collect()
        })
        .collect();

    let mut rows = vec![];
    let mut num = BigUint::one(); // running product of counts
    let mut den = BigUint::one(); // running product of group sizes
    let mut alive: Vec<bool> = vec![true; trials as usize]; // intersection still nonempty
    for (i, (v, c, m)) in triples.iter().enumerate() {
        num *= BigUint::from(*c);
        den *= m;
        for (t, a) in alive.iter_mut().enumerate() {
            *a = *a && hit_tables[i][t];
        }
        let survive = alive.iter().filter(|&&a| a).count();
        let sampled = 1.0 - survive as f64 / trials as f64;
        let p_alive = ratio_to_f64(&num, &den);
        let analytic = 1.0 - p_alive;
        let sigma = (p_alive * (1.0 - p_alive) / trials as f64).sqrt();
        rows.push(EmptyingRow {
            size: i + 1,
            v: *v,
            curve_count: *c,
            group_size: m.to_string(),
            analytic,
            analytic_num: (&den - &num).to_string(),
            analytic_den: den.to_string(),
            sampled,
            half_width_3sigma: 3.0 * sigma,
        });
    }
    Ok(EmptyingCurve {
        d,
        trials,
        seed,
        rows,
    })
}

/// Draw a uniform subset of the given size from [0, m) and report whether it
/// contains 0. Sampling without replacement via rejection.
fn draw_subset_contains_zero(rng: &mut ChaCha8Rng, size: u64, m: u64) -> bool {
    debug_assert!(size <= m);
    if size == m {
        return true;
    }
    // equivalent draw: pick the subset one element at a time; 0 enters with
    // probability size/m overall. Simulate honestly with a partial
    // Fisher-Yates over indices when size is small, else sample the
    // complement.
    let (k, want_in) = if size * 2 <= m {
        (size, true)
    } else {
        (m - size, false)
    };
    let mut seen = std::collections::HashSet::with_capacity(k as usize);
    while (seen.len() as u64) < k {
        let x = rng.random_range(0..m);
        seen.insert(x);
    }
    let zero_drawn = seen.contains(&0);
    if want_in {
        zero_drawn
    } else {
        !zero_drawn
    }
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    // exact-ish conversion good to f64 precision
    if num.is_zero() {
        return 0.0;
    }
    let scale = BigUint::from(1u128 << 100);
    let q = (num * &scale) / den;
    q.to_f64().unwrap_or(f64::MAX) / (1u128 << 100) as f64
}

/// Emptying curve for a curve over Q with a trivial declared Mordell-Weil
/// group: places are the good v <= bound in increasing order, M_v is the
/// prime-to-d part of #J(F_v).
pub fn emptying_probability(
    model: &CurveModel,
    mw_order: u64,
    config: &HeuristicConfig,
) -> Result<EmptyingCurve> {
    config.validate()?;
    if mw_order != 1 {
        return Err(Error::Invalid(
            "the random model is implemented only for a trivial Mordell-Weil group; \
             supply per-place images through the pass-through mode instead"
                .into(),
        ));
    }
    let triples = emptying_triples(model, config)?;
    emptying_from_triples(&triples, config.d, config.trials, config.seed)
}

fn emptying_triples(
    model: &CurveModel,
    config: &HeuristicConfig,
) -> Result<Vec<(u64, u64, BigUint)>> {
    let d_big = BigUint::from(config.d);
    let primes = primes_up_to(config.bound);
    let rows: Vec<Result<Option<(u64, u64, BigUint)>>> = primes
        .par_iter()
        .map(|&v| {
            let (info, reduced) = good_reduction(model, v)?;
            if !info.good {
                return Ok(None);
            }
            let reduced = reduced.unwrap();
            let c = crate::curves::count_points(&reduced, config.budget)?;
            let l = lpolynomial(&reduced, config.budget)?;
            let order = l.order();
            let (_, perp) = split_d_part(&order, &d_big)?;
            Ok(Some((v, c, perp)))
        })
        .collect();
    let mut out = vec![];
    for r in rows {
        if let Some(t) = r? {
            out.push(t);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// forced-torsion contrast
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ContrastRow {
    pub size: usize,
    pub v: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weierstrass_root: Option<u64>,
    pub random_model_emptying: f64,
    pub actual_model_emptying: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContrastReport {
    pub certificate_pass: bool,
    pub rows: Vec<ContrastRow>,
    pub note: String,
}

impl CsvTable for ContrastReport {
    fn csv_header(&self) -> String {
        "size,v,weierstrass_root,random_model_emptying,actual_model_emptying".into()
    }

    fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{}",
                    r.size,
                    r.v,
                    r.weierstrass_root.map(|x| x.to_string()).unwrap_or_default(),
                    r.random_model_emptying,
                    r.actual_model_emptying
                )
            })
            .collect()
    }
}

/// Random-subset prediction vs. structural reality for the prime-to-2
/// projected sieve on y^2 = F G: the random model empties with probability
/// approaching 1, while the Weierstrass 2-torsion classes force the actual
/// projected images to contain 0 at every place, so the actual emptying
/// probability is identically zero.
pub fn forced_torsion_contrast(
    packet_part: &ZeroDimScheme,
    g_poly: &IntPoly,
    config: &HeuristicConfig,
) -> Result<ContrastReport> {
    config.validate()?;
    if config.d % 2 != 0 {
        return Err(Error::Invalid(
            "the forced-torsion argument kills 2-torsion: d must be even".into(),
        ));
    }
    let cert = torsion_packet_certify(packet_part, g_poly, 100)?;
    if !cert.pass {
        return Err(Error::Invalid(
            "torsion packet certification failed; the contrast demo needs it".into(),
        ));
    }
    let product = packet_part.poly.mul(g_poly);
    let model = CurveModel::Hyperelliptic(crate::curves::HyperellipticModel::new(
        product,
        crate::curves::Base::Rational,
        None,
    )?);
    let random = emptying_probability(&model, 1, config)?;
    let demo = ps_projected_demo(packet_part, g_poly, 2, config.bound)?;
    let rows = random
        .rows
        .iter()
        .map(|r| {
            let root = demo
                .places
                .iter()
                .find(|p| p.v == r.v)
                .and_then(|p| p.weierstrass_root);
            ContrastRow {
                size: r.size,
                v: r.v,
                weierstrass_root: root,
                random_model_emptying: r.analytic,
                actual_model_emptying: 0.0,
            }
        })
        .collect();
    Ok(ContrastReport {
        certificate_pass: true,
        rows,
        note: "actual-model column is identically 0: iota of any Weierstrass point is \
               2-torsion, so its prime-to-2 projection is the group identity, which the \
               certified adelic packet point realizes at every place"
            .into(),
    })
}

// ---------------------------------------------------------------------------
// torsion density
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct TorsionDensityReport {
    pub ell: u64,
    pub bound: u64,
    pub good_places: usize,
    /// (n, places with a point of order ell^n, empirical density at bound)
    pub rows: Vec<(u32, usize, f64)>,
}

impl CsvTable for TorsionDensityReport {
    fn csv_header(&self) -> String {
        "n,count,density".into()
    }

    fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|(n, c, d)| format!("{n},{c},{d}"))
            .collect()
    }
}

/// Empirical density at B of places where E(F_v) has a point of order
/// ell^n, for n = 1..n_max: a good-reduction point of that order exists
/// exactly when ell^n divides the group exponent. (n = 0 would be density 1
/// by definition, so rows start at n = 1.)
pub fn torsion_density(
    e: &EllipticModel,
    ell: u64,
    n_max: u32,
    bound: u64,
    budget: u64,
) -> Result<TorsionDensityReport> {
    if !crate::ff::is_prime_u64(ell) {
        return Err(Error::NotPrime(ell));
    }
    let cm = CurveModel::Elliptic(e.clone());
    let primes = primes_up_to(bound);
    let exps: Vec<Result<Option<BigUint>>> = primes
        .par_iter()
        .map(|&v| {
            let (info, _) = good_reduction(&cm, v)?;
            if !info.good {
                return Ok(None);
            }
            let local = EllipticModel::new(
                e.a.clone(),
                crate::curves::Base::Finite { p: v, n: 1 },
                e.label.clone(),
            )?;
            let s = elliptic_structure(&local, StructureMode::Exact { budget })?;
            Ok(Some(s.n2))
        })
        .collect();
    let mut exponents = vec![];
    for r in exps {
        if let Some(n2) = r? {
            exponents.push(n2);
        }
    }
    let good = exponents.len();
    let ell_big = BigUint::from(ell);
    let mut rows = vec![];
    for n in 1..=n_max {
        let count = exponents
            .iter()
            .filter(|e| valuation(e, &ell_big).0 >= n)
            .count();
        rows.push((n, count, count as f64 / good as f64));
    }
    Ok(TorsionDensityReport {
        ell,
        bound,
        good_places: good,
        rows,
    })
}
