//! dsieve: Jacobian orders, local obstruction sieves, coprime place chains
//! and sieve-emptying heuristics for curves over Q and finite fields.
//!
//! Every JSON report embeds a manifest (subcommand, resolved config, seed,
//! version, input hashes, wall clock); CSV output prints the tabular rows
//! alone. Exit codes: 0 success, 1 mismatch or assertion failure, 2 input
//! error, 3 budget exceeded.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use dsieve_core::constant::{
    dm_affine_check, factor_split_report, frobenius_iteration_check, prime_to_ell_point_search,
    searchable_odd_model, threshold_scan, ConstantCurveSetup,
};
use dsieve_core::curvefile::parse_curve_spec;
use dsieve_core::curves::{
    count_points_ext, good_reduction, lpolynomial, Base, CurveModel, EllipticModel,
};
use dsieve_core::curvefile::curve_spec_to_text;
use dsieve_core::error::Error as CoreError;
use dsieve_core::ff::FieldCtx;
use dsieve_core::heuristic::{
    emptying_probability, forced_torsion_contrast, smoothness_stats, torsion_density,
    HeuristicConfig,
};
use dsieve_core::localsol::{local_solubility, Place, ZeroDimScheme};
use dsieve_core::places::{coprime_chain, ecount_scan, torsion_bound, verify_chain};
use dsieve_core::poly::{parse_int_poly, FPoly, IntPoly};
use dsieve_core::report::{CsvTable, InputHash, Report, RunManifest};
use dsieve_core::sieve::{
    cover_check, hasse_counterexample_certify, hypex_scan, ps_projected_demo,
    torsion_packet_certify, MordellWeilInput,
};

#[derive(Parser)]
#[command(name = "dsieve", version, about = "curves, Jacobian orders and obstruction sieves")]
struct Cli {
    /// output format for the result
    #[arg(long, global = true, default_value = "json", value_parser = ["json", "csv"])]
    out: String,
    /// master seed for the sampling modes
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// worker threads (results are identical for every value)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// enumeration ceiling on field cardinalities
    #[arg(long, global = true, default_value_t = dsieve_core::DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Point counts, L-polynomials, Jacobian orders and reductions
    Curve {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// Local obstruction conditions and certificates
    Sieve {
        #[command(subcommand)]
        cmd: SieveCmd,
    },
    /// Place scans and coprime order chains
    Search {
        #[command(subcommand)]
        cmd: SearchCmd,
    },
    /// Smoothness, emptying probabilities and torsion densities
    Heuristic {
        #[command(subcommand)]
        cmd: HeuristicCmd,
    },
    /// Constant-curve checks over finite fields
    Constant {
        #[command(subcommand)]
        cmd: ConstantCmd,
    },
    /// Run the built-in example suite against committed expected outputs
    Reproduce {
        /// run only examples whose name contains this substring
        #[arg(long)]
        only: Option<String>,
        /// directory of expected outputs (default: ./expected)
        #[arg(long)]
        expected: Option<PathBuf>,
        /// rewrite the expected files from the current outputs
        #[arg(long)]
        update: bool,
    },
}

#[derive(Subcommand)]
enum CurveCmd {
    /// #C(F_{q^n}), reducing at --place first for curves over Q
    Count {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        place: Option<u64>,
        #[arg(long, default_value_t = 1)]
        ext: usize,
    },
    /// L-polynomial coefficients over the (reduced) base field
    Lpoly {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        place: Option<u64>,
    },
    /// #J(F_{q^n}) from the L-polynomial; --places scans a list
    JacOrder {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, value_delimiter = ',')]
        places: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Good-reduction test at one place
    Reduce {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        place: u64,
    },
}

#[derive(Subcommand)]
enum SieveCmd {
    /// Rank-0 no-linear-factor scan over a prime range
    Hypex {
        #[arg(long)]
        curve: PathBuf,
        /// inclusive range, e.g. 2..20
        #[arg(long)]
        primes: String,
        #[arg(long = "assume-rank0")]
        assume_rank0: bool,
        #[arg(long = "assume-sha")]
        assume_sha: bool,
        #[arg(long, default_value = "declared input")]
        provenance: String,
    },
    /// Inert-fiber cover check at a single place
    Cover {
        #[arg(long)]
        curve: PathBuf,
        /// fiber polynomial above the identity, list or expression
        #[arg(long)]
        fiber: String,
        #[arg(long)]
        place: u64,
        #[arg(long = "assume-rank0")]
        assume_rank0: bool,
        #[arg(long = "assume-sha")]
        assume_sha: bool,
        #[arg(long, default_value = "declared input")]
        provenance: String,
    },
    /// Local solubility of a zero-dimensional scheme
    Local {
        /// polynomial (or ;-separated irreducible factors)
        #[arg(long)]
        poly: String,
        /// a prime, 'real', or 'all<=N'
        #[arg(long)]
        place: String,
    },
    /// Torsion packet certification for y^2 = F G
    Packet {
        /// packet part F: ;-separated irreducible factors
        #[arg(long = "F")]
        f: String,
        #[arg(long = "G")]
        g: String,
        #[arg(long, default_value_t = 100)]
        scan_bound: u64,
    },
    /// Structural prime-to-2 projection rows over a prime range
    ProjectedDemo {
        #[arg(long = "F")]
        f: String,
        #[arg(long = "G")]
        g: String,
        #[arg(long)]
        primes: String,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Greedy pairwise-coprime order chain under inertness
    CoprimeChain {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long = "aux-prime")]
        aux_prime: u64,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        target: usize,
    },
    /// gcd of #E(F_v) over the listed places
    TorsionBound {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, value_delimiter = ',')]
        places: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum HeuristicCmd {
    /// Random-subset emptying probability over nested place sets
    Emptying {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value_t = 1)]
        d: u64,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u32,
    },
    /// Fraction of good places with a floor(B^u)-smooth Jacobian order
    Smooth {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        u: f64,
    },
    /// Density of places where E(F_v) has a point of order ell^n
    TorsionDensity {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        nmax: u32,
        #[arg(long)]
        bound: u64,
    },
    /// Random-model emptying vs the forced-2-torsion reality
    Contrast {
        #[arg(long = "F")]
        f: String,
        #[arg(long = "G")]
        g: String,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u32,
    },
}

#[derive(Subcommand)]
enum ConstantCmd {
    /// ell-valuation sequence with the exact q^n > (2g ell^r)^2 flags
    Threshold {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
    },
    /// Prime-to-ell point search on an odd-degree model over F_{q^n}
    PointSearch {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// transform even-degree models over the smallest extension with a root
        #[arg(long, default_value_t = 6)]
        max_ext: usize,
    },
    /// Affine point count of (x^q - x + 1)(y^q - y - 1) = 1 over F_{3^m}
    Dm {
        #[arg(long)]
        m: u32,
        /// also run the exhaustive recount (automatic for m <= 3)
        #[arg(long)]
        brute: bool,
    },
    /// Elliptic factor split of y^2 = -x^6 + x^2 - 1 over F_3
    Brell,
    /// Finite-level Frobenius iteration on points over F_{p^n}
    Frobenius {
        /// p,n
        #[arg(long)]
        field: String,
        /// file with one point per line: [x coeffs] [y coeffs]
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
}

fn main() {
    let code = match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    };
    std::process::exit(code);
}

fn exit_code(e: &anyhow::Error) -> i32 {
    if let Some(core) = e.downcast_ref::<CoreError>() {
        return match core {
            CoreError::BudgetExceeded { .. } => 3,
            CoreError::Parse { .. }
            | CoreError::Invalid(_)
            | CoreError::NotPrime(_)
            | CoreError::ZeroDegree
            | CoreError::ZeroPolynomial
            | CoreError::CharacteristicTwo
            | CoreError::NotSquarefree
            | CoreError::SingularModel(_)
            | CoreError::EvenDegreeModel
            | CoreError::BadReduction { .. }
            | CoreError::NontrivialMordellWeil => 2,
            CoreError::InvariantViolation(_) | CoreError::Indeterminate(_) => 1,
        };
    }
    if e.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    1
}

struct Ctx {
    out: String,
    seed: u64,
    budget: u64,
    started: Instant,
    hashes: Vec<InputHash>,
}

impl Ctx {
    fn load_curve(&mut self, path: &Path) -> anyhow::Result<CurveModel> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        self.hashes.push(InputHash {
            path: path.display().to_string(),
            sha256: hex_digest(text.as_bytes()),
        });
        Ok(parse_curve_spec(&text)?)
    }

    fn emit<T: serde::Serialize>(
        &self,
        subcommand: &str,
        config: Value,
        result: &T,
        csv: Option<String>,
    ) -> anyhow::Result<i32> {
        match self.out.as_str() {
            "csv" => match csv {
                Some(rows) => {
                    print!("{rows}");
                    Ok(0)
                }
                None => Err(anyhow!(CoreError::Invalid(
                    "this report has no tabular form; use --out json".into()
                ))),
            },
            _ => {
                let manifest = RunManifest {
                    subcommand: subcommand.to_string(),
                    config,
                    seed: Some(self.seed),
                    toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
                    input_hashes: self.hashes.clone(),
                    wall_ms: self.started.elapsed().as_millis(),
                };
                let report = Report {
                    manifest,
                    result: result,
                };
                println!("{}", serde_json::to_string_pretty(&report)?);
                Ok(0)
            }
        }
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_range(s: &str) -> anyhow::Result<(u64, u64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| anyhow!(CoreError::Invalid(format!("expected a..b, got '{s}'"))))?;
    let hi = hi.trim_start_matches('=');
    Ok((lo.parse()?, hi.parse()?))
}

fn parse_factors(s: &str) -> anyhow::Result<ZeroDimScheme> {
    let polys: Vec<IntPoly> = s
        .split(';')
        .map(|t| parse_int_poly(t.trim()))
        .collect::<dsieve_core::Result<_>>()?;
    if polys.len() == 1 {
        Ok(ZeroDimScheme::from_poly(polys.into_iter().next().unwrap())?)
    } else {
        Ok(ZeroDimScheme::with_factors(polys)?)
    }
}

fn require_hyper(model: CurveModel) -> anyhow::Result<dsieve_core::curves::HyperellipticModel> {
    match model {
        CurveModel::Hyperelliptic(h) => Ok(h),
        _ => Err(anyhow!(CoreError::Invalid(
            "this command needs a hyperelliptic model".into()
        ))),
    }
}

fn require_elliptic(model: CurveModel) -> anyhow::Result<EllipticModel> {
    match model {
        CurveModel::Elliptic(e) => Ok(e),
        _ => Err(anyhow!(CoreError::Invalid(
            "this command needs an elliptic model".into()
        ))),
    }
}

fn reduce_if_needed(model: &CurveModel, place: Option<u64>) -> anyhow::Result<CurveModel> {
    match (model.base().is_rational(), place) {
        (true, Some(v)) => {
            let (info, reduced) = good_reduction(model, v)?;
            reduced.ok_or_else(|| {
                anyhow!(CoreError::BadReduction {
                    v,
                    reason: info.reason,
                })
            })
        }
        (true, None) => Err(anyhow!(CoreError::Invalid(
            "curve is over Q; give --place to reduce first".into()
        ))),
        (false, None) => Ok(model.clone()),
        (false, Some(_)) => Err(anyhow!(CoreError::Invalid(
            "curve already has a finite base; --place does not apply".into()
        ))),
    }
}

fn real_main() -> anyhow::Result<i32> {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    let mut ctx = Ctx {
        out: cli.out.clone(),
        seed: cli.seed,
        budget: cli.budget,
        started: Instant::now(),
        hashes: vec![],
    };

    match cli.command {
        Command::Curve { cmd } => run_curve(&mut ctx, cmd),
        Command::Sieve { cmd } => run_sieve(&mut ctx, cmd),
        Command::Search { cmd } => run_search(&mut ctx, cmd),
        Command::Heuristic { cmd } => run_heuristic(&mut ctx, cmd),
        Command::Constant { cmd } => run_constant(&mut ctx, cmd),
        Command::Reproduce {
            only,
            expected,
            update,
        } => run_reproduce(&mut ctx, only, expected, update),
    }
}

fn run_curve(ctx: &mut Ctx, cmd: CurveCmd) -> anyhow::Result<i32> {
    match cmd {
        CurveCmd::Count { curve, place, ext } => {
            let model = ctx.load_curve(&curve)?;
            let reduced = reduce_if_needed(&model, place)?;
            let n = count_points_ext(&reduced, ext, ctx.budget)?;
            let result = json!({ "label": model.label(), "place": place, "ext": ext, "count": n });
            let cfg = json!({ "curve": curve.display().to_string(), "place": place, "ext": ext });
            ctx.emit("curve count", cfg, &result, Some(format!("ext,count\n{ext},{n}\n")))
        }
        CurveCmd::Lpoly { curve, place } => {
            let model = ctx.load_curve(&curve)?;
            let reduced = reduce_if_needed(&model, place)?;
            let l = lpolynomial(&reduced, ctx.budget)?;
            let result = json!({
                "label": model.label(),
                "place": place,
                "q": l.q,
                "genus": l.genus,
                "coefficients": l.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "order": l.order().to_string(),
            });
            let cfg = json!({ "curve": curve.display().to_string(), "place": place });
            ctx.emit("curve lpoly", cfg, &result, None)
        }
        CurveCmd::JacOrder { curve, places, n } => {
            let model = ctx.load_curve(&curve)?;
            let mut rows = vec![];
            if model.base().is_rational() {
                if places.is_empty() {
                    return Err(anyhow!(CoreError::Invalid(
                        "give --places for a curve over Q".into()
                    )));
                }
                for &v in &places {
                    let reduced = reduce_if_needed(&model, Some(v))?;
                    let l = lpolynomial(&reduced, ctx.budget)?;
                    rows.push(json!({ "place": v, "n": n, "order": l.jacobian_order(n).to_string() }));
                }
            } else {
                let l = lpolynomial(&model, ctx.budget)?;
                rows.push(json!({ "n": n, "order": l.jacobian_order(n).to_string() }));
            }
            let csv = {
                let mut s = String::from("place,n,order\n");
                for r in &rows {
                    s.push_str(&format!(
                        "{},{},{}\n",
                        r.get("place").and_then(|v| v.as_u64()).map(|v| v.to_string()).unwrap_or_default(),
                        n,
                        r["order"].as_str().unwrap()
                    ));
                }
                s
            };
            let result = json!({ "label": model.label(), "orders": rows });
            let cfg = json!({ "curve": curve.display().to_string(), "places": places, "n": n });
            ctx.emit("curve jac-order", cfg, &result, Some(csv))
        }
        CurveCmd::Reduce { curve, place } => {
            let model = ctx.load_curve(&curve)?;
            let (info, reduced) = good_reduction(&model, place)?;
            let result = json!({
                "label": model.label(),
                "v": info.v,
                "good": info.good,
                "reason": info.reason,
                "reduced": reduced.map(|m| curve_spec_to_text(&m)),
            });
            let cfg = json!({ "curve": curve.display().to_string(), "place": place });
            ctx.emit("curve reduce", cfg, &result, None)
        }
    }
}

fn run_sieve(ctx: &mut Ctx, cmd: SieveCmd) -> anyhow::Result<i32> {
    match cmd {
        SieveCmd::Hypex {
            curve,
            primes,
            assume_rank0,
            assume_sha,
            provenance,
        } => {
            if !assume_rank0 {
                return Err(anyhow!(CoreError::Invalid(
                    "the scan needs --assume-rank0 (rank and torsion are declared inputs)".into()
                )));
            }
            let model = require_hyper(ctx.load_curve(&curve)?)?;
            let (lo, hi) = parse_range(&primes)?;
            let mw = MordellWeilInput::trivial(&provenance, assume_sha);
            let report = hypex_scan(&model, &mw, lo, hi, ctx.budget)?;
            let csv = report.to_csv();
            let cfg = json!({
                "curve": curve.display().to_string(), "primes": primes,
                "assume_rank0": assume_rank0, "assume_sha": assume_sha,
            });
            ctx.emit("sieve hypex", cfg, &report, Some(csv))
        }
        SieveCmd::Cover {
            curve,
            fiber,
            place,
            assume_rank0,
            assume_sha,
            provenance,
        } => {
            if !assume_rank0 {
                return Err(anyhow!(CoreError::Invalid(
                    "the cover check needs --assume-rank0".into()
                )));
            }
            let model = require_elliptic(ctx.load_curve(&curve)?)?;
            let fiber_poly = parse_int_poly(&fiber)?;
            let mw = MordellWeilInput::trivial(&provenance, assume_sha);
            let (report, d) = cover_check(&model, &mw, &fiber_poly, place, ctx.budget)?;
            let result = json!({
                "report": report,
                "d": d.map(|x| x.to_string()),
            });
            let cfg = json!({
                "curve": curve.display().to_string(), "fiber": fiber, "place": place,
            });
            ctx.emit("sieve cover", cfg, &result, None)
        }
        SieveCmd::Local { poly, place } => {
            let scheme = parse_factors(&poly)?;
            let cfg = json!({ "poly": poly, "place": place });
            if let Some(bound) = place.strip_prefix("all<=") {
                let bound: u64 = bound.parse()?;
                let mut rows = vec![];
                let mut all = true;
                for p in dsieve_core::factorint::primes_up_to(bound) {
                    let s = local_solubility(&scheme, Place::Finite(p))?;
                    all &= s;
                    rows.push(json!({ "place": p, "soluble": s }));
                }
                let real = local_solubility(&scheme, Place::Real)?;
                all &= real;
                rows.push(json!({ "place": "real", "soluble": real }));
                let csv = {
                    let mut s = String::from("place,soluble\n");
                    for r in &rows {
                        s.push_str(&format!("{},{}\n", r["place"], r["soluble"]));
                    }
                    s
                };
                let result = json!({ "rows": rows, "everywhere_soluble_up_to_bound": all });
                ctx.emit("sieve local", cfg, &result, Some(csv))
            } else {
                let p = if place == "real" {
                    Place::Real
                } else {
                    Place::Finite(place.parse()?)
                };
                let s = local_solubility(&scheme, p)?;
                let result = json!({ "place": place, "soluble": s });
                ctx.emit("sieve local", cfg, &result, None)
            }
        }
        SieveCmd::Packet { f, g, scan_bound } => {
            let packet = parse_factors(&f)?;
            let g_poly = parse_int_poly(&g)?;
            let report = torsion_packet_certify(&packet, &g_poly, scan_bound)?;
            let cfg = json!({ "F": f, "G": g, "scan_bound": scan_bound });
            let code = if report.pass { 0 } else { 1 };
            ctx.emit("sieve packet", cfg, &report, None)?;
            Ok(code)
        }
        SieveCmd::ProjectedDemo { f, g, primes } => {
            let packet = parse_factors(&f)?;
            let g_poly = parse_int_poly(&g)?;
            let (lo, hi) = parse_range(&primes)?;
            let report = ps_projected_demo(&packet, &g_poly, lo, hi)?;
            let csv = report.to_csv();
            let cfg = json!({ "F": f, "G": g, "primes": primes });
            ctx.emit("sieve projected-demo", cfg, &report, Some(csv))
        }
    }
}

fn run_search(ctx: &mut Ctx, cmd: SearchCmd) -> anyhow::Result<i32> {
    match cmd {
        SearchCmd::CoprimeChain {
            curve,
            aux_prime,
            bound,
            target,
        } => {
            let model = require_elliptic(ctx.load_curve(&curve)?)?;
            let state = coprime_chain(&model, aux_prime, bound, target, ctx.budget)?;
            verify_chain(&model, &state, ctx.budget)?;
            let csv = state.to_csv();
            let cfg = json!({
                "curve": curve.display().to_string(), "aux_prime": aux_prime,
                "bound": bound, "target": target,
            });
            ctx.emit("search coprime-chain", cfg, &state, Some(csv))
        }
        SearchCmd::TorsionBound { curve, places } => {
            let model = require_elliptic(ctx.load_curve(&curve)?)?;
            let g = torsion_bound(&model, &places, ctx.budget)?;
            let result = json!({
                "places": places,
                "gcd": g.to_string(),
                "certifies_trivial_torsion": g.to_string() == "1",
            });
            let cfg = json!({ "curve": curve.display().to_string(), "places": places });
            ctx.emit("search torsion-bound", cfg, &result, None)
        }
    }
}

fn run_heuristic(ctx: &mut Ctx, cmd: HeuristicCmd) -> anyhow::Result<i32> {
    match cmd {
        HeuristicCmd::Emptying {
            curve,
            d,
            bound,
            trials,
        } => {
            let model = ctx.load_curve(&curve)?;
            let cfg = HeuristicConfig {
                d,
                bound,
                trials,
                seed: ctx.seed,
                budget: ctx.budget,
            };
            let report = emptying_probability(&model, 1, &cfg)?;
            let csv = report.to_csv();
            let c = json!({
                "curve": curve.display().to_string(), "d": d, "bound": bound, "trials": trials,
            });
            ctx.emit("heuristic emptying", c, &report, Some(csv))
        }
        HeuristicCmd::Smooth { curve, bound, u } => {
            let model = ctx.load_curve(&curve)?;
            let report = smoothness_stats(&model, bound, u, ctx.budget)?;
            let csv = report.to_csv();
            let c = json!({ "curve": curve.display().to_string(), "bound": bound, "u": u });
            ctx.emit("heuristic smooth", c, &report, Some(csv))
        }
        HeuristicCmd::TorsionDensity {
            curve,
            ell,
            nmax,
            bound,
        } => {
            let model = require_elliptic(ctx.load_curve(&curve)?)?;
            let report = torsion_density(&model, ell, nmax, bound, ctx.budget)?;
            let csv = report.to_csv();
            let c = json!({
                "curve": curve.display().to_string(), "ell": ell, "nmax": nmax, "bound": bound,
            });
            ctx.emit("heuristic torsion-density", c, &report, Some(csv))
        }
        HeuristicCmd::Contrast {
            f,
            g,
            bound,
            trials,
        } => {
            let packet = parse_factors(&f)?;
            let g_poly = parse_int_poly(&g)?;
            let cfg = HeuristicConfig {
                d: 2,
                bound,
                trials,
                seed: ctx.seed,
                budget: ctx.budget,
            };
            let report = forced_torsion_contrast(&packet, &g_poly, &cfg)?;
            let csv = report.to_csv();
            let c = json!({ "F": f, "G": g, "bound": bound, "trials": trials });
            ctx.emit("heuristic contrast", c, &report, Some(csv))
        }
    }
}

fn run_constant(ctx: &mut Ctx, cmd: ConstantCmd) -> anyhow::Result<i32> {
    match cmd {
        ConstantCmd::Threshold { curve, ell, nmax } => {
            let model = require_hyper(ctx.load_curve(&curve)?)?;
            let fctx = model.base.ctx()?;
            let f = model.f.reduce_mod(&fctx);
            let setup = ConstantCurveSetup::new(f, fctx, ell, ctx.budget)?;
            let report = threshold_scan(&setup, nmax);
            let csv = report.to_csv();
            let c = json!({ "curve": curve.display().to_string(), "ell": ell, "nmax": nmax });
            ctx.emit("constant threshold", c, &report, Some(csv))
        }
        ConstantCmd::PointSearch {
            curve,
            ell,
            n,
            max_ext,
        } => {
            let model = require_hyper(ctx.load_curve(&curve)?)?;
            let fctx = model.base.ctx()?;
            let f = model.f.reduce_mod(&fctx);
            let (odd_f, odd_ctx, ext) = if model.degree() % 2 == 0 {
                searchable_odd_model(&f, &fctx, max_ext, ctx.budget)?
            } else {
                (f, fctx, 1)
            };
            let outcome = prime_to_ell_point_search(&odd_f, &odd_ctx, ell, n, ctx.budget)?;
            let result = json!({
                "model_extension": ext,
                "search_extension": n,
                "outcome": outcome,
                "note": "the class of the point at infinity is the identity and is always a trivial witness",
            });
            let c = json!({ "curve": curve.display().to_string(), "ell": ell, "n": n });
            ctx.emit("constant point-search", c, &result, None)
        }
        ConstantCmd::Dm { m, brute } => {
            let report = dm_affine_check(m, brute || m <= 3)?;
            let c = json!({ "m": m, "brute": brute });
            ctx.emit("constant dm", c, &report, None)
        }
        ConstantCmd::Brell => {
            let report = factor_split_report(ctx.budget)?;
            let code = if report.pass { 0 } else { 1 };
            ctx.emit("constant brell", json!({}), &report, None)?;
            Ok(code)
        }
        ConstantCmd::Frobenius {
            field,
            points,
            nmax,
        } => {
            let (p, n) = field
                .split_once(',')
                .ok_or_else(|| anyhow!(CoreError::Invalid("--field wants p,n".into())))?;
            let fctx = FieldCtx::extension(p.trim().parse()?, n.trim().parse()?)?;
            let text = std::fs::read_to_string(&points)
                .with_context(|| format!("reading {}", points.display()))?;
            ctx.hashes.push(InputHash {
                path: points.display().to_string(),
                sha256: hex_digest(text.as_bytes()),
            });
            let pts = parse_point_file(&text, &fctx)?;
            let report = frobenius_iteration_check(&pts, &fctx, nmax)?;
            let csv = report.to_csv();
            let c = json!({ "field": field, "points": points.display().to_string(), "nmax": nmax });
            ctx.emit("constant frobenius", c, &report, Some(csv))
        }
    }
}

fn parse_point_file(
    text: &str,
    ctx: &FieldCtx,
) -> anyhow::Result<Vec<(dsieve_core::ff::FieldElem, dsieve_core::ff::FieldElem)>> {
    let mut pts = vec![];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let close = line.find(']').ok_or_else(|| {
            anyhow!(CoreError::Parse {
                line: i + 1,
                col: 1,
                msg: "expected two bracket lists per line".into(),
            })
        })?;
        let (xs, ys) = line.split_at(close + 1);
        let to_elem = |s: &str| -> anyhow::Result<dsieve_core::ff::FieldElem> {
            let p = parse_int_poly(s.trim())?;
            let mut coeffs = vec![0u64; ctx.degree()];
            for (j, c) in p.0.iter().enumerate() {
                if j >= coeffs.len() {
                    return Err(anyhow!(CoreError::Invalid(
                        "coordinate has too many coefficients for the field".into()
                    )));
                }
                let pb = BigInt::from(ctx.characteristic());
                let r = ((c % &pb) + &pb) % &pb;
                coeffs[j] = u64::try_from(r.magnitude().clone()).unwrap();
            }
            Ok(dsieve_core::ff::FieldElem(coeffs))
        };
        pts.push((to_elem(xs)?, to_elem(ys)?));
    }
    Ok(pts)
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

fn builtin_examples(budget: u64, seed: u64) -> Vec<(&'static str, Box<dyn Fn() -> anyhow::Result<Value>>)> {
    let index2 = || -> anyhow::Result<dsieve_core::curves::HyperellipticModel> {
        Ok(dsieve_core::curves::HyperellipticModel::new(
            IntPoly::from_i64(&[14, 14, 7, 0, 14, 0, 7]),
            Base::Rational,
            Some("index2".into()),
        )?)
    };
    let e67 = || -> anyhow::Result<EllipticModel> {
        Ok(EllipticModel::new(
            [0, 1, 1, -12, -21].map(BigInt::from),
            Base::Rational,
            Some("67a1".into()),
        )?)
    };
    let brodd_packet = || -> anyhow::Result<(ZeroDimScheme, IntPoly)> {
        Ok((
            ZeroDimScheme::with_factors(vec![
                IntPoly::from_i64(&[3, 0, 1]),
                IntPoly::from_i64(&[-19, 0, 0, 1]),
            ])?,
            IntPoly::from_i64(&[2, 2, 0, 2]),
        ))
    };

    let mut out: Vec<(&'static str, Box<dyn Fn() -> anyhow::Result<Value>>)> = vec![];

    out.push((
        "index2-orders",
        Box::new(move || {
            let m = CurveModel::Hyperelliptic(index2()?);
            let mut rows = vec![];
            for v in [3u64, 5, 17] {
                let (_, reduced) = good_reduction(&m, v)?;
                let l = lpolynomial(&reduced.unwrap(), budget)?;
                rows.push(json!({ "v": v, "order": l.order().to_string() }));
            }
            Ok(json!({ "orders": rows }))
        }),
    ));
    out.push((
        "index2-hypex",
        Box::new(move || {
            let mw = MordellWeilInput::trivial("external 2-descent", true);
            let report = hypex_scan(&index2()?, &mw, 2, 20, budget)?;
            Ok(serde_json::to_value(&report)?)
        }),
    ));
    out.push((
        "f3-curves",
        Box::new(move || {
            let count = |f: &[i64]| -> anyhow::Result<u64> {
                let fctx = FieldCtx::prime(3)?;
                let fp = FPoly::from_ints(&fctx, f);
                Ok(dsieve_core::curves::count_points_fpoly(&fp, &fctx, budget)?)
            };
            let ord = |f: &[i64]| -> anyhow::Result<bool> {
                let m = CurveModel::Hyperelliptic(
                    dsieve_core::curves::HyperellipticModel::new(
                        IntPoly::from_i64(f),
                        Base::Finite { p: 3, n: 1 },
                        None,
                    )?,
                );
                Ok(dsieve_core::curves::is_ordinary(&m, budget)?)
            };
            Ok(json!({
                "count_x3_minus_x_plus_2": count(&[2, -1, 0, 1])?,
                "count_c0": count(&[-1, 0, 1, 0, 0, 0, -1])?,
                "ordinary_minus_x3_plus_x_minus_1": ord(&[-1, 1, 0, -1])?,
                "ordinary_minus_x3_plus_x2_minus_1": ord(&[-1, 0, 1, -1])?,
            }))
        }),
    ));
    out.push((
        "c0-lpoly-threshold",
        Box::new(move || {
            let fctx = FieldCtx::prime(3)?;
            let f = FPoly::from_ints(&fctx, &[-1, 0, 1, 0, 0, 0, -1]);
            let setup = ConstantCurveSetup::new(f, fctx, 2, budget)?;
            let report = threshold_scan(&setup, 6);
            Ok(json!({
                "lpoly": setup.lpoly.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "threshold": serde_json::to_value(&report)?,
            }))
        }),
    ));
    out.push((
        "dm",
        Box::new(move || {
            let rows: Vec<Value> = (1..=3)
                .map(|m| {
                    let r = dm_affine_check(m, true)?;
                    Ok(serde_json::to_value(&r)?)
                })
                .collect::<anyhow::Result<_>>()?;
            Ok(json!({ "rows": rows }))
        }),
    ));
    out.push((
        "hasse-19",
        Box::new(move || {
            let cert = hasse_counterexample_certify(&BigInt::from(19))?;
            Ok(serde_json::to_value(&cert)?)
        }),
    ));
    out.push((
        "packet-brodd",
        Box::new(move || {
            let (packet, g) = brodd_packet()?;
            let report = torsion_packet_certify(&packet, &g, 100)?;
            Ok(serde_json::to_value(&report)?)
        }),
    ));
    out.push((
        "projected-demo",
        Box::new(move || {
            let (packet, g) = brodd_packet()?;
            let report = ps_projected_demo(&packet, &g, 2, 40)?;
            Ok(serde_json::to_value(&report)?)
        }),
    ));
    out.push((
        "coprime-chain-67a1",
        Box::new(move || {
            let e = e67()?;
            let state = coprime_chain(&e, 17, 10_000, 5, budget)?;
            verify_chain(&e, &state, budget)?;
            Ok(serde_json::to_value(&state)?)
        }),
    ));
    out.push((
        "ecount-67a1",
        Box::new(move || {
            let report = ecount_scan(&e67()?, 2, 50, budget)?;
            Ok(serde_json::to_value(&report)?)
        }),
    ));
    out.push((
        "smooth-index2",
        Box::new(move || {
            let m = CurveModel::Hyperelliptic(index2()?);
            let report = smoothness_stats(&m, 17, 0.687, budget)?;
            Ok(serde_json::to_value(&report)?)
        }),
    ));
    out.push((
        "emptying-brodd",
        Box::new(move || {
            let (packet, g) = brodd_packet()?;
            let product = packet.poly.mul(&g);
            let m = CurveModel::Hyperelliptic(dsieve_core::curves::HyperellipticModel::new(
                product,
                Base::Rational,
                None,
            )?);
            let cfg = HeuristicConfig {
                d: 1,
                bound: 60,
                trials: 2000,
                seed,
                budget,
            };
            let report = emptying_probability(&m, 1, &cfg)?;
            Ok(serde_json::to_value(&report)?)
        }),
    ));
    out.push((
        "contrast-brodd",
        Box::new(move || {
            let (packet, g) = brodd_packet()?;
            let cfg = HeuristicConfig {
                d: 2,
                bound: 60,
                trials: 2000,
                seed,
                budget,
            };
            let report = forced_torsion_contrast(&packet, &g, &cfg)?;
            Ok(serde_json::to_value(&report)?)
        }),
    ));
    out.push((
        "torsion-density-67a1",
        Box::new(move || {
            let report = torsion_density(&e67()?, 2, 6, 2000, budget)?;
            Ok(serde_json::to_value(&report)?)
        }),
    ));
    out.push((
        "brell",
        Box::new(move || {
            let report = factor_split_report(budget)?;
            Ok(serde_json::to_value(&report)?)
        }),
    ));
    out
}

fn run_reproduce(
    ctx: &mut Ctx,
    only: Option<String>,
    expected: Option<PathBuf>,
    update: bool,
) -> anyhow::Result<i32> {
    let dir = expected.unwrap_or_else(|| PathBuf::from("expected"));
    let examples = builtin_examples(ctx.budget, 42);
    let mut rows = vec![];
    let mut failed = 0usize;
    for (name, f) in &examples {
        if let Some(filter) = &only {
            if !name.contains(filter.as_str()) {
                continue;
            }
        }
        let started = Instant::now();
        let actual = f()?;
        let ms = started.elapsed().as_millis();
        let path = dir.join(format!("{name}.json"));
        if update {
            std::fs::create_dir_all(&dir)?;
            std::fs::write(&path, serde_json::to_string_pretty(&actual)?)?;
            println!("UPDATED  {name} ({ms} ms)");
            rows.push((name, true));
            continue;
        }
        let expected_value: Value = match std::fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?,
            Err(e) => {
                println!("FAIL     {name}: cannot read {}: {e}", path.display());
                failed += 1;
                rows.push((name, false));
                continue;
            }
        };
        if expected_value == actual {
            println!("PASS     {name} ({ms} ms)");
            rows.push((name, true));
        } else {
            println!("FAIL     {name} ({ms} ms)");
            print_diff(&expected_value, &actual);
            failed += 1;
            rows.push((name, false));
        }
    }
    println!(
        "\n{} passed, {} failed, {} total",
        rows.len() - failed,
        failed,
        rows.len()
    );
    Ok(if failed > 0 { 1 } else { 0 })
}

fn print_diff(expected: &Value, actual: &Value) {
    let e = serde_json::to_string_pretty(expected).unwrap_or_default();
    let a = serde_json::to_string_pretty(actual).unwrap_or_default();
    for (i, (le, la)) in e.lines().zip(a.lines()).enumerate() {
        if le != la {
            println!("  first difference at line {}:", i + 1);
            println!("    expected: {le}");
            println!("    actual:   {la}");
            return;
        }
    }
    println!(
        "  documents differ in length: expected {} lines, actual {} lines",
        e.lines().count(),
        a.lines().count()
    );
}
