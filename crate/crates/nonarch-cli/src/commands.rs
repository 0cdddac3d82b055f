//! Subcommand definitions and their dispatch into the library.

use std::fmt::Debug;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use nonarch::hensel::{
    lift_factorization, newton_lift, newton_system, MultiPadicSystem, PadicPolynomial,
};
use nonarch::multipoly::MultiPoly;
use nonarch::newton_polygon::{
    eisenstein_check, polygon, pure_slope_irreducible, root_valuations, slope_factorization,
    Certificate, NewtonPolygon, ValuedPoly,
};
use nonarch::newton_polytope::{
    gauss_norm_multi, indecomposable_hint, polytope2, support, tropical_eval_multi, DecompositionHint,
    LatticePolygon,
};
use nonarch::padic::{padic_sqrt, teichmuller, Padic, SquareRoot};
use nonarch::poly::RatPoly;
use nonarch::resultant::{discriminant, resultant, Rationals, ResidueRing};
use nonarch::tate_series::{series_polygon, strassmann_bound, weierstrass_prepare, TruncatedSeries};
use nonarch::valuation::{product_formula_check_with_guard, vp, Place, Prime, Rational, DEFAULT_FACTOR_GUARD};

use crate::parse;
use crate::report::{error_code, ext, opt_i64, rat, Failure, Report};

pub const PRECISION_ENV: &str = "NONARCH_PRECISION";
const FALLBACK_PRECISION: i64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Svg,
}

/// One job: a subcommand with its exact numeric inputs.
#[derive(Debug, Parser)]
#[command(name = "nonarch", version, about = "Exact p-adic and Newton-polygon computations")]
pub struct JobSpec {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PadicOp {
    Show,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Digits,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, value_parser = parse_prime)]
    pub prime: Prime,
    /// Polynomial or generator (exp-trunc:N, log-trunc:N, log-over-t-trunc:N).
    #[arg(long)]
    pub series: String,
    /// Radius exponent s of the ball |T| <= p^-s.
    #[arg(long, value_parser = parse_rational, default_value = "0", allow_hyphen_values = true)]
    pub radius: Rational,
    /// Truncation order; defaults to the generator order or the degree.
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// p-adic valuation of a rational.
    Vp {
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        value: Rational,
    },
    /// Check the product formula over all places.
    ProductFormula {
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        value: Rational,
        #[arg(long, default_value_t = DEFAULT_FACTOR_GUARD)]
        guard: u64,
    },
    /// Arithmetic on fixed-precision p-adic numbers.
    Padic {
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long, value_enum, default_value = "show")]
        op: PadicOp,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        a: Rational,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        b: Option<Rational>,
        /// Number of digits for `--op digits`.
        #[arg(long)]
        digits: Option<u32>,
    },
    /// Teichmüller representative of a unit residue.
    Teichmuller {
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
        #[arg(long, value_parser = parse_integer, allow_hyphen_values = true)]
        unit: i64,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Square root in Q_p.
    Sqrt {
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        value: Rational,
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Newton lift of an approximate root.
    Hensel {
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        start: Rational,
        #[arg(long)]
        precision: Option<i64>,
        /// Absolute precision of the coefficients; defaults to twice the target plus 16.
        #[arg(long)]
        coeff_precision: Option<i64>,
    },
    /// Multivariate Newton lift of a square system.
    HenselSystem {
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
        /// One equation per flag.
        #[arg(long = "poly", required = true, allow_hyphen_values = true)]
        polys: Vec<String>,
        /// Comma-separated variable order; defaults to sorted names.
        #[arg(long)]
        vars: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long)]
        precision: Option<i64>,
    },
    /// Lift an approximate factorization.
    LiftFactor {
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
        #[arg(long)]
        precision: Option<i64>,
        #[arg(long)]
        coeff_precision: Option<i64>,
    },
    /// Sylvester resultant or discriminant, over Q or Z/p^k.
    Resultant {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        #[arg(long)]
        deg_f: Option<usize>,
        #[arg(long)]
        deg_g: Option<usize>,
        #[arg(long)]
        discriminant: bool,
        #[arg(long, value_parser = parse_prime, requires = "exponent")]
        prime: Option<Prime>,
        /// Work in Z/p^k.
        #[arg(long)]
        exponent: Option<u32>,
    },
    /// Newton polygon; without --prime the trivial valuation is used.
    Polygon {
        #[arg(long, value_parser = parse_prime)]
        prime: Option<Prime>,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Factor by slopes of the Newton polygon.
    SlopeFactor {
        #[arg(long, value_parser = parse_prime)]
        prime: Prime,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        precision: Option<i64>,
    },
    /// Gauss norm of a truncated series on a ball.
    SeriesNorm(SeriesArgs),
    /// Weierstrass preparation of a truncated series.
    Weierstrass {
        #[command(flatten)]
        series: SeriesArgs,
        /// Target for the residual norm; defaults to the precision budget.
        #[arg(long)]
        budget: Option<i64>,
    },
    /// Strassmann bound on the number of zeros in a ball.
    Strassmann(SeriesArgs),
    /// Newton polygon of a truncated series.
    SeriesPolygon(SeriesArgs),
    /// Newton polytope of a bivariate polynomial.
    Polytope {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        vars: Option<String>,
        /// Place for norms and tropical probes; trivial if absent.
        #[arg(long, value_parser = parse_prime)]
        prime: Option<Prime>,
        /// Tropical evaluation point, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        probe: Option<String>,
        /// Gauss norm radius exponents, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        radius: Option<String>,
        #[arg(long, default_value_t = nonarch::newton_polytope::DEFAULT_EDGE_GUARD)]
        guard: usize,
    },
    /// Render polygon or polytope JSON as SVG.
    Render {
        /// JSON file; stdin if absent.
        #[arg(long)]
        input: Option<PathBuf>,
        /// SVG file; stdout if absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run JSON-lines jobs from stdin, each an argument array.
    Batch,
}

fn parse_prime(s: &str) -> Result<Prime, String> {
    let n = parse::integer(s).map_err(|e| e.to_string())?;
    let n = u64::try_from(n).map_err(|_| format!("{s} is not a prime"))?;
    Prime::new(n).map_err(|e| e.to_string())
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    parse::rational(s).map_err(|e| e.to_string())
}

fn parse_integer(s: &str) -> Result<i64, String> {
    parse::integer(s).map_err(|e| e.to_string())
}

/// `NONARCH_PRECISION` or the built-in default.
pub fn default_precision() -> Result<i64, Failure> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => match parse::integer(&v) {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Failure::Parse(format!("{PRECISION_ENV}={v:?} is not a positive integer"))),
        },
        Err(_) => Ok(FALLBACK_PRECISION),
    }
}

fn precision(given: Option<i64>) -> Result<i64, Failure> {
    match given {
        Some(n) => Ok(n),
        None => default_precision(),
    }
}

fn precision_u32(given: Option<u32>) -> Result<u32, Failure> {
    match given {
        Some(n) => Ok(n),
        None => u32::try_from(default_precision()?).map_err(|_| Failure::Parse("precision too large".into())),
    }
}

struct Ctx {
    module: &'static str,
    op: &'static str,
    input: Value,
}

impl Ctx {
    fn new(module: &'static str, op: &'static str, input: Value) -> Ctx {
        Ctx { module, op, input }
    }

    fn fail<E: Debug + ToString>(&self, e: E) -> Failure {
        Failure::Precondition {
            module: self.module,
            op: self.op,
            input: self.input.clone(),
            code: error_code(&format!("{e:?}")),
            message: e.to_string(),
        }
    }

    fn report(self, result: Value) -> Report {
        Report::new(self.module, self.op, self.input, result)
    }
}

fn poly_json(poly: &RatPoly) -> Value {
    json!({ "text": poly.to_string(), "coeffs": poly.coeffs().iter().map(rat).collect::<Vec<_>>() })
}

fn padic_json(x: &Padic) -> Value {
    json!({
        "value": x.to_string(),
        "valuation": opt_i64(x.valuation()),
        "relative_precision": x.relative_precision().map_or(Value::Null, |r| json!(r)),
        "absolute_precision": opt_i64(x.absolute_precision()),
    })
}

pub fn polygon_json(ng: &NewtonPolygon) -> Value {
    json!({
        "vertices": ng.vertices().iter().map(|(m, v)| json!([m, rat(v)])).collect::<Vec<_>>(),
        "slopes": ng.slopes().iter().map(rat).collect::<Vec<_>>(),
        "segments": ng.segments().iter().map(|s| json!({
            "start": [s.start.0, rat(&s.start.1)],
            "end": [s.end.0, rat(&s.end.1)],
            "slope": rat(&s.slope),
            "length": s.length,
        })).collect::<Vec<_>>(),
    })
}

fn lattice_json(poly: &LatticePolygon) -> Value {
    json!(poly.vertices().iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>())
}

fn place_of(prime: Option<Prime>) -> Place {
    prime.map_or(Place::Trivial, Place::Padic)
}

fn series_input(args: &SeriesArgs) -> Result<(TruncatedSeries, Value), Failure> {
    let poly = parse::univariate(&args.series)?;
    let order = args
        .order
        .or_else(|| parse::generator_order(&args.series))
        .unwrap_or_else(|| poly.degree().unwrap_or(0));
    let input = json!({
        "prime": args.prime.get(),
        "series": args.series,
        "radius": rat(&args.radius),
        "order": order,
    });
    Ok((TruncatedSeries::from_poly(args.prime, &poly, order, args.radius.clone()), input))
}

fn variable_order(polys: &[&str], vars: &Option<String>) -> Result<Vec<String>, Failure> {
    Ok(match vars {
        Some(v) => v.split(',').map(|s| s.trim().to_string()).collect(),
        None => {
            let mut all = Vec::new();
            for p in polys {
                all.extend(parse::variables(p)?);
            }
            all.sort();
            all.dedup();
            all
        }
    })
}

pub fn run(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Vp { prime, value } => {
            let input = json!({ "prime": prime.get(), "value": rat(value) });
            Ok(Report::new("valuation", "vp", input, ext(&vp(value, *prime))))
        }
        Command::ProductFormula { value, guard } => {
            let ctx = Ctx::new("valuation", "product_formula_check", json!({ "value": rat(value), "guard": guard }));
            let check = product_formula_check_with_guard(value, *guard).map_err(|e| ctx.fail(e))?;
            let breakdown: Vec<Value> = check
                .breakdown
                .iter()
                .map(|(place, abs)| json!({ "place": place.to_string(), "abs": rat(abs) }))
                .collect();
            let holds = check.holds;
            Ok(ctx
                .report(json!({ "holds": holds, "breakdown": breakdown }))
                .certify("product_formula", holds, Value::Null))
        }
        Command::Padic { prime, precision, op, a, b, digits } => padic_op(*prime, *precision, *op, a, b.as_ref(), *digits),
        Command::Teichmuller { prime, unit, precision } => {
            let precision = precision_u32(*precision)?;
            let ctx = Ctx::new("padic", "teichmuller", json!({ "prime": prime.get(), "unit": unit, "precision": precision }));
            let t = teichmuller(&BigInt::from(*unit), *prime, precision).map_err(|e| ctx.fail(e))?;
            let order_ok = t.pow(prime.get() as u32 - 1).agrees_mod(&Padic::one(*prime, precision), precision as i64);
            Ok(ctx.report(json!(t.to_string())).certify("root_of_unity", order_ok, json!(format!("x^{} = 1", prime.get() - 1))))
        }
        Command::Sqrt { prime, value, precision } => {
            let precision = precision_u32(*precision)?;
            let ctx = Ctx::new("padic", "padic_sqrt", json!({ "prime": prime.get(), "value": rat(value), "precision": precision }));
            let x = Padic::from_rational(value, *prime, precision).map_err(|e| ctx.fail(e))?;
            match padic_sqrt(&x).map_err(|e| ctx.fail(e))? {
                SquareRoot::Root(r) => {
                    let back = r.mul(&r).map_err(|e| ctx.fail(e))?;
                    let abs = back.absolute_precision().unwrap_or(i64::MAX).min(x.absolute_precision().unwrap_or(i64::MAX));
                    let ok = abs == i64::MAX || back.agrees_mod(&x, abs);
                    Ok(ctx.report(json!({ "root": padic_json(&r) })).certify("squares_back", ok, Value::Null))
                }
                SquareRoot::NoRoot => Ok(ctx.report(json!({ "root": null })).certify("no_square_root", true, Value::Null)),
            }
        }
        Command::Hensel { prime, poly, start, precision: target, coeff_precision } => {
            let target = precision(*target)?;
            let abs = coeff_precision.unwrap_or(2 * target + 16);
            let ctx = Ctx::new(
                "hensel",
                "newton_lift",
                json!({ "prime": prime.get(), "poly": poly, "start": rat(start), "precision": target, "coeff_precision": abs }),
            );
            let phi = PadicPolynomial::from_ratpoly(*prime, &parse::univariate(poly)?, abs).map_err(|e| ctx.fail(e))?;
            let a = Padic::approximating(start, *prime, target.max(1));
            let lift = newton_lift(&phi, &a, target).map_err(|e| ctx.fail(e))?;
            let h = lift.residual_valuations.first().copied().flatten();
            let e = lift.derivative_valuation;
            let residue = lift.root.residue(target as u32).map_err(|err| ctx.fail(err))?;
            Ok(ctx
                .report(json!({
                    "root": residue.to_string(),
                    "modulus": prime.pow(target as u32).to_string(),
                    "iterations": lift.iterations,
                    "residual_valuations": lift.residual_valuations.iter().map(|v| opt_i64(*v)).collect::<Vec<_>>(),
                    "derivative_valuation": e,
                }))
                .certify(
                    "hensel_condition",
                    h.is_none_or(|h| h > 2 * e) || phi.degree() == Some(1),
                    json!({ "value_valuation": opt_i64(h), "derivative_valuation": e }),
                ))
        }
        Command::HenselSystem { prime, polys, vars, start, precision: target } => {
            let target = precision(*target)?;
            let names = variable_order(&polys.iter().map(String::as_str).collect::<Vec<_>>(), vars)?;
            let ctx = Ctx::new(
                "hensel",
                "newton_system",
                json!({ "prime": prime.get(), "polys": polys, "vars": names, "start": start, "precision": target }),
            );
            let system: Vec<MultiPoly> = polys.iter().map(|p| parse::multi_poly(p, &names)).collect::<Result<_, _>>()?;
            let point = parse::rational_list(start)?;
            let system = MultiPadicSystem::new(*prime, system).map_err(|e| ctx.fail(e))?;
            let lift = newton_system(&system, &point, target).map_err(|e| ctx.fail(e))?;
            let root: Vec<String> =
                lift.root.iter().map(|x| x.residue(target as u32).map(|r| r.to_string())).collect::<Result<_, _>>().map_err(|e| ctx.fail(e))?;
            Ok(ctx
                .report(json!({
                    "root": root,
                    "modulus": prime.pow(target as u32).to_string(),
                    "iterations": lift.iterations,
                    "residual_valuations": lift.residual_valuations.iter().map(|v| opt_i64(*v)).collect::<Vec<_>>(),
                    "jacobian_valuation": lift.jacobian_valuation,
                }))
                .certify("jacobian_condition", true, json!({ "jacobian_valuation": lift.jacobian_valuation })))
        }
        Command::LiftFactor { prime, poly, psi, eta, precision: target, coeff_precision } => {
            let target = precision(*target)?;
            let abs = coeff_precision.unwrap_or(2 * target + 16);
            let ctx = Ctx::new(
                "hensel",
                "lift_factorization",
                json!({ "prime": prime.get(), "poly": poly, "psi": psi, "eta": eta, "precision": target, "coeff_precision": abs }),
            );
            let lift_in = |s: &str| -> Result<PadicPolynomial, Failure> {
                PadicPolynomial::from_ratpoly(*prime, &parse::univariate(s)?, abs).map_err(|e| ctx.fail(e))
            };
            let (phi, psi0, eta0) = (lift_in(poly)?, lift_in(psi)?, lift_in(eta)?);
            let lift = lift_factorization(&phi, &psi0, &eta0, target).map_err(|e| ctx.fail(e))?;
            let product = lift.psi.mul(&lift.eta).map_err(|e| ctx.fail(e))?;
            let ok = product.agrees_mod(&phi.to_ratpoly(), target);
            Ok(ctx
                .report(json!({
                    "psi": lift.psi.to_string(),
                    "eta": lift.eta.to_string(),
                    "iterations": lift.iterations,
                    "resultant_valuation": lift.resultant_valuation,
                }))
                .certify("product_agrees", ok, json!({ "modulus_exponent": target })))
        }
        Command::Resultant { f, g, deg_f, deg_g, discriminant: disc, prime, exponent } => {
            resultant_cmd(f, g.as_deref(), *deg_f, *deg_g, *disc, *prime, *exponent)
        }
        Command::Polygon { prime, poly } => {
            let place = place_of(*prime);
            let ctx = Ctx::new("newton_polygon", "polygon", json!({ "place": place.to_string(), "poly": poly }));
            let valued = ValuedPoly::new(parse::univariate(poly)?, place).map_err(|e| ctx.fail(e))?;
            let ng = polygon(&valued);
            let mut result = polygon_json(&ng);
            result["ord"] = json!(valued.ord());
            result["root_valuations"] = json!(root_valuations(&valued)
                .iter()
                .map(|(v, k)| json!({ "valuation": ext(v), "multiplicity": k }))
                .collect::<Vec<_>>());
            let mut report = ctx.report(result);
            if prime.is_some() {
                report = report.certify("eisenstein", eisenstein_check(&valued), Value::Null);
                if let Ok(cert) = pure_slope_irreducible(&valued) {
                    report = match cert {
                        Certificate::Irreducible { r, d } => report.certify("pure_slope_irreducible", true, json!({ "r": r, "d": d })),
                        Certificate::Inconclusive => report.certify("pure_slope_irreducible", false, Value::Null),
                    };
                }
            }
            Ok(report)
        }
        Command::SlopeFactor { prime, poly, precision: target } => {
            let target = precision(*target)?;
            let ctx = Ctx::new("newton_polygon", "slope_factorization", json!({ "prime": prime.get(), "poly": poly, "precision": target }));
            let phi = parse::univariate(poly)?;
            let valued = ValuedPoly::padic(phi.clone(), *prime).map_err(|e| ctx.fail(e))?;
            let factors = slope_factorization(&valued, target).map_err(|e| ctx.fail(e))?;
            let mut product = factors[0].factor.clone();
            for f in &factors[1..] {
                product = product.mul(&f.factor).map_err(|e| ctx.fail(e))?;
            }
            let ok = product.agrees_mod(&phi, target);
            let out: Vec<Value> = factors
                .iter()
                .map(|f| json!({ "slope": rat(&f.slope), "length": f.length, "factor": f.factor.to_string() }))
                .collect();
            Ok(ctx.report(json!({ "factors": out })).certify("product_agrees", ok, json!({ "modulus_exponent": target })))
        }
        Command::SeriesNorm(args) => {
            let (series, input) = series_input(args)?;
            let norm = series.gauss_norm_v();
            let result = json!({ "w": ext(&norm.w), "argmin_last": norm.argmin_last });
            Ok(Report::new("tate_series", "gauss_norm_v", input, result))
        }
        Command::Weierstrass { series, budget } => {
            let (phi, mut input) = series_input(series)?;
            let budget = precision(*budget)?;
            input["budget"] = json!(budget);
            let ctx = Ctx::new("tate_series", "weierstrass_prepare", input);
            let prep = weierstrass_prepare(&phi, budget).map_err(|e| ctx.fail(e))?;
            let ok = prep.residual >= nonarch::valuation::ExtRational::from(nonarch::valuation::int(budget));
            let unit = prep.unit.is_unit();
            Ok(ctx
                .report(json!({
                    "degree": prep.poly.degree(),
                    "poly": poly_json(&prep.poly),
                    "unit": poly_json(&prep.unit.to_poly()),
                    "residual": ext(&prep.residual),
                }))
                .certify("residual_within_budget", ok, json!({ "budget": budget }))
                .certify("unit", unit, Value::Null))
        }
        Command::Strassmann(args) => {
            let (series, input) = series_input(args)?;
            let ctx = Ctx::new("tate_series", "strassmann_bound", input);
            let bound = strassmann_bound(&series).map_err(|e| ctx.fail(e))?;
            Ok(ctx.report(json!({ "bound": bound })))
        }
        Command::SeriesPolygon(args) => {
            let (series, input) = series_input(args)?;
            let ctx = Ctx::new("tate_series", "series_polygon", input);
            let ng = series_polygon(&series).map_err(|e| ctx.fail(e))?;
            Ok(ctx.report(polygon_json(&ng)))
        }
        Command::Polytope { poly, vars, prime, probe, radius, guard } => {
            let names = variable_order(&[poly], vars)?;
            let place = place_of(*prime);
            let ctx = Ctx::new(
                "newton_polytope",
                "polytope2",
                json!({ "poly": poly, "vars": names, "place": place.to_string(), "probe": probe, "radius": radius }),
            );
            let phi = parse::multi_poly(poly, &names)?;
            let hull = polytope2(&phi).map_err(|e| ctx.fail(e))?;
            let mut result = json!({
                "support": support(&phi),
                "vertices": lattice_json(&hull),
                "edges": hull.edges().iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
            });
            let hint = indecomposable_hint(&hull, *guard);
            result["decomposition"] = match &hint {
                DecompositionHint::Indecomposable => json!({ "kind": "indecomposable" }),
                DecompositionHint::Decomposable(a, b) => {
                    json!({ "kind": "decomposable", "summands": [lattice_json(a), lattice_json(b)] })
                }
                DecompositionHint::Unknown => json!({ "kind": "unknown" }),
            };
            if let Some(probe) = probe {
                let x = parse::rational_list(probe)?;
                let t = tropical_eval_multi(&phi, place, &x).map_err(|e| ctx.fail(e))?;
                result["tropical"] = json!({ "value": rat(&t.value), "active": t.active, "unique": t.unique() });
            }
            if let Some(radius) = radius {
                let s = parse::rational_list(radius)?;
                result["gauss_norm"] = ext(&gauss_norm_multi(&phi, place, &s).map_err(|e| ctx.fail(e))?);
            }
            let certified = matches!(hint, DecompositionHint::Indecomposable);
            Ok(ctx.report(result).certify("polytope_indecomposable", certified, json!({ "guard": guard })))
        }
        Command::Render { .. } | Command::Batch => unreachable!("handled by the driver"),
    }
}

fn padic_op(
    p: Prime,
    precision: Option<u32>,
    op: PadicOp,
    a: &Rational,
    b: Option<&Rational>,
    digits: Option<u32>,
) -> Result<Report, Failure> {
    let precision = precision_u32(precision)?;
    let op_name = format!("{op:?}").to_lowercase();
    let ctx = Ctx::new(
        "padic",
        "padic",
        json!({ "prime": p.get(), "precision": precision, "op": op_name, "a": rat(a), "b": b.map(rat) }),
    );
    let x = Padic::from_rational(a, p, precision).map_err(|e| ctx.fail(e))?;
    let second = || -> Result<Padic, Failure> {
        let b = b.ok_or_else(|| Failure::Parse(format!("--op {op_name} needs --b")))?;
        Padic::from_rational(b, p, precision).map_err(|e| ctx.fail(e))
    };
    let value = match op {
        PadicOp::Show => x,
        PadicOp::Neg => x.neg(),
        PadicOp::Inv => x.inv().map_err(|e| ctx.fail(e))?,
        PadicOp::Add => x.add(&second()?).map_err(|e| ctx.fail(e))?,
        PadicOp::Sub => x.sub(&second()?).map_err(|e| ctx.fail(e))?,
        PadicOp::Mul => x.mul(&second()?).map_err(|e| ctx.fail(e))?,
        PadicOp::Div => x.div(&second()?).map_err(|e| ctx.fail(e))?,
        PadicOp::Digits => {
            let k = digits.unwrap_or(precision);
            let ds = x.digits(k).map_err(|e| ctx.fail(e))?;
            return Ok(ctx.report(json!({ "digits": ds })));
        }
    };
    Ok(ctx.report(padic_json(&value)))
}

fn resultant_cmd(
    f: &str,
    g: Option<&str>,
    deg_f: Option<usize>,
    deg_g: Option<usize>,
    disc: bool,
    prime: Option<Prime>,
    exponent: Option<u32>,
) -> Result<Report, Failure> {
    let fp = parse::univariate(f)?;
    let gp = match (g, disc) {
        (Some(g), false) => parse::univariate(g)?,
        (None, true) => RatPoly::zero(),
        _ => return Err(Failure::Parse("give --g for a resultant or --discriminant alone".into())),
    };
    let m = deg_f.unwrap_or_else(|| fp.degree().unwrap_or(0));
    let n = deg_g.unwrap_or_else(|| gp.degree().unwrap_or(0));
    let op = if disc { "discriminant" } else { "resultant" };
    let ring = match (prime, exponent) {
        (Some(p), Some(k)) => Some(ResidueRing::new(p, k)),
        (None, None) => None,
        _ => return Err(Failure::Parse("--prime and --exponent go together".into())),
    };
    let ctx = Ctx::new(
        "resultant",
        op,
        json!({ "f": f, "g": g, "deg_f": m, "deg_g": n, "modulus": ring.as_ref().map(|r| r.modulus().to_string()) }),
    );
    let value = match &ring {
        None => {
            let r = if disc {
                discriminant(&Rationals, fp.coeffs(), m)
            } else {
                resultant(&Rationals, fp.coeffs(), gp.coeffs(), m, n)
            };
            rat(&r.map_err(|e| ctx.fail(e))?)
        }
        Some(ring) => {
            let reduce = |q: &RatPoly| -> Result<Vec<BigInt>, Failure> {
                q.coeffs()
                    .iter()
                    .map(|c| {
                        if c.is_integer() {
                            Ok(ring.reduce(&c.to_integer()))
                        } else {
                            Err(Failure::Parse(format!("coefficient {c} is not an integer")))
                        }
                    })
                    .collect()
            };
            let r = if disc {
                discriminant(ring, &reduce(&fp)?, m)
            } else {
                resultant(ring, &reduce(&fp)?, &reduce(&gp)?, m, n)
            };
            json!(r.map_err(|e| ctx.fail(e))?.to_string())
        }
    };
    let vanishes = value == json!(0) || value == json!("0");
    Ok(ctx.report(json!({ "value": value })).certify("vanishes", vanishes, Value::Null))
}

