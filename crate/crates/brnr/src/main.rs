//! Command-line front end: parse presentation files, run obstruction
//! reports, query the builtin catalog, compute X_w spaces, run candidate
//! searches, and cross-check against the brute-force oracles.
//!
//! Exit codes: 0 success, 2 parse error, 3 validation or domain error,
//! 4 oracle budget refusal, 5 oracle disagreement or selftest failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use brnr::error::Error;
use brnr::explore::{self, Strategy};
use brnr::exterior::{subspace_multivectors, MultiVector, Side};
use brnr::field::PrimeField;
use brnr::group::{builtin, parse_presentation, BuiltinParams, CentralExtensionSpec, Thm34Variant};
use brnr::linalg::Subspace;
use brnr::obstruction::{analyze, plucker_oracle_s2, sdec_oracle, BasisVector, Obstructions};
use brnr::render;
use brnr::selftest;

#[derive(Parser)]
#[command(
    name = "brnr",
    version,
    about = "Brauer and degree-three obstruction computations for exponent-p central extensions"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    machine: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    /// [u1, u6] = v7 (consistent with the X_w construction)
    Sec3,
    /// [u1, u6]^-1 = v7 (as printed in the source presentation)
    Printed,
}

impl From<VariantArg> for Thm34Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Sec3 => Thm34Variant::Sec3,
            VariantArg::Printed => Thm34Variant::Printed,
        }
    }
}

#[derive(Args, Clone)]
struct BuiltinFlags {
    /// Catalog entry: thm2.4, thm2.6, thm2.7, prop3.2, prop3.3, thm3.4,
    /// peyre-p12, extraspecial
    name: String,
    /// The odd prime p
    #[arg(long)]
    p: u64,
    /// Parameter t for thm2.6 (any nonzero residue)
    #[arg(long)]
    t: Option<i64>,
    /// Parameter a for prop3.3
    #[arg(long)]
    a: Option<i64>,
    /// Parameter b for prop3.3
    #[arg(long)]
    b: Option<i64>,
    /// Parameter n for extraspecial (order p^(2n+1))
    #[arg(long)]
    n: Option<usize>,
    /// Sign convention for thm3.4
    #[arg(long, value_enum, default_value = "sec3")]
    variant: VariantArg,
}

impl BuiltinFlags {
    fn build(&self) -> Result<(PrimeField, CentralExtensionSpec), Error> {
        let field = PrimeField::new(self.p)?;
        let params = BuiltinParams {
            t: self.t,
            a: self.a,
            b: self.b,
            n: self.n,
            variant: self.variant.into(),
        };
        let spec = builtin(field, &self.name, &params)?;
        Ok((field, spec))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the obstruction report for a presentation file
    Report {
        /// Presentation file (p/center/generators header plus rel lines)
        file: PathBuf,
    },
    /// Compute the obstruction report for a catalog group
    Builtin(BuiltinFlags),
    /// Compute X_w for a target trivector w
    Xw {
        #[arg(long)]
        p: u64,
        /// Dimension of U
        #[arg(long)]
        n: usize,
        /// Target trivector, e.g. "(1,2,3)+(3,4,5)+(5,6,1)"
        #[arg(long)]
        w: String,
    },
    /// Evaluate candidate subspaces of X_w
    Search {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: String,
        /// File with one candidate per line: generators separated by ';'
        #[arg(long, group = "strategy")]
        explicit: Option<PathBuf>,
        /// DIM COUNT SEED: sample COUNT random DIM-dimensional subspaces
        #[arg(long, num_args = 3, value_names = ["DIM", "COUNT", "SEED"], group = "strategy")]
        random: Option<Vec<u64>>,
        /// Enumerate every subspace of the given dimension
        #[arg(long, group = "strategy", value_name = "DIM")]
        exhaustive: Option<usize>,
        /// Candidate ceiling for --exhaustive
        #[arg(long, default_value_t = 1_000_000)]
        ceiling: u128,
    },
    /// Cross-check the decomposable-span sweep against brute-force oracles
    Oracle {
        /// Presentation file (alternative to --builtin)
        file: Option<PathBuf>,
        /// Catalog entry name (alternative to FILE)
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        t: Option<i64>,
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        b: Option<i64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "sec3")]
        variant: VariantArg,
        /// Enumeration budget per oracle; oracles that exceed it refuse
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
    },
    /// Run the full acceptance table at p in {3, 5, 7}
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::Validation(_) => 3,
        Error::Budget { .. } => 4,
        Error::Mismatch(_) => 5,
        Error::Internal(_) => 1,
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    match &cli.command {
        Command::Report { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::parse(format!("cannot read {}: {e}", file.display())))?;
            let spec = parse_presentation(&text)?;
            let obs = analyze(&spec)?;
            print_report(&obs, cli.machine);
            Ok(0)
        }
        Command::Builtin(flags) => {
            let (field, spec) = flags.build()?;
            let obs = analyze(&spec)?;
            if !cli.machine {
                println!("catalog entry: {}", flags.name);
                if flags.name == "thm2.6" {
                    let t = field.reduce(flags.t.expect("validated by builtin"));
                    if field.is_nonzero_square(t) {
                        println!(
                            "t = {t} is a square mod {}; expected: both obstructions vanish",
                            field.p()
                        );
                    } else {
                        println!(
                            "t = {t} is a non-square mod {}; expected: degree-three obstruction of dimension 2",
                            field.p()
                        );
                    }
                }
                if flags.name == "thm3.4" {
                    println!("sign variant: {:?}", Thm34Variant::from(flags.variant));
                }
                println!();
            }
            print_report(&obs, cli.machine);
            Ok(0)
        }
        Command::Xw { p, n, w } => {
            let field = PrimeField::new(*p)?;
            let w = render::parse(field, *n, w)?;
            if w.is_zero() {
                return Err(Error::validation("the target w must be nonzero"));
            }
            let xw = explore::xw_space(&w)?;
            let decomposable = brnr::exterior::partial_decomposability_witness(&w)?.is_some();
            if cli.machine {
                #[derive(Serialize)]
                struct XwOut {
                    p: u64,
                    n: usize,
                    w: String,
                    w_partially_decomposable: bool,
                    dim_xw: usize,
                    xw_basis: Vec<BasisVector>,
                }
                let out = XwOut {
                    p: *p,
                    n: *n,
                    w: render::render(&w),
                    w_partially_decomposable: decomposable,
                    dim_xw: xw.dim(),
                    xw_basis: dual_basis_vectors(&xw, *n),
                };
                println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            } else {
                println!("w = {}", render::render(&w));
                println!(
                    "w is {}partially decomposable (factor u' ^ u){}",
                    if decomposable { "" } else { "NOT " },
                    if decomposable { "" } else { " -- eligible as a search target" },
                );
                println!("dim X_w = {}", xw.dim());
                for bv in dual_basis_vectors(&xw, *n) {
                    println!("  {}", bv.text);
                }
            }
            Ok(0)
        }
        Command::Search { p, n, w, explicit, random, exhaustive, ceiling } => {
            let field = PrimeField::new(*p)?;
            let w = render::parse(field, *n, w)?;
            if w.is_zero() {
                return Err(Error::validation("the target w must be nonzero"));
            }
            let strategy = if let Some(path) = explicit {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::parse(format!("cannot read {}: {e}", path.display())))?;
                Strategy::Explicit(parse_candidate_file(field, *n, &text)?)
            } else if let Some(vals) = random {
                Strategy::Random { dim: vals[0] as usize, count: vals[1] as usize, seed: vals[2] }
            } else if let Some(dim) = exhaustive {
                Strategy::Exhaustive { dim: *dim, ceiling: *ceiling }
            } else {
                return Err(Error::validation(
                    "choose a strategy: --explicit FILE, --random DIM COUNT SEED, or --exhaustive DIM",
                ));
            };
            let machine = cli.machine;
            let total = explore::search(&w, &strategy, |outcome| {
                let gens: Vec<String> =
                    outcome.candidate.generators.iter().map(render::render).collect();
                if machine {
                    #[derive(Serialize)]
                    struct SearchLine<'a> {
                        ordinal: usize,
                        generators: &'a [String],
                        classification: &'a str,
                        report: brnr::obstruction::ObstructionReport,
                    }
                    let line = SearchLine {
                        ordinal: outcome.ordinal,
                        generators: &gens,
                        classification: outcome.classification.label(),
                        report: outcome.obstructions.report(),
                    };
                    println!("{}", serde_json::to_string(&line).expect("serializable"));
                } else {
                    let obs = &outcome.obstructions;
                    println!(
                        "#{}: K2 = {} -> {} (brnr={}, h3={}, order=p^{})",
                        outcome.ordinal,
                        gens.join("; "),
                        outcome.classification.label(),
                        obs.brnr_dim(),
                        obs.h3_lower_dim(),
                        obs.order_exponent()
                    );
                }
            })?;
            if !machine {
                println!("{total} candidate(s) evaluated");
            }
            Ok(0)
        }
        Command::Oracle { file, builtin: builtin_name, p, t, a, b, n, variant, budget } => {
            let spec = match (file, builtin_name) {
                (Some(path), None) => {
                    let text = std::fs::read_to_string(path).map_err(|e| {
                        Error::parse(format!("cannot read {}: {e}", path.display()))
                    })?;
                    parse_presentation(&text)?
                }
                (None, Some(name)) => {
                    let p = p.ok_or_else(|| {
                        Error::validation("--builtin requires --p")
                    })?;
                    BuiltinFlags {
                        name: name.clone(),
                        p,
                        t: *t,
                        a: *a,
                        b: *b,
                        n: *n,
                        variant: *variant,
                    }
                    .build()?
                    .1
                }
                _ => {
                    return Err(Error::validation(
                        "give exactly one of a presentation FILE or --builtin NAME",
                    ))
                }
            };
            run_oracle(&spec, *budget, cli.machine)
        }
        Command::Selftest => {
            let rows = selftest::run();
            let mut failures = Vec::new();
            for row in &rows {
                let tag = match row.status {
                    selftest::Status::Pass => "ok  ",
                    selftest::Status::Fail => "FAIL",
                    selftest::Status::Info => "info",
                };
                if cli.machine {
                    #[derive(Serialize)]
                    struct RowLine<'a> {
                        id: &'a str,
                        status: &'a str,
                        detail: &'a str,
                    }
                    println!(
                        "{}",
                        serde_json::to_string(&RowLine {
                            id: &row.id,
                            status: tag.trim(),
                            detail: &row.detail
                        })
                        .expect("serializable")
                    );
                } else {
                    println!("[{tag}] {}: {}", row.id, row.detail);
                }
                if row.status == selftest::Status::Fail {
                    failures.push(row.id.clone());
                }
            }
            if failures.is_empty() {
                if !cli.machine {
                    println!("selftest: all rows passed");
                }
                Ok(0)
            } else {
                if !cli.machine {
                    println!("selftest: {} failing row(s): {}", failures.len(), failures.join(", "));
                }
                Ok(5)
            }
        }
    }
}

/// One candidate per line, generators separated by ';'. '#' comments and
/// blank lines are ignored.
fn parse_candidate_file(
    field: PrimeField,
    n: usize,
    text: &str,
) -> Result<Vec<Vec<MultiVector>>, Error> {
    let mut sets = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut gens = Vec::new();
        for part in line.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let mv = render::parse(field, n, part)
                .map_err(|e| Error::parse_at(idx + 1, e.to_string()))?;
            gens.push(mv);
        }
        if gens.is_empty() {
            return Err(Error::parse_at(idx + 1, "candidate line has no generators"));
        }
        sets.push(gens);
    }
    if sets.is_empty() {
        return Err(Error::parse("candidate file has no candidates"));
    }
    Ok(sets)
}

fn dual_basis_vectors(s: &Subspace, n: usize) -> Vec<BasisVector> {
    subspace_multivectors(s, n, 2, Side::Dual)
        .expect("dual bivector subspace")
        .iter()
        .map(|mv| BasisVector { coords: mv.coords().to_vec(), text: render::render(mv) })
        .collect()
}

fn print_report(obs: &Obstructions, machine: bool) {
    if machine {
        println!("{}", obs.report().to_json());
        return;
    }
    let spec = &obs.spec;
    let n = spec.dim_u();
    println!(
        "group: p = {}, |G| = p^{} (center dim {}, quotient dim {})",
        spec.p(),
        obs.order_exponent(),
        spec.dim_v(),
        n
    );
    if !obs.center_minimal {
        println!("note: the center is strictly larger than the commutator subgroup;");
        println!("      the Brauer interpretation below assumes they are equal");
    }
    let line = |label: &str, s: &Subspace, d: usize, side: Side| {
        let texts: Vec<String> = subspace_multivectors(s, n, d, side)
            .expect("report subspaces are wedge subspaces")
            .iter()
            .map(render::render)
            .collect();
        if texts.is_empty() {
            println!("{label}: dim 0");
        } else {
            println!("{label}: dim {}, basis {}", s.dim(), texts.join(", "));
        }
    };
    line("K^2    ", &obs.k2, 2, Side::Dual);
    line("S^2    ", &obs.s2, 2, Side::Primal);
    line("S^2_dec", &obs.s2_dec, 2, Side::Primal);
    println!("K^2_max: dim {}", obs.k2_max.dim());
    println!("K^3    : dim {}", obs.k3.dim());
    line("S^3    ", &obs.s3, 3, Side::Primal);
    line("S^3_dec", &obs.s3_dec, 3, Side::Primal);
    println!("K^3_max: dim {}", obs.k3_max.dim());
    if !obs.s3_witnesses.is_empty() {
        let texts: Vec<String> = obs
            .s3_witnesses
            .iter()
            .map(|coords| {
                let mv = MultiVector::from_coords(spec.field(), n, 3, Side::Primal, coords.clone())
                    .expect("witness coordinates");
                render::render(&mv)
            })
            .collect();
        println!("witness classes spanning S^3/S^3_dec: {}", texts.join(", "));
    }
    println!("Br_nr dimension: {}", obs.brnr_dim());
    println!("H^3_nr lower-bound dimension: {}", obs.h3_lower_dim());
}

fn run_oracle(spec: &CentralExtensionSpec, budget: u128, machine: bool) -> Result<u8, Error> {
    let obs = analyze(spec)?;
    let n = spec.dim_u();

    enum Outcome {
        Agree(usize),
        Disagree { fast: usize, oracle: usize },
        Refused { work: u128 },
    }
    let mut results: Vec<(&str, Outcome)> = Vec::new();

    let classify = |r: Result<Subspace, Error>, reference: &Subspace| -> Result<Outcome, Error> {
        match r {
            Ok(oracle) if &oracle == reference => Ok(Outcome::Agree(oracle.dim())),
            Ok(oracle) => Ok(Outcome::Disagree { fast: reference.dim(), oracle: oracle.dim() }),
            Err(Error::Budget { work, .. }) => Ok(Outcome::Refused { work }),
            Err(e) => Err(e),
        }
    };
    results.push((
        "pair-enumeration oracle, degree 2",
        classify(sdec_oracle(&obs.s2, n, 2, budget), &obs.s2_dec)?,
    ));
    results.push((
        "pair-enumeration oracle, degree 3",
        classify(sdec_oracle(&obs.s3, n, 3, budget), &obs.s3_dec)?,
    ));
    results.push((
        "square-vanishing oracle, degree 2",
        classify(plucker_oracle_s2(&obs.s2, n, budget), &obs.s2_dec)?,
    ));

    let mut any_ran = false;
    let mut any_disagree = false;
    for (name, outcome) in &results {
        match outcome {
            Outcome::Agree(dim) => {
                any_ran = true;
                if machine {
                    println!("{{\"check\":\"{name}\",\"status\":\"agree\",\"dim\":{dim}}}");
                } else {
                    println!("{name}: agree (dim {dim})");
                }
            }
            Outcome::Disagree { fast, oracle } => {
                any_ran = true;
                any_disagree = true;
                if machine {
                    println!("{{\"check\":\"{name}\",\"status\":\"disagree\",\"fast_dim\":{fast},\"oracle_dim\":{oracle}}}");
                } else {
                    println!("{name}: DISAGREE (sweep dim {fast}, oracle dim {oracle})");
                }
            }
            Outcome::Refused { work } => {
                if machine {
                    println!("{{\"check\":\"{name}\",\"status\":\"refused\",\"work\":{work},\"budget\":{budget}}}");
                } else {
                    println!("{name}: refused ({work} steps needed, budget {budget})");
                }
            }
        }
    }
    if any_disagree {
        Ok(5)
    } else if !any_ran {
        if !machine {
            println!("all oracles refused: raise --budget");
        }
        Ok(4)
    } else {
        Ok(0)
    }
}
