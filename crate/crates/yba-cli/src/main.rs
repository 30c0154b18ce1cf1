//! `yba` — command-line access to the exact-arithmetic toolkit: graded
//! dimension series, rank computations, rewriting, dual bases, cell
//! complexes, word labelings, morphism checks, and a cross-check
//! verification suite.
//!
//! Output is deterministic: the same argv produces byte-identical output
//! (JSON numbers that may exceed 64 bits are emitted as decimal strings,
//! object keys are sorted, and wall-clock timing goes to stderr only).
//! Exit codes: 0 success, 1 at least one verification check failed,
//! 2 usage or resource-cap error.

mod checks;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use yba::caps::Caps;
use yba::dual::{
    a_basis, nbc_top_basis, orthogonality_check, qa0_bidegree_counts, qa0_degree_counts,
};
use yba::liealg::{check_morphism, lie_graded_dims};
use yba::ncalg::{
    count_legal, enumerate_legal, graded_dimension, Convention, RewriteSystem, Strategy,
};
use yba::presentations::{broken_psi_map, cabling_map, psi_map, PresKind, Presentation};
use yba::series::{p_poly, p_poly_via_egf, u_hilbert, witt_inversion, HilbertKind};
use yba::topo::{homology, perm_complex, quotient_complex, ChainComplex, QuotientSpace};
use yba::univ::{alpha, check_injectivity, check_rho_disjointness};
use yba::Error;

#[derive(Parser)]
#[command(
    name = "yba",
    version,
    about = "Exact computations for quadratic algebras, dual bases, and block-quotient complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    format: Format,

    /// Cap on cells a face complex may enumerate.
    #[arg(long, global = true)]
    max_cells: Option<usize>,

    /// Cap on monomial columns a rank computation may allocate.
    #[arg(long, global = true)]
    max_columns: Option<usize>,

    /// Worker threads for independent verification checks (0 = all cores).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "text" => Ok(Format::Text),
        "json" => Ok(Format::Json),
        other => Err(format!("unknown format '{other}' (expected text or json)")),
    }
}

fn parse_algebra(s: &str) -> Result<PresKind, String> {
    Ok(match s {
        "tr" => PresKind::Tr,
        "qtr" => PresKind::Qtr,
        "qtr0" => PresKind::Qtr0,
        "pb" => PresKind::Pb,
        "dual-a" => PresKind::DualA,
        "dual-qa" => PresKind::DualQa,
        "dual-qa0" => PresKind::DualQa0,
        other => return Err(format!("unknown algebra '{other}'")),
    })
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    match s {
        "pro1" => Ok(Convention::Pro1),
        "sec6" => Ok(Convention::Sec6),
        other => Err(format!("unknown convention '{other}' (expected pro1 or sec6)")),
    }
}

fn parse_space(s: &str) -> Result<Space, String> {
    match s {
        "P" | "p" => Ok(Space::P),
        "C" | "c" => Ok(Space::C),
        "QC" | "qc" => Ok(Space::Qc),
        other => Err(format!("unknown space '{other}' (expected P, C, or QC)")),
    }
}

#[derive(Clone, Copy)]
enum Space {
    P,
    C,
    Qc,
}

#[derive(Subcommand)]
enum Command {
    /// Graded dimension series from closed-form counting.
    Hilbert {
        /// Algebra family (tr or qtr).
        #[arg(long, value_parser = parse_algebra)]
        algebra: PresKind,
        /// Number of sites.
        #[arg(long)]
        n: usize,
        /// Highest degree of the enveloping series (omit for the
        /// polynomial itself).
        #[arg(long)]
        degree: Option<usize>,
        /// Compute the polynomial through the exponential generating
        /// function route instead of the closed product form.
        #[arg(long)]
        via_egf: bool,
    },
    /// Graded dimensions by exact rank computation.
    Dims {
        #[arg(long, value_parser = parse_algebra)]
        algebra: PresKind,
        #[arg(long)]
        n: u8,
        /// Highest degree to compute.
        #[arg(long)]
        degree: usize,
        /// Dimensions of the quadratic Lie algebra instead of the
        /// associative one.
        #[arg(long)]
        lie: bool,
        /// Lie dimensions predicted from the associative series (no rank
        /// computation; tr and qtr only).
        #[arg(long)]
        witt: bool,
    },
    /// Rewrite an element of the triangular family to its legal
    /// combination.
    NormalForm {
        #[arg(long)]
        n: u8,
        #[arg(long, default_value = "pro1", value_parser = parse_convention)]
        convention: Convention,
        /// Rewriting strategy: leftmost, rightmost, or random.
        #[arg(long, default_value = "leftmost")]
        strategy: String,
        /// Seed for the random strategy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Element in generator syntax, e.g. "r(2,3)*r(1,2) - 2*r(1,3)^2".
        expr: String,
    },
    /// Count legal words per degree.
    CountLegal {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "pro1", value_parser = parse_convention)]
        convention: Convention,
    },
    /// List the legal words of one degree.
    EnumerateLegal {
        #[arg(long)]
        n: u8,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "pro1", value_parser = parse_convention)]
        convention: Convention,
    },
    /// Dual algebra bases and pairings.
    Dual {
        /// What to compute: a | qa0 | nbc | orthogonality.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: Option<u8>,
        /// Sites of one block, comma-separated (for --kind nbc).
        #[arg(long)]
        block: Option<String>,
        /// Primal algebra for --kind orthogonality.
        #[arg(long, value_parser = parse_algebra)]
        algebra: Option<PresKind>,
    },
    /// Build a cell complex and its integral homology.
    Complex {
        /// P (permutohedron), C (plain block quotient), or QC
        /// (order-keeping block quotient).
        #[arg(long, value_parser = parse_space)]
        space: Space,
        #[arg(long)]
        n: u8,
    },
    /// Word labels: label one word, or measure label injectivity and
    /// class disjointness at a given degree.
    Univ {
        #[arg(long)]
        n: u8,
        /// Word to label, e.g. "r(1,3)*r(1,2)".
        #[arg(long)]
        word: Option<String>,
        /// Degree for the injectivity/disjointness measurement.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Check that a generator map respects relations.
    Morphism {
        /// psi | broken-psi | cabling.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: u8,
        /// Target site count for cabling.
        #[arg(long)]
        m: Option<u8>,
        /// Cabling assignments "f(1),f(2),…,f(n)", e.g. "1,2,2".
        #[arg(long)]
        map: Option<String>,
        /// Algebra family for cabling (tr or qtr).
        #[arg(long, value_parser = parse_algebra)]
        algebra: Option<PresKind>,
    },
    /// Run the full cross-check suite.
    Verify {
        /// Largest site count exercised by the scaling checks (2..=6).
        #[arg(long, default_value_t = 4)]
        n_max: u8,
        /// Negative control: flip one relation sign so the fault-detecting
        /// checks must fail.
        #[arg(long)]
        inject_fault: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let mut caps = Caps::default();
    if let Some(c) = cli.max_cells {
        caps.max_cells = c;
    }
    if let Some(c) = cli.max_columns {
        caps.max_columns = c;
    }
    let format = cli.format;
    let jobs = cli.jobs;
    let code = match run(cli.command, &caps, jobs, format) {
        Ok(failed_checks) => {
            if failed_checks == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    };
    eprintln!("elapsed: {:?}", started.elapsed());
    code
}

/// Dispatch one subcommand; returns the number of failed verification
/// checks (always 0 for plain queries).
fn run(cmd: Command, caps: &Caps, jobs: usize, format: Format) -> Result<usize, Error> {
    match cmd {
        Command::Hilbert {
            algebra,
            n,
            degree,
            via_egf,
        } => {
            let kind = hilbert_kind(algebra)?;
            let coeffs: Vec<String> = match degree {
                Some(d) => u_hilbert(kind, n, d)
                    .iter()
                    .map(|r| r.to_integer().to_string())
                    .collect(),
                None => {
                    let poly = if via_egf {
                        p_poly_via_egf(kind, n)
                    } else {
                        p_poly(kind, n)
                    };
                    poly.coeffs()
                        .iter()
                        .map(|r| r.to_integer().to_string())
                        .collect()
                }
            };
            emit(format, &json!({ "coeffs": coeffs }));
            Ok(0)
        }
        Command::Dims {
            algebra,
            n,
            degree,
            lie,
            witt,
        } => {
            let dims: Vec<String> = if witt {
                let kind = hilbert_kind(algebra)?;
                witt_inversion(&u_hilbert(kind, n as usize, degree))?
                    .iter()
                    .map(|v| v.to_string())
                    .collect()
            } else if lie {
                let pres = Presentation::new(algebra, n);
                lie_graded_dims(&pres, degree, caps)?
                    .iter()
                    .map(|v| v.to_string())
                    .collect()
            } else {
                let pres = Presentation::new(algebra, n);
                let mut out = Vec::with_capacity(degree + 1);
                for d in 0..=degree {
                    out.push(graded_dimension(&pres, d, caps)?.to_string());
                }
                out
            };
            emit(format, &json!({ "dims": dims }));
            Ok(0)
        }
        Command::NormalForm {
            n,
            convention,
            strategy,
            seed,
            expr,
        } => {
            let strat = match strategy.as_str() {
                "leftmost" => Strategy::Leftmost,
                "rightmost" => Strategy::Rightmost,
                "random" => Strategy::Random(seed),
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown strategy '{other}' (expected leftmost, rightmost, or random)"
                    )))
                }
            };
            let pres = Presentation::new(PresKind::Tr, n);
            let element = pres.parse_element(&expr)?;
            let mut rw = RewriteSystem::new(n, convention, strat);
            let nf = rw.normal_form(&element)?;
            emit(
                format,
                &json!({
                    "input": element.to_string(),
                    "normal_form": nf.to_string(),
                    "terms": nf.terms().count().to_string(),
                }),
            );
            Ok(0)
        }
        Command::CountLegal {
            n,
            degree,
            convention,
        } => {
            let counts: Vec<String> = (0..=degree)
                .map(|d| count_legal(n, d, convention).to_string())
                .collect();
            emit(format, &json!({ "counts": counts }));
            Ok(0)
        }
        Command::EnumerateLegal {
            n,
            degree,
            convention,
        } => {
            let words: Vec<String> = enumerate_legal(n, degree, convention, caps)?
                .iter()
                .map(|w| w.to_string())
                .collect();
            emit(format, &json!({ "degree": degree.to_string(), "words": words }));
            Ok(0)
        }
        Command::Dual {
            kind,
            n,
            block,
            algebra,
        } => {
            let value = match kind.as_str() {
                "a" => {
                    let n = need(n, "--n")?;
                    let basis = a_basis(n);
                    let counts: Vec<String> =
                        basis.iter().map(|v| v.len().to_string()).collect();
                    let monomials: Vec<Vec<String>> = basis
                        .iter()
                        .map(|v| v.iter().map(|m| m.to_string()).collect())
                        .collect();
                    json!({ "degree_counts": counts, "monomials": monomials })
                }
                "qa0" => {
                    let n = need(n, "--n")?;
                    let counts: Vec<String> = qa0_degree_counts(n)
                        .iter()
                        .map(|v| v.to_string())
                        .collect();
                    let bidegree: Vec<Vec<String>> = qa0_bidegree_counts(n)
                        .iter()
                        .map(|row| row.iter().map(|v| v.to_string()).collect())
                        .collect();
                    json!({ "degree_counts": counts, "bidegree": bidegree })
                }
                "nbc" => {
                    let sites_arg = block.ok_or_else(|| {
                        Error::InvalidInput("--kind nbc needs --block, e.g. --block 1,3,5".into())
                    })?;
                    let sites = parse_sites(&sites_arg)?;
                    let monomials: Vec<String> =
                        nbc_top_basis(&sites).iter().map(|m| m.to_string()).collect();
                    json!({ "monomials": monomials })
                }
                "orthogonality" => {
                    let n = need(n, "--n")?;
                    let algebra = algebra.ok_or_else(|| {
                        Error::InvalidInput(
                            "--kind orthogonality needs --algebra (tr, qtr, or qtr0)".into(),
                        )
                    })?;
                    let rep = orthogonality_check(&Presentation::new(algebra, n))?;
                    json!({
                        "primal_rank": rep.primal_rank.to_string(),
                        "dual_rank": rep.dual_rank.to_string(),
                        "square_dimension": rep.square_dimension.to_string(),
                        "nonzero_pairings": rep.nonzero_pairings.to_string(),
                        "holds": rep.holds(),
                    })
                }
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown dual computation '{other}' (expected a, qa0, nbc, or orthogonality)"
                    )))
                }
            };
            emit(format, &value);
            Ok(0)
        }
        Command::Complex { space, n } => {
            let cc = match space {
                Space::P => perm_complex(n, caps)?,
                Space::C => quotient_complex(QuotientSpace::C, n, caps)?,
                Space::Qc => quotient_complex(QuotientSpace::Qc, n, caps)?,
            };
            emit(format, &complex_json(&cc)?);
            Ok(0)
        }
        Command::Univ { n, word, degree } => {
            let value = match (word, degree) {
                (Some(text), _) => {
                    let pres = Presentation::new(PresKind::Tr, n);
                    let element = pres.parse_element(&text)?;
                    let mut terms = element.terms();
                    let (w, c) = terms.next().ok_or_else(|| {
                        Error::InvalidInput("cannot label the zero element".into())
                    })?;
                    if terms.next().is_some() || !c.is_integer() || c.to_integer().to_string() != "1"
                    {
                        return Err(Error::InvalidInput(
                            "labeling applies to a single word with coefficient 1".into(),
                        ));
                    }
                    let label = alpha(w, n)?;
                    json!({
                        "word": w.to_string(),
                        "k": label.k().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        "l": label.l().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        "sigma": label.sigma().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        "degree": label.degree().to_string(),
                    })
                }
                (None, Some(d)) => {
                    let inj = check_injectivity(n, d, caps)?;
                    let dis = check_rho_disjointness(n, d, caps)?;
                    json!({
                        "words": inj.word_count.to_string(),
                        "distinct_labels": inj.distinct_labels.to_string(),
                        "injective": inj.injective(),
                        "pairwise_disjoint": dis.pairwise_disjoint,
                        "peeling_consistent": dis.peeling_consistent,
                    })
                }
                (None, None) => {
                    return Err(Error::InvalidInput(
                        "univ needs --word to label or --degree to measure".into(),
                    ))
                }
            };
            emit(format, &value);
            Ok(0)
        }
        Command::Morphism {
            kind,
            n,
            m,
            map,
            algebra,
        } => {
            let respects = match kind.as_str() {
                "psi" => {
                    let src = Presentation::new(PresKind::Pb, n);
                    let dst = Presentation::new(PresKind::Qtr, n);
                    check_morphism(&src, &dst, &psi_map(n), caps)?
                }
                "broken-psi" => {
                    let src = Presentation::new(PresKind::Pb, n);
                    let dst = Presentation::new(PresKind::Qtr, n);
                    check_morphism(&src, &dst, &broken_psi_map(n), caps)?
                }
                "cabling" => {
                    let m = need(m, "--m")?;
                    let table = map.ok_or_else(|| {
                        Error::InvalidInput(
                            "cabling needs --map with one image per site, e.g. --map 1,2,2".into(),
                        )
                    })?;
                    let images = parse_sites(&table)?;
                    if images.len() != n as usize {
                        return Err(Error::InvalidInput(format!(
                            "--map lists {} images for {n} sites",
                            images.len()
                        )));
                    }
                    let f: Vec<(u8, u8)> = images
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| (i as u8 + 1, v))
                        .collect();
                    let kind = algebra.unwrap_or(PresKind::Tr);
                    let gmap = cabling_map(&f, n, m, kind)?;
                    let src = Presentation::new(kind, m);
                    let dst = Presentation::new(kind, n);
                    check_morphism(&src, &dst, &gmap, caps)?
                }
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown morphism '{other}' (expected psi, broken-psi, or cabling)"
                    )))
                }
            };
            emit(format, &json!({ "respects_relations": respects }));
            Ok(0)
        }
        Command::Verify { n_max, inject_fault } => {
            let suite = checks::build_suite(n_max, caps, inject_fault);
            let outcomes = checks::run_suite(suite, jobs);
            let failed = outcomes.iter().filter(|o| !o.pass).count();
            let status = if failed == 0 { "pass" } else { "fail" };
            match format {
                Format::Json => {
                    let report = json!({
                        "command": "verify",
                        "params": {
                            "n_max": n_max.to_string(),
                            "inject_fault": inject_fault,
                        },
                        "checks": outcomes.iter().map(|o| o.to_json()).collect::<Vec<_>>(),
                        "status": status,
                        "timing_note": "wall-clock timing is written to stderr",
                    });
                    println!("{}", serde_json::to_string(&report).expect("serializable"));
                }
                Format::Text => {
                    for o in &outcomes {
                        if o.pass {
                            println!("ok   {}", o.name);
                        } else {
                            println!("FAIL {}", o.name);
                            println!("     expected: {}", o.expected);
                            println!("     actual:   {}", o.actual);
                        }
                    }
                    println!(
                        "status: {status} ({} of {} checks failed)",
                        failed,
                        outcomes.len()
                    );
                }
            }
            Ok(failed)
        }
    }
}

fn hilbert_kind(kind: PresKind) -> Result<HilbertKind, Error> {
    match kind {
        PresKind::Tr => Ok(HilbertKind::Tr),
        PresKind::Qtr => Ok(HilbertKind::Qtr),
        other => Err(Error::InvalidInput(format!(
            "closed-form series exist for tr and qtr, not {other}"
        ))),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::InvalidInput(format!("missing required {flag}")))
}

fn parse_sites(list: &str) -> Result<Vec<u8>, Error> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse::<u8>()
                .map_err(|_| Error::Parse(format!("bad site '{s}' in '{list}'")))
        })
        .collect()
}

fn complex_json(cc: &ChainComplex) -> Result<Value, Error> {
    let cells: Vec<String> = cc.cell_counts().iter().map(|c| c.to_string()).collect();
    let boundary_nnz: Vec<String> = (0..=cc.top_dim())
        .map(|d| cc.boundary(d).nnz().to_string())
        .collect();
    let groups = homology(cc)?;
    let homology_json: Vec<Value> = groups
        .iter()
        .map(|g| {
            json!({
                "rank": g.free_rank.to_string(),
                "torsion": g.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let total_cells: usize = cc.cell_counts().iter().sum();
    let mut value = Map::new();
    value.insert("cells".into(), json!(cells));
    value.insert("boundary_nnz".into(), json!(boundary_nnz));
    value.insert(
        "d_squared_zero".into(),
        Value::Bool(cc.boundary_squares_to_zero()),
    );
    value.insert(
        "euler_characteristic".into(),
        Value::String(cc.euler_characteristic().to_string()),
    );
    value.insert("homology".into(), Value::Array(homology_json));
    if total_cells <= 64 {
        let labels: Vec<Value> = (0..=cc.top_dim())
            .map(|d| json!(cc.labels(d)))
            .collect();
        value.insert("labels".into(), Value::Array(labels));
    }
    Ok(Value::Object(value))
}

/// Print a results object: compact JSON, or indented key/value text.
fn emit(format: Format, value: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(value).expect("serializable")),
        Format::Text => {
            let rendered = render_text(value, 0);
            print!("{rendered}");
        }
    }
}

fn render_text(value: &Value, indent: usize) -> String {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            let mut out = String::new();
            for (k, v) in map {
                match v {
                    Value::Object(_) | Value::Array(_) if !is_scalar_array(v) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        out.push_str(&render_text(v, indent + 1));
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_text(v))),
                }
            }
            out
        }
        Value::Array(items) => {
            if is_scalar_array(value) {
                format!("{pad}{}\n", scalar_text(value))
            } else {
                let mut out = String::new();
                for (i, item) in items.iter().enumerate() {
                    out.push_str(&format!("{pad}[{i}]\n"));
                    out.push_str(&render_text(item, indent + 1));
                }
                out
            }
        }
        other => format!("{pad}{}\n", scalar_text(other)),
    }
}

fn is_scalar_array(v: &Value) -> bool {
    match v {
        Value::Array(items) => items
            .iter()
            .all(|i| !matches!(i, Value::Array(_) | Value::Object(_))),
        _ => false,
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items
            .iter()
            .map(scalar_text)
            .collect::<Vec<_>>()
            .join(", "),
        other => other.to_string(),
    }
}
