//! `qhopf` — command-line front end for the quantum Hopf fibration toolkit.
//!
//! Results go to stdout, diagnostics to stderr. Exit codes: 0 on success,
//! 1 when a verification check fails (reports are still emitted), 2 on
//! usage errors.

use clap::{Args, Parser, Subcommand};
use qhopf_cli::expr;
use qhopf_core::confluence::check_confluence;
use qhopf_core::connection::{
    check_strong_connection, combine_connections, connections_agree_at, explicit_connection,
    CombineInputs,
};
use qhopf_core::hopf::{hopf_axiom_report, hopf_axiom_report_for};
use qhopf_core::ktheory::{
    bass_collapses_to, bass_idempotent, index_pairing, projection_en, projection_pn, KHomClass,
    PolyMatrix, ProjectionOperand,
};
use qhopf_core::ncpoly::{NCPoly, Weight};
use qhopf_core::oprep::{elementary_matrix, matrix_unit, represent, symbol, RepKind, RepSpec};
use qhopf_core::presentation::PresId;
use qhopf_core::pullback::embed_iota;
use serde_json::json;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qhopf",
    about = "Exact and numerical computations for the standard quantum Hopf fibration",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Args)]
struct AlgebraArg {
    /// Algebra: suq2 | sphere | disc | discext | circle | isometry
    #[arg(long, default_value = "suq2")]
    algebra: String,
}

#[derive(Clone, Args)]
struct NumericArgs {
    /// Deformation parameter in (0,1), decimal or fraction (e.g. 0.5 or 1/2)
    #[arg(long, default_value = "0.5")]
    q: String,
    /// Truncation dimension
    #[arg(long, default_value_t = 64)]
    dim: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite an expression to its PBW normal form
    Normalize {
        expr: String,
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        json: bool,
    },
    /// U(1)-weight of an expression, or `non-homogeneous`
    Weight {
        expr: String,
        #[command(flatten)]
        algebra: AlgebraArg,
        #[arg(long)]
        json: bool,
    },
    /// Verify the Hopf axioms on the generators
    HopfCheck {
        /// Restrict to one algebra (suq2 or circle); default checks both
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Confluence sweep of one presentation's rewrite rules
    Confluence {
        #[command(flatten)]
        algebra: AlgebraArg,
        /// Maximum word length
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Sample budget (0 = exhaustive)
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
    /// Truncated representation of an expression: stats or a matrix dump
    Rep {
        expr: String,
        #[command(flatten)]
        algebra: AlgebraArg,
        #[command(flatten)]
        numeric: NumericArgs,
        /// Write the matrix (row-major, 17 significant digits) to a file
        #[arg(long)]
        dump: Option<std::path::PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Symbol of a Toeplitz-model expression on the circle
    Symbol {
        expr: String,
        #[arg(long, default_value = "disc")]
        algebra: String,
        #[arg(long)]
        json: bool,
    },
    /// Approximate matrix unit e_{n+m,n} inside the quantum disc
    ElemMatrix {
        n: i64,
        m: i64,
        #[command(flatten)]
        numeric: NumericArgs,
        #[arg(long)]
        dump: Option<std::path::PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Embed a quantum SU(2) expression into the pullback; optionally test
    /// line-bundle membership
    FibreCheck {
        expr: String,
        /// Assert membership in L_N
        #[arg(long, allow_negative_numbers = true)]
        ln: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Verify the strong-connection axioms
    ConnCheck {
        #[arg(long, default_value_t = 8)]
        range: i64,
        /// Check the combined connection instead of the explicit one
        #[arg(long)]
        combined: bool,
        #[arg(long)]
        json: bool,
    },
    /// Build the combined connection, verify it, and compare with the
    /// explicit one on nonpositive grades
    ConnCombine {
        #[arg(long, default_value_t = 8)]
        range: i64,
        #[arg(long)]
        json: bool,
    },
    /// Bass idempotent of a lifted invertible
    Bass {
        /// Use the shift lifts S^N, S'^N
        #[arg(long = "N", allow_negative_numbers = true)]
        n: Option<i64>,
        /// JSON file with entries `{"c": [[expr,..],..], "d": [[expr,..],..]}`
        /// in the isometry algebra
        #[arg(long)]
        matrix: Option<std::path::PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Line-bundle projections
    Proj {
        /// The projection p_N over the isometry model
        #[arg(long = "pN", allow_negative_numbers = true)]
        p_n: Option<i64>,
        /// The frame projection of the corepresentation column, |N| <= 6
        #[arg(long = "EN", allow_negative_numbers = true)]
        e_n: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Index pairing of a K-homology class with a projection
    Pair {
        /// K-homology class: id-eps | eps-eps0
        #[arg(long)]
        class: String,
        /// Projection: pN:<k> or EN:<k>
        #[arg(long)]
        proj: String,
        #[arg(long, default_value = "0.5")]
        q: String,
        #[arg(long, default_value_t = 128)]
        dim: usize,
        /// Integer snap tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

enum AppError {
    Usage(String),
    CheckFailed(String),
}

type AppResult = Result<(), AppError>;

fn usage<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Usage(e.to_string())
}

fn parse_algebra(name: &str) -> Result<PresId, AppError> {
    PresId::from_name(name).ok_or_else(|| AppError::Usage(format!("unknown algebra `{}`", name)))
}

fn parse_q(text: &str) -> Result<f64, AppError> {
    let value = if let Some((num, den)) = text.split_once('/') {
        let n: f64 = num.trim().parse().map_err(usage)?;
        let d: f64 = den.trim().parse().map_err(usage)?;
        if d == 0.0 {
            return Err(AppError::Usage("q denominator is zero".into()));
        }
        n / d
    } else {
        text.trim().parse().map_err(usage)?
    };
    if !(value > 0.0 && value < 1.0) {
        return Err(AppError::Usage(format!(
            "q must lie strictly in (0,1), got {}",
            value
        )));
    }
    Ok(value)
}

fn check_dim(dim: usize) -> Result<usize, AppError> {
    if dim < 4 {
        Err(AppError::Usage(format!(
            "dim must be at least 4, got {}",
            dim
        )))
    } else {
        Ok(dim)
    }
}

fn eval_expr(src: &str, pres: PresId) -> Result<NCPoly, AppError> {
    expr::parse_in(src, pres).map_err(AppError::Usage)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
        Err(AppError::CheckFailed(msg)) => {
            eprintln!("check failed: {}", msg);
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> AppResult {
    match cmd {
        Command::Normalize {
            expr: src,
            algebra,
            json,
        } => {
            let pres = parse_algebra(&algebra.algebra)?;
            let p = eval_expr(&src, pres)?.normalize();
            if json {
                println!(
                    "{}",
                    json!({"algebra": pres.name(), "normal_form": p.to_canonical_string()})
                );
            } else {
                println!("{}", p.to_canonical_string());
            }
            Ok(())
        }
        Command::Weight {
            expr: src,
            algebra,
            json,
        } => {
            let pres = parse_algebra(&algebra.algebra)?;
            let p = eval_expr(&src, pres)?;
            match (p.weight(), json) {
                (Weight::Homogeneous(n), false) => println!("{}", n),
                (Weight::Homogeneous(n), true) => {
                    println!("{}", json!({"weight": n}))
                }
                (Weight::NonHomogeneous, false) => println!("non-homogeneous"),
                (Weight::NonHomogeneous, true) => {
                    println!("{}", json!({"weight": serde_json::Value::Null}))
                }
            }
            Ok(())
        }
        Command::HopfCheck { algebra, json } => {
            let reports = match algebra {
                None => hopf_axiom_report(),
                Some(name) => {
                    let pres = parse_algebra(&name)?;
                    if !matches!(pres, PresId::SuQ2 | PresId::Circle) {
                        return Err(AppError::Usage(format!(
                            "{} carries no Hopf structure here",
                            pres
                        )));
                    }
                    vec![hopf_axiom_report_for(pres)]
                }
            };
            let pass = reports.iter().all(|r| r.passed());
            if json {
                println!("{}", serde_json::to_string(&reports).map_err(usage)?);
            } else {
                for r in &reports {
                    let failed: Vec<String> = r
                        .checks
                        .iter()
                        .filter(|c| !c.pass)
                        .map(|c| format!("{}@{}", c.axiom, c.generator))
                        .collect();
                    println!(
                        "{}: {} checks, {}",
                        r.algebra,
                        r.checks.len(),
                        if failed.is_empty() {
                            "all pass".to_string()
                        } else {
                            format!("failures: {}", failed.join(", "))
                        }
                    );
                }
            }
            if pass {
                Ok(())
            } else {
                Err(AppError::CheckFailed("Hopf axiom violations".into()))
            }
        }
        Command::Confluence {
            algebra,
            max_len,
            samples,
            json,
        } => {
            let pres = parse_algebra(&algebra.algebra)?;
            if max_len < 3 {
                return Err(AppError::Usage("max-len must be at least 3".into()));
            }
            let report = check_confluence(pres, max_len, samples);
            if json {
                println!("{}", serde_json::to_string(&report).map_err(usage)?);
            } else {
                println!(
                    "{}: {} words checked ({}), {}",
                    report.presentation,
                    report.words_checked,
                    if report.exhaustive {
                        "exhaustive"
                    } else {
                        "sampled"
                    },
                    if report.passed() {
                        "no divergences".to_string()
                    } else {
                        format!("{} divergences", report.divergences.len())
                    }
                );
                for d in &report.divergences {
                    println!("  witness: {}", d.word);
                }
            }
            if report.passed() {
                Ok(())
            } else {
                Err(AppError::CheckFailed("rewriting divergences found".into()))
            }
        }
        Command::Rep {
            expr: src,
            algebra,
            numeric,
            dump,
            json,
        } => {
            let pres = parse_algebra(&algebra.algebra)?;
            let q = parse_q(&numeric.q)?;
            let dim = check_dim(numeric.dim)?;
            let kind = RepKind::for_algebra(pres).ok_or_else(|| {
                AppError::Usage(format!("no representation is defined on {}", pres))
            })?;
            let spec = RepSpec::new(kind, q, dim).map_err(usage)?;
            let p = eval_expr(&src, pres)?;
            let m = represent(&p, &spec).map_err(usage)?;
            if let Some(path) = dump {
                std::fs::write(&path, m.dump()).map_err(usage)?;
                eprintln!("wrote {}x{} matrix to {}", dim, dim, path.display());
            }
            if json {
                println!(
                    "{}",
                    json!({
                        "dim": dim,
                        "q": q,
                        "trace": m.trace(),
                        "norm": m.op_norm(),
                        "max_abs_entry": m.max_abs_entry(),
                    })
                );
            } else {
                println!(
                    "dim {}  q {}  trace {:.12}  norm {:.12}  max|entry| {:.12}",
                    dim,
                    q,
                    m.trace(),
                    m.op_norm(),
                    m.max_abs_entry()
                );
            }
            Ok(())
        }
        Command::Symbol {
            expr: src,
            algebra,
            json,
        } => {
            let pres = parse_algebra(&algebra)?;
            let p = eval_expr(&src, pres)?;
            let s = symbol(&p).map_err(usage)?;
            if json {
                println!("{}", json!({"symbol": s.to_canonical_string()}));
            } else {
                println!("{}", s.to_canonical_string());
            }
            Ok(())
        }
        Command::ElemMatrix {
            n,
            m,
            numeric,
            dump,
            json,
        } => {
            let q = parse_q(&numeric.q)?;
            let dim = check_dim(numeric.dim)?;
            let e = elementary_matrix(n, m, q, dim).map_err(usage)?;
            let unit = matrix_unit((n + m) as usize, n as usize, dim);
            let err = e.sub(&unit).max_abs_entry();
            if let Some(path) = dump {
                std::fs::write(&path, e.dump()).map_err(usage)?;
                eprintln!("wrote {}x{} matrix to {}", dim, dim, path.display());
            }
            if json {
                println!(
                    "{}",
                    json!({"n": n, "m": m, "q": q, "dim": dim, "max_error_vs_unit": err})
                );
            } else {
                println!(
                    "e_{{{},{}}}: max error vs literal unit {:.3e}",
                    n + m,
                    n,
                    err
                );
            }
            Ok(())
        }
        Command::FibreCheck {
            expr: src,
            ln,
            json,
        } => {
            let p = eval_expr(&src, PresId::SuQ2)?;
            let img = embed_iota(&p).map_err(usage)?;
            let membership = ln.map(|n| (n, img.in_grade(n)));
            if json {
                let mut v = img.to_json();
                if let Some((n, ok)) = membership {
                    v["L_N"] = json!({"N": n, "member": ok});
                }
                println!("{}", v);
            } else {
                println!("{}", img.to_json());
                if let Some((n, ok)) = membership {
                    println!("member of L_{}: {}", n, ok);
                }
            }
            match membership {
                Some((n, false)) => Err(AppError::CheckFailed(format!(
                    "image is not supported in grade {}",
                    n
                ))),
                _ => Ok(()),
            }
        }
        Command::ConnCheck {
            range,
            combined,
            json,
        } => {
            if range < 1 {
                return Err(AppError::Usage("range must be at least 1".into()));
            }
            let conn = if combined {
                combine_connections(CombineInputs::standard()).map_err(usage)?
            } else {
                explicit_connection()
            };
            let report = check_strong_connection(&conn, range);
            emit_conn_report(&report, json)?;
            if report.passed() {
                Ok(())
            } else {
                Err(AppError::CheckFailed(
                    "strong-connection axiom violations".into(),
                ))
            }
        }
        Command::ConnCombine { range, json } => {
            if range < 1 {
                return Err(AppError::Usage("range must be at least 1".into()));
            }
            let combined = combine_connections(CombineInputs::standard()).map_err(usage)?;
            let report = check_strong_connection(&combined, range);
            let explicit = explicit_connection();
            let agree_on: Vec<i64> = (-range..=0)
                .filter(|&n| connections_agree_at(&combined, &explicit, n))
                .collect();
            let all_agree = agree_on.len() as i64 == range + 1;
            if json {
                println!(
                    "{}",
                    json!({
                        "axioms_pass": report.passed(),
                        "checks": report.checks.len(),
                        "agrees_with_explicit_on": agree_on,
                    })
                );
            } else {
                println!(
                    "combined connection: {} axiom checks, {}; agrees with the explicit connection on {} of {} nonpositive grades",
                    report.checks.len(),
                    if report.passed() { "all pass" } else { "failures found" },
                    agree_on.len(),
                    range + 1
                );
            }
            if report.passed() && all_agree {
                Ok(())
            } else {
                Err(AppError::CheckFailed(
                    "combined connection verification failed".into(),
                ))
            }
        }
        Command::Bass { n, matrix, json } => {
            let (c, d): (PolyMatrix, PolyMatrix) = match (n, matrix) {
                (Some(k), None) => {
                    if k < 1 {
                        return Err(AppError::Usage("--N must be positive".into()));
                    }
                    let s = NCPoly::generator(PresId::Isometry, "S").map_err(usage)?;
                    let ss = NCPoly::generator(PresId::Isometry, "S'").map_err(usage)?;
                    (vec![vec![s.pow(k as u32)]], vec![vec![ss.pow(k as u32)]])
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path).map_err(usage)?;
                    let v: serde_json::Value = serde_json::from_str(&text).map_err(usage)?;
                    let read = |key: &str| -> Result<PolyMatrix, AppError> {
                        let rows = v[key].as_array().ok_or_else(|| {
                            AppError::Usage(format!("matrix file lacks array `{}`", key))
                        })?;
                        rows.iter()
                            .map(|row| {
                                row.as_array()
                                    .ok_or_else(|| AppError::Usage("rows must be arrays".into()))?
                                    .iter()
                                    .map(|cell| {
                                        let src = cell.as_str().ok_or_else(|| {
                                            AppError::Usage("entries must be strings".into())
                                        })?;
                                        eval_expr(src, PresId::Isometry)
                                    })
                                    .collect()
                            })
                            .collect()
                    };
                    (read("c")?, read("d")?)
                }
                _ => {
                    return Err(AppError::Usage(
                        "pass exactly one of --N <k> or --matrix <file>".into(),
                    ))
                }
            };
            let p = bass_idempotent(&c, &d).map_err(|e| AppError::CheckFailed(e.to_string()))?;
            let idem = p.is_idempotent();
            let collapse = n.and_then(|k| {
                let target = projection_pn(PresId::Isometry, -k).ok()?;
                Some(bass_collapses_to(&p, &target))
            });
            if json {
                let mut v = p.to_json();
                v["idempotent"] = json!(idem);
                if let Some(c) = collapse {
                    v["collapses_to_p_minus_N"] = json!(c);
                }
                println!("{}", v);
            } else {
                println!("{}", p.to_json());
                println!("idempotent: {}", idem);
                if let Some(c) = collapse {
                    println!("collapses to p_-N: {}", c);
                }
            }
            if idem && collapse != Some(false) {
                Ok(())
            } else {
                Err(AppError::CheckFailed("Bass verification failed".into()))
            }
        }
        Command::Proj { p_n, e_n, json } => match (p_n, e_n) {
            (Some(k), None) => {
                let p = projection_pn(PresId::Isometry, k).map_err(usage)?;
                let idem = p.is_idempotent() && p.is_self_adjoint();
                if json {
                    let mut v = p.to_json();
                    v["selfadjoint_idempotent"] = json!(idem);
                    println!("{}", v);
                } else {
                    println!("{}", p.to_json());
                    println!("self-adjoint idempotent: {}", idem);
                }
                if idem {
                    Ok(())
                } else {
                    Err(AppError::CheckFailed(
                        "projection verification failed".into(),
                    ))
                }
            }
            (None, Some(k)) => {
                let f = projection_en(k, 6).map_err(|e| AppError::CheckFailed(e.to_string()))?;
                let lambda: Vec<String> = f.lambda_sq().iter().map(|l| l.to_string()).collect();
                let mons: Vec<String> = f
                    .monomials()
                    .iter()
                    .map(|m| m.to_canonical_string())
                    .collect();
                let ok = f.verify_frame_identity() && f.verify_weights();
                if json {
                    println!(
                        "{}",
                        json!({
                            "N": k,
                            "lambda_squared": lambda,
                            "monomials": mons,
                            "frame_identity": ok,
                        })
                    );
                } else {
                    println!("N = {}", k);
                    for (l, m) in lambda.iter().zip(&mons) {
                        println!("  lambda^2 = {:<12} monomial = {}", l, m);
                    }
                    println!("frame identity and weights: {}", ok);
                }
                if ok {
                    Ok(())
                } else {
                    Err(AppError::CheckFailed("frame verification failed".into()))
                }
            }
            _ => Err(AppError::Usage(
                "pass exactly one of --pN <k> or --EN <k>".into(),
            )),
        },
        Command::Pair {
            class,
            proj,
            q,
            dim,
            tol,
        } => {
            let class = KHomClass::from_name(&class)
                .ok_or_else(|| AppError::Usage(format!("unknown class `{}`", class)))?;
            let qv = parse_q(&q)?;
            let dim = check_dim(dim)?;
            let (kind, k) = proj
                .split_once(':')
                .ok_or_else(|| AppError::Usage("projection must look like pN:3 or EN:2".into()))?;
            let k: i64 = k
                .parse()
                .map_err(|_| AppError::Usage(format!("bad projection index `{}`", k)))?;
            let result = match kind {
                "pN" => {
                    let p = projection_pn(PresId::Isometry, k).map_err(usage)?;
                    index_pairing(class, &ProjectionOperand::Exact(&p), qv, dim, tol)
                        .map_err(usage)?
                }
                "EN" => {
                    let f = projection_en(k, 6).map_err(usage)?;
                    index_pairing(class, &ProjectionOperand::Frame(&f), qv, dim, tol)
                        .map_err(usage)?
                }
                other => {
                    return Err(AppError::Usage(format!(
                        "unknown projection kind `{}`",
                        other
                    )))
                }
            };
            println!("{}", json!({"raw": result.raw, "snapped": result.snapped}));
            if result.snapped.is_some() {
                Ok(())
            } else {
                Err(AppError::CheckFailed(format!(
                    "pairing {} did not snap to an integer within {}",
                    result.raw, tol
                )))
            }
        }
    }
}

fn emit_conn_report(report: &qhopf_core::connection::ConnReport, json: bool) -> AppResult {
    if json {
        println!("{}", serde_json::to_string(report).map_err(usage)?);
    } else {
        println!(
            "range {}: {} checks, {}",
            report.range,
            report.checks.len(),
            if report.passed() {
                "all pass".to_string()
            } else {
                format!("{} failures", report.failures().len())
            }
        );
        for f in report.failures() {
            println!(
                "  FAIL {} at grade {}: {}",
                f.check,
                f.n,
                f.residual.as_deref().unwrap_or("-")
            );
        }
    }
    Ok(())
}
