use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use eternalbar::acceptance::selftest;
use eternalbar::complex::{Chain, ComplexError, FilteredComplex};
use eternalbar::persistence::{Barcode, ColimitClass, Presentation};
use eternalbar::spectral::{integer_invariant_of, spectral_invariant, AlgebraError, LoadError, PersistenceAlgebra};
use eternalbar::torus::{parse_class, parse_ham_spec, SphereValue, TorusError};
use eternalbar::{Exponent, Level};

#[derive(Parser)]
#[command(
    name = "eternalbar",
    version,
    about = "Barcodes, eternal classes and spectral invariants"
)]
struct Cli {
    /// Print finite values as decimals with this many digits instead of
    /// exact rationals.
    #[arg(long, global = true, value_name = "DIGITS")]
    decimal: Option<usize>,
    /// Emit JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the barcode of a barcode or presentation document.
    Barcode {
        file: PathBuf,
        /// Draw the bars as ASCII lines.
        #[arg(long)]
        render: bool,
        #[arg(long, default_value_t = 60)]
        width: usize,
    },
    /// Spectral invariant and eternal flag of a colimit class.
    Spectral {
        file: PathBuf,
        /// Bar indices of the class, e.g. `0,2`.
        #[arg(long, value_name = "INDICES")]
        class: String,
        /// Also print the integer invariant for this loop period.
        #[arg(long)]
        period: Option<Exponent>,
    },
    /// Homology of a filtered complex, or the minimal level of one class.
    Complex {
        file: PathBuf,
        /// Cycle representing the class, e.g. `x1,x2@3/2`.
        #[arg(long, value_name = "CHAIN")]
        min_filtration: Option<String>,
    },
    /// Spectral invariants of a 1-homogeneous Hamiltonian on the flat torus.
    Torus {
        /// `linear:a1,..,an`, `const:s`, `pl:<file>`, `samples:<file>`, or a
        /// `+`-separated sum.
        #[arg(long)]
        ham: String,
        /// Classes `k1,..,kn`; separate several with `;` or repeat the flag.
        #[arg(long, required = true)]
        classes: Vec<String>,
        /// List the critical values for each class.
        #[arg(long)]
        spectrum: bool,
        /// Print the oscillation max H − min H.
        #[arg(long)]
        gamma: bool,
        /// Dimension for specs made only of constants.
        #[arg(long)]
        dim: Option<usize>,
        /// Emit CSV on stdout.
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Run every verifier on a persistence-algebra document.
    AlgebraVerify {
        file: PathBuf,
        /// Loop period used by the conjugation check.
        #[arg(long, default_value = "1")]
        period: Exponent,
    },
    /// Run the worked examples and every acceptance criterion.
    Selftest,
}

/// Exit 1 for a failed verification, 2 for unusable input.
enum Failure {
    Verification(String),
    Malformed(String),
}

type Outcome = Result<String, Failure>;

fn malformed(e: impl ToString) -> Failure {
    Failure::Malformed(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn json_error(path: &Path, e: &serde_json::Error) -> Failure {
    Failure::Malformed(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
}

fn level(l: &Level, decimal: Option<usize>) -> String {
    l.render(decimal)
}

fn pretty(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("values serialize")
}

/// Accepts either `{"bars": …}` or a presentation `{"generators": …}`.
fn load_barcode(path: &Path) -> Result<Barcode, Failure> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| json_error(path, &e))?;
    let anchored = |e: &dyn std::fmt::Display| Failure::Malformed(format!("{}: {e}", path.display()));
    if value.get("generators").is_some() {
        let p = Presentation::from_json(&text).map_err(|e| json_error(path, &e))?;
        p.barcode().map_err(|e| anchored(&e))
    } else {
        let b = Barcode::from_json(&text).map_err(|e| json_error(path, &e))?;
        b.validate().map_err(|e| anchored(&e))?;
        Ok(b)
    }
}

fn barcode(cli: &Cli, file: &Path, render: bool, width: usize) -> Outcome {
    let b = load_barcode(file)?;
    let full = b.bars.iter().filter(|x| x.is_full()).count();
    let finite = b
        .bars
        .iter()
        .filter(|x| x.birth.is_finite() && x.death.is_finite())
        .count();
    let half = b.len() - full - finite;
    let eternal = b.eternal_subspace().len();
    if cli.json {
        let bars: Vec<Value> = b
            .bars
            .iter()
            .map(|x| json!({"birth": level(&x.birth, cli.decimal), "death": level(&x.death, cli.decimal)}))
            .collect();
        return Ok(pretty(json!({
            "bars": bars,
            "full": full,
            "half_infinite": half,
            "finite": finite,
            "eternal_dimension": eternal,
            "rfh_rank": b.rfh_rank(),
        })));
    }
    let mut out = String::new();
    for (i, x) in b.bars.iter().enumerate() {
        let (lo, hi) = (level(&x.birth, cli.decimal), level(&x.death, cli.decimal));
        let shown = match (&x.birth, &x.death) {
            (Level::NegInf, Level::PosInf) => "(-inf,inf)".to_string(),
            (Level::NegInf, _) => format!("(-inf,{hi})"),
            _ => format!("[{lo},{hi})"),
        };
        writeln!(out, "{i}: {shown}").expect("string write");
    }
    writeln!(out, "full={full} half_infinite={half} finite={finite}").expect("string write");
    writeln!(out, "eternal_dimension={eternal} rfh_rank={}", b.rfh_rank()).expect("string write");
    if render {
        out.push_str(&b.render(width));
        if !out.ends_with('\n') {
            out.push('\n');
        }
    }
    Ok(out)
}

fn spectral(cli: &Cli, file: &Path, class: &str, period: Option<&Exponent>) -> Outcome {
    let b = load_barcode(file)?;
    let zeta = ColimitClass::parse_spec(class).map_err(Failure::Malformed)?;
    let c = spectral_invariant(&b, &zeta).map_err(malformed)?;
    let eternal = b.is_eternal(&zeta).map_err(malformed)?;
    let ell = match period {
        None => None,
        Some(p) => Some(match integer_invariant_of(&b, &zeta, p) {
            Ok(n) => n.to_string(),
            Err(AlgebraError::EternalClass) => "-inf".to_string(),
            Err(e) => return Err(malformed(e)),
        }),
    };
    let c = level(&c, cli.decimal);
    if cli.json {
        let mut v = json!({"class": zeta.indices().collect::<Vec<_>>(), "c": c, "eternal": eternal});
        if let Some(ell) = ell {
            v["ell"] = json!(ell);
        }
        return Ok(pretty(v));
    }
    let mut out = format!("c={c} eternal={eternal}");
    if let Some(ell) = ell {
        write!(out, " ell={ell}").expect("string write");
    }
    out.push('\n');
    Ok(out)
}

fn complex(cli: &Cli, file: &Path, min_filtration: Option<&str>) -> Outcome {
    let text = read(file)?;
    let c = FilteredComplex::from_json(&text).map_err(|e| json_error(file, &e))?;
    if let Err(v) = c.verify() {
        return Err(Failure::Verification(format!("{}: {v}", file.display())));
    }
    let render = |e: &Exponent| level(&Level::Finite(e.clone()), cli.decimal);
    if let Some(spec) = min_filtration {
        let z = Chain::parse_spec(spec).map_err(malformed)?;
        let (value, representative, exact) = match c.min_filtration(&z) {
            Ok(m) => (render(&m.level), m.representative.to_string(), m.exact),
            Err(ComplexError::ZeroClass) => ("-inf".to_string(), "0".to_string(), true),
            Err(e @ (ComplexError::NotACycle | ComplexError::UnknownGenerator(_))) => return Err(malformed(e)),
            Err(e) => return Err(Failure::Verification(e.to_string())),
        };
        if cli.json {
            return Ok(pretty(
                json!({"level": value, "representative": representative, "exact": exact}),
            ));
        }
        return Ok(format!(
            "level={value} representative={representative}{}\n",
            if exact { "" } else { " (truncated)" }
        ));
    }
    let h = c.homology().map_err(|e| Failure::Verification(e.to_string()))?;
    let mut rows = Vec::new();
    for class in &h.classes {
        let m = c
            .min_filtration(&class.representative)
            .map_err(|e| Failure::Verification(e.to_string()))?;
        rows.push((class.hclass.clone(), render(&m.level), m.representative.to_string()));
    }
    if cli.json {
        let classes: Vec<Value> = rows
            .iter()
            .map(|(k, l, r)| json!({"hclass": k, "level": l, "representative": r}))
            .collect();
        return Ok(pretty(json!({"rank": h.rank, "classes": classes})));
    }
    let mut out = format!("rank={}\n", h.rank);
    for (i, (k, l, r)) in rows.iter().enumerate() {
        writeln!(out, "{i}: hclass={k} level={l} representative={r}").expect("string write");
    }
    Ok(out)
}

fn torus_failure(e: TorusError) -> Failure {
    match e {
        TorusError::Inconsistent { .. } | TorusError::ResolutionTooCoarse(_) => Failure::Verification(e.to_string()),
        _ => Failure::Malformed(e.to_string()),
    }
}

struct TorusArgs<'a> {
    ham: &'a str,
    classes: &'a [String],
    spectrum: bool,
    gamma: bool,
    dim: Option<usize>,
    csv: bool,
}

fn torus(cli: &Cli, args: TorusArgs<'_>) -> Outcome {
    let h = parse_ham_spec(args.ham, args.dim).map_err(torus_failure)?;
    let classes: Vec<Vec<i64>> = args
        .classes
        .iter()
        .flat_map(|c| c.split(';'))
        .filter(|c| !c.trim().is_empty())
        .map(parse_class)
        .collect::<Result<_, _>>()
        .map_err(torus_failure)?;
    let value = |v: &SphereValue| v.render(cli.decimal);
    let gamma = args.gamma.then(|| value(&h.oscillation_exact()));
    let mut rows = Vec::new();
    for k in &classes {
        let c = value(&h.class_spectral(k).map_err(torus_failure)?);
        let spectrum = if args.spectrum {
            let s = h.spectrum(k).map_err(torus_failure)?;
            Some((s.values.iter().map(value).collect::<Vec<_>>(), s.complete))
        } else {
            None
        };
        let k = k.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        rows.push((k, c, spectrum));
    }
    if cli.json {
        let rows: Vec<Value> = rows
            .into_iter()
            .map(|(k, c, s)| {
                let mut v = json!({"k": k, "c": c});
                if let Some(g) = &gamma {
                    v["gamma"] = json!(g);
                }
                if let Some((values, complete)) = s {
                    v["spectrum"] = json!(values);
                    v["spectrum_complete"] = json!(complete);
                }
                v
            })
            .collect();
        return Ok(pretty(json!(rows)));
    }
    let mut out = String::new();
    if args.csv {
        out.push_str("k,c");
        if gamma.is_some() {
            out.push_str(",gamma");
        }
        if args.spectrum {
            out.push_str(",spectrum,spectrum_complete");
        }
        out.push('\n');
    }
    for (k, c, s) in rows {
        if args.csv {
            write!(out, "\"{k}\",{c}").expect("string write");
            if let Some(g) = &gamma {
                write!(out, ",{g}").expect("string write");
            }
            if let Some((values, complete)) = s {
                write!(out, ",\"{}\",{complete}", values.join(";")).expect("string write");
            }
        } else {
            write!(out, "k={k} c={c}").expect("string write");
            if let Some(g) = &gamma {
                write!(out, " gamma={g}").expect("string write");
            }
            if let Some((values, complete)) = s {
                write!(out, " spectrum=[{}]", values.join(", ")).expect("string write");
                if !complete {
                    out.push_str(" (superset)");
                }
            }
        }
        out.push('\n');
    }
    Ok(out)
}

fn algebra_verify(cli: &Cli, file: &Path, period: &Exponent) -> Outcome {
    let text = read(file)?;
    let algebra = match PersistenceAlgebra::load(&text) {
        Ok(a) => a,
        Err(LoadError::Json(e)) => return Err(json_error(file, &e)),
        Err(LoadError::Invalid(e @ (AlgebraError::ShiftRule { .. } | AlgebraError::UnitViolation { .. }))) => {
            return Err(Failure::Verification(format!("{}: {e}", file.display())))
        }
        Err(LoadError::Invalid(e)) => return Err(Failure::Malformed(format!("{}: {e}", file.display()))),
    };
    let reports = algebra.verify(period);
    let unit = algebra.unit_eternal_criterion();
    let passed = reports.iter().all(|r| r.passed());
    let out = if cli.json {
        let checks: Vec<Value> = reports
            .iter()
            .map(|r| json!({"check": r.check, "checked": r.checked, "passed": r.passed(), "violation": r.violation}))
            .collect();
        pretty(json!({
            "checks": checks,
            "unit_eternal": {"eternal": unit.eternal, "unit": unit.unit.indices().collect::<Vec<_>>(), "witness": unit.witness},
        }))
    } else {
        let mut out = String::new();
        for r in &reports {
            match &r.violation {
                None => writeln!(out, "{}: pass ({} checked)", r.check, r.checked),
                Some(v) => writeln!(out, "{}: FAIL {v}", r.check),
            }
            .expect("string write");
        }
        writeln!(
            out,
            "unit-eternal: {} (unit {} = {})",
            unit.eternal, unit.unit, unit.witness
        )
        .expect("string write");
        out
    };
    if passed {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification("algebra verification failed".into()))
    }
}

fn run_selftest(cli: &Cli) -> Outcome {
    let report = selftest();
    let out = if cli.json {
        let examples: Vec<Value> = report
            .examples
            .iter()
            .map(|e| json!({"op": e.op, "passed": e.passed, "detail": e.detail}))
            .collect();
        let criteria: Vec<Value> = report
            .criteria
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "name": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                    "seconds": c.elapsed.as_secs_f64(),
                    "budget_seconds": c.budget.as_secs_f64(),
                })
            })
            .collect();
        pretty(json!({"examples": examples, "criteria": criteria}))
    } else {
        let mut out = String::new();
        let passed = report.examples.iter().filter(|e| e.passed).count();
        writeln!(out, "examples: {passed}/{} pass", report.examples.len()).expect("string write");
        for e in report.examples.iter().filter(|e| !e.passed) {
            writeln!(out, "FAIL example {}: {}", e.op, e.detail).expect("string write");
        }
        for c in &report.criteria {
            writeln!(out, "{c}").expect("string write");
        }
        out
    };
    if report.passed() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification("selftest failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Barcode { file, render, width } => barcode(&cli, file, *render, *width),
        Command::Spectral { file, class, period } => spectral(&cli, file, class, period.as_ref()),
        Command::Complex { file, min_filtration } => complex(&cli, file, min_filtration.as_deref()),
        Command::Torus {
            ham,
            classes,
            spectrum,
            gamma,
            dim,
            csv,
        } => torus(
            &cli,
            TorusArgs {
                ham,
                classes,
                spectrum: *spectrum,
                gamma: *gamma,
                dim: *dim,
                csv: *csv,
            },
        ),
        Command::AlgebraVerify { file, period } => algebra_verify(&cli, file, period),
        Command::Selftest => run_selftest(&cli),
    };
    match outcome {
        Ok(out) => {
            print!("{out}");
            if cli.json {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Malformed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
