mod args;
mod output;

use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use thiserror::Error;

use cartan_core::algebra::{check_generation, closure_check, jacobi_check, semi_infinite_check, Algebra, CheckReport};
use cartan_core::character::FormalCharacter;
use cartan_core::modules::{build_costandard, composition_multiplicities, simple_character, verify_complex, verify_module_axiom};
use cartan_core::tilting::{char_standard, char_tilting, pi_product, soergel_crosscheck, tilting_multiplicity};

use args::{parse_weight, require_weight, CharObject, Check, Cli, Command, Common};
use output::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] cartan_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("output: {0}")]
    Io(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(cartan_core::Error::Inconsistent(_)) => 1,
            _ => 2,
        }
    }
}

/// Outcome of a command: whether everything it checked held.
type Outcome = Result<bool, CliError>;

fn emit(common: &Common, report: &Report) -> Result<(), CliError> {
    report.emit(common.format, common.output.as_deref())
}

fn cmd_basis(common: &Common, degree: i32) -> Outcome {
    let ctx = common.context()?;
    let alg = Algebra::shared(ctx);
    let slice = alg.slice(degree);
    #[derive(Serialize)]
    struct Entry {
        label: String,
        field: String,
        weight: Vec<i64>,
    }
    #[derive(Serialize)]
    struct Doc {
        algebra: String,
        n: usize,
        degree: i32,
        dim: usize,
        basis: Vec<Entry>,
    }
    let basis: Vec<Entry> = (0..slice.dim())
        .map(|i| Entry {
            label: slice.label(i).to_string(),
            field: slice.element(i).to_string(),
            weight: slice.weight(i).coords().to_vec(),
        })
        .collect();
    let mut report = Report::new(
        format!("{ctx} degree {degree}: dim {}", slice.dim()),
        &["index", "label", "field"],
        Doc {
            algebra: ctx.family().to_string(),
            n: ctx.n(),
            degree,
            dim: slice.dim(),
            basis: Vec::new(),
        },
    )?;
    for (i, e) in basis.iter().enumerate() {
        report.row(vec![i.to_string(), e.label.clone(), e.field.clone()]);
    }
    report.json["basis"] = serde_json::to_value(&basis)?;
    emit(common, &report)?;
    Ok(true)
}

fn check_report(common: &Common, title: String, rep: &CheckReport) -> Outcome {
    let mut report = Report::new(title, &["checked", "pass", "witness"], rep)?;
    report.row(vec![
        rep.checked.to_string(),
        rep.all_pass.to_string(),
        rep.witness.clone().unwrap_or_default(),
    ]);
    emit(common, &report)?;
    if let Some(w) = &rep.witness {
        eprintln!("failure witness: {w}");
    }
    Ok(rep.all_pass)
}

fn cmd_verify(common: &Common, which: Check, weight: Option<&str>, depth: Option<usize>) -> Outcome {
    let ctx = common.context()?;
    let n = common.trunc;
    match which {
        Check::Jacobi => {
            let d = depth.unwrap_or(2) as i32;
            let alg = Algebra::shared(ctx);
            let mut rep = jacobi_check(&alg, d);
            let closure = closure_check(&alg, d);
            rep.checked += closure.checked;
            rep.all_pass &= closure.all_pass;
            rep.witness = rep.witness.or(closure.witness);
            check_report(common, format!("{ctx} Jacobi and closure up to degree {d}"), &rep)
        }
        Check::Si => check_report(
            common,
            format!("{ctx} semi-infinite trace identity"),
            &semi_infinite_check(&Algebra::shared(ctx)),
        ),
        Check::Generation => {
            let alg = Algebra::shared(ctx);
            let mut total = CheckReport {
                checked: 0,
                all_pass: true,
                witness: None,
            };
            for i in 2..=4 {
                let r = check_generation(&alg, i);
                total.checked += r.checked;
                if !r.all_pass && total.all_pass {
                    total.all_pass = false;
                    total.witness = r.witness.map(|w| format!("i={i}: {w}"));
                }
            }
            check_report(common, format!("{ctx} generation by degree one, 2 ≤ i ≤ 4"), &total)
        }
        Check::ModuleAxioms => {
            let lam = require_weight(ctx, weight, "module-axioms")?;
            let d = depth.unwrap_or(3);
            let v = build_costandard(&lam, n)?;
            let rep = verify_module_axiom(&v, d)?;
            check_report(common, format!("{ctx} module axioms on V{lam}, D={d}, truncation {n}"), &rep)
        }
        Check::Complex => {
            let rep = verify_complex(ctx, n)?;
            let mut report = Report::new(
                format!("{ctx} complex V(ω_0) → ⋯ → V(ω_n), truncation {n}"),
                &["position", "degree", "dim", "rank_in", "rank_out", "ok"],
                &rep,
            )?;
            for r in &rep.rows {
                report.row(vec![
                    r.position.to_string(),
                    r.degree.to_string(),
                    r.dim.to_string(),
                    r.rank_in.to_string(),
                    r.rank_out.to_string(),
                    r.ok.to_string(),
                ]);
            }
            emit(common, &report)?;
            if let Some(w) = &rep.witness {
                eprintln!("failure witness: {w}");
            }
            Ok(rep.all_pass)
        }
    }
}

fn char_report(common: &Common, ch: &FormalCharacter, object: &str, weight: Option<&cartan_core::weights::Weight>) -> Result<(), CliError> {
    let ctx = ch.context();
    let doc = ch.to_document(object, weight);
    let title = match weight {
        Some(w) => format!("{ctx} {object}{w}, truncation {}", ch.truncation()),
        None => format!("{ctx} {object}, truncation {}", ch.truncation()),
    };
    let mut headers = vec!["degree".to_string()];
    headers.extend((1..=ctx.weight_len()).map(|i| format!("w{i}")));
    headers.push("mult".to_string());
    let hdr: Vec<&str> = headers.iter().map(String::as_str).collect();
    let mut report = Report::new(title, &hdr, &doc)?;
    for entry in &doc.degrees {
        for we in &entry.weights {
            let mut row = vec![entry.degree.to_string()];
            row.extend(we.coords.iter().map(|c| c.to_string()));
            row.push(we.mult.to_string());
            report.row(row);
        }
    }
    emit(common, &report)
}

fn cmd_char(common: &Common, object: CharObject, weight: Option<&str>) -> Outcome {
    let ctx = common.context()?;
    let n = common.trunc;
    let (ch, name, lam) = match object {
        CharObject::Pi => (pi_product(ctx, n), "pi", None),
        other => {
            let lam = require_weight(ctx, weight, "this character")?;
            let (ch, name) = match other {
                CharObject::Delta => (char_standard(&lam, n)?, "delta"),
                CharObject::Nabla => (build_costandard(&lam, n)?.character(), "nabla"),
                CharObject::Simple => (simple_character(&lam, n)?, "simple"),
                CharObject::Tilting => (char_tilting(&lam, n)?, "tilting"),
                CharObject::Pi => unreachable!(),
            };
            (ch, name, Some(lam))
        }
    };
    char_report(common, &ch, name, lam.as_ref())?;
    Ok(true)
}

fn cmd_compmult(common: &Common, weight: &str) -> Outcome {
    let ctx = common.context()?;
    let lam = parse_weight(ctx, weight)?;
    let n = common.trunc;
    let comp = composition_multiplicities(&build_costandard(&lam, n)?, n)?;
    #[derive(Serialize)]
    struct Factor {
        coords: Vec<i64>,
        shift: usize,
        mult: u64,
    }
    #[derive(Serialize)]
    struct Doc {
        algebra: String,
        n: usize,
        truncation: usize,
        weight: Vec<i64>,
        factors: Vec<Factor>,
    }
    let factors: Vec<Factor> = comp
        .factors
        .iter()
        .map(|((w, s), &m)| Factor {
            coords: w.coords().to_vec(),
            shift: *s,
            mult: m,
        })
        .collect();
    let mut report = Report::new(
        format!("{ctx} composition factors of V{lam}, truncation {n}"),
        &["simple", "shift", "mult"],
        Doc {
            algebra: ctx.family().to_string(),
            n: ctx.n(),
            truncation: n,
            weight: lam.coords().to_vec(),
            factors: Vec::new(),
        },
    )?;
    for ((w, s), m) in &comp.factors {
        report.row(vec![format!("L{w}"), s.to_string(), m.to_string()]);
    }
    report.json["factors"] = serde_json::to_value(&factors)?;
    emit(common, &report)?;
    Ok(true)
}

fn cmd_tiltmult(common: &Common, lambda: &str, mu: &str) -> Outcome {
    let ctx = common.context()?;
    let lam = parse_weight(ctx, lambda)?;
    let mu = parse_weight(ctx, mu)?;
    let m = tilting_multiplicity(&lam, &mu)?;
    #[derive(Serialize)]
    struct Doc {
        algebra: String,
        n: usize,
        lambda: Vec<i64>,
        mu: Vec<i64>,
        multiplicity: u64,
    }
    let mut report = Report::new(
        format!("{ctx} [T{lam} : Δ{mu}]"),
        &["lambda", "mu", "multiplicity"],
        Doc {
            algebra: ctx.family().to_string(),
            n: ctx.n(),
            lambda: lam.coords().to_vec(),
            mu: mu.coords().to_vec(),
            multiplicity: m,
        },
    )?;
    report.row(vec![lam.to_string(), mu.to_string(), m.to_string()]);
    emit(common, &report)?;
    Ok(true)
}

fn cmd_soergel(common: &Common, lambda: &str, mu: &str) -> Outcome {
    let ctx = common.context()?;
    let lam = parse_weight(ctx, lambda)?;
    let mu = parse_weight(ctx, mu)?;
    let n = common.trunc;
    let rep = soergel_crosscheck(&lam, &mu, n)?;
    let fmt = |c: &Option<Vec<i64>>| match c {
        Some(v) => format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
        None => "-".into(),
    };
    let mut report = Report::new(
        format!("{ctx} [T{lam} : Δ{mu}] against [V(−w₀μ−𝓔) : L(−w₀λ−𝓔)], truncation {n}"),
        &["module", "simple", "closed_form", "oracle", "agree"],
        &rep,
    )?;
    report.row(vec![
        format!("V{}", fmt(&rep.module_weight)),
        format!("L{}", fmt(&rep.simple_weight)),
        rep.closed_form.to_string(),
        rep.oracle.map_or("-".into(), |o| o.to_string()),
        if rep.applicable { rep.agree.to_string() } else { "n/a".into() },
    ]);
    emit(common, &report)?;
    if rep.applicable && !rep.agree {
        eprintln!(
            "disagreement: closed form {} vs oracle {:?} (shifts {:?})",
            rep.closed_form, rep.oracle, rep.shifts
        );
        return Ok(false);
    }
    Ok(true)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Basis { common, degree } => cmd_basis(common, *degree),
        Command::Verify {
            which,
            common,
            weight,
            depth,
        } => cmd_verify(common, *which, weight.as_deref(), *depth),
        Command::Char { object, common, weight } => cmd_char(common, *object, weight.as_deref()),
        Command::Compmult { common, weight } => cmd_compmult(common, weight),
        Command::Tiltmult { common, lambda, mu } => cmd_tiltmult(common, lambda, mu),
        Command::Soergel { common, lambda, mu } => cmd_soergel(common, lambda, mu),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
