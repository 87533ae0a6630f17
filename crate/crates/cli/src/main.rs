//! Batch front end: one subcommand per pipeline stage, JSON in, JSON out.
//!
//! Exit codes: 0 success, 1 malformed input (usage, JSON, schema),
//! 2 violated mathematical precondition, 3 randomized retries exhausted.

use std::fs;
use std::process::ExitCode;

use serde_json::{json, Value};

use toric_gcp::error::Error;
use toric_gcp::field::FieldCtx;
use toric_gcp::fill::{fill_certificate, irreducible_fill};
use toric_gcp::gcp::{
    chow_form, cube_support, gcp, simplex_support, twisted_chow_support, GcpProblem,
};
use toric_gcp::geom::subdivision::{mixed_volume_inclusion_exclusion, mixed_volume_seeded};
use toric_gcp::geom::support::{Support, SupportTuple};
use toric_gcp::problem::{field_from_prime, ProblemFile};
use toric_gcp::resultant::{toric_resultant, ResultantConfig, ResultantProblem};
use toric_gcp::rootfind::{solve, SolveOptions, TagChoice};

const USAGE: &str = "usage: toric-gcp <mixedvol|fill|resultant|gcp|chow|solve> <problem.json> \
[--seed N] [--field Q|gfp:P] [--max-retries N] [--cap N] [--emit-H] \
[--candidate D.json] [--A simplex|cube|auto|FILE] [--fill auto|FILE]";

struct Flags {
    seed: Option<u64>,
    field: Option<FieldCtx>,
    max_retries: Option<u32>,
    cap: Option<usize>,
    emit_h: bool,
    candidate: Option<String>,
    tag: Option<String>,
    fill: Option<String>,
}

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut f = Flags {
        seed: None,
        field: None,
        max_retries: None,
        cap: None,
        emit_h: false,
        candidate: None,
        tag: None,
        fill: None,
    };
    let mut i = 0;
    while i < args.len() {
        let take = |i: &mut usize| -> Result<String, String> {
            let name = args[*i].clone();
            *i += 1;
            args.get(*i).cloned().ok_or(format!("flag {name} needs a value"))
        };
        match args[i].as_str() {
            "--seed" => {
                f.seed = Some(take(&mut i)?.parse().map_err(|_| "bad --seed value")?)
            }
            "--max-retries" => {
                f.max_retries =
                    Some(take(&mut i)?.parse().map_err(|_| "bad --max-retries value")?)
            }
            "--cap" => f.cap = Some(take(&mut i)?.parse().map_err(|_| "bad --cap value")?),
            "--emit-H" => f.emit_h = true,
            "--candidate" => f.candidate = Some(take(&mut i)?),
            "--A" => f.tag = Some(take(&mut i)?),
            "--fill" => f.fill = Some(take(&mut i)?),
            "--field" => {
                let v = take(&mut i)?;
                if v == "Q" {
                    f.field = Some(FieldCtx::Q);
                } else if let Some(p) = v.strip_prefix("gfp:") {
                    let p: u64 = p.parse().map_err(|_| "bad --field prime")?;
                    let ctx = field_from_prime(p).map_err(|e| e.to_string())?;
                    if p == 2 || p == 3 {
                        eprintln!(
                            "warning: characteristic {p} is outside the supported default \
(p > 3); degenerate behavior is possible"
                        );
                    }
                    f.field = Some(ctx);
                } else {
                    return Err(format!("unknown field {v:?}"));
                }
            }
            other => return Err(format!("unknown flag {other}")),
        }
        i += 1;
    }
    Ok(f)
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::RetriesExhausted { .. } => 3,
        _ => 2,
    }
}

fn load_json(path: &str) -> Result<Value, (u8, String)> {
    let text =
        fs::read_to_string(path).map_err(|e| (1u8, format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| (1u8, format!("invalid JSON in {path}: {e}")))
}

fn load_problem(path: &str, flags: &Flags) -> Result<ProblemFile, (u8, String)> {
    let mut value = load_json(path)?;
    // --field overrides the file before coefficients are parsed
    if let Some(ctx) = &flags.field {
        value["field"] = match ctx {
            FieldCtx::Q => json!("Q"),
            FieldCtx::Gf(p) => json!({"GFp": p}),
        };
    }
    let mut pf =
        ProblemFile::from_json(&value).map_err(|e| (1u8, format!("schema error: {e}")))?;
    if let Some(seed) = flags.seed {
        pf.seed = seed;
    }
    Ok(pf)
}

fn load_support_tuple(path: &str, n: usize) -> Result<SupportTuple, (u8, String)> {
    let value = load_json(path)?;
    let arr = value
        .as_array()
        .ok_or_else(|| (1u8, "expected an array of supports".to_string()))?;
    let entries = arr
        .iter()
        .map(|s| Support::from_json(s, n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| (1u8, format!("schema error: {e}")))?;
    SupportTuple::new(entries).map_err(|e| (1u8, format!("schema error: {e}")))
}

fn load_support(path: &str, n: usize) -> Result<Support, (u8, String)> {
    let value = load_json(path)?;
    Support::from_json(&value, n).map_err(|e| (1u8, format!("schema error: {e}")))
}

fn config_from(pf: &ProblemFile, flags: &Flags) -> ResultantConfig {
    let mut cfg = ResultantConfig { seed: pf.seed, ..Default::default() };
    if let Some(r) = flags.max_retries {
        cfg.max_retries = r;
    }
    if let Some(c) = flags.cap {
        cfg.row_cap = c;
    }
    cfg
}

fn resolve_tag(
    choice: &TagChoice,
    supports: &SupportTuple,
    n: usize,
) -> Result<Support, Error> {
    Ok(match choice {
        TagChoice::Simplex => simplex_support(n),
        TagChoice::Cube => cube_support(n),
        TagChoice::Auto => {
            let hulls = supports.sum_all()?;
            twisted_chow_support(&hulls)?.unwrap_or_else(|| simplex_support(n))
        }
        TagChoice::Explicit(a) => a.clone(),
    })
}

fn run() -> Result<(), (u8, String)> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() < 2 {
        return Err((1, USAGE.to_string()));
    }
    let subcommand = args[0].as_str();
    let path = args[1].as_str();
    let flags = parse_flags(&args[2..]).map_err(|m| (1u8, format!("{m}\n{USAGE}")))?;
    let pf = load_problem(path, &flags)?;
    let cfg = config_from(&pf, &flags);
    let math = |e: Error| (exit_code_for(&e), e.to_string());

    let output: Value = match subcommand {
        "mixedvol" => {
            let e = pf.effective_supports().map_err(math)?;
            let mv = mixed_volume_seeded(&e, pf.seed).map_err(math)?;
            let oracle = mixed_volume_inclusion_exclusion(&e).map_err(math)?;
            if mv != oracle {
                return Err((2, format!("mixed volume routes disagree: {mv} vs {oracle}")));
            }
            eprintln!("mixed volume {mv}");
            json!({ "mixed_volume": mv.to_string() })
        }
        "fill" => {
            let e = pf.effective_supports().map_err(math)?;
            let d = match (&flags.candidate, &pf.fill) {
                (Some(path), _) => load_support_tuple(path, pf.n)?,
                (None, Some(d)) => d.clone(),
                (None, None) => irreducible_fill(&e).map_err(math)?,
            };
            let cert = fill_certificate(&d, &e).map_err(math)?;
            eprintln!(
                "fills: mixed volume {}, irreducible: {}",
                cert.mixed_volume, cert.irreducible
            );
            cert.to_json()
        }
        "resultant" => {
            let e = pf.effective_supports().map_err(math)?;
            if pf.polynomials.len() != pf.n + 1 || e.len() != pf.n + 1 {
                return Err((
                    2,
                    format!("resultant needs n+1 = {} polynomials and supports", pf.n + 1),
                ));
            }
            let problem =
                ResultantProblem { supports: &e, polys: &pf.polynomials, x_vars: &pf.x_vars };
            let res = toric_resultant(&problem, &cfg).map_err(math)?;
            eprintln!(
                "resultant has {} terms (vanishes: {})",
                res.poly.num_terms(),
                res.poly.is_zero()
            );
            json!({ "resultant": res.poly.to_json() })
        }
        "gcp" | "chow" | "solve" => {
            if pf.polynomials.len() != pf.n {
                return Err((2, format!("need n = {} polynomials", pf.n)));
            }
            let system: Vec<_> = pf
                .polynomials
                .iter()
                .map(|p| p.restrict_vars(&pf.x_vars))
                .collect::<Result<_, _>>()
                .map_err(math)?;
            let supports = pf.effective_supports().map_err(math)?;
            let tag_choice = match flags.tag.as_deref() {
                None => match &pf.tag_support {
                    Some(a) => TagChoice::Explicit(a.clone()),
                    None => TagChoice::Simplex,
                },
                Some("simplex") => TagChoice::Simplex,
                Some("cube") => TagChoice::Cube,
                Some("auto") => TagChoice::Auto,
                Some(path) => TagChoice::Explicit(load_support(path, pf.n)?),
            };
            let fill = match flags.fill.as_deref() {
                None => pf.fill.clone(),
                Some("auto") => None,
                Some(path) => Some(load_support_tuple(path, pf.n)?),
            };
            match subcommand {
                "chow" => {
                    let a = resolve_tag(&tag_choice, &supports, pf.n).map_err(math)?;
                    let ch = chow_form(&system, &pf.x_vars, &supports, &a, &cfg).map_err(math)?;
                    eprintln!("chow form vanishes: {}", ch.is_zero());
                    json!({ "A": a.to_json(), "chow": ch.to_json(), "vanishes": ch.is_zero() })
                }
                "gcp" => {
                    let a = resolve_tag(&tag_choice, &supports, pf.n).map_err(math)?;
                    let problem = GcpProblem {
                        system,
                        x_vars: pf.x_vars.clone(),
                        supports,
                        chow_support: a.clone(),
                        fill,
                        field: pf.field,
                    };
                    let r = gcp(&problem, &cfg).map_err(math)?;
                    eprintln!(
                        "mixed volume {}, trailing power k = {}",
                        r.mixed_volume, r.trailing_power
                    );
                    let mut out = json!({
                        "mixed_volume": r.mixed_volume.to_string(),
                        "k": r.trailing_power,
                        "A": a.to_json(),
                        "fill": r.fill_used.entries().iter().map(|s| s.to_json()).collect::<Vec<_>>(),
                        "F_A": r.toric_perturbation.to_json(),
                        "scalar": r.scalar.to_coeff_string(),
                        "Ch_A": r.chow_constant.to_json(),
                    });
                    if flags.emit_h {
                        out["H"] = r.h.to_json();
                    }
                    out
                }
                _ => {
                    let options = SolveOptions {
                        tag: tag_choice,
                        fill,
                        supports: Some(supports),
                        config: cfg,
                        emit_h: flags.emit_h,
                    };
                    let report = solve(&system, &pf.x_vars, pf.field, &options).map_err(math)?;
                    eprintln!(
                        "mixed volume {}, k = {}, {} factors, {} roots",
                        report.mixed_volume,
                        report.trailing_power,
                        report.factors.len(),
                        report.roots.len()
                    );
                    report.to_json()
                }
            }
        }
        other => return Err((1, format!("unknown subcommand {other}\n{USAGE}"))),
    };
    println!("{}", serde_json::to_string(&output).expect("serializable"));
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
