//! Batch front end: parses instance files, dispatches to the toolkit
//! modules, and emits CSV/JSON artifacts. Identical inputs and flags
//! produce byte-identical outputs; timing goes to stderr only.

mod instance;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::Zero;
use serde_json::{json, Value};

use instance::{parse_instance, BuiltRadical, BuiltWreath, Instance};
use wreathkit::cayley::{cayley_ball, graph_isomorphic_budgeted, verify_witness, BallGraph};
use wreathkit::coxeter::{self, dihedral_order, CoxEntry, DihedralOrder};
use wreathkit::grigorchuk::{schreier_ball, GrigGroup, GrigWord, GENERATORS};
use wreathkit::growth::{ball_sizes, growth_report, GrowthTable};
use wreathkit::radicals::{self, ClosureVerdict, EscapeWitness};
use wreathkit::suite;
use wreathkit::walls::cnd_check;
use wreathkit::wreath::WreathElement;

#[derive(Parser)]
#[command(name = "wreathkit", version, about = "Desk-scale probes for locally compact wreath products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ball sizes of a wreath or grigorchuk instance, as CSV.
    Growth {
        instance: String,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        /// Memory cap for the visited set; overrides WREATHKIT_BUDGET_MB.
        #[arg(long)]
        budget_bytes: Option<usize>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<String>,
    },
    /// Rooted-ball isomorphism of two wreath instances.
    Iso {
        first: String,
        second: String,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// Compare unrooted balls instead of rooted ones.
        #[arg(long)]
        unrooted: bool,
        /// Write the witness report (JSON) here instead of stdout.
        #[arg(long)]
        witness: Option<String>,
        #[arg(long)]
        budget_bytes: Option<usize>,
    },
    /// Check the wall-metric properties of a walling instance.
    WallsCheck { instance: String },
    /// Length records of a commensurating-action instance, as JSON.
    PwLengths { instance: String },
    /// Radical descriptors, memberships and closure verdicts, as JSON.
    Radical { instance: String },
    /// Validate a Coxeter instance; optionally run the independence probe.
    Coxeter {
        instance: String,
        /// Probe the relator class at this distance.
        #[arg(long)]
        probe: Option<u32>,
    },
    /// Run the acceptance criteria; summary JSON on stdout.
    Suite {
        /// Run a single criterion (1–10) instead of all.
        #[arg(long)]
        criterion: Option<usize>,
        /// Worker threads; results are independent of this.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the summary JSON here as well.
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn budget_from_env() -> Option<usize> {
    std::env::var("WREATHKIT_BUDGET_MB")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .map(|mb| mb * 1024 * 1024)
}

fn element_json(e: &WreathElement<i64>) -> Value {
    json!({ "lamp": e.lamp(), "top": e.top() })
}

fn write_or_print(out: &Option<String>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| format!("cannot write {path}: {e}")),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Growth { instance, radius, budget_bytes, out } => {
            let budget = budget_bytes.or_else(budget_from_env);
            let parsed = parse_instance(&instance).map_err(|e| e.to_string())?;
            let table = growth_table(parsed, radius, budget)?;
            let mut csv = table.to_csv();
            if let Ok(report) = growth_report(&table) {
                csv.push_str(&format!(
                    "# poly_degree={:.6} poly_residual={:.6} exp_base={:.6} exp_residual={:.6}\n",
                    report.poly_degree, report.poly_residual, report.exp_base, report.exp_residual
                ));
            }
            write_or_print(&out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Iso { first, second, radius, unrooted, witness, budget_bytes } => {
            let budget = budget_bytes.or_else(budget_from_env);
            let g1 = wreath_ball(parse_instance(&first).map_err(|e| e.to_string())?, radius, budget)?;
            let g2 = wreath_ball(parse_instance(&second).map_err(|e| e.to_string())?, radius, budget)?;
            let rooted = !unrooted;
            let outcome =
                graph_isomorphic_budgeted(&g1, &g2, rooted, 10_000_000).map_err(|e| e.to_string())?;
            match outcome.witness {
                Some(map) => {
                    if !verify_witness(&g1, &g2, &map, rooted) {
                        return Err("internal: witness failed verification".into());
                    }
                    let report = json!({
                        "isomorphic": true,
                        "radius": radius,
                        "rooted": rooted,
                        "vertices": g1.vertex_count(),
                        "edges": g1.edge_count(),
                        "witness": map,
                    });
                    let text = format!("{}\n", serde_json::to_string_pretty(&report).unwrap());
                    write_or_print(&witness, &text)?;
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("{}", json!({ "isomorphic": false, "radius": radius, "rooted": rooted }));
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::WallsCheck { instance } => {
            let parsed = parse_instance(&instance).map_err(|e| e.to_string())?;
            let Instance::Walls(w) = parsed else {
                return Err(format!("walls-check needs a walls instance, got {}", parsed.kind()));
            };
            let walling = w.build()?;
            let n = walling.ground().len();
            let k = walling.kernel_matrix();
            let mut metric_ok = true;
            for i in 0..n {
                metric_ok &= k.get(i, i).is_zero();
                for j in 0..n {
                    for l in 0..n {
                        metric_ok &= k.get(i, l) <= &(k.get(i, j).clone() + k.get(j, l).clone());
                    }
                }
            }
            let phi = walling.l1_embed();
            let mut l1_ok = true;
            for x in 0..n {
                for y in 0..n {
                    let dist = phi[x]
                        .iter()
                        .zip(&phi[y])
                        .map(|(a, b)| if a >= b { a.clone() - b.clone() } else { b.clone() - a.clone() })
                        .fold(wreathkit::walls::Weight::zero(), |acc, v| acc + v);
                    l1_ok &= &dist == k.get(x, y);
                }
            }
            let cnd_ok = cnd_check(&k.to_f64(), 1e-9).map_err(|e| e.to_string())?;
            let report = json!({
                "ground": n,
                "walls": walling.walls().len(),
                "pseudo_metric": metric_ok,
                "l1_embedding_exact": l1_ok,
                "cnd_at_1e-9": cnd_ok,
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(if metric_ok && l1_ok && cnd_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::PwLengths { instance } => {
            let parsed = parse_instance(&instance).map_err(|e| e.to_string())?;
            let Instance::Commaction(c) = parsed else {
                return Err(format!("pw-lengths needs a commaction instance, got {}", parsed.kind()));
            };
            let built = c.build()?;
            let ctx = &built.context;
            let mut generator_records = Vec::new();
            for &h in &built.shifts {
                let ell0 = ctx.action.ell0(h).map_err(|e| e.to_string())?;
                generator_records.push(json!({ "generator": h, "ell0": ell0 }));
            }
            let mut element_records = Vec::new();
            for e in &built.elements {
                let ell = ctx.pw_length(e).map_err(|er| er.to_string())?;
                let ell_prime = ctx.second_length(e, &built.ell1);
                element_records.push(json!({
                    "element": element_json(e),
                    "ell": ell,
                    "ell_prime": ell_prime,
                }));
            }
            let report = json!({ "generators": generator_records, "elements": element_records });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Radical { instance } => {
            let parsed = parse_instance(&instance).map_err(|e| e.to_string())?;
            let Instance::Radical(r) = parsed else {
                return Err(format!("radical needs a radical instance, got {}", parsed.kind()));
            };
            let report = match r.build()? {
                BuiltRadical::Shift(inst, gens, elements, budget) => {
                    radical_report(&inst, &gens, &elements, budget)?
                }
                BuiltRadical::Cycles(inst, gens, elements, budget) => {
                    radical_report(&inst, &gens, &elements, budget)?
                }
            };
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Coxeter { instance, probe } => {
            let parsed = parse_instance(&instance).map_err(|e| e.to_string())?;
            let Instance::Coxeter(c) = parsed else {
                return Err(format!("coxeter needs a coxeter instance, got {}", parsed.kind()));
            };
            let matrix = c.build()?;
            let validation = coxeter::validate(&matrix);
            let mut report = json!({
                "valid": validation.is_valid(),
                "violations": validation.violations,
            });
            if let Some(p) = probe {
                let (lo, _) = matrix.window();
                let entry = matrix.entry(lo, lo + p as i64).map_err(|e| e.to_string())?;
                let order = match dihedral_order(entry) {
                    DihedralOrder::Finite(m) => json!(m),
                    DihedralOrder::Infinite => json!("inf"),
                };
                let independent = coxeter::independence_probe(&matrix, p).map_err(|e| e.to_string())?;
                report["probe"] = json!({
                    "p": p,
                    "entry": match entry { CoxEntry::Finite(m) => json!(m), CoxEntry::Infinity => json!("inf") },
                    "dihedral_order": order,
                    "independent": independent,
                });
            }
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(if validation.is_valid() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Suite { criterion, jobs, out } => {
            let ids: Vec<usize> = match criterion {
                Some(id) if (1..=10).contains(&id) => vec![id],
                Some(id) => return Err(format!("criterion {id} out of range 1..=10")),
                None => (1..=10).collect(),
            };
            let results = run_suite(&ids, jobs.max(1));
            let mut all_passed = true;
            for r in &results {
                eprintln!("{}", r.line());
                all_passed &= r.passed;
            }
            let summary = json!({
                "passed": all_passed,
                "criteria": results.iter().map(|r| json!({
                    "id": r.id,
                    "name": r.name,
                    "passed": r.passed,
                    "details": r.details,
                })).collect::<Vec<_>>(),
            });
            let text = format!("{}\n", serde_json::to_string_pretty(&summary).unwrap());
            print!("{text}");
            if let Some(path) = out {
                std::fs::write(&path, &text).map_err(|e| format!("cannot write {path}: {e}"))?;
            }
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn run_suite(ids: &[usize], jobs: usize) -> Vec<suite::CriterionResult> {
    if jobs <= 1 || ids.len() <= 1 {
        return ids.iter().map(|&id| suite::run_criterion(id)).collect();
    }
    // fan criteria out across workers; slots keep the output in id order
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<suite::CriterionResult>>> =
        ids.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(ids.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= ids.len() {
                    break;
                }
                let result = suite::run_criterion(ids[i]);
                *slots[i].lock().unwrap() = Some(result);
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().unwrap().expect("criterion ran")).collect()
}

fn growth_table(parsed: Instance, radius: usize, budget: Option<usize>) -> Result<GrowthTable, String> {
    match parsed {
        Instance::Wreath(w) => match w.build()? {
            BuiltWreath::Shift(ctx, _, gens) => {
                ball_sizes(&ctx, &gens, radius, budget).map_err(|e| e.to_string())
            }
            BuiltWreath::Cycles(ctx, _, gens) => {
                ball_sizes(&ctx, &gens, radius, budget).map_err(|e| e.to_string())
            }
            BuiltWreath::Schreier(ctx, gens) => {
                ball_sizes(&ctx, &gens, radius, budget).map_err(|e| e.to_string())
            }
        },
        Instance::Grigorchuk(g) => {
            // the ray and level also describe a Schreier window; surface its
            // size on stderr as context for the growth table
            let ray = g.build()?;
            if let Ok(window) = schreier_ball(&ray, g.radius.min(8), g.level) {
                eprintln!(
                    "schreier window of {} at radius {}: {} orbit points",
                    g.ray,
                    g.radius.min(8),
                    window.vertices.len()
                );
            }
            let group = GrigGroup::default();
            let gens: Vec<GrigWord> = GENERATORS.iter().map(|&l| GrigWord(vec![l])).collect();
            ball_sizes(&group, &gens, radius, budget).map_err(|e| e.to_string())
        }
        other => Err(format!("growth needs a wreath or grigorchuk instance, got {}", other.kind())),
    }
}

fn wreath_ball(parsed: Instance, radius: usize, budget: Option<usize>) -> Result<BallGraph, String> {
    match parsed {
        Instance::Wreath(w) => match w.build()? {
            BuiltWreath::Shift(ctx, _, gens) => {
                cayley_ball(&ctx, &gens, radius, budget).map_err(|e| e.to_string())
            }
            BuiltWreath::Cycles(ctx, _, gens) => {
                cayley_ball(&ctx, &gens, radius, budget).map_err(|e| e.to_string())
            }
            BuiltWreath::Schreier(ctx, gens) => {
                cayley_ball(&ctx, &gens, radius, budget).map_err(|e| e.to_string())
            }
        },
        other => Err(format!("iso needs wreath instances, got {}", other.kind())),
    }
}

fn radical_report<S>(
    inst: &radicals::RadicalInstance<S>,
    gens: &[WreathElement<i64>],
    elements: &[WreathElement<i64>],
    budget: usize,
) -> Result<Value, String>
where
    S: wreathkit::wreath::HSpace<Top = i64>,
{
    let describe = |d: &radicals::RadicalDescriptor| {
        json!({
            "trivial": d.is_trivial_group(),
            "whole_group": d.is_whole_group(),
            "core_part_order": d.core_part.as_ref().map(|c| c.order()),
            "lamp_part_order": d.lamp_part.as_ref().map(|l| l.order()),
            "top_part": format!("{:?}", d.top_part),
        })
    };
    let w = radicals::predict_w(inst).map_err(|e| e.to_string())?;
    let b = radicals::predict_b(inst).map_err(|e| e.to_string())?;
    let mut element_records = Vec::new();
    for e in elements {
        let verdict = radicals::conj_closure(inst, e, gens, budget).map_err(|er| er.to_string())?;
        let closure = match &verdict {
            ClosureVerdict::Bounded { orbit } => json!({
                "kind": "bounded",
                "orbit_size": orbit.len(),
                "orbit": orbit.iter().map(element_json).collect::<Vec<_>>(),
            }),
            ClosureVerdict::Escaped { witness } => {
                let replayed =
                    radicals::verify_escape(inst, e, witness, 3).map_err(|er| er.to_string())?;
                json!({
                    "kind": "escaped",
                    "witness": witness_json(witness),
                    "replayed": replayed,
                })
            }
            ClosureVerdict::BudgetExhausted => json!({ "kind": "budget-exhausted" }),
        };
        element_records.push(json!({
            "element": element_json(e),
            "in_polycompact": radicals::membership(inst, &w, e),
            "in_bounded": radicals::membership(inst, &b, e),
            "closure": closure,
        }));
    }
    Ok(json!({
        "polycompact": describe(&w),
        "bounded": describe(&b),
        "triviality_conditions": radicals::triviality_conditions(inst).map_err(|e| e.to_string())?,
        "elements": element_records,
    }))
}

fn witness_json(w: &EscapeWitness) -> Value {
    match w {
        EscapeWitness::ShiftTranslation { shift, support_point } => json!({
            "mechanism": "shift-translation",
            "shift": shift,
            "support_point": support_point,
        }),
        EscapeWitness::DeltaProbes { b_value, top } => json!({
            "mechanism": "delta-probes",
            "b_value": b_value,
            "top": top,
        }),
        EscapeWitness::NoncompactValues { x, top } => json!({
            "mechanism": "noncompact-values",
            "x": x,
            "top": top,
        }),
    }
}
