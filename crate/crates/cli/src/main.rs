use clap::{Parser, Subcommand};
use qudit_core::circuit::{self, BackendKind, RunOptions};
use qudit_core::gadgets::{derive_toffoli_corrections, gadget_by_name, gadget_toffoli, prepare_toffoli_ancilla};
use qudit_core::verify::{self, extracted_map, gadget_deviation, Config};
use qudit_core::{Dimension, State};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qudit", version, about = "Qudit stabilizer circuits, gate gadgets and their verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit file.
    Run {
        file: String,
        #[arg(long, default_value = "tableau")]
        backend: BackendKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        shots: usize,
        /// Print the full JSON report instead of a summary.
        #[arg(long)]
        json: bool,
    },
    /// Run the acceptance checks for each dimension.
    Verify {
        #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
        dims: Vec<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Run one gadget on open data and report its map.
    Gadget {
        /// pinv, q, r, rinv, s, sumgadget or toffoli
        name: String,
        /// The parameter of `s`.
        arg: Option<u32>,
        #[arg(long, default_value_t = 3)]
        dim: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run { file, backend, seed, shots, json } => run(&file, backend, seed, shots, json),
        Command::Verify { dims, json } => run_verify(&dims, json),
        Command::Gadget { name, arg, dim, seed } => gadget(&name, arg, dim, seed),
    }
}

fn run(file: &str, backend: BackendKind, seed: u64, shots: usize, as_json: bool) -> ExitCode {
    let source = match std::fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{file}: {e}");
            return ExitCode::from(2);
        }
    };
    let program = match circuit::parse(&source) {
        Ok(p) => p,
        Err(diags) => {
            for d in diags {
                eprintln!("{file}: {d}");
            }
            return ExitCode::from(2);
        }
    };
    let report = match circuit::run(&program, &RunOptions { backend, seed, shots }) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if as_json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    } else {
        print_summary(&report);
    }
    let passed = report["passed"].as_bool().unwrap_or(true) && report.get("agreement").and_then(|a| a.as_bool()).unwrap_or(true);
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_summary(report: &serde_json::Value) {
    let shots = report["shots"].as_array().map_or(0, |s| s.len());
    println!("{shots} shot(s)");
    if let Some(first) = report["shots"].get(0) {
        println!("shot 0 outcomes: {}", first["outcomes"]);
    }
    if let Some(rows) = report["final"]["stabilizer_rows"].as_array() {
        println!("final tableau:");
        for r in rows {
            println!("  {}", r.as_str().unwrap_or_default());
        }
    }
    if let Some(map) = report["final"]["logical_map"].as_array() {
        println!("logical map:");
        for m in map {
            println!("  {}", m.as_str().unwrap_or_default());
        }
    }
    if let Some(a) = report.get("agreement") {
        println!("agreement: {a}");
    }
    if let Some(checks) = report["checks"].as_array() {
        let failed = checks.iter().filter(|c| c["passed"] == false).count();
        println!("checks: {} run, {failed} failed", checks.len());
    }
}

fn run_verify(dims: &[u32], as_json: bool) -> ExitCode {
    let results = match verify::verify(dims, &Config::full()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if as_json {
        println!("{}", serde_json::to_string_pretty(&results).expect("serializable"));
    } else {
        for r in &results {
            println!("{}", r.line());
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if !as_json {
        println!("{} checks, {failed} failed", results.len());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn gadget(name: &str, arg: Option<u32>, dim: u32, seed: u64) -> ExitCode {
    let result = Dimension::new(dim).and_then(|dim| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if name == "toffoli" {
            let table = derive_toffoli_corrections(dim)?;
            let ancilla: State = prepare_toffoli_ancilla(dim, &mut rng)?;
            let input = State::random(dim, 3, &mut rng)?;
            let mut want = input.clone();
            want.apply_gate(qudit_core::Gate::Toffoli, &[0, 1, 2])?;
            let (outcomes, out) = gadget_toffoli(&input, &ancilla, &table, &mut rng, None)?;
            let corrections: serde_json::Map<String, serde_json::Value> = table
                .entries
                .iter()
                .map(|(m, c)| (format!("{}{}{}", m[0], m[1], m[2]), json!(c.iter().map(|g| g.to_string()).collect::<Vec<_>>())))
                .collect();
            return Ok((
                json!({
                    "gadget": "toffoli",
                    "dim": dim.d(),
                    "outcomes": outcomes,
                    "fidelity": out.fidelity(&want),
                    "corrections": corrections,
                }),
                true,
            ));
        }
        let g = gadget_by_name(name, dim, arg)?;
        let map = extracted_map(&g, &mut rng)?;
        let states: Vec<State> = (0..10).map(|_| State::random(dim, g.data, &mut rng)).collect::<qudit_core::Result<_>>()?;
        let paths: Vec<Vec<u32>> =
            (0..20).map(|_| (0..g.measurement_count()).map(|_| rand::Rng::gen_range(&mut rng, 0..dim.d())).collect()).collect();
        let deviation = gadget_deviation(&g, &paths, &states)?;
        let steps: Vec<String> = g.steps.iter().map(|s| s.to_string()).collect();
        Ok((
            json!({
                "gadget": g.name,
                "dim": dim.d(),
                "steps": steps,
                "measurements": g.measurement_count(),
                "map": map,
                "expected": g.expected,
                "target": g.target.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "dense_deviation": deviation,
            }),
            map == g.expected && deviation <= 1e-8,
        ))
    });
    match result {
        Ok((report, ok)) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
