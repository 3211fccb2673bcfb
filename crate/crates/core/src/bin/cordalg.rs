use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cord_algebra::check::run_checks;
use cord_algebra::config::Tolerances;
use cord_algebra::energy::CordPoint;
use cord_algebra::error::CordError;
use cord_algebra::flow::{FlowTrace, Terminal};
use cord_algebra::incidence::{sample_sets, tangent_boundary_cords, BoundaryCord, SetsExport};
use cord_algebra::pipeline::{compute_cord_algebra, Analysis, ComputeOptions, TargetFraming};
use cord_algebra::ring::Monomial;
use cord_algebra::spec::KnotSpec;

#[derive(Parser)]
#[command(
    name = "cordalg",
    version,
    about = "Cord algebra of a knot from the gradient flow of the chord energy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the cord algebra presentation.
    Compute {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "seifert")]
        framing: FramingArg,
        /// Write one JSON flow trace per index-1 cord into this directory.
        #[arg(long)]
        trace_dir: Option<PathBuf>,
    },
    /// List the critical cords.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Export samples of the sets B, F and S on the torus.
    Sets {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Flow one cord and print its events.
    Trace {
        #[command(flatten)]
        common: Common,
        /// Endpoints as fractions of the knot length, e.g. `0.37,0.81`.
        #[arg(long, value_parser = parse_cord)]
        cord: (f64, f64),
    },
    /// Run the invariant suite.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "seifert")]
        framing: FramingArg,
    },
}

#[derive(Args)]
struct Common {
    /// Knot spec file (JSON).
    spec: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Multiplies every tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
    #[arg(long)]
    max_perturb: Option<usize>,
    /// Defaults to json when the output file ends in `.json`, text otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FramingArg {
    Blackboard,
    Seifert,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn parse_cord(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected s,t")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

impl Common {
    fn load(&self) -> Result<KnotSpec, CordError> {
        KnotSpec::load(&self.spec).map_err(|e| match e {
            CordError::Io(e) => CordError::Spec(format!("{}: {e}", self.spec.display())),
            e => e,
        })
    }

    fn options(&self) -> ComputeOptions {
        let tol = Tolerances::default().with_scale(self.tol_scale);
        let mut opts = ComputeOptions {
            tol,
            ..Default::default()
        };
        if let Some(s) = self.seed {
            opts.seed = s;
        }
        if let Some(m) = self.max_perturb {
            opts.max_perturb = m;
        }
        opts
    }

    fn emit(
        &self,
        text: impl FnOnce() -> String,
        json: impl FnOnce() -> serde_json::Value,
    ) -> Result<(), CordError> {
        let json_file = self
            .output
            .as_ref()
            .is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
        let format = self.format.unwrap_or(if json_file {
            Format::Json
        } else {
            Format::Text
        });
        let body = match format {
            Format::Text => text(),
            Format::Json => serde_json::to_string_pretty(&json())? + "\n",
        };
        match &self.output {
            Some(p) => std::fs::write(p, body)?,
            None => std::io::stdout().write_all(body.as_bytes())?,
        }
        Ok(())
    }
}

impl From<FramingArg> for TargetFraming {
    fn from(f: FramingArg) -> Self {
        match f {
            FramingArg::Blackboard => TargetFraming::Blackboard,
            FramingArg::Seifert => TargetFraming::Seifert,
        }
    }
}

fn exit_code(e: &CordError) -> u8 {
    match e {
        CordError::GenericityExhausted(..) => 1,
        e if e.is_genericity() => 1,
        _ => 2,
    }
}

fn analysis(common: &Common, opts: &ComputeOptions) -> Result<Analysis, CordError> {
    let spec = common.load()?;
    Analysis::build(&spec, &opts.tol)
}

fn compute(
    common: &Common,
    framing: FramingArg,
    trace_dir: Option<PathBuf>,
) -> Result<(), CordError> {
    let spec = common.load()?;
    let opts = ComputeOptions {
        framing: framing.into(),
        trace_dir,
        ..common.options()
    };
    let r = compute_cord_algebra(&spec, &opts)?;
    common.emit(|| r.to_text(), || r.to_json())
}

#[derive(Serialize)]
struct Row<'a> {
    label: &'a str,
    index: u8,
    s: f64,
    t: f64,
    length: f64,
    energy: f64,
    eigenvalues: [f64; 2],
}

fn analyze(common: &Common) -> Result<(), CordError> {
    let opts = common.options();
    let a = analysis(common, &opts)?;
    let l = a.curve.length();
    let rows: Vec<Row> = a
        .critical
        .iter()
        .map(|c| Row {
            label: &c.label,
            index: c.index,
            s: c.cord.s / l,
            t: c.cord.t / l,
            length: c.cord.length,
            energy: c.energy,
            eigenvalues: c.eigenvalues,
        })
        .collect();
    let counts = a.counts();
    common.emit(
        || {
            let mut out = format!("L = {l:.6}, lk = {}\n", a.linking_number);
            out += "label     index  s/L       t/L       length     eigenvalues\n";
            for r in &rows {
                out += &format!(
                    "{:<9} {:>5}  {:.6}  {:.6}  {:.6}  {:+.3e} {:+.3e}\n",
                    r.label, r.index, r.s, r.t, r.length, r.eigenvalues[0], r.eigenvalues[1]
                );
            }
            out += &format!(
                "with m and M: {} index 0, {} index 1, {} index 2, euler {}\n",
                counts.index0,
                counts.index1,
                counts.index2,
                counts.euler()
            );
            out
        },
        || serde_json::json!({ "length": l, "lk": a.linking_number, "critical": rows, "counts": counts }),
    )
}

#[derive(Serialize)]
struct SetsOut {
    #[serde(flatten)]
    sets: SetsExport,
    tangent: Vec<BoundaryCord>,
}

fn sets(common: &Common, grid: usize) -> Result<(), CordError> {
    let opts = common.options();
    let a = analysis(common, &opts)?;
    let out = SetsOut {
        sets: sample_sets(&a.curve, &a.framing, &opts.tol, grid),
        tangent: tangent_boundary_cords(&a.curve, &opts.tol, grid),
    };
    common.emit(
        || {
            format!(
                "grid {grid}: {} F^s samples, {} F^e samples, {} S samples, {} tangent cords\n",
                out.sets.f_start.len(),
                out.sets.f_end.len(),
                out.sets.s.len(),
                out.tangent.len()
            )
        },
        || serde_json::to_value(&out).expect("sets serialize"),
    )
}

fn unit(m: Monomial) -> String {
    match m.to_string() {
        s if s.is_empty() => "1".into(),
        s => s,
    }
}

fn trace_text(t: &FlowTrace, l: f64, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    *out += &format!(
        "{pad}from ({:.6}, {:.6}) length {:.6}\n",
        t.initial.s / l,
        t.initial.t / l,
        t.initial.length
    );
    let mut splits = t.splits.iter().peekable();
    for (i, e) in t.events.iter().enumerate() {
        *out += &format!(
            "{pad}  t={:<10.4} {:?}{:+} at ({:.6}, {:.6})  {} · {}\n",
            e.time,
            e.kind,
            e.direction,
            e.s / l,
            e.t / l,
            unit(e.left),
            unit(e.right)
        );
        while let Some(sp) = splits.next_if(|sp| sp.event == i) {
            *out += &format!("{pad}  split sign {:+} middle u^{}\n", sp.sign, sp.middle);
            trace_text(&sp.first, l, depth + 2, out);
            trace_text(&sp.second, l, depth + 2, out);
        }
    }
    let end = match &t.terminal {
        Terminal::Generator(g) => g.clone(),
        Terminal::Contractible => "contractible".into(),
    };
    *out += &format!(
        "{pad}  ends at {end} after {} steps: {}\n",
        t.steps,
        t.value()
    );
}

fn trace(common: &Common, cord: (f64, f64)) -> Result<(), CordError> {
    let opts = common.options();
    let a = analysis(common, &opts)?;
    let l = a.curve.length();
    let ctx = a.flow_context(&opts.tol, opts.conventions);
    let t = ctx.integrate(CordPoint::new(&a.curve, cord.0 * l, cord.1 * l))?;
    common.emit(
        || {
            let mut out = String::new();
            trace_text(&t, l, 0, &mut out);
            out
        },
        || serde_json::json!({ "length": l, "trace": t, "value": t.value().to_string() }),
    )
}

fn check(common: &Common, framing: FramingArg) -> Result<bool, CordError> {
    let spec = common.load()?;
    let opts = ComputeOptions {
        framing: framing.into(),
        ..common.options()
    };
    let report = run_checks(&spec, &opts)?;
    common.emit(
        || report.to_text(),
        || serde_json::to_value(&report).expect("report serializes"),
    )?;
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute {
            common,
            framing,
            trace_dir,
        } => compute(&common, framing, trace_dir).map(|_| true),
        Command::Analyze { common } => analyze(&common).map(|_| true),
        Command::Sets { common, grid } => sets(&common, grid).map(|_| true),
        Command::Trace { common, cord } => trace(&common, cord).map(|_| true),
        Command::Check { common, framing } => check(&common, framing),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("cordalg: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
