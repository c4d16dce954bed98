use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use surface_deform::decoder::{BenchRow, MemoryExperiment, NoiseModel};
use surface_deform::doc::{code_after, emit_schedule, parse_schedule, run, Overrides, ScheduleDocument};
use surface_deform::render::{render_ascii, render_svg};
use surface_deform::{build_code, Error, LatticeSpec, Result, StringPath};

/// Output directory when `--out` is not given.
const OUT_ENV: &str = "SURFACE_DEFORM_OUT";

#[derive(Parser)]
#[command(name = "surface-deform", version, about = "Surface-code deformation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

#[derive(clap::Args)]
struct NoiseArgs {
    /// Sets all three probabilities at once.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    p_flip_x: Option<f64>,
    #[arg(long)]
    p_flip_z: Option<f64>,
    #[arg(long)]
    p_meas: Option<f64>,
}

impl NoiseArgs {
    fn model(&self, base: Option<NoiseModel>) -> Option<NoiseModel> {
        let any = self.p.or(self.p_flip_x).or(self.p_flip_z).or(self.p_meas).is_some();
        if !any {
            return None;
        }
        let mut m = self.p.map(NoiseModel::uniform).or(base).unwrap_or(NoiseModel::uniform(0.0));
        m.p_flip_x = self.p_flip_x.unwrap_or(m.p_flip_x);
        m.p_flip_z = self.p_flip_z.unwrap_or(m.p_flip_z);
        m.p_meas = self.p_meas.unwrap_or(m.p_meas);
        Some(m)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a schedule document.
    Validate {
        file: PathBuf,
        /// Print the normalized document.
        #[arg(long)]
        emit: bool,
    },
    /// Run a schedule; writes transcript.json and summary.json.
    Run {
        file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Memory experiment on square patches; prints TSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
        distances: Vec<usize>,
        #[command(flatten)]
        noise: NoiseArgs,
        /// Noisy rounds per trial; defaults to the distance.
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw the lattice of a document, optionally after some steps.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
        /// Number of steps to apply before drawing.
        #[arg(long, default_value_t = 0)]
        step: usize,
        /// JSON list of strings to overlay.
        #[arg(long)]
        strings: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Document(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ScheduleDocument> {
    parse_schedule(&read(path)?).map_err(|e| match e {
        Error::Document(m) => Error::Document(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn out_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Document(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join(name), text).map_err(io)
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { file, emit } => {
            let doc = load(&file)?;
            if emit {
                print!("{}", emit_schedule(&doc));
            } else {
                let code = doc.build()?;
                println!("ok: {} steps, n={} k={}", doc.steps.len(), code.layout().active.len(), code.k());
            }
        }
        Command::Run { file, seed, noise, out } => {
            let doc = load(&file)?;
            let model = noise.model(doc.noise);
            if let Some(m) = &model {
                m.validate()?;
            }
            let res = run(&doc, Overrides { seed, noise: model })?;
            let summary = serde_json::to_string_pretty(&res.summary).expect("summary serializes") + "\n";
            match out_dir(out) {
                Some(dir) => {
                    write(&dir, "transcript.json", &res.transcript.to_json())?;
                    write(&dir, "summary.json", &summary)?;
                }
                None => print!("{}", res.transcript.to_json()),
            }
            eprint!("{summary}");
        }
        Command::Bench { distances, noise, rounds, trials, seed, out } => {
            let model = noise.model(None).unwrap_or(NoiseModel::uniform(0.003));
            model.validate()?;
            let mut tsv = String::from(BenchRow::HEADER);
            tsv.push('\n');
            for d in distances {
                let code = build_code(&LatticeSpec::standard_patch(d as i32, d as i32), d * d)?;
                let row = MemoryExperiment::new(&code)?.monte_carlo(&model, rounds.unwrap_or(d), trials, seed, d);
                tsv.push_str(&row.tsv());
                tsv.push('\n');
            }
            match out_dir(out) {
                Some(dir) => write(&dir, "bench.tsv", &tsv)?,
                None => print!("{tsv}"),
            }
        }
        Command::Render { file, format, step, strings, seed, out } => {
            let doc = load(&file)?;
            let code = code_after(&doc, step, seed)?;
            let strings: Vec<StringPath> = match strings {
                Some(p) => serde_json::from_str(&read(&p)?)
                    .map_err(|e| Error::Document(format!("{}: line {} column {}: {e}", p.display(), e.line(), e.column())))?,
                None => Vec::new(),
            };
            let (text, name) = match format {
                Format::Ascii => (render_ascii(&code, &strings), "render.txt"),
                Format::Svg => (render_svg(&code, &strings), "render.svg"),
            };
            match out_dir(out) {
                Some(dir) => write(&dir, name, &text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
