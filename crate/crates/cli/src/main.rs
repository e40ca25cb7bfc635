use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jck_core::io::{
    cmd_classify, cmd_count_components, cmd_group, cmd_retract, frame_to_svg, frames_to_svg,
    validation_report, Document, GroupCommand, Pipeline, RetractOptions, SvgViewport,
};
use jck_core::trees::{canonical_code, enumerate_trees, TreeDocument};
use jck_core::{geometry, curves, Error};

#[derive(Parser)]
#[command(name = "jck", version, about = "Nesting trees, rounding retractions and braided tree automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a circles or curves document for degeneracies and intersections.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Print the nesting tree of a configuration, or normalize a tree document.
    Tree {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        labeled: bool,
    },
    /// Decide whether two configurations lie in the same path component.
    Classify {
        #[arg(long, num_args = 1, required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        labeled: bool,
    },
    /// Compare the tree enumeration with nesting classes of random configurations.
    CountComponents {
        #[arg(long)]
        n: usize,
        /// Defaults to ten times the enumeration count.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Deform a configuration to a round one and emit the frames.
    Retract {
        #[arg(long)]
        input: PathBuf,
        /// Frames per stage.
        #[arg(long, default_value_t = 8)]
        frames: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum, default_value_t = PipelineArg::Auto)]
        pipeline: PipelineArg,
        /// Also write one SVG per frame into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Write per-stage conformal diagnostics here.
        #[arg(long)]
        diagnostics: Option<PathBuf>,
    },
    /// Braided tree automorphism group operations.
    Group {
        #[arg(value_enum)]
        op: GroupOp,
        #[arg(long, num_args = 1, required = true)]
        input: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Auto,
    Convex,
    Conformal,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupOp {
    AutOrder,
    Signature,
    Compose,
    Inverse,
    IsPure,
    IsTrivial,
    Project,
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) | Error::DiskMap { .. } | Error::Undecided(_) => {
                Failure::Numerical(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Validate { input } => {
            let (ok, report) = validation_report(&load(&input)?)?;
            emit(&format!("{}\n", pretty(&serde_json::json!({ "valid": ok, "report": report }))));
            Ok(if ok { 0 } else { 2 })
        }
        Command::Tree { input, labeled } => {
            let tree = match load(&input)? {
                Document::Circles(c) => geometry::circle_nesting_tree(&c)?,
                Document::Curves(j) => curves::curve_nesting_tree(&j)?,
                Document::Tree(t) => t,
                other => {
                    return Err(Failure::Input(format!(
                        "expected circles, curves or tree, got {:?}",
                        other.kind()
                    )))
                }
            };
            let tree = tree.with_labeled(labeled);
            let doc = serde_json::json!({
                "tree": TreeDocument::from(&tree),
                "code": canonical_code(&tree),
            });
            emit(&format!("{}\n", pretty(&doc)));
            Ok(0)
        }
        Command::Classify { input, labeled } => {
            let [a, b] = input.as_slice() else {
                return Err(Failure::Input(format!(
                    "classify needs exactly two inputs, got {}",
                    input.len()
                )));
            };
            let verdict = cmd_classify(&load(a)?, &load(b)?, labeled)?;
            emit(&format!("{}\n", pretty(&verdict)));
            Ok(if verdict.same_component { 0 } else { 1 })
        }
        Command::CountComponents { n, samples, seed } => {
            let samples = match samples {
                Some(s) => s,
                None if (1..=6).contains(&n) => 10 * enumerate_trees(n)?.len(),
                None => 0,
            };
            emit(&format!("{}\n", pretty(&cmd_count_components(n, samples, seed)?)));
            Ok(0)
        }
        Command::Retract {
            input,
            frames,
            format,
            pipeline,
            out_dir,
            diagnostics,
        } => {
            let pipeline = match pipeline {
                PipelineArg::Auto => Pipeline::Auto,
                PipelineArg::Convex => Pipeline::Convex,
                PipelineArg::Conformal => Pipeline::Conformal,
            };
            let out = cmd_retract(
                &load(&input)?,
                RetractOptions {
                    frames_per_stage: frames,
                    pipeline,
                },
            )?;
            if let Some(path) = diagnostics {
                write_file(&path, &format!("{}\n", pretty(&out.stages)))?;
            }
            if let Some(dir) = out_dir {
                fs::create_dir_all(&dir)
                    .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
                let vp = SvgViewport::fit(&out.frames);
                for (k, f) in out.frames.iter().enumerate() {
                    write_file(&dir.join(format!("frame_{k:04}.svg")), &frame_to_svg(f, &vp))?;
                }
            }
            match format {
                Format::Json => emit(&format!(
                    "{}\n",
                    serde_json::to_string(&out).expect("serializable")
                )),
                Format::Svg => emit(&frames_to_svg(&out.frames)),
            }
            Ok(0)
        }
        Command::Group { op, input } => {
            let docs = input.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
            let cmd = match op {
                GroupOp::AutOrder => GroupCommand::AutOrder,
                GroupOp::Signature => GroupCommand::Signature,
                GroupOp::Compose => GroupCommand::Compose,
                GroupOp::Inverse => GroupCommand::Inverse,
                GroupOp::IsPure => GroupCommand::IsPure,
                GroupOp::IsTrivial => GroupCommand::IsTrivial,
                GroupOp::Project => GroupCommand::Project,
            };
            emit(&format!("{}\n", pretty(&cmd_group(cmd, &docs)?)));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(msg)) => {
            eprintln!("jck: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("jck: {msg}");
            ExitCode::from(3)
        }
    }
}
