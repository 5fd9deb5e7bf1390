//! Command-line surface over the factorization library.
//!
//! The whole program lives in [`run`], which takes raw arguments plus the
//! contents of standard input and returns captured output with an exit
//! status. `main` is a thin shell around it; tests drive the same code
//! in-process and byte-compare what the binary would print.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use semfact::{
    finest_factorization, is_factorization, models_of, models_over, oracle_finest,
    parse_formula, parse_model_set, parse_partition, parse_recoding_file, revise,
    exists_factorable_recoding, Error, ModelSet, Partition, ProductSpace, Recoding, Theory,
    DEFAULT_PRODUCT_BOUND, DEFAULT_VAR_BOUND,
};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::time::Instant;

/// Exit status for malformed input, scope mismatches and other facts about
/// the data; resource-bound refusals use [`RESOURCE_ERROR`] instead.
pub const DOMAIN_ERROR: i32 = 1;
pub const RESOURCE_ERROR: i32 = 2;

#[derive(Parser)]
#[command(name = "semfact", version, about = "Factorizations of propositional model sets")]
struct Cli {
    /// Output mode: human-readable lines or one machine-readable record.
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Plain)]
    output: OutputMode,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Plain,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the models of a theory file.
    Models {
        /// Theory file; `-` reads standard input.
        #[arg(short = 't', long)]
        theory: String,
        /// Refuse theories over more variables than this.
        #[arg(long, default_value_t = DEFAULT_VAR_BOUND)]
        max_vars: usize,
    },
    /// Decide whether a partition factorizes a model set.
    Check {
        /// Model-set file; `-` reads standard input.
        #[arg(short = 'm', long)]
        models: String,
        /// Partition in `p,q|r` syntax over the file's coordinates.
        #[arg(short = 'p', long)]
        partition: String,
    },
    /// Compute the finest factorization of a model set or of a theory's models.
    Finest {
        /// Model-set file; `-` reads standard input.
        #[arg(short = 'm', long, conflicts_with = "theory")]
        models: Option<String>,
        /// Theory file; `-` reads standard input.
        #[arg(short = 't', long)]
        theory: Option<String>,
        /// Re-derive the answer by exhaustive partition search and fail on
        /// any disagreement.
        #[arg(long)]
        oracle: bool,
        /// Refuse theories over more variables than this.
        #[arg(long, default_value_t = DEFAULT_VAR_BOUND)]
        max_vars: usize,
    },
    /// Split a theory into variable-disjoint components.
    Split {
        /// Theory file; `-` reads standard input.
        #[arg(short = 't', long)]
        theory: String,
        /// Cross-check the component partition by exhaustive search.
        #[arg(long)]
        oracle: bool,
        /// Refuse theories over more variables than this.
        #[arg(long, default_value_t = DEFAULT_VAR_BOUND)]
        max_vars: usize,
    },
    /// Revise a model set by a formula, keeping nearest models.
    Revise {
        /// Model-set file; `-` reads standard input.
        #[arg(short = 'm', long)]
        models: String,
        /// The new information, as a formula over the file's coordinates.
        #[arg(short = 'f', long)]
        formula: String,
    },
    /// Search for an equal-size factorable set in the same product.
    RecodeSearch {
        /// Model-set file; `-` reads standard input.
        #[arg(short = 'm', long)]
        models: String,
        /// Refuse products larger than this many points.
        #[arg(long, default_value_t = DEFAULT_PRODUCT_BOUND)]
        max_product: usize,
    },
    /// Apply a recoding given by per-variable definitions.
    RecodeApply {
        /// Model-set file; `-` reads standard input.
        #[arg(short = 'm', long)]
        models: String,
        /// Definition file of `new_var := formula` lines; `-` reads standard input.
        #[arg(short = 'r', long)]
        recoding: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Models { .. } => "models",
            Command::Check { .. } => "check",
            Command::Finest { .. } => "finest",
            Command::Split { .. } => "split",
            Command::Revise { .. } => "revise",
            Command::RecodeSearch { .. } => "recode-search",
            Command::RecodeApply { .. } => "recode-apply",
        }
    }
}

/// Everything the process would emit.
pub struct CliOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    status: i32,
    message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Failure { status: DOMAIN_ERROR, message: message.into() }
    }
}

/// Attaches the offending input's name to a library error and picks the
/// exit status from its kind.
fn locate(name: &str, err: Error) -> Failure {
    let status = if err.is_resource_limit() { RESOURCE_ERROR } else { DOMAIN_ERROR };
    Failure { status, message: format!("{name}: {err}") }
}

/// Input reader that also folds everything it hands out into one digest, so
/// the structured record can identify what a run actually consumed.
struct Inputs<'a> {
    stdin: &'a str,
    hasher: Sha256,
}

impl<'a> Inputs<'a> {
    fn new(stdin: &'a str) -> Self {
        Inputs { stdin, hasher: Sha256::new() }
    }

    /// Reads a path (or standard input for `-`), returning the content and
    /// the name to use in error messages.
    fn file(&mut self, label: &str, path: &str) -> Result<(String, String), Failure> {
        let (content, name) = if path == "-" {
            (self.stdin.to_string(), "<stdin>".to_string())
        } else {
            match std::fs::read_to_string(path) {
                Ok(c) => (c, path.to_string()),
                Err(e) => return Err(Failure::domain(format!("{path}: {e}"))),
            }
        };
        self.note(label, &content);
        Ok((content, name))
    }

    /// Records an inline argument (formula or partition text).
    fn inline(&mut self, label: &str, text: &str) {
        self.note(label, text);
    }

    fn note(&mut self, label: &str, content: &str) {
        self.hasher.update(label.as_bytes());
        self.hasher.update([0]);
        self.hasher.update(content.as_bytes());
        self.hasher.update([0]);
    }

    fn digest(self) -> String {
        format!("{:x}", self.hasher.finalize())
    }
}

/// One command's result in both renderings.
struct Payload {
    plain: String,
    structured: Value,
}

/// The program. Returns instead of exiting so tests can call it in-process.
pub fn run<I, S>(args: I, stdin: &str) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    CliOutput { status: 0, stdout: rendered, stderr: String::new() }
                }
                _ => CliOutput { status: DOMAIN_ERROR, stdout: String::new(), stderr: rendered },
            };
        }
    };

    let started = Instant::now();
    let mut inputs = Inputs::new(stdin);
    match dispatch(&cli.command, &mut inputs) {
        Ok(payload) => {
            let stdout = match cli.output {
                OutputMode::Plain => payload.plain,
                OutputMode::Structured => {
                    let record = json!({
                        "command": cli.command.name(),
                        "inputs_digest": inputs.digest(),
                        "elapsed_ms": started.elapsed().as_millis() as u64,
                        "result": payload.structured,
                    });
                    format!("{record}\n")
                }
            };
            CliOutput { status: 0, stdout, stderr: String::new() }
        }
        Err(failure) => CliOutput {
            status: failure.status,
            stdout: String::new(),
            stderr: format!("{}\n", failure.message),
        },
    }
}

fn dispatch(cmd: &Command, inputs: &mut Inputs) -> Result<Payload, Failure> {
    match cmd {
        Command::Models { theory, max_vars } => {
            let ms = load_theory_models(inputs, theory, *max_vars)?;
            Ok(Payload { plain: ms.to_text(), structured: set_value(&ms) })
        }

        Command::Check { models, partition } => {
            let (x, _) = load_model_set(inputs, models)?;
            inputs.inline("partition", partition);
            let p = parse_partition(x.space(), partition)
                .map_err(|e| locate("--partition", e))?;
            let report = is_factorization(&x, &p).map_err(|e| locate("--partition", e))?;
            let mut plain = format!("holds: {}\n", report.holds);
            let mut record = json!({ "holds": report.holds });
            if let Some(w) = &report.witness {
                writeln!(plain, "witness: {}", w.to_text()).unwrap();
                let row: Vec<String> = x
                    .scope()
                    .iter()
                    .map(|k| w.symbol(k).unwrap_or("?").to_string())
                    .collect();
                record["witness"] = json!(row);
            }
            Ok(Payload { plain, structured: record })
        }

        Command::Finest { models, theory, oracle, max_vars } => {
            let (x, name) = match (models, theory) {
                (Some(path), None) => load_model_set(inputs, path)?,
                (None, Some(path)) => {
                    let ms = load_theory_models(inputs, path, *max_vars)?;
                    (ms, path.clone())
                }
                _ => {
                    return Err(Failure::domain(
                        "finest needs exactly one of --models or --theory",
                    ))
                }
            };
            let finest = finest_factorization(&x).map_err(|e| locate(&name, e))?;
            if *oracle {
                cross_check(&x, &finest, &name)?;
            }
            Ok(Payload {
                plain: format!("{}\n", finest.to_text(x.space())),
                structured: json!({ "partition": partition_value(&finest, x.space()) }),
            })
        }

        Command::Split { theory, oracle, max_vars } => {
            let (text, name) = inputs.file("theory", theory)?;
            let t = Theory::parse(&text).map_err(|e| locate(&name, e))?;
            let split = semfact::split_theory(&t, *max_vars).map_err(|e| locate(&name, e))?;
            if *oracle {
                let ms = models_of(&t, *max_vars).map_err(|e| locate(&name, e))?;
                cross_check(&ms, &split.partition, &name)?;
            }
            let space = t.space();
            let mut plain = format!("partition: {}\n", split.partition.to_text(space));
            let mut blocks = Vec::new();
            for c in &split.components {
                writeln!(plain, "block {}: {}", c.block.to_text(space), c.formula).unwrap();
                blocks.push(json!({
                    "block": names_of(&c.block, space),
                    "formula": c.formula.to_string(),
                }));
            }
            Ok(Payload {
                plain,
                structured: json!({
                    "partition": partition_value(&split.partition, space),
                    "blocks": blocks,
                }),
            })
        }

        Command::Revise { models, formula } => {
            let (x, mname) = load_model_set(inputs, models)?;
            inputs.inline("formula", formula);
            let psi = parse_formula(formula).map_err(|e| locate("--formula", e))?;
            let psi_models =
                models_over(&psi, x.space(), x.scope()).map_err(|e| locate("--formula", e))?;
            if x.is_empty() {
                return Err(Failure::domain(format!(
                    "{mname}: cannot revise a set with no models"
                )));
            }
            if psi_models.is_empty() {
                return Err(Failure::domain(
                    "--formula: the new information has no models",
                ));
            }
            let out = revise(&x, &psi_models).map_err(|e| locate(&mname, e))?;
            Ok(Payload {
                plain: format!("distance: {}\n{}", out.distance, out.revised.to_text()),
                structured: json!({
                    "distance": out.distance,
                    "scope": names_of(out.revised.scope(), out.revised.space()),
                    "models": member_rows(&out.revised),
                }),
            })
        }

        Command::RecodeSearch { models, max_product } => {
            let (x, name) = load_model_set(inputs, models)?;
            let witness =
                exists_factorable_recoding(&x, *max_product).map_err(|e| locate(&name, e))?;
            Ok(match witness {
                None => Payload {
                    plain: "none\n".to_string(),
                    structured: json!({ "witness": Value::Null }),
                },
                Some(w) => Payload {
                    plain: w.to_text(),
                    structured: json!({ "witness": set_value(&w) }),
                },
            })
        }

        Command::RecodeApply { models, recoding } => {
            let (x, mname) = load_model_set(inputs, models)?;
            let (rtext, rname) = inputs.file("recoding", recoding)?;
            let defs = parse_recoding_file(&rtext).map_err(|e| locate(&rname, e))?;
            let rho =
                Recoding::from_definitions(x.space(), &defs).map_err(|e| locate(&rname, e))?;
            let image = rho.apply(&x).map_err(|e| locate(&mname, e))?;
            Ok(Payload { plain: image.to_text(), structured: set_value(&image) })
        }
    }
}

fn load_model_set(inputs: &mut Inputs, path: &str) -> Result<(ModelSet, String), Failure> {
    let (text, name) = inputs.file("models", path)?;
    let x = parse_model_set(&text).map_err(|e| locate(&name, e))?;
    Ok((x, name))
}

fn load_theory_models(
    inputs: &mut Inputs,
    path: &str,
    max_vars: usize,
) -> Result<ModelSet, Failure> {
    let (text, name) = inputs.file("theory", path)?;
    let t = Theory::parse(&text).map_err(|e| locate(&name, e))?;
    models_of(&t, max_vars).map_err(|e| locate(&name, e))
}

/// Re-derives a finest partition by exhaustive search and fails loudly if
/// the fast path disagrees.
fn cross_check(x: &ModelSet, fast: &Partition, name: &str) -> Result<(), Failure> {
    let slow = oracle_finest(x).map_err(|e| locate(name, e))?;
    if &slow == fast {
        return Ok(());
    }
    Err(Failure::domain(format!(
        "{name}: oracle disagreement: computed {} but exhaustive search gives {}",
        fast.to_text(x.space()),
        slow.to_text(x.space()),
    )))
}

fn names_of(scope: &semfact::CoordSet, space: &ProductSpace) -> Vec<String> {
    scope.iter().map(|k| space.coord_name(k).to_string()).collect()
}

fn member_rows(x: &ModelSet) -> Vec<Vec<String>> {
    x.members()
        .map(|m| {
            x.scope()
                .iter()
                .map(|k| m.symbol(k).unwrap_or("?").to_string())
                .collect()
        })
        .collect()
}

fn set_value(x: &ModelSet) -> Value {
    json!({
        "scope": names_of(x.scope(), x.space()),
        "models": member_rows(x),
    })
}

fn partition_value(p: &Partition, space: &ProductSpace) -> Value {
    let blocks: Vec<Vec<String>> =
        p.blocks().iter().map(|b| names_of(b, space)).collect();
    json!(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str], stdin: &str) -> String {
        let out = run(args.iter().copied(), stdin);
        assert_eq!(out.status, 0, "stderr: {}", out.stderr);
        assert!(out.stderr.is_empty());
        out.stdout
    }

    fn run_err(args: &[&str], stdin: &str) -> (i32, String) {
        let out = run(args.iter().copied(), stdin);
        assert!(out.status != 0, "unexpected success: {}", out.stdout);
        assert!(out.stdout.is_empty());
        (out.status, out.stderr)
    }

    const IFF_MODELS: &str = "p q\n0 0\n1 1\n";

    #[test]
    fn check_reports_holds_and_witness() {
        let got = run_ok(&["semfact", "check", "-m", "-", "-p", "p|q"], IFF_MODELS);
        assert_eq!(got, "holds: false\nwitness: 0 1\n");
        let got = run_ok(&["semfact", "check", "-m", "-", "-p", "p,q"], IFF_MODELS);
        assert_eq!(got, "holds: true\n");
    }

    #[test]
    fn finest_reads_models_or_theories() {
        let got = run_ok(&["semfact", "finest", "-m", "-"], IFF_MODELS);
        assert_eq!(got, "p,q\n");
        let got = run_ok(&["semfact", "finest", "-t", "-"], "vars p q r\np <-> q\n");
        assert_eq!(got, "p,q|r\n");
    }

    #[test]
    fn finest_needs_exactly_one_source() {
        let (status, stderr) = run_err(&["semfact", "finest"], "");
        assert_eq!(status, DOMAIN_ERROR);
        assert!(stderr.contains("exactly one of"), "{stderr}");
    }

    #[test]
    fn models_enumerates_in_canonical_order() {
        let got = run_ok(&["semfact", "models", "-t", "-"], "vars p q\np | q\n");
        assert_eq!(got, "p q\n0 1\n1 0\n1 1\n");
    }

    #[test]
    fn split_prints_one_block_per_line() {
        let got = run_ok(&["semfact", "split", "-t", "-"], "vars p q r\np <-> q\n");
        assert_eq!(got, "partition: p,q|r\nblock p,q: ~p & ~q | p & q\nblock r: true\n");
    }

    #[test]
    fn revise_prints_distance_then_models() {
        let got = run_ok(&["semfact", "revise", "-m", "-", "-f", "~p"], "p q\n1 1\n");
        assert_eq!(got, "distance: 1\np q\n0 1\n");
    }

    #[test]
    fn revise_rejects_contradictions_with_a_location() {
        let (status, stderr) =
            run_err(&["semfact", "revise", "-m", "-", "-f", "p & ~p"], "p q\n1 1\n");
        assert_eq!(status, DOMAIN_ERROR);
        assert!(stderr.starts_with("--formula:"), "{stderr}");
    }

    #[test]
    fn recode_search_prints_none_or_a_witness() {
        let got = run_ok(&["semfact", "recode-search", "-m", "-"], "p q\n0 0\n1 0\n1 1\n");
        assert_eq!(got, "none\n");
        let got = run_ok(&["semfact", "recode-search", "-m", "-"], IFF_MODELS);
        assert_eq!(got, "p q\n0 0\n0 1\n");
    }

    #[test]
    fn recode_apply_maps_members_through_the_definitions() {
        let dir = std::env::temp_dir().join("semfact-cli-test-defs");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("swap.rc");
        std::fs::write(&path, "p' := p\nq' := p <-> q\n").unwrap();
        let got = run_ok(
            &["semfact", "recode-apply", "-m", "-", "-r", path.to_str().unwrap()],
            IFF_MODELS,
        );
        assert_eq!(got, "p' q'\n0 1\n1 1\n");
    }

    #[test]
    fn recode_apply_requires_one_definition_per_coordinate() {
        let (status, stderr) =
            run_err(&["semfact", "recode-apply", "-m", "-", "-r", "/dev/null"], IFF_MODELS);
        assert_eq!(status, DOMAIN_ERROR);
        assert!(stderr.starts_with("/dev/null:"), "{stderr}");
    }

    #[test]
    fn parse_errors_carry_file_and_line() {
        let (status, stderr) = run_err(&["semfact", "finest", "-t", "-"], "p <->\n");
        assert_eq!(status, DOMAIN_ERROR);
        assert!(stderr.starts_with("<stdin>: parse error at line 1"), "{stderr}");
    }

    #[test]
    fn missing_files_name_the_path() {
        let (status, stderr) =
            run_err(&["semfact", "finest", "-m", "no/such/file.tsv"], "");
        assert_eq!(status, DOMAIN_ERROR);
        assert!(stderr.starts_with("no/such/file.tsv:"), "{stderr}");
    }

    #[test]
    fn resource_bounds_use_their_own_exit_status() {
        let (status, stderr) =
            run_err(&["semfact", "models", "-t", "-", "--max-vars", "1"], "p & q\n");
        assert_eq!(status, RESOURCE_ERROR);
        assert!(stderr.contains("exceeds"), "{stderr}");
    }

    #[test]
    fn structured_output_is_one_json_record() {
        let got = run_ok(
            &["semfact", "--output", "structured", "check", "-m", "-", "-p", "p,q"],
            IFF_MODELS,
        );
        let record: Value = serde_json::from_str(got.trim_end()).unwrap();
        assert_eq!(record["command"], "check");
        assert_eq!(record["result"]["holds"], true);
        assert_eq!(record["inputs_digest"].as_str().unwrap().len(), 64);
        assert!(record["elapsed_ms"].is_u64());
    }

    #[test]
    fn structured_digest_tracks_the_inputs() {
        let a = run_ok(
            &["semfact", "--output", "structured", "finest", "-m", "-"],
            IFF_MODELS,
        );
        let b = run_ok(
            &["semfact", "--output", "structured", "finest", "-m", "-"],
            "p q\n0 0\n1 0\n",
        );
        let da: Value = serde_json::from_str(a.trim_end()).unwrap();
        let db: Value = serde_json::from_str(b.trim_end()).unwrap();
        assert_ne!(da["inputs_digest"], db["inputs_digest"]);
    }

    #[test]
    fn help_is_success_and_bad_flags_are_domain_errors() {
        let out = run(["semfact", "--help"], "");
        assert_eq!(out.status, 0);
        assert!(out.stdout.contains("recode-search"));
        let out = run(["semfact", "check", "--bogus"], "");
        assert_eq!(out.status, DOMAIN_ERROR);
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }

    #[test]
    fn oracle_mode_accepts_agreeing_answers() {
        let got = run_ok(&["semfact", "finest", "--oracle", "-m", "-"], IFF_MODELS);
        assert_eq!(got, "p,q\n");
        let got = run_ok(
            &["semfact", "split", "--oracle", "-t", "-"],
            "vars p q r\np <-> q\n",
        );
        assert!(got.starts_with("partition: p,q|r\n"));
    }
}
