//! The `aelab` command line: reads `.lp` programs and `.fot` theories, runs
//! one operation, prints a JSON report on stdout and diagnostics on stderr.
//!
//! Exit codes: 0 all checks hold, 1 a check failed (witness in the report),
//! 2 usage or input error, 3 an enumeration cap was exceeded.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::corr::{
    closed_domain_check, cn_subset_at, equiv_at, figure1_check, grounding_invariance, table1_check, witness_probes,
    CheckConfig, CorrespondenceVerdict, ProbeLevel, Witness,
};
use crate::embed::{combine_with, embed_program_with, EmbedOptions, EmbeddingKind, EmbeddingVariant};
use crate::error::{Caps, Error, Result};
use crate::expand::{stable_expansions, Expansion};
use crate::foael::{classify_theory, InterpretationSpace, Mode};
use crate::lp::{classify_program, grounding, stable_models};
use crate::syntax::{Formula, Program, Signature, Theory};
use crate::textio::{parse_formulas, parse_program, parse_theory, render_atom, render_formula, render_program, render_theory};

/// Environment variable with cap overrides (`atoms=..,interpretations=..,kernels=..`).
pub const CAPS_ENV: &str = "AELAB_CAPS";

#[derive(Parser, Debug)]
#[command(name = "aelab", version, about = "Embed logic programs into first-order autoepistemic logic and check correspondences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: GlobalOpts,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Modal semantics: `any` or `all` names.
    #[arg(long, global = true, default_value = "any")]
    mode: String,
    /// `standard-names`, `bounded:D`, or `bounded` (D = |names| + 2).
    #[arg(long, global = true, default_value = "bounded")]
    space: String,
    /// Term depth for names (0 = constants only).
    #[arg(long, global = true, default_value_t = 0)]
    depth: usize,
    /// Maximum clause width W of the og/o/full probe families.
    #[arg(long, global = true, default_value_t = 2)]
    width: usize,
    /// Cap overrides, e.g. `atoms=24,kernels=4000000`.
    #[arg(long, global = true)]
    caps: Option<String>,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Use the single quantified unique-names axiom.
    #[arg(long, global = true)]
    una_quantified: bool,
    /// Let the introspection axioms range over ground equalities too.
    #[arg(long, global = true)]
    pia_equalities: bool,
    /// List the reflexive equalities t = t in reported kernels.
    #[arg(long, global = true)]
    show_trivial_equalities: bool,
    /// Accept theories that use the modal operator in combinations.
    #[arg(long, global = true)]
    allow_modal: bool,
}

#[derive(Args, Debug, Clone)]
struct VariantOpts {
    /// Embedding: hp, eb, eh, hp-v, eb-v, eh-v (comma-separated where
    /// several are accepted).
    #[arg(long, value_delimiter = ',')]
    variant: Vec<String>,
    /// Omit the unique-names axioms.
    #[arg(long)]
    no_una: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse inputs and print their canonical form and syntactic classes.
    Parse { files: Vec<PathBuf> },
    /// Ground a program over the names of its signature.
    Ground { program: PathBuf },
    /// Stable models of a program.
    Stable { program: PathBuf },
    /// The embedding of a program as `.fot` text (JSON with --json).
    Embed {
        #[command(flatten)]
        variant: VariantOpts,
        #[arg(long)]
        json: bool,
        program: PathBuf,
    },
    /// Stable expansions of a theory, or of the combination of an optional
    /// theory with a program under an embedding.
    Expand {
        #[command(flatten)]
        variant: VariantOpts,
        files: Vec<PathBuf>,
    },
    /// Membership of probe formulas in every stable expansion.
    Member {
        #[command(flatten)]
        variant: VariantOpts,
        /// A `.fot` file or inline formulas.
        #[arg(long)]
        probe: String,
        files: Vec<PathBuf>,
    },
    /// Compare two embeddings of one input, or two theories.
    Compare {
        #[command(flatten)]
        variant: VariantOpts,
        /// oga, og, o, or full.
        #[arg(long, default_value = "oga")]
        level: String,
        /// Check inclusion of consequences (first ⊆ second) instead of
        /// equivalence of expansions.
        #[arg(long)]
        subset: bool,
        files: Vec<PathBuf>,
    },
    /// Check the inclusion graph between embeddings on every `.lp` file of
    /// a directory.
    CheckFigure1 {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Check the correspondences predicted for a theory and a program.
    CheckTable1 {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        program: PathBuf,
    },
    /// Grounding invariance of combinations.
    Invariance {
        #[command(flatten)]
        variant: VariantOpts,
        files: Vec<PathBuf>,
    },
    /// Whether rules only fire on named individuals.
    ClosedDomain {
        #[command(flatten)]
        variant: VariantOpts,
        files: Vec<PathBuf>,
    },
}

/// Resolved run configuration.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    /// `None` means `Bounded(|names| + 2)` per input.
    #[serde(serialize_with = "serialize_space")]
    pub space: Option<InterpretationSpace>,
    pub depth: usize,
    pub caps: Caps,
    pub width: usize,
    pub show_trivial_equalities: bool,
    pub una_quantified: bool,
    pub pia_equalities: bool,
    pub allow_modal: bool,
}

fn serialize_space<S: serde::Serializer>(space: &Option<InterpretationSpace>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match space {
        Some(sp) => s.serialize_str(&sp.label()),
        None => s.serialize_str("bounded"),
    }
}

impl RunConfig {
    fn check_config(&self) -> CheckConfig {
        CheckConfig {
            mode: self.mode,
            space: self.space,
            depth: self.depth,
            caps: self.caps,
            width: self.width,
            options: self.embed_options(),
            extra_probes: witness_probes(),
        }
    }

    fn embed_options(&self) -> EmbedOptions {
        EmbedOptions {
            una_quantified: self.una_quantified,
            pia_equalities: self.pia_equalities,
        }
    }

    fn space_for(&self, sig: &Signature) -> InterpretationSpace {
        self.space
            .unwrap_or_else(|| InterpretationSpace::default_bounded(sig, self.depth))
    }
}

/// Parses `standard-names`, `bounded`, or `bounded:D`.
pub fn parse_space(text: &str) -> Result<Option<InterpretationSpace>> {
    match text {
        "standard-names" | "standard" => Ok(Some(InterpretationSpace::StandardNames)),
        "bounded" => Ok(None),
        other => {
            let d = other
                .strip_prefix("bounded:")
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&d| d >= 1)
                .ok_or_else(|| Error::Semantic(format!("invalid space `{other}`")))?;
            Ok(Some(InterpretationSpace::Bounded(d)))
        }
    }
}

pub fn parse_mode(text: &str) -> Result<Mode> {
    match text {
        "any" => Ok(Mode::Any),
        "all" => Ok(Mode::All),
        other => Err(Error::Semantic(format!("invalid mode `{other}`"))),
    }
}

fn resolve_config(opts: &GlobalOpts, env_caps: Option<&str>) -> Result<RunConfig> {
    let mut caps = Caps::default();
    if let Some(env) = env_caps {
        caps = caps.parse_overrides(env)?;
    }
    if let Some(flag) = &opts.caps {
        caps = caps.parse_overrides(flag)?;
    }
    if opts.width == 0 {
        return Err(Error::Semantic("probe width must be positive".into()));
    }
    Ok(RunConfig {
        mode: parse_mode(&opts.mode)?,
        space: parse_space(&opts.space)?,
        depth: opts.depth,
        caps,
        width: opts.width,
        show_trivial_equalities: opts.show_trivial_equalities,
        una_quantified: opts.una_quantified,
        pia_equalities: opts.pia_equalities,
        allow_modal: opts.allow_modal,
    })
}

#[derive(Serialize, Debug)]
struct InputReport {
    path: String,
    kind: &'static str,
}

#[derive(Serialize, Debug)]
struct ExpansionReport {
    source: String,
    consistent: bool,
    kernel: Vec<String>,
}

/// The single JSON document printed per invocation.
#[derive(Serialize, Debug)]
pub struct Report {
    config: RunConfig,
    inputs: Vec<InputReport>,
    expansions: Vec<ExpansionReport>,
    verdicts: Vec<serde_json::Value>,
    witnesses: Vec<Witness>,
    exactness: Vec<String>,
    timing: Option<serde_json::Value>,
}

impl Report {
    fn new(config: RunConfig) -> Report {
        Report {
            config,
            inputs: Vec::new(),
            expansions: Vec::new(),
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            exactness: Vec::new(),
            timing: None,
        }
    }

    fn exact(&mut self, label: String) {
        if !self.exactness.contains(&label) {
            self.exactness.push(label);
            self.exactness.sort();
        }
    }

    fn verdict(&mut self, name: String, v: &CorrespondenceVerdict) {
        self.exact(v.exactness.clone());
        self.verdicts.push(serde_json::json!({
            "check": name,
            "holds": v.holds,
            "level": v.level,
            "exactness": v.exactness,
            "probe_limited": v.probe_limited,
        }));
        if let Some(w) = &v.witness {
            let mut w = w.clone();
            w.reason = format!("{name}: {}", w.reason);
            self.witnesses.push(w);
        }
    }

    fn all_hold(&self) -> bool {
        self.verdicts
            .iter()
            .all(|v| v.get("holds").and_then(serde_json::Value::as_bool).unwrap_or(true))
    }
}

enum Input {
    Program(Program),
    Theory(Theory),
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_input(path: &Path, report: &mut Report) -> Result<Input> {
    let text = read_text(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let (input, kind) = match ext {
        "lp" => (Input::Program(parse_program(&text)?), "program"),
        "fot" => (Input::Theory(parse_theory(&text)?), "theory"),
        _ => {
            return Err(Error::Semantic(format!(
                "{}: expected a .lp program or a .fot theory",
                path.display()
            )))
        }
    };
    report.inputs.push(InputReport {
        path: path.display().to_string(),
        kind,
    });
    Ok(input)
}

fn read_program(path: &Path, report: &mut Report) -> Result<Program> {
    match read_input(path, report)? {
        Input::Program(p) => Ok(p),
        Input::Theory(_) => Err(Error::Semantic(format!("{}: expected a .lp program", path.display()))),
    }
}

fn read_theory(path: &Path, report: &mut Report) -> Result<Theory> {
    match read_input(path, report)? {
        Input::Theory(t) => Ok(t),
        Input::Program(_) => Err(Error::Semantic(format!("{}: expected a .fot theory", path.display()))),
    }
}

/// At most one theory and at most one program, in any order.
fn read_pair(files: &[PathBuf], report: &mut Report) -> Result<(Option<Theory>, Option<Program>)> {
    if files.is_empty() || files.len() > 2 {
        return Err(Error::Semantic("expected a .fot theory and/or a .lp program".into()));
    }
    let (mut theory, mut program) = (None, None);
    for f in files {
        match read_input(f, report)? {
            Input::Theory(t) if theory.is_none() => theory = Some(t),
            Input::Program(p) if program.is_none() => program = Some(p),
            _ => return Err(Error::Semantic("expected at most one theory and one program".into())),
        }
    }
    Ok((theory, program))
}

fn variants(opts: &VariantOpts, default: &[EmbeddingKind]) -> Result<Vec<EmbeddingVariant>> {
    let kinds = if opts.variant.is_empty() {
        default.to_vec()
    } else {
        opts.variant
            .iter()
            .map(|s| EmbeddingKind::parse(s.trim()).ok_or_else(|| Error::Semantic(format!("unknown variant `{s}`"))))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(kinds
        .into_iter()
        .map(|k| EmbeddingVariant {
            kind: k,
            with_una: !opts.no_una,
        })
        .collect())
}

fn single_variant(opts: &VariantOpts) -> Result<EmbeddingVariant> {
    let vs = variants(opts, &[])?;
    match vs.as_slice() {
        [v] => Ok(*v),
        _ => Err(Error::Semantic("exactly one --variant is required".into())),
    }
}

/// The theory to expand: Φ alone, or ι_v(Φ, P) with Φ = ∅ if absent.
fn subject(theory: &Option<Theory>, program: &Option<Program>, v: Option<EmbeddingVariant>, cfg: &RunConfig) -> Result<(String, Theory)> {
    let phi = theory.clone().unwrap_or_default();
    match (program, v) {
        (Some(p), Some(v)) => Ok((
            v.label(),
            combine_with(&phi, p, v, cfg.depth, cfg.embed_options(), cfg.allow_modal, &cfg.caps)?,
        )),
        (Some(_), None) => Err(Error::Semantic("a program input needs --variant".into())),
        (None, _) => Ok(("theory".into(), phi)),
    }
}

fn kernel_strings(e: &Expansion, cfg: &RunConfig) -> Vec<String> {
    if !e.consistent {
        return vec!["<inconsistent>".into()];
    }
    if cfg.show_trivial_equalities {
        e.kernel.sorted_strings_with_reflexive(&e.engine().signature.names(cfg.depth))
    } else {
        e.kernel.sorted_strings()
    }
}

fn expansions_of(label: &str, t: &Theory, cfg: &RunConfig, report: &mut Report) -> Result<Vec<Expansion>> {
    let space = cfg.space_for(&t.signature);
    report.exact(space.exactness_label());
    let exps = stable_expansions(t, cfg.mode, space, cfg.depth, &cfg.caps)?;
    for e in &exps {
        report.expansions.push(ExpansionReport {
            source: label.to_string(),
            consistent: e.consistent,
            kernel: kernel_strings(e, cfg),
        });
    }
    Ok(exps)
}

fn sorted_atoms(m: &BTreeSet<crate::syntax::Atom>) -> Vec<String> {
    let mut v: Vec<String> = m.iter().map(render_atom).collect();
    v.sort();
    v
}

/// What a command produced besides the report.
enum Outcome {
    Report,
    /// Plain text output instead of JSON.
    Text(String),
}

fn execute(cmd: &Command, cfg: &RunConfig, report: &mut Report) -> Result<Outcome> {
    let check = cfg.check_config();
    match cmd {
        Command::Parse { files } => {
            if files.is_empty() {
                return Err(Error::Semantic("no input files".into()));
            }
            for f in files {
                let (canonical, class) = match read_input(f, report)? {
                    Input::Program(p) => (
                        render_program(&p),
                        serde_json::to_value(classify_program(&p, &BTreeSet::new())).expect("serializable"),
                    ),
                    Input::Theory(t) => {
                        let class = if t.is_objective() {
                            serde_json::to_value(classify_theory(&t)?).expect("serializable")
                        } else {
                            serde_json::json!({ "modal": true })
                        };
                        (render_theory(&t), class)
                    }
                };
                report.verdicts.push(serde_json::json!({
                    "check": "parse",
                    "path": f.display().to_string(),
                    "canonical": canonical,
                    "class": class,
                }));
            }
        }
        Command::Ground { program } => {
            let p = read_program(program, report)?;
            let g = grounding(&p, cfg.depth, &cfg.caps)?;
            report.verdicts.push(serde_json::json!({ "check": "ground", "program": render_program(&g) }));
        }
        Command::Stable { program } => {
            let p = read_program(program, report)?;
            report.exact("exact".into());
            for m in stable_models(&p, cfg.depth, &cfg.caps)? {
                report.expansions.push(ExpansionReport {
                    source: "stable-model".into(),
                    consistent: true,
                    kernel: sorted_atoms(&m),
                });
            }
        }
        Command::Embed { variant, json, program } => {
            let p = read_program(program, report)?;
            let v = single_variant(variant)?;
            let t = embed_program_with(&p, v, cfg.depth, cfg.embed_options(), &cfg.caps)?;
            let text = render_theory(&t);
            if !json {
                return Ok(Outcome::Text(text));
            }
            report.verdicts.push(serde_json::json!({ "check": "embed", "variant": v.label(), "theory": text }));
        }
        Command::Expand { variant, files } => {
            let (theory, program) = read_pair(files, report)?;
            let vs = if program.is_some() { variants(variant, &[])? } else { Vec::new() };
            if program.is_some() && vs.is_empty() {
                return Err(Error::Semantic("a program input needs --variant".into()));
            }
            if vs.is_empty() {
                let (label, t) = subject(&theory, &program, None, cfg)?;
                expansions_of(&label, &t, cfg, report)?;
            }
            for v in vs {
                let (label, t) = subject(&theory, &program, Some(v), cfg)?;
                expansions_of(&label, &t, cfg, report)?;
            }
        }
        Command::Member { variant, probe, files } => {
            let (theory, program) = read_pair(files, report)?;
            let probes = read_probes(probe)?;
            let v = if program.is_some() { Some(single_variant(variant)?) } else { None };
            let (label, t) = subject(&theory, &program, v, cfg)?;
            let exps = expansions_of(&label, &t, cfg, report)?;
            for f in &probes {
                let mut members = Vec::new();
                for e in &exps {
                    members.push(e.contains(f)?.member);
                }
                let holds = members.iter().all(|&m| m);
                report.verdicts.push(serde_json::json!({
                    "check": "member",
                    "probe": render_formula(f),
                    "members": members,
                    "holds": holds,
                    "exactness": cfg.space_for(&t.signature).exactness_label(),
                }));
                if !holds {
                    let i = members.iter().position(|m| !m).expect("some non-member");
                    report.witnesses.push(Witness {
                        reason: "probe is missing from a stable expansion".into(),
                        probe: Some(render_formula(f)),
                        kernel: Some(kernel_strings(&exps[i], cfg)),
                        probe_formula: Some(f.clone()),
                        ..Witness::default()
                    });
                }
            }
        }
        Command::Compare {
            variant,
            level,
            subset,
            files,
        } => {
            let level = ProbeLevel::parse(level, cfg.width).ok_or_else(|| Error::Semantic(format!("unknown level `{level}`")))?;
            let (t1, t2, name) = compare_subjects(variant, files, cfg, report)?;
            let v = if *subset {
                cn_subset_at(&t1, &t2, level, &check)?
            } else {
                equiv_at(&t1, &t2, level, &check)?
            };
            report.verdict(name, &v);
        }
        Command::CheckFigure1 { corpus } => {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(corpus)
                .map_err(|e| Error::Io(format!("{}: {e}", corpus.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "lp"))
                .collect();
            entries.sort();
            let mut programs = Vec::new();
            for path in &entries {
                let p = read_program(path, report)?;
                let name = path.file_stem().map(|s| s.to_string_lossy().to_string()).unwrap_or_default();
                programs.push((name, p));
            }
            let r = figure1_check(&programs, &check)?;
            for label in &r.exactness {
                report.exact(label.clone());
            }
            for c in &r.inclusions {
                if let Some(w) = &c.witness {
                    report.witnesses.push(w.clone());
                }
            }
            report.verdicts.push(serde_json::json!({
                "check": "figure1",
                "holds": r.holds,
                "inclusions_checked": r.inclusions.len(),
                "inclusions_failed": r.failed_inclusions().count(),
                "non_edges": r.non_edges,
                "unwitnessed_non_edges": r.unwitnessed_non_edges().count(),
            }));
        }
        Command::CheckTable1 { theory, program } => {
            let phi = read_theory(theory, report)?;
            let p = read_program(program, report)?;
            let r = table1_check(&phi, &p, &check)?;
            for c in &r.checks {
                report.verdict(format!("{} ~{} {}", c.a, c.strength, c.b), &c.verdict);
            }
            report.verdicts.push(serde_json::json!({
                "check": "table1",
                "holds": r.holds,
                "theory_class": r.theory_class,
                "theory_memberships": r.theory_memberships,
                "program_class": r.program_class,
            }));
        }
        Command::Invariance { variant, files } | Command::ClosedDomain { variant, files } => {
            let (theory, program) = read_pair(files, report)?;
            let p = program.ok_or_else(|| Error::Semantic("a .lp program is required".into()))?;
            let phi = theory.unwrap_or_default();
            let invariance = matches!(cmd, Command::Invariance { .. });
            for v in variants(variant, &[EmbeddingKind::HP, EmbeddingKind::EB, EmbeddingKind::EH])? {
                let verdict = if invariance {
                    grounding_invariance(v, &phi, &p, &check)?
                } else {
                    closed_domain_check(v, &phi, &p, &check)?
                };
                let name = if invariance { "grounding-invariance" } else { "closed-domain" };
                report.verdict(format!("{name} {}", v.label()), &verdict);
            }
        }
    }
    Ok(Outcome::Report)
}

fn read_probes(probe: &str) -> Result<Vec<Formula>> {
    let path = Path::new(probe);
    let text = if path.is_file() {
        read_text(path)?
    } else if probe.trim_end().ends_with('.') {
        probe.to_string()
    } else {
        format!("{}.", probe.trim_end())
    };
    let probes = parse_formulas(&text)?;
    if probes.is_empty() {
        return Err(Error::Semantic("no probe formulas".into()));
    }
    Ok(probes)
}

/// Two embeddings of one (theory, program) input, or two theory files.
fn compare_subjects(variant: &VariantOpts, files: &[PathBuf], cfg: &RunConfig, report: &mut Report) -> Result<(Theory, Theory, String)> {
    let all_theories = files.len() == 2 && files.iter().all(|f| f.extension().is_some_and(|x| x == "fot"));
    if all_theories && variant.variant.is_empty() {
        let t1 = read_theory(&files[0], report)?;
        let t2 = read_theory(&files[1], report)?;
        return Ok((t1, t2, "compare".into()));
    }
    let (theory, program) = read_pair(files, report)?;
    if program.is_none() {
        return Err(Error::Semantic("compare needs two theories, or a program and two variants".into()));
    }
    let vs = variants(variant, &[])?;
    let [a, b] = vs.as_slice() else {
        return Err(Error::Semantic("compare needs exactly two variants".into()));
    };
    let (la, t1) = subject(&theory, &program, Some(*a), cfg)?;
    let (lb, t2) = subject(&theory, &program, Some(*b), cfg)?;
    Ok((t1, t2, format!("{la} vs {lb}")))
}

/// Maps an error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => 3,
        _ => 2,
    }
}

/// Runs the command line and returns (exit code, stdout text).
pub fn run_to_string<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return if code == 0 {
                (0, e.to_string(), String::new())
            } else {
                (2, String::new(), e.to_string())
            };
        }
    };
    let env_caps = std::env::var(CAPS_ENV).ok();
    let cfg = match resolve_config(&cli.opts, env_caps.as_deref()) {
        Ok(cfg) => cfg,
        Err(e) => return (exit_code(&e), String::new(), format!("error: {e}\n")),
    };
    let mut report = Report::new(cfg.clone());
    let start = Instant::now();
    match execute(&cli.command, &cfg, &mut report) {
        Ok(Outcome::Text(mut text)) => {
            if !text.ends_with('\n') {
                text.push('\n');
            }
            (0, text, String::new())
        }
        Ok(Outcome::Report) => {
            if cli.opts.timing {
                report.timing = Some(serde_json::json!({ "total_ms": start.elapsed().as_secs_f64() * 1000.0 }));
            }
            let code = if report.all_hold() { 0 } else { 1 };
            let mut out = serde_json::to_string_pretty(&report).expect("report serializes");
            out.push('\n');
            (code, out, String::new())
        }
        Err(e) => (exit_code(&e), String::new(), format!("error: {e}\n")),
    }
}

/// Entry point of the binary: prints the report and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, out, err) = run_to_string(args);
    print!("{out}");
    eprint!("{err}");
    code
}
