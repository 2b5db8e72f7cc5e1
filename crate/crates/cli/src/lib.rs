//! Command-line front end: loads documents, runs one computation, prints a report.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bpic::format::{
    element_json, group_json, holonomy_from_doc, iso_document, iso_from_doc, isotropy_from_doc, parse_document, presentation_from_doc,
    structure_json, Document, SCHEMA_VERSION,
};
use bpic::holonomy::{picard_cylinder, Conventions};
use bpic::isotropy::picard_plane;
use bpic::presentation::{
    assemble_picard, check_discrete_iso, compose_discrete_isos, compute_outaut, is_inner_presentation, morita_check, DiscreteIso, DiscretePresentation,
    OutAut, PicardPresentation, SolveOptions,
};
use bpic::skeleton::{oracle_selftest, SelfTestTarget};
use bpic::Verdict;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "bpic", version, about = "Discrete invariants of stable b-symplectic manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report the worked-example conventions instead of the strict ones.
    #[arg(long, global = true)]
    pub paper_conventions: bool,
    /// Reversing isomorphisms intertwine the inverse holonomy.
    #[arg(long, global = true)]
    pub reversing_hol_inverse: bool,
    /// Coefficient bound for bounded searches.
    #[arg(long, global = true, default_value_t = 8)]
    pub search_height: i64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 1000)]
    pub count: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate any input document.
    Validate { file: PathBuf },
    /// Check an isomorphism document against its presentations.
    CheckIso { file: PathBuf },
    /// Compose two isomorphisms; `first` is applied first.
    Compose { first: PathBuf, second: PathBuf },
    /// Decide whether an automorphism is inner.
    InnerTest { file: PathBuf },
    /// Outer automorphism group of a presentation.
    Outaut { file: PathBuf },
    /// Picard group of a presentation, holonomy data or isotropy data.
    Picard { file: PathBuf },
    /// Decide Morita equivalence of two presentations.
    MoritaCheck { a: PathBuf, b: PathBuf },
    /// Run the skeleton oracle suite on random data or on supplied holonomy data.
    OracleSelftest { file: Option<PathBuf> },
}

/// A finished command: exit status plus text and structured renderings.
struct Report {
    status: i32,
    text: String,
    data: Value,
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = std::result::Result<Report, InputError>;

/// Parses `args` (including the program name), runs the command and writes the report to `out`.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let format = cli.format;
    let command = command_name(&cli.command);
    let (status, text, data) = match execute(&cli) {
        Ok(r) => (r.status, r.text, r.data),
        Err(InputError(m)) => (EXIT_INPUT, format!("input error: {m}\n"), json!({"error": m})),
    };
    match format {
        OutputFormat::Text => {
            let _ = write!(out, "{text}");
        }
        OutputFormat::Structured => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": command,
                "conventions": {
                    "paper_conventions": cli.paper_conventions,
                    "reversing_hol_inverse": cli.reversing_hol_inverse,
                    "search_height": cli.search_height,
                },
                "exit_status": status,
                "report": data,
            });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("reports serialize"));
        }
    }
    status
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::CheckIso { .. } => "check-iso",
        Command::Compose { .. } => "compose",
        Command::InnerTest { .. } => "inner-test",
        Command::Outaut { .. } => "outaut",
        Command::Picard { .. } => "picard",
        Command::MoritaCheck { .. } => "morita-check",
        Command::OracleSelftest { .. } => "oracle-selftest",
    }
}

fn options(cli: &Cli) -> SolveOptions {
    SolveOptions {
        paper_conventions: cli.paper_conventions,
        conventions: conventions(cli),
        search_height: cli.search_height,
        ..SolveOptions::default()
    }
}

fn conventions(cli: &Cli) -> Conventions {
    Conventions { reversing_hol_inverse: cli.reversing_hol_inverse }
}

fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Validate { file } => validate(file, cli),
        Command::CheckIso { file } => check_iso(file, cli),
        Command::Compose { first, second } => compose(first, second, cli),
        Command::InnerTest { file } => inner_test(file),
        Command::Outaut { file } => outaut(file, cli),
        Command::Picard { file } => picard(file, cli),
        Command::MoritaCheck { a, b } => morita(a, b, cli),
        Command::OracleSelftest { file } => selftest(file.as_deref(), cli),
    }
}

fn read_document(path: &Path) -> std::result::Result<Document, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(parse_document(&text, &path.display().to_string())?)
}

fn load_presentation(path: &Path) -> std::result::Result<DiscretePresentation, InputError> {
    let doc = read_document(path)?;
    let p = doc.presentation.as_ref().ok_or_else(|| InputError(format!("{}: expected a presentation, found {}", path.display(), doc.kind())))?;
    presentation_from_doc(p).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// An isomorphism together with its endpoints and their file names as written in the document.
struct LoadedIso {
    iso: DiscreteIso,
    source: DiscretePresentation,
    target: DiscretePresentation,
    source_name: String,
    target_name: String,
}

fn load_iso(path: &Path) -> std::result::Result<LoadedIso, InputError> {
    let doc = read_document(path)?;
    let d = doc.isomorphism.as_ref().ok_or_else(|| InputError(format!("{}: expected an isomorphism, found {}", path.display(), doc.kind())))?;
    let dir = path.parent().unwrap_or(Path::new(""));
    let source = load_presentation(&dir.join(&d.source))?;
    let target = load_presentation(&dir.join(&d.target))?;
    let iso = iso_from_doc(d, &source, &target).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(LoadedIso { iso, source, target, source_name: d.source.clone(), target_name: d.target.clone() })
}

fn lines(items: &[String]) -> String {
    items.iter().map(|d| format!("  {d}\n")).collect()
}

fn validate(path: &Path, cli: &Cli) -> Outcome {
    let doc = read_document(path)?;
    let kind = doc.kind();
    let built: std::result::Result<Vec<String>, String> = if let Some(p) = &doc.presentation {
        presentation_from_doc(p).map(|_| Vec::new()).map_err(|e| e.to_string())
    } else if let Some(d) = &doc.holonomy_data {
        holonomy_from_doc(d).map(|_| Vec::new()).map_err(|e| e.to_string())
    } else if let Some(i) = &doc.isotropy_data {
        isotropy_from_doc(i).map(|_| Vec::new()).map_err(|e| e.to_string())
    } else {
        let f = load_iso(path)?;
        f.iso.failures(&f.source, &f.target, conventions(cli)).map_err(|e| e.to_string())
    };
    let diagnostics = match built {
        Ok(d) => d,
        Err(e) => vec![e],
    };
    let ok = diagnostics.is_empty();
    let text = if ok { format!("{kind}: ok\n") } else { format!("{kind}: invalid\n{}", lines(&diagnostics)) };
    Ok(Report { status: if ok { EXIT_OK } else { EXIT_NO }, text, data: json!({"kind": kind, "valid": ok, "diagnostics": diagnostics}) })
}

fn check_iso(path: &Path, cli: &Cli) -> Outcome {
    let f = load_iso(path)?;
    let failures = f.iso.failures(&f.source, &f.target, conventions(cli))?;
    let ok = failures.is_empty();
    let text = if ok { "isomorphism: passes\n".to_string() } else { format!("isomorphism: fails\n{}", lines(&failures)) };
    Ok(Report { status: if ok { EXIT_OK } else { EXIT_NO }, text, data: json!({"passes": ok, "failures": failures}) })
}

fn compose(first: &Path, second: &Path, cli: &Cli) -> Outcome {
    let f = load_iso(first)?;
    let g = load_iso(second)?;
    if f.target != g.source {
        return Err(InputError(format!("{} ends where {} does not start", first.display(), second.display())));
    }
    let gf = compose_discrete_isos(&g.iso, &f.iso, &f.source, &f.target, &g.target)?;
    let ok = check_discrete_iso(&gf, &f.source, &g.target, conventions(cli))?;
    let doc = iso_document(&gf, &f.source, &g.target, &f.source_name, &g.target_name);
    let witness: Value = serde_json::from_str(&doc.to_json())?;
    let text = format!("composite ({}):\n{}\n", if ok { "passes" } else { "fails" }, doc.to_json());
    Ok(Report { status: if ok { EXIT_OK } else { EXIT_NO }, text, data: json!({"passes": ok, "composite": witness}) })
}

fn inner_test(path: &Path) -> Outcome {
    let f = load_iso(path)?;
    if f.source != f.target {
        return Err(InputError(format!("{}: not an automorphism", path.display())));
    }
    let verdict = is_inner_presentation(&f.iso, &f.source, None)?;
    let (status, text, data) = match &verdict {
        Verdict::Yes(alphas) => {
            let named: Vec<String> = f.source.edges.iter().zip(alphas).map(|(e, a)| format!("{}: {a}", e.id)).collect();
            let obj: serde_json::Map<String, Value> = f.source.edges.iter().zip(alphas).map(|(e, a)| (e.id.clone(), element_json(a))).collect();
            (EXIT_OK, format!("inner: yes\n{}", lines(&named)), json!({"verdict": "yes", "alphas": obj}))
        }
        Verdict::No(why) => (EXIT_NO, format!("inner: no\n  {why}\n"), json!({"verdict": "no", "reason": why})),
        Verdict::Unknown(why) => (EXIT_UNKNOWN, format!("inner: unknown\n  {why}\n"), json!({"verdict": "unknown", "reason": why})),
    };
    Ok(Report { status, text, data })
}

fn outaut_json(o: &OutAut, p: &DiscretePresentation) -> Value {
    let gens: Vec<Value> = o
        .generators
        .iter()
        .map(|g| {
            json!({
                "label": g.label,
                "kind": format!("{:?}", g.kind),
                "orientation": g.orientation().name(),
                "edge_permutation": g.edge_permutation().iter().map(|&k| p.edges[k].id.clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "display": o.to_string(),
        "group": o.structure.as_ref().map(|s| group_json(&s.group)),
        "order": o.order,
        "abelian": o.abelian,
        "exhaustive": o.exhaustive,
        "generators": gens,
        "twist_generators": o.twists.iter().map(|&k| o.generators[k].label.clone()).collect::<Vec<_>>(),
        "twist_inner": o.twist_inner,
        "notes": o.notes,
    })
}

fn outaut_text(o: &OutAut) -> String {
    let mut s = format!("OutAut: {o}\n");
    for g in &o.generators {
        let _ = writeln!(s, "  {} ({:?}, {})", g.label, g.kind, g.orientation().name());
    }
    for n in &o.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    s
}

fn outaut(path: &Path, cli: &Cli) -> Outcome {
    let p = load_presentation(path)?;
    let o = compute_outaut(&p, options(cli))?;
    let status = if o.exhaustive && o.is_resolved() { EXIT_OK } else { EXIT_UNKNOWN };
    Ok(Report { status, text: outaut_text(&o), data: outaut_json(&o, &p) })
}

fn picard_json(pic: &PicardPresentation, p: &DiscretePresentation, name: &str) -> Value {
    let c = &pic.certificates;
    let involution = c.reversing_involution.as_ref().map(|f| serde_json::from_str::<Value>(&iso_document(f, p, p, name, name).to_json()).expect("json"));
    json!({
        "structure": structure_json(&pic.structure),
        "exhaustive": pic.exhaustive(),
        "n_edges": pic.n_edges,
        "periods": pic.periods.iter().map(bpic::rational::format_rational).collect::<Vec<_>>(),
        "outaut": outaut_json(&pic.outaut, p),
        "action": pic.action.iter().map(|perm| perm.iter().map(|&k| p.edges[k].id.clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "certificates": {
            "twist_infinite_order": p.edges.iter().zip(&c.twist_infinite_order).map(|(e, x)| json!({"edge": e.id, "infinite_order": x})).collect::<Vec<_>>(),
            "lie_dimension": c.lie_dimension,
            "reversing_involution": involution,
        },
    })
}

fn picard_text(pic: &PicardPresentation, p: &DiscretePresentation) -> String {
    let mut s = format!("Pic: {pic}\n");
    s += &outaut_text(&pic.outaut);
    for (e, x) in p.edges.iter().zip(&pic.certificates.twist_infinite_order) {
        let order = match x {
            Some(true) => "infinite order",
            Some(false) => "finite order",
            None => "order undecided",
        };
        let _ = writeln!(s, "  twist about {}: {order}", e.id);
    }
    if let Some(d) = pic.certificates.lie_dimension {
        let _ = writeln!(s, "  Lie algebra dimension: {d}");
    }
    if pic.certificates.reversing_involution.is_some() {
        let _ = writeln!(s, "  orientation-reversing involution: verified");
    }
    s
}

fn picard(path: &Path, cli: &Cli) -> Outcome {
    let doc = read_document(path)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let bad = |e: bpic::Error| InputError(format!("{}: {e}", path.display()));
    if let Some(d) = &doc.holonomy_data {
        let s = picard_cylinder(&holonomy_from_doc(d).map_err(bad)?)?;
        return Ok(single_structure("cylinder", &s));
    }
    if let Some(i) = &doc.isotropy_data {
        let s = picard_plane(&isotropy_from_doc(i).map_err(bad)?)?;
        return Ok(single_structure("plane", &s));
    }
    let p = load_presentation(path)?;
    let report = assemble_picard(&p, options(cli))?;
    let chosen = report.selected(cli.paper_conventions);
    let other = report.selected(!cli.paper_conventions);
    let status = if chosen.exhaustive() && chosen.resolved().is_some() { EXIT_OK } else { EXIT_UNKNOWN };
    let label = |paper: bool| if paper { "paper" } else { "strict" };
    let mut text = format!("conventions: {}\n", label(cli.paper_conventions));
    text += &picard_text(chosen, &p);
    if let Some(d) = &report.discrepancy {
        let _ = write!(text, "{} conventions give: {}\ndiscrepancy:\n{}", label(!cli.paper_conventions), other, lines(&d.lines().map(String::from).collect::<Vec<_>>()));
    }
    let data = json!({
        "selected": label(cli.paper_conventions),
        "result": picard_json(chosen, &p, &name),
        "alternative": picard_json(other, &p, &name),
        "discrepancy": report.discrepancy,
    });
    Ok(Report { status, text, data })
}

fn single_structure(level: &str, s: &bpic::groups::MixedQuotientStructure) -> Report {
    let status = if s.resolved().is_some() { EXIT_OK } else { EXIT_UNKNOWN };
    Report { status, text: format!("Pic ({level}): {s}\n"), data: json!({"level": level, "structure": structure_json(s)}) }
}

fn morita(a: &Path, b: &Path, cli: &Cli) -> Outcome {
    let (pa, pb) = (load_presentation(a)?, load_presentation(b)?);
    let verdict = morita_check(&pa, &pb, options(cli))?;
    let name = |p: &Path| p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(match verdict {
        Verdict::Yes(f) => {
            let passes = check_discrete_iso(&f, &pa, &pb, conventions(cli))?;
            let doc = iso_document(&f, &pa, &pb, &name(a), &name(b));
            let witness: Value = serde_json::from_str(&doc.to_json())?;
            Report {
                status: EXIT_OK,
                text: format!("morita: yes\nwitness ({}):\n{}\n", if passes { "validates" } else { "FAILS TO VALIDATE" }, doc.to_json()),
                data: json!({"verdict": "yes", "witness_validates": passes, "witness": witness}),
            }
        }
        Verdict::No(w) => Report {
            status: EXIT_NO,
            text: format!("morita: no\n  {}: {}\n", w.invariant, w.detail),
            data: json!({"verdict": "no", "invariant": w.invariant, "detail": w.detail}),
        },
        Verdict::Unknown(why) => Report { status: EXIT_UNKNOWN, text: format!("morita: unknown\n  {why}\n"), data: json!({"verdict": "unknown", "reason": why}) },
    })
}

fn selftest(file: Option<&Path>, cli: &Cli) -> Outcome {
    let target = match file {
        None => SelfTestTarget::Random,
        Some(path) => {
            let doc = read_document(path)?;
            let d = doc.holonomy_data.as_ref().ok_or_else(|| InputError(format!("{}: expected holonomy data, found {}", path.display(), doc.kind())))?;
            // invalid data is reported by the suite itself, so build without validating
            match holonomy_from_doc(d) {
                Ok(data) => SelfTestTarget::Data(Box::new(data)),
                Err(e) => {
                    let m = e.to_string();
                    return Ok(Report {
                        status: EXIT_NO,
                        text: format!("oracle self-test: validation failed, no property run:\n  {m}\n"),
                        data: json!({"all_passed": false, "validation": [m], "properties": []}),
                    });
                }
            }
        }
    };
    let r = oracle_selftest(&target, cli.seed, cli.count);
    let props: Vec<Value> =
        r.properties.iter().map(|p| json!({"name": p.name, "passed": p.passed, "failed": p.failed, "counterexample": p.counterexample})).collect();
    Ok(Report {
        status: if r.all_passed() { EXIT_OK } else { EXIT_NO },
        text: format!("{r}\n"),
        data: json!({"seed": r.seed, "count": r.count, "target": r.target, "all_passed": r.all_passed(), "validation": r.validation, "properties": props}),
    })
}

