//! Command-line front end. Every subcommand prints a deterministic plain
//! text report; exit status is 0 on success, 1 when the computed answer is
//! negative (not isomorphic, no complete set) and 2 on errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::correspondence::{
    find_complete_sets, quantity_join, quantity_meet, relate, QuantityRelation, SignScope,
    DEFAULT_MAX_COMPLETE_SET_SIZE,
};
use crate::error::{Error, Result};
use crate::io::{ingest_csv, load, Model, SystemDocument};
use crate::limits::{set_size_cap, DEFAULT_SIZE_CAP};
use crate::quantity::Quantity;
use crate::system::{canonical_form, find_isomorphism, structure_attributes, IsoMode, System};
use crate::universe::Universe;

#[derive(Debug, Parser)]
#[command(
    name = "gensys",
    version,
    about = "Quantities, partitions and systems over finite object sets"
)]
struct Cli {
    /// System document used by quantity commands and bare system names.
    #[arg(long, short = 'd', global = true)]
    doc: Option<String>,
    /// Maximum number of tuples in any table.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_CAP)]
    size_cap: u64,
    /// Seed for randomized harnesses; the algorithms themselves are deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a document.
    Validate { file: Option<String> },
    /// Blocks of the partition a quantity induces.
    Partition { quantity: String },
    /// Arity kind, degeneracy, tag and constancy of a quantity.
    Classify { quantity: String },
    /// Independence, dependence and equivalence of two quantities.
    Relate {
        left: Option<String>,
        right: Option<String>,
        /// Relate every pair of equal-arity quantities in the document.
        #[arg(long)]
        all: bool,
        /// Quantify over declared signs instead of realized ones.
        #[arg(long)]
        strict_signs: bool,
    },
    /// Greatest lower bound of two quantities.
    Meet { left: String, right: String },
    /// Least upper bound of two quantities.
    Join { left: String, right: String },
    /// Lift a quantity to a higher arity by projection.
    Lift {
        quantity: String,
        #[arg(long)]
        arity: usize,
        /// Coordinate positions, comma separated; defaults to the first k.
        #[arg(long, value_delimiter = ',')]
        coords: Option<Vec<usize>>,
    },
    /// Compose OUTER (on INNER's sign set) after INNER.
    Compose { inner: String, outer: String },
    /// Minimal complete sets among the document's quantities of one arity.
    Complete {
        #[arg(long)]
        arity: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_COMPLETE_SET_SIZE)]
        max_size: usize,
        #[arg(long)]
        strict_signs: bool,
    },
    /// Restrict every quantity of the document to a subset of objects.
    Restrict {
        #[arg(long, value_delimiter = ',', required = true)]
        vertices: Vec<String>,
        /// Write the restricted document here instead of standard output.
        #[arg(long)]
        output: Option<String>,
    },
    /// Decide whether two systems are isomorphic.
    Iso {
        a: String,
        b: String,
        #[arg(long)]
        relabel_signs: bool,
    },
    /// Canonical certificate of a system.
    Canon {
        a: String,
        #[arg(long)]
        relabel_signs: bool,
    },
    /// Structure attributes of a system.
    Attrs { a: String },
    /// Pairwise dependence and minimal complete sets over CSV columns.
    Fd {
        csv: String,
        #[arg(long)]
        key: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_COMPLETE_SET_SIZE)]
        max_size: usize,
        #[arg(long)]
        strict_signs: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// A report under construction: command echo, input digests, payload and
/// warnings, rendered in that order.
#[derive(Default)]
struct Report {
    command: String,
    inputs: Vec<(String, String)>,
    body: String,
    warnings: Vec<String>,
    negative: bool,
}

impl Report {
    fn line(&mut self, text: impl AsRef<str>) {
        self.body.push_str(text.as_ref());
        self.body.push('\n');
    }

    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (path, digest) in &self.inputs {
            let _ = writeln!(out, "input: {path} sha256:{digest}");
        }
        out.push_str("---\n");
        out.push_str(&self.body);
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

struct Context {
    doc: Option<String>,
    report: Report,
    loaded: Vec<(String, SystemDocument, Model)>,
}

impl Context {
    fn read(&mut self, path: &str) -> Result<Vec<u8>> {
        let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        if !self.report.inputs.iter().any(|(p, _)| p == path) {
            self.report.inputs.push((path.to_string(), digest(&bytes)));
        }
        Ok(bytes)
    }

    fn document(&mut self, path: &str) -> Result<usize> {
        if let Some(i) = self.loaded.iter().position(|(p, _, _)| p == path) {
            return Ok(i);
        }
        let bytes = self.read(path)?;
        let (doc, model) = load(&bytes)?;
        self.loaded.push((path.to_string(), doc, model));
        Ok(self.loaded.len() - 1)
    }

    fn default_document(&mut self) -> Result<usize> {
        let path = self
            .doc
            .clone()
            .ok_or_else(|| Error::Malformed("no document given (use --doc FILE)".into()))?;
        self.document(&path)
    }

    fn model(&self, i: usize) -> &Model {
        &self.loaded[i].2
    }

    /// `NAME` in the default document, or `FILE#NAME`.
    fn quantity(&mut self, reference: &str) -> Result<Quantity> {
        let (i, name) = match reference.split_once('#') {
            Some((file, name)) if !file.is_empty() => (self.document(file)?, name),
            Some((_, name)) => (self.default_document()?, name),
            None => (self.default_document()?, reference),
        };
        self.model(i).quantity(name).cloned()
    }

    /// `FILE`, `FILE#NAME`, `#NAME`, or a system name in the default document.
    fn system(&mut self, reference: &str) -> Result<System> {
        let (i, name) = match reference.split_once('#') {
            Some((file, name)) if !file.is_empty() => (self.document(file)?, Some(name)),
            Some((_, name)) => (self.default_document()?, Some(name)),
            None if Path::new(reference).is_file() => (self.document(reference)?, None),
            None => (self.default_document()?, Some(reference)),
        };
        match name {
            Some(n) => self.model(i).system(n).cloned(),
            None => self.model(i).default_system(),
        }
    }
}

fn tuple_text(q: &Quantity, rank: usize) -> String {
    format!("({})", q.universe().unrank_ids(rank, q.arity()).join(","))
}

fn flag(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn describe_quantity(r: &mut Report, q: &Quantity) {
    r.line(format!("quantity: {}", q.name()));
    r.line(format!("arity: {}", q.arity()));
    r.line(format!("signs: {}", q.signs().signs().join(" ")));
    for rank in 0..q.tuple_count() {
        r.line(format!("  {} -> {}", tuple_text(q, rank), q.sign_at(rank)));
    }
    classification(r, q);
}

fn classification(r: &mut Report, q: &Quantity) {
    let c = q.classify();
    r.line(format!("kind: {}", c.kind));
    r.line(format!("degenerate: {}", flag(c.degenerate)));
    r.line(format!("tag: {}", flag(c.is_tag)));
    r.line(format!(
        "bijective_onto_realized: {}",
        flag(c.bijective_onto_realized)
    ));
    r.line(format!("element_count: {}", c.element_count));
    r.line(format!("declared_signs: {}", c.declared_count));
    r.line(format!("constant: {}", flag(c.is_constant)));
}

fn relation_lines(r: &mut Report, left: &str, right: &str, rel: &QuantityRelation) {
    r.line(format!("relation: {left} {right}"));
    r.line(format!("  left_constant: {}", flag(rel.left_constant)));
    r.line(format!("  right_constant: {}", flag(rel.right_constant)));
    r.line(format!("  independent: {}", flag(rel.independent)));
    r.line(format!(
        "  left_determines_right: {}",
        flag(rel.left_determines_right)
    ));
    r.line(format!(
        "  right_determines_left: {}",
        flag(rel.right_determines_left)
    ));
    r.line(format!("  equivalent: {}", flag(rel.equivalent)));
}

fn scope(strict: bool) -> SignScope {
    if strict {
        SignScope::Declared
    } else {
        SignScope::Realized
    }
}

fn mode(relabel: bool) -> IsoMode {
    if relabel {
        IsoMode::SignRelabelling
    } else {
        IsoMode::ValuePreserving
    }
}

fn relate_all(r: &mut Report, qs: &[Quantity], scope: SignScope) -> Result<()> {
    for i in 0..qs.len() {
        for j in i + 1..qs.len() {
            if qs[i].arity() == qs[j].arity() {
                let rel = relate(&qs[i], &qs[j], scope)?;
                relation_lines(r, qs[i].name(), qs[j].name(), &rel);
            }
        }
    }
    Ok(())
}

fn complete_sets(
    r: &mut Report,
    qs: &[Quantity],
    arity: usize,
    max_size: usize,
    scope: SignScope,
) -> Result<()> {
    let pool: Vec<Quantity> = qs.iter().filter(|q| q.arity() == arity).cloned().collect();
    let found = if pool.is_empty() {
        Vec::new()
    } else {
        find_complete_sets(&pool, arity, max_size, scope)?
    };
    r.line(format!("arity: {arity}"));
    r.line(format!("max_size: {max_size}"));
    r.line(format!("minimal_complete_sets: {}", found.len()));
    for set in &found {
        let names: Vec<&str> = set.iter().map(|&i| pool[i].name()).collect();
        r.line(format!("  {{{}}}", names.join(", ")));
    }
    r.negative = found.is_empty();
    Ok(())
}

fn execute(cli: Cli, ctx: &mut Context) -> Result<()> {
    match cli.command {
        Command::Validate { file } => {
            let i = match file {
                Some(f) => ctx.document(&f)?,
                None => ctx.default_document()?,
            };
            let m = ctx.model(i);
            let (u, q, s) = (m.universe.len(), m.quantities.len(), m.systems.len());
            ctx.report.line("valid: true");
            ctx.report.line(format!("objects: {u}"));
            ctx.report.line(format!("quantities: {q}"));
            ctx.report.line(format!("systems: {s}"));
        }
        Command::Partition { quantity } => {
            let q = ctx.quantity(&quantity)?;
            let p = q.induced_partition();
            let r = &mut ctx.report;
            r.line(format!("quantity: {}", q.name()));
            r.line(format!("arity: {}", q.arity()));
            r.line(format!("tuples: {}", p.domain_size()));
            r.line(format!("blocks: {}", p.block_count()));
            for (b, block) in p.blocks().iter().enumerate() {
                let members: Vec<String> = block.iter().map(|&rank| tuple_text(&q, rank)).collect();
                r.line(format!(
                    "  block {b} [{}]: {}",
                    q.sign_at(block[0]),
                    members.join(" ")
                ));
            }
        }
        Command::Classify { quantity } => {
            let q = ctx.quantity(&quantity)?;
            ctx.report.line(format!("quantity: {}", q.name()));
            ctx.report.line(format!("arity: {}", q.arity()));
            classification(&mut ctx.report, &q);
        }
        Command::Relate {
            left,
            right,
            all,
            strict_signs,
        } => {
            let scope = scope(strict_signs);
            ctx.report.line(format!(
                "sign_scope: {}",
                if strict_signs { "declared" } else { "realized" }
            ));
            if all {
                let i = ctx.default_document()?;
                let qs = ctx.model(i).quantities.clone();
                relate_all(&mut ctx.report, &qs, scope)?;
            } else {
                let (Some(l), Some(s)) = (left, right) else {
                    return Err(Error::Malformed(
                        "relate needs two quantities or --all".into(),
                    ));
                };
                let (lq, sq) = (ctx.quantity(&l)?, ctx.quantity(&s)?);
                let rel = relate(&lq, &sq, scope)?;
                relation_lines(&mut ctx.report, lq.name(), sq.name(), &rel);
            }
        }
        Command::Meet { left, right } => {
            let m = quantity_meet(&ctx.quantity(&left)?, &ctx.quantity(&right)?)?;
            describe_quantity(&mut ctx.report, &m);
        }
        Command::Join { left, right } => {
            let j = quantity_join(&ctx.quantity(&left)?, &ctx.quantity(&right)?)?;
            describe_quantity(&mut ctx.report, &j);
        }
        Command::Lift {
            quantity,
            arity,
            coords,
        } => {
            let q = ctx.quantity(&quantity)?;
            let coords = coords.unwrap_or_else(|| (0..q.arity()).collect());
            let lifted = q.lift(arity, &coords)?;
            ctx.report.line(format!(
                "coords: {}",
                coords
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            ));
            describe_quantity(&mut ctx.report, &lifted);
        }
        Command::Compose { inner, outer } => {
            let c = ctx.quantity(&inner)?.compose(&ctx.quantity(&outer)?)?;
            describe_quantity(&mut ctx.report, &c);
        }
        Command::Complete {
            arity,
            max_size,
            strict_signs,
        } => {
            let i = ctx.default_document()?;
            let qs = ctx.model(i).quantities.clone();
            complete_sets(&mut ctx.report, &qs, arity, max_size, scope(strict_signs))?;
        }
        Command::Restrict { vertices, output } => {
            let i = ctx.default_document()?;
            let sub = Universe::new(vertices)?;
            let (doc, model) = (&ctx.loaded[i].1, &ctx.loaded[i].2);
            let quantities = model
                .quantities
                .iter()
                .map(|q| q.restrict(&sub))
                .collect::<Result<Vec<_>>>()?;
            let systems = doc
                .systems
                .iter()
                .map(|s| {
                    let mut s = s.clone();
                    s.vertices = None;
                    s
                })
                .collect();
            let restricted = SystemDocument::from_parts(&sub, &quantities, systems);
            restricted.build()?;
            let text = restricted.to_json();
            match output {
                Some(path) => {
                    std::fs::write(&path, &text).map_err(|e| Error::Io(format!("{path}: {e}")))?;
                    ctx.report.line(format!("objects: {}", sub.len()));
                    ctx.report.line(format!(
                        "written: {path} sha256:{}",
                        digest(text.as_bytes())
                    ));
                }
                None => ctx.report.body.push_str(&text),
            }
        }
        Command::Iso {
            a,
            b,
            relabel_signs,
        } => {
            let mode = mode(relabel_signs);
            let (sa, sb) = (ctx.system(&a)?, ctx.system(&b)?);
            let r = &mut ctx.report;
            r.line(format!("mode: {mode}"));
            match find_isomorphism(&sa, &sb, mode)? {
                Some(iso) => {
                    r.line("isomorphic: true");
                    for (v, &w) in iso.vertex_map.images().iter().enumerate() {
                        r.line(format!(
                            "  {} -> {}",
                            sa.vertices().id(v),
                            sb.vertices().id(w)
                        ));
                    }
                    if mode == IsoMode::SignRelabelling {
                        for (m, pairs) in iso.sign_maps.iter().enumerate() {
                            let text: Vec<String> =
                                pairs.iter().map(|(x, y)| format!("{x}->{y}")).collect();
                            r.line(format!("  measure {m}: {}", text.join(" ")));
                        }
                    }
                }
                None => {
                    r.line("isomorphic: false");
                    r.line("not isomorphic");
                    r.negative = true;
                }
            }
        }
        Command::Canon { a, relabel_signs } => {
            let mode = mode(relabel_signs);
            let cert = canonical_form(&ctx.system(&a)?, mode)?;
            ctx.report.line(format!("mode: {mode}"));
            ctx.report.line(format!("certificate: {cert}"));
            ctx.report.line(format!("digest: {}", cert.digest()));
        }
        Command::Attrs { a } => {
            let s = ctx.system(&a)?;
            let attrs = structure_attributes(&s);
            let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
            let r = &mut ctx.report;
            r.line(format!("vertex_count: {}", attrs.vertex_count));
            r.line(format!("measure_arities: {}", join(&attrs.measure_arities)));
            r.line(format!(
                "realized_sign_counts: {}",
                join(&attrs.realized_sign_counts)
            ));
            r.line(format!("block_counts: {}", join(&attrs.block_counts)));
            r.line(format!(
                "profile_class_sizes: {}",
                join(&attrs.profile_class_sizes())
            ));
            for p in &attrs.vertex_profiles {
                let text: Vec<String> = p.iter().map(|(m, i, s)| format!("{m}.{i}={s}")).collect();
                r.line(format!("  profile: {}", text.join(" ")));
            }
            r.line(format!(
                "certificate_digest: {}",
                attrs.certificate_digest.as_deref().unwrap_or("none")
            ));
        }
        Command::Fd {
            csv,
            key,
            max_size,
            strict_signs,
        } => {
            let bytes = ctx.read(&csv)?;
            let ingested = ingest_csv(&bytes, key.as_deref())?;
            let model = ingested.document.build()?;
            ctx.report.warnings.extend(ingested.warnings);
            let qs = &model.quantities;
            let r = &mut ctx.report;
            r.line(format!("objects: {}", model.universe.len()));
            r.line(format!("columns: {}", qs.len()));
            r.line(format!(
                "sign_scope: {}",
                if strict_signs { "declared" } else { "realized" }
            ));
            let scope = scope(strict_signs);
            for l in qs {
                for s in qs {
                    if l.name() != s.name() && crate::is_dependent(l, s)? {
                        r.line(format!("dependency: {} -> {}", l.name(), s.name()));
                    }
                }
            }
            relate_all(r, qs, scope)?;
            complete_sets(r, qs, 1, max_size, scope)?;
        }
    }
    Ok(())
}

fn command_echo(args: &[OsString]) -> String {
    args.iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    set_size_cap(cli.size_cap);
    let mut ctx = Context {
        doc: cli.doc.clone(),
        report: Report {
            command: command_echo(&args),
            ..Report::default()
        },
        loaded: Vec::new(),
    };
    match execute(cli, &mut ctx) {
        Ok(()) => Outcome {
            stdout: ctx.report.render(),
            stderr: String::new(),
            code: if ctx.report.negative { 1 } else { 0 },
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: 2,
        },
    }
}
