//! Endomorphism files, certificate text formats and the command-line driver.
//!
//! An endomorphism file:
//!
//! ```text
//! # comment
//! vars: x y, fixed: z
//! field: q
//! x -> x + z x z - z^2 y
//! y -> y + x z^2 - z y z
//! ```
//!
//! Both header lines are optional. Without `vars:` the generators are the
//! left-hand sides in order of appearance and the fixed variable is `z`.

use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::autgroup::{
    abelianized_tame_decomposition, auto_factors, builtin, invert_linear, is_automorphism_linear, stable_tame,
    tame_transcript, AutoFactor, StableTame,
};
use crate::error::{Error, Result};
use crate::expr::{parse_expr, parse_expr_at};
use crate::freealg::{compose, AlgebraCtx, KzEndo};
use crate::jacobian::{jacobian_full, jacobian_linear, TensorElem};
use crate::matgroup::{is_stuck, MatrixVerdict, PolyMatrix, Factor, Transcript};
use crate::poly::{MonomialOrder, OrderKind, Ring};
use crate::scalar::Field;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_WILD: i32 = 3;
pub const EXIT_NOT_AUTOMORPHISM: i32 = 4;
pub const EXIT_NO_TRANSCRIPT: i32 = 5;

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parses an endomorphism file. `field_override` replaces any `field:` header.
pub fn parse_endo(text: &str, field_override: Option<Field>) -> Result<KzEndo> {
    let mut vars: Option<Vec<String>> = None;
    let mut fixed = "z".to_string();
    let mut field = Field::Rational;
    // (line, lhs, lhs column, rhs, rhs column)
    let mut body: Vec<(usize, String, usize, String, usize)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap();
        if content.trim().is_empty() {
            continue;
        }
        let trimmed = content.trim_start();
        let indent = content.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            let mut parts = rest.splitn(2, ',');
            let names: Vec<String> = parts.next().unwrap().split_whitespace().map(String::from).collect();
            if names.is_empty() {
                return Err(perr(line, indent + 1, "`vars:` lists no generators"));
            }
            vars = Some(names);
            if let Some(tail) = parts.next() {
                let tail = tail.trim();
                let name = tail
                    .strip_prefix("fixed:")
                    .ok_or_else(|| perr(line, indent + 1, "expected `fixed: <name>` after `,`"))?;
                fixed = name.trim().to_string();
            }
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("fixed:") {
            fixed = rest.trim().to_string();
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("field:") {
            field = rest.parse().map_err(|e: Error| perr(line, indent + 1, e.to_string()))?;
            continue;
        }
        let Some(arrow) = content.find("->") else {
            return Err(perr(line, indent + 1, "expected `<generator> -> <expression>`"));
        };
        let lhs = content[..arrow].trim().to_string();
        let lhs_col = content[..arrow].find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
        let rhs_off = arrow + 2;
        body.push((line, lhs, lhs_col, content[rhs_off..].to_string(), content[..rhs_off].chars().count() + 1));
    }

    if let Some(f) = field_override {
        field = f;
    }
    let names = match vars {
        Some(v) => v,
        None => {
            let mut v: Vec<String> = Vec::new();
            for (_, lhs, _, _, _) in &body {
                if !v.contains(lhs) && *lhs != fixed {
                    v.push(lhs.clone());
                }
            }
            v
        }
    };
    if names.is_empty() {
        return Err(perr(1, 1, "no generators"));
    }
    let ctx = AlgebraCtx::new(field, &names, &fixed).map_err(|e| perr(1, 1, e.to_string()))?;
    let mut images = vec![None; names.len()];
    for (line, lhs, lhs_col, rhs, rhs_col) in &body {
        if *lhs == fixed {
            return Err(perr(*line, *lhs_col, format!("the fixed variable `{fixed}` cannot be mapped")));
        }
        let Some(slot) = names.iter().position(|n| n == lhs) else {
            return Err(perr(*line, *lhs_col, format!("unknown generator `{lhs}`")));
        };
        if images[slot].is_some() {
            return Err(perr(*line, *lhs_col, format!("duplicate image for `{lhs}`")));
        }
        images[slot] = Some(parse_expr_at(&ctx, rhs, *line, *rhs_col)?);
    }
    let images = images
        .into_iter()
        .zip(&names)
        .map(|(img, name)| img.ok_or_else(|| perr(text.lines().count().max(1), 1, format!("missing image for `{name}`"))))
        .collect::<Result<Vec<_>>>()?;
    KzEndo::new(&ctx, images)
}

/// Prints an endomorphism in the file format accepted by [`parse_endo`].
pub fn print_endo(phi: &KzEndo) -> String {
    let ctx = phi.ctx();
    let mut out = format!("vars: {}, fixed: {}\nfield: {}\n", ctx.x_names().join(" "), ctx.z_name(), ctx.field());
    for (name, img) in ctx.x_names().iter().zip(phi.images()) {
        let _ = writeln!(out, "{name} -> {img}");
    }
    out
}

/// Parses transcript lines (`E i j <poly>`, `D <unit> ...`, `S i j`) over `ring`.
pub fn parse_transcript(lines: &[String], ring: &Arc<Ring>, n: usize) -> Result<Transcript> {
    let mut factors = Vec::new();
    for (k, l) in lines.iter().enumerate() {
        let line = k + 1;
        let mut it = l.split_whitespace();
        let idx = |s: Option<&str>| -> Result<usize> {
            s.and_then(|s| s.parse::<usize>().ok())
                .filter(|&v| v >= 1 && v <= n)
                .map(|v| v - 1)
                .ok_or_else(|| perr(line, 1, format!("bad index in `{l}`")))
        };
        match it.next() {
            Some("E") => {
                let i = idx(it.next())?;
                let j = idx(it.next())?;
                let rest: Vec<&str> = it.collect();
                let p = parse_expr_at(ring, &rest.join(" "), line, 1)?;
                factors.push(Factor::Elem(i, j, p));
            }
            Some("D") => {
                let units = it
                    .map(|s| {
                        parse_expr_at(ring, s, line, 1)?
                            .as_unit()
                            .ok_or_else(|| perr(line, 1, format!("`{s}` is not a unit")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                factors.push(Factor::Diag(units));
            }
            Some("S") => {
                let i = idx(it.next())?;
                let j = idx(it.next())?;
                factors.push(Factor::Swap(i, j));
            }
            _ => return Err(perr(line, 1, format!("unrecognized factor `{l}`"))),
        }
    }
    Ok(Transcript { n, factors })
}

/// Parses a matrix given as rows of polynomial strings.
pub fn parse_matrix(rows: &[Vec<String>], ring: &Arc<Ring>) -> Result<PolyMatrix> {
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().map(|s| parse_expr_at(ring, s, i + 1, 1)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    PolyMatrix::from_rows(ring, rows)
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Deglex,
    Lex,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PriorityArg {
    Z1z2,
    Z2z1,
}

#[derive(Parser, Debug)]
#[command(name = "kzaut", version, about = "Decide and certify tameness of linear K[z]-automorphisms of free algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Monomial order for leading-term elimination.
    #[arg(long, value_enum, default_value = "deglex", global = true)]
    order: OrderArg,
    /// Variable priority of the monomial order on K[z1, z2].
    #[arg(long, value_enum, default_value = "z1z2", global = true)]
    priority: PriorityArg,
    /// Coefficient field: `q` or `fp:<prime>`; overrides the file header.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Emit a JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Analyse only the x-degree-one part of each image.
    #[arg(long = "linear-part", global = true)]
    linear_part: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Jacobian matrix.
    Jacobian { file: String },
    /// Decide whether a linear endomorphism is an automorphism.
    Check { file: String },
    /// Decide tameness and print the matrix transcript or the wildness witness.
    Tame { file: String },
    /// Decide tameness and print the elementary automorphism factors.
    Decompose { file: String },
    /// Print the inverse automorphism.
    Invert { file: String },
    /// Print the composition first(second(x)).
    Compose { first: String, second: String },
    /// Print the induced automorphism of K[X, z] and its decomposition over K[z].
    Abelianize { file: String },
    /// Decompose diag(J, 1) over one extra variable t.
    Stabilize { file: String },
    /// Print a built-in endomorphism.
    Example { name: String },
}

/// What a command run produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Outcome {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(msg: String) -> Outcome {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

struct Session {
    ord: MonomialOrder,
    field: Option<Field>,
    json: bool,
    linear_part: bool,
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(code, text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let kind = match cli.order {
        OrderArg::Deglex => OrderKind::DegLex,
        OrderArg::Lex => OrderKind::Lex,
    };
    let priority = match cli.priority {
        PriorityArg::Z1z2 => vec![0, 1],
        PriorityArg::Z2z1 => vec![1, 0],
    };
    let field = match cli.field.as_deref().map(str::parse::<Field>).transpose() {
        Ok(f) => f,
        Err(e) => return Outcome::fail(e.to_string()),
    };
    let session = Session {
        ord: MonomialOrder::new(kind, priority).expect("fixed permutation"),
        field,
        json: cli.json,
        linear_part: cli.linear_part,
    };
    match session.dispatch(&cli.command) {
        Ok(o) => o,
        Err(e) => Outcome::fail(e.to_string()),
    }
}

const LINEAR_PART_NOTICE: &str =
    "analysing the x-degree-one part only: for a nonlinear input this is a necessary condition, not a decision";

impl Session {
    fn load(&self, path: &str) -> Result<(KzEndo, Option<&'static str>)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("cannot read `{path}`: {e}")))?;
        let phi = parse_endo(&text, self.field).map_err(|e| match e {
            Error::Parse { line, col, msg } => Error::Domain(format!("{path}:{line}:{col}: {msg}")),
            e => e,
        })?;
        if self.linear_part {
            let lin = phi.linear_part();
            let notice = (lin != phi).then_some(LINEAR_PART_NOTICE);
            return Ok((lin, notice));
        }
        Ok((phi, None))
    }

    fn emit(&self, code: i32, text: String, json: Value, notice: Option<&str>) -> Outcome {
        if self.json {
            let mut json = json;
            if let Some(n) = notice {
                json["notice"] = Value::String(n.to_string());
            }
            Outcome::ok(code, format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
        } else {
            let mut out = String::new();
            if let Some(n) = notice {
                let _ = writeln!(out, "# note: {n}");
            }
            out.push_str(&text);
            Outcome::ok(code, out)
        }
    }

    fn dispatch(&self, cmd: &Command) -> Result<Outcome> {
        match cmd {
            Command::Jacobian { file } => self.jacobian(file),
            Command::Check { file } => self.check(file),
            Command::Tame { file } => self.tame(file),
            Command::Decompose { file } => self.decompose(file),
            Command::Invert { file } => self.invert(file),
            Command::Compose { first, second } => self.compose(first, second),
            Command::Abelianize { file } => self.abelianize(file),
            Command::Stabilize { file } => self.stabilize(file),
            Command::Example { name } => {
                let phi = builtin(name, self.field.unwrap_or(Field::Rational))?;
                Ok(self.emit(EXIT_OK, print_endo(&phi), json!({ "endomorphism": endo_json(&phi) }), None))
            }
        }
    }

    fn jacobian(&self, file: &str) -> Result<Outcome> {
        let (phi, notice) = self.load(file)?;
        match jacobian_linear(&phi) {
            Ok(j) => {
                let text = format!("jacobian over K[z1,z2]:\n{j}\ndet = {}\n", j.det());
                let js = json!({ "kind": "linear", "matrix": matrix_json(&j), "det": j.det().to_string() });
                Ok(self.emit(EXIT_OK, text, js, notice))
            }
            Err(Error::NotXLinear { .. }) => {
                let full = jacobian_full(&phi);
                let cells: Vec<Vec<String>> = full.iter().map(|r| r.iter().map(TensorElem::to_string).collect()).collect();
                let mut text = String::from("jacobian over F^op⊗F:\n");
                for row in &cells {
                    let _ = writeln!(text, "[{}]", row.join(", "));
                }
                Ok(self.emit(EXIT_OK, text, json!({ "kind": "tensor", "matrix": cells }), notice))
            }
            Err(e) => Err(e),
        }
    }

    fn check(&self, file: &str) -> Result<Outcome> {
        let (phi, notice) = self.load(file)?;
        let j = jacobian_linear(&phi)?;
        let auto = is_automorphism_linear(&phi)?;
        let det = j.det();
        let text = format!(
            "jacobian over K[z1,z2]:\n{j}\ndet = {det}\nautomorphism: {}\n",
            if auto { "yes" } else { "no" }
        );
        let js = json!({
            "verdict": if auto { "automorphism" } else { "not_automorphism" },
            "matrix": matrix_json(&j),
            "det": det.to_string(),
        });
        let code = if auto { EXIT_OK } else { EXIT_NOT_AUTOMORPHISM };
        Ok(self.emit(code, text, js, notice))
    }

    fn not_automorphism(&self, j: &PolyMatrix, notice: Option<&str>) -> Outcome {
        let det = j.det();
        let text = format!("verdict: not an automorphism\njacobian over K[z1,z2]:\n{j}\ndet = {det}\n");
        let js = json!({ "verdict": "not_automorphism", "matrix": matrix_json(j), "det": det.to_string() });
        self.emit(EXIT_NOT_AUTOMORPHISM, text, js, notice)
    }

    fn tame_common(&self, file: &str, as_autos: bool) -> Result<Outcome> {
        let (phi, notice) = self.load(file)?;
        let j = jacobian_linear(&phi)?;
        if !j.is_gl() {
            return Ok(self.not_automorphism(&j, notice));
        }
        let ring = j.ring().clone();
        match tame_transcript(&phi, &self.ord)? {
            MatrixVerdict::Tame(t) => {
                let t = t.expanded(&ring);
                let autos = auto_factors(&t);
                let body = if as_autos { lines(&autos) } else { lines(&t.factors) };
                let text = format!(
                    "verdict: tame\njacobian over K[z1,z2]:\n{j}\n{} ({}):\n{}",
                    if as_autos { "elementary automorphisms" } else { "transcript" },
                    if as_autos { autos.len() } else { t.len() },
                    body
                );
                let js = json!({
                    "verdict": "tame",
                    "matrix": matrix_json(&j),
                    "factors": t.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                    "auto_factors": autos.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                });
                Ok(self.emit(EXIT_OK, text, js, notice))
            }
            MatrixVerdict::Wild(w) => {
                let (a, c) = (w.get(0, 0), w.get(1, 0));
                let lt = |p: &crate::poly::CommPoly| {
                    let (cf, m) = p.leading_term(&self.ord).expect("nonzero");
                    crate::poly::CommPoly::term(&ring, cf, m).to_string()
                };
                debug_assert!(is_stuck(&w, &self.ord));
                let text = format!(
                    "verdict: wild\njacobian over K[z1,z2]:\n{j}\nwitness (leading terms {} and {} of the first column are not divisible by each other):\n{w}\n",
                    lt(a),
                    lt(c)
                );
                let js = json!({ "verdict": "wild", "matrix": matrix_json(&j), "witness": matrix_json(&w) });
                Ok(self.emit(EXIT_WILD, text, js, notice))
            }
            MatrixVerdict::TameByTheorem => {
                let text = format!(
                    "verdict: tame by Suslin's theorem (n >= 3); no explicit factorization found\njacobian over K[z1,z2]:\n{j}\n"
                );
                let js = json!({ "verdict": "tame_by_theorem", "matrix": matrix_json(&j) });
                Ok(self.emit(EXIT_NO_TRANSCRIPT, text, js, notice))
            }
        }
    }

    fn tame(&self, file: &str) -> Result<Outcome> {
        self.tame_common(file, false)
    }

    fn decompose(&self, file: &str) -> Result<Outcome> {
        self.tame_common(file, true)
    }

    fn invert(&self, file: &str) -> Result<Outcome> {
        let (phi, notice) = self.load(file)?;
        let j = jacobian_linear(&phi)?;
        if !j.is_gl() {
            return Ok(self.not_automorphism(&j, notice));
        }
        let inv = invert_linear(&phi)?;
        Ok(self.emit(EXIT_OK, print_endo(&inv), json!({ "endomorphism": endo_json(&inv) }), notice))
    }

    fn compose(&self, first: &str, second: &str) -> Result<Outcome> {
        let (phi, n1) = self.load(first)?;
        let (psi, n2) = self.load(second)?;
        let chi = compose(&phi, &psi)?;
        Ok(self.emit(EXIT_OK, print_endo(&chi), json!({ "endomorphism": endo_json(&chi) }), n1.or(n2)))
    }

    fn abelianize(&self, file: &str) -> Result<Outcome> {
        let (phi, notice) = self.load(file)?;
        let j = jacobian_linear(&phi)?;
        if !j.is_gl() {
            return Ok(self.not_automorphism(&j, notice));
        }
        let (ab, t) = abelianized_tame_decomposition(&phi)?;
        let t = t.expanded(ab.coeffs.ring());
        let text = format!(
            "induced automorphism of K[X,z]:\n{ab}\njacobian over K[z]:\n{}\ntranscript ({}):\n{}",
            ab.coeffs,
            t.len(),
            lines(&t.factors)
        );
        let images: Vec<String> = (0..ab.x_names.len()).map(|k| ab.image_string(k)).collect();
        let js = json!({
            "verdict": "tame",
            "images": images,
            "matrix": matrix_json(&ab.coeffs),
            "factors": t.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        });
        Ok(self.emit(EXIT_OK, text, js, notice))
    }

    fn stabilize(&self, file: &str) -> Result<Outcome> {
        let (phi, notice) = self.load(file)?;
        let j = jacobian_linear(&phi)?;
        if !j.is_gl() {
            return Ok(self.not_automorphism(&j, notice));
        }
        let target = j.embed(3);
        match stable_tame(&phi, &self.ord)? {
            StableTame::Tame { ctx, transcript, .. } => {
                let t = transcript.expanded(j.ring());
                let autos = auto_factors(&t);
                let text = format!(
                    "stabilized jacobian diag(J, 1) over K[z1,z2]:\n{target}\ntranscript ({}):\n{}elementary automorphisms of K<{},{}> ({}):\n{}",
                    t.len(),
                    lines(&t.factors),
                    ctx.x_names().join(","),
                    ctx.z_name(),
                    autos.len(),
                    lines(&autos)
                );
                let js = json!({
                    "verdict": "stably_tame",
                    "matrix": matrix_json(&target),
                    "factors": t.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                    "auto_factors": autos.iter().map(AutoFactor::to_string).collect::<Vec<_>>(),
                    "vars": ctx.x_names(),
                });
                Ok(self.emit(EXIT_OK, text, js, notice))
            }
            StableTame::Unknown => {
                let text = format!("verdict: unknown (no 3x3 transcript found)\nstabilized jacobian:\n{target}\n");
                let js = json!({ "verdict": "unknown", "matrix": matrix_json(&target) });
                Ok(self.emit(EXIT_NO_TRANSCRIPT, text, js, notice))
            }
        }
    }
}

fn lines<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|f| format!("{f}\n")).collect()
}

fn matrix_json(m: &PolyMatrix) -> Value {
    Value::from(
        m.rows()
            .iter()
            .map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
}

fn endo_json(phi: &KzEndo) -> Value {
    let ctx = phi.ctx();
    json!({
        "vars": ctx.x_names(),
        "fixed": ctx.z_name(),
        "field": ctx.field().to_string(),
        "images": phi.images().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
    })
}

/// Parses a polynomial of K[z1, z2] in the compact certificate syntax.
pub fn parse_bivariate(field: Field, s: &str) -> Result<crate::poly::CommPoly> {
    parse_expr(&Ring::bivariate(field), s)
}
