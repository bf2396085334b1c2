//! A line-oriented circuit language and its runner.
//!
//! ```text
//! qudits 2 dim 3          # header
//! logical 0               # qudit 0 carries open data on the tableau backend
//! prep plus 1
//! sum 1 0
//! measure I XZ2 @ 0 1 == 0 -> m
//! gadget pinv 0
//! expect m == 0
//! expect stabilizer Z Z
//! ```

use crate::backend::Backend;
use crate::clifford::CliffordMap;
use crate::dense::{tableau_to_state, DenseState};
use crate::error::{Error, Result};
use crate::gadgets::{derive_toffoli_corrections, gadget_by_name, gadget_toffoli_on, prepare_toffoli_ancilla, CorrectionTable};
use crate::gate::{Gate, GateOp};
use crate::pauli::{parse_local, PauliOperator};
use crate::tableau::{InitKind, StabilizerTableau};
use crate::zd::Dimension;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
    pub hint: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)?;
        if !self.token.is_empty() {
            write!(f, " (at '{}')", self.token)?;
        }
        if !self.hint.is_empty() {
            write!(f, "; expected {}", self.hint)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PrepKind {
    Zero,
    Plus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Statement {
    Prep {
        kind: PrepKind,
        qudit: usize,
    },
    Gate(GateOp),
    /// `op` acts on `qudits` in order.
    Measure {
        op: PauliOperator,
        qudits: Vec<usize>,
        post_select: Option<u32>,
        name: Option<String>,
    },
    Gadget {
        name: String,
        arg: Option<u32>,
        qudits: Vec<usize>,
    },
    Logical(Vec<usize>),
    ExpectOutcome {
        name: String,
        value: u32,
    },
    ExpectStabilizer(PauliOperator),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Program {
    pub n: usize,
    pub dim: Dimension,
    pub statements: Vec<Statement>,
    /// Source line of each statement.
    pub lines: Vec<usize>,
}

struct Tok<'a> {
    col: usize,
    text: &'a str,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok { col: s + 1, text: &code[s..i] });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok { col: s + 1, text: &code[s..] });
    }
    out
}

struct LineParser<'a> {
    line: usize,
    toks: Vec<Tok<'a>>,
    pos: usize,
    end_col: usize,
    n: usize,
    dim: Dimension,
}

impl<'a> LineParser<'a> {
    fn diag(&self, col: usize, token: &str, message: impl Into<String>, hint: impl Into<String>) -> Diagnostic {
        Diagnostic { line: self.line, column: col, token: token.to_string(), message: message.into(), hint: hint.into() }
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos)
    }

    fn next(&mut self, hint: &str) -> std::result::Result<&Tok<'a>, Diagnostic> {
        if self.pos >= self.toks.len() {
            return Err(self.diag(self.end_col, "", "unexpected end of line", hint));
        }
        self.pos += 1;
        Ok(&self.toks[self.pos - 1])
    }

    fn number(&mut self, hint: &str) -> std::result::Result<(usize, u64), Diagnostic> {
        let t = self.next(hint)?;
        let (col, text) = (t.col, t.text);
        text.parse::<u64>().map(|v| (col, v)).map_err(|_| self.diag(col, text, "not a number", hint))
    }

    fn qudit(&mut self) -> std::result::Result<usize, Diagnostic> {
        let (col, q) = self.number("a qudit index")?;
        if q as usize >= self.n {
            return Err(self.diag(
                col,
                &q.to_string(),
                format!("qudit index {q} out of range for {} qudits", self.n),
                format!("an index below {}", self.n),
            ));
        }
        Ok(q as usize)
    }

    fn qudits(&mut self, count: usize) -> std::result::Result<Vec<usize>, Diagnostic> {
        let mut qs = Vec::with_capacity(count);
        for _ in 0..count {
            let col = self.peek().map_or(self.end_col, |t| t.col);
            let q = self.qudit()?;
            if qs.contains(&q) {
                return Err(self.diag(col, &q.to_string(), format!("qudit {q} used twice"), "distinct qudits"));
            }
            qs.push(q);
        }
        Ok(qs)
    }

    fn residue(&mut self, hint: &str) -> std::result::Result<u32, Diagnostic> {
        let (col, v) = self.number(hint)?;
        if v >= self.dim.d() as u64 {
            return Err(self.diag(col, &v.to_string(), format!("exponent {v} must be below d = {}", self.dim), hint));
        }
        Ok(v as u32)
    }

    fn finish(&self) -> std::result::Result<(), Diagnostic> {
        match self.peek() {
            Some(t) => Err(self.diag(t.col, t.text, "unexpected trailing token", "end of line")),
            None => Ok(()),
        }
    }
}

const MNEMONICS: &str = "prep, measure, gadget, logical, expect, r, p, sum, invsum, scale, x, z, phase2, toffoli, m1, m2, m3";

fn gate_of(name: &str) -> Option<Gate> {
    Some(match name {
        "r" => Gate::Fourier,
        "p" => Gate::PhaseGate,
        "sum" => Gate::Sum,
        "invsum" => Gate::InvSum,
        "x" => Gate::X,
        "z" => Gate::Z,
        "phase2" => Gate::Phase2,
        "toffoli" => Gate::Toffoli,
        "m1" => Gate::M1,
        "m2" => Gate::M2,
        "m3" => Gate::M3,
        _ => return None,
    })
}

fn mnemonic(g: Gate) -> &'static str {
    match g {
        Gate::Fourier => "r",
        Gate::PhaseGate => "p",
        other => other.name(),
    }
}

/// Parses a program, collecting one diagnostic per bad line.
pub fn parse(source: &str) -> std::result::Result<Program, Vec<Diagnostic>> {
    let mut lines = source.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !tokenize(l).is_empty());
    let header_diag = |line: usize, col: usize, token: &str, message: &str| Diagnostic {
        line,
        column: col,
        token: token.to_string(),
        message: message.to_string(),
        hint: "'qudits <n> dim <d>'".to_string(),
    };
    let Some((hline, htext)) = lines.next() else {
        return Err(vec![header_diag(1, 1, "", "missing header")]);
    };
    let h = tokenize(htext);
    let texts: Vec<&str> = h.iter().map(|t| t.text).collect();
    let (n, dim) = match texts.as_slice() {
        ["qudits", n, "dim", d] => {
            let n: usize = match n.parse() {
                Ok(v) if v > 0 => v,
                _ => return Err(vec![header_diag(hline, h[1].col, n, "qudit count must be a positive integer")]),
            };
            let dim = match d.parse::<u32>().map_err(|e| e.to_string()).and_then(|v| Dimension::new(v).map_err(|e| e.to_string())) {
                Ok(dim) => dim,
                Err(e) => return Err(vec![header_diag(hline, h[3].col, d, &e)]),
            };
            (n, dim)
        }
        _ => {
            let t = h.first().map_or("", |t| t.text);
            return Err(vec![header_diag(hline, 1, t, "malformed header")]);
        }
    };

    let mut diags = Vec::new();
    let mut statements = Vec::new();
    let mut stmt_lines = Vec::new();
    let mut names: HashSet<String> = HashSet::new();
    let mut seen_operation = false;
    for (line, text) in lines {
        let toks = tokenize(text);
        let end_col = text.split('#').next().unwrap_or("").trim_end().len() + 1;
        let mut p = LineParser { line, toks, pos: 0, end_col, n, dim };
        match parse_statement(&mut p, &mut names, seen_operation) {
            Ok(st) => {
                if !matches!(st, Statement::Logical(_)) {
                    seen_operation = true;
                }
                statements.push(st);
                stmt_lines.push(line);
            }
            Err(d) => diags.push(d),
        }
    }
    if diags.is_empty() {
        Ok(Program { n, dim, statements, lines: stmt_lines })
    } else {
        Err(diags)
    }
}

fn parse_statement(
    p: &mut LineParser<'_>,
    names: &mut HashSet<String>,
    seen_operation: bool,
) -> std::result::Result<Statement, Diagnostic> {
    let head = p.next("a statement")?;
    let (col, word) = (head.col, head.text);
    let (base, power) = match word.split_once('^') {
        Some((b, e)) => (b, Some(e)),
        None => (word, None),
    };
    let st = match base {
        "prep" if power.is_none() => {
            let t = p.next("'zero' or 'plus'")?;
            let kind = match t.text {
                "zero" => PrepKind::Zero,
                "plus" => PrepKind::Plus,
                other => {
                    let c = t.col;
                    return Err(p.diag(c, other, "unknown preparation", "'zero' or 'plus'"));
                }
            };
            Statement::Prep { kind, qudit: p.qudit()? }
        }
        "logical" if power.is_none() => {
            if seen_operation {
                return Err(p.diag(col, word, "'logical' must come before any operation", "'logical' right after the header"));
            }
            let mut qs = Vec::new();
            while p.peek().is_some() {
                qs.extend(p.qudits(1)?);
            }
            if qs.is_empty() {
                return Err(p.diag(p.end_col, "", "no qudits listed", "one or more qudit indices"));
            }
            Statement::Logical(qs)
        }
        "measure" if power.is_none() => parse_measure(p, names)?,
        "gadget" if power.is_none() => {
            let t = p.next("a gadget name")?;
            let (gcol, name) = (t.col, t.text.to_string());
            let (arg, arity) = match name.as_str() {
                "pinv" | "q" | "r" | "rinv" => (None, 1),
                "sumgadget" => (None, 2),
                "toffoli" => (None, 3),
                "s" => {
                    let (c, v) = p.number("the S parameter s")?;
                    let s = (v % p.dim.d() as u64) as u32;
                    if s == 0 {
                        return Err(p.diag(c, &v.to_string(), format!("s must be nonzero mod {}", p.dim), "s in 1..d"));
                    }
                    (Some(s), 1)
                }
                _ => return Err(p.diag(gcol, &name, "unknown gadget", "pinv, q, r, rinv, s <s>, sumgadget or toffoli")),
            };
            Statement::Gadget { name, arg, qudits: p.qudits(arity)? }
        }
        "expect" if power.is_none() => {
            let t = p.next("an outcome name or 'stabilizer'")?;
            let (tcol, what) = (t.col, t.text);
            if what == "stabilizer" {
                let mut text = Vec::new();
                let mut first_col = p.end_col;
                while let Some(t) = p.peek() {
                    first_col = first_col.min(t.col);
                    text.push(t.text);
                    p.pos += 1;
                }
                let op = PauliOperator::parse(&text.join(" "), p.dim)
                    .map_err(|e| p.diag(first_col, &text.join(" "), e.to_string(), "a Pauli string"))?;
                if op.n() != p.n {
                    return Err(p.diag(
                        first_col,
                        &text.join(" "),
                        format!("stabilizer check needs {} factors, found {}", p.n, op.n()),
                        "one factor per qudit",
                    ));
                }
                Statement::ExpectStabilizer(op)
            } else {
                if !names.contains(what) {
                    return Err(p.diag(tcol, what, "unknown outcome name", "a name bound earlier with '->'"));
                }
                let name = what.to_string();
                let t = p.next("'=='")?;
                if t.text != "==" {
                    let (c, x) = (t.col, t.text);
                    return Err(p.diag(c, x, "expected '=='", "'=='"));
                }
                Statement::ExpectOutcome { name, value: p.residue("a value in 0..d")? }
            }
        }
        "scale" => {
            let k = parse_power(p, col, word, power)?;
            let (c, raw) = p.number("a scale factor")?;
            let a = (raw % p.dim.d() as u64) as u32;
            if a == 0 {
                return Err(p.diag(c, &raw.to_string(), format!("scale factor not invertible mod {}", p.dim), "a factor coprime to d"));
            }
            Statement::Gate(GateOp::pow(Gate::Scale(a), &p.qudits(1)?, k))
        }
        _ => match gate_of(base) {
            Some(g) => {
                let k = parse_power(p, col, word, power)?;
                Statement::Gate(GateOp::pow(g, &p.qudits(g.arity())?, k))
            }
            None => return Err(p.diag(col, word, "unknown mnemonic", MNEMONICS)),
        },
    };
    p.finish()?;
    Ok(st)
}

fn parse_power(p: &LineParser<'_>, col: usize, word: &str, power: Option<&str>) -> std::result::Result<u32, Diagnostic> {
    let Some(e) = power else { return Ok(1) };
    let k: u32 = e.parse().map_err(|_| p.diag(col, word, "bad gate power", "'<gate>^<k>'"))?;
    if k >= p.dim.d() {
        return Err(p.diag(col, word, format!("exponent {k} must be below d = {}", p.dim), "a power in 0..d"));
    }
    Ok(k)
}

fn parse_measure(p: &mut LineParser<'_>, names: &mut HashSet<String>) -> std::result::Result<Statement, Diagnostic> {
    let mut phase = 0u32;
    let mut factors = Vec::new();
    loop {
        let t = p.next("Pauli factors followed by '@'")?;
        let (col, text) = (t.col, t.text);
        if text == "@" {
            break;
        }
        if factors.is_empty() && phase == 0 {
            if let Some(rest) = text.strip_prefix('w') {
                let v: u32 = rest.parse().map_err(|_| p.diag(col, text, "bad phase token", "'w<c>'"))?;
                if v >= p.dim.d() {
                    return Err(p.diag(col, text, format!("exponent {v} must be below d = {}", p.dim), "a phase in 0..d"));
                }
                phase = v;
                continue;
            }
        }
        let f = parse_local(text, p.dim).map_err(|e| p.diag(col, text, e.to_string(), "I, X<a>, Z<b> or X<a>Z<b>"))?;
        factors.push(f);
    }
    if factors.is_empty() {
        return Err(p.diag(p.end_col, "@", "no Pauli factors before '@'", "one factor per measured qudit"));
    }
    let qudits = p.qudits(factors.len())?;
    let mut post_select = None;
    let mut name = None;
    while let Some(t) = p.peek() {
        let (col, text) = (t.col, t.text);
        match text {
            "==" if post_select.is_none() && name.is_none() => {
                p.pos += 1;
                post_select = Some(p.residue("an outcome in 0..d")?);
            }
            "->" if name.is_none() => {
                p.pos += 1;
                let t = p.next("an outcome name")?;
                let (c, nm) = (t.col, t.text.to_string());
                if !nm.chars().next().is_some_and(|ch| ch.is_ascii_alphabetic() || ch == '_')
                    || !nm.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
                {
                    return Err(p.diag(c, &nm, "bad outcome name", "an identifier"));
                }
                if !names.insert(nm.clone()) {
                    return Err(p.diag(c, &nm, "duplicate outcome name", "a fresh name"));
                }
                name = Some(nm);
            }
            _ => return Err(p.diag(col, text, "unexpected token", "'== <a>' or '-> <name>'")),
        }
    }
    let x: Vec<i64> = factors.iter().map(|f| f.0 as i64).collect();
    let z: Vec<i64> = factors.iter().map(|f| f.1 as i64).collect();
    let op = PauliOperator::from_exponents(p.dim, phase as i64, &x, &z).expect("sizes agree");
    Ok(Statement::Measure { op, qudits, post_select, name })
}

fn join(qs: &[usize]) -> String {
    qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Prep { kind, qudit } => {
                write!(f, "prep {} {qudit}", if *kind == PrepKind::Zero { "zero" } else { "plus" })
            }
            Statement::Gate(op) => {
                let (name, arg) = match op.gate {
                    Gate::Scale(a) => ("scale", Some(a)),
                    g => (mnemonic(g), None),
                };
                f.write_str(name)?;
                if op.power != 1 {
                    write!(f, "^{}", op.power)?;
                }
                if let Some(a) = arg {
                    write!(f, " {a}")?;
                }
                write!(f, " {}", join(&op.qudits))
            }
            Statement::Measure { op, qudits, post_select, name } => {
                write!(f, "measure {op} @ {}", join(qudits))?;
                if let Some(a) = post_select {
                    write!(f, " == {a}")?;
                }
                if let Some(nm) = name {
                    write!(f, " -> {nm}")?;
                }
                Ok(())
            }
            Statement::Gadget { name, arg, qudits } => {
                write!(f, "gadget {name}")?;
                if let Some(a) = arg {
                    write!(f, " {a}")?;
                }
                write!(f, " {}", join(qudits))
            }
            Statement::Logical(qs) => write!(f, "logical {}", join(qs)),
            Statement::ExpectOutcome { name, value } => write!(f, "expect {name} == {value}"),
            Statement::ExpectStabilizer(op) => write!(f, "expect stabilizer {op}"),
        }
    }
}

impl Program {
    /// Canonical source text; parsing it gives back the same statements.
    pub fn to_source(&self) -> String {
        let mut s = format!("qudits {} dim {}\n", self.n, self.dim);
        for st in &self.statements {
            s.push_str(&st.to_string());
            s.push('\n');
        }
        s
    }

    pub fn logical_qudits(&self) -> Vec<usize> {
        let mut qs: Vec<usize> = Vec::new();
        for st in &self.statements {
            if let Statement::Logical(l) = st {
                for &q in l {
                    if !qs.contains(&q) {
                        qs.push(q);
                    }
                }
            }
        }
        qs
    }

    /// True when some statement needs the dense backend.
    pub fn needs_dense(&self) -> bool {
        self.statements.iter().any(|st| match st {
            Statement::Gate(op) => !op.gate.is_clifford(),
            Statement::Gadget { name, .. } => name == "toffoli",
            _ => false,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Tableau,
    Dense,
    Both,
}

impl std::str::FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "tableau" => Ok(BackendKind::Tableau),
            "dense" => Ok(BackendKind::Dense),
            "both" => Ok(BackendKind::Both),
            _ => Err(format!("unknown backend '{s}' (tableau, dense or both)")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub backend: BackendKind,
    pub seed: u64,
    pub shots: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub shot: usize,
    pub line: usize,
    pub backend: BackendKind,
    pub passed: bool,
    pub detail: String,
}

enum Engine {
    Tableau(StabilizerTableau),
    Dense(DenseState<f64>),
}

impl Engine {
    fn backend(&mut self) -> &mut dyn Backend {
        match self {
            Engine::Tableau(t) => t,
            Engine::Dense(s) => s,
        }
    }

    fn kind(&self) -> BackendKind {
        match self {
            Engine::Tableau(_) => BackendKind::Tableau,
            Engine::Dense(_) => BackendKind::Dense,
        }
    }
}

/// Outcome stream of one shot: fresh randomness, or a replay of another
/// backend's trajectory.
struct Events {
    rng: ChaCha8Rng,
    forced: Option<Vec<u32>>,
    log: Vec<u32>,
}

impl Events {
    fn forced_slice(&self, count: usize) -> Option<Vec<u32>> {
        self.forced.as_ref().map(|f| {
            let start = self.log.len().min(f.len());
            let end = (self.log.len() + count).min(f.len());
            f[start..end].to_vec()
        })
    }
}

struct ShotRun {
    outcomes: BTreeMap<String, u32>,
    trajectory: Vec<u32>,
    checks: Vec<CheckRecord>,
    engine: Engine,
}

fn shot_rng(seed: u64, shot: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot as u64);
    rng
}

fn execute(program: &Program, mut engine: Engine, mut events: Events, shot: usize, table: Option<&CorrectionTable>) -> Result<ShotRun> {
    let dim = program.dim;
    let n = program.n;
    let mut outcomes = BTreeMap::new();
    let mut checks = Vec::new();
    let kind = engine.kind();
    for (st, &line) in program.statements.iter().zip(&program.lines) {
        match st {
            Statement::Logical(_) => {}
            Statement::Prep { kind: pk, qudit } => {
                let (op, fix) = match pk {
                    PrepKind::Zero => (PauliOperator::z_on(dim, n, *qudit), PauliOperator::x_on(dim, n, *qudit).inverse()),
                    PrepKind::Plus => (PauliOperator::x_on(dim, n, *qudit), PauliOperator::z_on(dim, n, *qudit)),
                };
                let post = events.forced_slice(1).and_then(|v| v.first().copied());
                let a = engine.backend().measure(&op, &mut events.rng, post)?;
                if a != 0 {
                    engine.backend().apply_pauli(&fix.power(a as i64))?;
                }
                events.log.push(a);
            }
            Statement::Gate(op) => {
                for _ in 0..op.power {
                    engine.backend().apply_gate(op.gate, &op.qudits)?;
                }
            }
            Statement::Measure { op, qudits, post_select, name } => {
                let full = op.embed(n, qudits)?;
                let post = post_select.or_else(|| events.forced_slice(1).and_then(|v| v.first().copied()));
                let a = engine.backend().measure(&full, &mut events.rng, post)?;
                events.log.push(a);
                let key = name.clone().unwrap_or_else(|| format!("line{line}"));
                outcomes.insert(key, a);
            }
            Statement::Gadget { name, qudits, .. } if name == "toffoli" => {
                let Engine::Dense(state) = &engine else {
                    return Err(Error::NonClifford("toffoli gadget".into()));
                };
                let table = table.ok_or_else(|| Error::Precondition("no Toffoli correction table".into()))?;
                let ancilla = prepare_toffoli_ancilla::<f64, _>(dim, &mut events.rng)?;
                let post = events.forced_slice(3).filter(|v| v.len() == 3).map(|v| [v[0], v[1], v[2]]);
                let (m, next) = gadget_toffoli_on(state, [qudits[0], qudits[1], qudits[2]], &ancilla, table, &mut events.rng, post)?;
                engine = Engine::Dense(next);
                for (i, a) in m.iter().enumerate() {
                    events.log.push(*a);
                    outcomes.insert(format!("line{line}.{i}"), *a);
                }
            }
            Statement::Gadget { name, arg, qudits } => {
                let record = gadget_by_name(name, dim, *arg)?;
                let count = record.measurement_count();
                let post = events.forced_slice(count).filter(|v| v.len() == count);
                let ms = record.run(engine.backend(), qudits, &mut events.rng, post.as_deref())?;
                for (i, a) in ms.iter().enumerate() {
                    events.log.push(*a);
                    outcomes.insert(format!("line{line}.{i}"), *a);
                }
            }
            Statement::ExpectOutcome { name, value } => {
                let got = outcomes.get(name).copied();
                checks.push(CheckRecord {
                    shot,
                    line,
                    backend: kind,
                    passed: got == Some(*value),
                    detail: match got {
                        Some(v) => format!("{name} = {v}, expected {value}"),
                        None => format!("{name} was never measured"),
                    },
                });
            }
            Statement::ExpectStabilizer(op) => {
                let (passed, detail) = match &engine {
                    Engine::Tableau(t) => match t.deterministic_outcome(op)? {
                        Some(0) => (true, format!("{op} stabilizes the state")),
                        Some(a) => (false, format!("{op} has eigenvalue exponent {a}")),
                        None => (false, format!("{op} is not in the stabilizer group")),
                    },
                    Engine::Dense(s) => {
                        let p0 = s.probabilities(op)?[0];
                        (p0 >= 1.0 - 1e-8, format!("{op}: probability of +1 eigenvalue {p0:.12}"))
                    }
                };
                checks.push(CheckRecord { shot, line, backend: kind, passed, detail });
            }
        }
    }
    Ok(ShotRun { outcomes, trajectory: events.log, checks, engine })
}

fn initial_tableau(program: &Program, open: bool) -> StabilizerTableau {
    let logical = program.logical_qudits();
    let kinds: Vec<InitKind> = (0..program.n).map(|q| if open && logical.contains(&q) { InitKind::Open } else { InitKind::Zero }).collect();
    StabilizerTableau::from_kinds(program.dim, &kinds)
}

/// Nonzero amplitudes with the global phase fixed by the first of them, rounded
/// to 10 decimals.
pub fn state_summary(s: &DenseState<f64>) -> Value {
    let amps = s.amplitudes();
    let reference = amps.iter().find(|a| a.norm() > 1e-9).map(|a| a.conj() / a.norm()).unwrap_or(num_complex::Complex::new(1.0, 0.0));
    let round = |x: f64| {
        let r = (x * 1e10).round() / 1e10;
        if r == 0.0 {
            0.0
        } else {
            r
        }
    };
    let listed: Vec<Value> = amps
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-9)
        .take(64)
        .map(|(i, a)| {
            let z = a * reference;
            json!({"index": i, "re": round(z.re), "im": round(z.im)})
        })
        .collect();
    json!({
        "qudits": s.n(),
        "amplitudes": amps.len(),
        "nonzero": amps.iter().filter(|a| a.norm() > 1e-9).count(),
        "listed": listed,
        "tolerance": 1e-10,
    })
}

fn tableau_final(before: &StabilizerTableau, after: &StabilizerTableau) -> Result<Value> {
    let rows = after.canonicalize()?.to_lines();
    let map: Option<CliffordMap> =
        if before.logicals().is_empty() { None } else { StabilizerTableau::extract_clifford_map(before, after).ok() };
    Ok(json!({
        "stabilizer_rows": rows,
        "logical_map": map.map(|m| m.describe()),
    }))
}

/// Checks a dense final state against tableau runs replaying its outcomes.
fn agreement(program: &Program, dense: &DenseState<f64>, open: &Result<ShotRun>, pure: &Result<ShotRun>) -> (bool, String) {
    let open = match open {
        Ok(r) => r,
        Err(e) => return (false, format!("tableau replay failed: {e}")),
    };
    let pure = match pure {
        Ok(r) => r,
        Err(e) => return (false, format!("tableau replay failed: {e}")),
    };
    let (Engine::Tableau(t_open), Engine::Tableau(t_pure)) = (&open.engine, &pure.engine) else {
        return (false, "internal: expected tableau engines".into());
    };
    for row in t_open.stabilizers() {
        match dense.probabilities(row) {
            Ok(p) if p[0] >= 1.0 - 1e-8 => {}
            Ok(p) => return (false, format!("dense state is not stabilized by {row} (p = {:.3e})", p[0])),
            Err(e) => return (false, e.to_string()),
        }
    }
    match tableau_to_state::<f64>(t_pure) {
        Ok(s) => {
            let (ok, _) = s.equal_up_to_global_phase(dense, 1e-8);
            if ok {
                (true, format!("{} stabilizer rows and the realized state agree", program.n))
            } else {
                (false, "tableau realization differs from the dense state".into())
            }
        }
        Err(e) => (false, e.to_string()),
    }
}

/// Runs every shot and builds the JSON report.
/// Shot JSON, its checks, the final-state summary and the agreement verdict.
type ShotReport = (Value, Vec<CheckRecord>, Option<Value>, Option<bool>);

pub fn run(program: &Program, opts: &RunOptions) -> Result<Value> {
    if opts.backend != BackendKind::Dense && program.needs_dense() {
        return Err(Error::NonClifford("toffoli (needs --backend dense)".into()));
    }
    let dim = program.dim;
    let table =
        if program.needs_dense() && program.statements.iter().any(|s| matches!(s, Statement::Gadget { name, .. } if name == "toffoli")) {
            Some(derive_toffoli_corrections(dim)?)
        } else {
            None
        };
    let header = json!({
        "qudits": program.n,
        "dim": dim.d(),
        "backend": opts.backend,
        "seed": opts.seed,
        "shots": opts.shots,
        "logical": program.logical_qudits(),
    });
    let before = initial_tableau(program, true);

    let results: Vec<Result<ShotReport>> = (0..opts.shots)
        .into_par_iter()
        .map(|shot| {
            let events = || Events { rng: shot_rng(opts.seed, shot), forced: None, log: Vec::new() };
            match opts.backend {
                BackendKind::Tableau => {
                    let r = execute(program, Engine::Tableau(before.clone()), events(), shot, table.as_ref())?;
                    let Engine::Tableau(t) = &r.engine else { unreachable!() };
                    let fin = tableau_final(&before, t)?;
                    Ok((json!({"shot": shot, "outcomes": r.outcomes}), r.checks, Some(fin), None))
                }
                BackendKind::Dense => {
                    let r = execute(program, Engine::Dense(DenseState::zero(dim, program.n)?), events(), shot, table.as_ref())?;
                    let Engine::Dense(s) = &r.engine else { unreachable!() };
                    let fin = json!({"state": state_summary(s)});
                    Ok((json!({"shot": shot, "outcomes": r.outcomes}), r.checks, Some(fin), None))
                }
                BackendKind::Both => {
                    let d = execute(program, Engine::Dense(DenseState::zero(dim, program.n)?), events(), shot, table.as_ref())?;
                    let replay = |open: bool| {
                        let ev = Events { rng: shot_rng(opts.seed, shot), forced: Some(d.trajectory.clone()), log: Vec::new() };
                        execute(program, Engine::Tableau(initial_tableau(program, open)), ev, shot, table.as_ref())
                    };
                    let open = replay(true);
                    let pure = replay(false);
                    let Engine::Dense(s) = &d.engine else { unreachable!() };
                    let (agree, detail) = agreement(program, s, &open, &pure);
                    let mut checks = d.checks.clone();
                    let mut fin = json!({"state": state_summary(s)});
                    if let Ok(o) = &open {
                        checks.extend(o.checks.iter().cloned());
                        if let Engine::Tableau(t) = &o.engine {
                            let tf = tableau_final(&before, t)?;
                            fin["stabilizer_rows"] = tf["stabilizer_rows"].clone();
                            fin["logical_map"] = tf["logical_map"].clone();
                        }
                    }
                    let shot_json = json!({"shot": shot, "outcomes": d.outcomes, "agreement": agree, "detail": detail});
                    Ok((shot_json, checks, Some(fin), Some(agree)))
                }
            }
        })
        .collect();

    let mut shots = Vec::new();
    let mut checks = Vec::new();
    let mut final_value = Value::Null;
    let mut agree_all = true;
    for (i, r) in results.into_iter().enumerate() {
        let (shot, c, fin, agree) = r?;
        shots.push(shot);
        checks.extend(c);
        if i == 0 {
            final_value = fin.unwrap_or(Value::Null);
        }
        if agree == Some(false) {
            agree_all = false;
        }
    }
    let passed = checks.iter().all(|c| c.passed) && agree_all;
    let mut report = json!({
        "header": header,
        "shots": shots,
        "final": final_value,
        "checks": checks,
        "passed": passed,
    });
    if opts.backend == BackendKind::Both {
        report["agreement"] = json!(agree_all);
    }
    Ok(report)
}
