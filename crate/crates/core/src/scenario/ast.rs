//! Syntax tree of scenario files and its canonical printer.
//!
//! Positions are carried for diagnostics but ignored by equality, so a
//! printed-and-reparsed file compares equal to the original.

use std::fmt::{self, Write};

use super::lexer::Pos;

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioFile {
    pub scenarios: Vec<Scenario>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub items: Vec<Spanned<ItemKind>>,
}

/// A node with a source position that equality ignores.
#[derive(Clone, Debug)]
pub struct Spanned<T> {
    pub node: T,
    pub pos: Pos,
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ItemKind {
    Anchor(String),
    Param { name: String, values: Vec<Expr> },
    Const { name: String, value: Expr },
    Rank(Expr),
    Names(Vec<Entry<NameRef>>),
    Word { name: String, word: WordExpr },
    Aut { name: String, body: AutBody },
    Graph { name: String, body: GraphBody },
    Gaut { name: String, graph: String, body: GautBody },
    Basis {
        name: String,
        graph: String,
        base: NameRef,
        entries: Vec<Entry<Binding>>,
    },
    Assert { large: bool, assertion: Assertion },
    Note(String),
}

/// A block entry, possibly repeated by a `for` loop.
#[derive(Clone, Debug, PartialEq)]
pub enum Entry<T> {
    Item(Spanned<T>),
    For {
        var: String,
        range: Range,
        body: Vec<Entry<T>>,
    },
}

/// `name -> word` in automorphism blocks, `name = path` in bases.
#[derive(Clone, Debug, PartialEq)]
pub struct Binding {
    pub name: NameRef,
    pub word: WordExpr,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Range {
    pub from: Expr,
    pub to: Expr,
    pub down: bool,
}

/// `x3`, `x[i, j+1]`.
#[derive(Clone, Debug)]
pub struct NameRef {
    pub base: String,
    pub indices: Vec<Expr>,
    pub pos: Pos,
}

impl PartialEq for NameRef {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.indices == other.indices
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    /// A constant, loop variable, or generator name (its 1-based index).
    Var(NameRef),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WordExpr(pub Vec<WordAtom>);

#[derive(Clone, Debug, PartialEq)]
pub enum WordAtom {
    Empty,
    Sym(NameRef, Option<Expr>),
    Group(WordExpr, Option<Expr>),
    Prod {
        var: String,
        range: Range,
        body: WordExpr,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum AutBody {
    Images(Vec<Entry<Binding>>),
    Expr(AutExpr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AutExpr(pub Vec<AutFactor>);

#[derive(Clone, Debug, PartialEq)]
pub struct AutFactor {
    pub atom: Spanned<AutAtom>,
    pub exp: Option<Expr>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AutAtom {
    Identity,
    Ref(String),
    /// `L`, `R`, `C`, `P` take two indices, `I` one.
    Named(char, Vec<Expr>),
    Realize {
        gaut: String,
        basis: String,
        delta: Option<WordExpr>,
    },
    Paren(AutExpr),
    Inline(Vec<Entry<Binding>>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum GraphBody {
    Builtin { family: String, args: Vec<Expr> },
    Explicit(Vec<Entry<GraphEntry>>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum GraphEntry {
    Vertex(Vec<NameRef>),
    Edge(NameRef, NameRef, NameRef),
    Loop(NameRef, NameRef),
}

#[derive(Clone, Debug, PartialEq)]
pub enum GautBody {
    Rotation,
    Explicit(Vec<Entry<EdgeMap>>),
}

/// `a -> b` or `a -> ~b` (orientation reversed).
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeMap {
    pub from: NameRef,
    pub reversed: bool,
    pub to: NameRef,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Assertion {
    /// `lhs == rhs` or `lhs ~ rhs` (equal up to an inner automorphism),
    /// optionally only on the listed words.
    Compare {
        lhs: AutExpr,
        up_to_inner: bool,
        rhs: AutExpr,
        on: Vec<WordExpr>,
    },
    Call {
        negated: bool,
        func: String,
        args: Vec<Arg>,
        expected: Option<Value>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Arg {
    Aut(AutExpr),
    Word(WordExpr),
    Int(Expr),
    Group { projective: bool, n: Expr, modulus: Expr },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(Expr),
    Keyword(String),
    Word(WordExpr),
    Matrix(Vec<Vec<Expr>>),
    Elementary(Expr, Expr, Expr),
    List(Vec<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgKind {
    Aut,
    Word,
    Int,
    Group,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResultKind {
    Bool,
    /// Integer or `infinite`.
    Order,
    /// Word or `none`.
    Inner,
    Int,
    Matrix,
    Word,
    Keyword(&'static [&'static str]),
    IntList,
}

pub struct Builtin {
    pub name: &'static str,
    pub args: &'static [ArgKind],
    /// The last argument kind may repeat.
    pub variadic: bool,
    pub result: ResultKind,
}

const fn b(name: &'static str, args: &'static [ArgKind], variadic: bool, result: ResultKind) -> Builtin {
    Builtin {
        name,
        args,
        variadic,
        result,
    }
}

use ArgKind as A;
use ResultKind as K;

pub const BUILTINS: &[Builtin] = &[
    b("order", &[A::Aut], false, K::Order),
    b("out_order", &[A::Aut], false, K::Order),
    b("inner", &[A::Aut], false, K::Inner),
    b("det", &[A::Aut], false, K::Int),
    b("abelianize", &[A::Aut], false, K::Matrix),
    b("congruent", &[A::Aut, A::Int], false, K::Bool),
    b("torelli", &[A::Aut], false, K::Bool),
    b("automorphism", &[A::Aut], false, K::Bool),
    b("is_basis", &[A::Word], true, K::Bool),
    b("apply", &[A::Aut, A::Word], false, K::Word),
    b("fixes", &[A::Aut, A::Word], true, K::Bool),
    b("group_order", &[A::Group], false, K::Int),
    b("center_order", &[A::Group], false, K::Int),
    b("simple", &[A::Group], false, K::Bool),
    b("kernel_of_reduction", &[A::Int], false, K::Bool),
    b("splitting", &[A::Int], false, K::Keyword(&["found", "none"])),
    b("splitting_sanity", &[], false, K::Keyword(&["found", "none"])),
    b("subreps", &[A::Int], false, K::IntList),
    b(
        "split_obstruction",
        &[A::Int],
        false,
        K::Keyword(&["infeasible", "feasible", "rejected"]),
    ),
    b("closure_is_kernel", &[A::Int, A::Int, A::Int], false, K::Bool),
];

pub fn builtin(name: &str) -> Option<&'static Builtin> {
    BUILTINS.iter().find(|b| b.name == name)
}

// ---- printing ----

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Int(_) | Expr::Var(_) => 4,
        Expr::Neg(_) => 3,
        Expr::Bin(BinOp::Mul | BinOp::Div | BinOp::Mod, ..) => 2,
        Expr::Bin(..) => 1,
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Var(r) => write!(f, "{r}"),
            Expr::Neg(e) => {
                if prec(e) < 3 {
                    write!(f, "-({e})")
                } else {
                    write!(f, "-{e}")
                }
            }
            Expr::Bin(op, a, b) => {
                let p = prec(self);
                let s = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Mod => "%",
                };
                if prec(a) < p {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, " {s} ")?;
                if prec(b) <= p {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

/// Exponents and matrix cells: `3`, `-1`, `k`, `-k`, otherwise parenthesized.
pub(crate) fn signed_atom(e: &Expr) -> String {
    match e {
        Expr::Int(n) => n.to_string(),
        Expr::Var(r) if r.indices.is_empty() => r.base.clone(),
        Expr::Neg(inner) => match inner.as_ref() {
            Expr::Int(n) => format!("-{n}"),
            Expr::Var(r) if r.indices.is_empty() => format!("-{}", r.base),
            _ => format!("({e})"),
        },
        _ => format!("({e})"),
    }
}

fn write_exp(f: &mut fmt::Formatter<'_>, exp: &Option<Expr>) -> fmt::Result {
    match exp {
        Some(e) => write!(f, "^{}", signed_atom(e)),
        None => Ok(()),
    }
}

impl fmt::Display for NameRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        if !self.indices.is_empty() {
            let idx: Vec<String> = self.indices.iter().map(Expr::to_string).collect();
            write!(f, "[{}]", idx.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.down {
            write!(f, "{} downto {}", self.from, self.to)
        } else {
            write!(f, "{}..{}", self.from, self.to)
        }
    }
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            match a {
                WordAtom::Empty => write!(f, "e")?,
                WordAtom::Sym(r, exp) => {
                    write!(f, "{r}")?;
                    write_exp(f, exp)?;
                }
                WordAtom::Group(w, exp) => {
                    write!(f, "({w})")?;
                    write_exp(f, exp)?;
                }
                WordAtom::Prod { var, range, body } => {
                    write!(f, "prod {var} in {range} {{ {body} }}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.name, self.word)
    }
}

impl fmt::Display for EdgeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = if self.reversed { "~" } else { "" };
        write!(f, "{} -> {t}{}", self.from, self.to)
    }
}

impl fmt::Display for GraphEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphEntry::Vertex(vs) => {
                let names: Vec<String> = vs.iter().map(NameRef::to_string).collect();
                write!(f, "vertex {}", names.join(" "))
            }
            GraphEntry::Edge(e, a, b) => write!(f, "edge {e} {a} {b}"),
            GraphEntry::Loop(e, a) => write!(f, "loop {e} {a}"),
        }
    }
}

/// Writes block entries one per line. `item` renders a single entry.
fn write_entries<T>(
    out: &mut String,
    entries: &[Entry<T>],
    indent: usize,
    item: &dyn Fn(&T) -> String,
) {
    let pad = "  ".repeat(indent);
    for e in entries {
        match e {
            Entry::Item(s) => {
                let _ = writeln!(out, "{pad}{};", item(&s.node));
            }
            Entry::For { var, range, body } => {
                let _ = writeln!(out, "{pad}for {var} in {range} {{");
                write_entries(out, body, indent + 1, item);
                let _ = writeln!(out, "{pad}}}");
            }
        }
    }
}

fn block<T>(entries: &[Entry<T>], indent: usize, item: &dyn Fn(&T) -> String) -> String {
    if entries.is_empty() {
        return "{ }".into();
    }
    let mut s = String::from("{\n");
    write_entries(&mut s, entries, indent + 1, item);
    s.push_str(&"  ".repeat(indent));
    s.push('}');
    s
}

fn binding_block(entries: &[Entry<Binding>], indent: usize, sep: &'static str) -> String {
    block(entries, indent, &|b: &Binding| format!("{} {sep} {}", b.name, b.word))
}

impl fmt::Display for AutExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, fac) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " * ")?;
            }
            match &fac.atom.node {
                AutAtom::Identity => write!(f, "id")?,
                AutAtom::Ref(n) => write!(f, "{n}")?,
                AutAtom::Named(c, args) => {
                    let a: Vec<String> = args.iter().map(Expr::to_string).collect();
                    write!(f, "{c}({})", a.join(", "))?;
                }
                AutAtom::Realize { gaut, basis, delta } => match delta {
                    Some(d) => write!(f, "realize({gaut}, {basis}, {d})")?,
                    None => write!(f, "realize({gaut}, {basis})")?,
                },
                AutAtom::Paren(e) => write!(f, "({e})")?,
                AutAtom::Inline(entries) => {
                    let parts: Vec<String> = flatten_inline(entries);
                    write!(f, "{{ {} }}", parts.join(" "))?;
                }
            }
            write_exp(f, &fac.exp)?;
        }
        Ok(())
    }
}

fn flatten_inline(entries: &[Entry<Binding>]) -> Vec<String> {
    entries
        .iter()
        .map(|e| match e {
            Entry::Item(s) => format!("{};", s.node),
            Entry::For { var, range, body } => {
                format!("for {var} in {range} {{ {} }}", flatten_inline(body).join(" "))
            }
        })
        .collect()
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(e) => write!(f, "{}", signed_atom(e)),
            Value::Keyword(k) => write!(f, "{k}"),
            Value::Word(w) => write!(f, "{w}"),
            Value::Matrix(rows) => {
                let r: Vec<String> = rows
                    .iter()
                    .map(|row| row.iter().map(signed_atom).collect::<Vec<_>>().join(" "))
                    .collect();
                write!(f, "[{}]", r.join("; "))
            }
            Value::Elementary(a, b, c) => write!(f, "elementary({a}, {b}, {c})"),
            Value::List(xs) => {
                let r: Vec<String> = xs.iter().map(Expr::to_string).collect();
                write!(f, "[{}]", r.join(", "))
            }
        }
    }
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Aut(a) => write!(f, "{a}"),
            Arg::Word(w) => write!(f, "{w}"),
            Arg::Int(e) => write!(f, "{e}"),
            Arg::Group {
                projective,
                n,
                modulus,
            } => write!(
                f,
                "{}({n}, {modulus})",
                if *projective { "PSL" } else { "SL" }
            ),
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Compare {
                lhs,
                up_to_inner,
                rhs,
                on,
            } => {
                write!(f, "{lhs} {} {rhs}", if *up_to_inner { "~" } else { "==" })?;
                if !on.is_empty() {
                    let ws: Vec<String> = on.iter().map(WordExpr::to_string).collect();
                    write!(f, " on {}", ws.join(", "))?;
                }
                Ok(())
            }
            Assertion::Call {
                negated,
                func,
                args,
                expected,
            } => {
                if *negated {
                    write!(f, "not ")?;
                }
                let a: Vec<String> = args.iter().map(Arg::to_string).collect();
                write!(f, "{func}({})", a.join(", "))?;
                if let Some(v) = expected {
                    write!(f, " == {v}")?;
                }
                Ok(())
            }
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl fmt::Display for ItemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemKind::Anchor(t) => write!(f, "# anchor: {t}"),
            ItemKind::Param { name, values } => {
                let v: Vec<String> = values.iter().map(Expr::to_string).collect();
                write!(f, "param {name} = {}", v.join(", "))
            }
            ItemKind::Const { name, value } => write!(f, "const {name} = {value}"),
            ItemKind::Rank(e) => write!(f, "rank {e}"),
            ItemKind::Names(entries) => {
                write!(f, "names {}", block(entries, 0, &|r: &NameRef| r.to_string()))
            }
            ItemKind::Word { name, word } => write!(f, "word {name} = {word}"),
            ItemKind::Aut { name, body } => match body {
                AutBody::Images(entries) => {
                    write!(f, "aut {name} {}", binding_block(entries, 0, "->"))
                }
                AutBody::Expr(e) => write!(f, "aut {name} = {e}"),
            },
            ItemKind::Graph { name, body } => match body {
                GraphBody::Builtin { family, args } => {
                    let a: Vec<String> = args.iter().map(Expr::to_string).collect();
                    write!(f, "graph {name} = {family}({})", a.join(", "))
                }
                GraphBody::Explicit(entries) => {
                    write!(f, "graph {name} {}", block(entries, 0, &|g: &GraphEntry| g.to_string()))
                }
            },
            ItemKind::Gaut { name, graph, body } => match body {
                GautBody::Rotation => write!(f, "gaut {name} on {graph} = rotation"),
                GautBody::Explicit(entries) => write!(
                    f,
                    "gaut {name} on {graph} {}",
                    block(entries, 0, &|m: &EdgeMap| m.to_string())
                ),
            },
            ItemKind::Basis {
                name,
                graph,
                base,
                entries,
            } => write!(
                f,
                "basis {name} on {graph} at {base} {}",
                binding_block(entries, 0, "=")
            ),
            ItemKind::Assert { large, assertion } => {
                write!(f, "assert {}{assertion}", if *large { "large " } else { "" })
            }
            ItemKind::Note(t) => write!(f, "note {}", quote(t)),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", quote(&self.name))?;
        for item in &self.items {
            writeln!(f, "{}", item.node)?;
        }
        Ok(())
    }
}

impl fmt::Display for ScenarioFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.scenarios.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
