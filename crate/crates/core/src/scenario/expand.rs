//! Resolves a parsed scenario into concrete instances: parameters are
//! substituted, loops unrolled, names resolved to generator indices and
//! graph data built. Everything that cannot fail at run time is checked here.

use std::collections::HashMap;

use super::ast::*;
use super::lexer::Pos;
use super::{DiagKind, Diagnostic};
use crate::abelian::IntMatrix;
use crate::endo::{Endo, NamedGenerator};
use crate::graph::{EdgeId, EdgePath, Graph, GraphAut, VertexId};
use crate::word::{Letter, Word};

/// One parameter assignment of a scenario.
#[derive(Clone, Debug)]
pub struct Instance {
    pub scenario: String,
    pub rank: usize,
    pub names: Vec<String>,
    pub graphs: HashMap<String, Graph>,
    pub gauts: HashMap<String, (String, GraphAut)>,
    pub bases: HashMap<String, BasisDef>,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug)]
pub struct BasisDef {
    pub graph: String,
    pub base: VertexId,
    /// Loops at `base`, one per generator in name order.
    pub paths: Vec<EdgePath>,
}

#[derive(Clone, Debug)]
pub enum Step {
    DefAut {
        name: String,
        aut: RAut,
        text: String,
        anchor: String,
        line: usize,
    },
    Check {
        text: String,
        anchor: String,
        line: usize,
        check: Check,
        large: bool,
    },
    Note {
        text: String,
        anchor: String,
        line: usize,
    },
}

/// A resolved automorphism expression.
#[derive(Clone, Debug, PartialEq)]
pub enum RAut {
    Identity,
    Ref(String),
    Named(NamedGenerator),
    Images(Vec<Word>),
    Realize {
        gaut: String,
        basis: String,
        delta: Option<EdgePath>,
    },
    /// Written order; composed right to left.
    Chain(Vec<RAut>),
    Power(Box<RAut>, i64),
}

#[derive(Clone, Debug)]
pub enum Check {
    Compare {
        lhs: RAut,
        rhs: RAut,
        up_to_inner: bool,
        on: Vec<Word>,
    },
    Call {
        func: &'static str,
        negated: bool,
        args: Vec<RArg>,
        expected: Option<RValue>,
    },
}

impl Check {
    /// Whether the outcome can depend on how chains are read.
    pub fn uses_chains(&self) -> bool {
        match self {
            Check::Compare { .. } => true,
            Check::Call { args, .. } => args.iter().any(|a| matches!(a, RArg::Aut(_))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum RArg {
    Aut(RAut),
    Word(Word),
    Int(i64),
    Group { projective: bool, n: usize, modulus: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum RValue {
    Int(i64),
    Keyword(String),
    Word(Word),
    Matrix(IntMatrix),
    List(Vec<i64>),
}

type DResult<T> = Result<T, Diagnostic>;

fn diag<T>(kind: DiagKind, pos: Pos, message: impl Into<String>) -> DResult<T> {
    Err(Diagnostic {
        kind,
        pos,
        message: message.into(),
        expected: Vec::new(),
    })
}

/// Expands every parameter combination of `sc`. `default_name` replaces an
/// empty scenario name; `anchor` is the anchor in force before the scenario.
pub fn expand(sc: &Scenario, default_name: &str, anchor: &str) -> DResult<Vec<Instance>> {
    let name = if sc.name.is_empty() {
        default_name.to_string()
    } else {
        sc.name.clone()
    };
    let params: Vec<(&String, &Vec<Expr>, Pos)> = sc
        .items
        .iter()
        .filter_map(|it| match &it.node {
            ItemKind::Param { name, values } => Some((name, values, it.pos)),
            _ => None,
        })
        .collect();
    let mut combos: Vec<Vec<(String, i64)>> = vec![Vec::new()];
    for (pname, values, _) in &params {
        let mut vals = Vec::new();
        for v in values.iter() {
            let mut cx = Cx::new(anchor);
            vals.push(cx.expr(v)?);
        }
        combos = combos
            .into_iter()
            .flat_map(|c| {
                vals.iter().map(move |&v| {
                    let mut c = c.clone();
                    c.push(((*pname).clone(), v));
                    c
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for combo in combos {
        let label = if combo.is_empty() {
            name.clone()
        } else {
            let parts: Vec<String> = combo.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{name}[{}]", parts.join(","))
        };
        let mut cx = Cx::new(anchor);
        cx.vars = combo;
        for it in &sc.items {
            cx.item(it)?;
        }
        out.push(Instance {
            scenario: label,
            rank: cx.rank.unwrap_or(0),
            names: cx.names.unwrap_or_default(),
            graphs: cx.graphs,
            gauts: cx.gauts,
            bases: cx.bases,
            steps: cx.steps,
        });
    }
    Ok(out)
}

struct Cx {
    vars: Vec<(String, i64)>,
    rank: Option<usize>,
    names: Option<Vec<String>>,
    default_names: bool,
    index: HashMap<String, usize>,
    words: HashMap<String, Word>,
    auts: HashMap<String, ()>,
    graphs: HashMap<String, Graph>,
    gauts: HashMap<String, (String, GraphAut)>,
    bases: HashMap<String, BasisDef>,
    anchor: String,
    steps: Vec<Step>,
}

impl Cx {
    fn new(anchor: &str) -> Cx {
        Cx {
            vars: Vec::new(),
            rank: None,
            names: None,
            default_names: false,
            index: HashMap::new(),
            words: HashMap::new(),
            auts: HashMap::new(),
            graphs: HashMap::new(),
            gauts: HashMap::new(),
            bases: HashMap::new(),
            anchor: anchor.to_string(),
            steps: Vec::new(),
        }
    }

    fn var(&self, name: &str) -> Option<i64> {
        self.vars.iter().rev().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    fn set_names(&mut self, names: Vec<String>, pos: Pos, default: bool) -> DResult<()> {
        if let Some(r) = self.rank {
            if r != names.len() {
                return diag(
                    DiagKind::RankMismatch,
                    pos,
                    format!("{} generator names declared for rank {r}", names.len()),
                );
            }
        }
        let mut index = HashMap::new();
        for (k, n) in names.iter().enumerate() {
            if index.insert(n.clone(), k + 1).is_some() {
                return diag(DiagKind::Invalid, pos, format!("generator `{n}` declared twice"));
            }
        }
        self.rank = Some(names.len());
        self.index = index;
        self.names = Some(names);
        self.default_names = default;
        Ok(())
    }

    fn need_rank(&self, pos: Pos) -> DResult<usize> {
        match self.rank {
            Some(r) => Ok(r),
            None => diag(DiagKind::RankMismatch, pos, "rank is not declared yet"),
        }
    }

    // ---- expressions ----

    fn expr(&mut self, e: &Expr) -> DResult<i64> {
        Ok(match e {
            Expr::Int(n) => *n,
            Expr::Neg(a) => -self.expr(a)?,
            Expr::Var(r) => {
                if r.indices.is_empty() {
                    if let Some(v) = self.var(&r.base) {
                        return Ok(v);
                    }
                }
                let key = self.key(r)?;
                match self.index.get(&key) {
                    Some(&k) => k as i64,
                    None => return self.unknown_generator(&key, r.pos, "constant or generator"),
                }
            }
            Expr::Bin(op, a, b) => {
                let (x, y) = (self.expr(a)?, self.expr(b)?);
                let pos = expr_pos(e);
                match op {
                    BinOp::Add => x.checked_add(y),
                    BinOp::Sub => x.checked_sub(y),
                    BinOp::Mul => x.checked_mul(y),
                    BinOp::Div | BinOp::Mod if y == 0 => {
                        return diag(DiagKind::Invalid, pos, "division by zero");
                    }
                    BinOp::Div => Some(x.div_euclid(y)),
                    BinOp::Mod => Some(x.rem_euclid(y)),
                }
                .map_or_else(|| diag(DiagKind::Invalid, pos, "integer overflow"), Ok)?
            }
        })
    }

    fn unknown_generator<T>(&self, key: &str, pos: Pos, what: &str) -> DResult<T> {
        if let (Some(r), true) = (self.rank, self.default_names) {
            if let Some(d) = key.strip_prefix('x') {
                if !d.is_empty() && d.bytes().all(|c| c.is_ascii_digit()) {
                    return diag(
                        DiagKind::RankMismatch,
                        pos,
                        format!("generator {key} out of range for rank {r}"),
                    );
                }
            }
        }
        diag(DiagKind::UndefinedName, pos, format!("undefined {what} `{key}`"))
    }

    /// Lookup key with evaluated indices: `x[i]` at `i = 3` is `x3`,
    /// `x[i, j]` stays bracketed as `x[3,1]`.
    fn key(&mut self, r: &NameRef) -> DResult<String> {
        let mut idx = Vec::with_capacity(r.indices.len());
        for e in &r.indices {
            idx.push(self.expr(e)?.to_string());
        }
        Ok(match idx.len() {
            0 => r.base.clone(),
            1 => format!("{}{}", r.base, idx[0]),
            _ => format!("{}[{}]", r.base, idx.join(",")),
        })
    }

    fn range(&mut self, r: &Range) -> DResult<Vec<i64>> {
        let (a, b) = (self.expr(&r.from)?, self.expr(&r.to)?);
        Ok(if r.down {
            (b..=a).rev().collect()
        } else {
            (a..=b).collect()
        })
    }

    fn exp(&mut self, e: &Option<Expr>) -> DResult<i64> {
        match e {
            Some(e) => self.expr(e),
            None => Ok(1),
        }
    }

    // ---- entries ----

    fn entries<T>(
        &mut self,
        entries: &[Entry<T>],
        f: &mut dyn FnMut(&mut Cx, &T, Pos) -> DResult<()>,
    ) -> DResult<()> {
        for e in entries {
            match e {
                Entry::Item(s) => f(self, &s.node, s.pos)?,
                Entry::For { var, range, body } => {
                    for v in self.range(range)? {
                        self.vars.push((var.clone(), v));
                        let r = self.entries(body, f);
                        self.vars.pop();
                        r?;
                    }
                }
            }
        }
        Ok(())
    }

    // ---- words ----

    /// Letters over the generator alphabet.
    fn word(&mut self, w: &WordExpr, pos: Pos) -> DResult<Word> {
        let rank = self.need_rank(pos)?;
        let mut letters: Vec<Letter> = Vec::new();
        self.word_letters(w, &mut |cx, r| {
            let key = cx.key(r)?;
            if let Some(&k) = cx.index.get(&key) {
                return Ok(vec![k as Letter]);
            }
            if let Some(w) = cx.words.get(&key) {
                return Ok(w.letters().to_vec());
            }
            cx.unknown_generator(&key, r.pos, "generator or word")
        }, &mut letters)?;
        Word::new(rank, letters).map_err(|e| Diagnostic {
            kind: DiagKind::RankMismatch,
            pos,
            message: e.to_string(),
            expected: Vec::new(),
        })
    }

    fn word_letters(
        &mut self,
        w: &WordExpr,
        sym: &mut dyn FnMut(&mut Cx, &NameRef) -> DResult<Vec<Letter>>,
        out: &mut Vec<Letter>,
    ) -> DResult<()> {
        for atom in &w.0 {
            match atom {
                WordAtom::Empty => {}
                WordAtom::Sym(r, e) => {
                    let base = sym(self, r)?;
                    let k = self.exp(e)?;
                    power_into(&base, k, out);
                }
                WordAtom::Group(inner, e) => {
                    let mut base = Vec::new();
                    self.word_letters(inner, sym, &mut base)?;
                    let k = self.exp(e)?;
                    power_into(&base, k, out);
                }
                WordAtom::Prod { var, range, body } => {
                    for v in self.range(range)? {
                        self.vars.push((var.clone(), v));
                        let r = self.word_letters(body, sym, out);
                        self.vars.pop();
                        r?;
                    }
                }
            }
        }
        Ok(())
    }

    /// An edge path over the edges of `graph`, starting at `start`.
    fn path(&mut self, graph: &Graph, start: VertexId, w: &WordExpr, pos: Pos) -> DResult<EdgePath> {
        let mut letters = Vec::new();
        self.word_letters(w, &mut |cx, r| {
            let key = cx.key(r)?;
            match graph.edge_id(&key) {
                Some(e) => Ok(vec![(e + 1) as Letter]),
                None => diag(DiagKind::UndefinedName, r.pos, format!("undefined edge `{key}`")),
            }
        }, &mut letters)?;
        // Backtracking is homotopically trivial, so reduce before walking.
        let mut reduced: Vec<Letter> = Vec::new();
        for l in letters {
            if reduced.last() == Some(&-l) {
                reduced.pop();
            } else {
                reduced.push(l);
            }
        }
        let steps: Vec<(EdgeId, bool)> = reduced
            .iter()
            .map(|&l| ((l.unsigned_abs() - 1) as EdgeId, l < 0))
            .collect();
        EdgePath::new(graph, start, steps).or_else(|e| diag(DiagKind::Invalid, pos, e.to_string()))
    }

    // ---- automorphisms ----

    fn images(&mut self, entries: &[Entry<Binding>], pos: Pos) -> DResult<Vec<Word>> {
        let rank = self.need_rank(pos)?;
        let mut images: Vec<Option<Word>> = vec![None; rank];
        self.entries(entries, &mut |cx, b: &Binding, p| {
            let key = cx.key(&b.name)?;
            let k = match cx.index.get(&key) {
                Some(&k) => k,
                None => return cx.unknown_generator(&key, b.name.pos, "generator"),
            };
            let w = cx.word(&b.word, p)?;
            if images[k - 1].replace(w).is_some() {
                return diag(DiagKind::Invalid, p, format!("image of `{key}` given twice"));
            }
            Ok(())
        })?;
        Ok(images
            .into_iter()
            .enumerate()
            .map(|(k, w)| w.unwrap_or_else(|| Word::generator(rank, k + 1).expect("in range")))
            .collect())
    }

    fn aut(&mut self, e: &AutExpr) -> DResult<RAut> {
        let mut chain = Vec::with_capacity(e.0.len());
        for f in &e.0 {
            let atom = self.aut_atom(&f.atom.node, f.atom.pos)?;
            chain.push(match &f.exp {
                None => atom,
                Some(x) => RAut::Power(Box::new(atom), self.expr(x)?),
            });
        }
        Ok(if chain.len() == 1 {
            chain.pop().unwrap()
        } else {
            RAut::Chain(chain)
        })
    }

    fn aut_atom(&mut self, a: &AutAtom, pos: Pos) -> DResult<RAut> {
        let rank = self.need_rank(pos)?;
        Ok(match a {
            AutAtom::Identity => RAut::Identity,
            AutAtom::Ref(n) => {
                if !self.auts.contains_key(n) {
                    return diag(DiagKind::UndefinedName, pos, format!("undefined automorphism `{n}`"));
                }
                RAut::Ref(n.clone())
            }
            AutAtom::Named(c, args) => {
                let mut idx = Vec::new();
                for x in args {
                    let v = self.expr(x)?;
                    if v < 1 || v as usize > rank {
                        return diag(
                            DiagKind::RankMismatch,
                            pos,
                            format!("generator index {v} out of range for rank {rank}"),
                        );
                    }
                    idx.push(v as usize);
                }
                let gen = match c {
                    'L' => NamedGenerator::L(idx[0], idx[1]),
                    'R' => NamedGenerator::R(idx[0], idx[1]),
                    'C' => NamedGenerator::C(idx[0], idx[1]),
                    'P' => NamedGenerator::P(idx[0], idx[1]),
                    _ => NamedGenerator::I(idx[0]),
                };
                if let Err(e) = Endo::named(gen, rank) {
                    return diag(DiagKind::Invalid, pos, e.to_string());
                }
                RAut::Named(gen)
            }
            AutAtom::Realize { gaut, basis, delta } => {
                let (ggraph, aut) = match self.gauts.get(gaut) {
                    Some(g) => g.clone(),
                    None => {
                        return diag(DiagKind::UndefinedName, pos, format!("undefined graph automorphism `{gaut}`"))
                    }
                };
                let bdef = match self.bases.get(basis) {
                    Some(b) => b.clone(),
                    None => return diag(DiagKind::UndefinedName, pos, format!("undefined basis `{basis}`")),
                };
                if ggraph != bdef.graph {
                    return diag(
                        DiagKind::Invalid,
                        pos,
                        format!("`{gaut}` acts on `{ggraph}` but `{basis}` lives on `{}`", bdef.graph),
                    );
                }
                let graph = self.graphs[&ggraph].clone();
                let delta = match delta {
                    Some(w) => {
                        let p = self.path(&graph, bdef.base, w, pos)?;
                        if p.end(&graph) != aut.vertex_image(bdef.base) {
                            return diag(
                                DiagKind::Invalid,
                                pos,
                                "delta must end at the image of the base vertex",
                            );
                        }
                        Some(p)
                    }
                    None => {
                        if aut.vertex_image(bdef.base) != bdef.base {
                            return diag(
                                DiagKind::Invalid,
                                pos,
                                "the automorphism moves the base vertex; give a path delta",
                            );
                        }
                        None
                    }
                };
                RAut::Realize {
                    gaut: gaut.clone(),
                    basis: basis.clone(),
                    delta,
                }
            }
            AutAtom::Paren(e) => self.aut(e)?,
            AutAtom::Inline(entries) => RAut::Images(self.images(entries, pos)?),
        })
    }

    // ---- items ----

    fn item(&mut self, it: &Spanned<ItemKind>) -> DResult<()> {
        let pos = it.pos;
        match &it.node {
            ItemKind::Anchor(t) => self.anchor = t.clone(),
            ItemKind::Param { .. } => {}
            ItemKind::Const { name, value } => {
                let v = self.expr(value)?;
                self.vars.push((name.clone(), v));
            }
            ItemKind::Rank(e) => {
                let r = self.expr(e)?;
                if r < 0 {
                    return diag(DiagKind::RankMismatch, pos, format!("negative rank {r}"));
                }
                match &self.names {
                    Some(n) if n.len() != r as usize => {
                        return diag(
                            DiagKind::RankMismatch,
                            pos,
                            format!("rank {r} but {} generator names declared", n.len()),
                        )
                    }
                    Some(_) => {}
                    None => {
                        let names = (1..=r).map(|i| format!("x{i}")).collect();
                        self.set_names(names, pos, true)?;
                    }
                }
            }
            ItemKind::Names(entries) => {
                let mut names = Vec::new();
                self.entries(entries, &mut |cx, r: &NameRef, _| {
                    names.push(cx.key(r)?);
                    Ok(())
                })?;
                if self.names.is_some() && !self.default_names {
                    return diag(DiagKind::Invalid, pos, "generator names declared twice");
                }
                self.set_names(names, pos, false)?;
            }
            ItemKind::Word { name, word } => {
                let w = self.word(word, pos)?;
                self.words.insert(name.clone(), w);
            }
            ItemKind::Aut { name, body } => {
                let aut = match body {
                    AutBody::Images(entries) => RAut::Images(self.images(entries, pos)?),
                    AutBody::Expr(e) => self.aut(e)?,
                };
                self.auts.insert(name.clone(), ());
                self.steps.push(Step::DefAut {
                    name: name.clone(),
                    aut,
                    text: it.node.to_string(),
                    anchor: self.anchor.clone(),
                    line: pos.line,
                });
            }
            ItemKind::Graph { name, body } => {
                let g = self.graph(body, pos)?;
                self.graphs.insert(name.clone(), g);
            }
            ItemKind::Gaut { name, graph, body } => {
                let g = match self.graphs.get(graph) {
                    Some(g) => g.clone(),
                    None => return diag(DiagKind::UndefinedName, pos, format!("undefined graph `{graph}`")),
                };
                let aut = match body {
                    GautBody::Rotation => GraphAut::rotation(&g),
                    GautBody::Explicit(entries) => {
                        let mut em: Vec<(EdgeId, bool)> = (0..g.edge_count()).map(|e| (e, false)).collect();
                        self.entries(entries, &mut |cx, m: &EdgeMap, _| {
                            let from = cx.edge(&g, &m.from)?;
                            let to = cx.edge(&g, &m.to)?;
                            em[from] = (to, m.reversed);
                            Ok(())
                        })?;
                        GraphAut::from_edge_map(&g, em, &[])
                    }
                }
                .or_else(|e| diag(DiagKind::Invalid, pos, e.to_string()))?;
                self.gauts.insert(name.clone(), (graph.clone(), aut));
            }
            ItemKind::Basis {
                name,
                graph,
                base,
                entries,
            } => self.basis(name, graph, base, entries, pos)?,
            ItemKind::Assert { large, assertion } => {
                let check = self.assertion(assertion, pos)?;
                self.steps.push(Step::Check {
                    text: assertion.to_string(),
                    anchor: self.anchor.clone(),
                    line: pos.line,
                    check,
                    large: *large,
                });
            }
            ItemKind::Note(t) => self.steps.push(Step::Note {
                text: t.clone(),
                anchor: self.anchor.clone(),
                line: pos.line,
            }),
        }
        Ok(())
    }

    fn edge(&mut self, g: &Graph, r: &NameRef) -> DResult<EdgeId> {
        let key = self.key(r)?;
        match g.edge_id(&key) {
            Some(e) => Ok(e),
            None => diag(DiagKind::UndefinedName, r.pos, format!("undefined edge `{key}`")),
        }
    }

    fn vertex(&mut self, g: &Graph, r: &NameRef) -> DResult<VertexId> {
        let key = self.key(r)?;
        match g.vertex_id(&key) {
            Some(v) => Ok(v),
            None => diag(DiagKind::UndefinedName, r.pos, format!("undefined vertex `{key}`")),
        }
    }

    fn graph(&mut self, body: &GraphBody, pos: Pos) -> DResult<Graph> {
        match body {
            GraphBody::Builtin { family, args } => {
                let mut a = Vec::new();
                for x in args {
                    let v = self.expr(x)?;
                    if v < 1 {
                        return diag(DiagKind::Invalid, pos, format!("{family} needs positive sizes, got {v}"));
                    }
                    a.push(v as usize);
                }
                let want = if family == "r_graph" { 2 } else { 1 };
                if a.len() != want {
                    return diag(DiagKind::Invalid, pos, format!("{family} takes {want} argument(s)"));
                }
                Ok(match family.as_str() {
                    "rose" => Graph::rose(a[0]),
                    "hairy" => Graph::hairy(a[0]),
                    "r_graph" => Graph::r_graph(a[0], a[1]),
                    "closed_chain" => Graph::closed_chain(a[0]),
                    _ => Graph::open_chain(a[0]),
                })
            }
            GraphBody::Explicit(entries) => {
                let mut g = Graph::new();
                self.entries(entries, &mut |cx, e: &GraphEntry, p| {
                    let r = match e {
                        GraphEntry::Vertex(vs) => {
                            for v in vs {
                                let k = cx.key(v)?;
                                g.add_vertex(&k).map(|_| ()).or_else(|e| diag(DiagKind::Invalid, p, e.to_string()))?;
                            }
                            return Ok(());
                        }
                        GraphEntry::Edge(name, a, b) => {
                            let (a, b) = (cx.vertex(&g, a)?, cx.vertex(&g, b)?);
                            let k = cx.key(name)?;
                            g.add_edge(&k, a, b)
                        }
                        GraphEntry::Loop(name, a) => {
                            let a = cx.vertex(&g, a)?;
                            let k = cx.key(name)?;
                            g.add_edge(&k, a, a)
                        }
                    };
                    r.map(|_| ()).or_else(|e| diag(DiagKind::Invalid, p, e.to_string()))
                })?;
                Ok(g)
            }
        }
    }

    fn basis(
        &mut self,
        name: &str,
        graph: &str,
        base: &NameRef,
        entries: &[Entry<Binding>],
        pos: Pos,
    ) -> DResult<()> {
        let g = match self.graphs.get(graph) {
            Some(g) => g.clone(),
            None => return diag(DiagKind::UndefinedName, pos, format!("undefined graph `{graph}`")),
        };
        let base = self.vertex(&g, base)?;
        let mut named: Vec<(String, EdgePath, Pos)> = Vec::new();
        self.entries(entries, &mut |cx, b: &Binding, p| {
            let key = cx.key(&b.name)?;
            let path = cx.path(&g, base, &b.word, p)?;
            if path.end(&g) != base {
                return diag(DiagKind::Invalid, p, format!("path for `{key}` is not a loop at the base"));
            }
            named.push((key, path, p));
            Ok(())
        })?;
        let grank = g
            .rank()
            .or_else(|e| diag(DiagKind::Invalid, pos, e.to_string()))?;
        if named.len() != grank {
            return diag(
                DiagKind::RankMismatch,
                pos,
                format!("basis has {} elements but `{graph}` has rank {grank}", named.len()),
            );
        }
        if self.names.is_none() {
            let names = named.iter().map(|(k, _, _)| k.clone()).collect();
            self.set_names(names, pos, false)?;
        }
        let rank = self.rank.unwrap_or(0);
        if named.len() != rank {
            return diag(
                DiagKind::RankMismatch,
                pos,
                format!("basis has {} elements for rank {rank}", named.len()),
            );
        }
        let mut paths: Vec<Option<EdgePath>> = vec![None; rank];
        for (key, path, p) in named {
            let k = match self.index.get(&key) {
                Some(&k) => k,
                None => return self.unknown_generator(&key, p, "generator"),
            };
            if paths[k - 1].replace(path).is_some() {
                return diag(DiagKind::Invalid, p, format!("`{key}` assigned twice"));
            }
        }
        self.bases.insert(
            name.to_string(),
            BasisDef {
                graph: graph.to_string(),
                base,
                paths: paths.into_iter().map(|p| p.expect("all assigned")).collect(),
            },
        );
        Ok(())
    }

    // ---- assertions ----

    fn assertion(&mut self, a: &Assertion, pos: Pos) -> DResult<Check> {
        match a {
            Assertion::Compare {
                lhs,
                up_to_inner,
                rhs,
                on,
            } => {
                let mut ws = Vec::new();
                for w in on {
                    ws.push(self.word(w, pos)?);
                }
                Ok(Check::Compare {
                    lhs: self.aut(lhs)?,
                    rhs: self.aut(rhs)?,
                    up_to_inner: *up_to_inner,
                    on: ws,
                })
            }
            Assertion::Call {
                negated,
                func,
                args,
                expected,
            } => {
                let b = builtin(func).expect("parser checked the name");
                let mut rargs = Vec::new();
                for arg in args {
                    rargs.push(match arg {
                        Arg::Aut(e) => RArg::Aut(self.aut(e)?),
                        Arg::Word(w) => RArg::Word(self.word(w, pos)?),
                        Arg::Int(e) => RArg::Int(self.expr(e)?),
                        Arg::Group {
                            projective,
                            n,
                            modulus,
                        } => {
                            let (n, m) = (self.expr(n)?, self.expr(modulus)?);
                            if !(1..=4).contains(&n) || !(2..=255).contains(&m) {
                                return diag(DiagKind::Invalid, pos, format!("group SL({n}, {m}) out of range"));
                            }
                            RArg::Group {
                                projective: *projective,
                                n: n as usize,
                                modulus: m as u64,
                            }
                        }
                    });
                }
                let expected = match expected {
                    None => None,
                    Some(v) => Some(self.value(v, pos)?),
                };
                Ok(Check::Call {
                    func: b.name,
                    negated: *negated,
                    args: rargs,
                    expected,
                })
            }
        }
    }

    fn value(&mut self, v: &Value, pos: Pos) -> DResult<RValue> {
        Ok(match v {
            Value::Int(e) => RValue::Int(self.expr(e)?),
            Value::Keyword(k) if k == "identity" => RValue::Matrix(IntMatrix::identity(self.need_rank(pos)?)),
            Value::Keyword(k) => RValue::Keyword(k.clone()),
            Value::Word(w) => RValue::Word(self.word(w, pos)?),
            Value::Matrix(rows) => {
                let mut out = Vec::new();
                for row in rows {
                    let mut r = Vec::new();
                    for c in row {
                        r.push(self.expr(c)?);
                    }
                    out.push(r);
                }
                RValue::Matrix(IntMatrix::from_rows(out).or_else(|e| diag(DiagKind::Invalid, pos, e.to_string()))?)
            }
            Value::Elementary(k, r, p) => {
                let rank = self.need_rank(pos)?;
                let (k, r, p) = (self.expr(k)?, self.expr(r)?, self.expr(p)?);
                if k < 1 || r < 1 {
                    return diag(DiagKind::RankMismatch, pos, format!("elementary({k}, {r}) out of range"));
                }
                RValue::Matrix(
                    IntMatrix::elementary(k as usize, r as usize, p, rank)
                        .or_else(|e| diag(DiagKind::RankMismatch, pos, e.to_string()))?,
                )
            }
            Value::List(xs) => {
                let mut out = Vec::new();
                for x in xs {
                    out.push(self.expr(x)?);
                }
                RValue::List(out)
            }
        })
    }
}

fn power_into(base: &[Letter], k: i64, out: &mut Vec<Letter>) {
    let unit: Vec<Letter> = if k < 0 {
        base.iter().rev().map(|l| -l).collect()
    } else {
        base.to_vec()
    };
    for _ in 0..k.unsigned_abs() {
        out.extend_from_slice(&unit);
    }
}

fn expr_pos(e: &Expr) -> Pos {
    match e {
        Expr::Var(r) => r.pos,
        Expr::Neg(a) => expr_pos(a),
        Expr::Bin(_, a, _) => expr_pos(a),
        Expr::Int(_) => Pos::default(),
    }
}
