//! Recursive-descent parser for scenario files. One token of lookahead
//! suffices everywhere except `IDENT (` in assertions, which needs two.

use super::ast::*;
use super::lexer::{lex, Pos, Tok, Token};
use super::{DiagKind, Diagnostic};

pub const KEYWORDS: &[&str] = &[
    "scenario", "param", "const", "rank", "names", "word", "aut", "graph", "gaut", "basis", "assert", "note", "for",
    "in", "prod", "downto", "on", "at", "not", "large",
];

const ITEM_START: &[&str] = &[
    "`scenario`",
    "`param`",
    "`const`",
    "`rank`",
    "`names`",
    "`word`",
    "`aut`",
    "`graph`",
    "`gaut`",
    "`basis`",
    "`assert`",
    "`note`",
    "anchor comment",
];

const FAMILIES: &[&str] = &["rose", "hairy", "r_graph", "closed_chain", "open_chain"];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

pub fn parse_file(src: &str) -> PResult<ScenarioFile> {
    let toks = lex(src).map_err(|(pos, msg)| Diagnostic {
        kind: DiagKind::Syntax,
        pos,
        message: msg,
        expected: Vec::new(),
    })?;
    let mut p = Parser { toks, at: 0 };
    p.file()
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(Diagnostic {
            kind: DiagKind::Syntax,
            pos: self.pos(),
            message: format!("unexpected {}", self.peek()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn fail_msg<T>(&self, pos: Pos, msg: String) -> PResult<T> {
        Err(Diagnostic {
            kind: DiagKind::Syntax,
            pos,
            message: msg,
            expected: Vec::new(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<Pos> {
        if *self.peek() == t {
            Ok(self.bump().pos)
        } else {
            self.fail(&[&t.to_string()])
        }
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.fail(&[&format!("`{kw}`")])
        }
    }

    /// A non-keyword identifier.
    fn ident(&mut self) -> PResult<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                let pos = self.bump().pos;
                Ok((s, pos))
            }
            _ => self.fail(&["identifier"]),
        }
    }

    fn string(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(&["string"]),
        }
    }

    // ---- file structure ----

    fn file(&mut self) -> PResult<ScenarioFile> {
        let mut scenarios = Vec::new();
        let mut pending = Vec::new();
        while let Tok::Anchor(text) = self.peek().clone() {
            let pos = self.bump().pos;
            pending.push(Spanned {
                node: ItemKind::Anchor(text),
                pos,
            });
        }
        if !self.at_kw("scenario") && *self.peek() != Tok::Eof {
            // Headerless file: a single unnamed scenario.
            let mut items = pending;
            self.items(&mut items)?;
            scenarios.push(Scenario {
                name: String::new(),
                items,
            });
            pending = Vec::new();
        }
        while self.eat_kw("scenario") {
            let name = self.string()?;
            let mut items = std::mem::take(&mut pending);
            self.items(&mut items)?;
            scenarios.push(Scenario { name, items });
        }
        if *self.peek() != Tok::Eof {
            return self.fail(ITEM_START);
        }
        if let Some(a) = pending.first() {
            return self.fail_msg(a.pos, "anchor comment outside any scenario".into());
        }
        Ok(ScenarioFile { scenarios })
    }

    fn items(&mut self, out: &mut Vec<Spanned<ItemKind>>) -> PResult<()> {
        loop {
            let pos = self.pos();
            let node = match self.peek().clone() {
                Tok::Eof => return Ok(()),
                Tok::Anchor(text) => {
                    self.bump();
                    ItemKind::Anchor(text)
                }
                Tok::Ident(kw) => match kw.as_str() {
                    "scenario" => return Ok(()),
                    "param" => {
                        self.bump();
                        let (name, _) = self.ident()?;
                        self.expect(Tok::Assign)?;
                        let mut values = vec![self.expr()?];
                        while self.eat(&Tok::Comma) {
                            values.push(self.expr()?);
                        }
                        ItemKind::Param { name, values }
                    }
                    "const" => {
                        self.bump();
                        let (name, _) = self.ident()?;
                        self.expect(Tok::Assign)?;
                        ItemKind::Const {
                            name,
                            value: self.expr()?,
                        }
                    }
                    "rank" => {
                        self.bump();
                        ItemKind::Rank(self.expr()?)
                    }
                    "names" => {
                        self.bump();
                        ItemKind::Names(self.block(&mut |p| p.nameref())?)
                    }
                    "word" => {
                        self.bump();
                        let (name, _) = self.ident()?;
                        self.expect(Tok::Assign)?;
                        ItemKind::Word {
                            name,
                            word: self.word()?,
                        }
                    }
                    "aut" => {
                        self.bump();
                        let (name, _) = self.ident()?;
                        let body = if self.eat(&Tok::Assign) {
                            AutBody::Expr(self.aut_expr()?)
                        } else if *self.peek() == Tok::LBrace {
                            AutBody::Images(self.block(&mut |p| p.binding(Tok::Arrow))?)
                        } else {
                            return self.fail(&["`=`", "`{`"]);
                        };
                        ItemKind::Aut { name, body }
                    }
                    "graph" => {
                        self.bump();
                        let (name, _) = self.ident()?;
                        let body = if self.eat(&Tok::Assign) {
                            let (family, fpos) = self.ident()?;
                            if !FAMILIES.contains(&family.as_str()) {
                                return self.fail_msg(fpos, format!("unknown graph family `{family}`"));
                            }
                            let args = self.paren_exprs()?;
                            GraphBody::Builtin { family, args }
                        } else if *self.peek() == Tok::LBrace {
                            GraphBody::Explicit(self.block(&mut |p| p.graph_entry())?)
                        } else {
                            return self.fail(&["`=`", "`{`"]);
                        };
                        ItemKind::Graph { name, body }
                    }
                    "gaut" => {
                        self.bump();
                        let (name, _) = self.ident()?;
                        self.expect_kw("on")?;
                        let (graph, _) = self.ident()?;
                        let body = if self.eat(&Tok::Assign) {
                            self.expect_kw_ident("rotation")?;
                            GautBody::Rotation
                        } else if *self.peek() == Tok::LBrace {
                            GautBody::Explicit(self.block(&mut |p| p.edge_map())?)
                        } else {
                            return self.fail(&["`=`", "`{`"]);
                        };
                        ItemKind::Gaut { name, graph, body }
                    }
                    "basis" => {
                        self.bump();
                        let (name, _) = self.ident()?;
                        self.expect_kw("on")?;
                        let (graph, _) = self.ident()?;
                        self.expect_kw("at")?;
                        let base = self.nameref()?;
                        let entries = self.block(&mut |p| p.binding(Tok::Assign))?;
                        ItemKind::Basis {
                            name,
                            graph,
                            base,
                            entries,
                        }
                    }
                    "assert" => {
                        self.bump();
                        let large = self.eat_kw("large");
                        ItemKind::Assert {
                            large,
                            assertion: self.assertion()?,
                        }
                    }
                    "note" => {
                        self.bump();
                        ItemKind::Note(self.string()?)
                    }
                    _ => return self.fail(ITEM_START),
                },
                _ => return self.fail(ITEM_START),
            };
            out.push(Spanned { node, pos });
        }
    }

    fn expect_kw_ident(&mut self, word: &str) -> PResult<()> {
        match self.peek() {
            Tok::Ident(s) if s == word => {
                self.bump();
                Ok(())
            }
            _ => self.fail(&[&format!("`{word}`")]),
        }
    }

    /// `{ entry; for v in range { ... } ... }`
    fn block<T>(&mut self, item: &mut dyn FnMut(&mut Parser) -> PResult<T>) -> PResult<Vec<Entry<T>>> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        loop {
            if self.eat(&Tok::RBrace) {
                return Ok(out);
            }
            if self.eat_kw("for") {
                let (var, _) = self.ident()?;
                self.expect_kw("in")?;
                let range = self.range()?;
                let body = self.block(item)?;
                out.push(Entry::For { var, range, body });
                continue;
            }
            let pos = self.pos();
            let node = item(self)?;
            out.push(Entry::Item(Spanned { node, pos }));
            if !self.eat(&Tok::Semi) && *self.peek() != Tok::RBrace {
                return self.fail(&["`;`", "`}`"]);
            }
        }
    }

    fn binding(&mut self, sep: Tok) -> PResult<Binding> {
        let name = self.nameref()?;
        self.expect(sep)?;
        Ok(Binding {
            name,
            word: self.word()?,
        })
    }

    fn edge_map(&mut self) -> PResult<EdgeMap> {
        let from = self.nameref()?;
        self.expect(Tok::Arrow)?;
        let reversed = self.eat(&Tok::Tilde);
        Ok(EdgeMap {
            from,
            reversed,
            to: self.nameref()?,
        })
    }

    fn graph_entry(&mut self) -> PResult<GraphEntry> {
        if self.eat_kw_ident("vertex") {
            let mut vs = vec![self.nameref()?];
            while matches!(self.peek(), Tok::Ident(s) if !is_keyword(s)) {
                vs.push(self.nameref()?);
            }
            Ok(GraphEntry::Vertex(vs))
        } else if self.eat_kw_ident("edge") {
            let e = self.nameref()?;
            let a = self.nameref()?;
            let b = self.nameref()?;
            Ok(GraphEntry::Edge(e, a, b))
        } else if self.eat_kw_ident("loop") {
            let e = self.nameref()?;
            let a = self.nameref()?;
            Ok(GraphEntry::Loop(e, a))
        } else {
            self.fail(&["`vertex`", "`edge`", "`loop`"])
        }
    }

    fn eat_kw_ident(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == word) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn range(&mut self) -> PResult<Range> {
        let from = self.expr()?;
        let down = if self.eat(&Tok::DotDot) {
            false
        } else if self.eat_kw("downto") {
            true
        } else {
            return self.fail(&["`..`", "`downto`"]);
        };
        Ok(Range {
            from,
            to: self.expr()?,
            down,
        })
    }

    // ---- expressions ----

    fn nameref(&mut self) -> PResult<NameRef> {
        let (base, pos) = self.ident()?;
        let mut indices = Vec::new();
        if self.eat(&Tok::LBracket) {
            indices.push(self.expr()?);
            while self.eat(&Tok::Comma) {
                indices.push(self.expr()?);
            }
            self.expect(Tok::RBracket)?;
        }
        Ok(NameRef { base, indices, pos })
    }

    fn paren_exprs(&mut self) -> PResult<Vec<Expr>> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if !self.eat(&Tok::RParen) {
            args.push(self.expr()?);
            while self.eat(&Tok::Comma) {
                args.push(self.expr()?);
            }
            self.expect(Tok::RParen)?;
        }
        Ok(args)
    }

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Percent => BinOp::Mod,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if !is_keyword(&s) => Ok(Expr::Var(self.nameref()?)),
            _ => self.fail(&["integer", "identifier", "`(`", "`-`"]),
        }
    }

    /// `3`, `-1`, `k`, `-k`, `x[i]`, `(expr)`.
    fn signed_atom(&mut self) -> PResult<Expr> {
        let neg = self.eat(&Tok::Minus);
        let e = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Expr::Int(n)
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                e
            }
            Tok::Ident(s) if !is_keyword(&s) => Expr::Var(self.nameref()?),
            _ => return self.fail(&["integer", "identifier", "`(`"]),
        };
        Ok(if neg { Expr::Neg(Box::new(e)) } else { e })
    }

    fn exponent(&mut self) -> PResult<Option<Expr>> {
        if self.eat(&Tok::Caret) {
            Ok(Some(self.signed_atom()?))
        } else {
            Ok(None)
        }
    }

    // ---- words ----

    fn word_starts(&self) -> bool {
        match self.peek() {
            Tok::LParen => true,
            Tok::Ident(s) => s == "prod" || !is_keyword(s),
            _ => false,
        }
    }

    pub(crate) fn word(&mut self) -> PResult<WordExpr> {
        if !self.word_starts() {
            return self.fail(&["word"]);
        }
        let mut atoms = Vec::new();
        while self.word_starts() {
            atoms.push(self.word_atom()?);
        }
        Ok(WordExpr(atoms))
    }

    fn word_atom(&mut self) -> PResult<WordAtom> {
        if self.eat(&Tok::LParen) {
            let inner = self.word()?;
            self.expect(Tok::RParen)?;
            return Ok(WordAtom::Group(inner, self.exponent()?));
        }
        if self.eat_kw("prod") {
            let (var, _) = self.ident()?;
            self.expect_kw("in")?;
            let range = self.range()?;
            self.expect(Tok::LBrace)?;
            let body = self.word()?;
            self.expect(Tok::RBrace)?;
            return Ok(WordAtom::Prod { var, range, body });
        }
        if self.at_kw_ident("e") {
            self.bump();
            return Ok(WordAtom::Empty);
        }
        let r = self.nameref()?;
        Ok(WordAtom::Sym(r, self.exponent()?))
    }

    fn at_kw_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    // ---- automorphism expressions ----

    fn aut_expr(&mut self) -> PResult<AutExpr> {
        let mut factors = vec![self.aut_factor()?];
        while self.eat(&Tok::Star) {
            factors.push(self.aut_factor()?);
        }
        Ok(AutExpr(factors))
    }

    fn aut_factor(&mut self) -> PResult<AutFactor> {
        let pos = self.pos();
        let node = match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.aut_expr()?;
                self.expect(Tok::RParen)?;
                AutAtom::Paren(e)
            }
            Tok::LBrace => AutAtom::Inline(self.block(&mut |p| p.binding(Tok::Arrow))?),
            Tok::Ident(s) if s == "id" => {
                self.bump();
                AutAtom::Identity
            }
            Tok::Ident(s) if s == "realize" && *self.peek2() == Tok::LParen => {
                self.bump();
                self.bump();
                let (gaut, _) = self.ident()?;
                self.expect(Tok::Comma)?;
                let (basis, _) = self.ident()?;
                let delta = if self.eat(&Tok::Comma) {
                    Some(self.word()?)
                } else {
                    None
                };
                self.expect(Tok::RParen)?;
                AutAtom::Realize { gaut, basis, delta }
            }
            Tok::Ident(s) if matches!(s.as_str(), "L" | "R" | "C" | "P" | "I") && *self.peek2() == Tok::LParen => {
                self.bump();
                let c = s.chars().next().unwrap();
                let args = self.paren_exprs()?;
                let want = if c == 'I' { 1 } else { 2 };
                if args.len() != want {
                    return self.fail_msg(pos, format!("{c} takes {want} argument(s), got {}", args.len()));
                }
                AutAtom::Named(c, args)
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                AutAtom::Ref(s)
            }
            _ => return self.fail(&["automorphism", "`id`", "`(`", "`{`"]),
        };
        Ok(AutFactor {
            atom: Spanned { node, pos },
            exp: self.exponent()?,
        })
    }

    // ---- assertions ----

    fn assertion(&mut self) -> PResult<Assertion> {
        let negated = self.eat_kw("not");
        if let Tok::Ident(name) = self.peek().clone() {
            if *self.peek2() == Tok::LParen {
                if let Some(b) = builtin(&name) {
                    let pos = self.pos();
                    self.bump();
                    return self.call(b, negated, pos);
                }
            }
        }
        if negated {
            return self.fail(&["boolean check"]);
        }
        let lhs = self.aut_expr()?;
        let up_to_inner = if self.eat(&Tok::EqEq) {
            false
        } else if self.eat(&Tok::Tilde) {
            true
        } else {
            return self.fail(&["`==`", "`~`", "`*`"]);
        };
        let rhs = self.aut_expr()?;
        let mut on = Vec::new();
        if self.eat_kw("on") {
            on.push(self.word()?);
            while self.eat(&Tok::Comma) {
                on.push(self.word()?);
            }
        }
        Ok(Assertion::Compare {
            lhs,
            up_to_inner,
            rhs,
            on,
        })
    }

    fn call(&mut self, b: &'static Builtin, negated: bool, pos: Pos) -> PResult<Assertion> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        let mut k = 0;
        while *self.peek() != Tok::RParen {
            if k > 0 {
                self.expect(Tok::Comma)?;
            }
            let kind = match b.args.get(k) {
                Some(&kind) => kind,
                None if b.variadic && !b.args.is_empty() => *b.args.last().unwrap(),
                None => return self.fail(&["`)`"]),
            };
            args.push(self.arg(kind)?);
            k += 1;
        }
        self.expect(Tok::RParen)?;
        if args.len() < b.args.len() {
            return self.fail_msg(
                pos,
                format!("{} takes {} argument(s), got {}", b.name, b.args.len(), args.len()),
            );
        }
        let is_bool = b.result == ResultKind::Bool;
        if negated && !is_bool {
            return self.fail_msg(pos, format!("`not` needs a boolean check, {} is not one", b.name));
        }
        let expected = if is_bool {
            None
        } else {
            self.expect(Tok::EqEq)?;
            Some(self.value(b.result)?)
        };
        Ok(Assertion::Call {
            negated,
            func: b.name.to_string(),
            args,
            expected,
        })
    }

    fn arg(&mut self, kind: ArgKind) -> PResult<Arg> {
        Ok(match kind {
            ArgKind::Aut => Arg::Aut(self.aut_expr()?),
            ArgKind::Word => Arg::Word(self.word()?),
            ArgKind::Int => Arg::Int(self.expr()?),
            ArgKind::Group => {
                let projective = if self.eat_kw_ident("SL") {
                    false
                } else if self.eat_kw_ident("PSL") {
                    true
                } else {
                    return self.fail(&["`SL`", "`PSL`"]);
                };
                let args = self.paren_exprs()?;
                if args.len() != 2 {
                    return self.fail(&["two arguments"]);
                }
                let mut it = args.into_iter();
                Arg::Group {
                    projective,
                    n: it.next().unwrap(),
                    modulus: it.next().unwrap(),
                }
            }
        })
    }

    fn keyword_of(&mut self, allowed: &[&str]) -> Option<String> {
        if let Tok::Ident(s) = self.peek().clone() {
            if allowed.contains(&s.as_str()) {
                self.bump();
                return Some(s);
            }
        }
        None
    }

    fn value(&mut self, kind: ResultKind) -> PResult<Value> {
        match kind {
            ResultKind::Bool => unreachable!(),
            ResultKind::Order => {
                if let Some(k) = self.keyword_of(&["infinite"]) {
                    return Ok(Value::Keyword(k));
                }
                Ok(Value::Int(self.signed_atom()?))
            }
            ResultKind::Inner => {
                if let Some(k) = self.keyword_of(&["none"]) {
                    return Ok(Value::Keyword(k));
                }
                Ok(Value::Word(self.word()?))
            }
            ResultKind::Int => Ok(Value::Int(self.signed_atom()?)),
            ResultKind::Word => Ok(Value::Word(self.word()?)),
            ResultKind::Keyword(allowed) => match self.keyword_of(allowed) {
                Some(k) => Ok(Value::Keyword(k)),
                None => {
                    let exp: Vec<String> = allowed.iter().map(|s| format!("`{s}`")).collect();
                    let exp: Vec<&str> = exp.iter().map(String::as_str).collect();
                    self.fail(&exp)
                }
            },
            ResultKind::IntList => {
                self.expect(Tok::LBracket)?;
                let mut xs = Vec::new();
                if !self.eat(&Tok::RBracket) {
                    xs.push(self.expr()?);
                    while self.eat(&Tok::Comma) {
                        xs.push(self.expr()?);
                    }
                    self.expect(Tok::RBracket)?;
                }
                Ok(Value::List(xs))
            }
            ResultKind::Matrix => {
                if let Some(k) = self.keyword_of(&["identity"]) {
                    return Ok(Value::Keyword(k));
                }
                if self.eat_kw_ident("elementary") {
                    let args = self.paren_exprs()?;
                    if args.len() != 3 {
                        return self.fail(&["three arguments"]);
                    }
                    let mut it = args.into_iter();
                    return Ok(Value::Elementary(
                        it.next().unwrap(),
                        it.next().unwrap(),
                        it.next().unwrap(),
                    ));
                }
                if *self.peek() != Tok::LBracket {
                    return self.fail(&["`[`", "`identity`", "`elementary`"]);
                }
                self.bump();
                let mut rows = vec![Vec::new()];
                loop {
                    match self.peek() {
                        Tok::RBracket => {
                            self.bump();
                            break;
                        }
                        Tok::Semi => {
                            self.bump();
                            rows.push(Vec::new());
                        }
                        _ => {
                            let cell = self.signed_atom()?;
                            rows.last_mut().unwrap().push(cell);
                        }
                    }
                }
                Ok(Value::Matrix(rows))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_line_program() {
        let f = parse_file("rank 2  aut p = P(1,2)  assert p * p == id").unwrap();
        assert_eq!(f.scenarios.len(), 1);
        let asserts = f.scenarios[0]
            .items
            .iter()
            .filter(|i| matches!(i.node, ItemKind::Assert { .. }))
            .count();
        assert_eq!(asserts, 1);
    }

    #[test]
    fn expected_set_is_reported() {
        let err = parse_file("rank 2\naut f { x1 -> x2 x1 x3 }\nassert f ==").unwrap_err();
        assert_eq!(err.kind, DiagKind::Syntax);
        assert_eq!(err.pos.line, 3);
        assert!(err.expected.iter().any(|e| e == "`id`"));
    }

    #[test]
    fn words_stop_at_keywords() {
        let f = parse_file("rank 3 word w = x1 x2^-1 (x3 x1)^k word v = e").unwrap();
        match &f.scenarios[0].items[1].node {
            ItemKind::Word { word, .. } => assert_eq!(word.0.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn print_reparses() {
        let src = r#"
# anchor: demo
scenario "demo"
param p = 5, 7
const n = 2 * p - (p - 1)
names { c; for i in 1..p { x[i, 1]; } }
aut f { for i in 1..p - 1 { x[i, 1] -> x[i + 1, 1]; } x[p, 1] -> prod i in p downto 1 { x[i, 1]^-1 }; }
graph X = hairy(p)
gaut t on X = rotation
basis B on X at v0 { for i in 1..p { x[i, 1] = s[i] s[i % p + 1]^-1; } c = e; }
assert f * L(x[1,1], x[3,1])^-1 ~ realize(t, B, s1 s2^-1) on x[1,1], c
assert not torelli(f)
assert abelianize(f) == [1 -1 0; 0 (n) 1]
assert order(f) == infinite
"#;
        let f = parse_file(src).unwrap();
        let printed = f.to_string();
        let g = parse_file(&printed).unwrap();
        assert_eq!(f, g, "{printed}");
    }
}
