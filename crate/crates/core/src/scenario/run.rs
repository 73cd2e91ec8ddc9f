//! Evaluates expanded scenario instances into report records.

use std::collections::HashMap;

use super::expand::{Check, Instance, RArg, RAut, RValue, Step};
use super::report::{Record, Status};
use crate::abelian::{abelianize, congruence_level_member, is_torelli};
use crate::endo::{is_basis, Caps, Endo, OrderResult};
use crate::graph::{change_basis, induced_endo, induced_out_rep, spanning_tree_presentation};
use crate::modgroup::{
    closure_matches_kernel, find_generating_pair, invariant_subreps, kernel_report, sanity_splitting,
    sl_mod4_splitting, split_obstruction, FiniteGroupTable, ObstructionResult, SplitResult, DEFAULT_CAP,
};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub caps: Caps,
    /// Run assertions marked `large`; otherwise they are skipped.
    pub include_large: bool,
    /// Re-run chain-dependent assertions with chains read left to right and
    /// flag any whose status changes.
    pub check_reversed: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            caps: Caps {
                max_power: 256,
                max_word_len: 20_000,
            },
            include_large: false,
            check_reversed: true,
        }
    }
}

/// Runs one instance; records come out in step order.
pub fn run_instance(inst: &Instance, opts: &RunOptions) -> Vec<Record> {
    let mut main = execute(inst, opts, false);
    if opts.check_reversed {
        let rev: HashMap<usize, Status> = execute(inst, opts, true)
            .into_iter()
            .map(|(k, r)| (k, r.status))
            .collect();
        for (k, rec) in &mut main {
            if let Some(&s) = rev.get(k) {
                if s != rec.status && matches!(rec.status, Status::Pass | Status::Fail) {
                    if !rec.detail.is_empty() {
                        rec.detail.push_str("; ");
                    }
                    rec.detail.push_str(&format!("reversed reading: {}", s.as_str()));
                }
            }
        }
    }
    main.into_iter().map(|(_, r)| r).collect()
}

/// Evaluates every automorphism definition of `inst`, keyed by name.
pub fn definitions(inst: &Instance, opts: &RunOptions) -> HashMap<String, Result<Endo, String>> {
    let mut ev = Eval {
        inst,
        caps: opts.caps,
        reversed: false,
        env: HashMap::new(),
    };
    for step in &inst.steps {
        if let Step::DefAut { name, aut, .. } = step {
            let v = ev.aut(aut);
            ev.env.insert(name.clone(), v);
        }
    }
    ev.env
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn clip(s: String) -> String {
    const MAX: usize = 400;
    if s.chars().count() <= MAX {
        s
    } else {
        let t: String = s.chars().take(MAX).collect();
        format!("{t}...")
    }
}

fn execute(inst: &Instance, opts: &RunOptions, reversed: bool) -> Vec<(usize, Record)> {
    let mut ev = Eval {
        inst,
        caps: opts.caps,
        reversed,
        env: HashMap::new(),
    };
    let mut out = Vec::new();
    let rec = |assertion: &str, status, detail: String, anchor: &str| Record {
        scenario: inst.scenario.clone(),
        assertion: squash(assertion),
        status,
        detail: clip(detail),
        anchor: anchor.to_string(),
    };
    for (k, step) in inst.steps.iter().enumerate() {
        match step {
            Step::DefAut {
                name,
                aut,
                text,
                anchor,
                ..
            } => {
                let v = ev.aut(aut);
                if let Err(e) = &v {
                    out.push((k, rec(text, Status::Fail, format!("definition failed: {e}"), anchor)));
                }
                ev.env.insert(name.clone(), v);
            }
            Step::Check {
                text,
                anchor,
                check,
                large,
                ..
            } => {
                if reversed && !check.uses_chains() {
                    continue;
                }
                if *large && !opts.include_large {
                    out.push((
                        k,
                        rec(text, Status::Skip, "large; enable with --include-large".into(), anchor),
                    ));
                    continue;
                }
                let (status, detail) = match ev.check(check) {
                    Ok((true, d)) => (Status::Pass, d),
                    Ok((false, d)) => (Status::Fail, d),
                    Err(e) => (Status::Fail, format!("error: {e}")),
                };
                out.push((k, rec(text, status, detail, anchor)));
            }
            Step::Note { text, anchor, .. } => {
                if !reversed {
                    out.push((k, rec(text, Status::Note, String::new(), anchor)));
                }
            }
        }
    }
    out
}

struct Eval<'a> {
    inst: &'a Instance,
    caps: Caps,
    reversed: bool,
    env: HashMap<String, Result<Endo, String>>,
}

type EResult<T> = Result<T, String>;

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

impl Eval<'_> {
    fn aut(&self, a: &RAut) -> EResult<Endo> {
        let rank = self.inst.rank;
        match a {
            RAut::Identity => Ok(Endo::identity(rank)),
            RAut::Ref(n) => match self.env.get(n) {
                Some(Ok(f)) => Ok(f.clone()),
                Some(Err(_)) => Err(format!("depends on `{n}`, which failed")),
                None => Err(format!("`{n}` is not defined")),
            },
            RAut::Named(g) => Endo::named(*g, rank).map_err(err),
            RAut::Images(ws) => Endo::new(rank, ws.clone()).map_err(err),
            RAut::Realize { gaut, basis, delta } => {
                let (gname, ga) = &self.inst.gauts[gaut];
                let b = &self.inst.bases[basis];
                let graph = &self.inst.graphs[gname];
                let pres = spanning_tree_presentation(graph, b.base).map_err(err)?;
                let f = match delta {
                    Some(d) => induced_out_rep(&pres, ga, d),
                    None => induced_endo(&pres, ga),
                }
                .map_err(err)?;
                let beta: Vec<Word> = b
                    .paths
                    .iter()
                    .map(|p| pres.path_to_word(p))
                    .collect::<crate::error::Result<_>>()
                    .map_err(err)?;
                change_basis(&f, &beta).map_err(|e| format!("basis `{basis}`: {e}"))
            }
            RAut::Chain(parts) => {
                let mut vals = parts.iter().map(|p| self.aut(p)).collect::<EResult<Vec<_>>>()?;
                if self.reversed {
                    vals.reverse();
                }
                let mut acc = Endo::identity(rank);
                for v in &vals {
                    acc = acc.compose(v).map_err(err)?;
                }
                Ok(acc)
            }
            RAut::Power(base, k) => self.aut(base)?.power(*k).map_err(err),
        }
    }

    fn check(&self, c: &Check) -> EResult<(bool, String)> {
        match c {
            Check::Compare {
                lhs,
                rhs,
                up_to_inner,
                on,
            } => {
                let (l, r) = (self.aut(lhs)?, self.aut(rhs)?);
                if !on.is_empty() {
                    for w in on {
                        let (a, b) = (l.apply(w).map_err(err)?, r.apply(w).map_err(err)?);
                        if a != b {
                            return Ok((false, format!("differ on {}: {a} vs {b}", self.show(w))));
                        }
                    }
                    return Ok((true, String::new()));
                }
                if *up_to_inner {
                    let d = l.compose(&r.invert().map_err(err)?).map_err(err)?;
                    return Ok(match d.inner_witness() {
                        Some(w) if w.is_empty() => (true, "equal".into()),
                        Some(w) => (true, format!("differ by conjugation by {}", self.show(&w))),
                        None => (false, format!("lhs = {l}; rhs = {r}; not inner-equivalent")),
                    });
                }
                if l == r {
                    Ok((true, String::new()))
                } else {
                    let mode = if (l.compose(&r.invert().map_err(err)?).map_err(err)?)
                        .inner_witness()
                        .is_some()
                    {
                        " (equal up to an inner automorphism)"
                    } else {
                        ""
                    };
                    Ok((false, format!("lhs = {l}; rhs = {r}{mode}")))
                }
            }
            Check::Call {
                func,
                negated,
                args,
                expected,
            } => {
                let (ok, detail) = self.call(func, args, expected.as_ref())?;
                Ok((ok != *negated, detail))
            }
        }
    }

    /// A word with the scenario's generator names.
    fn show(&self, w: &Word) -> String {
        let names = &self.inst.names;
        if w.is_empty() {
            return "e".into();
        }
        let mut parts = Vec::new();
        for &l in w.letters() {
            let n = names
                .get(l.unsigned_abs() as usize - 1)
                .cloned()
                .unwrap_or_else(|| format!("x{}", l.unsigned_abs()));
            parts.push(if l < 0 { format!("{n}^-1") } else { n });
        }
        parts.join(" ")
    }

    fn table(&self, projective: bool, n: usize, m: u64) -> EResult<FiniteGroupTable> {
        let t = FiniteGroupTable::sl(n, m, DEFAULT_CAP).map_err(err)?;
        if projective {
            t.quotient_by_center(DEFAULT_CAP).map_err(err)
        } else {
            Ok(t)
        }
    }

    fn call(&self, func: &str, args: &[RArg], expected: Option<&RValue>) -> EResult<(bool, String)> {
        let aut = |k: usize| -> EResult<Endo> {
            match args.get(k) {
                Some(RArg::Aut(a)) => self.aut(a),
                _ => Err("missing automorphism argument".into()),
            }
        };
        let int = |k: usize| -> EResult<i64> {
            match args.get(k) {
                Some(RArg::Int(v)) => Ok(*v),
                _ => Err("missing integer argument".into()),
            }
        };
        let size = |k: usize| -> EResult<usize> {
            let v = int(k)?;
            usize::try_from(v).map_err(|_| format!("{v} is not a valid size"))
        };
        let words = |from: usize| -> Vec<Word> {
            args[from..]
                .iter()
                .filter_map(|a| match a {
                    RArg::Word(w) => Some(w.clone()),
                    _ => None,
                })
                .collect()
        };
        let group = || -> EResult<(bool, usize, u64)> {
            match args.first() {
                Some(&RArg::Group {
                    projective,
                    n,
                    modulus,
                }) => Ok((projective, n, modulus)),
                _ => Err("missing group argument".into()),
            }
        };
        let want_int = || -> EResult<i64> {
            match expected {
                Some(RValue::Int(v)) => Ok(*v),
                _ => Err("expected an integer".into()),
            }
        };
        let want_kw = || -> EResult<&str> {
            match expected {
                Some(RValue::Keyword(k)) => Ok(k.as_str()),
                _ => Err("expected a keyword".into()),
            }
        };
        match func {
            "order" | "out_order" => {
                let f = aut(0)?;
                let r = if func == "order" {
                    f.order(self.caps)
                } else {
                    f.out_order(self.caps)
                };
                let got = match r {
                    OrderResult::Finite(k) => format!("{k}"),
                    OrderResult::ExceedsCap { power, by_length } => format!(
                        "exceeds cap at power {power} ({})",
                        if by_length { "word length" } else { "power" }
                    ),
                };
                let ok = match (expected, r) {
                    (Some(RValue::Keyword(_)), OrderResult::ExceedsCap { .. }) => true,
                    (Some(RValue::Int(k)), OrderResult::Finite(m)) => *k == m as i64,
                    _ => false,
                };
                Ok((ok, got))
            }
            "inner" => {
                let f = aut(0)?;
                let w = f.inner_witness();
                let got = match &w {
                    Some(w) => format!("conjugation by {}", self.show(w)),
                    None => "not inner".into(),
                };
                let ok = match (expected, &w) {
                    (Some(RValue::Keyword(_)), None) => true,
                    (Some(RValue::Word(e)), Some(w)) => e == w,
                    _ => false,
                };
                Ok((ok, got))
            }
            "det" => {
                let d = abelianize(&aut(0)?).det().map_err(err)?;
                Ok((d == want_int()?, format!("det = {d}")))
            }
            "abelianize" => {
                let m = abelianize(&aut(0)?);
                match expected {
                    Some(RValue::Matrix(e)) => Ok((&m == e, format!("{m}"))),
                    _ => Err("expected a matrix".into()),
                }
            }
            "congruent" => {
                let m = abelianize(&aut(0)?);
                let level = int(1)?;
                if level < 1 {
                    return Err(format!("level {level} must be positive"));
                }
                let ok = congruence_level_member(&m, level as u64).map_err(err)?;
                Ok((ok, format!("{} mod {level}", m.mod_reduce(level as u64).map_err(err)?)))
            }
            "torelli" => {
                let f = aut(0)?;
                Ok((is_torelli(&f), format!("{}", abelianize(&f))))
            }
            "automorphism" => Ok((aut(0)?.is_automorphism(), String::new())),
            "is_basis" => Ok((is_basis(&words(0)), String::new())),
            "apply" => {
                let f = aut(0)?;
                let w = words(1).into_iter().next().ok_or("missing word")?;
                let got = f.apply(&w).map_err(err)?;
                match expected {
                    Some(RValue::Word(e)) => Ok((&got == e, self.show(&got))),
                    _ => Err("expected a word".into()),
                }
            }
            "fixes" => {
                let f = aut(0)?;
                for w in words(1) {
                    let img = f.apply(&w).map_err(err)?;
                    if img != w {
                        return Ok((false, format!("{} -> {}", self.show(&w), self.show(&img))));
                    }
                }
                Ok((true, String::new()))
            }
            "group_order" => {
                let (p, n, m) = group()?;
                let t = self.table(p, n, m)?;
                Ok((t.order() as i64 == want_int()?, format!("order {}", t.order())))
            }
            "center_order" => {
                let (p, n, m) = group()?;
                let z = self.table(p, n, m)?.center().len();
                Ok((z as i64 == want_int()?, format!("center of order {z}")))
            }
            "simple" => {
                let (p, n, m) = group()?;
                let t = self.table(p, n, m)?;
                Ok((t.is_simple(), format!("order {}", t.order())))
            }
            "kernel_of_reduction" => {
                let r = kernel_report(size(0)?).map_err(err)?;
                Ok((
                    r.all_hold(),
                    format!(
                        "group {}, kernel {}, image {} of {}; trace-zero {}, homomorphism {}, bijective {}",
                        r.group_order,
                        r.kernel_order,
                        r.image_order,
                        r.target_order,
                        r.matches_trace_zero,
                        r.homomorphism,
                        r.bijective
                    ),
                ))
            }
            "splitting" => {
                let n = size(0)?;
                if n != 3 {
                    return Err(format!("the exhaustive search is only feasible for n = 3, not {n}"));
                }
                let target = FiniteGroupTable::sl(n, 2, DEFAULT_CAP).map_err(err)?;
                let (a, b) = find_generating_pair(&target, target.order()).ok_or("no generating pair")?;
                let r = sl_mod4_splitting(&a, &b).map_err(err)?;
                split_outcome(r, want_kw()?)
            }
            "splitting_sanity" => split_outcome(sanity_splitting().map_err(err)?, want_kw()?),
            "subreps" => {
                let dims: Vec<i64> = invariant_subreps(size(0)?)
                    .map_err(err)?
                    .iter()
                    .map(|s| s.dim() as i64)
                    .collect();
                match expected {
                    Some(RValue::List(e)) => Ok((&dims == e, format!("dimensions {dims:?}"))),
                    _ => Err("expected a list".into()),
                }
            }
            "split_obstruction" => {
                let want = want_kw()?;
                Ok(match split_obstruction(size(0)?) {
                    ObstructionResult::Infeasible {
                        system,
                        combination,
                        violated,
                        ..
                    } => {
                        let cert = system.verify_certificate(&combination);
                        let trace_only = violated == [system.equations.len() - 1];
                        (
                            want == "infeasible" && cert && trace_only,
                            format!(
                                "infeasible; certificate {combination:?} {}; relaxed witness violates {violated:?}",
                                if cert { "verified" } else { "INVALID" }
                            ),
                        )
                    }
                    ObstructionResult::Feasible(x) => (want == "feasible", format!("feasible: {x:?}")),
                    ObstructionResult::Rejected(why) => (want == "rejected", format!("rejected: {why}")),
                })
            }
            "closure_is_kernel" => {
                let (n, m, l) = (size(0)?, int(1)?, int(2)?);
                if m < 2 || l < 2 {
                    return Err("modulus and level must be at least 2".into());
                }
                let rows = closure_matches_kernel(n, m as u64, l as u64, DEFAULT_CAP).map_err(err)?;
                let ok = rows.iter().all(|r| r.2);
                let orders: Vec<String> = rows
                    .iter()
                    .map(|((k, r), o, _)| format!("e{k}{r}: {o}"))
                    .collect();
                Ok((ok, format!("closure orders {}", orders.join(", "))))
            }
            other => Err(format!("unknown check `{other}`")),
        }
    }
}

fn split_outcome(r: SplitResult, want: &str) -> EResult<(bool, String)> {
    Ok(match r {
        SplitResult::Splitting { a, b } => (want == "found", format!("section generated by {a} and {b}")),
        SplitResult::NoSplitting {
            pairs_checked,
            pairs_enumerated,
        } => (
            want == "none",
            format!("no section among {pairs_checked} lift pairs ({pairs_enumerated} enumerated)"),
        ),
    })
}
