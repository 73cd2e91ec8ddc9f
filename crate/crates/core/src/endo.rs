//! Endomorphisms of `F_n` given by generator images.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::word::{push_reduced, same_rank, Letter, Word};

/// `x_i -> images[i-1]`. Composition reads right to left: `f.compose(g)` is
/// `f ∘ g`, i.e. `g` is applied first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Endo {
    rank: usize,
    images: Vec<Word>,
}

/// The standard elementary automorphisms. Indices are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum NamedGenerator {
    /// `x_i -> x_j x_i`
    L(usize, usize),
    /// `x_i -> x_i x_j`
    R(usize, usize),
    /// `x_i -> x_j x_i x_j^-1`
    C(usize, usize),
    /// swaps `x_i` and `x_j`
    P(usize, usize),
    /// `x_i -> x_i^-1`
    I(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Caps {
    pub max_power: u64,
    pub max_word_len: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_power: 1000,
            max_word_len: 100_000,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrderResult {
    Finite(u64),
    /// No identity (or inner) power up to `power`; `by_length` is set when the
    /// image-length cap tripped before the power cap.
    ExceedsCap { power: u64, by_length: bool },
}

/// One step of a Nielsen reduction: `tuple[target] <- ...`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NielsenMove {
    /// `t_i <- t_i * t_j^e`
    MulRight { target: usize, source: usize, inverse: bool },
    /// `t_i <- t_j^e * t_i`
    MulLeft { target: usize, source: usize, inverse: bool },
    /// `t_i <- t_i^-1`
    Invert { target: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NielsenResult {
    pub reduced: Vec<Word>,
    pub log: Vec<NielsenMove>,
}

impl NamedGenerator {
    fn indices(&self) -> (usize, Option<usize>) {
        match *self {
            NamedGenerator::L(i, j)
            | NamedGenerator::R(i, j)
            | NamedGenerator::C(i, j)
            | NamedGenerator::P(i, j) => (i, Some(j)),
            NamedGenerator::I(i) => (i, None),
        }
    }
}

impl fmt::Display for NamedGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NamedGenerator::L(i, j) => write!(f, "L({i},{j})"),
            NamedGenerator::R(i, j) => write!(f, "R({i},{j})"),
            NamedGenerator::C(i, j) => write!(f, "C({i},{j})"),
            NamedGenerator::P(i, j) => write!(f, "P({i},{j})"),
            NamedGenerator::I(i) => write!(f, "I({i})"),
        }
    }
}

impl Endo {
    pub fn new(rank: usize, images: Vec<Word>) -> Result<Endo> {
        if images.len() != rank {
            return Err(Error::RankMismatch {
                left: rank,
                right: images.len(),
            });
        }
        for w in &images {
            same_rank(rank, w.rank())?;
        }
        Ok(Endo { rank, images })
    }

    pub fn identity(rank: usize) -> Endo {
        Endo {
            rank,
            images: (1..=rank)
                .map(|i| Word::from_reduced(rank, vec![i as Letter]))
                .collect(),
        }
    }

    pub fn named(gen: NamedGenerator, rank: usize) -> Result<Endo> {
        let (i, j) = gen.indices();
        let check = |k: usize| {
            if k == 0 || k > rank {
                Err(Error::GeneratorOutOfRange {
                    index: k as i64,
                    rank,
                })
            } else {
                Ok(())
            }
        };
        check(i)?;
        if let Some(j) = j {
            check(j)?;
            if i == j {
                return Err(Error::InvalidArgument(format!(
                    "{gen} needs distinct indices"
                )));
            }
        }
        let mut f = Endo::identity(rank);
        let (xi, xj) = (i as Letter, j.unwrap_or(0) as Letter);
        let img = match gen {
            NamedGenerator::L(..) => vec![xj, xi],
            NamedGenerator::R(..) => vec![xi, xj],
            NamedGenerator::C(..) => vec![xj, xi, -xj],
            NamedGenerator::P(..) => {
                f.images[j.unwrap() - 1] = Word::from_reduced(rank, vec![xi]);
                vec![xj]
            }
            NamedGenerator::I(..) => vec![-xi],
        };
        f.images[i - 1] = Word::from_reduced(rank, img);
        Ok(f)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, index: usize) -> &Word {
        &self.images[index - 1]
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        same_rank(self.rank, w.rank())?;
        let mut out: Vec<Letter> = Vec::new();
        for &l in w.letters() {
            let img = &self.images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                for &m in img.letters() {
                    push_reduced(&mut out, m);
                }
            } else {
                for &m in img.letters().iter().rev() {
                    push_reduced(&mut out, -m);
                }
            }
        }
        Ok(Word::from_reduced(self.rank, out))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Endo) -> Result<Endo> {
        same_rank(self.rank, other.rank)?;
        let images = other
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Endo {
            rank: self.rank,
            images,
        })
    }

    /// Composes a written chain `a * b * c`, which means `a ∘ b ∘ c`.
    pub fn compose_chain<'a>(rank: usize, chain: impl IntoIterator<Item = &'a Endo>) -> Result<Endo> {
        let mut acc = Endo::identity(rank);
        for f in chain {
            acc = acc.compose(f)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(k, w)| w.letters() == [(k + 1) as Letter])
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    /// `self^k`; negative powers need an automorphism.
    pub fn power(&self, k: i64) -> Result<Endo> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut acc = Endo::identity(self.rank);
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Smallest `k >= 1` with `self^k = id`.
    pub fn order(&self, caps: Caps) -> OrderResult {
        self.first_power_where(caps, Endo::is_identity)
    }

    /// Smallest `k >= 1` with `self^k` inner.
    pub fn out_order(&self, caps: Caps) -> OrderResult {
        self.first_power_where(caps, |g| g.inner_witness().is_some())
    }

    fn first_power_where(&self, caps: Caps, pred: impl Fn(&Endo) -> bool) -> OrderResult {
        let mut g = self.clone();
        for k in 1..=caps.max_power {
            if pred(&g) {
                return OrderResult::Finite(k);
            }
            if g.max_image_len() > caps.max_word_len {
                return OrderResult::ExceedsCap {
                    power: k,
                    by_length: true,
                };
            }
            g = self.compose(&g).expect("same rank");
        }
        OrderResult::ExceedsCap {
            power: caps.max_power,
            by_length: false,
        }
    }

    /// If `self` is conjugation `x -> w x w^-1`, returns `w`.
    ///
    /// Reads the candidate conjugator off the cyclic reduction of the image of
    /// `x1`, fixes the remaining power of `x1` from the image of `x2`, then
    /// checks every generator.
    pub fn inner_witness(&self) -> Option<Word> {
        let n = self.rank;
        if n == 0 {
            return Some(Word::empty(0));
        }
        if n == 1 {
            return self.is_identity().then(|| Word::empty(1));
        }
        let (core, v) = self.images[0].cyclic_reduce();
        if core.letters() != [1] {
            return None;
        }
        // self(x2) = v x1^k x2 x1^-k v^-1
        let u = v.inverse().multiply(&self.images[1]).ok()?.multiply(&v).ok()?;
        let lead = u.letters();
        let mut run = 0usize;
        let sign = lead.first().copied().unwrap_or(0);
        if sign.unsigned_abs() == 1 {
            while run < lead.len() && lead[run] == sign {
                run += 1;
            }
        }
        let k = if sign < 0 { -(run as i64) } else { run as i64 };
        let x1 = Word::from_reduced(n, vec![1]);
        let w = v.multiply(&x1.power(k)).ok()?;
        let winv = w.inverse();
        for (i, img) in self.images.iter().enumerate() {
            let gen = Word::from_reduced(n, vec![(i + 1) as Letter]);
            let expect = w.multiply(&gen).ok()?.multiply(&winv).ok()?;
            if &expect != img {
                return None;
            }
        }
        Some(w)
    }

    pub fn is_automorphism(&self) -> bool {
        is_basis(&self.images)
    }

    /// Inverse automorphism, or `NotABasis`.
    pub fn invert(&self) -> Result<Endo> {
        let images = fold_inverse(&self.images).ok_or(Error::NotABasis)?;
        Ok(Endo {
            rank: self.rank,
            images,
        })
    }

    /// Images of the listed generators only (1-based), for restricted checks.
    pub fn agrees_on(&self, other: &Endo, words: &[Word]) -> Result<bool> {
        for w in words {
            if self.apply(w)? != other.apply(w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{ ")?;
        let mut first = true;
        for (i, img) in self.images.iter().enumerate() {
            if img.letters() == [(i + 1) as Letter] {
                continue;
            }
            if !first {
                write!(f, "; ")?;
            }
            first = false;
            write!(f, "x{} -> {}", i + 1, img)?;
        }
        write!(f, " }}")
    }
}

/// Replays a Nielsen log on a tuple.
pub fn apply_nielsen_moves(tuple: &[Word], log: &[NielsenMove]) -> Vec<Word> {
    let mut t = tuple.to_vec();
    for mv in log {
        apply_move(&mut t, *mv);
    }
    t
}

fn apply_move(t: &mut [Word], mv: NielsenMove) {
    match mv {
        NielsenMove::MulRight {
            target,
            source,
            inverse,
        } => {
            let s = if inverse {
                t[source].inverse()
            } else {
                t[source].clone()
            };
            t[target] = t[target].multiply(&s).expect("same rank");
        }
        NielsenMove::MulLeft {
            target,
            source,
            inverse,
        } => {
            let s = if inverse {
                t[source].inverse()
            } else {
                t[source].clone()
            };
            t[target] = s.multiply(&t[target]).expect("same rank");
        }
        NielsenMove::Invert { target } => t[target] = t[target].inverse(),
    }
}

/// Greedy Nielsen reduction: any move that makes an entry strictly smaller in
/// shortlex order is taken, scanning pairs in index order. Stops early if an
/// entry becomes trivial.
pub fn nielsen_reduce(tuple: &[Word]) -> NielsenResult {
    let mut t: Vec<Word> = tuple.to_vec();
    let mut log = Vec::new();
    let m = t.len();
    loop {
        let mut changed = false;
        for i in 0..m {
            if t[i].is_empty() {
                return NielsenResult { reduced: t, log };
            }
            let inv = t[i].inverse();
            if inv.shortlex_cmp(&t[i]) == Ordering::Less {
                t[i] = inv;
                log.push(NielsenMove::Invert { target: i });
                changed = true;
            }
            for j in 0..m {
                if i == j {
                    continue;
                }
                for inverse in [false, true] {
                    let s = if inverse {
                        t[j].inverse()
                    } else {
                        t[j].clone()
                    };
                    let right = t[i].multiply(&s).expect("same rank");
                    if right.shortlex_cmp(&t[i]) == Ordering::Less {
                        t[i] = right;
                        log.push(NielsenMove::MulRight {
                            target: i,
                            source: j,
                            inverse,
                        });
                        changed = true;
                        if t[i].is_empty() {
                            return NielsenResult { reduced: t, log };
                        }
                        continue;
                    }
                    let left = s.multiply(&t[i]).expect("same rank");
                    if left.shortlex_cmp(&t[i]) == Ordering::Less {
                        t[i] = left;
                        log.push(NielsenMove::MulLeft {
                            target: i,
                            source: j,
                            inverse,
                        });
                        changed = true;
                        if t[i].is_empty() {
                            return NielsenResult { reduced: t, log };
                        }
                    }
                }
            }
        }
        if !changed {
            return NielsenResult { reduced: t, log };
        }
    }
}

/// `Some([(generator, inverted)])` if the tuple is a signed permutation of the
/// standard basis.
pub fn standard_position(t: &[Word]) -> Option<Vec<(usize, bool)>> {
    let n = t.len();
    let mut seen = vec![false; n + 1];
    let mut out = Vec::with_capacity(n);
    for w in t {
        if w.len() != 1 || w.rank() != n {
            return None;
        }
        let l = w.letters()[0];
        let g = l.unsigned_abs() as usize;
        if seen[g] {
            return None;
        }
        seen[g] = true;
        out.push((g, l < 0));
    }
    Some(out)
}

/// True iff the tuple is a free basis of `F_rank` (its length must equal the
/// rank of its words).
pub fn is_basis(tuple: &[Word]) -> bool {
    fold_inverse(tuple).is_some()
}

/// Edge of the folding graph: `src -> dst` reads generator `label` (> 0) and
/// carries a word `lam` in the tuple entries.
struct FoldEdge {
    src: usize,
    dst: usize,
    label: Letter,
    lam: Word,
    alive: bool,
}

/// Stallings folding of the wedge of cycles spelling the tuple, keeping on
/// every edge a word `lam` in formal letters `y_i` (standing for tuple entry
/// `i`) such that every closed path at the base spells `lam(path)(tuple)`.
/// Folds merge the far endpoint after re-gauging it, which leaves closed
/// paths unchanged. The tuple is a basis iff the result is the standard rose;
/// the loop labelled `x_k` then carries a word `W_k` with `W_k(tuple) = x_k`.
fn fold_inverse(tuple: &[Word]) -> Option<Vec<Word>> {
    let n = tuple.len();
    if tuple.iter().any(|w| w.rank() != n || w.is_empty()) {
        return None;
    }
    let mut edges: Vec<FoldEdge> = Vec::new();
    let mut next_vertex = 1;
    for (i, u) in tuple.iter().enumerate() {
        let letters = u.letters();
        let mut at = 0;
        for (t, &l) in letters.iter().enumerate() {
            let to = if t + 1 == letters.len() {
                0
            } else {
                next_vertex += 1;
                next_vertex - 1
            };
            let lam = if t == 0 {
                Word::from_reduced(n, vec![(i + 1) as Letter])
            } else {
                Word::empty(n)
            };
            edges.push(if l > 0 {
                FoldEdge { src: at, dst: to, label: l, lam, alive: true }
            } else {
                FoldEdge { src: to, dst: at, label: -l, lam: lam.inverse(), alive: true }
            });
            at = to;
        }
    }
    // Half-edge (edge, outgoing) seen from its start vertex.
    let far = |e: &FoldEdge, out: bool| if out { e.dst } else { e.src };
    let lam_from = |e: &FoldEdge, out: bool| if out { e.lam.clone() } else { e.lam.inverse() };
    loop {
        let mut seen: std::collections::HashMap<(usize, Letter), (usize, bool)> =
            std::collections::HashMap::new();
        let mut fold = None;
        'scan: for (k, e) in edges.iter().enumerate() {
            if !e.alive {
                continue;
            }
            for (v, lab, out) in [(e.src, e.label, true), (e.dst, -e.label, false)] {
                if let Some(&h) = seen.get(&(v, lab)) {
                    fold = Some((h, (k, out)));
                    break 'scan;
                }
                seen.insert((v, lab), (k, out));
            }
        }
        let Some((h1, h2)) = fold else { break };
        let (w1, w2) = (far(&edges[h1.0], h1.1), far(&edges[h2.0], h2.1));
        if w1 == w2 {
            if lam_from(&edges[h1.0], h1.1) != lam_from(&edges[h2.0], h2.1) {
                return None;
            }
            edges[h2.0].alive = false;
            continue;
        }
        let (hz, ho, z, o) = if w2 != 0 { (h2, h1, w2, w1) } else { (h1, h2, w1, w2) };
        let g = lam_from(&edges[hz.0], hz.1)
            .inverse()
            .multiply(&lam_from(&edges[ho.0], ho.1))
            .ok()?;
        let ginv = g.inverse();
        edges[hz.0].alive = false;
        for e in edges.iter_mut().filter(|e| e.alive) {
            if e.src == z {
                e.lam = ginv.multiply(&e.lam).ok()?;
                e.src = o;
            }
            if e.dst == z {
                e.lam = e.lam.multiply(&g).ok()?;
                e.dst = o;
            }
        }
    }
    let mut out = vec![None; n];
    let mut count = 0;
    for e in edges.iter().filter(|e| e.alive) {
        if e.src != 0 || e.dst != 0 {
            return None;
        }
        out[e.label as usize - 1] = Some(e.lam.clone());
        count += 1;
    }
    if count != n {
        return None;
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    fn endo(rank: usize, imgs: &[&str]) -> Endo {
        Endo::new(rank, imgs.iter().map(|s| w(rank, s)).collect()).unwrap()
    }

    #[test]
    fn named_generators_act_as_documented() {
        use NamedGenerator::*;
        let x = |s| w(3, s);
        assert_eq!(Endo::named(L(1, 2), 3).unwrap().image(1), &x("x2 x1"));
        assert_eq!(Endo::named(R(1, 2), 3).unwrap().image(1), &x("x1 x2"));
        assert_eq!(
            Endo::named(C(1, 2), 3).unwrap().image(1),
            &x("x2 x1 x2^-1")
        );
        let p = Endo::named(P(1, 3), 3).unwrap();
        assert_eq!(p.image(1), &x("x3"));
        assert_eq!(p.image(3), &x("x1"));
        assert_eq!(Endo::named(I(2), 3).unwrap().image(2), &x("x2^-1"));
        assert!(Endo::named(L(1, 1), 3).is_err());
        assert!(Endo::named(L(1, 4), 3).is_err());
    }

    #[test]
    fn compose_applies_right_factor_first() {
        use NamedGenerator::*;
        let l = Endo::named(L(1, 2), 2).unwrap();
        let i = Endo::named(I(2), 2).unwrap();
        // (L ∘ I)(x1) = L(x1) = x2 x1 ; (I ∘ L)(x1) = I(x2 x1) = x2^-1 x1
        assert_eq!(l.compose(&i).unwrap().image(1), &w(2, "x2 x1"));
        assert_eq!(i.compose(&l).unwrap().image(1), &w(2, "x2^-1 x1"));
    }

    #[test]
    fn inverse_of_named_generators() {
        use NamedGenerator::*;
        for g in [L(1, 2), R(2, 1), C(1, 3), P(2, 3), I(3)] {
            let f = Endo::named(g, 3).unwrap();
            let inv = f.invert().unwrap();
            assert!(f.compose(&inv).unwrap().is_identity(), "{g}");
            assert!(inv.compose(&f).unwrap().is_identity(), "{g}");
        }
        let linv = Endo::named(L(1, 2), 2).unwrap().invert().unwrap();
        assert_eq!(linv.image(1), &w(2, "x2^-1 x1"));
    }

    #[test]
    fn non_basis_rejected() {
        let f = endo(2, &["x1^2", "x2"]);
        assert!(!f.is_automorphism());
        assert_eq!(f.invert(), Err(Error::NotABasis));
        let g = endo(2, &["x1 x2", "x2 x1"]);
        assert!(!g.is_automorphism());
    }

    #[test]
    fn conjugation_is_inner() {
        let n = 3;
        let c = w(n, "x2 x1^-1 x3");
        let f = Endo::new(
            n,
            (1..=n)
                .map(|i| c.conjugate(&Word::generator(n, i).unwrap()).unwrap())
                .collect(),
        )
        .unwrap();
        assert_eq!(f.inner_witness(), Some(c));
        assert_eq!(Endo::identity(3).inner_witness(), Some(Word::empty(3)));
        let p = Endo::named(NamedGenerator::P(1, 2), 3).unwrap();
        assert_eq!(p.inner_witness(), None);
    }

    #[test]
    fn conjugation_by_power_of_x1() {
        let n = 2;
        let c = w(n, "x1^3");
        let f = Endo::new(
            n,
            (1..=n)
                .map(|i| c.conjugate(&Word::generator(n, i).unwrap()).unwrap())
                .collect(),
        )
        .unwrap();
        assert_eq!(f.inner_witness(), Some(c));
    }

    #[test]
    fn order_with_caps() {
        let p = Endo::named(NamedGenerator::P(1, 2), 2).unwrap();
        assert_eq!(p.order(Caps::default()), OrderResult::Finite(2));
        let l = Endo::named(NamedGenerator::L(1, 2), 2).unwrap();
        let caps = Caps {
            max_power: 50,
            max_word_len: 1000,
        };
        assert!(matches!(l.order(caps), OrderResult::ExceedsCap { .. }));
    }

    #[test]
    fn power_matches_repeated_composition() {
        let f = endo(3, &["x2", "x3 x1", "x1^-1"]);
        let mut acc = Endo::identity(3);
        for k in 0..6 {
            assert_eq!(f.power(k).unwrap(), acc);
            acc = f.compose(&acc).unwrap();
        }
        let inv = f.power(-2).unwrap();
        assert!(inv.compose(&f.power(2).unwrap()).unwrap().is_identity());
    }
}
