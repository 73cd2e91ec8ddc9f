//! Finite matrix groups over `Z/m`: enumeration, normal closures, the
//! level-2 kernel of `SL_n(Z/4)`, splitting searches and GF(2) obstructions.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 4;

/// An `n x n` matrix over `Z/modulus` (`n <= 4`, `modulus <= 255`), packed so
/// it can be hashed and copied cheaply.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PackedMatrix {
    n: u8,
    modulus: u8,
    entries: [u8; MAX_DIM * MAX_DIM],
}

impl PackedMatrix {
    pub fn new(n: usize, modulus: u64, entries: &[i64]) -> Result<PackedMatrix> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidArgument(format!("size {n} not in 1..={MAX_DIM}")));
        }
        if !(2..=255).contains(&modulus) {
            return Err(Error::InvalidArgument(format!("modulus {modulus} not in 2..=255")));
        }
        if entries.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        let mut e = [0u8; MAX_DIM * MAX_DIM];
        for (k, &x) in entries.iter().enumerate() {
            e[k] = x.rem_euclid(modulus as i64) as u8;
        }
        Ok(PackedMatrix {
            n: n as u8,
            modulus: modulus as u8,
            entries: e,
        })
    }

    pub fn identity(n: usize, modulus: u64) -> Result<PackedMatrix> {
        let mut e = vec![0i64; n * n];
        for i in 0..n {
            e[i * n + i] = 1;
        }
        PackedMatrix::new(n, modulus, &e)
    }

    /// `I + power * E_{k,r}` (1-based).
    pub fn elementary(n: usize, modulus: u64, k: usize, r: usize, power: i64) -> Result<PackedMatrix> {
        if k == r || k == 0 || r == 0 || k > n || r > n {
            return Err(Error::InvalidArgument(format!("elementary({k},{r}) in size {n}")));
        }
        let mut m = PackedMatrix::identity(n, modulus)?;
        m.entries[(k - 1) * n + (r - 1)] = power.rem_euclid(modulus as i64) as u8;
        Ok(m)
    }

    /// Parses rows separated by `;` or newlines, entries by whitespace.
    pub fn parse(modulus: u64, text: &str) -> Result<PackedMatrix> {
        let rows: Vec<Vec<i64>> = text
            .split([';', '\n'])
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .map(|r| {
                r.split_whitespace()
                    .map(|t| {
                        t.parse::<i64>()
                            .map_err(|_| Error::InvalidArgument(format!("bad entry {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix must be square".into()));
        }
        PackedMatrix::new(n, modulus, &rows.concat())
    }

    pub fn size(&self) -> usize {
        self.n as usize
    }

    pub fn modulus(&self) -> u64 {
        u64::from(self.modulus)
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        u64::from(self.entries[i * self.size() + j])
    }

    pub fn is_identity(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn mul(&self, other: &PackedMatrix) -> PackedMatrix {
        debug_assert_eq!(self.n, other.n);
        debug_assert_eq!(self.modulus, other.modulus);
        let n = self.size();
        let m = u32::from(self.modulus);
        let mut out = [0u8; MAX_DIM * MAX_DIM];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u32;
                for k in 0..n {
                    acc += u32::from(self.entries[i * n + k]) * u32::from(other.entries[k * n + j]);
                }
                out[i * n + j] = (acc % m) as u8;
            }
        }
        PackedMatrix {
            n: self.n,
            modulus: self.modulus,
            entries: out,
        }
    }

    fn signed_rows(&self) -> Vec<Vec<i64>> {
        let n = self.size();
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j) as i64).collect())
            .collect()
    }

    pub fn det(&self) -> u64 {
        cofactor_det(&self.signed_rows()).rem_euclid(self.modulus as i64) as u64
    }

    /// Inverse via the adjugate; `None` if the determinant is not a unit.
    pub fn inverse(&self) -> Option<PackedMatrix> {
        let n = self.size();
        let m = self.modulus as i64;
        let rows = self.signed_rows();
        let dinv = mod_inverse(cofactor_det(&rows).rem_euclid(m), m)?;
        let mut e = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<i64>> = rows
                    .iter()
                    .enumerate()
                    .filter(|(r, _)| *r != j)
                    .map(|(_, row)| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != i)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                e[i * n + j] = (sign * cofactor_det(&minor)).rem_euclid(m) * dinv % m;
            }
        }
        PackedMatrix::new(n, self.modulus(), &e).ok()
    }

    /// Reduction to a divisor of the modulus.
    pub fn reduce(&self, modulus: u64) -> Result<PackedMatrix> {
        if modulus < 2 || !self.modulus().is_multiple_of(modulus) {
            return Err(Error::InvalidArgument(format!(
                "{modulus} does not divide {}",
                self.modulus
            )));
        }
        let e: Vec<i64> = self.entries[..self.size() * self.size()]
            .iter()
            .map(|&x| i64::from(x))
            .collect();
        PackedMatrix::new(self.size(), modulus, &e)
    }

    /// Same entries read in a larger modulus (entries in `0..old`).
    pub fn lift(&self, modulus: u64) -> Result<PackedMatrix> {
        let e: Vec<i64> = self.entries[..self.size() * self.size()]
            .iter()
            .map(|&x| i64::from(x))
            .collect();
        PackedMatrix::new(self.size(), modulus, &e)
    }

    /// Multiplicative order, up to `cap`.
    pub fn order(&self, cap: usize) -> Option<usize> {
        let mut g = *self;
        for k in 1..=cap {
            if g.is_identity() {
                return Some(k);
            }
            g = g.mul(self);
        }
        None
    }

    pub fn conjugate_by(&self, g: &PackedMatrix, g_inv: &PackedMatrix) -> PackedMatrix {
        g.mul(self).mul(g_inv)
    }
}

impl fmt::Display for PackedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.size();
        for i in 0..n {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..n).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PackedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}] mod {}", self.modulus)
    }
}

fn cofactor_det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != c)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * cofactor_det(&minor)
            })
            .sum(),
    }
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m))
}

/// Parses matrices separated by blank lines; `#` starts a comment.
pub fn parse_matrix_list(modulus: u64, text: &str) -> Result<Vec<PackedMatrix>> {
    let mut out = Vec::new();
    let mut block = String::new();
    for line in text.lines().chain(std::iter::once("")) {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            if !block.trim().is_empty() {
                out.push(PackedMatrix::parse(modulus, &block)?);
            }
            block.clear();
        } else {
            block.push_str(line);
            block.push('\n');
        }
    }
    Ok(out)
}

/// A finite group of matrices, stored as the full element list. When
/// `central` is nontrivial the elements are cosets of that central subgroup,
/// each represented by its smallest member.
#[derive(Clone, Debug)]
pub struct FiniteGroupTable {
    n: usize,
    modulus: u64,
    generators: Vec<PackedMatrix>,
    central: Vec<PackedMatrix>,
    elements: Vec<PackedMatrix>,
    index: HashMap<PackedMatrix, u32>,
}

/// Default element cap for enumerations.
pub const DEFAULT_CAP: usize = 2_000_000;

impl FiniteGroupTable {
    /// Closure of `generators` under multiplication (BFS from the identity).
    pub fn enumerate(generators: &[PackedMatrix], cap: usize) -> Result<FiniteGroupTable> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidArgument("no generators".into()))?;
        let id = PackedMatrix::identity(first.size(), first.modulus())?;
        FiniteGroupTable::enumerate_mod(generators, vec![id], cap)
    }

    fn enumerate_mod(
        generators: &[PackedMatrix],
        central: Vec<PackedMatrix>,
        cap: usize,
    ) -> Result<FiniteGroupTable> {
        let id = central[0];
        let (n, modulus) = (id.size(), id.modulus());
        for g in generators {
            if g.size() != n || g.modulus() != modulus {
                return Err(Error::InvalidArgument("generators disagree on size or modulus".into()));
            }
        }
        let mut t = FiniteGroupTable {
            n,
            modulus,
            generators: Vec::new(),
            central,
            elements: Vec::new(),
            index: HashMap::new(),
        };
        t.generators = generators.iter().map(|g| t.canon(g)).collect();
        let start = t.canon(&id);
        t.index.insert(start, 0);
        t.elements.push(start);
        let mut head = 0;
        while head < t.elements.len() {
            let x = t.elements[head];
            head += 1;
            for gi in 0..t.generators.len() {
                let y = t.canon(&x.mul(&t.generators[gi]));
                if !t.index.contains_key(&y) {
                    if t.elements.len() >= cap {
                        return Err(Error::EnumerationCap(cap));
                    }
                    t.index.insert(y, t.elements.len() as u32);
                    t.elements.push(y);
                }
            }
        }
        Ok(t)
    }

    /// `SL_n(Z/modulus)` from the elementary matrices `e_{ij}`.
    pub fn sl(n: usize, modulus: u64, cap: usize) -> Result<FiniteGroupTable> {
        FiniteGroupTable::enumerate(&sl_generators(n, modulus)?, cap)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[PackedMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[PackedMatrix] {
        &self.generators
    }

    /// The central subgroup this table is a quotient by (`[I]` if none).
    pub fn central(&self) -> &[PackedMatrix] {
        &self.central
    }

    pub fn is_quotient(&self) -> bool {
        self.central.len() > 1
    }

    pub fn canon(&self, m: &PackedMatrix) -> PackedMatrix {
        if self.central.len() == 1 {
            return *m;
        }
        self.central.iter().map(|z| m.mul(z)).min().unwrap()
    }

    pub fn contains(&self, m: &PackedMatrix) -> bool {
        self.index.contains_key(&self.canon(m))
    }

    pub fn mul(&self, a: &PackedMatrix, b: &PackedMatrix) -> PackedMatrix {
        self.canon(&a.mul(b))
    }

    pub fn identity(&self) -> PackedMatrix {
        self.elements[0]
    }

    /// Elements commuting with every generator (as cosets, for a quotient).
    pub fn center(&self) -> Vec<PackedMatrix> {
        self.elements
            .iter()
            .filter(|x| {
                self.generators
                    .iter()
                    .all(|g| self.mul(x, g) == self.mul(g, x))
            })
            .copied()
            .collect()
    }

    /// `G / Z(G)`, with cosets represented by their smallest member.
    pub fn quotient_by_center(&self, cap: usize) -> Result<FiniteGroupTable> {
        if self.is_quotient() {
            return Err(Error::InvalidArgument("table is already a quotient".into()));
        }
        let mut z = self.center();
        z.sort();
        let id = self.identity();
        z.retain(|m| *m != id);
        z.insert(0, id);
        FiniteGroupTable::enumerate_mod(&self.generators, z, cap)
    }

    /// Orbits of the conjugation action, generated by conjugation by the
    /// generators.
    pub fn conjugacy_classes(&self) -> Vec<Vec<PackedMatrix>> {
        let gens: Vec<(PackedMatrix, PackedMatrix)> = self
            .generators
            .iter()
            .map(|g| (*g, g.inverse().expect("group elements are invertible")))
            .collect();
        let mut seen = vec![false; self.elements.len()];
        let mut classes = Vec::new();
        for start in 0..self.elements.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut class = vec![self.elements[start]];
            let mut head = 0;
            while head < class.len() {
                let x = class[head];
                head += 1;
                for (g, gi) in &gens {
                    let y = self.canon(&x.conjugate_by(g, gi));
                    let k = self.index[&y] as usize;
                    if !seen[k] {
                        seen[k] = true;
                        class.push(y);
                    }
                }
            }
            classes.push(class);
        }
        classes
    }

    /// Smallest normal subgroup containing `seeds`.
    pub fn normal_closure(&self, seeds: &[PackedMatrix], cap: usize) -> Result<FiniteGroupTable> {
        normal_closure_in(seeds, &self.generators, &self.central, cap)
    }

    /// Nontrivial, and every nontrivial conjugacy class normally generates the
    /// whole group.
    pub fn is_simple(&self) -> bool {
        if self.order() <= 1 {
            return false;
        }
        let id = self.identity();
        self.conjugacy_classes()
            .iter()
            .filter(|c| c[0] != id)
            .all(|c| {
                self.normal_closure(&c[..1], self.order())
                    .map(|h| h.order() == self.order())
                    .unwrap_or(false)
            })
    }
}

/// The elementary generators `e_{ij}`, `i != j`, of `SL_n(Z/modulus)`.
pub fn sl_generators(n: usize, modulus: u64) -> Result<Vec<PackedMatrix>> {
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                gens.push(PackedMatrix::elementary(n, modulus, i, j, 1)?);
            }
        }
    }
    Ok(gens)
}

/// Normal closure of `seeds` in the group generated by `ambient`, grown by
/// adding conjugates of the current generators until none escapes. Only the
/// closure is enumerated, never the ambient group.
pub fn normal_closure_in(
    seeds: &[PackedMatrix],
    ambient: &[PackedMatrix],
    central: &[PackedMatrix],
    cap: usize,
) -> Result<FiniteGroupTable> {
    let first = seeds
        .first()
        .ok_or_else(|| Error::InvalidArgument("no seeds".into()))?;
    let central = if central.is_empty() {
        vec![PackedMatrix::identity(first.size(), first.modulus())?]
    } else {
        central.to_vec()
    };
    let amb: Vec<(PackedMatrix, PackedMatrix)> = ambient
        .iter()
        .map(|g| {
            g.inverse()
                .map(|gi| (*g, gi))
                .ok_or_else(|| Error::InvalidArgument("ambient generator not invertible".into()))
        })
        .collect::<Result<_>>()?;
    let mut gens = seeds.to_vec();
    let mut h = FiniteGroupTable::enumerate_mod(&gens, central.clone(), cap)?;
    loop {
        let mut grew = false;
        let current = gens.clone();
        'outer: for (g, gi) in &amb {
            for x in &current {
                let c = x.conjugate_by(g, gi);
                if !h.contains(&c) {
                    gens.push(c);
                    h = FiniteGroupTable::enumerate_mod(&gens, central.clone(), cap)?;
                    grew = true;
                    break 'outer;
                }
            }
        }
        if !grew {
            return Ok(h);
        }
    }
}

/// Elements of `table` congruent to the identity modulo `level`.
pub fn kernel_of_reduction(table: &FiniteGroupTable, level: u64) -> Result<Vec<PackedMatrix>> {
    let mut out = Vec::new();
    for x in table.elements() {
        if x.reduce(level)?.is_identity() {
            out.push(*x);
        }
    }
    Ok(out)
}

/// The GF(2)-space of `n x n` matrices with even trace, as bitmasks with bit
/// `i*n + j` holding entry `(i, j)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TraceZeroSpace {
    pub n: usize,
}

impl TraceZeroSpace {
    pub fn dimension(&self) -> usize {
        self.n * self.n - 1
    }

    pub fn contains(&self, v: u64) -> bool {
        let tr: u32 = (0..self.n).map(|i| ((v >> (i * self.n + i)) & 1) as u32).sum();
        tr.is_multiple_of(2) && v >> (self.n * self.n) == 0
    }

    pub fn elements(&self) -> Vec<u64> {
        (0..1u64 << (self.n * self.n))
            .filter(|&v| self.contains(v))
            .collect()
    }
}

/// `(X - I) / 2 mod 2` for `X ≡ I (mod 2)` in `SL_n(Z/4)`.
pub fn lee_szczarba(x: &PackedMatrix) -> Result<u64> {
    if x.modulus() != 4 || !x.reduce(2)?.is_identity() {
        return Err(Error::InvalidArgument("needs a level-2 matrix mod 4".into()));
    }
    let n = x.size();
    let mut v = 0u64;
    for i in 0..n {
        for j in 0..n {
            let e = x.get(i, j) as i64 - i64::from(i == j);
            if (e.rem_euclid(4) / 2) == 1 {
                v |= 1 << (i * n + j);
            }
        }
    }
    Ok(v)
}

/// `I + 2A mod 4` for a GF(2) matrix `A`.
pub fn from_trace_zero(n: usize, v: u64) -> PackedMatrix {
    let mut e = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            e[i * n + j] = i64::from(i == j) + 2 * ((v >> (i * n + j)) & 1) as i64;
        }
    }
    PackedMatrix::new(n, 4, &e).expect("valid size")
}

/// Everything checked about `SL_n(Z/4) -> SL_n(Z/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelReport {
    pub n: usize,
    pub group_order: usize,
    pub kernel_order: usize,
    pub image_order: usize,
    pub target_order: usize,
    /// The kernel is exactly `{I + 2A : tr A even}`.
    pub matches_trace_zero: bool,
    /// `X -> (X - I)/2` is a homomorphism to `(M^0_n(Z/2), +)`.
    pub homomorphism: bool,
    /// ...and a bijection onto it.
    pub bijective: bool,
}

impl KernelReport {
    pub fn all_hold(&self) -> bool {
        self.matches_trace_zero
            && self.homomorphism
            && self.bijective
            && self.image_order == self.target_order
            && self.image_order * self.kernel_order == self.group_order
    }
}

pub fn kernel_report(n: usize) -> Result<KernelReport> {
    let g4 = FiniteGroupTable::sl(n, 4, DEFAULT_CAP)?;
    let g2 = FiniteGroupTable::sl(n, 2, DEFAULT_CAP)?;
    let kernel = kernel_of_reduction(&g4, 2)?;
    let space = TraceZeroSpace { n };
    let expected: HashSet<PackedMatrix> = space
        .elements()
        .into_iter()
        .map(|v| from_trace_zero(n, v))
        .collect();
    let actual: HashSet<PackedMatrix> = kernel.iter().copied().collect();
    let ls: Vec<u64> = kernel.iter().map(lee_szczarba).collect::<Result<_>>()?;
    let homomorphism = kernel.par_iter().zip(ls.par_iter()).all(|(x, &vx)| {
        kernel
            .iter()
            .zip(&ls)
            .all(|(y, &vy)| lee_szczarba(&x.mul(y)).map(|v| v == vx ^ vy).unwrap_or(false))
    });
    let images: HashSet<u64> = ls.iter().copied().collect();
    let bijective = images.len() == kernel.len()
        && images.len() == 1 << space.dimension()
        && images.iter().all(|&v| space.contains(v));
    let image: HashSet<PackedMatrix> = g4
        .elements()
        .iter()
        .map(|x| x.reduce(2))
        .collect::<Result<_>>()?;
    Ok(KernelReport {
        n,
        group_order: g4.order(),
        kernel_order: kernel.len(),
        image_order: image.len(),
        target_order: g2.order(),
        matches_trace_zero: expected == actual,
        homomorphism,
        bijective,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitResult {
    /// Every lift pair was tried; none generates a copy of the target.
    NoSplitting { pairs_checked: usize, pairs_enumerated: usize },
    Splitting { a: PackedMatrix, b: PackedMatrix },
}

/// Looks for lifts `a·k1`, `b·k2` (`k1`, `k2` in `kernel`) generating a
/// subgroup of order `target_order`, which then maps isomorphically onto the
/// target. Lifts whose element order differs from the order of their
/// projection are skipped, since they cannot lie in a section.
pub fn splitting_search(
    lift_a: &PackedMatrix,
    lift_b: &PackedMatrix,
    kernel: &[PackedMatrix],
    target_order: usize,
    order_a: usize,
    order_b: usize,
) -> SplitResult {
    let cap = 4 * target_order.max(1);
    let cand_a: Vec<PackedMatrix> = kernel
        .iter()
        .map(|k| lift_a.mul(k))
        .filter(|x| x.order(cap) == Some(order_a))
        .collect();
    let cand_b: Vec<PackedMatrix> = kernel
        .iter()
        .map(|k| lift_b.mul(k))
        .filter(|x| x.order(cap) == Some(order_b))
        .collect();
    let found = cand_a.par_iter().find_map_first(|a| {
        cand_b.iter().find_map(|b| {
            match FiniteGroupTable::enumerate(&[*a, *b], target_order) {
                Ok(t) if t.order() == target_order => Some((*a, *b)),
                _ => None,
            }
        })
    });
    match found {
        Some((a, b)) => SplitResult::Splitting { a, b },
        None => SplitResult::NoSplitting {
            pairs_checked: kernel.len() * kernel.len(),
            pairs_enumerated: cand_a.len() * cand_b.len(),
        },
    }
}

/// First pair (in enumeration order) generating the whole table, scanning
/// the first `bound` elements.
pub fn find_generating_pair(table: &FiniteGroupTable, bound: usize) -> Option<(PackedMatrix, PackedMatrix)> {
    let els = &table.elements()[..bound.min(table.order())];
    for (i, a) in els.iter().enumerate() {
        for b in &els[i + 1..] {
            if let Ok(t) = FiniteGroupTable::enumerate(&[*a, *b], table.order()) {
                if t.order() == table.order() {
                    return Some((*a, *b));
                }
            }
        }
    }
    None
}

/// Some element of `SL_n(Z/4)` reducing to `x` mod 2.
pub fn lift_to_mod4(x: &PackedMatrix) -> Result<PackedMatrix> {
    let y = x.lift(4)?;
    match y.det() {
        1 => Ok(y),
        3 => {
            let mut e = vec![0i64; x.size() * x.size()];
            for i in 0..x.size() {
                e[i * x.size() + i] = if i == 0 { 3 } else { 1 };
            }
            Ok(y.mul(&PackedMatrix::new(x.size(), 4, &e)?))
        }
        _ => Err(Error::InvalidArgument("matrix is not invertible mod 2".into())),
    }
}

/// Runs the splitting search for `SL_n(Z/4) -> SL_n(Z/2)` on a generating
/// pair of the target.
pub fn sl_mod4_splitting(gen_a: &PackedMatrix, gen_b: &PackedMatrix) -> Result<SplitResult> {
    let n = gen_a.size();
    let target = FiniteGroupTable::sl(n, 2, DEFAULT_CAP)?;
    let g4 = FiniteGroupTable::sl(n, 4, DEFAULT_CAP)?;
    let kernel = kernel_of_reduction(&g4, 2)?;
    let oa = gen_a.order(target.order()).unwrap_or(0);
    let ob = gen_b.order(target.order()).unwrap_or(0);
    Ok(splitting_search(
        &lift_to_mod4(gen_a)?,
        &lift_to_mod4(gen_b)?,
        &kernel,
        target.order(),
        oa,
        ob,
    ))
}

/// A subspace of GF(2)^d in reduced echelon form; rows are bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    pub basis: Vec<u64>,
}

impl Subspace {
    pub fn zero() -> Subspace {
        Subspace { basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Adds `v`; returns false if it was already in the span.
    fn insert(&mut self, mut v: u64) -> bool {
        for &b in &self.basis {
            let pivot = 63 - b.leading_zeros();
            if (v >> pivot) & 1 == 1 {
                v ^= b;
            }
        }
        if v == 0 {
            return false;
        }
        let pivot = 63 - v.leading_zeros();
        for b in self.basis.iter_mut() {
            if (*b >> pivot) & 1 == 1 {
                *b ^= v;
            }
        }
        self.basis.push(v);
        self.basis.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    pub fn contains(&self, v: u64) -> bool {
        let mut c = self.clone();
        !c.insert(v)
    }

    fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for &b in &other.basis {
            s.insert(b);
        }
        s
    }
}

fn gf2_mul(n: usize, a: u64, b: u64) -> u64 {
    let mut out = 0u64;
    for i in 0..n {
        for k in 0..n {
            if (a >> (i * n + k)) & 1 == 1 {
                let row = (b >> (k * n)) & ((1 << n) - 1);
                out ^= row << (i * n);
            }
        }
    }
    out
}

/// All subspaces of `M^0_n(Z/2)` invariant under conjugation by `SL_n(Z/2)`,
/// sorted by dimension. Every invariant subspace is a sum of cyclic ones
/// (spans of single orbits), so those are computed and closed under sums.
pub fn invariant_subreps(n: usize) -> Result<Vec<Subspace>> {
    if !(2..=MAX_DIM).contains(&n) {
        return Err(Error::InvalidArgument(format!("size {n} not in 2..={MAX_DIM}")));
    }
    let id: u64 = (0..n).map(|i| 1u64 << (i * n + i)).sum();
    // e_{ij} is its own inverse mod 2.
    let gens: Vec<u64> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| id | 1 << (i * n + j)))
        .collect();
    let space = TraceZeroSpace { n };
    let cyclic: HashSet<Subspace> = space
        .elements()
        .into_par_iter()
        .filter(|&v| v != 0)
        .map(|v| {
            let mut s = Subspace::zero();
            s.insert(v);
            let mut queue = VecDeque::from([v]);
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = gf2_mul(n, gf2_mul(n, g, x), g);
                    if s.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
            s
        })
        .collect();
    let mut all: HashSet<Subspace> = HashSet::from([Subspace::zero()]);
    let mut frontier: Vec<Subspace> = vec![Subspace::zero()];
    while let Some(s) = frontier.pop() {
        for c in &cyclic {
            let t = s.sum(c);
            if all.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    let mut out: Vec<Subspace> = all.into_iter().collect();
    out.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// One linear equation over GF(2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Equation {
    pub coeffs: u64,
    pub rhs: bool,
    pub label: String,
}

impl Gf2Equation {
    pub fn holds(&self, x: &[bool]) -> bool {
        let mut acc = false;
        for (i, &xi) in x.iter().enumerate() {
            if (self.coeffs >> i) & 1 == 1 {
                acc ^= xi;
            }
        }
        acc == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2System {
    pub vars: usize,
    pub equations: Vec<Gf2Equation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gf2Solution {
    Feasible(Vec<bool>),
    /// The listed equations sum to `0 = 1`.
    Infeasible { combination: Vec<usize> },
}

impl Gf2System {
    pub fn solve(&self) -> Gf2Solution {
        let m = self.equations.len();
        let words = m.div_ceil(64).max(1);
        let mut rows: Vec<(u64, bool, Vec<u64>)> = self
            .equations
            .iter()
            .enumerate()
            .map(|(k, e)| {
                let mut tag = vec![0u64; words];
                tag[k / 64] |= 1 << (k % 64);
                (e.coeffs, e.rhs, tag)
            })
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for col in 0..self.vars {
            let Some(p) = (r..m).find(|&i| (rows[i].0 >> col) & 1 == 1) else {
                continue;
            };
            rows.swap(r, p);
            let (pc, pr, pt) = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && (row.0 >> col) & 1 == 1 {
                    row.0 ^= pc;
                    row.1 ^= pr;
                    for (a, b) in row.2.iter_mut().zip(&pt) {
                        *a ^= *b;
                    }
                }
            }
            pivots.push((r, col));
            r += 1;
        }
        if let Some(bad) = rows[r..].iter().find(|row| row.0 == 0 && row.1) {
            let combination = (0..m)
                .filter(|&k| (bad.2[k / 64] >> (k % 64)) & 1 == 1)
                .collect();
            return Gf2Solution::Infeasible { combination };
        }
        let mut x = vec![false; self.vars];
        for &(row, col) in &pivots {
            x[col] = rows[row].1;
        }
        Gf2Solution::Feasible(x)
    }

    /// Checks that the listed equations really sum to `0 = 1`.
    pub fn verify_certificate(&self, combination: &[usize]) -> bool {
        let mut c = 0u64;
        let mut r = false;
        for &k in combination {
            match self.equations.get(k) {
                Some(e) => {
                    c ^= e.coeffs;
                    r ^= e.rhs;
                }
                None => return false,
            }
        }
        c == 0 && r
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObstructionResult {
    Infeasible {
        system: Gf2System,
        combination: Vec<usize>,
        /// Solves every equation except the trace condition.
        witness: Vec<bool>,
        /// Equations the witness violates (exactly the trace condition).
        violated: Vec<usize>,
    },
    Feasible(Vec<bool>),
    Rejected(String),
}

/// The diagonal parities `d_1..d_n` of a would-be lift of `e_{12}` must satisfy
/// `d_1 + d_2 = 1`, `d_u + d_v = 0` for distinct `u, v` outside `{1, 2}`, and
/// `Σ d = 0`. For even `n >= 6` this has no solution.
pub fn split_obstruction(n: usize) -> ObstructionResult {
    if n < 6 || n % 2 == 1 {
        return ObstructionResult::Rejected(format!(
            "size {n}: the parity system needs even n >= 6"
        ));
    }
    if n > 64 {
        return ObstructionResult::Rejected(format!("size {n} exceeds 64 variables"));
    }
    let bit = |i: usize| 1u64 << (i - 1);
    let mut eqs = vec![Gf2Equation {
        coeffs: bit(1) | bit(2),
        rhs: true,
        label: "d1 + d2 = 1".into(),
    }];
    for u in 3..=n {
        for v in u + 1..=n {
            eqs.push(Gf2Equation {
                coeffs: bit(u) | bit(v),
                rhs: false,
                label: format!("d{u} + d{v} = 0"),
            });
        }
    }
    let trace = eqs.len();
    eqs.push(Gf2Equation {
        coeffs: (1..=n).map(bit).sum(),
        rhs: false,
        label: "trace = 0".into(),
    });
    let system = Gf2System {
        vars: n,
        equations: eqs,
    };
    match system.solve() {
        Gf2Solution::Feasible(x) => ObstructionResult::Feasible(x),
        Gf2Solution::Infeasible { combination } => {
            let relaxed = Gf2System {
                vars: n,
                equations: system.equations[..trace].to_vec(),
            };
            let witness = match relaxed.solve() {
                Gf2Solution::Feasible(x) => x,
                Gf2Solution::Infeasible { .. } => Vec::new(),
            };
            let violated = system
                .equations
                .iter()
                .enumerate()
                .filter(|(_, e)| !witness.is_empty() && !e.holds(&witness))
                .map(|(k, _)| k)
                .collect();
            ObstructionResult::Infeasible {
                system,
                combination,
                witness,
                violated,
            }
        }
    }
}

/// Order of the kernel of `SL_n(Z/modulus) -> SL_n(Z/level)`, counted
/// directly over the matrices `I + level*A` without enumerating the group.
pub fn reduction_kernel_order(n: usize, modulus: u64, level: u64) -> Result<usize> {
    if level == 0 || !modulus.is_multiple_of(level) || !(1..=MAX_DIM).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "need level | modulus and 1 <= n <= {MAX_DIM}, got n={n}, modulus={modulus}, level={level}"
        )));
    }
    let q = modulus / level;
    let cells = n * n;
    let total = (q as usize)
        .checked_pow(cells as u32)
        .filter(|&t| t <= 50_000_000)
        .ok_or_else(|| Error::InvalidArgument("kernel too large to count".into()))?;
    let count = (0..total)
        .into_par_iter()
        .filter(|&code| {
            let mut c = code;
            let mut e = vec![0i64; cells];
            for (k, slot) in e.iter_mut().enumerate() {
                let a = (c % q as usize) as i64;
                c /= q as usize;
                *slot = a * level as i64 + i64::from(k % (n + 1) == 0);
            }
            PackedMatrix::new(n, modulus, &e).map(|m| m.det() == 1).unwrap_or(false)
        })
        .count();
    Ok(count)
}

/// `((k, r), closure order, equals the kernel)` for one elementary power.
pub type ClosureRow = ((usize, usize), usize, bool);

/// For every off-diagonal `(k, r)`, the normal closure of `e_{k,r}^level` in
/// `SL_n(Z/modulus)` and whether it equals the level kernel: all members
/// reduce to the identity and the orders agree.
pub fn closure_matches_kernel(n: usize, modulus: u64, level: u64, cap: usize) -> Result<Vec<ClosureRow>> {
    let kernel = reduction_kernel_order(n, modulus, level)?;
    let ambient = sl_generators(n, modulus)?;
    let mut out = Vec::new();
    for k in 1..=n {
        for r in 1..=n {
            if k == r {
                continue;
            }
            let seed = PackedMatrix::elementary(n, modulus, k, r, level as i64)?;
            let h = normal_closure_in(&[seed], &ambient, &[], cap)?;
            let inside = h
                .elements()
                .iter()
                .map(|x| x.reduce(level).map(|y| y.is_identity()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|b| b);
            out.push(((k, r), h.order(), inside && h.order() == kernel));
        }
    }
    Ok(out)
}

/// A projection that does split: `SL_2(Z/3) x {±1}` embedded block-diagonally
/// in `GL_3(Z/3)`, projecting onto the upper `2 x 2` block. The lifts are
/// chosen with a `-1` corner so the search has to move through the kernel.
pub fn sanity_splitting() -> Result<SplitResult> {
    let a2 = PackedMatrix::parse(3, "1 1; 0 1")?;
    let b2 = PackedMatrix::parse(3, "0 2; 1 0")?;
    let target = FiniteGroupTable::enumerate(&[a2, b2], DEFAULT_CAP)?;
    let lift_a = PackedMatrix::parse(3, "1 1 0; 0 1 0; 0 0 2")?;
    let lift_b = PackedMatrix::parse(3, "0 2 0; 1 0 0; 0 0 2")?;
    let kernel = [
        PackedMatrix::identity(3, 3)?,
        PackedMatrix::parse(3, "1 0 0; 0 1 0; 0 0 2")?,
    ];
    let cap = target.order();
    Ok(splitting_search(
        &lift_a,
        &lift_b,
        &kernel,
        target.order(),
        a2.order(cap).unwrap_or(0),
        b2.order(cap).unwrap_or(0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = PackedMatrix::parse(4, "1 2 3; 0 1 1; 2 0 1").unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let sing = PackedMatrix::parse(4, "2 0; 0 1").unwrap();
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn sl2_mod3() {
        let t = FiniteGroupTable::sl(2, 3, DEFAULT_CAP).unwrap();
        assert_eq!(t.order(), 24);
        let z = t.center();
        assert_eq!(z.len(), 2);
        assert!(z.contains(&PackedMatrix::parse(3, "2 0; 0 2").unwrap()));
        let q = t.quotient_by_center(DEFAULT_CAP).unwrap();
        assert_eq!(q.order(), 12);
        // PSL_2(3) ≅ A_4 is not simple.
        assert!(!q.is_simple());
    }

    #[test]
    fn enumeration_cap() {
        assert_eq!(
            FiniteGroupTable::sl(3, 3, 100).unwrap_err(),
            Error::EnumerationCap(100)
        );
    }

    #[test]
    fn gf2_solver_certificates() {
        let sys = Gf2System {
            vars: 2,
            equations: vec![
                Gf2Equation { coeffs: 0b11, rhs: true, label: "a".into() },
                Gf2Equation { coeffs: 0b01, rhs: false, label: "b".into() },
                Gf2Equation { coeffs: 0b10, rhs: false, label: "c".into() },
            ],
        };
        match sys.solve() {
            Gf2Solution::Infeasible { combination } => {
                assert!(sys.verify_certificate(&combination));
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn obstruction_rejects_small_and_odd() {
        assert!(matches!(split_obstruction(4), ObstructionResult::Rejected(_)));
        assert!(matches!(split_obstruction(7), ObstructionResult::Rejected(_)));
    }

    #[test]
    fn subspace_echelon() {
        let mut s = Subspace::zero();
        assert!(s.insert(0b110));
        assert!(s.insert(0b011));
        assert!(!s.insert(0b101));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(0b101));
    }
}
