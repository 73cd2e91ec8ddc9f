//! Integer matrices of abelianized endomorphisms and their reductions.

use std::fmt;

use crate::endo::Endo;
use crate::error::{Error, Result};

/// Square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

/// Square matrix with entries in `Z/modulus`, row-major, entries in `0..modulus`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ResidueMatrix {
    n: usize,
    modulus: u64,
    data: Vec<u64>,
}

impl IntMatrix {
    pub fn zero(n: usize) -> IntMatrix {
        IntMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zero(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<IntMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix must be square".into()));
        }
        Ok(IntMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// `I + power * E_{k,r}` (1-based, `k != r`).
    pub fn elementary(k: usize, r: usize, power: i64, n: usize) -> Result<IntMatrix> {
        if k == r || k == 0 || r == 0 || k > n || r > n {
            return Err(Error::InvalidArgument(format!(
                "elementary({k},{r}) invalid for size {n}"
            )));
        }
        let mut m = IntMatrix::identity(n);
        m.data[(k - 1) * n + (r - 1)] = power;
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.data[row * self.n + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).map(<[i64]>::to_vec).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        let mut t = IntMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::RankMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let n = self.n;
        let mut out = IntMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: i64 = 0;
                for k in 0..n {
                    let p = self.data[i * n + k]
                        .checked_mul(other.data[k * n + j])
                        .ok_or(Error::Overflow("matrix product"))?;
                    acc = acc.checked_add(p).ok_or(Error::Overflow("matrix product"))?;
                }
                out.data[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    /// Fraction-free Gaussian elimination with `i128` intermediates.
    pub fn det(&self) -> Result<i64> {
        let n = self.n;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| i128::from(x)).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                    return Ok(0);
                };
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                for j in k + 1..n {
                    let t1 = a[i * n + j]
                        .checked_mul(pivot)
                        .ok_or(Error::Overflow("determinant"))?;
                    let t2 = a[i * n + k]
                        .checked_mul(a[k * n + j])
                        .ok_or(Error::Overflow("determinant"))?;
                    a[i * n + j] = t1
                        .checked_sub(t2)
                        .ok_or(Error::Overflow("determinant"))?
                        / prev;
                }
                a[i * n + k] = 0;
            }
            prev = pivot;
        }
        let d = sign * a[n * n - 1];
        i64::try_from(d).map_err(|_| Error::Overflow("determinant"))
    }

    pub fn mod_reduce(&self, modulus: u64) -> Result<ResidueMatrix> {
        mod_reduce(self, modulus)
    }
}

impl fmt::Display for IntMatrix {
    /// `[1 0; 0 1]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

impl ResidueMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.data[row * self.n + col]
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| self.get(i, j) == u64::from(i == j) % self.modulus)
        })
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "] mod {}", self.modulus)
    }
}

/// Entry `(i, j)` is the exponent sum of `x_i` in `f(x_j)`, so composition of
/// endomorphisms maps to matrix product in the same order.
pub fn abelianize(f: &Endo) -> IntMatrix {
    let n = f.rank();
    let mut m = IntMatrix::zero(n);
    for j in 0..n {
        for &l in f.images()[j].letters() {
            let i = l.unsigned_abs() as usize - 1;
            m.data[i * n + j] += if l > 0 { 1 } else { -1 };
        }
    }
    m
}

pub fn mod_reduce(m: &IntMatrix, modulus: u64) -> Result<ResidueMatrix> {
    if modulus < 2 {
        return Err(Error::InvalidArgument(format!("modulus {modulus} < 2")));
    }
    let md = i128::from(modulus);
    let data = m
        .data
        .iter()
        .map(|&x| (i128::from(x).rem_euclid(md)) as u64)
        .collect();
    Ok(ResidueMatrix {
        n: m.n,
        modulus,
        data,
    })
}

/// `m ≡ I (mod level)`.
pub fn congruence_level_member(m: &IntMatrix, level: u64) -> Result<bool> {
    Ok(mod_reduce(m, level)?.is_identity())
}

/// True iff `f` acts trivially on the abelianization.
pub fn is_torelli(f: &Endo) -> bool {
    abelianize(f).is_identity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::NamedGenerator;
    use crate::word::Word;

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
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
            .sum()
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let rows = vec![
            vec![2, -1, 0, 3],
            vec![0, 0, 4, 1],
            vec![1, 5, -2, 0],
            vec![3, 0, 1, 1],
        ];
        let m = IntMatrix::from_rows(rows.clone()).unwrap();
        assert_eq!(m.det().unwrap(), cofactor_det(&rows));
    }

    #[test]
    fn det_with_zero_pivot() {
        let m = IntMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(m.det().unwrap(), -1);
        let s = IntMatrix::from_rows(vec![vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(s.det().unwrap(), 0);
    }

    #[test]
    fn transvection_matrix() {
        let l = Endo::named(NamedGenerator::L(1, 3), 3).unwrap();
        // L(1,3): x1 -> x3 x1, so x3 appears once in the image of x1.
        assert_eq!(
            abelianize(&l),
            IntMatrix::elementary(3, 1, 1, 3).unwrap()
        );
    }

    #[test]
    fn abelianization_is_multiplicative() {
        let f = Endo::new(
            3,
            vec![
                Word::parse(3, "x2 x3^-1").unwrap(),
                Word::parse(3, "x1").unwrap(),
                Word::parse(3, "x3 x1").unwrap(),
            ],
        )
        .unwrap();
        let g = Endo::named(NamedGenerator::R(2, 3), 3).unwrap();
        let lhs = abelianize(&f.compose(&g).unwrap());
        let rhs = abelianize(&f).mul(&abelianize(&g)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn residues() {
        let m = IntMatrix::from_rows(vec![vec![1, -3], vec![4, 7]]).unwrap();
        let r = mod_reduce(&m, 3).unwrap();
        assert_eq!(r.to_string(), "[1 0; 1 1] mod 3");
        assert!(congruence_level_member(
            &IntMatrix::elementary(2, 1, 4, 2).unwrap(),
            2
        )
        .unwrap());
        assert!(!congruence_level_member(&IntMatrix::elementary(2, 1, 3, 2).unwrap(), 2).unwrap());
    }
}
