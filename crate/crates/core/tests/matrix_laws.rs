use autfn_core::{congruence_level_member, mod_reduce, IntMatrix, ResidueMatrix};
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-9i64..=9, n), n)
}

// Cofactor expansion along the first row.
fn cofactor_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * cofactor_det(&minor)
        })
        .sum()
}

fn naive_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn residue_rows(m: &ResidueMatrix) -> Vec<Vec<u64>> {
    (0..m.size()).map(|i| (0..m.size()).map(|j| m.get(i, j)).collect()).collect()
}

fn dims() -> impl Strategy<Value = usize> {
    1usize..=4
}

proptest! {
    #[test]
    fn det_matches_cofactor_expansion(a in dims().prop_flat_map(matrix)) {
        let m = IntMatrix::from_rows(a.clone()).unwrap();
        prop_assert_eq!(m.det().unwrap(), cofactor_det(&a));
    }

    #[test]
    fn det_is_multiplicative((a, b) in dims().prop_flat_map(|n| (matrix(n), matrix(n)))) {
        let ma = IntMatrix::from_rows(a.clone()).unwrap();
        let mb = IntMatrix::from_rows(b.clone()).unwrap();
        let prod = ma.mul(&mb).unwrap();
        prop_assert_eq!(prod.rows(), naive_mul(&a, &b));
        prop_assert_eq!(prod.det().unwrap(), ma.det().unwrap() * mb.det().unwrap());
    }

    #[test]
    fn reduction_commutes_with_products(
        (a, b) in dims().prop_flat_map(|n| (matrix(n), matrix(n))),
        q in 2u64..12,
    ) {
        let ma = IntMatrix::from_rows(a).unwrap();
        let mb = IntMatrix::from_rows(b).unwrap();
        let lhs = residue_rows(&mod_reduce(&ma.mul(&mb).unwrap(), q).unwrap());
        let ra = residue_rows(&mod_reduce(&ma, q).unwrap());
        let rb = residue_rows(&mod_reduce(&mb, q).unwrap());
        let n = ra.len();
        let rhs: Vec<Vec<u64>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| ra[i][k] * rb[k][j]).sum::<u64>() % q).collect())
            .collect();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn residues_are_nonnegative() {
    let m = IntMatrix::from_rows(vec![vec![-1, 5], vec![0, -4]]).unwrap();
    let r = mod_reduce(&m, 3).unwrap();
    assert_eq!(residue_rows(&r), vec![vec![2, 2], vec![0, 2]]);
}

#[test]
fn congruence_levels() {
    let e = IntMatrix::elementary(3, 1, 4, 3).unwrap();
    assert!(congruence_level_member(&e, 2).unwrap());
    assert!(congruence_level_member(&e, 4).unwrap());
    assert!(!congruence_level_member(&e, 3).unwrap());
}

#[test]
fn elementary_rejects_diagonal() {
    assert!(IntMatrix::elementary(2, 2, 1, 3).is_err());
    assert!(IntMatrix::from_rows(vec![vec![1, 2], vec![3]]).is_err());
}
