use std::collections::HashMap;

use autfn_core::modgroup::{
    kernel_of_reduction, sl_generators, Gf2Equation, Gf2Solution, Gf2System, PackedMatrix, DEFAULT_CAP,
};
use autfn_core::FiniteGroupTable;
use proptest::prelude::*;

/// `|SL_n(Z/p^k)| = p^((k-1)(n^2-1)) * p^(n(n-1)/2) * prod_{i=2..n} (p^i - 1)`.
fn sl_order_formula(n: u32, p: u64, k: u32) -> u64 {
    let mut o = p.pow((k - 1) * (n * n - 1)) * p.pow(n * (n - 1) / 2);
    for i in 2..=n {
        o *= p.pow(i) - 1;
    }
    o
}

#[test]
fn sl_orders_match_the_formula() {
    let cases: [(usize, u64, u64, u32); 10] = [
        (2, 2, 2, 1),
        (2, 3, 3, 1),
        (2, 4, 2, 2),
        (2, 5, 5, 1),
        (2, 7, 7, 1),
        (2, 8, 2, 3),
        (2, 9, 3, 2),
        (3, 2, 2, 1),
        (3, 3, 3, 1),
        (3, 4, 2, 2),
    ];
    for (n, m, p, k) in cases {
        let t = FiniteGroupTable::sl(n, m, DEFAULT_CAP).unwrap();
        assert_eq!(t.order() as u64, sl_order_formula(n as u32, p, k), "SL({n}, Z/{m})");
        assert!(t.elements().iter().all(|x| x.det() == 1));
    }
}

#[test]
fn enumeration_cap_is_an_error() {
    assert!(FiniteGroupTable::sl(3, 3, 1000).is_err());
}

#[test]
fn normal_closures_are_normal() {
    for (n, m) in [(2, 5), (3, 2), (2, 9)] {
        let g = FiniteGroupTable::sl(n, m, DEFAULT_CAP).unwrap();
        let seed = PackedMatrix::elementary(n, m, 1, 2, m as i64 - 1).unwrap();
        let h = g.normal_closure(&[seed], DEFAULT_CAP).unwrap();
        assert!(h.contains(&seed));
        for gen in sl_generators(n, m).unwrap() {
            let gi = gen.inverse().unwrap();
            for x in h.elements() {
                assert!(h.contains(&x.conjugate_by(&gen, &gi)));
            }
        }
        assert_eq!(g.order() % h.order(), 0);
    }
}

#[test]
fn reduction_image_has_index_of_the_kernel() {
    for (n, m, level) in [(2, 4, 2), (2, 9, 3), (3, 4, 2), (2, 8, 4)] {
        let g = FiniteGroupTable::sl(n, m, DEFAULT_CAP).unwrap();
        let kernel = kernel_of_reduction(&g, level).unwrap();
        let mut image: HashMap<PackedMatrix, usize> = HashMap::new();
        for x in g.elements() {
            *image.entry(x.reduce(level).unwrap()).or_default() += 1;
        }
        assert_eq!(image.len() * kernel.len(), g.order());
        assert!(image.values().all(|&c| c == kernel.len()));
    }
}

#[test]
fn center_cosets_have_equal_size() {
    for (n, m) in [(2, 5), (2, 7), (2, 9), (3, 4)] {
        let g = FiniteGroupTable::sl(n, m, DEFAULT_CAP).unwrap();
        let z = g.center();
        let q = g.quotient_by_center(DEFAULT_CAP).unwrap();
        assert_eq!(q.order() * z.len(), g.order(), "SL({n}, Z/{m})");
        let mut fibres: HashMap<PackedMatrix, usize> = HashMap::new();
        for x in g.elements() {
            *fibres.entry(q.canon(x)).or_default() += 1;
        }
        assert_eq!(fibres.len(), q.order());
        assert!(fibres.values().all(|&c| c == z.len()));
        for c in &z {
            assert!(g.elements().iter().all(|x| g.mul(x, c) == g.mul(c, x)));
        }
    }
}

#[test]
fn small_simple_groups() {
    let psl25 = FiniteGroupTable::sl(2, 5, DEFAULT_CAP).unwrap().quotient_by_center(DEFAULT_CAP).unwrap();
    assert_eq!(psl25.order(), 60);
    assert!(psl25.is_simple());
    let sl25 = FiniteGroupTable::sl(2, 5, DEFAULT_CAP).unwrap();
    assert!(!sl25.is_simple());
    let sl23 = FiniteGroupTable::sl(2, 3, DEFAULT_CAP).unwrap();
    assert!(!sl23.is_simple());
}

#[test]
fn packed_matrix_arithmetic() {
    let a = PackedMatrix::parse(4, "1 2; 3 3").unwrap();
    let ai = a.inverse().unwrap();
    assert!(a.mul(&ai).is_identity());
    assert_eq!(a.det(), 1);
    assert!(PackedMatrix::parse(4, "2 0; 0 2").unwrap().inverse().is_none());
    assert_eq!(PackedMatrix::elementary(3, 4, 2, 1, 2).unwrap().order(10), Some(2));
}

fn system() -> impl Strategy<Value = Gf2System> {
    (1usize..8).prop_flat_map(|vars| {
        prop::collection::vec((0u64..(1 << vars), any::<bool>()), 1..12).prop_map(move |eqs| Gf2System {
            vars,
            equations: eqs
                .into_iter()
                .enumerate()
                .map(|(i, (coeffs, rhs))| Gf2Equation { coeffs, rhs, label: format!("eq{i}") })
                .collect(),
        })
    })
}

fn brute_force_feasible(s: &Gf2System) -> bool {
    (0u64..(1 << s.vars)).any(|bits| {
        let x: Vec<bool> = (0..s.vars).map(|i| (bits >> i) & 1 == 1).collect();
        s.equations.iter().all(|e| e.holds(&x))
    })
}

proptest! {
    #[test]
    fn gf2_solutions_and_certificates_check_out(s in system()) {
        match s.solve() {
            Gf2Solution::Feasible(x) => {
                prop_assert!(s.equations.iter().all(|e| e.holds(&x)));
            }
            Gf2Solution::Infeasible { combination } => {
                prop_assert!(s.verify_certificate(&combination));
                prop_assert!(!brute_force_feasible(&s));
            }
        }
    }
}
