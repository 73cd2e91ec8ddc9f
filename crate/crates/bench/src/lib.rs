//! Inputs shared by the benchmarks.

use autfn_core::{Endo, NamedGenerator, Word};

/// A fixed product of transvections in rank `n` whose images grow with `len`.
pub fn transvection_chain(n: usize, len: usize) -> Endo {
    let mut f = Endo::identity(n);
    for k in 0..len {
        let i = k % n + 1;
        let j = (k + 1) % n + 1;
        let g = if k % 3 == 2 { NamedGenerator::R(i, j) } else { NamedGenerator::L(i, j) };
        f = f.compose(&Endo::named(g, n).unwrap()).unwrap();
    }
    f
}

/// A word of length about `len` that reduces only partially.
pub fn zigzag_word(n: usize, len: usize) -> Word {
    let text: Vec<String> = (0..len)
        .map(|k| {
            let i = k % n + 1;
            if k % 4 == 3 { format!("x{i}^-1") } else { format!("x{i}") }
        })
        .collect();
    Word::parse(n, &text.join(" ")).unwrap()
}
