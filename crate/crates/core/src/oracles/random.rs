use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::groupcat::{cyclic_permutation, cyclotomic_companion};
use crate::intlattice::IntMatrix;

/// Irreducible building blocks of an integral `Z/p`-representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Block {
    Trivial,
    Sign,
    Cyclotomic,
    Regular,
}

fn block_matrix(b: Block, p: u64) -> IntMatrix {
    match b {
        Block::Trivial => IntMatrix::identity(1),
        Block::Sign => IntMatrix::from_i64(&[&[-1]]),
        Block::Cyclotomic => cyclotomic_companion(p),
        Block::Regular => cyclic_permutation(p as usize),
    }
}

fn block_size(b: Block, p: u64) -> usize {
    match b {
        Block::Trivial | Block::Sign => 1,
        Block::Cyclotomic => (p - 1) as usize,
        Block::Regular => p as usize,
    }
}

fn direct_sum(blocks: &[IntMatrix]) -> IntMatrix {
    let n = blocks.iter().map(IntMatrix::rows).sum();
    let mut m = IntMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m.set(at + i, at + j, b.get(i, j).clone());
            }
        }
        at += b.rows();
    }
    m
}

/// A block-diagonal matrix of order dividing `p` with at least one
/// nontrivial block and total size at most `max_dim`.
pub fn random_block_sum<R: Rng>(rng: &mut R, p: u64, max_dim: usize) -> IntMatrix {
    let nontrivial: Vec<Block> = if p == 2 {
        vec![Block::Sign, Block::Cyclotomic, Block::Regular]
    } else {
        vec![Block::Cyclotomic, Block::Regular]
    };
    let fitting: Vec<Block> = nontrivial.iter().copied().filter(|&b| block_size(b, p) <= max_dim).collect();
    let first = *fitting.choose(rng).expect("some nontrivial block fits");
    let mut chosen = vec![first];
    let mut used = block_size(first, p);
    let all: Vec<Block> = nontrivial.iter().copied().chain([Block::Trivial]).collect();
    while used < max_dim && rng.gen_bool(0.6) {
        let fits: Vec<Block> = all.iter().copied().filter(|&b| used + block_size(b, p) <= max_dim).collect();
        let Some(&b) = fits.choose(rng) else { break };
        used += block_size(b, p);
        chosen.push(b);
    }
    chosen.shuffle(rng);
    direct_sum(&chosen.iter().map(|&b| block_matrix(b, p)).collect::<Vec<_>>())
}

/// Conjugates `m` by a random product of elementary unimodular matrices.
pub fn random_conjugate<R: Rng>(rng: &mut R, m: &IntMatrix, steps: usize) -> IntMatrix {
    let n = m.rows();
    let mut out = m.clone();
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            out.negate_row(0);
            out.negate_col(0);
        }
        return out;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        match rng.gen_range(0..3) {
            0 => {
                // E = I + c e_i e_j^T: rows i += c row j, then columns j -= c column i
                let c = BigInt::from(*[-2i64, -1, 1, 2].choose(rng).expect("nonempty"));
                out.add_row_multiple(i, j, &c);
                out.add_col_multiple(j, i, &-c);
            }
            1 => {
                out.swap_rows(i, j);
                out.swap_cols(i, j);
            }
            _ => {
                out.negate_row(i);
                out.negate_col(i);
            }
        }
    }
    out
}

/// A random integral matrix of order `p` in dimension at most `max_dim`,
/// together with its block-diagonal model.
pub fn random_order_p_matrix<R: Rng>(rng: &mut R, p: u64, max_dim: usize) -> (IntMatrix, IntMatrix) {
    let model = random_block_sum(rng, p, max_dim);
    let steps = 2 * model.rows();
    (random_conjugate(rng, &model, steps), model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlattice::{check_order, h1_cyclic};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_matrices_have_order_p() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3, 5] {
            for _ in 0..20 {
                let (m, model) = random_order_p_matrix(&mut rng, p, 6);
                assert!(m.rows() <= 6);
                check_order(&m, p).unwrap();
                assert_ne!(m, IntMatrix::identity(m.rows()));
                assert_eq!(h1_cyclic(&m, p).unwrap(), h1_cyclic(&model, p).unwrap());
            }
        }
    }

    #[test]
    fn direct_sum_shape() {
        let m = direct_sum(&[IntMatrix::identity(1), cyclotomic_companion(3)]);
        assert_eq!(m, IntMatrix::from_i64(&[&[1, 0, 0], &[0, 0, -1], &[0, 1, -1]]));
    }
}
