use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;

use super::OracleError;
use crate::intlattice::{check_order, norm_map, rational_kernel, saturate, FiniteAbelian, IntMatrix, Sublattice};

/// Default cap on the number of cosets enumerated.
pub const DEFAULT_BOUND: u64 = 1_000_000;

/// `H^1(Z/p; Z^d)` by enumerating `Z^1 / (rho - 1)Z^d` element by element.
///
/// Cocycles come from the rational kernel of the norm map, saturated; the
/// quotient is explored breadth-first from 0 by adding cocycle basis vectors,
/// with each vector replaced by its canonical coset representative. The group
/// structure is then read off from the number of elements of each order.
pub fn h1_coset_enum(rho: &IntMatrix, p: u64, bound: u64) -> Result<FiniteAbelian, OracleError> {
    check_order(rho, p)?;
    let d = rho.rows();
    let cocycles = saturate(&Sublattice::from_vectors(d, &rational_kernel(&norm_map(rho, p))));
    let coboundaries = Sublattice::from_generators(&(rho - &IntMatrix::identity(d)));
    let generators = cocycles.basis_vectors();

    let zero = vec![BigInt::zero(); d];
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    let mut elements = vec![zero.clone()];
    let mut queue = VecDeque::from([zero.clone()]);
    seen.insert(zero);
    while let Some(x) = queue.pop_front() {
        for g in &generators {
            let y: Vec<BigInt> = x.iter().zip(g).map(|(a, b)| a + b).collect();
            let y = coboundaries.reduce(&y);
            if seen.contains(&y) {
                continue;
            }
            if elements.len() as u64 >= bound {
                return Err(OracleError::QuotientTooLarge { bound });
            }
            seen.insert(y.clone());
            elements.push(y.clone());
            queue.push_back(y);
        }
    }

    let orders: Vec<u64> = elements
        .iter()
        .map(|x| element_order(x, &coboundaries))
        .collect();
    Ok(structure_from_orders(&orders))
}

fn element_order(x: &[BigInt], lattice: &Sublattice) -> u64 {
    let mut acc = x.to_vec();
    let mut k = 1;
    while acc.iter().any(|c| !c.is_zero()) {
        acc = lattice.reduce(&acc.iter().zip(x).map(|(a, b)| a + b).collect::<Vec<_>>());
        k += 1;
    }
    k
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Finite abelian group determined by the multiset of its element orders.
///
/// For each prime `q`, the number of elements killed by `q^k` is
/// `q^(sum_j min(a_j, k))` where the `q^(a_j)` are the `q`-primary cyclic
/// factors, so consecutive differences of the exponents count the factors of
/// each size.
pub fn structure_from_orders(orders: &[u64]) -> FiniteAbelian {
    let total = orders.len() as u64;
    let mut cyclic = Vec::new();
    for q in prime_factors(total) {
        let mut log_counts = vec![0u32];
        let mut power = 1u64;
        loop {
            power *= q;
            let killed = orders.iter().filter(|&&o| power.is_multiple_of(o)).count() as u64;
            let e = ilog(killed, q);
            if e == *log_counts.last().expect("nonempty") {
                break;
            }
            log_counts.push(e);
        }
        // factors of size >= q^k: log_counts[k] - log_counts[k-1]
        let at_least: Vec<u32> = log_counts.windows(2).map(|w| w[1] - w[0]).collect();
        let mut by_size: BTreeMap<usize, u32> = BTreeMap::new();
        for k in 0..at_least.len() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            by_size.insert(k + 1, at_least[k] - next);
        }
        for (k, count) in by_size {
            for _ in 0..count {
                cyclic.push(BigInt::from(q).pow(k as u32));
            }
        }
    }
    FiniteAbelian::from_cyclic_orders(&cyclic)
}

fn ilog(n: u64, q: u64) -> u32 {
    let mut n = n;
    let mut e = 0;
    while n > 1 {
        debug_assert_eq!(n % q, 0, "count is not a power of {q}");
        n /= q;
        e += 1;
    }
    e
}
