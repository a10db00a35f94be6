use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::normal_form::{hnf, snf, snf_full};
use super::{IntMatrix, LatticeError};
use crate::bigjson::bigint_vec;

/// A sublattice of Z^n, stored by its Hermite basis (columns), so equal
/// lattices compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: IntMatrix,
}

impl Sublattice {
    /// The lattice spanned by the columns of `generators`.
    pub fn from_generators(generators: &IntMatrix) -> Self {
        let h = hnf(generators);
        let nonzero: Vec<usize> = (0..h.cols()).filter(|&j| h.column(j).iter().any(|x| !x.is_zero())).collect();
        Sublattice {
            ambient_rank: generators.rows(),
            basis: h.select_columns(&nonzero),
        }
    }

    pub fn from_vectors(ambient_rank: usize, vectors: &[Vec<BigInt>]) -> Self {
        Self::from_generators(&IntMatrix::from_columns(ambient_rank, vectors))
    }

    pub fn full(n: usize) -> Self {
        Self::from_generators(&IntMatrix::identity(n))
    }

    pub fn zero(n: usize) -> Self {
        Sublattice {
            ambient_rank: n,
            basis: IntMatrix::zeros(n, 0),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.columns()
    }

    fn pivot_row(&self, j: usize) -> usize {
        (0..self.ambient_rank)
            .rev()
            .find(|&i| !self.basis.get(i, j).is_zero())
            .expect("basis column is nonzero")
    }

    /// Integer coordinates of `v` in the stored basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_rank, "vector length mismatch");
        let mut w = v.to_vec();
        let mut x = vec![BigInt::zero(); self.rank()];
        for j in (0..self.rank()).rev() {
            let r = self.pivot_row(j);
            let (q, rem) = w[r].div_rem(self.basis.get(r, j));
            if !rem.is_zero() {
                return None;
            }
            for (i, wi) in w.iter_mut().enumerate().take(r + 1) {
                *wi -= &q * self.basis.get(i, j);
            }
            x[j] = q;
        }
        w.iter().all(Zero::is_zero).then_some(x)
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains(&self, other: &Sublattice) -> bool {
        self.ambient_rank == other.ambient_rank
            && other.basis_vectors().iter().all(|v| self.contains_vector(v))
    }

    /// Canonical representative of the coset `v + L` in Z^n / L.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ambient_rank, "vector length mismatch");
        let mut w = v.to_vec();
        for j in (0..self.rank()).rev() {
            let r = self.pivot_row(j);
            let q = w[r].div_floor(self.basis.get(r, j));
            if q.is_zero() {
                continue;
            }
            for (i, wi) in w.iter_mut().enumerate().take(r + 1) {
                *wi -= &q * self.basis.get(i, j);
            }
        }
        w
    }
}

impl fmt::Display for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (k, v) in self.basis_vectors().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(","))?;
        }
        write!(f, "}} in Z^{}", self.ambient_rank)
    }
}

/// Finite abelian group given by invariant factors `d_1 | d_2 | ...`, each at least 2.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelian {
    #[serde(with = "bigint_vec")]
    elementary_divisors: Vec<BigInt>,
}

impl FiniteAbelian {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Checks the divisibility chain; entries equal to 1 are dropped.
    pub fn from_invariant_factors(factors: Vec<BigInt>) -> Result<Self, LatticeError> {
        let kept: Vec<BigInt> = factors.into_iter().filter(|d| !d.is_one()).collect();
        if let Some(bad) = kept.iter().find(|d| **d < BigInt::from(2)) {
            return Err(LatticeError::BadInvariantFactors(format!("factor {bad} is not >= 2")));
        }
        if kept.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(LatticeError::BadInvariantFactors(
                "factors do not form a divisibility chain".into(),
            ));
        }
        Ok(FiniteAbelian {
            elementary_divisors: kept,
        })
    }

    /// Normalizes any product of cyclic groups `Z/n_1 + Z/n_2 + ...` (each `n_i >= 1`).
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let s = snf(&IntMatrix::diagonal(orders));
        FiniteAbelian {
            elementary_divisors: s.diagonal.into_iter().filter(|d| !d.is_one()).collect(),
        }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.elementary_divisors
    }

    pub fn order(&self) -> BigInt {
        self.elementary_divisors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.elementary_divisors.is_empty()
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.elementary_divisors.len()
    }
}

impl fmt::Display for FiniteAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut i = 0;
        let ds = &self.elementary_divisors;
        while i < ds.len() {
            let run = ds[i..].iter().take_while(|d| **d == ds[i]).count();
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if run == 1 {
                write!(f, "Z/{}", ds[i])?;
            } else {
                write!(f, "(Z/{})^{}", ds[i], run)?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Basis of the rational kernel of `m`, scaled to primitive integer vectors.
pub(crate) fn rational_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| m.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }

    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); cols];
            v[fc] = BigRational::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -a[row][fc].clone();
            }
            let denom = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let ints: Vec<BigInt> = v.iter().map(|x| (x * &denom).to_integer()).collect();
            let g = IntMatrix::content(&ints);
            ints.into_iter().map(|x| x / &g).collect()
        })
        .collect()
}

/// The saturation `(Q L) ∩ Z^n` of a lattice.
///
/// With `U B V = D` in Smith form, the rational span of `B` equals the span of
/// the first `rank` columns of `U^-1`, and those columns extend to a unimodular
/// basis, so they span a saturated lattice.
pub fn saturate(l: &Sublattice) -> Sublattice {
    let n = l.ambient_rank();
    if l.rank() == 0 {
        return Sublattice::zero(n);
    }
    let full = snf_full(l.basis());
    let k = full.diagonal.iter().filter(|d| !d.is_zero()).count();
    let cols: Vec<usize> = (0..k).collect();
    Sublattice::from_generators(&full.u_inv.select_columns(&cols))
}

/// `{v in Z^n : M v = 0}` as a saturated sublattice, via the rational kernel
/// followed by saturation.
pub fn kernel_saturated(m: &IntMatrix) -> Sublattice {
    let n = m.cols();
    let kernel = rational_kernel(m);
    saturate(&Sublattice::from_vectors(n, &kernel))
}

/// Vectors fixed by `rho`: the kernel of `rho - I`.
pub fn fixed_sublattice(rho: &IntMatrix) -> Result<Sublattice, LatticeError> {
    require_square(rho)?;
    Ok(kernel_saturated(&(rho - &IntMatrix::identity(rho.rows()))))
}

/// Structure of the finite quotient `big / small`.
pub fn quotient_structure(big: &Sublattice, small: &Sublattice) -> Result<FiniteAbelian, LatticeError> {
    if big.ambient_rank() != small.ambient_rank() {
        return Err(LatticeError::DimensionMismatch(format!(
            "ambient ranks {} and {}",
            big.ambient_rank(),
            small.ambient_rank()
        )));
    }
    let mut coords = Vec::with_capacity(small.rank());
    for v in small.basis_vectors() {
        coords.push(big.coordinates(&v).ok_or(LatticeError::NotContained)?);
    }
    if big.rank() != small.rank() {
        return Err(LatticeError::InfiniteQuotient {
            big: big.rank(),
            small: small.rank(),
        });
    }
    let change = IntMatrix::from_columns(big.rank(), &coords);
    let s = snf(&change);
    FiniteAbelian::from_invariant_factors(s.diagonal)
}

pub(crate) fn require_square(m: &IntMatrix) -> Result<(), LatticeError> {
    if m.is_square() {
        Ok(())
    } else {
        Err(LatticeError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Checks that `rho` is square with `rho^p = I`.
pub fn check_order(rho: &IntMatrix, p: u64) -> Result<(), LatticeError> {
    require_square(rho)?;
    if p == 0 || rho.pow(p) != IntMatrix::identity(rho.rows()) {
        return Err(LatticeError::NotOrderP { p });
    }
    Ok(())
}

/// Norm map `N = sum_{i<p} rho^i`.
pub fn norm_map(rho: &IntMatrix, p: u64) -> IntMatrix {
    let n = rho.rows();
    let mut acc = IntMatrix::zeros(n, n);
    let mut power = IntMatrix::identity(n);
    for _ in 0..p {
        acc = &acc + &power;
        power = &power * rho;
    }
    acc
}

/// First cohomology `H^1(Z/p; Z^d)` of the action generated by `rho`:
/// `ker N / im(rho - 1)`, computed through Smith form of the inclusion.
pub fn h1_cyclic(rho: &IntMatrix, p: u64) -> Result<FiniteAbelian, LatticeError> {
    check_order(rho, p)?;
    let cocycles = kernel_saturated(&norm_map(rho, p));
    let coboundaries = Sublattice::from_generators(&(rho - &IntMatrix::identity(rho.rows())));
    quotient_structure(&cocycles, &coboundaries)
}
