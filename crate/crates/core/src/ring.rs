//! Exact arithmetic in `Z[ζ_p]` and `Z[ζ_p, ζ_q]`.
//!
//! A `CycInt` is stored on the power basis `1, ζ, …, ζ^{p−2}`; any occurrence
//! of `ζ^{p−1}` is eliminated through `ζ^{p−1} = −(1 + ζ + … + ζ^{p−2})`, so
//! ring equality is coefficient equality. `BiCycInt` applies the same
//! reduction in both variables. Multiplication is schoolbook convolution on
//! the redundant exponent range followed by one reduction pass; at desk scale
//! this is plenty and keeps every value exact.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith;

/// Element of `Z[ζ_p]` as canonical coefficients of `1, ζ, …, ζ^{p−2}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    coeffs: Vec<BigInt>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    /// `project_to_cyc` on an element with genuine ζ_q-dependence; carries the
    /// first ζ_q-exponent whose coefficient is nonzero.
    #[error("not in base ring: nonzero coefficient at zeta_q^{0}")]
    NotInBaseRing(usize),
}

impl std::fmt::Debug for CycInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CycInt(p={}, {:?})", self.p, self.coeffs)
    }
}

/// Subtract the redundant `ζ^{p−1}` slot from the rest:
/// `c_{p−1} ζ^{p−1} = −c_{p−1}(1 + ζ + … + ζ^{p−2})`.
fn reduce_once(red: &mut Vec<BigInt>) -> Vec<BigInt> {
    let top = red.pop().expect("redundant vector nonempty");
    if !top.is_zero() {
        for c in red.iter_mut() {
            *c -= &top;
        }
    }
    std::mem::take(red)
}

impl CycInt {
    fn assert_same_p(&self, other: &CycInt) {
        assert_eq!(self.p, other.p, "mixed cyclotomic conductors");
    }

    pub fn zero(p: u64) -> Self {
        assert!(p >= 3 && arith::is_prime_u64(p), "p must be an odd prime");
        CycInt {
            p,
            coeffs: vec![BigInt::zero(); (p - 1) as usize],
        }
    }

    pub fn one(p: u64) -> Self {
        Self::from_integer(p, BigInt::one())
    }

    pub fn from_integer(p: u64, n: BigInt) -> Self {
        let mut x = Self::zero(p);
        x.coeffs[0] = n;
        x
    }

    /// Canonical coefficients, length `p−1` exactly.
    pub fn from_coeffs(p: u64, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), (p - 1) as usize, "need exactly p-1 coefficients");
        assert!(p >= 3 && arith::is_prime_u64(p), "p must be an odd prime");
        CycInt { p, coeffs }
    }

    /// From the redundant basis `1..ζ^{p−1}` (length `p`).
    pub fn from_redundant(p: u64, mut red: Vec<BigInt>) -> Self {
        assert_eq!(red.len(), p as usize);
        let coeffs = reduce_once(&mut red);
        Self::from_coeffs(p, coeffs)
    }

    /// `ζ^e`, any integer exponent.
    pub fn zeta_pow(p: u64, e: i64) -> Self {
        let e = e.rem_euclid(p as i64) as usize;
        let mut red = vec![BigInt::zero(); p as usize];
        red[e] = BigInt::one();
        Self::from_redundant(p, red)
    }

    pub fn zeta(p: u64) -> Self {
        Self::zeta_pow(p, 1)
    }

    /// λ = ζ − 1, the generator of the prime above p.
    pub fn lambda(p: u64) -> Self {
        let mut x = Self::zeta(p);
        x.coeffs[0] -= 1;
        x
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &CycInt) -> CycInt {
        self.assert_same_p(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycInt { p: self.p, coeffs }
    }

    pub fn sub(&self, other: &CycInt) -> CycInt {
        self.assert_same_p(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CycInt { p: self.p, coeffs }
    }

    pub fn neg(&self) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add_integer(&self, n: &BigInt) -> CycInt {
        let mut out = self.clone();
        out.coeffs[0] += n;
        out
    }

    pub fn scale(&self, n: &BigInt) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * n).collect(),
        }
    }

    pub fn mul(&self, other: &CycInt) -> CycInt {
        self.assert_same_p(other);
        let p = self.p as usize;
        let mut red = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % p;
                red[k] += a * b;
            }
        }
        Self::from_redundant(self.p, red)
    }

    /// Square-and-multiply.
    pub fn pow(&self, e: u64) -> CycInt {
        let mut acc = Self::one(self.p);
        if e == 0 {
            return acc;
        }
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc
    }

    /// ϖ_t: ζ → ζ^t. `t` must be nonzero mod p; `galois(·, 1)` is the identity.
    pub fn galois(&self, t: u64) -> CycInt {
        let p = self.p;
        let t = t % p;
        assert!(t != 0, "galois index must be coprime to p");
        let mut red = vec![BigInt::zero(); p as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (t as u128 * j as u128 % p as u128) as usize;
            red[k] += c;
        }
        Self::from_redundant(p, red)
    }

    /// Complex conjugation ζ → ζ^{−1}; an involution.
    pub fn conj(&self) -> CycInt {
        self.galois(self.p - 1)
    }

    /// Product of all p−1 Galois conjugates, collapsed to a rational integer.
    pub fn norm(&self) -> BigInt {
        let mut acc = self.clone();
        for t in 2..self.p {
            acc = acc.mul(&self.galois(t));
        }
        acc.as_integer()
            .expect("conjugate product must be rational; reduction bug otherwise")
    }

    /// Exact quotient `self / b` if `b` divides `self` in `Z[ζ_p]`,
    /// `None` otherwise ("not divisible" is a value, not a crash).
    pub fn exact_div(&self, b: &CycInt) -> Option<CycInt> {
        self.assert_same_p(b);
        assert!(!b.is_zero(), "division by zero");
        // self/b = self * prod_{t>=2} galois(b,t) / norm(b); the canonical
        // basis is a Z-basis, so integrality is coefficientwise.
        let mut numer = self.clone();
        for t in 2..self.p {
            numer = numer.mul(&b.galois(t));
        }
        let n = b.norm();
        let mut coeffs = Vec::with_capacity(numer.coeffs.len());
        for c in &numer.coeffs {
            let (q, r) = num_integer::Integer::div_rem(c, &n);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        Some(CycInt { p: self.p, coeffs })
    }

    /// View in `Z[ζ_p, ζ_q]`.
    pub fn embed(&self, q: u64) -> BiCycInt {
        let mut out = BiCycInt::zero(self.p, q);
        out.cols[0] = self.clone();
        out
    }

    /// Reduce every coefficient into `0..m`, for truncated arithmetic.
    pub fn reduce_coeffs_mod(&self, m: &BigInt) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| num_integer::Integer::mod_floor(c, m))
                .collect(),
        }
    }
}

/// Element of `Z[ζ_p, ζ_q]`, stored as the ζ_q-coefficient view: `cols[k]` is
/// the `CycInt` coefficient of `ζ_q^k`, k = 0..q−2. The view round-trips
/// losslessly because `1, ζ_q, …, ζ_q^{q−2}` is a module basis over `Z[ζ_p]`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiCycInt {
    p: u64,
    q: u64,
    cols: Vec<CycInt>,
}

impl std::fmt::Debug for BiCycInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BiCycInt(p={}, q={})", self.p, self.q)
    }
}

impl BiCycInt {
    fn assert_same(&self, other: &BiCycInt) {
        assert!(
            self.p == other.p && self.q == other.q,
            "mixed cyclotomic conductors"
        );
    }

    pub fn zero(p: u64, q: u64) -> Self {
        assert!(q >= 3 && arith::is_prime_u64(q), "q must be an odd prime");
        assert_ne!(p, q, "p and q must be distinct");
        BiCycInt {
            p,
            q,
            cols: vec![CycInt::zero(p); (q - 1) as usize],
        }
    }

    pub fn one(p: u64, q: u64) -> Self {
        CycInt::one(p).embed(q)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Build from monomials `ζ_p^{ep} ζ_q^{eq}` with multiplicities.
    pub fn from_monomials(p: u64, q: u64, terms: &[(u64, u64, i64)]) -> Self {
        // accumulate on the redundant (p × q) grid, then reduce both variables
        let mut grid = vec![vec![BigInt::zero(); p as usize]; q as usize];
        for &(ep, eq, c) in terms {
            grid[(eq % q) as usize][(ep % p) as usize] += c;
        }
        Self::from_redundant_grid(p, q, grid)
    }

    /// `grid[k][j]` = coefficient of `ζ_p^j ζ_q^k`, j = 0..p−1, k = 0..q−1.
    pub fn from_redundant_grid(p: u64, q: u64, mut grid: Vec<Vec<BigInt>>) -> Self {
        assert_eq!(grid.len(), q as usize);
        let top_q = grid.pop().expect("grid nonempty");
        let cols = grid
            .into_iter()
            .map(|mut row| {
                for (j, t) in row.iter_mut().zip(&top_q) {
                    *j -= t;
                }
                CycInt::from_redundant(p, row)
            })
            .collect();
        BiCycInt { p, q, cols }
    }

    /// The ζ_q-coefficient view.
    pub fn zeta_q_coeffs(&self) -> &[CycInt] {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(CycInt::is_zero)
    }

    pub fn add(&self, other: &BiCycInt) -> BiCycInt {
        self.assert_same(other);
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| a.add(b))
            .collect();
        BiCycInt {
            p: self.p,
            q: self.q,
            cols,
        }
    }

    pub fn sub(&self, other: &BiCycInt) -> BiCycInt {
        self.assert_same(other);
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| a.sub(b))
            .collect();
        BiCycInt {
            p: self.p,
            q: self.q,
            cols,
        }
    }

    pub fn neg(&self) -> BiCycInt {
        BiCycInt {
            p: self.p,
            q: self.q,
            cols: self.cols.iter().map(CycInt::neg).collect(),
        }
    }

    pub fn add_integer(&self, n: &BigInt) -> BiCycInt {
        let mut out = self.clone();
        out.cols[0] = out.cols[0].add_integer(n);
        out
    }

    pub fn scale(&self, n: &BigInt) -> BiCycInt {
        BiCycInt {
            p: self.p,
            q: self.q,
            cols: self.cols.iter().map(|c| c.scale(n)).collect(),
        }
    }

    /// Multiply by a `Z[ζ_p]` scalar.
    pub fn scale_cyc(&self, a: &CycInt) -> BiCycInt {
        BiCycInt {
            p: self.p,
            q: self.q,
            cols: self.cols.iter().map(|c| c.mul(a)).collect(),
        }
    }

    pub fn mul(&self, other: &BiCycInt) -> BiCycInt {
        self.assert_same(other);
        let (p, q) = (self.p as usize, self.q as usize);
        let mut grid = vec![vec![BigInt::zero(); p]; q];
        let nonzero = |x: &BiCycInt| {
            let mut v = Vec::new();
            for (k, col) in x.cols.iter().enumerate() {
                for (j, c) in col.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        v.push((k, j, c.clone()));
                    }
                }
            }
            v
        };
        let a = nonzero(self);
        let b = nonzero(other);
        for (k1, j1, c1) in &a {
            for (k2, j2, c2) in &b {
                grid[(k1 + k2) % q][(j1 + j2) % p] += c1 * c2;
            }
        }
        Self::from_redundant_grid(self.p, self.q, grid)
    }

    pub fn pow(&self, e: u64) -> BiCycInt {
        let mut acc = Self::one(self.p, self.q);
        if e == 0 {
            return acc;
        }
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc
    }

    /// ϖ_t on ζ_p, fixing ζ_q.
    pub fn galois_p(&self, t: u64) -> BiCycInt {
        BiCycInt {
            p: self.p,
            q: self.q,
            cols: self.cols.iter().map(|c| c.galois(t)).collect(),
        }
    }

    /// ζ_q → ζ_q^t, fixing ζ_p. `t` must be nonzero mod q.
    pub fn galois_q_raw(&self, t: u64) -> BiCycInt {
        let q = self.q;
        let t = t % q;
        assert!(t != 0, "galois index must be coprime to q");
        let mut grid = vec![vec![BigInt::zero(); self.p as usize]; q as usize];
        for (k, col) in self.cols.iter().enumerate() {
            let k2 = (t as u128 * k as u128 % q as u128) as usize;
            for (j, c) in col.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    grid[k2][j] += c;
                }
            }
        }
        Self::from_redundant_grid(self.p, self.q, grid)
    }

    /// τ^s: ζ_q → ζ_q^{u^s}, for `u` a primitive root mod q.
    pub fn galois_q(&self, u: u64, s: u64) -> BiCycInt {
        self.galois_q_raw(arith::pow_mod(u, s % (self.q - 1), self.q))
    }

    pub fn conj_p(&self) -> BiCycInt {
        self.galois_p(self.p - 1)
    }

    /// Full complex conjugation: ζ_p → ζ_p^{−1} and ζ_q → ζ_q^{−1}.
    pub fn conj_both(&self) -> BiCycInt {
        self.galois_p(self.p - 1).galois_q_raw(self.q - 1)
    }

    /// The constant-in-ζ_q part, if every ζ_q-coefficient with k ≥ 1 vanishes.
    pub fn project_to_cyc(&self) -> Result<CycInt, RingError> {
        for (k, col) in self.cols.iter().enumerate().skip(1) {
            if !col.is_zero() {
                return Err(RingError::NotInBaseRing(k));
            }
        }
        Ok(self.cols[0].clone())
    }

    pub fn reduce_coeffs_mod(&self, m: &BigInt) -> BiCycInt {
        BiCycInt {
            p: self.p,
            q: self.q,
            cols: self.cols.iter().map(|c| c.reduce_coeffs_mod(m)).collect(),
        }
    }

    /// Largest absolute coefficient; handy for sanity checks in tests.
    pub fn max_abs_coeff(&self) -> BigInt {
        let mut best = BigInt::zero();
        for col in &self.cols {
            for c in col.coeffs() {
                let a = c.abs();
                if a > best {
                    best = a;
                }
            }
        }
        best
    }
}
