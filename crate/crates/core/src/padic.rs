//! λ-adic expansions and exact π-adic valuations.
//!
//! With λ = ζ_p − 1, the powers `1, λ, …, λ^{p−2}` are a Z-basis of `Z[ζ_p]`
//! (a triangular change of basis from the power basis), and the valuation of
//! `Σ c_j λ^j` is `min_j (j + (p−1)·v_p(c_j))`: the candidate term valuations
//! are pairwise distinct mod p−1, so no cancellation can hide the minimum.
//! That closed form is what `pi_val` computes; the repeated-exact-division
//! oracle it is tested against lives in the test suite.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::ring::{BiCycInt, CycInt};

/// Coefficients of an element written as `Σ c_j λ^j`, j = 0..p−2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaExpansion {
    pub p: u64,
    pub coeffs: Vec<BigInt>,
}

/// π-adic valuation: a nonnegative integer, or infinite for the zero element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PiValuation {
    Finite(u64),
    Infinite,
}

impl PiValuation {
    pub fn at_least(self, k: u64) -> bool {
        match self {
            PiValuation::Finite(v) => v >= k,
            PiValuation::Infinite => true,
        }
    }

    /// The `π^k ∥ x` relation: divides exactly.
    pub fn divides_exactly(self, k: u64) -> bool {
        self == PiValuation::Finite(k)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            PiValuation::Finite(v) => Some(v),
            PiValuation::Infinite => None,
        }
    }
}

/// Valuation of a product is the sum of valuations.
impl std::ops::Add for PiValuation {
    type Output = PiValuation;

    fn add(self, other: PiValuation) -> PiValuation {
        match (self, other) {
            (PiValuation::Finite(a), PiValuation::Finite(b)) => PiValuation::Finite(a + b),
            _ => PiValuation::Infinite,
        }
    }
}

impl std::fmt::Display for PiValuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PiValuation::Finite(v) => write!(f, "{v}"),
            PiValuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Rewrite on the λ-basis: with a(x) the power-basis polynomial, the λ-basis
/// coefficients are those of a(y+1), an in-place Taylor shift. Degrees stay
/// below p−1 throughout, so no cyclotomic reduction is involved.
pub fn to_lambda(a: &CycInt) -> LambdaExpansion {
    let mut w: Vec<BigInt> = a.coeffs().to_vec();
    let n = w.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let t = w[j + 1].clone();
            w[j] += t;
        }
    }
    LambdaExpansion {
        p: a.p(),
        coeffs: w,
    }
}

/// Inverse of `to_lambda`: the Taylor shift back (y → x−1).
pub fn from_lambda(e: &LambdaExpansion) -> CycInt {
    let mut w = e.coeffs.clone();
    let n = w.len();
    for i in 0..n.saturating_sub(1) {
        for j in (i..n - 1).rev() {
            let t = w[j + 1].clone();
            w[j] -= t;
        }
    }
    CycInt::from_coeffs(e.p, w)
}

/// Ordinary p-adic valuation of a rational integer; `None` for zero.
fn vp_int(c: &BigInt, p: u64) -> Option<u64> {
    if c.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0u64;
    let mut c = c.abs();
    loop {
        let (q, r) = c.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        c = q;
    }
}

/// Exact π-adic valuation in `Z[ζ_p]`.
pub fn pi_val(a: &CycInt) -> PiValuation {
    let p = a.p();
    let exp = to_lambda(a);
    let mut best: Option<u64> = None;
    for (j, c) in exp.coeffs.iter().enumerate() {
        if let Some(v) = vp_int(c, p) {
            let cand = j as u64 + (p - 1) * v;
            best = Some(match best {
                Some(b) => b.min(cand),
                None => cand,
            });
        }
    }
    match best {
        Some(v) => PiValuation::Finite(v),
        None => PiValuation::Infinite,
    }
}

/// π-adic valuation in `Z[ζ_p, ζ_q]`: membership in `π^k Z[ζ_{pq}]` is
/// coefficientwise over the ζ_q-power basis, so take the minimum.
pub fn pi_val_bi(x: &BiCycInt) -> PiValuation {
    x.zeta_q_coeffs()
        .iter()
        .map(pi_val)
        .min()
        .unwrap_or(PiValuation::Infinite)
}

/// Truncation modulus for valuation comparisons against thresholds ≤ k:
/// coefficient arithmetic mod `p^M` with `M = ceil((k + p − 2)/(p−1)) + 1`
/// (one power above the minimum, guarding the boundary term).
pub fn truncation_modulus(p: u64, k: u64) -> (u32, BigInt) {
    let m = ((k + p - 2).div_ceil(p - 1) + 1) as u32;
    (m, BigInt::from(p).pow(m))
}

/// `a^e` with all coefficient arithmetic mod `p^M`; valid for any subsequent
/// `pi_val` comparison against thresholds ≤ k.
pub fn truncated_pow_mod(a: &CycInt, e: u64, k: u64) -> CycInt {
    assert!(k >= 1);
    let p = a.p();
    let (_, modulus) = truncation_modulus(p, k);
    if let Some(m64) = modulus.to_u64() {
        return pow_mod_u64_cyc(a, e, m64);
    }
    let mut acc = CycInt::one(p).reduce_coeffs_mod(&modulus);
    let mut base = a.reduce_coeffs_mod(&modulus);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).reduce_coeffs_mod(&modulus);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base).reduce_coeffs_mod(&modulus);
        }
    }
    acc
}

/// Bicyclotomic analogue of [`truncated_pow_mod`].
pub fn truncated_pow_mod_bi(x: &BiCycInt, e: u64, k: u64) -> BiCycInt {
    assert!(k >= 1);
    let p = x.p();
    let (_, modulus) = truncation_modulus(p, k);
    if let Some(m64) = modulus.to_u64() {
        return GridU64::from_bi(x, m64).pow(e).to_bi();
    }
    let mut acc = BiCycInt::one(p, x.q());
    let mut base = x.reduce_coeffs_mod(&modulus);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).reduce_coeffs_mod(&modulus);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base).reduce_coeffs_mod(&modulus);
        }
    }
    acc
}

/// `a mod p^M` with coefficients in machine words; the dense fast path that
/// keeps large truncated powers cheap.
fn pow_mod_u64_cyc(a: &CycInt, e: u64, m: u64) -> CycInt {
    let p = a.p() as usize;
    let to_u64 = |x: &CycInt| -> Vec<u64> {
        x.coeffs()
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(m)).to_u64().unwrap())
            .collect()
    };
    let mul = |x: &[u64], y: &[u64]| -> Vec<u64> {
        let mut red = vec![0u64; p];
        for (i, &ci) in x.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            for (j, &cj) in y.iter().enumerate() {
                if cj == 0 {
                    continue;
                }
                let k = (i + j) % p;
                red[k] = ((red[k] as u128 + ci as u128 * cj as u128) % m as u128) as u64;
            }
        }
        let top = red.pop().unwrap();
        for c in red.iter_mut() {
            *c = ((*c as u128 + m as u128 - top as u128) % m as u128) as u64;
        }
        red
    };
    let mut acc = {
        let mut one = vec![0u64; p - 1];
        one[0] = 1 % m;
        one
    };
    let mut base = to_u64(a);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    CycInt::from_coeffs(a.p(), acc.into_iter().map(BigInt::from).collect())
}

/// Dense (p−1)(q−1) grid over `Z/p^M` used for truncated bicyclotomic powers.
struct GridU64 {
    p: u64,
    q: u64,
    m: u64,
    /// cells[k][j], k over ζ_q exponents, j over ζ_p exponents
    cells: Vec<u64>,
}

impl GridU64 {
    fn from_bi(x: &BiCycInt, m: u64) -> Self {
        let (p, q) = (x.p(), x.q());
        let pm = (p - 1) as usize;
        let mut cells = vec![0u64; pm * (q - 1) as usize];
        for (k, col) in x.zeta_q_coeffs().iter().enumerate() {
            for (j, c) in col.coeffs().iter().enumerate() {
                cells[k * pm + j] = c.mod_floor(&BigInt::from(m)).to_u64().unwrap();
            }
        }
        GridU64 { p, q, m, cells }
    }

    fn to_bi(&self) -> BiCycInt {
        let (p, q) = (self.p as usize, self.q as usize);
        let mut grid = vec![vec![BigInt::zero(); p]; q];
        for k in 0..q - 1 {
            for j in 0..p - 1 {
                grid[k][j] = BigInt::from(self.cells[k * (p - 1) + j]);
            }
        }
        BiCycInt::from_redundant_grid(self.p, self.q, grid)
    }

    fn one(p: u64, q: u64, m: u64) -> Self {
        let mut cells = vec![0u64; ((p - 1) * (q - 1)) as usize];
        cells[0] = 1 % m;
        GridU64 { p, q, m, cells }
    }

    fn mul(&self, other: &GridU64) -> GridU64 {
        let (p, q, m) = (self.p as usize, self.q as usize, self.m as u128);
        let pm = p - 1;
        let mut red = vec![0u64; p * q];
        let nonzero = |g: &GridU64| -> Vec<(usize, usize, u64)> {
            let mut v = Vec::new();
            for k in 0..q - 1 {
                for j in 0..pm {
                    let c = g.cells[k * pm + j];
                    if c != 0 {
                        v.push((k, j, c));
                    }
                }
            }
            v
        };
        let a = nonzero(self);
        let b = nonzero(other);
        for &(k1, j1, c1) in &a {
            for &(k2, j2, c2) in &b {
                let cell = &mut red[((k1 + k2) % q) * p + (j1 + j2) % p];
                *cell = ((*cell as u128 + c1 as u128 * c2 as u128) % m) as u64;
            }
        }
        // reduce ζ_p^{p−1}, then ζ_q^{q−1}
        let mut cells = vec![0u64; pm * (q - 1)];
        for k in 0..q {
            let top = red[k * p + p - 1];
            for j in 0..pm {
                red[k * p + j] = ((red[k * p + j] as u128 + m - top as u128) % m) as u64;
            }
        }
        for k in 0..q - 1 {
            for j in 0..pm {
                let topq = red[(q - 1) * p + j];
                cells[k * pm + j] =
                    ((red[k * p + j] as u128 + m - topq as u128) % m) as u64;
            }
        }
        GridU64 {
            p: self.p,
            q: self.q,
            m: self.m,
            cells,
        }
    }

    fn pow(&self, e: u64) -> GridU64 {
        let mut acc = GridU64::one(self.p, self.q, self.m);
        if e == 0 {
            return acc;
        }
        let mut base = GridU64 {
            p: self.p,
            q: self.q,
            m: self.m,
            cells: self.cells.clone(),
        };
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
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn cyc(p: u64, coeffs: &[i64]) -> CycInt {
        CycInt::from_coeffs(p, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn lambda_expansion_basics() {
        let p = 7;
        let l = to_lambda(&CycInt::lambda(p));
        assert_eq!(l.coeffs[1], BigInt::one());
        assert!(l.coeffs.iter().enumerate().all(|(j, c)| j == 1 || c.is_zero()));
        // ζ = 1 + λ
        let z = to_lambda(&CycInt::zeta(p));
        assert_eq!(z.coeffs[0], BigInt::one());
        assert_eq!(z.coeffs[1], BigInt::one());
        assert!(z.coeffs[2..].iter().all(Zero::is_zero));
    }

    #[test]
    fn lambda_roundtrip() {
        let a = cyc(11, &[4, -7, 0, 2, 9, -1, 3, 0, 0, 5]);
        assert_eq!(from_lambda(&to_lambda(&a)), a);
        let z = CycInt::zero(11);
        assert_eq!(from_lambda(&to_lambda(&z)), z);
    }

    #[test]
    fn pi_val_basics() {
        assert_eq!(pi_val(&CycInt::lambda(5)), PiValuation::Finite(1));
        // p = unit · λ^{p−1}: total ramification
        for p in [5u64, 7, 11] {
            let pp = CycInt::from_integer(p, BigInt::from(p));
            assert_eq!(pi_val(&pp), PiValuation::Finite(p - 1));
        }
        assert_eq!(pi_val(&CycInt::zero(5)), PiValuation::Infinite);
        assert_eq!(pi_val(&CycInt::one(5)), PiValuation::Finite(0));
    }

    #[test]
    fn pi_val_bi_basics() {
        let l = CycInt::lambda(5).embed(11);
        assert_eq!(pi_val_bi(&l), PiValuation::Finite(1));
        // λ·ζ_q has valuation 1 as well
        let zq = BiCycInt::from_monomials(5, 11, &[(0, 1, 1)]);
        assert_eq!(pi_val_bi(&l.mul(&zq)), PiValuation::Finite(1));
        assert_eq!(pi_val_bi(&BiCycInt::zero(5, 11)), PiValuation::Infinite);
    }

    #[test]
    fn truncated_pow_matches_exact() {
        let a = cyc(5, &[2, 1, -1, 3]);
        for (e, k) in [(1u64, 3u64), (4, 6), (7, 9), (5, 6)] {
            let exact = a.pow(e);
            let trunc = truncated_pow_mod(&a, e, k);
            let (_, modulus) = truncation_modulus(5, k);
            assert_eq!(exact.reduce_coeffs_mod(&modulus), trunc);
        }
    }

    #[test]
    fn truncated_identity_cases() {
        // (1+λ)^p = ζ^p = 1
        let p = 7;
        let zeta = CycInt::zeta(p);
        assert_eq!(truncated_pow_mod(&zeta, p, p + 1), CycInt::one(p));
        // e = 1 returns a mod p^M
        let a = cyc(5, &[900, -1, 2, 0]);
        let (_, modulus) = truncation_modulus(5, 4);
        assert_eq!(truncated_pow_mod(&a, 1, 4), a.reduce_coeffs_mod(&modulus));
    }

    #[test]
    fn truncated_bi_matches_exact() {
        let x = BiCycInt::from_monomials(5, 7, &[(1, 1, 1), (2, 3, -1), (0, 0, 2)]);
        for (e, k) in [(3u64, 4u64), (5, 6), (8, 5)] {
            let exact = x.pow(e);
            let trunc = truncated_pow_mod_bi(&x, e, k);
            let (_, modulus) = truncation_modulus(5, k);
            assert_eq!(exact.reduce_coeffs_mod(&modulus), trunc);
        }
    }

    #[test]
    fn valuation_invariance_under_galois_and_conj() {
        let a = cyc(7, &[7, 14, -7, 0, 21, 7]);
        let v = pi_val(&a);
        assert_eq!(pi_val(&a.conj()), v);
        for t in 2..7 {
            assert_eq!(pi_val(&a.galois(t)), v);
        }
    }
}
