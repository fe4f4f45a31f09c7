//! Elements of the integral group ring `Z[G_p]`, `G_p = Gal(K_p/Q)` cyclic of
//! order p−1 generated by σ: ζ → ζ^v, and the specific elements the theory
//! runs on: `P(σ) = Σ σ^i v^{−i}`, the exact quotient `Q(σ) = P(σ)(σ−v)/p`
//! with coefficients δ_i, and the inertia-degree-f element S₂.
//!
//! Convention: exponents of σ are reduced mod p−1 with `σ^{p−1} = 1`; powers
//! `v^n` mean the residue lifted to 1..p−1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{self, lift_pow};
use crate::padic;
use crate::report::{CheckReport, Status};
use crate::ring::CycInt;

/// Element of `Z[G_p]`: `coeffs[i]` is the coefficient of σ^i, i = 0..p−2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingEl {
    p: u64,
    v: u64,
    coeffs: Vec<i64>,
}

impl GroupRingEl {
    pub fn new(p: u64, v: u64, coeffs: Vec<i64>) -> Self {
        assert!(arith::is_primitive_root(v, p), "{v} is not a primitive root mod {p}");
        assert_eq!(coeffs.len(), (p - 1) as usize);
        GroupRingEl { p, v, coeffs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn zero(p: u64, v: u64) -> Self {
        Self::new(p, v, vec![0; (p - 1) as usize])
    }

    /// σ − v.
    pub fn sigma_minus_v(p: u64, v: u64) -> Self {
        let mut x = Self::zero(p, v);
        x.coeffs[0] = -(v as i64);
        x.coeffs[1] = 1;
        x
    }

    pub fn add(&self, other: &GroupRingEl) -> GroupRingEl {
        assert!(self.p == other.p && self.v == other.v);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        GroupRingEl { p: self.p, v: self.v, coeffs }
    }

    pub fn scale(&self, n: i64) -> GroupRingEl {
        GroupRingEl {
            p: self.p,
            v: self.v,
            coeffs: self.coeffs.iter().map(|c| c * n).collect(),
        }
    }

    /// Convolution with σ^{p−1} = 1.
    pub fn mul(&self, other: &GroupRingEl) -> GroupRingEl {
        assert!(self.p == other.p && self.v == other.v);
        let n = self.coeffs.len();
        let mut out = vec![0i64; n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if *b == 0 {
                    continue;
                }
                out[(i + j) % n] += a * b;
            }
        }
        GroupRingEl { p: self.p, v: self.v, coeffs: out }
    }

    /// Substitute σ → x and reduce mod n. Serves both the mod-p evaluations
    /// of the regularity criterion and the mod-h annihilator checks.
    pub fn eval_mod(&self, x: &BigInt, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * x + c).mod_floor(n);
        }
        acc
    }
}

/// `P(σ) = Σ_{i=0}^{p−2} σ^i v^{−i}`, coefficients lifted to 1..p−1.
pub fn build_p(p: u64, v: u64) -> GroupRingEl {
    assert!(arith::is_primitive_root(v, p), "{v} is not a primitive root mod {p}");
    let coeffs = (0..p - 1).map(|i| lift_pow(v, -(i as i64), p) as i64).collect();
    GroupRingEl { p, v, coeffs }
}

/// `δ_i = (v^{−(i−1)} − v^{−i}·v)/p`, an integer in (−p, 0] with δ_0 = 0.
pub fn delta(p: u64, v: u64, i: u64) -> i64 {
    assert!(i <= p - 2);
    let a = lift_pow(v, -(i as i64) + 1, p) as i64;
    let b = (lift_pow(v, -(i as i64), p) * v) as i64;
    let num = a - b;
    debug_assert_eq!(num.rem_euclid(p as i64), 0);
    num / p as i64
}

/// `Q(σ) = Σ δ_i σ^i`, the exact quotient `P(σ)(σ−v)/p`.
pub fn build_q(p: u64, v: u64) -> GroupRingEl {
    assert!(arith::is_primitive_root(v, p), "{v} is not a primitive root mod {p}");
    let coeffs = (0..p - 1).map(|i| delta(p, v, i)).collect();
    GroupRingEl { p, v, coeffs }
}

/// `Q₁(σ) = (1−σ)(Σ_{i=0}^{(p−3)/2} δ_i σ^i) + (1−v) σ^{(p−1)/2}`.
pub fn build_q1(p: u64, v: u64) -> GroupRingEl {
    let half = ((p - 1) / 2) as usize;
    let mut low = GroupRingEl::zero(p, v);
    for i in 0..half {
        low.coeffs[i] = delta(p, v, i as u64);
    }
    let mut one_minus_sigma = GroupRingEl::zero(p, v);
    one_minus_sigma.coeffs[0] = 1;
    one_minus_sigma.coeffs[1] = -1;
    let mut shift = GroupRingEl::zero(p, v);
    shift.coeffs[half] = 1 - v as i64;
    one_minus_sigma.mul(&low).add(&shift)
}

/// Exact identity `P(σ)·(σ−v) = p·Q(σ)` in `Z[G_p]`, plus the factorization
/// `Q(σ) = Q₁(σ)·(Σ_{i=0}^{(p−3)/2} σ^i)`. Fail reports carry the first
/// differing σ-exponent.
pub fn verify_pq_identity(p: u64, v: u64) -> CheckReport {
    let report = CheckReport::new("pq_identity").param("p", p).param("v", v);
    let lhs = build_p(p, v).mul(&GroupRingEl::sigma_minus_v(p, v));
    let rhs = build_q(p, v).scale(p as i64);
    if let Some(i) = (0..lhs.coeffs.len()).find(|&i| lhs.coeffs[i] != rhs.coeffs[i]) {
        return report
            .status(Status::Fail)
            .witness("first_differing_index", i)
            .witness("lhs", lhs.coeffs[i])
            .witness("rhs", rhs.coeffs[i]);
    }
    let mut half_sum = GroupRingEl::zero(p, v);
    for i in 0..((p - 1) / 2) as usize {
        half_sum.coeffs[i] = 1;
    }
    let q_factored = build_q1(p, v).mul(&half_sum);
    let q = build_q(p, v);
    if let Some(i) = (0..q.coeffs.len()).find(|&i| q_factored.coeffs[i] != q.coeffs[i]) {
        return report
            .status(Status::Fail)
            .witness("first_differing_index", i)
            .witness("factored", q_factored.coeffs[i])
            .witness("direct", q.coeffs[i]);
    }
    report
        .status(Status::Pass)
        .witness("delta_min", q.coeffs.iter().min().unwrap())
        .witness("coeff_sum_P", build_p(p, v).coeffs.iter().sum::<i64>())
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum S2Error {
    #[error("inertia degree f = 1: use P(σ) instead of S₂")]
    InertiaDegreeOne,
}

/// `S₂ = Σ_{i=0}^{m−1} ((Σ_{j=0}^{f−1} v^{−(i+jm)})/p)·σ^i` for a prime q of
/// inertia degree f > 1, m = (p−1)/f. Every stated quotient is an integer.
pub fn build_s2(p: u64, q: u64, v: u64) -> Result<GroupRingEl, S2Error> {
    let f = arith::multiplicative_order(q % p, p);
    if f == 1 {
        return Err(S2Error::InertiaDegreeOne);
    }
    let m = (p - 1) / f;
    let mut out = GroupRingEl::zero(p, v);
    for i in 0..m {
        let sum: u64 = (0..f).map(|j| lift_pow(v, -((i + j * m) as i64), p)).sum();
        assert_eq!(sum % p, 0, "S2 coefficient not integral; lift bug");
        out.coeffs[i as usize] = (sum / p) as i64;
    }
    Ok(out)
}

/// Apply θ multiplicatively: `a^θ = Π_i galois(a, v^i)^{θ_i}`. All θ
/// coefficients must be nonnegative (split θ first otherwise). With
/// `truncation = Some(k)` every power and product is carried mod `p^M`, valid
/// for π-adic comparisons against thresholds ≤ k.
pub fn apply_multiplicative(a: &CycInt, theta: &GroupRingEl, truncation: Option<u64>) -> CycInt {
    let p = theta.p;
    assert_eq!(a.p(), p);
    assert!(
        theta.coeffs.iter().all(|&c| c >= 0),
        "apply_multiplicative needs nonnegative exponents; split the element first"
    );
    match truncation {
        None => {
            let mut acc = CycInt::one(p);
            for (i, &c) in theta.coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let t = lift_pow(theta.v, i as i64, p);
                acc = acc.mul(&a.galois(t).pow(c as u64));
            }
            acc
        }
        Some(k) => {
            let (_, modulus) = padic::truncation_modulus(p, k);
            let mut acc = CycInt::one(p);
            for (i, &c) in theta.coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let t = lift_pow(theta.v, i as i64, p);
                let factor = padic::truncated_pow_mod(&a.galois(t), c as u64, k);
                acc = acc.mul(&factor).reduce_coeffs_mod(&modulus);
            }
            acc
        }
    }
}

/// Split into nonnegative and negated-negative parts, for callers that need
/// `a^θ` with mixed-sign θ as a cross-multiplied equality.
pub fn split_signs(theta: &GroupRingEl) -> (GroupRingEl, GroupRingEl) {
    let pos = GroupRingEl {
        p: theta.p,
        v: theta.v,
        coeffs: theta.coeffs.iter().map(|&c| c.max(0)).collect(),
    };
    let neg = GroupRingEl {
        p: theta.p,
        v: theta.v,
        coeffs: theta.coeffs.iter().map(|&c| (-c).max(0)).collect(),
    };
    (pos, neg)
}

/// `δ_i = −⌊v^{−i}·v/p⌋`, the integer-part form; agrees with [`delta`].
pub fn delta_floor_form(p: u64, v: u64, i: u64) -> i64 {
    let prod = (lift_pow(v, -(i as i64), p) * v) as i64;
    -Integer::div_floor(&prod, &(p as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn build_p_small() {
        // p=5, v=2: lifts of 2^{-i} are 1, 3, 4, 2
        assert_eq!(build_p(5, 2).coeffs(), &[1, 3, 4, 2]);
        // coeffs[0] = 1 always; Σ coeffs = p(p−1)/2
        for (p, v) in [(5u64, 2u64), (7, 3), (11, 2), (13, 2)] {
            let el = build_p(p, v);
            assert_eq!(el.coeffs()[0], 1);
            assert_eq!(
                el.coeffs().iter().sum::<i64>() as u64,
                p * (p - 1) / 2
            );
        }
    }

    #[test]
    #[should_panic(expected = "primitive root")]
    fn build_p_rejects_non_primitive() {
        build_p(7, 2); // ord(2 mod 7) = 3
    }

    #[test]
    fn delta_values() {
        // δ_0 = 0 for all (p, v)
        for (p, v) in [(5u64, 2u64), (7, 3), (11, 2), (13, 6), (31, 3)] {
            assert_eq!(delta(p, v, 0), 0);
        }
        assert_eq!(build_q(5, 2).coeffs(), &[0, -1, -1, 0]);
        // hand-checked in the b_half derivation: p=7, v=3
        assert_eq!(build_q(7, 3).coeffs(), &[0, -2, -1, -2, 0, -1]);
    }

    #[test]
    fn delta_range_and_reflection() {
        for p in arith::primes_below(101) {
            if p < 5 {
                continue;
            }
            let v = arith::smallest_primitive_root(p);
            for i in 0..=p - 2 {
                let d = delta(p, v, i);
                assert!(-(p as i64) < d && d <= 0, "delta out of range");
                assert_eq!(d, delta_floor_form(p, v, i), "two delta forms disagree");
            }
            // δ_{i+(p−1)/2} = 1 − v − δ_i
            for i in 0..=(p - 3) / 2 {
                assert_eq!(
                    delta(p, v, i + (p - 1) / 2),
                    1 - v as i64 - delta(p, v, i)
                );
            }
        }
    }

    #[test]
    fn pq_identity_small() {
        assert_eq!(verify_pq_identity(5, 2).status, Status::Pass);
        assert_eq!(verify_pq_identity(7, 3).status, Status::Pass);
    }

    #[test]
    fn pq_identity_all_roots_up_to_31() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            for v in arith::primitive_roots(p) {
                assert_eq!(
                    verify_pq_identity(p, v).status,
                    Status::Pass,
                    "P(σ)(σ−v) ≠ pQ(σ) at p={p}, v={v}"
                );
            }
        }
    }

    #[test]
    fn s2_values() {
        // p=5, q=3 has f=4, m=1: single coefficient (1+3+4+2)/5 = 2
        let s2 = build_s2(5, 3, 2).unwrap();
        assert_eq!(s2.coeffs(), &[2, 0, 0, 0]);
        // p=7, q≡−1 mod 7 (f=2), v=3: all-ones on i=0..2
        let s2 = build_s2(7, 13, 3).unwrap();
        assert_eq!(s2.coeffs(), &[1, 1, 1, 0, 0, 0]);
        assert_eq!(build_s2(5, 11, 2), Err(S2Error::InertiaDegreeOne));
    }

    #[test]
    fn s2_integral_up_to_31() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            let v = arith::smallest_primitive_root(p);
            // pick a prime q of each order f | p−1, f > 1
            for q in arith::primes_below(3000) {
                if q == p || q % p == 0 {
                    continue;
                }
                let f = arith::multiplicative_order(q % p, p);
                if f > 1 {
                    // integrality is asserted inside build_s2
                    let s2 = build_s2(p, q, v).unwrap();
                    let m = ((p - 1) / f) as usize;
                    assert!(s2.coeffs()[m..].iter().all(|&c| c == 0));
                    // the residues sum to p(p−1)/2, so Σ S2_i = (p−1)/2:
                    // the would-be l = m congruence can never hold mod p
                    assert_eq!(
                        s2.coeffs().iter().sum::<i64>() as u64,
                        (p - 1) / 2
                    );
                }
            }
        }
    }

    #[test]
    fn apply_multiplicative_cases() {
        let p = 5;
        let v = 2;
        // identity exponent
        let mut id = GroupRingEl::zero(p, v);
        id.coeffs[0] = 1;
        let a = CycInt::from_coeffs(p, vec![3.into(), 1.into(), 0.into(), (-2).into()]);
        assert_eq!(apply_multiplicative(&a, &id, None), a);
        // rational base: n^{P(σ)} = n^{p(p−1)/2}
        let n = CycInt::from_integer(p, BigInt::from(3));
        let expect = BigInt::from(3).pow(10);
        assert_eq!(
            apply_multiplicative(&n, &build_p(p, v), None).as_integer(),
            Some(expect)
        );
        // ζ^{P(σ)} = ζ^{Σ v^i·v^{−i} mod 5} = ζ^4
        let z = CycInt::zeta(p);
        assert_eq!(
            apply_multiplicative(&z, &build_p(p, v), None),
            CycInt::zeta_pow(p, 4)
        );
    }

    #[test]
    #[should_panic(expected = "nonnegative")]
    fn apply_multiplicative_rejects_negative() {
        let q = build_q(5, 2); // has negative coefficients
        apply_multiplicative(&CycInt::one(5), &q, None);
    }

    #[test]
    fn eval_mod_matches_direct_sum() {
        let p = 7;
        let v = 3;
        let q = build_q(p, v);
        let x = BigInt::from(2);
        let n = BigInt::from(7);
        let direct: BigInt = (0..(p - 1) as usize)
            .map(|i| BigInt::from(q.coeffs()[i]) * BigInt::from(2).pow(i as u32))
            .sum();
        assert_eq!(q.eval_mod(&x, &n), num_integer::Integer::mod_floor(&direct, &n));
    }
}
