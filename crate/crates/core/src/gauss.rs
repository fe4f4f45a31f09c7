//! Gauss sums `g(q)` attached to a prime q over q in `Z[ζ_p]`, Jacobi
//! resolvents, the cyclotomic function ψ_{a,b}, the twist Δ(g), and the
//! π-adic structure facts about them.
//!
//! For inertia degree f = 1 (q ≡ 1 mod p) the sum has the explicit resolvent
//! form `g = Σ_i ζ_p^{−iv} ζ_q^{u^{−i}}`. For general f it is the character
//! sum `Σ_x χ(x) ζ_q^{Tr(x)}` over `F_{q^f}` with χ of order p, evaluated by
//! brute-force enumeration of the cyclic group (the enumeration is the
//! discrete log). The character is normalized by `χ(γ^s) = ζ_p^{v·s}`, which
//! makes the two forms literally equal when f = 1; the choice corresponds to
//! fixing one prime ideal above q and is echoed in every report.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::arith::{self, mul_mod, pow_mod};
use crate::padic::{self, PiValuation};
use crate::report::{CheckReport, Status};
use crate::ring::{BiCycInt, CycInt};
use crate::DESK_SCALE_BUDGET;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GaussError {
    #[error("field F_{{{q}^{f}}} has {size} elements, beyond the desk-scale budget")]
    BeyondDeskScale { q: u64, f: u64, size: u128 },
}

/// Explicit representation of `F_{q^f}`: a monic irreducible modulus of
/// degree f over `F_q` (first in counting order) and a generator of the
/// multiplicative group (also first in counting order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldRep {
    pub q: u64,
    pub f: u64,
    /// monic modulus, length f+1, constant term first
    pub modulus: Vec<u64>,
    /// generator of `F_{q^f}^*`, length f
    pub generator: Vec<u64>,
}

/// Everything needed to pin down one Gauss sum.
#[derive(Clone, Debug)]
pub struct GaussSumParams {
    pub p: u64,
    pub q: u64,
    /// primitive root mod q
    pub u: u64,
    /// primitive root mod p
    pub v: u64,
    /// multiplicative order of q mod p
    pub f: u64,
    /// present exactly when f > 1
    pub field_rep: Option<FieldRep>,
}

impl GaussSumParams {
    /// Default conventions: smallest primitive roots for both u and v.
    pub fn new(p: u64, q: u64) -> Result<Self, GaussError> {
        Self::with_roots(
            p,
            q,
            arith::smallest_primitive_root(q),
            arith::smallest_primitive_root(p),
        )
    }

    pub fn with_roots(p: u64, q: u64, u: u64, v: u64) -> Result<Self, GaussError> {
        assert!(arith::is_prime_u64(p) && p >= 3, "p must be an odd prime");
        assert!(arith::is_prime_u64(q) && q >= 3, "q must be an odd prime");
        assert_ne!(p, q);
        assert!(arith::is_primitive_root(u, q), "u not primitive mod q");
        assert!(arith::is_primitive_root(v, p), "v not primitive mod p");
        let f = arith::multiplicative_order(q % p, p);
        let field_rep = if f == 1 {
            None
        } else {
            let size = (q as u128).checked_pow(f as u32).unwrap_or(u128::MAX);
            if size > DESK_SCALE_BUDGET as u128 {
                return Err(GaussError::BeyondDeskScale { q, f, size });
            }
            Some(FieldRep::build(q, f))
        };
        Ok(GaussSumParams {
            p,
            q,
            u,
            v,
            f,
            field_rep,
        })
    }

    /// `q^f`, the size of the residue field.
    pub fn field_size(&self) -> u64 {
        (0..self.f).fold(1u64, |acc, _| acc * self.q)
    }

    pub fn convention_string(&self) -> String {
        match &self.field_rep {
            None => format!("u={},v={}", self.u, self.v),
            Some(rep) => format!(
                "u={},v={},modulus={},generator={}",
                self.u,
                self.v,
                poly_string(&rep.modulus),
                poly_string(&rep.generator)
            ),
        }
    }
}

fn poly_string(c: &[u64]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| match i {
            0 => format!("{a}"),
            1 if a == 1 => "x".to_string(),
            1 => format!("{a}x"),
            _ if a == 1 => format!("x^{i}"),
            _ => format!("{a}x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

// ---- F_{q^f} arithmetic on coefficient vectors (constant term first) ----

fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], q: u64) -> Vec<u64> {
    let f = modulus.len() - 1;
    let mut buf = vec![0u64; 2 * f - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            buf[i + j] = (buf[i + j] + mul_mod(ai, bj, q)) % q;
        }
    }
    for i in (f..buf.len()).rev() {
        let c = buf[i];
        if c == 0 {
            continue;
        }
        buf[i] = 0;
        for j in 0..f {
            let sub = mul_mod(c, modulus[j], q);
            buf[i - f + j] = (buf[i - f + j] + q - sub) % q;
        }
    }
    buf.truncate(f);
    buf
}

fn poly_pow_mod(base: &[u64], mut e: u128, modulus: &[u64], q: u64) -> Vec<u64> {
    let f = modulus.len() - 1;
    let mut acc = vec![0u64; f];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &b, modulus, q);
        }
        e >>= 1;
        if e > 0 {
            b = poly_mul_mod(&b, &b, modulus, q);
        }
    }
    acc
}

fn is_one(a: &[u64]) -> bool {
    a[0] == 1 && a[1..].iter().all(|&c| c == 0)
}

/// gcd(a, modulus) over F_q[x] is a nonzero constant?
fn gcd_with_modulus_is_one(a: &[u64], modulus: &[u64], q: u64) -> bool {
    let trim = |v: &[u64]| -> Vec<u64> {
        let mut v = v.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let mut r0 = trim(modulus);
    let mut r1 = trim(a);
    while !r1.is_empty() {
        // r0 mod r1
        let lead_inv = arith::inv_mod(*r1.last().unwrap(), q);
        while r0.len() >= r1.len() {
            let shift = r0.len() - r1.len();
            let c = mul_mod(*r0.last().unwrap(), lead_inv, q);
            if c != 0 {
                for (i, &m) in r1.iter().enumerate() {
                    r0[shift + i] = (r0[shift + i] + q - mul_mod(c, m, q)) % q;
                }
            }
            r0.pop();
            while r0.last() == Some(&0) {
                r0.pop();
            }
            if r0.len() < r1.len() {
                break;
            }
        }
        std::mem::swap(&mut r0, &mut r1);
    }
    r0.len() == 1
}

impl FieldRep {
    /// First irreducible monic polynomial of degree f in counting order
    /// (digits base q, constant term least significant), then the first
    /// element of full multiplicative order.
    pub fn build(q: u64, f: u64) -> FieldRep {
        assert!(f >= 2);
        let fu = f as usize;
        let modulus = (0u64..)
            .map(|n| {
                let mut c = Vec::with_capacity(fu + 1);
                let mut n = n;
                for _ in 0..fu {
                    c.push(n % q);
                    n /= q;
                }
                c.push(1);
                c
            })
            .find(|c| Self::is_irreducible(c, q))
            .expect("irreducible polynomial of every degree exists");
        let m: u128 = (q as u128).pow(f as u32);
        let group_order = (m - 1) as u64;
        let prime_factors: Vec<u64> = arith::factor(group_order)
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        let generator = (1u64..)
            .map(|n| {
                let mut c = Vec::with_capacity(fu);
                let mut n = n;
                for _ in 0..fu {
                    c.push(n % q);
                    n /= q;
                }
                c
            })
            .find(|c| {
                prime_factors.iter().all(|&ell| {
                    !is_one(&poly_pow_mod(c, (group_order / ell) as u128, &modulus, q))
                })
            })
            .expect("multiplicative group of a finite field is cyclic");
        FieldRep {
            q,
            f,
            modulus,
            generator,
        }
    }

    fn is_irreducible(modulus: &[u64], q: u64) -> bool {
        let f = (modulus.len() - 1) as u64;
        if modulus[0] == 0 {
            return false; // divisible by x
        }
        let x = {
            let mut v = vec![0u64; f as usize];
            v[1] = 1;
            v
        };
        let frob = |elem: &[u64], times: u64| -> Vec<u64> {
            let mut t = elem.to_vec();
            for _ in 0..times {
                t = poly_pow_mod(&t, q as u128, modulus, q);
            }
            t
        };
        // Rabin's test: x^{q^f} ≡ x, and x^{q^{f/ℓ}} − x must be coprime to
        // the modulus at every maximal proper divisor (inequality alone would
        // admit products of coprime small-degree factors).
        for (ell, _) in arith::factor(f) {
            let mut diff = frob(&x, f / ell);
            diff[1] = (diff[1] + q - 1) % q;
            if !gcd_with_modulus_is_one(&diff, modulus, q) {
                return false;
            }
        }
        frob(&x, f) == x
    }

    /// Trace of the multiplication-by-x^j operator, j = 0..f−1; the field
    /// trace of an element is then the matching linear combination.
    fn trace_basis(&self) -> Vec<u64> {
        let f = self.f as usize;
        // powers[i] = x^i mod modulus, i = 0..2f−2
        let mut powers = Vec::with_capacity(2 * f - 1);
        let mut cur = vec![0u64; f];
        cur[0] = 1;
        powers.push(cur.clone());
        let x = {
            let mut v = vec![0u64; f];
            v[1] = 1;
            v
        };
        for _ in 1..2 * f - 1 {
            cur = poly_mul_mod(&cur, &x, &self.modulus, self.q);
            powers.push(cur.clone());
        }
        (0..f)
            .map(|j| {
                let mut t = 0u64;
                for i in 0..f {
                    t = (t + powers[i + j][i]) % self.q;
                }
                t
            })
            .collect()
    }
}

/// The Gauss sum. Explicit resolvent form when f = 1, character sum
/// otherwise; the two agree when f = 1 (see [`gauss_sum_char`]).
pub fn gauss_sum(params: &GaussSumParams) -> BiCycInt {
    if params.f == 1 {
        gauss_sum_explicit(params)
    } else {
        gauss_sum_char(params)
    }
}

/// `g = Σ_{i=0}^{q−2} ζ_p^{−iv} ζ_q^{u^{−i}}`; requires q ≡ 1 mod p.
pub fn gauss_sum_explicit(params: &GaussSumParams) -> BiCycInt {
    assert_eq!(params.f, 1, "explicit form needs q ≡ 1 mod p");
    let (p, q, u, v) = (params.p, params.q, params.u, params.v);
    let u_inv = arith::inv_mod(u, q);
    let mut terms = Vec::with_capacity((q - 1) as usize);
    let mut zq_exp = 1u64; // u^{-i}
    for i in 0..q - 1 {
        let zp_exp = (p - (i % p) * v % p) % p;
        terms.push((zp_exp, zq_exp, 1i64));
        zq_exp = mul_mod(zq_exp, u_inv, q);
    }
    BiCycInt::from_monomials(p, q, &terms)
}

/// `g = Σ_{x ∈ F_{q^f}^*} χ(x) ζ_q^{Tr(x)}` with `χ(γ^s) = ζ_p^{v·s}`,
/// enumerated as powers of the generator.
pub fn gauss_sum_char(params: &GaussSumParams) -> BiCycInt {
    let (p, q, v) = (params.p, params.q, params.v);
    match &params.field_rep {
        None => {
            // F_q itself; the generator is u and the trace is the identity.
            let mut terms = Vec::with_capacity((q - 1) as usize);
            let mut x = 1u64;
            for s in 0..q - 1 {
                terms.push(((s % p) * v % p, x, 1i64));
                x = mul_mod(x, params.u, q);
            }
            BiCycInt::from_monomials(p, q, &terms)
        }
        Some(rep) => {
            let tr = rep.trace_basis();
            let size = params.field_size();
            let mut terms = Vec::with_capacity((size - 1) as usize);
            let mut x = vec![0u64; rep.f as usize];
            x[0] = 1;
            for s in 0..size - 1 {
                let trace: u64 = x
                    .iter()
                    .zip(&tr)
                    .fold(0u64, |acc, (&c, &t)| (acc + mul_mod(c, t, q)) % q);
                terms.push(((s % p) * v % p, trace, 1i64));
                x = poly_mul_mod(&x, &rep.generator, &rep.modulus, q);
            }
            BiCycInt::from_monomials(p, q, &terms)
        }
    }
}

/// Lagrange resolvent `<ζ_p^a, ζ_q> = Σ_{s=0}^{q−2} ζ_p^{a·s} ζ_q^{u^s}`;
/// `gauss_sum = resolvent(v)` when f = 1.
pub fn resolvent(p: u64, q: u64, u: u64, a: i64) -> BiCycInt {
    let a_mod = a.rem_euclid(p as i64) as u64;
    let mut terms = Vec::with_capacity((q - 1) as usize);
    let mut x = 1u64;
    for s in 0..q - 1 {
        terms.push(((s % p) * a_mod % p, x, 1i64));
        x = mul_mod(x, u, q);
    }
    BiCycInt::from_monomials(p, q, &terms)
}

/// Is p a p-th power residue mod q (i.e. `p^{(q−1)/p} ≡ 1 mod q`)?
/// Requires q ≡ 1 mod p.
pub fn p_is_pth_power_mod_q(p: u64, q: u64) -> bool {
    assert_eq!(q % p, 1, "needs q ≡ 1 mod p");
    pow_mod(p % q, (q - 1) / p, q) == 1
}

/// τ: ζ_q → ζ_q^u acts on g by a p-th root of unity: `τ(g) = ζ_p^ρ g`.
/// ρ ≡ −v when f = 1 and ρ = 0 when f > 1; reports the observed ρ.
pub fn verify_tau_eigen(params: &GaussSumParams) -> CheckReport {
    let g = gauss_sum(params);
    let tau_g = g.galois_q(params.u, 1);
    let mut observed = None;
    for rho in 0..params.p {
        if tau_g == g.scale_cyc(&CycInt::zeta_pow(params.p, rho as i64)) {
            observed = Some(rho);
            break;
        }
    }
    let expected = if params.f == 1 {
        (params.p - params.v % params.p) % params.p
    } else {
        0
    };
    let report = CheckReport::new("tau_eigenvalue")
        .param("p", params.p)
        .param("q", params.q)
        .convention("u", params.u)
        .convention("v", params.v)
        .witness("f", params.f)
        .witness("rho_expected", expected);
    match observed {
        Some(rho) => report.witness("rho", rho).verdict(rho == expected),
        None => report.witness("rho", "none").status(Status::Fail),
    }
}

/// π-adic valuation of `g^p + 1` (q ≡ 1 mod p), computed at truncation level
/// k = p+2: comparisons against thresholds ≤ p+1 are certified, so the
/// returned value distinguishes "exactly p" from "at least p+1".
pub fn val_gp_plus_1(params: &GaussSumParams) -> (PiValuation, u64) {
    assert_eq!(params.q % params.p, 1, "needs q ≡ 1 mod p");
    let level = params.p + 2;
    let g = gauss_sum(params);
    let gp1 = padic::truncated_pow_mod_bi(&g, params.p, level).add_integer(&BigInt::one());
    (padic::pi_val_bi(&gp1), level)
}

/// For even f, `g = ±ζ_p^w · q^{f/2}`; reports the sign and w.
pub fn verify_f_even_form(params: &GaussSumParams) -> CheckReport {
    assert!(params.f % 2 == 0, "needs even inertia degree");
    let report = CheckReport::new("f_even_form")
        .param("p", params.p)
        .param("q", params.q)
        .convention("u", params.u)
        .convention("v", params.v)
        .convention("field_rep", params.convention_string())
        .witness("f", params.f);
    let g = gauss_sum(params);
    let g_cyc = match g.project_to_cyc() {
        Ok(x) => x,
        Err(e) => return report.witness("projection_error", e).status(Status::Fail),
    };
    let scale = BigInt::from(params.q).pow((params.f / 2) as u32);
    for w in 0..params.p {
        for sign in [1i64, -1] {
            let cand = CycInt::zeta_pow(params.p, w as i64).scale(&(BigInt::from(sign) * &scale));
            if cand == g_cyc {
                return report
                    .witness("sign", sign)
                    .witness("w", w)
                    .witness("q_pow_f_half", &scale)
                    .status(Status::Pass);
            }
        }
    }
    report
        .witness("form", "no (sign, w) matches")
        .status(Status::Fail)
}

/// Discrete-log table mod q: `ind(i)` is the s with `i ≡ u^s`, s = 0..q−2.
#[derive(Clone, Debug)]
pub struct IndexTable {
    pub q: u64,
    pub u: u64,
    table: Vec<u64>,
}

impl IndexTable {
    pub fn new(q: u64, u: u64) -> Self {
        assert!(arith::is_primitive_root(u, q));
        let mut table = vec![0u64; (q - 1) as usize];
        let mut x = 1u64;
        for s in 0..q - 1 {
            table[(x - 1) as usize] = s;
            x = mul_mod(x, u, q);
        }
        IndexTable { q, u, table }
    }

    pub fn ind(&self, i: u64) -> u64 {
        assert!(i % self.q != 0, "index of 0 is undefined");
        self.table[(i % self.q - 1) as usize]
    }
}

/// The Jacobi cyclotomic function
/// `ψ_{a,b} = Σ_{i=1}^{q−2} ζ_p^{a·ind_u(i) − (a+b)·ind_u(i+1)}`.
pub fn psi(p: u64, q: u64, u: u64, a: i64, b: i64) -> CycInt {
    assert_eq!(q % p, 1, "psi needs q ≡ 1 mod p");
    let pi = p as i64;
    assert!(
        (a % pi) != 0 && (b % pi) != 0 && ((a + b) % pi) != 0,
        "psi needs ab(a+b) nonzero mod p"
    );
    let table = IndexTable::new(q, u);
    let mut red = vec![BigInt::from(0); p as usize];
    for i in 1..=q - 2 {
        let e = (a as i128 * table.ind(i) as i128 - (a + b) as i128 * table.ind(i + 1) as i128)
            .rem_euclid(p as i128) as usize;
        red[e] += 1;
    }
    CycInt::from_redundant(p, red)
}

/// `Δ(g) = σ(g) − (−1)^{v−1} g^v` and its π-adic valuation (exact).
pub fn delta_g(params: &GaussSumParams) -> (BiCycInt, PiValuation) {
    assert_eq!(params.q % params.p, 1, "delta_g needs q ≡ 1 mod p");
    let g = gauss_sum(params);
    let sigma_g = g.galois_p(params.v);
    let gv = g.pow(params.v);
    let delta = if params.v % 2 == 1 {
        // (−1)^{v−1} = 1
        sigma_g.sub(&gv)
    } else {
        sigma_g.add(&gv)
    };
    let val = padic::pi_val_bi(&delta);
    (delta, val)
}

/// Report form of [`delta_g`]: asserts the proved bound v_π(Δ) ≥ 2 and
/// carries the exact valuation as a monitored statistic. The p=5, q=11 case
/// is flagged: the π⁴ divisibility reported in the literature does not hold
/// under the π^k-membership convention this crate adopts (observed value 3
/// for every primitive-root choice), only under a per-prime reading.
pub fn delta_g_report(params: &GaussSumParams) -> CheckReport {
    let (_, val) = delta_g(params);
    let mut report = CheckReport::new("delta_g")
        .param("p", params.p)
        .param("q", params.q)
        .convention("u", params.u)
        .convention("v", params.v)
        .witness("valuation", val)
        .witness("exactly_3", val == PiValuation::Finite(3));
    if (params.p, params.q) == (5, 11) && !val.at_least(4) {
        report = report.witness(
            "convention_note",
            "valuation 4 is reported in the source only per-prime; \
             under pi^k Z[zeta_pq] membership the value is 3",
        );
    }
    report.verdict(val.at_least(2))
}

/// k-th power sum of the ψ exponents mod p. Asserted only for k below the
/// observed level of `ψ ≡ −1 mod π^n`; monitored otherwise.
pub fn power_sum_check(p: u64, q: u64, u: u64, a: i64, b: i64, k: u32) -> CheckReport {
    assert!(k >= 2);
    let table = IndexTable::new(q, u);
    let mut sum = 0u64;
    for i in 1..=q - 2 {
        let e = (a as i128 * table.ind(i) as i128 - (a + b) as i128 * table.ind(i + 1) as i128)
            .rem_euclid(p as i128) as u64;
        sum = (sum + pow_mod(e, k as u64, p)) % p;
    }
    let psi_val = padic::pi_val(&psi(p, q, u, a, b).add_integer(&BigInt::one()));
    let asserted = psi_val.at_least(k as u64 + 1);
    let report = CheckReport::new("power_sum")
        .param("p", p)
        .param("q", q)
        .param("a", a)
        .param("b", b)
        .param("k", k)
        .convention("u", u)
        .witness("sum_mod_p", sum)
        .witness("psi_plus_1_valuation", psi_val);
    if asserted {
        report.verdict(sum == 0)
    } else {
        report.status(Status::Monitored)
    }
}

/// `g·ḡ = q^f` with ḡ the full complex conjugate.
pub fn conj_product_is_qf(params: &GaussSumParams) -> bool {
    let g = gauss_sum(params);
    let prod = g.mul(&g.conj_both());
    let expect =
        CycInt::from_integer(params.p, BigInt::from(params.q).pow(params.f as u32)).embed(params.q);
    prod == expect
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::pi_val_bi;

    #[test]
    fn field_rep_smallest_conventions() {
        // F_9 = F_3[x]/(x²+1): x²+1 is the first irreducible in counting order
        let rep = FieldRep::build(3, 2);
        assert_eq!(rep.modulus, vec![1, 0, 1]);
        // generator must have order 8
        let ord_ok = (1..8).all(|e| !is_one(&poly_pow_mod(&rep.generator, e, &rep.modulus, 3)));
        assert!(ord_ok && is_one(&poly_pow_mod(&rep.generator, 8, &rep.modulus, 3)));
    }

    #[test]
    fn trace_matches_frobenius_sum() {
        let rep = FieldRep::build(3, 4);
        let tr = rep.trace_basis();
        // Tr(x^j) computed the slow way: x^j + (x^j)^3 + (x^j)^9 + (x^j)^27
        for j in 0..4usize {
            let x = [0u64, 1, 0, 0];
            let xj = poly_pow_mod(&x, j as u128, &rep.modulus, 3);
            let mut acc = [0u64; 4];
            let mut t = xj.clone();
            for _ in 0..4 {
                for (a, b) in acc.iter_mut().zip(&t) {
                    *a = (*a + b) % 3;
                }
                t = poly_pow_mod(&t, 3, &rep.modulus, 3);
            }
            assert!(acc[1..].iter().all(|&c| c == 0), "trace must be in F_q");
            assert_eq!(acc[0], tr[j]);
        }
    }

    #[test]
    fn explicit_equals_char_sum_when_f_is_1() {
        for (p, q) in [(5u64, 11u64), (5, 31), (7, 29), (11, 23), (13, 53)] {
            let params = GaussSumParams::new(p, q).unwrap();
            assert_eq!(params.f, 1);
            assert_eq!(gauss_sum_explicit(&params), gauss_sum_char(&params));
        }
    }

    #[test]
    fn gauss_conj_product() {
        // g·ḡ = q^f, f = 1 and f > 1 cases
        for (p, q) in [(5u64, 11u64), (7, 29), (5, 3), (5, 19), (7, 3)] {
            let params = GaussSumParams::new(p, q).unwrap();
            assert!(conj_product_is_qf(&params), "failed at p={p}, q={q}");
        }
    }

    #[test]
    fn gauss_is_minus_one_mod_pi() {
        let params = GaussSumParams::new(5, 11).unwrap();
        let g = gauss_sum(&params);
        let v = pi_val_bi(&g.add_integer(&BigInt::one()));
        assert!(v.at_least(1), "g ≢ −1 mod π");
    }

    #[test]
    fn gauss_in_base_ring_iff_f_greater_1() {
        // f = 4: every ζ_q coefficient with k ≥ 1 vanishes
        let params = GaussSumParams::new(5, 3).unwrap();
        assert_eq!(params.f, 4);
        assert!(gauss_sum(&params).project_to_cyc().is_ok());
        // f = 1: g genuinely involves ζ_q, but g^p does not
        let params = GaussSumParams::new(5, 11).unwrap();
        let g = gauss_sum(&params);
        assert!(g.project_to_cyc().is_err());
        assert!(g.pow(5).project_to_cyc().is_ok());
    }

    #[test]
    fn tau_eigenvalue_cases() {
        let r = verify_tau_eigen(&GaussSumParams::with_roots(5, 11, 2, 2).unwrap());
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.witnesses["rho"], "3"); // −2 mod 5
        let r = verify_tau_eigen(&GaussSumParams::new(7, 29).unwrap());
        assert_eq!(r.status, Status::Pass);
        // f = 4: τ fixes g
        let r = verify_tau_eigen(&GaussSumParams::new(5, 3).unwrap());
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.witnesses["rho"], "0");
    }

    #[test]
    fn val_gp1_desk_case() {
        // p=5, q=11: 5² ≡ 3 mod 11 ≠ 1, so the valuation is exactly 5
        assert!(!p_is_pth_power_mod_q(5, 11));
        let (val, _) = val_gp_plus_1(&GaussSumParams::new(5, 11).unwrap());
        assert_eq!(val, PiValuation::Finite(5));
    }

    #[test]
    fn f_even_form_cases() {
        // p=5, q=3 (f=4): g = ±ζ^w·9
        let r = verify_f_even_form(&GaussSumParams::new(5, 3).unwrap());
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.witnesses["q_pow_f_half"], "9");
        // p=5, q=19 (f=2): g = ±ζ^w·19
        let r = verify_f_even_form(&GaussSumParams::new(5, 19).unwrap());
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.witnesses["q_pow_f_half"], "19");
        // p=7, q=3 (f=6): g = ±ζ^w·27
        let params = GaussSumParams::new(7, 3).unwrap();
        assert_eq!(params.f, 6);
        let r = verify_f_even_form(&params);
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.witnesses["q_pow_f_half"], "27");
    }

    #[test]
    fn index_table_conventions() {
        let t = IndexTable::new(11, 2);
        assert_eq!(t.ind(1), 0);
        assert_eq!(t.ind(2), 1);
        assert_eq!(t.ind(4), 2);
        // bijection onto 0..q−2
        let mut seen: Vec<u64> = (1..11).map(|i| t.ind(i)).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn psi_is_minus_one_mod_pi() {
        for (p, q) in [(5u64, 11u64), (5, 31), (7, 29)] {
            let u = arith::smallest_primitive_root(q);
            let val = padic::pi_val(&psi(p, q, u, 1, -2).add_integer(&BigInt::one()));
            assert!(val.at_least(1), "psi ≢ −1 mod π at p={p}, q={q}");
        }
    }

    #[test]
    fn psi_resolvent_identity() {
        // <ζ_p^a,ζ_q>·<ζ_p^b,ζ_q> = ψ_{a,b}·<ζ_p^{a+b},ζ_q>, p=5, q=11, a=b=1
        let (p, q) = (5u64, 11u64);
        let u = arith::smallest_primitive_root(q);
        let lhs = resolvent(p, q, u, 1).mul(&resolvent(p, q, u, 1));
        let rhs = resolvent(p, q, u, 2).scale_cyc(&psi(p, q, u, 1, 1));
        assert_eq!(lhs, rhs);
        // and the Gauss sum is the resolvent at a = v
        let params = GaussSumParams::with_roots(p, q, u, 2).unwrap();
        assert_eq!(gauss_sum(&params), resolvent(p, q, u, 2));
    }

    #[test]
    fn desk_scale_budget_enforced() {
        // p=13, q=199 has f=6 and q^f ≈ 6·10^13
        let err = GaussSumParams::new(13, 199).unwrap_err();
        assert!(matches!(err, GaussError::BeyondDeskScale { .. }));
    }

    #[test]
    fn delta_g_values() {
        // Under the π^k-membership convention the valuation at p=5, q=11 is
        // exactly 3 (every primitive-root choice; the ≥4 in the literature is
        // a per-prime reading). Cross-check with the division-by-λ oracle.
        let (delta, val) = delta_g(&GaussSumParams::new(5, 11).unwrap());
        assert_eq!(val, PiValuation::Finite(3));
        let lambda = CycInt::lambda(5);
        let div_all = |x: &BiCycInt| -> Option<Vec<CycInt>> {
            x.zeta_q_coeffs()
                .iter()
                .map(|c| c.exact_div(&lambda))
                .collect()
        };
        let d1 = div_all(&delta).expect("divisible once");
        let d2: Vec<CycInt> = d1.iter().map(|c| c.exact_div(&lambda).unwrap()).collect();
        let d3: Vec<CycInt> = d2.iter().map(|c| c.exact_div(&lambda).unwrap()).collect();
        assert!(
            d3.iter().any(|c| c.exact_div(&lambda).is_none()),
            "a fourth λ division should fail"
        );
        // generic pair: valuation ≥ 2 always, and typically exactly 3
        let (_, val) = delta_g(&GaussSumParams::new(7, 29).unwrap());
        assert_eq!(val, PiValuation::Finite(3));
        // report form flags the special case but still passes the ≥2 bound
        let r = delta_g_report(&GaussSumParams::new(5, 11).unwrap());
        assert_eq!(r.status, Status::Pass);
        assert!(r.witnesses.contains_key("convention_note"));
    }
}
