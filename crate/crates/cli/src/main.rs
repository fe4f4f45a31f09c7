//! `cyclo`: command-line checks over the cyclotomic library.
//!
//! Every subcommand emits one JSON object per check on stdout (one per
//! line; `--csv` switches the stream format). Exit code 0 means no check
//! failed, 1 means at least one `fail`, 2 is a usage error, 3 an internal
//! invariant breach. With `--out FILE` results are appended to a JSON-lines
//! cache keyed by (check, canonical params) and reused on re-run unless
//! `--no-cache`.

use std::collections::BTreeMap;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::mpsc;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use num_traits::One;

use cyclotomic::annihilator::{
    annihilator_gcds, biquadratic_report, f_gt1_congruences, find_prime_norm_element,
    principal_prime_test, quad_class_report, semiprimary_adjust, singular_padic_profile,
    stickelberger_power_identity,
};
use cyclotomic::arith::{
    is_prime_u64, is_primitive_root, multiplicative_order, primes_below, smallest_primitive_root,
};
use cyclotomic::gauss::{
    conj_product_is_qf, delta_g_report, gauss_sum, p_is_pth_power_mod_q, power_sum_check, psi,
    resolvent, val_gp_plus_1, verify_f_even_form, verify_tau_eigen, GaussError, GaussSumParams,
};
use cyclotomic::padic::{pi_val, pi_val_bi};
use cyclotomic::regularity::{bernoulli_irregular_indices, regular_check};
use cyclotomic::report::cache_key_for;
use cyclotomic::ring::CycInt;
use cyclotomic::{CheckReport, Status};

#[derive(Parser)]
#[command(name = "cyclo", version, about = "Exact congruence checks in prime cyclotomic fields")]
struct Cli {
    /// Append reports to FILE (JSON lines) and reuse cached entries on re-run
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Recompute every check even when a cached entry exists
    #[arg(long, global = true)]
    no_cache: bool,

    /// Emit JSON lines (the default)
    #[arg(long, global = true)]
    json: bool,

    /// Emit CSV rows instead of JSON lines
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gauss-sum structure checks for one (p, q) pair
    Gauss {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        q: u64,
        /// primitive root mod q (default: smallest)
        #[arg(long)]
        u: Option<u64>,
        /// primitive root mod p (default: smallest)
        #[arg(long)]
        v: Option<u64>,
    },
    /// Jacobi cyclotomic function ψ_{a,b}: congruence, resolvent identity, power sums
    Psi {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        q: u64,
        #[arg(long)]
        u: Option<u64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        a: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -2)]
        b: i64,
    },
    /// The twist Δ(g) = σ(g) − (−1)^{v−1} g^v and its π-adic valuation
    DeltaG {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        q: u64,
        #[arg(long)]
        u: Option<u64>,
        #[arg(long)]
        v: Option<u64>,
    },
    /// Regular-prime criterion: Q(X) odd roots vs the Bernoulli oracle
    RegularCheck {
        #[arg(short)]
        p: u64,
    },
    /// Quadratic class-number identities for p ≡ 3 mod 4
    QuadClass {
        #[arg(short)]
        p: u64,
        /// also report the I_δ set and alternating sum for this δ
        #[arg(long)]
        delta: Option<u64>,
    },
    /// Annihilator gcds D(X) = gcd(P, T) mod h and root extraction
    Annihilator {
        #[arg(short)]
        p: u64,
        /// odd prime modulus (arbitrary size, decimal)
        #[arg(long)]
        h: String,
        #[arg(long)]
        v: Option<u64>,
    },
    /// Biquadratic alternating-sum congruence for p ≡ 5 mod 8
    Biquadratic {
        #[arg(short)]
        p: u64,
    },
    /// Principality congruences for inertia degree f > 1
    FGt1 {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        q: u64,
        #[arg(long)]
        v: Option<u64>,
    },
    /// Stickelberger consequence for principal primes q₁ ≡ a mod π^{p+1}
    PrincipalPrime {
        #[arg(short)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
    },
    /// π-adic profile of A^{P(σ)} for A = (semi-primary α)^p of prime norm
    SingularProfile {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        q: u64,
        #[arg(long)]
        v: Option<u64>,
    },
    /// Batch scans over p-ranges and q bounds
    Scan {
        /// one of: gauss, gp1, psi, delta-g, regular, quad-class, f-gt1, biquadratic
        #[arg(long)]
        task: String,
        /// inclusive prime range, e.g. 5..13
        #[arg(long, value_name = "A..B")]
        p_range: String,
        #[arg(long, default_value_t = 200)]
        q_max: u64,
    },
    /// Recompute every row of the shipped reference tables
    VerifyTables,
}

fn usage_error(msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(2);
}

// ---------------------------------------------------------------------------
// task plumbing

struct Task {
    /// cache keys of every report this task will emit, in emission order
    keys: Vec<String>,
    run: Box<dyn FnOnce() -> Vec<CheckReport> + Send>,
}

fn params_of(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Stamp a report with the task's canonical identity.
fn stamp(mut report: CheckReport, check: &str, params: &BTreeMap<String, String>) -> CheckReport {
    report.check = check.to_string();
    report.params = params.clone();
    report
}

// ---------------------------------------------------------------------------
// per-command task builders

fn gauss_tasks(p: u64, q: u64, u: Option<u64>, v: Option<u64>) -> Vec<Task> {
    validate_pq(p, q);
    let u = validate_root(u, q, "u");
    let v = validate_root(v, p, "v");
    let f = multiplicative_order(q % p, p);
    let params = params_of(&[
        ("p", p.to_string()),
        ("q", q.to_string()),
        ("u", u.to_string()),
        ("v", v.to_string()),
    ]);
    let mut checks = vec![
        "gauss_conj_product".to_string(),
        "gauss_projection".to_string(),
        "tau_eigenvalue".to_string(),
    ];
    if f == 1 {
        checks.push("gauss_mod_pi".to_string());
        checks.push("gp1_valuation".to_string());
    }
    if f % 2 == 0 {
        checks.push("f_even_form".to_string());
    }
    let keys = checks.iter().map(|c| cache_key_for(c, &params)).collect();
    let run = Box::new(move || {
        let gp = match GaussSumParams::with_roots(p, q, u, v) {
            Ok(gp) => gp,
            Err(GaussError::BeyondDeskScale { size, .. }) => {
                return checks
                    .iter()
                    .map(|c| {
                        stamp(
                            CheckReport::new(c)
                                .witness("field_size", size)
                                .witness("scope", "beyond desk-scale budget")
                                .status(Status::Inapplicable),
                            c,
                            &params,
                        )
                    })
                    .collect();
            }
        };
        let mut out = Vec::new();
        let g = gauss_sum(&gp);
        out.push(stamp(
            CheckReport::new("gauss_conj_product")
                .convention("field_rep", gp.convention_string())
                .witness("f", f)
                .verdict(conj_product_is_qf(&gp)),
            "gauss_conj_product",
            &params,
        ));
        let proj = g.project_to_cyc();
        let proj_p = g.pow(p).project_to_cyc();
        let proj_ok = if f == 1 {
            proj.is_err() && proj_p.is_ok()
        } else {
            proj.is_ok()
        };
        out.push(stamp(
            CheckReport::new("gauss_projection")
                .witness("g_in_base_ring", proj.is_ok())
                .witness("g_pow_p_in_base_ring", proj_p.is_ok())
                .verdict(proj_ok),
            "gauss_projection",
            &params,
        ));
        out.push(stamp(verify_tau_eigen(&gp), "tau_eigenvalue", &params));
        if f == 1 {
            let val_g1 = pi_val_bi(&g.add_integer(&BigInt::one()));
            out.push(stamp(
                CheckReport::new("gauss_mod_pi")
                    .witness("val_g_plus_1", val_g1)
                    .verdict(val_g1.at_least(1)),
                "gauss_mod_pi",
                &params,
            ));
            let (val, level) = val_gp_plus_1(&gp);
            let trivial = p_is_pth_power_mod_q(p, q);
            let exact = val.divides_exactly(p);
            // exactness iff p is not a p-th power mod q; the converse
            // direction is unproved, so a counterexample is reported
            let report = CheckReport::new("gp1_valuation")
                .witness("valuation", val)
                .witness("truncation_level", level)
                .witness("p_power_residue_trivial", trivial)
                .witness("exact", exact);
            let report = if !val.at_least(p) {
                report.status(Status::Fail)
            } else if !trivial {
                report.verdict(exact)
            } else if exact {
                report
                    .witness("note", "counterexample to the unproved direction")
                    .status(Status::Monitored)
            } else {
                report.status(Status::Pass)
            };
            out.push(stamp(report, "gp1_valuation", &params));
        }
        if f % 2 == 0 {
            out.push(stamp(verify_f_even_form(&gp), "f_even_form", &params));
        }
        out
    });
    vec![Task { keys, run }]
}

fn psi_tasks(p: u64, q: u64, u: Option<u64>, a: i64, b: i64) -> Vec<Task> {
    validate_pq(p, q);
    if q % p != 1 {
        usage_error("psi needs q ≡ 1 mod p");
    }
    let pi = p as i64;
    if a % pi == 0 || b % pi == 0 || (a + b) % pi == 0 {
        usage_error("psi needs a, b and a+b nonzero mod p");
    }
    let u = validate_root(u, q, "u");
    let base_params = params_of(&[
        ("a", a.to_string()),
        ("b", b.to_string()),
        ("p", p.to_string()),
        ("q", q.to_string()),
        ("u", u.to_string()),
    ]);
    let mut tasks = Vec::new();
    {
        let params = base_params.clone();
        let checks = ["psi_congruence", "psi_resolvent_identity"];
        let keys = checks.iter().map(|c| cache_key_for(c, &params)).collect();
        tasks.push(Task {
            keys,
            run: Box::new(move || {
                let psi_el = psi(p, q, u, a, b);
                let val = pi_val(&psi_el.add_integer(&BigInt::one()));
                let lhs = resolvent(p, q, u, a).mul(&resolvent(p, q, u, b));
                let rhs = resolvent(p, q, u, a + b).scale_cyc(&psi_el);
                vec![
                    stamp(
                        CheckReport::new("psi_congruence")
                            .witness("val_psi_plus_1", val)
                            .verdict(val.at_least(1)),
                        "psi_congruence",
                        &params,
                    ),
                    stamp(
                        CheckReport::new("psi_resolvent_identity").verdict(lhs == rhs),
                        "psi_resolvent_identity",
                        &params,
                    ),
                ]
            }),
        });
    }
    for k in 2..=p.min(8) as u32 {
        let mut params = base_params.clone();
        params.insert("k".into(), k.to_string());
        let keys = vec![cache_key_for("power_sum", &params)];
        tasks.push(Task {
            keys,
            run: Box::new(move || {
                vec![stamp(power_sum_check(p, q, u, a, b, k), "power_sum", &params)]
            }),
        });
    }
    tasks
}

fn delta_g_tasks(p: u64, q: u64, u: Option<u64>, v: Option<u64>) -> Vec<Task> {
    validate_pq(p, q);
    if q % p != 1 {
        usage_error("delta-g needs q ≡ 1 mod p");
    }
    let u = validate_root(u, q, "u");
    let v = validate_root(v, p, "v");
    let params = params_of(&[
        ("p", p.to_string()),
        ("q", q.to_string()),
        ("u", u.to_string()),
        ("v", v.to_string()),
    ]);
    let keys = vec![cache_key_for("delta_g", &params)];
    vec![Task {
        keys,
        run: Box::new(move || {
            let gp = GaussSumParams::with_roots(p, q, u, v).expect("f = 1 is within scale");
            vec![stamp(delta_g_report(&gp), "delta_g", &params)]
        }),
    }]
}

fn regular_tasks(p: u64) -> Vec<Task> {
    validate_p(p);
    let params = params_of(&[("p", p.to_string())]);
    let keys = vec![cache_key_for("regular_check", &params)];
    vec![Task {
        keys,
        run: Box::new(move || {
            vec![stamp(regular_check(p).to_check_report(), "regular_check", &params)]
        }),
    }]
}

fn quad_class_tasks(p: u64, delta: Option<u64>) -> Vec<Task> {
    validate_p(p);
    if p % 4 != 3 || p == 3 {
        usage_error("quad-class needs p ≡ 3 mod 4, p ≠ 3");
    }
    let params = params_of(&[("p", p.to_string())]);
    let keys = vec![cache_key_for("quad_class", &params)];
    let mut tasks = vec![Task {
        keys,
        run: Box::new(move || {
            vec![stamp(quad_class_report(p).to_check_report(), "quad_class", &params)]
        }),
    }];
    if let Some(delta) = delta {
        if !(1..=p - 2).contains(&delta) {
            usage_error("--delta must lie in 1..=p-2");
        }
        let params = params_of(&[("delta", delta.to_string()), ("p", p.to_string())]);
        let keys = vec![cache_key_for("i_delta", &params)];
        tasks.push(Task {
            keys,
            run: Box::new(move || {
                let v = smallest_primitive_root(p);
                let (set, sum) = cyclotomic::annihilator::i_delta_sum(p, v, delta);
                let h = cyclotomic::annihilator::quad_class_oracle(p);
                let odd_primes: Vec<u64> = cyclotomic::arith::factor(h)
                    .into_iter()
                    .map(|(f, _)| f)
                    .filter(|&f| f % 2 == 1)
                    .collect();
                let divisible = odd_primes.iter().all(|&hp| sum.rem_euclid(hp as i64) == 0);
                vec![stamp(
                    CheckReport::new("i_delta")
                        .convention("v", v)
                        .witness("set", format!("{set:?}"))
                        .witness("cardinality", set.len())
                        .witness("sum", sum)
                        .witness("h_oracle", h)
                        .verdict(set.len() % 2 == 1 && sum != 0 && divisible),
                    "i_delta",
                    &params,
                )]
            }),
        });
    }
    tasks
}

fn annihilator_tasks(p: u64, h: &str, v: Option<u64>) -> Vec<Task> {
    validate_p(p);
    let h: BigUint = h
        .parse()
        .unwrap_or_else(|_| usage_error("--h must be a decimal integer"));
    if h <= BigUint::from(2u32) || !cyclotomic::arith::is_probable_prime(&h) {
        usage_error("--h must be an odd prime");
    }
    let v = validate_root(v, p, "v");
    let params = params_of(&[
        ("h", h.to_string()),
        ("p", p.to_string()),
        ("v", v.to_string()),
    ]);
    let keys = vec![cache_key_for("annihilator", &params)];
    vec![Task {
        keys,
        run: Box::new(move || {
            vec![stamp(annihilator_gcds(p, v, &h).to_check_report(), "annihilator", &params)]
        }),
    }]
}

fn biquadratic_tasks(p: u64) -> Vec<Task> {
    validate_p(p);
    if p % 8 != 5 {
        usage_error("biquadratic needs p ≡ 5 mod 8");
    }
    let params = params_of(&[("p", p.to_string())]);
    let keys = vec![cache_key_for("biquadratic", &params)];
    vec![Task {
        keys,
        run: Box::new(move || vec![stamp(biquadratic_report(p), "biquadratic", &params)]),
    }]
}

fn f_gt1_tasks(p: u64, q: u64, v: Option<u64>) -> Vec<Task> {
    validate_pq(p, q);
    if multiplicative_order(q % p, p) == 1 {
        usage_error("f-gt1 needs a prime q of inertia degree f > 1 (q ≢ 1 mod p)");
    }
    let v = validate_root(v, p, "v");
    let params = params_of(&[
        ("p", p.to_string()),
        ("q", q.to_string()),
        ("v", v.to_string()),
    ]);
    let keys = vec![cache_key_for("f_gt1", &params)];
    vec![Task {
        keys,
        run: Box::new(move || vec![stamp(f_gt1_congruences(p, q, v), "f_gt1", &params)]),
    }]
}

fn principal_prime_tasks(p: u64, a: i64) -> Vec<Task> {
    validate_p(p);
    if a.rem_euclid(p as i64) == 0 {
        usage_error("--a must be nonzero mod p");
    }
    // deterministic candidate sequence: small coefficient vectors for r
    let mut tasks = Vec::new();
    let n = (p - 1) as usize;
    let mut candidates: Vec<Vec<i64>> = vec![vec![0; n]];
    let radius = 1i64;
    let mut idx = vec![-radius; n];
    loop {
        if idx.iter().any(|&c| c.abs() == radius) {
            candidates.push(idx.clone());
        }
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] > radius {
                idx[k] = -radius;
                k += 1;
            } else {
                break;
            }
        }
        if k == n {
            break;
        }
    }
    candidates.truncate(64);
    for coeffs in candidates {
        let r_str = coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let params = params_of(&[("a", a.to_string()), ("p", p.to_string()), ("r", r_str)]);
        let keys = vec![cache_key_for("principal_prime", &params)];
        tasks.push(Task {
            keys,
            run: Box::new(move || {
                let r = CycInt::from_coeffs(p, coeffs.iter().map(|&c| BigInt::from(c)).collect());
                vec![stamp(principal_prime_test(p, a, &r), "principal_prime", &params)]
            }),
        });
    }
    tasks
}

fn singular_profile_tasks(p: u64, q: u64, v: Option<u64>) -> Vec<Task> {
    validate_pq(p, q);
    let v = validate_root(v, p, "v");
    let f = multiplicative_order(q % p, p);
    let params = params_of(&[
        ("p", p.to_string()),
        ("q", q.to_string()),
        ("v", v.to_string()),
    ]);
    let mut checks = vec!["singular_profile".to_string()];
    // the exact g^{p²} identity is desk-feasible for small split primes
    let with_identity = f == 1 && p <= 7;
    if with_identity {
        checks.push("stickelberger_power".to_string());
    }
    let keys = checks.iter().map(|c| cache_key_for(c, &params)).collect();
    vec![Task {
        keys,
        run: Box::new(move || {
            let alpha = match find_prime_norm_element(p, q, 3) {
                Some(el) => semiprimary_adjust(&el),
                None => {
                    return checks
                        .iter()
                        .map(|c| {
                            stamp(
                                CheckReport::new(c)
                                    .witness("note", "no prime-norm element in the search box")
                                    .status(Status::Inapplicable),
                                c,
                                &params,
                            )
                        })
                        .collect();
                }
            };
            let mut out = vec![stamp(
                singular_padic_profile(&alpha.pow(p), q, v).witness("alpha", format_coeffs(&alpha)),
                "singular_profile",
                &params,
            )];
            if with_identity {
                let gp = GaussSumParams::with_roots(p, q, smallest_primitive_root(q), v)
                    .expect("f = 1 within scale");
                out.push(stamp(
                    stickelberger_power_identity(&gp, &alpha),
                    "stickelberger_power",
                    &params,
                ));
            }
            out
        }),
    }]
}

fn scan_tasks(task: &str, p_range: &str, q_max: u64) -> Vec<Task> {
    let (lo, hi) = parse_range(p_range);
    let ps: Vec<u64> = primes_below(hi + 1)
        .into_iter()
        .filter(|&p| p >= lo.max(3))
        .collect();
    let qs = primes_below(q_max);
    let mut tasks = Vec::new();
    match task {
        "gauss" => {
            for &p in &ps {
                for &q in &qs {
                    if q >= 3 && q != p {
                        tasks.extend(gauss_tasks(p, q, None, None));
                    }
                }
            }
        }
        "gp1" | "psi" | "delta-g" => {
            for &p in &ps {
                for &q in &qs {
                    if q >= 3 && q != p && q % p == 1 {
                        match task {
                            "gp1" => tasks.extend(gauss_tasks(p, q, None, None)),
                            "psi" => tasks.extend(psi_tasks(p, q, None, 1, -2)),
                            _ => tasks.extend(delta_g_tasks(p, q, None, None)),
                        }
                    }
                }
            }
        }
        "regular" => {
            for &p in &ps {
                if p >= 5 {
                    tasks.extend(regular_tasks(p));
                }
            }
        }
        "quad-class" => {
            for &p in &ps {
                if p % 4 == 3 && p != 3 {
                    tasks.extend(quad_class_tasks(p, None));
                }
            }
        }
        "f-gt1" => {
            for &p in &ps {
                for &q in &qs {
                    if q >= 3 && q != p && multiplicative_order(q % p, p) > 1 {
                        tasks.extend(f_gt1_tasks(p, q, None));
                    }
                }
            }
        }
        "biquadratic" => {
            for &p in &ps {
                if p % 8 == 5 {
                    tasks.extend(biquadratic_tasks(p));
                }
            }
        }
        other => usage_error(&format!(
            "unknown scan task '{other}'; expected gauss, gp1, psi, delta-g, regular, quad-class, f-gt1 or biquadratic"
        )),
    }
    if tasks.is_empty() {
        usage_error("scan selected no (p, q) work; widen --p-range or --q-max");
    }
    tasks
}

fn verify_tables_tasks() -> Vec<Task> {
    let dir = ["data", "../data", "../../data"]
        .iter()
        .map(PathBuf::from)
        .find(|d| d.join("irregular_pairs.csv").exists())
        .unwrap_or_else(|| {
            usage_error("data/ directory with shipped tables not found; run from the repository root")
        });
    let mut tasks = Vec::new();

    let irregular = std::fs::read_to_string(dir.join("irregular_pairs.csv"))
        .unwrap_or_else(|e| usage_error(&format!("irregular_pairs.csv: {e}")));
    let mut by_p: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for line in irregular.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let mut cols = line.trim().split(',');
        let p: u64 = cols
            .next()
            .unwrap()
            .parse()
            .unwrap_or_else(|_| usage_error("bad p in irregular_pairs.csv"));
        let k: u64 = cols
            .next()
            .unwrap()
            .parse()
            .unwrap_or_else(|_| usage_error("bad k in irregular_pairs.csv"));
        by_p.entry(p).or_default().push(k);
    }
    for (p, ks) in by_p {
        let params = params_of(&[("p", p.to_string())]);
        let keys = vec![cache_key_for("table_irregular_pairs", &params)];
        tasks.push(Task {
            keys,
            run: Box::new(move || {
                let computed = bernoulli_irregular_indices(p);
                vec![stamp(
                    CheckReport::new("table_irregular_pairs")
                        .witness("table", format!("{ks:?}"))
                        .witness("recomputed", format!("{computed:?}"))
                        .verdict(computed == ks),
                    "table_irregular_pairs",
                    &params,
                )]
            }),
        });
    }

    let quad = std::fs::read_to_string(dir.join("quad_class.csv"))
        .unwrap_or_else(|e| usage_error(&format!("quad_class.csv: {e}")));
    for line in quad.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let mut cols = line.trim().split(',');
        let p: u64 = cols
            .next()
            .unwrap()
            .parse()
            .unwrap_or_else(|_| usage_error("bad p in quad_class.csv"));
        let h: u64 = cols
            .next()
            .unwrap()
            .parse()
            .unwrap_or_else(|_| usage_error("bad h in quad_class.csv"));
        let params = params_of(&[("p", p.to_string())]);
        let keys = vec![cache_key_for("table_quad_class", &params)];
        tasks.push(Task {
            keys,
            run: Box::new(move || {
                let oracle = cyclotomic::annihilator::quad_class_oracle(p);
                let dirichlet =
                    cyclotomic::annihilator::dirichlet_h(p, smallest_primitive_root(p));
                vec![stamp(
                    CheckReport::new("table_quad_class")
                        .witness("table", h)
                        .witness("oracle", oracle)
                        .witness("dirichlet", dirichlet)
                        .verdict(oracle == h && dirichlet == h),
                    "table_quad_class",
                    &params,
                )]
            }),
        });
    }

    let annihilator = std::fs::read_to_string(dir.join("annihilator_examples.csv"))
        .unwrap_or_else(|e| usage_error(&format!("annihilator_examples.csv: {e}")));
    for line in annihilator.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        let cols: Vec<String> = line.trim().split(',').map(str::to_string).collect();
        let p: u64 = cols[0]
            .parse()
            .unwrap_or_else(|_| usage_error("bad p in annihilator_examples.csv"));
        let h: BigUint = cols[1]
            .parse()
            .unwrap_or_else(|_| usage_error("bad h in annihilator_examples.csv"));
        let d_expect: u64 = cols[4]
            .parse()
            .unwrap_or_else(|_| usage_error("bad d in annihilator_examples.csv"));
        let nu: Option<BigUint> = cols.get(5).filter(|s| !s.is_empty()).map(|s| {
            s.parse()
                .unwrap_or_else(|_| usage_error("bad nu in annihilator_examples.csv"))
        });
        let params = params_of(&[("h", h.to_string()), ("p", p.to_string())]);
        let keys = vec![cache_key_for("table_annihilator", &params)];
        tasks.push(Task {
            keys,
            run: Box::new(move || {
                let v = smallest_primitive_root(p);
                let g = annihilator_gcds(p, v, &h);
                let mut report = CheckReport::new("table_annihilator")
                    .convention("v", v)
                    .witness("deg_D", g.d_poly.degree().map_or(-1, |d| d as i64))
                    .witness("d", g.d)
                    .witness("d_expected", d_expect);
                let mut ok =
                    g.d_poly.is_nonconstant() && g.d == d_expect && g.roots_satisfy_order();
                let mut reindexed = false;
                if let Some(nu) = &nu {
                    report = report.witness("nu_expected", nu);
                    if g.roots.contains(nu) {
                        report = report.witness("nu_match", "literal");
                    } else {
                        let orbit_hit = g.roots.iter().any(|r| {
                            (1..p - 1)
                                .filter(|&k| cyclotomic::arith::gcd(k, p - 1) == 1)
                                .any(|k| r.modpow(&BigUint::from(k), &g.h) == *nu)
                        });
                        if orbit_hit {
                            report = report.witness("nu_match", "galois_reindexing");
                            reindexed = true;
                        } else {
                            report = report.witness("nu_match", "none");
                            ok = false;
                        }
                    }
                }
                let status = if !ok {
                    Status::Fail
                } else if reindexed {
                    // a convention mismatch, surfaced but not failed
                    Status::Monitored
                } else {
                    Status::Pass
                };
                vec![stamp(report.status(status), "table_annihilator", &params)]
            }),
        });
    }
    tasks
}

// ---------------------------------------------------------------------------

fn validate_p(p: u64) {
    if p < 3 || !is_prime_u64(p) {
        usage_error("-p must be an odd prime");
    }
}

fn validate_pq(p: u64, q: u64) {
    validate_p(p);
    if q < 3 || !is_prime_u64(q) {
        usage_error("-q must be an odd prime");
    }
    if p == q {
        usage_error("p and q must be distinct");
    }
}

fn validate_root(given: Option<u64>, modulus: u64, name: &str) -> u64 {
    match given {
        None => smallest_primitive_root(modulus),
        Some(r) => {
            if !is_primitive_root(r, modulus) {
                usage_error(&format!("--{name} = {r} is not a primitive root mod {modulus}"));
            }
            r
        }
    }
}

fn parse_range(s: &str) -> (u64, u64) {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() != 2 {
        usage_error("--p-range expects A..B (inclusive)");
    }
    let lo = parts[0]
        .parse()
        .unwrap_or_else(|_| usage_error("bad range start"));
    let hi = parts[1]
        .parse()
        .unwrap_or_else(|_| usage_error("bad range end"));
    if lo > hi {
        usage_error("--p-range start exceeds end");
    }
    (lo, hi)
}

fn format_coeffs(x: &CycInt) -> String {
    x.coeffs()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn csv_escape(map: &BTreeMap<String, String>) -> String {
    map.iter()
        .map(|(k, v)| format!("{k}={}", v.replace([',', '\n'], ";")))
        .collect::<Vec<_>>()
        .join(";")
}

fn to_csv(report: &CheckReport) -> String {
    format!(
        "{},{},{},{},{},{}",
        report.check,
        report.status,
        csv_escape(&report.params),
        csv_escape(&report.witnesses),
        csv_escape(&report.convention),
        report.duration_ms
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tasks = match &cli.command {
        Command::Gauss { p, q, u, v } => gauss_tasks(*p, *q, *u, *v),
        Command::Psi { p, q, u, a, b } => psi_tasks(*p, *q, *u, *a, *b),
        Command::DeltaG { p, q, u, v } => delta_g_tasks(*p, *q, *u, *v),
        Command::RegularCheck { p } => regular_tasks(*p),
        Command::QuadClass { p, delta } => quad_class_tasks(*p, *delta),
        Command::Annihilator { p, h, v } => annihilator_tasks(*p, h, *v),
        Command::Biquadratic { p } => biquadratic_tasks(*p),
        Command::FGt1 { p, q, v } => f_gt1_tasks(*p, *q, *v),
        Command::PrincipalPrime { p, a } => principal_prime_tasks(*p, *a),
        Command::SingularProfile { p, q, v } => singular_profile_tasks(*p, *q, *v),
        Command::Scan { task, p_range, q_max } => scan_tasks(task, p_range, *q_max),
        Command::VerifyTables => verify_tables_tasks(),
    };

    // cache: key → stored JSON line
    let mut cache: BTreeMap<String, String> = BTreeMap::new();
    if let Some(path) = &cli.out {
        if let Ok(existing) = std::fs::read_to_string(path) {
            for line in existing.lines().filter(|l| !l.trim().is_empty()) {
                if let Ok(report) = serde_json::from_str::<CheckReport>(line) {
                    cache.insert(report.cache_key(), line.to_string());
                }
            }
        }
    }

    let mut out_file = cli.out.as_ref().map(|path| {
        std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .unwrap_or_else(|e| usage_error(&format!("cannot open {}: {e}", path.display())))
    });

    let stdout = std::io::stdout();
    let mut any_fail = false;
    let csv = cli.csv;
    let mut emit = |report_line: &str, fresh: bool, out_file: &mut Option<std::fs::File>| {
        let report: CheckReport = serde_json::from_str(report_line).expect("well-formed report");
        any_fail |= report.is_fail();
        let mut lock = stdout.lock();
        let wrote = if csv {
            writeln!(lock, "{}", to_csv(&report))
        } else {
            writeln!(lock, "{report_line}")
        };
        if let Err(e) = wrote {
            // a closed pipe (e.g. | head) is a normal way to stop reading
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            eprintln!("error: cannot write output: {e}");
            std::process::exit(3);
        }
        if fresh {
            if let Some(f) = out_file {
                if let Err(e) = writeln!(f, "{report_line}") {
                    eprintln!("error: cannot append to results cache: {e}");
                    std::process::exit(3);
                }
            }
        }
    };

    // split into cached (replayed in order) and fresh work
    enum Slot {
        Cached(Vec<String>),
        Pending(usize),
    }
    let mut slots = Vec::new();
    let mut pending = Vec::new();
    for task in tasks {
        let use_cache = cli.out.is_some() && !cli.no_cache;
        if use_cache && task.keys.iter().all(|k| cache.contains_key(k)) {
            slots.push(Slot::Cached(
                task.keys.iter().map(|k| cache[k].clone()).collect(),
            ));
        } else {
            slots.push(Slot::Pending(pending.len()));
            pending.push(task);
        }
    }

    // bounded worker pool; results re-ordered to task-submission order
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8)
        .min(pending.len().max(1));
    let mut results: Vec<Option<Result<Vec<String>, String>>> = Vec::new();
    results.resize_with(pending.len(), || None);
    if !pending.is_empty() {
        let jobs = Mutex::new(pending.into_iter().enumerate().rev().collect::<Vec<_>>());
        let (tx, rx) = mpsc::channel::<(usize, Result<Vec<String>, String>)>();
        std::thread::scope(|scope| {
            for _ in 0..workers {
                let tx = tx.clone();
                let jobs = &jobs;
                scope.spawn(move || loop {
                    let job = jobs.lock().unwrap().pop();
                    let Some((idx, task)) = job else { break };
                    let started = Instant::now();
                    let outcome = catch_unwind(AssertUnwindSafe(task.run)).map(|reports| {
                        let elapsed = started.elapsed().as_millis();
                        reports
                            .into_iter()
                            .map(|mut r| {
                                r.duration_ms = elapsed;
                                serde_json::to_string(&r).expect("report serializes")
                            })
                            .collect::<Vec<_>>()
                    });
                    let outcome = outcome.map_err(|panic| {
                        panic
                            .downcast_ref::<&str>()
                            .map(|s| s.to_string())
                            .or_else(|| panic.downcast_ref::<String>().cloned())
                            .unwrap_or_else(|| "internal invariant breach".to_string())
                    });
                    if tx.send((idx, outcome)).is_err() {
                        break;
                    }
                });
            }
            drop(tx);
            for (idx, outcome) in rx {
                results[idx] = Some(outcome);
            }
        });
    }

    for slot in slots {
        match slot {
            Slot::Cached(lines) => {
                for line in lines {
                    emit(&line, false, &mut out_file);
                }
            }
            Slot::Pending(idx) => match results[idx].take().expect("worker completed") {
                Ok(lines) => {
                    for line in lines {
                        emit(&line, true, &mut out_file);
                    }
                }
                Err(msg) => {
                    eprintln!("internal invariant breach: {msg}");
                    return ExitCode::from(3);
                }
            },
        }
    }

    if any_fail {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
