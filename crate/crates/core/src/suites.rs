//! Seeded verification suites. Each suite runs a family of exact identity
//! checks and reports one entry per identity.
//!
//! Random γ entries are `p/q` with `p ∈ 1..=128`, `q ∈ 1..=64`, drawn from a
//! ChaCha8 generator seeded with the suite seed, so reports replay exactly.
//! `corrupt` is a test hook that feeds each suite one deliberately wrong
//! input; every suite must then report a failure.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chainseq::{chain_at, gamma_from_system, minimal_parameters, system_from_gamma, GammaSeq};
use crate::error::{Error, Result};
use crate::families::{
    e_family_system, laguerre_assoc1, laguerre_gamma, laguerre_system, RRParams,
};
use crate::jacobi::{lu_factor, truncate, ul_product};
use crate::perturbations::{
    gccs_witness_against, hat_system, kernel_invariance_witness, quasi_orthogonality_check_against,
    swapped_split_check_against, tilde_kernel_system, unswapped_split_check,
};
use crate::recurrence::{
    convergent, kernel_system, laurent_expand, moments, monic_sequence, ThreeTermSystem,
};
use crate::scalar::{int, rat, Rational};

pub const GENERATOR: &str = "chacha8; gamma_k = p/q, p uniform in 1..=128, q uniform in 1..=64";

/// α values used by every Laguerre-based check.
pub fn laguerre_alphas() -> Vec<Rational> {
    vec![rat(-1, 2), int(0), int(1), rat(7, 3)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Even/odd split of the swapped symmetric system; the CLI name is fixed.
    #[serde(rename = "theorem33")]
    SwappedSplit,
    Gccs,
    KernelInvariance,
    QuasiOrth,
    Lu,
    Laguerre,
    Moments,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 7] = [
        Suite::SwappedSplit,
        Suite::Gccs,
        Suite::KernelInvariance,
        Suite::QuasiOrth,
        Suite::Lu,
        Suite::Laguerre,
        Suite::Moments,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SwappedSplit => "theorem33",
            Suite::Gccs => "gccs",
            Suite::KernelInvariance => "kernel_invariance",
            Suite::QuasiOrth => "quasi_orth",
            Suite::Lu => "lu",
            Suite::Laguerre => "laguerre",
            Suite::Moments => "moments",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::INDIVIDUAL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub corrupt: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n: 10,
            seed: 0,
            samples: 25,
            corrupt: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub n_range: [usize; 2],
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub generator: &'static str,
    pub corrupted: bool,
    pub passed: bool,
    pub checks: Vec<IdentityCheck>,
}

/// Accumulates the first witness over many cases of one identity.
struct Tally {
    name: String,
    n_range: [usize; 2],
    witness: Option<String>,
}

impl Tally {
    fn new(name: &str, lo: usize, hi: usize) -> Self {
        Tally {
            name: name.to_string(),
            n_range: [lo, hi],
            witness: None,
        }
    }

    /// Records the outcome of one case; errors count as failures.
    fn record(&mut self, case: &str, outcome: Result<Option<String>>) {
        if self.witness.is_some() {
            return;
        }
        self.witness = match outcome {
            Ok(None) => None,
            Ok(Some(w)) => Some(format!("{case}: {w}")),
            Err(e) => Some(format!("{case}: error: {e}")),
        };
    }

    fn finish(self) -> IdentityCheck {
        IdentityCheck {
            name: self.name,
            n_range: self.n_range,
            status: if self.witness.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            witness: self.witness,
        }
    }
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(1..=128), rng.gen_range(1..=64))
}

/// `count` random positive γ-sequences of length `len`.
pub fn random_gammas(seed: u64, count: usize, len: usize) -> Vec<GammaSeq<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| GammaSeq::from_vec((0..len).map(|_| random_rational(&mut rng)).collect()))
        .collect()
}

fn bump(gamma: &GammaSeq<Rational>, k: usize) -> GammaSeq<Rational> {
    let v = gamma.get(k).expect("index inside sample");
    gamma.with_override(k, v + int(1))
}

fn diff_witness(d: Option<(&'static str, usize)>) -> Option<String> {
    d.map(|(which, k)| format!("{which}_{k} differs"))
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    let checks = match suite {
        Suite::SwappedSplit => swapped_split(opts),
        Suite::Gccs => gccs(opts),
        Suite::KernelInvariance => kernel_invariance(opts),
        Suite::QuasiOrth => quasi_orth(opts),
        Suite::Lu => lu(opts),
        Suite::Laguerre => laguerre(opts),
        Suite::Moments => moments_suite(opts),
        Suite::All => Suite::INDIVIDUAL
            .iter()
            .flat_map(|&s| {
                run_suite(s, opts).checks.into_iter().map(move |mut c| {
                    c.name = format!("{}.{}", s.name(), c.name);
                    c
                })
            })
            .collect(),
    };
    SuiteReport {
        suite,
        n: opts.n,
        seed: opts.seed,
        samples: opts.samples,
        generator: GENERATOR,
        corrupted: opts.corrupt,
        passed: checks.iter().all(IdentityCheck::passed),
        checks,
    }
}

fn samples(opts: &VerifyOptions) -> Vec<GammaSeq<Rational>> {
    random_gammas(opts.seed, opts.samples, 2 * opts.n + 8)
}

fn swapped_split(opts: &VerifyOptions) -> Vec<IdentityCheck> {
    let n = opts.n;
    let mut even = Tally::new("even_part(S~_2n) = P~_n", 0, n);
    let mut odd = Tally::new("odd_part(S~_2n+1) = K~_n", 0, n);
    let mut plain = Tally::new("unswapped split = (P, K)", 0, n);
    for (s, gamma) in samples(opts).iter().enumerate() {
        let systems = if opts.corrupt && s == 0 {
            bump(gamma, 1)
        } else {
            gamma.clone()
        };
        let case = format!("sample {s}");
        match swapped_split_check_against(gamma, &systems, n) {
            Ok(r) => {
                even.record(&case, Ok(r.even_failures.first().map(|d| format!("degree {d}"))));
                odd.record(&case, Ok(r.odd_failures.first().map(|d| format!("degree {d}"))));
            }
            Err(e) => {
                even.record(&case, Err(e.clone()));
                odd.record(&case, Err(e));
            }
        }
        plain.record(
            &case,
            unswapped_split_check(gamma, n).map(|r| {
                (!r.holds()).then(|| format!("even {:?} odd {:?}", r.even_failures, r.odd_failures))
            }),
        );
    }
    vec![even.finish(), odd.finish(), plain.finish()]
}

fn gccs(opts: &VerifyOptions) -> Vec<IdentityCheck> {
    let n = opts.n;
    let mut chain = Tally::new("hat chain = GCCS of g, k'_n = 1 - g_n", 0, n);
    for (s, gamma) in samples(opts).iter().enumerate() {
        let hat = if opts.corrupt && s == 0 {
            bump(gamma, 4)
        } else {
            gamma.clone()
        };
        chain.record(
            &format!("sample {s}"),
            gccs_witness_against(gamma, &hat, n).map(|w| w.map(|k| format!("index {k}"))),
        );
    }
    let mut lag = Tally::new("P^_n = monic L^(alpha+1)_n on the gamma_1 = 1 tail", 0, n);
    for (i, alpha) in laguerre_alphas().into_iter().enumerate() {
        let outcome = (|| {
            let mut gamma = laguerre_gamma(&alpha, 1)?;
            if opts.corrupt && i == 0 {
                gamma = bump(&gamma, 2);
            }
            let hat = monic_sequence(&hat_system(&gamma)?, n)?;
            let lag = monic_sequence(&laguerre_system(&(alpha.clone() + int(1)))?, n)?;
            Ok(hat
                .iter()
                .zip(&lag)
                .position(|(a, b)| a != b)
                .map(|d| format!("degree {d}")))
        })();
        lag.record(&format!("alpha {alpha}"), outcome);
    }
    vec![chain.finish(), lag.finish()]
}

/// γ with `γ_{2k-1} = a + (k-1)δ`, `γ_{2k} = c + (k-1)δ`.
pub fn arithmetic_gamma(a: &Rational, c: &Rational, delta: &Rational, len: usize) -> GammaSeq<Rational> {
    GammaSeq::from_vec(
        (1..=len)
            .map(|k| {
                let step = int(((k - 1) / 2) as i64) * delta.clone();
                if k % 2 == 1 {
                    a.clone() + step
                } else {
                    c.clone() + step
                }
            })
            .collect(),
    )
}

fn invariance_case(gamma: &GammaSeq<Rational>, n: usize) -> Result<Option<String>> {
    if let Some(k) = kernel_invariance_witness(gamma, n)? {
        return Ok(Some(format!("increment condition fails at n = {k}")));
    }
    let d = tilde_kernel_system(gamma)?.first_difference(&kernel_system(gamma)?, n)?;
    Ok(diff_witness(d))
}

fn kernel_invariance(opts: &VerifyOptions) -> Vec<IdentityCheck> {
    let n = opts.n;
    let len = 2 * n + 8;
    let mut lag = Tally::new("Laguerre gamma: K~ = K", 1, n);
    for alpha in laguerre_alphas() {
        for branch in [0u8, 1] {
            let outcome = laguerre_gamma(&alpha, branch).and_then(|g| invariance_case(&g, n));
            lag.record(&format!("alpha {alpha}, gamma_1 = {branch}"), outcome);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let progressions: Vec<_> = (0..10)
        .map(|_| {
            let (a, c) = (random_rational(&mut rng), random_rational(&mut rng));
            let delta = rat(rng.gen_range(0..=16), rng.gen_range(1..=8));
            arithmetic_gamma(&a, &c, &delta, len)
        })
        .collect();
    let mutant = bump(&progressions[0], 2 * (n / 2 + 1) + 2);
    let mut ap = Tally::new("arithmetic-progression gamma: K~ = K", 1, n);
    for (i, g) in progressions.iter().enumerate() {
        let g = if opts.corrupt && i == 0 { &mutant } else { g };
        ap.record(&format!("progression {i}"), invariance_case(g, n));
    }
    let mut mutation = Tally::new("mutated gamma is rejected", 1, n);
    let outcome = (|| {
        let cond = kernel_invariance_witness(&mutant, n)?;
        let d = tilde_kernel_system(&mutant)?.first_difference(&kernel_system(&mutant)?, n)?;
        Ok(match (cond, d) {
            (Some(_), Some(_)) => None,
            _ => Some("mutation not detected".to_string()),
        })
    })();
    mutation.record("progression 0 mutated", outcome);
    vec![lag.finish(), ap.finish(), mutation.finish()]
}

fn quasi_orth(opts: &VerifyOptions) -> Vec<IdentityCheck> {
    let n = opts.n;
    let mut t = Tally::new("x^2 Q_n - gamma_2 x [K1_n+1 + gamma_2n+3 K1_n] = P_n+2 + ...", 1, n);
    for (s, gamma) in samples(opts).iter().enumerate() {
        for k in 1..=n {
            let rhs = if opts.corrupt && s == 0 {
                bump(gamma, 2 * k + 2)
            } else {
                gamma.clone()
            };
            t.record(
                &format!("sample {s}, n = {k}"),
                quasi_orthogonality_check_against(gamma, &rhs, k)
                    .map(|r| (!r.holds).then(|| format!("difference {}", r.difference))),
            );
        }
    }
    vec![t.finish()]
}

fn lu_case(
    sys: &ThreeTermSystem<Rational>,
    gamma1: &Rational,
    size: usize,
    corrupt: bool,
) -> Result<[Option<String>; 3]> {
    let j = truncate(sys, size)?;
    let f = lu_factor(&j, gamma1)?;
    let gamma = gamma_from_system(sys, gamma1, size)?;
    let mut expected = j.clone();
    if corrupt {
        expected.diag[0] = expected.diag[0].clone() + int(1);
    }
    let product = (f.product() != expected).then(|| "L U + shift differs from J".to_string());
    let pivots = (0..size)
        .find(|&k| {
            f.u_diag[k] != gamma.get(2 * k + 2).unwrap()
                || (k + 1 < size && f.l_sub[k] != gamma.get(2 * k + 3).unwrap())
        })
        .map(|k| format!("entry {}", k + 1));
    let ul = ul_product(&f);
    let kern = truncate(&kernel_system(&gamma)?, size)?;
    let ul_ok = ul.sub == kern.sub
        && ul.diag[..size - 1] == kern.diag[..size - 1]
        && ul.diag[size - 1] == gamma.get(2 * size)?;
    let ul_w = (!ul_ok).then(|| "U L differs from the kernel matrix".to_string());
    Ok([product, pivots, ul_w])
}

fn lu(opts: &VerifyOptions) -> Vec<IdentityCheck> {
    let n = opts.n;
    let mut cases: Vec<(String, ThreeTermSystem<Rational>, Rational)> = Vec::new();
    for alpha in laguerre_alphas() {
        cases.push((format!("laguerre {alpha}"), laguerre_system(&alpha).unwrap(), int(0)));
    }
    for alpha in [int(0), rat(1, 2)] {
        cases.push((format!("e_family {alpha}"), e_family_system(&alpha).unwrap(), int(1)));
    }
    cases.push(("laguerre_assoc1 0".into(), laguerre_assoc1(&int(0)).unwrap(), int(1)));
    if let Ok(rr) = RRParams::new(int(10)).system() {
        cases.push(("routh_romanovski 10".into(), rr, int(0)));
    }
    for (s, gamma) in samples(opts).iter().enumerate() {
        if let Ok(sys) = system_from_gamma(gamma) {
            cases.push((format!("sample {s}"), sys, gamma.get(1).unwrap()));
        }
    }
    let mut tallies = [
        Tally::new("L U = J", 1, n),
        Tally::new("pivots = gamma_2, gamma_4, ...; multipliers = gamma_3, gamma_5, ...", 1, n),
        Tally::new("U L = kernel Jacobi off the boundary", 1, n),
    ];
    for (i, (name, sys, g1)) in cases.iter().enumerate() {
        let cap = sys.depth().map_or(n, |d| n.min(d.saturating_sub(1)));
        for size in 1..=cap {
            let case = format!("{name}, n = {size}");
            match lu_case(sys, g1, size, opts.corrupt && i == 0) {
                Ok(ws) => {
                    for (t, w) in tallies.iter_mut().zip(ws) {
                        t.record(&case, Ok(w));
                    }
                }
                Err(e) => {
                    for t in tallies.iter_mut() {
                        t.record(&case, Err(e.clone()));
                    }
                }
            }
        }
    }
    tallies.into_iter().map(Tally::finish).collect()
}

fn laguerre(opts: &VerifyOptions) -> Vec<IdentityCheck> {
    let n = opts.n;
    let mut gamma_t = Tally::new("gamma_2n = n + alpha, gamma_2n+1 = n (recovered)", 1, n);
    let mut m_t = Tally::new("m_n = n / (2n + alpha + 1)", 0, n);
    let mut k_t = Tally::new("kernel system = L^(alpha+1)", 1, n);
    for (i, alpha) in laguerre_alphas().into_iter().enumerate() {
        let case = format!("alpha {alpha}");
        let corrupt = opts.corrupt && i == 0;
        let outcome = (|| {
            let sys = laguerre_system(&alpha)?;
            let rec = gamma_from_system(&sys, &int(0), n)?;
            let mut closed = laguerre_gamma(&alpha, 0)?;
            if corrupt {
                closed = bump(&closed, 3);
            }
            Ok((1..=2 * n + 2)
                .find(|&k| rec.get(k).ok() != closed.get(k).ok())
                .map(|k| format!("gamma_{k}")))
        })();
        gamma_t.record(&case, outcome);
        let outcome = (|| {
            let sys = laguerre_system(&alpha)?;
            let m = minimal_parameters(&chain_at(&sys, &int(0), n)?, n)?;
            Ok((0..=n)
                .find(|&k| {
                    let mut expect = int(k as i64) / (int(2 * k as i64 + 1) + alpha.clone());
                    if corrupt && k == 1 {
                        expect += int(1);
                    }
                    m.values()[k] != expect
                })
                .map(|k| format!("m_{k}")))
        })();
        m_t.record(&case, outcome);
        let outcome = (|| {
            let mut gamma = laguerre_gamma(&alpha, 0)?;
            if corrupt {
                gamma = bump(&gamma, 2);
            }
            let d = kernel_system(&gamma)?
                .first_difference(&laguerre_system(&(alpha.clone() + int(1)))?, n)?;
            Ok(diff_witness(d))
        })();
        k_t.record(&case, outcome);
    }
    vec![gamma_t.finish(), m_t.finish(), k_t.finish()]
}

fn factorial(k: usize) -> Rational {
    (1..=k as i64).fold(int(1), |acc, j| acc * int(j))
}

fn moments_suite(opts: &VerifyOptions) -> Vec<IdentityCheck> {
    let n = opts.n;
    let mut systems: Vec<(String, ThreeTermSystem<Rational>)> = laguerre_alphas()
        .into_iter()
        .map(|a| (format!("laguerre {a}"), laguerre_system(&a).unwrap()))
        .collect();
    for (s, gamma) in samples(opts).iter().take(5).enumerate() {
        if let Ok(sys) = system_from_gamma(gamma) {
            systems.push((format!("sample {s}"), sys));
        }
    }
    let mut conv = Tally::new("Laurent coefficients of convergent n = first 2n moments", 1, n);
    for (i, (name, sys)) in systems.iter().enumerate() {
        for m in 1..=n {
            let outcome = (|| {
                let (num, den) = convergent(sys, m)?;
                let series = laurent_expand(&num, &den, 2 * m)?;
                for k in 0..2 * m {
                    let mut mk = moments(sys, k)?;
                    if opts.corrupt && i == 0 && k == 2 * m - 1 {
                        mk += int(1);
                    }
                    if series.coeffs[k] != mk {
                        return Ok(Some(format!("moment {k}")));
                    }
                }
                Ok(None)
            })();
            conv.record(&format!("{name}, n = {m}"), outcome);
        }
    }
    let top = 10.max(2 * n);
    let mut fact = Tally::new("Laguerre alpha = 0 moments = k!", 0, top);
    let outcome = (|| {
        let sys = laguerre_system(&int(0))?;
        for k in 0..=top {
            let mut expect = factorial(k);
            if opts.corrupt && k == 3 {
                expect += int(1);
            }
            if moments(&sys, k)? != expect {
                return Ok(Some(format!("k = {k}")));
            }
        }
        Ok(None)
    })();
    fact.record("laguerre 0", outcome);
    vec![conv.finish(), fact.finish()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyOptions {
        VerifyOptions {
            n: 4,
            seed: 3,
            samples: 3,
            corrupt: false,
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::INDIVIDUAL.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn random_gammas_are_seeded() {
        let a = random_gammas(7, 2, 6);
        let b = random_gammas(7, 2, 6);
        assert_eq!(a[1].take(6).unwrap(), b[1].take(6).unwrap());
        let c = random_gammas(8, 2, 6);
        assert_ne!(a[0].take(6).unwrap(), c[0].take(6).unwrap());
        for g in &a {
            for v in g.take(6).unwrap() {
                assert!(v > int(0) && v <= int(128) && v >= rat(1, 64));
            }
        }
    }

    #[test]
    fn every_suite_passes_small() {
        for s in Suite::INDIVIDUAL {
            let r = run_suite(s, &small());
            assert!(r.passed, "{s}: {:?}", r.checks);
        }
    }

    #[test]
    fn every_suite_detects_corruption() {
        let opts = VerifyOptions {
            corrupt: true,
            ..small()
        };
        for s in Suite::INDIVIDUAL {
            let r = run_suite(s, &opts);
            assert!(!r.passed, "{s} missed the corruption");
            assert!(r.checks.iter().any(|c| c.witness.is_some()));
        }
    }

    #[test]
    fn all_prefixes_names() {
        let r = run_suite(Suite::All, &small());
        assert!(r.passed);
        assert!(r.checks.iter().all(|c| c.name.contains('.')));
    }

    #[test]
    fn arithmetic_progression_shape() {
        let g = arithmetic_gamma(&int(1), &int(2), &int(3), 6);
        assert_eq!(g.take(6).unwrap(), [1, 2, 4, 5, 7, 8].map(int).to_vec());
    }
}
