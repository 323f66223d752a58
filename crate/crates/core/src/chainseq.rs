//! Chain sequences, their parameter sequences, and the γ-decomposition of a
//! recurrence whose true interval lies in `[0, ∞)`.
//!
//! A positive chain sequence is `d_n = (1 - g_{n-1}) g_n` with `0 ≤ g_0 < 1`
//! and `0 < g_n < 1`. The γ-decomposition writes
//! `b_{n+1} = γ_{2n+1} + γ_{2n+2}` and `a_n^2 = γ_{2n} γ_{2n+1}`, giving the
//! parameters `g_n = γ_{2n+1} / b_{n+1}` of `ω_n(0) = a_n^2 / (b_n b_{n+1})`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::recurrence::{count_for, monic_sequence, ThreeTermSystem};
use crate::scalar::Scalar;
use crate::stream::Stream;

/// γ₁, γ₂, … indexed from 1. Positivity (`γ₁ ≥ 0`, `γ_k > 0` for `k ≥ 2`)
/// is checked by the operations that consume it, so invalid sequences can
/// still be built for negative controls.
#[derive(Clone, Debug)]
pub struct GammaSeq<S> {
    gamma: Stream<S>,
}

impl<S: Scalar> GammaSeq<S> {
    pub fn new(gamma: Stream<S>) -> Self {
        GammaSeq { gamma }
    }

    pub fn from_vec(values: Vec<S>) -> Self {
        Self::new(Stream::from_vec("gamma", 1, values))
    }

    pub fn generated<F>(f: F) -> Self
    where
        F: Fn(usize) -> Result<S> + Send + Sync + 'static,
    {
        Self::new(Stream::generated("gamma", 1, None, f))
    }

    pub fn stream(&self) -> &Stream<S> {
        &self.gamma
    }

    pub fn get(&self, k: usize) -> Result<S> {
        self.gamma.get(k)
    }

    /// γ_k with its sign invariant checked.
    pub fn positive(&self, k: usize) -> Result<S> {
        let v = self.gamma.get(k)?;
        let ok = if k == 1 { v >= S::zero() } else { v.is_positive() };
        if ok {
            Ok(v)
        } else {
            Err(Error::NonPositiveGamma(k))
        }
    }

    pub fn last_index(&self) -> Option<usize> {
        self.gamma.last_index()
    }

    /// Scans every entry of a finite sequence. Generated sequences pass.
    pub fn validate_finite(&self) -> Result<()> {
        if let Some(last) = self.last_index() {
            for k in 1..=last {
                self.positive(k)?;
            }
        }
        Ok(())
    }

    pub fn take(&self, count: usize) -> Result<Vec<S>> {
        self.gamma.take(count)
    }

    pub fn with_gamma1(&self, v: S) -> Self {
        self.with_override(1, v)
    }

    pub fn with_override(&self, k: usize, v: S) -> Self {
        GammaSeq {
            gamma: self.gamma.with_override(k, v),
        }
    }
}

/// `d_1, d_2, …`.
#[derive(Clone, Debug)]
pub struct ChainSequence<S> {
    d: Stream<S>,
}

impl<S: Scalar> ChainSequence<S> {
    pub fn new(d: Stream<S>) -> Self {
        ChainSequence { d }
    }

    pub fn from_vec(d: Vec<S>) -> Self {
        Self::new(Stream::from_vec("d", 1, d))
    }

    pub fn get(&self, n: usize) -> Result<S> {
        self.d.get(n)
    }

    pub fn stream(&self) -> &Stream<S> {
        &self.d
    }

    pub fn take(&self, count: usize) -> Result<Vec<S>> {
        self.d.take(count)
    }
}

/// `g_0, g_1, …` with `0 ≤ g_0 < 1` and `0 < g_n < 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterSeq<S> {
    g: Vec<S>,
    minimal: bool,
}

impl<S: Scalar> ParameterSeq<S> {
    pub fn new(g: Vec<S>) -> Result<Self> {
        let (zero, one) = (S::zero(), S::one());
        for (n, v) in g.iter().enumerate() {
            let ok = if n == 0 {
                *v >= zero && *v < one
            } else {
                *v > zero && *v < one
            };
            if !ok {
                return Err(Error::ParameterOutOfRange(n));
            }
        }
        let minimal = g.first().is_none_or(|g0| g0.is_zero());
        Ok(ParameterSeq { g, minimal })
    }

    pub fn values(&self) -> &[S] {
        &self.g
    }

    pub fn get(&self, n: usize) -> Option<&S> {
        self.g.get(n)
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// Largest index held.
    pub fn last_index(&self) -> usize {
        self.g.len().saturating_sub(1)
    }

    /// The chain `(1 - g_{n-1}) g_n`, `n = 1..`.
    pub fn chain(&self) -> ChainSequence<S> {
        ChainSequence::from_vec(
            self.g
                .windows(2)
                .map(|w| (S::one() - w[0].clone()) * w[1].clone())
                .collect(),
        )
    }
}

/// A chain together with the parameter sequence that generated it.
#[derive(Clone, Debug)]
pub struct ChainWithParameters<S> {
    pub chain: ChainSequence<S>,
    pub parameters: ParameterSeq<S>,
}

/// Forward recurrence `m_0 = 0`, `m_n = d_n / (1 - m_{n-1})`.
pub fn minimal_parameters<S: Scalar>(d: &ChainSequence<S>, n_max: usize) -> Result<ParameterSeq<S>> {
    let mut m = Vec::with_capacity(n_max + 1);
    m.push(S::zero());
    for n in 1..=n_max {
        let next = d.get(n)? / (S::one() - m[n - 1].clone());
        if !(next > S::zero() && next < S::one()) {
            return Err(Error::NotAChainSequence(n));
        }
        m.push(next);
    }
    Ok(ParameterSeq { g: m, minimal: true })
}

/// Approximate maximal parameters with the horizon used to compute them.
#[derive(Clone, Debug, Serialize)]
pub struct MaximalParameters<S> {
    pub values: Vec<S>,
    pub horizon: usize,
}

/// Backward iteration `M_{n-1} = 1 - d_n / M_n` from `M_{N+horizon} = 1`.
///
/// This is an upper approximation that decreases monotonically in the
/// horizon; entries are clamped below by the minimal parameters. `d` may be
/// zero beyond `n_max`, in which case the terminal value 1 propagates.
pub fn maximal_parameters<S: Scalar>(
    d: &ChainSequence<S>,
    n_max: usize,
    horizon: usize,
) -> Result<MaximalParameters<S>> {
    let minimal = minimal_parameters(d, n_max)?;
    let top = n_max + horizon;
    let mut values = vec![S::zero(); n_max + 1];
    let mut m = S::one();
    if top <= n_max {
        values[top] = m.clone();
    }
    for n in (1..=top).rev() {
        if !m.is_positive() {
            return Err(Error::NotAChainSequence(n));
        }
        m = S::one() - d.get(n)? / m;
        if n - 1 <= n_max {
            values[n - 1] = m.clone();
        }
    }
    if values[0] < S::zero() {
        return Err(Error::NotAChainSequence(0));
    }
    for (v, lo) in values.iter_mut().zip(minimal.values()) {
        if *v < *lo {
            *v = lo.clone();
        }
    }
    Ok(MaximalParameters { values, horizon })
}

/// Recovers γ₁..γ_{2N+2} from `b_1..b_{N+1}`, `a_1^2..a_N^2` with
/// `γ_2 = b_1 - γ_1`, `γ_{2n+1} = a_n^2 / γ_{2n}`, `γ_{2n+2} = b_{n+1} - γ_{2n+1}`.
pub fn gamma_from_system<S: Scalar>(
    sys: &ThreeTermSystem<S>,
    gamma1: &S,
    n_max: usize,
) -> Result<GammaSeq<S>> {
    let b1 = sys.b(1)?;
    if *gamma1 < S::zero() || *gamma1 >= b1 {
        return Err(Error::InvalidGamma1);
    }
    let mut g = Vec::with_capacity(2 * n_max + 2);
    g.push(gamma1.clone());
    g.push(b1 - gamma1.clone());
    for n in 1..=n_max {
        let odd = sys.a2(n)? / g[2 * n - 1].clone();
        if !odd.is_positive() {
            return Err(Error::PositivityBreak(2 * n + 1));
        }
        let even = sys.b(n + 1)? - odd.clone();
        if !even.is_positive() {
            return Err(Error::PositivityBreak(2 * n + 2));
        }
        g.push(odd);
        g.push(even);
    }
    Ok(GammaSeq::from_vec(g))
}

/// `b_n = γ_{2n-1} + γ_{2n}` (so `b_1 = γ_1 + γ_2`), `a_n^2 = γ_{2n} γ_{2n+1}`.
pub fn system_from_gamma<S: Scalar>(gamma: &GammaSeq<S>) -> Result<ThreeTermSystem<S>> {
    gamma.validate_finite()?;
    let last = gamma.last_index();
    let g = gamma.clone();
    let b = Stream::generated("b", 1, count_for(last, 0), move |n| {
        Ok(g.positive(2 * n - 1)? + g.positive(2 * n)?)
    });
    let g = gamma.clone();
    let a2 = Stream::generated("a2", 1, count_for(last, 1), move |n| {
        Ok(g.positive(2 * n)? * g.positive(2 * n + 1)?)
    });
    Ok(ThreeTermSystem::new(b, a2))
}

/// `g_n = γ_{2n+1} / b_{n+1}` for `n = 0..=n_max`; minimal iff γ₁ = 0.
pub fn parameters_from_gamma<S: Scalar>(gamma: &GammaSeq<S>, n_max: usize) -> Result<ParameterSeq<S>> {
    let sys = system_from_gamma(gamma)?;
    let g = (0..=n_max)
        .map(|n| Ok(gamma.positive(2 * n + 1)? / sys.b(n + 1)?))
        .collect::<Result<Vec<_>>>()?;
    ParameterSeq::new(g)
}

fn check_poles<S: Scalar>(sys: &ThreeTermSystem<S>, t: &S, n_max: usize) -> Result<Vec<S>> {
    (1..=n_max + 1)
        .map(|k| {
            let b = sys.b(k)?;
            if b == *t {
                Err(Error::PoleAtB(k))
            } else {
                Ok(b)
            }
        })
        .collect()
}

/// `ω_n(t) = a_n^2 / ((t - b_n)(t - b_{n+1}))`, `n = 1..=N`.
pub fn chain_at<S: Scalar>(sys: &ThreeTermSystem<S>, t: &S, n_max: usize) -> Result<ChainSequence<S>> {
    let b = check_poles(sys, t, n_max)?;
    let d = (1..=n_max)
        .map(|n| {
            Ok(sys.a2(n)? / ((t.clone() - b[n - 1].clone()) * (t.clone() - b[n].clone())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainSequence::from_vec(d))
}

/// `d_n(t)` from values of the monic polynomials:
/// `d_n = P_n / ((t - b_n) P_{n-1}) · [1 - P_{n+1} / ((t - b_{n+1}) P_n)]`.
pub fn chain_at_via_polynomials<S: Scalar>(
    sys: &ThreeTermSystem<S>,
    t: &S,
    n_max: usize,
) -> Result<ChainSequence<S>> {
    if n_max == 0 {
        return Ok(ChainSequence::from_vec(Vec::new()));
    }
    let p: Vec<S> = monic_sequence(sys, n_max + 1)?
        .iter()
        .map(|p| p.eval(t))
        .collect();
    let mut d = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let sn = t.clone() - sys.b(n)?;
        let sn1 = t.clone() - sys.b(n + 1)?;
        let den1 = sn * p[n - 1].clone();
        let den2 = sn1 * p[n].clone();
        if den1.is_zero() || den2.is_zero() {
            return Err(Error::ZeroDenominator(n));
        }
        d.push(p[n].clone() / den1 * (S::one() - p[n + 1].clone() / den2));
    }
    Ok(ChainSequence::from_vec(d))
}

/// Complementary chain: minimal parameters `k_0 = 0`, `k_n = 1 - m_n`.
pub fn complementary<S: Scalar>(m: &ParameterSeq<S>) -> Result<ChainWithParameters<S>> {
    if !m.is_minimal() {
        return Err(Error::NotMinimal);
    }
    let k: Vec<S> = m
        .values()
        .iter()
        .enumerate()
        .map(|(n, v)| if n == 0 { S::zero() } else { S::one() - v.clone() })
        .collect();
    let parameters = ParameterSeq::new(k)?;
    Ok(ChainWithParameters {
        chain: parameters.chain(),
        parameters,
    })
}

/// Generalised complementary chain: parameters `k'_n = 1 - g_n` for all
/// `n ≥ 0`. For `g_0 = 0` this reduces to [`complementary`].
pub fn generalised_complementary<S: Scalar>(g: &ParameterSeq<S>) -> Result<ChainWithParameters<S>> {
    let values = g.values();
    match values.first() {
        Some(g0) if *g0 < S::zero() || *g0 >= S::one() => return Err(Error::ParameterOutOfRange(0)),
        _ => {}
    }
    if g.is_minimal() {
        return complementary(g);
    }
    let k: Vec<S> = values.iter().map(|v| S::one() - v.clone()).collect();
    let parameters = ParameterSeq::new(k)?;
    Ok(ChainWithParameters {
        chain: parameters.chain(),
        parameters,
    })
}

/// Raw-input variant of [`generalised_complementary`] that validates the
/// parameter values itself (including `g_0 = 1`).
pub fn generalised_complementary_from_values<S: Scalar>(g: Vec<S>) -> Result<ChainWithParameters<S>> {
    generalised_complementary(&ParameterSeq::new(g)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SppcsVerdict {
    UniqueByWall,
    ComplementIsSppcs,
    Inconclusive,
}

/// Finite-window SPPCS evidence. Both criteria are evaluated; `verdict`
/// reports Wall's first, then the complement criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SppcsReport {
    pub verdict: SppcsVerdict,
    /// Every statement holds "up to" this index only.
    pub window: usize,
    pub complement_is_sppcs: bool,
    pub complement_witness: Option<usize>,
    pub unique_by_wall: bool,
    pub wall_witness: Option<usize>,
}

/// Wall criterion: `m_n / (1 - m_n) > n/(n + 1)` for `2 ≤ n ≤ N`, which keeps
/// `∏ m_k/(1-m_k)` above a multiple of `1/n` so the Wall series diverges.
/// Complement criterion: `0 < m_n < 1/2` for `1 ≤ n ≤ N`.
pub fn wall_sppcs_test<S: Scalar>(m: &ParameterSeq<S>, n_max: usize) -> SppcsReport {
    let window = n_max.min(m.last_index());
    let half = S::one() / S::from_i64(2);
    let complement_witness = (1..=window).find(|&n| {
        let v = &m.values()[n];
        !(v.is_positive() && *v < half)
    });
    let wall_witness = (2..=window).find(|&n| {
        let v = m.values()[n].clone();
        let ratio = v.clone() / (S::one() - v);
        let bound = S::from_i64(n as i64) / S::from_i64(n as i64 + 1);
        ratio <= bound
    });
    let complement_is_sppcs = complement_witness.is_none();
    let unique_by_wall = wall_witness.is_none();
    let verdict = if unique_by_wall {
        SppcsVerdict::UniqueByWall
    } else if complement_is_sppcs {
        SppcsVerdict::ComplementIsSppcs
    } else {
        SppcsVerdict::Inconclusive
    };
    SppcsReport {
        verdict,
        window,
        complement_is_sppcs,
        complement_witness,
        unique_by_wall,
        wall_witness,
    }
}

/// Interval endpoint; only the right end may be infinite.
#[derive(Clone, Debug, PartialEq)]
pub enum Endpoint<S> {
    Finite(S),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntervalWitness {
    DiagonalOutside { index: usize, value: String },
    ChainFails { endpoint: String, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IntervalVerdict {
    PassUpTo { n: usize },
    Fail { witness: IntervalWitness },
}

/// Finite-window check that the true interval lies in `(a, b)`:
/// `b_1..b_{N+1} ∈ (a, b)` and `{ω_n(a)}`, `{ω_n(b)}` admit minimal
/// parameters up to `N`. An infinite `b` skips the right-hand chain.
pub fn true_interval_predicate<S: Scalar>(
    sys: &ThreeTermSystem<S>,
    a: &S,
    b: &Endpoint<S>,
    n_max: usize,
) -> Result<IntervalVerdict> {
    for k in 1..=n_max + 1 {
        let bk = sys.b(k)?;
        let inside = bk > *a
            && match b {
                Endpoint::Finite(hi) => bk < *hi,
                Endpoint::Infinity => true,
            };
        if !inside {
            return Ok(IntervalVerdict::Fail {
                witness: IntervalWitness::DiagonalOutside {
                    index: k,
                    value: bk.to_text(),
                },
            });
        }
    }
    let mut ends = vec![("a", a.clone())];
    if let Endpoint::Finite(hi) = b {
        ends.push(("b", hi.clone()));
    }
    for (label, t) in ends {
        let d = chain_at(sys, &t, n_max)?;
        match minimal_parameters(&d, n_max) {
            Ok(_) => {}
            Err(Error::NotAChainSequence(index)) => {
                return Ok(IntervalVerdict::Fail {
                    witness: IntervalWitness::ChainFails {
                        endpoint: label.to_string(),
                        index,
                    },
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(IntervalVerdict::PassUpTo { n: n_max })
}
