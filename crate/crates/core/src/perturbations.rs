//! Perturbed families built from a γ-sequence: the swapped symmetric system
//! and its even/odd split (P̃, K̃), the co-recursive P̂, the kernel
//! variants 𝒬 and 𝒰, and checks for the identities linking them.

use serde::Serialize;

use crate::chainseq::{
    chain_at, generalised_complementary, parameters_from_gamma, system_from_gamma, GammaSeq,
};
use crate::error::{Error, Result};
use crate::jacobi::{interlace_check, zero_values, Interlacing};
use crate::poly::Polynomial;
use crate::recurrence::{
    associated_sequence, count_for, exact_eq, kernel_system, monic_sequence, symmetric_sequence,
    SymmetricSystem, ThreeTermSystem,
};
use crate::scalar::Scalar;
use crate::stream::Stream;

fn require_gamma1<S: Scalar>(gamma: &GammaSeq<S>) -> Result<()> {
    if gamma.positive(1)?.is_zero() {
        Err(Error::Gamma1Zero)
    } else {
        Ok(())
    }
}

/// `ν̃_{2j-1} = γ_{2j}`, `ν̃_{2j} = γ_{2j-1}` for `j = 1..=n`: every pair
/// `(γ_{2j-1}, γ_{2j})` swapped. `ν̃_1` is never read by the recurrence.
pub fn swapped_nu<S: Scalar>(gamma: &GammaSeq<S>, n: usize) -> Result<SymmetricSystem<S>> {
    let mut nu = Vec::with_capacity(2 * n);
    for j in 1..=n {
        nu.push(gamma.get(2 * j)?);
        nu.push(gamma.get(2 * j - 1)?);
    }
    Ok(SymmetricSystem::from_vec(nu))
}

/// `ν_k = γ_k`, the unperturbed symmetric system.
pub fn plain_nu<S: Scalar>(gamma: &GammaSeq<S>, n: usize) -> Result<SymmetricSystem<S>> {
    Ok(SymmetricSystem::from_vec(gamma.take(2 * n)?))
}

fn generated<S, F>(name: &str, len: Option<usize>, f: F) -> Stream<S>
where
    S: Scalar,
    F: Fn(usize) -> Result<S> + Send + Sync + 'static,
{
    Stream::generated(name, 1, len, f)
}

/// P̃: `b̃_1 = γ_1`, `b̃_{n+1} = γ_{2n+1} + γ_{2n+2}`, `ã_n^2 = γ_{2n-1} γ_{2n+2}`.
pub fn tilde_system<S: Scalar>(gamma: &GammaSeq<S>) -> Result<ThreeTermSystem<S>> {
    gamma.validate_finite()?;
    require_gamma1(gamma)?;
    let last = gamma.last_index();
    let g = gamma.clone();
    let b = generated("b", count_for(last, 0), move |k| {
        if k == 1 {
            g.positive(1)
        } else {
            Ok(g.positive(2 * k - 1)? + g.positive(2 * k)?)
        }
    });
    let g = gamma.clone();
    let a2 = generated("a2", count_for(last, 2), move |n| {
        Ok(g.positive(2 * n - 1)? * g.positive(2 * n + 2)?)
    });
    Ok(ThreeTermSystem::new(b, a2))
}

/// P̂: the P̃ recurrence with `b̂_1 = γ_1 + γ_2`. Returns the system together
/// with the index of a vanishing `â_n^2` (only `n = 1`, when `γ_1 = 0`).
pub fn hat_system_lenient<S: Scalar>(gamma: &GammaSeq<S>) -> Result<(ThreeTermSystem<S>, Option<usize>)> {
    gamma.validate_finite()?;
    let degenerate = gamma.positive(1)?.is_zero().then_some(1);
    let last = gamma.last_index();
    let g = gamma.clone();
    let b = generated("b", count_for(last, 0), move |k| {
        Ok(g.positive(2 * k - 1)? + g.positive(2 * k)?)
    });
    let g = gamma.clone();
    let a2 = generated("a2", count_for(last, 2), move |n| {
        Ok(g.positive(2 * n - 1)? * g.positive(2 * n + 2)?)
    });
    Ok((ThreeTermSystem::new(b, a2), degenerate))
}

pub fn hat_system<S: Scalar>(gamma: &GammaSeq<S>) -> Result<ThreeTermSystem<S>> {
    match hat_system_lenient(gamma)? {
        (_, Some(n)) => Err(Error::DegenerateFavard(n)),
        (sys, None) => Ok(sys),
    }
}

/// K̃: `b_{m} = γ_{2m-1} + γ_{2m+2}`, `a_n^2 = γ_{2n+1} γ_{2n+2}`.
pub fn tilde_kernel_system<S: Scalar>(gamma: &GammaSeq<S>) -> Result<ThreeTermSystem<S>> {
    gamma.validate_finite()?;
    let last = gamma.last_index();
    let g = gamma.clone();
    let b = generated("b", count_for(last, 2), move |m| {
        Ok(g.positive(2 * m - 1)? + g.positive(2 * m + 2)?)
    });
    let g = gamma.clone();
    let a2 = generated("a2", count_for(last, 2), move |n| {
        Ok(g.positive(2 * n + 1)? * g.positive(2 * n + 2)?)
    });
    Ok(ThreeTermSystem::new(b, a2))
}

/// First `n ≤ n_max` with `γ_{2n+1} - γ_{2n-1} ≠ γ_{2n+2} - γ_{2n}`.
pub fn kernel_invariance_witness<S: Scalar>(gamma: &GammaSeq<S>, n_max: usize) -> Result<Option<usize>> {
    for n in 1..=n_max {
        let odd = gamma.get(2 * n + 1)? - gamma.get(2 * n - 1)?;
        let even = gamma.get(2 * n + 2)? - gamma.get(2 * n)?;
        if odd != even {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

pub fn kernel_invariance_condition<S: Scalar>(gamma: &GammaSeq<S>, n_max: usize) -> Result<bool> {
    Ok(kernel_invariance_witness(gamma, n_max)?.is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnifiedVariant {
    TildeP,
    TildeK,
}

/// Coefficients of `𝒯_{n+1} = (x - ξ_{n+1}) 𝒯_n - η_{n+1} 𝒯_{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnifiedCoefficients<S> {
    pub variant: UnifiedVariant,
    /// `ξ_1..ξ_N`.
    pub xi: Vec<S>,
    /// `η_1`, absent for `TildeP`.
    pub eta1: Option<S>,
    /// `η_2..η_N`.
    pub eta: Vec<S>,
}

impl<S: Scalar> UnifiedCoefficients<S> {
    pub fn system(&self) -> ThreeTermSystem<S> {
        ThreeTermSystem::from_vecs(self.xi.clone(), self.eta.clone())
    }
}

/// Builds ξ, η from the P-system `(1)` and the kernel system `(2)` of `gamma`.
///
/// TildeP: `ξ_1 = γ_1`, `ξ_{n+1} = b^(1)_{n+1}`,
/// `η_{n+1} = a^(2)_{n-1} a^(2)_n / a^(1)_n` (with `a^(2)_0 = γ_1 γ_2`).
/// TildeK: `ξ_{n+1} = b^(1)_{n+1} + b^(1)_{n+2} - b^(2)_{n+1}`,
/// `η_1 = γ_1 γ_2`, `η_{n+1} = a^(2)_n`.
pub fn unified_coefficients<S: Scalar>(
    gamma: &GammaSeq<S>,
    variant: UnifiedVariant,
    n_max: usize,
) -> Result<UnifiedCoefficients<S>> {
    let p1 = system_from_gamma(gamma)?;
    let p2 = kernel_system(gamma)?;
    let g1g2 = gamma.positive(1)? * gamma.positive(2)?;
    let a2_2 = |n: usize| if n == 0 { Ok(g1g2.clone()) } else { p2.a2(n) };
    match variant {
        UnifiedVariant::TildeP => {
            require_gamma1(gamma)?;
            let mut xi = Vec::with_capacity(n_max);
            let mut eta = Vec::new();
            for k in 1..=n_max {
                xi.push(if k == 1 { gamma.get(1)? } else { p1.b(k)? });
                if k >= 2 {
                    let n = k - 1;
                    eta.push(a2_2(n - 1)? * a2_2(n)? / p1.a2(n)?);
                }
            }
            Ok(UnifiedCoefficients {
                variant,
                xi,
                eta1: None,
                eta,
            })
        }
        UnifiedVariant::TildeK => {
            let mut xi = Vec::with_capacity(n_max);
            let mut eta = Vec::new();
            for k in 1..=n_max {
                xi.push(p1.b(k)? + p1.b(k + 1)? - p2.b(k)?);
                if k >= 2 {
                    eta.push(a2_2(k - 1)?);
                }
            }
            Ok(UnifiedCoefficients {
                variant,
                xi,
                eta1: Some(g1g2),
                eta,
            })
        }
    }
}

/// 𝒬: `b_{n+1} = γ_{2n+3} + γ_{2n+4}`, `a_n^2 = γ_{2n+2} γ_{2n+3}`.
pub fn q_system<S: Scalar>(gamma: &GammaSeq<S>) -> Result<ThreeTermSystem<S>> {
    gamma.validate_finite()?;
    let last = gamma.last_index();
    let g = gamma.clone();
    let b = generated("b", count_for(last, 2), move |k| {
        Ok(g.positive(2 * k + 1)? + g.positive(2 * k + 2)?)
    });
    let g = gamma.clone();
    let a2 = generated("a2", count_for(last, 3), move |n| {
        Ok(g.positive(2 * n + 2)? * g.positive(2 * n + 3)?)
    });
    Ok(ThreeTermSystem::new(b, a2))
}

/// 𝒰: `b_1 = γ_3`, `b_{n+1} = γ_{2n+2} + γ_{2n+3}`, `a_n^2 = μ_n = γ_{2n+1} γ_{2n+2}`.
pub fn u_system<S: Scalar>(gamma: &GammaSeq<S>) -> Result<ThreeTermSystem<S>> {
    let last = gamma.last_index();
    let g = gamma.clone();
    let b = generated("b", count_for(last, 1), move |k| {
        if k == 1 {
            g.get(3)
        } else {
            Ok(g.get(2 * k)? + g.get(2 * k + 1)?)
        }
    });
    let g = gamma.clone();
    let a2 = generated("a2", count_for(last, 2), move |n| {
        let mu = g.get(2 * n + 1)? * g.get(2 * n + 2)?;
        if mu.is_positive() {
            Ok(mu)
        } else {
            Err(Error::DegenerateFavard(n))
        }
    });
    Ok(ThreeTermSystem::new(b, a2))
}

/// The P-system whose kernel polynomials are `kernel_system(gamma)`: the
/// decomposition with γ₁ replaced by 0.
pub fn kernel_base_system<S: Scalar>(gamma: &GammaSeq<S>) -> Result<ThreeTermSystem<S>> {
    system_from_gamma(&gamma.with_gamma1(S::zero()))
}

#[derive(Clone, Debug)]
pub struct QuasiOrthReport<S> {
    pub n: usize,
    pub holds: bool,
    /// `lhs - rhs`; zero when the identity holds.
    pub difference: Polynomial<S>,
}

/// Left side `x^2 𝒬_n - γ_2 x [𝒦^(1)_{n+1} + γ_{2n+3} 𝒦^(1)_n]`.
pub fn quasi_orth_lhs<S: Scalar>(gamma: &GammaSeq<S>, n: usize) -> Result<Polynomial<S>> {
    let q = monic_sequence(&q_system(gamma)?, n)?;
    let k1 = associated_sequence(&kernel_system(gamma)?, n + 1)?;
    let bracket = &k1[n + 1] + &k1[n].scale(&gamma.get(2 * n + 3)?);
    Ok(&q[n].shift_up().shift_up() - &bracket.shift_up().scale(&gamma.get(2)?))
}

/// Right side `P_{n+2} + (γ_{2n+3} + γ_{2n+4}) P_{n+1} + γ_{2n+2} γ_{2n+3} P_n`.
pub fn quasi_orth_rhs<S: Scalar>(gamma: &GammaSeq<S>, n: usize) -> Result<Polynomial<S>> {
    let p = monic_sequence(&kernel_base_system(gamma)?, n + 2)?;
    let c1 = gamma.get(2 * n + 3)? + gamma.get(2 * n + 4)?;
    let c0 = gamma.get(2 * n + 2)? * gamma.get(2 * n + 3)?;
    Ok(&(&p[n + 2] + &p[n + 1].scale(&c1)) + &p[n].scale(&c0))
}

/// Order-2 quasi-orthogonality identity, with both sides built from
/// possibly different γ (equal in normal use; differing in negative controls).
pub fn quasi_orthogonality_check_against<S: Scalar>(
    gamma_lhs: &GammaSeq<S>,
    gamma_rhs: &GammaSeq<S>,
    n: usize,
) -> Result<QuasiOrthReport<S>> {
    if n == 0 {
        return Err(Error::InvalidArgument("quasi-orthogonality needs n ≥ 1".into()));
    }
    let difference = &quasi_orth_lhs(gamma_lhs, n)? - &quasi_orth_rhs(gamma_rhs, n)?;
    Ok(QuasiOrthReport {
        n,
        holds: difference.is_zero(),
        difference,
    })
}

pub fn quasi_orthogonality_check<S: Scalar>(gamma: &GammaSeq<S>, n: usize) -> Result<QuasiOrthReport<S>> {
    quasi_orthogonality_check_against(gamma, gamma, n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub n_max: usize,
    pub swapped: bool,
    /// Degrees where `even_part(S̃_{2n}) ≠ P̃_n`.
    pub even_failures: Vec<usize>,
    /// Degrees where `odd_part(S̃_{2n+1}) ≠ K̃_n`.
    pub odd_failures: Vec<usize>,
}

impl SplitReport {
    pub fn holds(&self) -> bool {
        self.even_failures.is_empty() && self.odd_failures.is_empty()
    }
}

fn split_compare<S: Scalar>(
    sym: &SymmetricSystem<S>,
    even_sys: &ThreeTermSystem<S>,
    odd_sys: &ThreeTermSystem<S>,
    n_max: usize,
    swapped: bool,
) -> Result<SplitReport> {
    let s = symmetric_sequence(sym, 2 * n_max + 1)?;
    let pe = monic_sequence(even_sys, n_max)?;
    let po = monic_sequence(odd_sys, n_max)?;
    let mut report = SplitReport {
        n_max,
        swapped,
        even_failures: Vec::new(),
        odd_failures: Vec::new(),
    };
    for n in 0..=n_max {
        if !s[2 * n].even_part().is_ok_and(|e| exact_eq(&e, &pe[n])) {
            report.even_failures.push(n);
        }
        if !s[2 * n + 1].odd_part().is_ok_and(|o| exact_eq(&o, &po[n])) {
            report.odd_failures.push(n);
        }
    }
    Ok(report)
}

/// Builds S̃ from the swapped ν and compares its even/odd parts with P̃ and
/// K̃ for degrees `0..=n_max`.
pub fn swapped_split_check<S: Scalar>(gamma: &GammaSeq<S>, n_max: usize) -> Result<SplitReport> {
    swapped_split_check_against(gamma, gamma, n_max)
}

/// [`swapped_split_check`] with the split taken from `gamma_split` and P̃, K̃
/// built from `gamma_systems`.
pub fn swapped_split_check_against<S: Scalar>(
    gamma_split: &GammaSeq<S>,
    gamma_systems: &GammaSeq<S>,
    n_max: usize,
) -> Result<SplitReport> {
    require_gamma1(gamma_split)?;
    let sym = swapped_nu(gamma_split, n_max + 1)?;
    split_compare(
        &sym,
        &tilde_system(gamma_systems)?,
        &tilde_kernel_system(gamma_systems)?,
        n_max,
        true,
    )
}

/// Same comparison without the swap: `ν = γ` splits into the γ₁ = 0 system
/// and its kernel system.
pub fn unswapped_split_check<S: Scalar>(gamma: &GammaSeq<S>, n_max: usize) -> Result<SplitReport> {
    let sym = plain_nu(gamma, n_max + 1)?;
    split_compare(&sym, &kernel_base_system(gamma)?, &kernel_system(gamma)?, n_max, false)
}

/// Compares the chain `ω̂_n(0)` of P̂ with the generalised complementary chain
/// of the parameters `g_n = γ_{2n+1} / b_{n+1}`, and checks `k'_n = 1 - g_n`.
/// Returns the first failing index.
pub fn gccs_witness<S: Scalar>(gamma: &GammaSeq<S>, n_max: usize) -> Result<Option<usize>> {
    gccs_witness_against(gamma, gamma, n_max)
}

/// [`gccs_witness`] with the parameters from `gamma` and P̂ from `gamma_hat`.
pub fn gccs_witness_against<S: Scalar>(
    gamma: &GammaSeq<S>,
    gamma_hat: &GammaSeq<S>,
    n_max: usize,
) -> Result<Option<usize>> {
    let g = parameters_from_gamma(gamma, n_max)?;
    let gc = generalised_complementary(&g)?;
    let hat = hat_system(gamma_hat)?;
    let d = chain_at(&hat, &S::zero(), n_max)?;
    for n in 0..=n_max {
        if gc.parameters.values()[n] != S::one() - g.values()[n].clone() {
            return Ok(Some(n));
        }
        if n >= 1 && d.get(n)? != gc.chain.get(n)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum InterlacingVerdict {
    /// Equal root sums: strict interlacing is impossible.
    ExcludedEqualSums,
    /// `x_j - x̃_j` has the wrong sign for the sign of `γ_2 - γ_1`.
    ExcludedBySignObstruction { witness: usize },
    ObservedNumerically,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroSumReport {
    pub n: usize,
    pub zeros: Vec<f64>,
    pub zeros_tilde: Vec<f64>,
    pub sum: f64,
    pub sum_tilde: f64,
    /// `γ_2 + γ_3 + ⋯ + γ_{2n}`.
    pub exact_sum: String,
    /// `γ_1 + γ_3 + ⋯ + γ_{2n}`.
    pub exact_sum_tilde: String,
    /// Exact traces agree with the γ sums.
    pub traces_match: bool,
    /// Float zero sums agree with the exact sums within `n·tol`.
    pub sums_match: bool,
    pub verdict: InterlacingVerdict,
}

/// Zeros of `P_n` (γ₁ = 0 branch) and `P̃_n`, their sums, and whether the
/// two zero sets can interlace.
pub fn zero_sum_interlacing_report<S: Scalar>(
    gamma: &GammaSeq<S>,
    n: usize,
    tol: f64,
) -> Result<ZeroSumReport> {
    require_gamma1(gamma)?;
    if n == 0 {
        return Err(Error::InvalidArgument("zero sums need n ≥ 1".into()));
    }
    let p = kernel_base_system(gamma)?;
    let pt = tilde_system(gamma)?;
    let tail = (3..=2 * n).try_fold(S::zero(), |acc, k| Ok::<_, Error>(acc + gamma.get(k)?))?;
    let (g1, g2) = (gamma.get(1)?, gamma.get(2)?);
    let exact_sum = g2.clone() + tail.clone();
    let exact_sum_tilde = g1.clone() + tail;
    let trace = |s: &ThreeTermSystem<S>| -> Result<S> {
        Ok(s.b_stream().take(n)?.into_iter().fold(S::zero(), |a, b| a + b))
    };
    let traces_match = trace(&p)? == exact_sum && trace(&pt)? == exact_sum_tilde;
    let zeros = zero_values(&p, n, tol)?;
    let zeros_tilde = zero_values(&pt, n, tol)?;
    let sum: f64 = zeros.iter().sum();
    let sum_tilde: f64 = zeros_tilde.iter().sum();
    let slack = n as f64 * tol + 1e-9 * (sum.abs() + sum_tilde.abs());
    let sums_match =
        (sum - exact_sum.to_f64()).abs() <= slack && (sum_tilde - exact_sum_tilde.to_f64()).abs() <= slack;

    let verdict = if g1 == g2 {
        InterlacingVerdict::ExcludedEqualSums
    } else {
        // Interlacing forces every x_j - x̃_j to share the sign of γ_2 - γ_1.
        let positive = g2 > g1;
        let witness = (0..n).find(|&j| {
            let d = zeros[j] - zeros_tilde[j];
            if positive {
                d < -tol
            } else {
                d > tol
            }
        });
        match witness {
            Some(j) => InterlacingVerdict::ExcludedBySignObstruction { witness: j + 1 },
            None => match interlace_check(&zeros, &zeros_tilde, tol)? {
                Interlacing::Interlaced => InterlacingVerdict::ObservedNumerically,
                Interlacing::NotInterlaced { .. } | Interlacing::Unresolved { .. } => {
                    InterlacingVerdict::Undetermined
                }
            },
        }
    };
    Ok(ZeroSumReport {
        n,
        zeros,
        zeros_tilde,
        sum,
        sum_tilde,
        exact_sum: exact_sum.to_text(),
        exact_sum_tilde: exact_sum_tilde.to_text(),
        traces_match,
        sums_match,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{laguerre_gamma, laguerre_system};
    use crate::recurrence::{associated_eval, monic_eval};
    use crate::scalar::{int, rat, Rational};

    type P = Polynomial<Rational>;

    fn g(v: &[i64]) -> GammaSeq<Rational> {
        GammaSeq::from_vec(v.iter().map(|&x| int(x)).collect())
    }

    fn sample(len: i64) -> GammaSeq<Rational> {
        GammaSeq::from_vec((1..=len).map(|k| rat((k * 7) % 11 + 1, (k * 5) % 6 + 1)).collect())
    }

    #[test]
    fn swapped_nu_examples() {
        let s = swapped_nu(&g(&[1, 2, 3, 4]), 2).unwrap();
        assert_eq!(s.nu_stream().take(4).unwrap(), [2, 1, 4, 3].map(int).to_vec());
        let s = swapped_nu(&g(&[1, 1, 2, 2]), 2).unwrap();
        assert_eq!(s.nu_stream().take(4).unwrap(), [1, 1, 2, 2].map(int).to_vec());
        let h = GammaSeq::from_vec(vec![int(1), rat(3, 2), int(2), rat(5, 2), int(3), rat(7, 2)]);
        let s = swapped_nu(&h, 3).unwrap();
        assert_eq!(
            s.nu_stream().take(6).unwrap(),
            vec![rat(3, 2), int(1), rat(5, 2), int(2), rat(7, 2), int(3)]
        );
        assert!(swapped_nu(&g(&[1, 2, 3]), 2).is_err());
    }

    #[test]
    fn tilde_and_hat_examples() {
        let gamma = g(&[1, 2, 3, 4]);
        let t = tilde_system(&gamma).unwrap();
        assert_eq!(monic_eval(&t, 1).unwrap(), P::from_i64(&[-1, 1]));
        assert_eq!(monic_eval(&t, 2).unwrap(), P::from_i64(&[3, -8, 1]));
        let h = hat_system(&gamma).unwrap();
        assert_eq!(monic_eval(&h, 1).unwrap(), P::from_i64(&[-3, 1]));
        assert_eq!(monic_eval(&h, 2).unwrap(), P::from_i64(&[17, -10, 1]));
        // co-recursive: P̃_1 - P̂_1 = γ_2
        let d = &monic_eval(&t, 1).unwrap() - &monic_eval(&h, 1).unwrap();
        assert_eq!(d, P::constant(int(2)));
        assert_eq!(tilde_system(&g(&[0, 2, 3, 4])).unwrap_err(), Error::Gamma1Zero);
        assert_eq!(hat_system(&g(&[0, 2, 3, 4])).unwrap_err(), Error::DegenerateFavard(1));
        let (sys, flag) = hat_system_lenient(&g(&[0, 2, 3, 4])).unwrap();
        assert_eq!(flag, Some(1));
        assert_eq!(monic_eval(&sys, 2).unwrap(), P::from_i64(&[14, -9, 1]));
    }

    #[test]
    fn e_tail_tilde_and_hat() {
        for alpha in [int(0), rat(1, 2), int(2)] {
            let gamma = laguerre_gamma(&alpha, 1).unwrap();
            let t = tilde_system(&gamma).unwrap();
            assert_eq!(t.b(1).unwrap(), int(1));
            for n in 1..=10i64 {
                assert_eq!(t.b(n as usize + 1).unwrap(), int(2 * n + 2) + alpha.clone());
                assert_eq!(t.a2(n as usize).unwrap(), int(n) * (int(n + 1) + alpha.clone()));
            }
            let h = hat_system(&gamma).unwrap();
            let l1 = laguerre_system(&(alpha + int(1))).unwrap();
            assert_eq!(h.first_difference(&l1, 20).unwrap(), None);
        }
    }

    #[test]
    fn tilde_kernel_examples() {
        let gamma = g(&[1, 2, 3, 4, 5, 6]);
        let k = tilde_kernel_system(&gamma).unwrap();
        assert_eq!(monic_eval(&k, 0).unwrap(), P::one());
        assert_eq!(monic_eval(&k, 1).unwrap(), P::from_i64(&[-5, 1]));
        let lag = laguerre_gamma(&rat(3, 2), 0).unwrap();
        let a = tilde_kernel_system(&lag).unwrap();
        let b = kernel_system(&lag).unwrap();
        assert_eq!(a.first_difference(&b, 15).unwrap(), None);
    }

    #[test]
    fn invariance_condition() {
        assert!(kernel_invariance_condition(&laguerre_gamma(&int(0), 1).unwrap(), 30).unwrap());
        assert!(kernel_invariance_condition(&laguerre_gamma(&rat(5, 3), 0).unwrap(), 30).unwrap());
        let broken = g(&[1, 2, 3, 4, 5, 7, 7, 8]);
        assert_eq!(kernel_invariance_witness(&broken, 3).unwrap(), Some(2));
        let constant = GammaSeq::from_vec(vec![rat(2, 3); 12]);
        assert!(kernel_invariance_condition(&constant, 5).unwrap());
        let a = tilde_kernel_system(&constant).unwrap();
        let b = kernel_system(&constant).unwrap();
        assert_eq!(a.first_difference(&b, 5).unwrap(), None);
    }

    #[test]
    fn unified_examples() {
        let gamma = g(&[1, 2, 3, 4, 5, 6]);
        let u = unified_coefficients(&gamma, UnifiedVariant::TildeP, 2).unwrap();
        assert_eq!(u.eta[0], int(4));
        let u3 = unified_coefficients(&g(&[1, 2, 3, 4, 5, 6, 7, 8]), UnifiedVariant::TildeP, 3).unwrap();
        assert_eq!(u3.eta[1], int(18));
        assert_eq!(monic_eval(&u.system(), 2).unwrap(), P::from_i64(&[3, -8, 1]));
        let k = unified_coefficients(&gamma, UnifiedVariant::TildeK, 1).unwrap();
        assert_eq!(k.xi[0], int(5));
        assert_eq!(k.eta1, Some(int(2)));
        assert_eq!(
            unified_coefficients(&g(&[0, 2, 3, 4]), UnifiedVariant::TildeP, 1).unwrap_err(),
            Error::Gamma1Zero
        );
    }

    #[test]
    fn unified_generates_tilde_families() {
        let gamma = sample(40);
        let n = 15;
        let up = unified_coefficients(&gamma, UnifiedVariant::TildeP, n).unwrap();
        let uk = unified_coefficients(&gamma, UnifiedVariant::TildeK, n).unwrap();
        assert_eq!(
            monic_sequence(&up.system(), n).unwrap(),
            monic_sequence(&tilde_system(&gamma).unwrap(), n).unwrap()
        );
        assert_eq!(
            monic_sequence(&uk.system(), n).unwrap(),
            monic_sequence(&tilde_kernel_system(&gamma).unwrap(), n).unwrap()
        );
    }

    #[test]
    fn q_and_u_systems() {
        let gamma = g(&[1, 2, 3, 4, 5, 6]);
        let q = q_system(&gamma).unwrap();
        assert_eq!(monic_eval(&q, 0).unwrap(), P::one());
        assert_eq!(monic_eval(&q, 1).unwrap(), P::from_i64(&[-7, 1]));
        let u = u_system(&gamma).unwrap();
        assert_eq!(u.b(1).unwrap(), int(3));
        assert_eq!(u.b(2).unwrap(), int(9));
        assert_eq!(u.a2(1).unwrap(), int(12));
        let lag = laguerre_gamma(&int(0), 0).unwrap();
        let q = q_system(&lag).unwrap();
        assert_eq!(q.b(1).unwrap(), lag.get(3).unwrap() + lag.get(4).unwrap());
        assert_eq!(monic_eval(&q, 1).unwrap(), P::from_i64(&[-3, 1]));
        let bad = g(&[1, 2, 3, 0, 5, 6]);
        assert_eq!(u_system(&bad).unwrap().a2(1).unwrap_err(), Error::DegenerateFavard(1));
    }

    #[test]
    fn u_identities() {
        let gamma = sample(30);
        let n = 10;
        let q = monic_sequence(&q_system(&gamma).unwrap(), n).unwrap();
        let u = monic_sequence(&u_system(&gamma).unwrap(), n + 1).unwrap();
        let k = monic_sequence(&kernel_system(&gamma).unwrap(), n + 1).unwrap();
        let k1 = associated_sequence(&kernel_system(&gamma).unwrap(), n + 1).unwrap();
        let g2 = gamma.get(2).unwrap();
        for j in 0..=n {
            assert_eq!(q[j].shift_up(), &u[j + 1] + &u[j].scale(&gamma.get(2 * j + 3).unwrap()));
        }
        for j in 0..=n + 1 {
            assert_eq!(u[j], &k[j] + &k1[j].scale(&g2));
        }
        for j in 0..=n {
            let mut prod = if j % 2 == 0 { int(-1) } else { int(1) };
            for i in 0..=j {
                prod *= gamma.get(2 * i + 3).unwrap();
            }
            assert_eq!(u[j + 1].eval(&int(0)), prod);
        }
    }

    #[test]
    fn quasi_orthogonality() {
        let lag = laguerre_gamma(&int(0), 0).unwrap();
        assert!(quasi_orthogonality_check(&lag, 1).unwrap().holds);
        let gamma = sample(40);
        for n in 1..=8 {
            let r = quasi_orthogonality_check(&gamma, n).unwrap();
            assert!(r.holds, "n = {n}: {}", r.difference);
        }
        let bad = gamma.with_override(2 * 3 + 2, rat(99, 7));
        let r = quasi_orthogonality_check_against(&gamma, &bad, 3).unwrap();
        assert!(!r.holds);
        assert!(!r.difference.is_zero());
    }

    #[test]
    fn quasi_orthogonality_without_x_factor_fails() {
        // The display without the x in front of the γ_2 bracket is not an identity.
        let gamma = sample(20);
        for n in 1..=4 {
            let q = monic_sequence(&q_system(&gamma).unwrap(), n).unwrap();
            let k1 = associated_sequence(&kernel_system(&gamma).unwrap(), n + 1).unwrap();
            let bracket = &k1[n + 1] + &k1[n].scale(&gamma.get(2 * n + 3).unwrap());
            let lhs = &q[n].shift_up().shift_up() - &bracket.scale(&gamma.get(2).unwrap());
            assert_ne!(lhs, quasi_orth_rhs(&gamma, n).unwrap());
        }
    }

    #[test]
    fn swapped_split_examples() {
        let r = swapped_split_check(&g(&[1, 2, 3, 4]), 1).unwrap();
        assert!(r.holds());
        let gamma = g(&[1, 2, 3, 4]);
        let s = symmetric_sequence(&swapped_nu(&gamma, 2).unwrap(), 4).unwrap();
        assert_eq!(s[4].even_part().unwrap(), P::from_i64(&[3, -8, 1]));
        assert_eq!(s[3], P::from_i64(&[0, -5, 0, 1]));
        assert_eq!(s[3].odd_part().unwrap(), P::from_i64(&[-5, 1]));
        let big = sample(60);
        assert!(swapped_split_check(&big, 15).unwrap().holds());
        assert!(unswapped_split_check(&big, 15).unwrap().holds());
        assert_eq!(swapped_split_check(&g(&[0, 1, 2, 3]), 1).unwrap_err(), Error::Gamma1Zero);
    }

    #[test]
    fn swapped_split_detects_mismatch() {
        // comparing the swapped split against the unswapped systems fails
        let big = sample(20);
        let sym = swapped_nu(&big, 5).unwrap();
        let r = split_compare(
            &sym,
            &kernel_base_system(&big).unwrap(),
            &kernel_system(&big).unwrap(),
            4,
            true,
        )
        .unwrap();
        assert!(!r.holds());
    }

    #[test]
    fn gccs_identity() {
        assert_eq!(gccs_witness(&sample(80), 30).unwrap(), None);
        assert_eq!(gccs_witness(&laguerre_gamma(&int(0), 1).unwrap(), 30).unwrap(), None);
    }

    #[test]
    fn zero_sums() {
        let e = laguerre_gamma(&int(0), 1).unwrap();
        let r = zero_sum_interlacing_report(&e, 3, 1e-12).unwrap();
        assert!(r.traces_match && r.sums_match);
        assert_eq!(r.verdict, InterlacingVerdict::ExcludedEqualSums);
        // γ_1 = γ_2 = 1 for α = 0: equal sums
        assert_eq!(r.exact_sum, r.exact_sum_tilde);

        let lag = laguerre_system(&int(0)).unwrap();
        let trace: Rational = (1..=3).map(|k| lag.b(k).unwrap()).sum();
        assert_eq!(trace, int(9));

        // γ_1 > γ_2: interlacing would need x_j < x̃_j everywhere
        let big1 = g(&[5, 1, 1, 2, 2, 3, 3, 4]);
        let r = zero_sum_interlacing_report(&big1, 3, 1e-12).unwrap();
        assert!(r.traces_match && r.sums_match);
        match r.verdict {
            InterlacingVerdict::ExcludedBySignObstruction { witness } => {
                assert!(r.zeros[witness - 1] > r.zeros_tilde[witness - 1]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            zero_sum_interlacing_report(&g(&[0, 1, 1, 2]), 1, 1e-12).unwrap_err(),
            Error::Gamma1Zero
        );
    }

    #[test]
    fn associated_kernel_is_well_defined() {
        let gamma = sample(10);
        let k = kernel_system(&gamma).unwrap();
        assert_eq!(associated_eval(&k, 1).unwrap(), P::one());
    }
}
