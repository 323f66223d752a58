//! Monic three-term recurrences and the objects they generate: the OPS
//! itself, associated polynomials, symmetric systems, the kernel system of a
//! γ-decomposition, moments and J-fraction convergents.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chainseq::GammaSeq;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::stream::Stream;

/// Name and parameters of the closed form a system was generated from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl ClosedForm {
    pub fn new(name: &str, params: &[(&str, String)]) -> Self {
        ClosedForm {
            name: name.to_string(),
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
    }
}

/// Recurrence data for `P_{n+1} = (x - b_{n+1}) P_n - a_n^2 P_{n-1}`.
///
/// Both streams are indexed from 1. Positivity of `a_n^2` is not enforced on
/// access; operations that need it (zeros, Favard checks) verify it.
#[derive(Clone, Debug)]
pub struct ThreeTermSystem<S> {
    b: Stream<S>,
    a2: Stream<S>,
    closed_form: Option<ClosedForm>,
}

impl<S: Scalar> ThreeTermSystem<S> {
    pub fn new(b: Stream<S>, a2: Stream<S>) -> Self {
        ThreeTermSystem {
            b,
            a2,
            closed_form: None,
        }
    }

    pub fn from_vecs(b: Vec<S>, a2: Vec<S>) -> Self {
        Self::new(Stream::from_vec("b", 1, b), Stream::from_vec("a2", 1, a2))
    }

    pub fn with_closed_form(mut self, cf: ClosedForm) -> Self {
        self.closed_form = Some(cf);
        self
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn b(&self, n: usize) -> Result<S> {
        self.b.get(n)
    }

    pub fn a2(&self, n: usize) -> Result<S> {
        self.a2.get(n)
    }

    pub fn b_stream(&self) -> &Stream<S> {
        &self.b
    }

    pub fn a2_stream(&self) -> &Stream<S> {
        &self.a2
    }

    /// Largest `n` for which `P_n` is computable, `None` when unbounded.
    pub fn depth(&self) -> Option<usize> {
        match (self.b.len(), self.a2.len()) {
            (None, None) => None,
            (Some(lb), None) => Some(lb),
            (None, Some(la)) => Some(la + 1),
            (Some(lb), Some(la)) => Some(lb.min(la + 1)),
        }
    }

    /// Checks `a_k^2 > 0` for `k = 1..=upto`.
    pub fn check_favard(&self, upto: usize) -> Result<()> {
        for k in 1..=upto {
            if !self.a2(k)?.is_positive() {
                return Err(Error::DegenerateFavard(k));
            }
        }
        Ok(())
    }

    /// Coefficientwise comparison of `b_1..b_n` and `a_1^2..a_{n-1}^2`.
    /// Returns the first differing coefficient as `("b" | "a2", index)`.
    pub fn first_difference(&self, other: &Self, n: usize) -> Result<Option<(&'static str, usize)>> {
        for k in 1..=n {
            if self.b(k)? != other.b(k)? {
                return Ok(Some(("b", k)));
            }
            if k < n && self.a2(k)? != other.a2(k)? {
                return Ok(Some(("a2", k)));
            }
        }
        Ok(None)
    }
}

/// Runs the recurrence from `(z_{k0-1}, z_{k0})` up to `z_n`, returning
/// `z_{k0}..=z_n`. The `a^2_0` term is never read: it multiplies `z_{-1} = 0`.
fn run<S: Scalar>(
    sys: &ThreeTermSystem<S>,
    n: usize,
    k0: usize,
    prev: Polynomial<S>,
    cur: Polynomial<S>,
) -> Result<Vec<Polynomial<S>>> {
    let mut out = Vec::with_capacity(n + 1);
    let (mut prev, mut cur) = (prev, cur);
    out.push(cur.clone());
    for k in k0..n {
        let mut next = &Polynomial::linear(sys.b(k + 1)?) * &cur;
        if k >= 1 {
            next = &next - &prev.scale(&sys.a2(k)?);
        }
        prev = std::mem::replace(&mut cur, next);
        out.push(cur.clone());
    }
    Ok(out)
}

/// `P_0..=P_n`.
pub fn monic_sequence<S: Scalar>(sys: &ThreeTermSystem<S>, n: usize) -> Result<Vec<Polynomial<S>>> {
    run(sys, n, 0, Polynomial::zero(), Polynomial::one())
}

pub fn monic_eval<S: Scalar>(sys: &ThreeTermSystem<S>, n: usize) -> Result<Polynomial<S>> {
    Ok(monic_sequence(sys, n)?.pop().expect("non-empty"))
}

/// `P^{(1)}_0..=P^{(1)}_n`: the second solution with `z_0 = 0`, `z_1 = 1`.
pub fn associated_sequence<S: Scalar>(
    sys: &ThreeTermSystem<S>,
    n: usize,
) -> Result<Vec<Polynomial<S>>> {
    if n == 0 {
        return Ok(vec![Polynomial::zero()]);
    }
    let mut out = vec![Polynomial::zero()];
    out.extend(run(sys, n, 1, Polynomial::zero(), Polynomial::one())?);
    Ok(out)
}

pub fn associated_eval<S: Scalar>(sys: &ThreeTermSystem<S>, n: usize) -> Result<Polynomial<S>> {
    Ok(associated_sequence(sys, n)?.pop().expect("non-empty"))
}

/// Symmetric recurrence `S_n = x S_{n-1} - ν_n S_{n-2}`, `ν` indexed from 1.
#[derive(Clone, Debug)]
pub struct SymmetricSystem<S> {
    nu: Stream<S>,
}

impl<S: Scalar> SymmetricSystem<S> {
    pub fn new(nu: Stream<S>) -> Self {
        SymmetricSystem { nu }
    }

    pub fn from_vec(nu: Vec<S>) -> Self {
        Self::new(Stream::from_vec("nu", 1, nu))
    }

    pub fn nu(&self, n: usize) -> Result<S> {
        self.nu.get(n)
    }

    pub fn nu_stream(&self) -> &Stream<S> {
        &self.nu
    }

    /// Indices `n ≥ 2` with `ν_n ≤ 0`, up to `upto`.
    pub fn positivity_violations(&self, upto: usize) -> Result<Vec<usize>> {
        let mut bad = Vec::new();
        for n in 2..=upto {
            if !self.nu(n)?.is_positive() {
                bad.push(n);
            }
        }
        Ok(bad)
    }
}

/// `S_0..=S_n`. `ν_1` is never read.
pub fn symmetric_sequence<S: Scalar>(
    sym: &SymmetricSystem<S>,
    n: usize,
) -> Result<Vec<Polynomial<S>>> {
    let mut out = vec![Polynomial::one()];
    let mut prev = Polynomial::zero();
    let mut cur = Polynomial::one();
    for k in 1..=n {
        let mut next = cur.shift_up();
        if k >= 2 {
            next = &next - &prev.scale(&sym.nu(k)?);
        }
        prev = std::mem::replace(&mut cur, next);
        out.push(cur.clone());
    }
    Ok(out)
}

pub fn symmetric_eval<S: Scalar>(sym: &SymmetricSystem<S>, n: usize) -> Result<Polynomial<S>> {
    Ok(symmetric_sequence(sym, n)?.pop().expect("non-empty"))
}

/// Number of `k ≥ 1` with `2k + c ≤ last`.
pub(crate) fn count_for(last: Option<usize>, c: usize) -> Option<usize> {
    last.map(|l| if l >= c + 2 { (l - c) / 2 } else { 0 })
}

/// Kernel polynomials `K_n(0; x)` of the OPS with γ-decomposition `gamma`:
/// `b_{n+1} = γ_{2n+2} + γ_{2n+3}`, `a_n^2 = γ_{2n+1} γ_{2n+2}`.
///
/// γ₁ does not enter. Finite inputs are scanned for positivity up front;
/// generated inputs are checked on access.
pub fn kernel_system<S: Scalar>(gamma: &GammaSeq<S>) -> Result<ThreeTermSystem<S>> {
    gamma.validate_finite()?;
    let last = gamma.last_index();
    let g = gamma.clone();
    let b = Stream::generated("b", 1, count_for(last, 1), move |k| {
        Ok(g.positive(2 * k)? + g.positive(2 * k + 1)?)
    });
    let g = gamma.clone();
    let a2 = Stream::generated("a2", 1, count_for(last, 2), move |n| {
        Ok(g.positive(2 * n + 1)? * g.positive(2 * n + 2)?)
    });
    Ok(ThreeTermSystem::new(b, a2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gamma1Branch {
    /// γ₁ was already 0.
    Zero,
    /// γ₁ > 0 was replaced by 0: the even/odd split of the symmetric system
    /// built from `ν = γ` forces `b₁ = γ₂`.
    Zeroed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeFailure {
    pub identity: &'static str,
    pub n: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelIdentityReport {
    pub branch: Gamma1Branch,
    pub n_max: usize,
    pub failures: Vec<DegreeFailure>,
}

impl KernelIdentityReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&DegreeFailure> {
        self.failures.iter().min_by_key(|f| f.n)
    }
}

/// Verifies, for `k = 0..=n`,
/// `x K_k = P_{k+1} + γ_{2k+2} P_k` and `K_k = P_k - γ_{2k+1} K_{k-1}`,
/// with `P` taken from `gamma` on the γ₁ = 0 branch.
pub fn kernel_identity_check<S: Scalar>(gamma: &GammaSeq<S>, n: usize) -> Result<KernelIdentityReport> {
    let branch = if gamma.get(1)?.is_zero() {
        Gamma1Branch::Zero
    } else {
        Gamma1Branch::Zeroed
    };
    let p_sys = crate::chainseq::system_from_gamma(&gamma.with_gamma1(S::zero()))?;
    let mut report = kernel_identity_check_against(&p_sys, gamma, n)?;
    report.branch = branch;
    Ok(report)
}

/// Same identities with the OPS supplied separately, so a mismatch between
/// `p_sys` and `gamma` is detected.
pub fn kernel_identity_check_against<S: Scalar>(
    p_sys: &ThreeTermSystem<S>,
    gamma: &GammaSeq<S>,
    n: usize,
) -> Result<KernelIdentityReport> {
    let p = monic_sequence(p_sys, n + 1)?;
    let k = monic_sequence(&kernel_system(gamma)?, n)?;
    let mut failures = Vec::new();
    for j in 0..=n {
        let lhs = k[j].shift_up();
        let rhs = &p[j + 1] + &p[j].scale(&gamma.get(2 * j + 2)?);
        if !exact_eq(&lhs, &rhs) {
            failures.push(DegreeFailure {
                identity: "x K_n = P_{n+1} + γ_{2n+2} P_n",
                n: j,
            });
        }
        let back = if j == 0 {
            p[0].clone()
        } else {
            &p[j] - &k[j - 1].scale(&gamma.get(2 * j + 1)?)
        };
        if !exact_eq(&k[j], &back) {
            failures.push(DegreeFailure {
                identity: "K_n = P_n - γ_{2n+1} K_{n-1}",
                n: j,
            });
        }
    }
    Ok(KernelIdentityReport {
        branch: Gamma1Branch::Zero,
        n_max: n,
        failures,
    })
}

/// Exact coefficient equality for either backend (floats compare bitwise
/// after subtraction, which is what "exact" means there).
pub(crate) fn exact_eq<S: Scalar>(p: &Polynomial<S>, q: &Polynomial<S>) -> bool {
    (p - q).is_zero()
}

/// `μ_k / μ_0` as the (1,1) entry of `J^k`, `J` the monic Jacobi matrix.
///
/// A path of length `k` from row 1 back to row 1 never leaves the leading
/// `⌊k/2⌋ + 1` rows, so that truncation is exact.
pub fn moments<S: Scalar>(sys: &ThreeTermSystem<S>, k: usize) -> Result<S> {
    if k == 0 {
        return Ok(S::one());
    }
    let m = k / 2 + 1;
    let b = sys.b_stream().take(m)?;
    let a2 = sys.a2_stream().take(m - 1)?;
    // row vector e_1^T J^j
    let mut row = vec![S::zero(); m];
    row[0] = S::one();
    for _ in 0..k {
        let mut next = vec![S::zero(); m];
        for (i, r) in row.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            next[i] = next[i].clone() + r.clone() * b[i].clone();
            if i + 1 < m {
                next[i + 1] = next[i + 1].clone() + r.clone();
            }
            if i > 0 {
                next[i - 1] = next[i - 1].clone() + r.clone() * a2[i - 1].clone();
            }
        }
        row = next;
    }
    Ok(row[0].clone())
}

/// `n`-th J-fraction convergent `(P^{(1)}_n, P_n)`.
pub fn convergent<S: Scalar>(
    sys: &ThreeTermSystem<S>,
    n: usize,
) -> Result<(Polynomial<S>, Polynomial<S>)> {
    Ok((associated_eval(sys, n)?, monic_eval(sys, n)?))
}

/// Coefficients of `x^{-1}, x^{-2}, …`, with the order kept explicitly.
#[derive(Clone, Debug, Serialize)]
pub struct LaurentSeries<S> {
    pub order: usize,
    pub coeffs: Vec<S>,
}

/// Expansion of `num/den` at infinity by long division in `1/x`.
pub fn laurent_expand<S: Scalar>(
    num: &Polynomial<S>,
    den: &Polynomial<S>,
    order: usize,
) -> Result<LaurentSeries<S>> {
    if !den.is_monic() {
        return Err(Error::DegreeViolation("denominator must be monic".into()));
    }
    let d = den.degree().expect("monic implies nonzero");
    if num.degree().is_some_and(|dn| dn >= d) {
        return Err(Error::DegreeViolation(format!(
            "deg numerator {} ≥ deg denominator {d}",
            num.degree().unwrap()
        )));
    }
    let mut coeffs: Vec<S> = Vec::with_capacity(order);
    for k in 1..=order {
        let mut c = if k <= d { num.coeff(d - k) } else { S::zero() };
        for j in 1..k {
            if d + j >= k {
                c = c - coeffs[j - 1].clone() * den.coeff(d + j - k);
            }
        }
        coeffs.push(c);
    }
    Ok(LaurentSeries { order, coeffs })
}
