//! Truncated monic Jacobi matrices, their bidiagonal LU factorization and
//! the UL swap, and zeros by Sturm bisection.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::recurrence::ThreeTermSystem;
use num_traits::{One, Signed, Zero as _};

use crate::scalar::{Rational, Scalar};

/// Leading `n × n` block of the monic Jacobi matrix: diagonal `b_1..b_n`,
/// subdiagonal `a_1^2..a_{n-1}^2`, unit superdiagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalMatrix<S> {
    pub diag: Vec<S>,
    pub sub: Vec<S>,
}

impl<S: Scalar> TridiagonalMatrix<S> {
    pub fn new(diag: Vec<S>, sub: Vec<S>) -> Result<Self> {
        if diag.len() != sub.len() + 1 && !(diag.is_empty() && sub.is_empty()) {
            return Err(Error::LengthMismatch(diag.len(), sub.len()));
        }
        Ok(TridiagonalMatrix { diag, sub })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn trace(&self) -> S {
        self.diag.iter().fold(S::zero(), |acc, v| acc + v.clone())
    }

    /// Dense row-major copy, for small checks.
    pub fn dense(&self) -> Vec<Vec<S>> {
        let n = self.size();
        let mut m = vec![vec![S::zero(); n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i].clone();
            if i + 1 < n {
                m[i][i + 1] = S::one();
                m[i + 1][i] = self.sub[i].clone();
            }
        }
        m
    }

    pub fn to_system(&self) -> ThreeTermSystem<S> {
        ThreeTermSystem::from_vecs(self.diag.clone(), self.sub.clone())
    }
}

pub fn truncate<S: Scalar>(sys: &ThreeTermSystem<S>, n: usize) -> Result<TridiagonalMatrix<S>> {
    let diag = sys.b_stream().take(n)?;
    let sub = sys.a2_stream().take(n.saturating_sub(1))?;
    TridiagonalMatrix::new(diag, sub)
}

/// `J - shift·E_11 = L U`: `L` unit lower bidiagonal with subdiagonal
/// `l_sub`, `U` upper bidiagonal with diagonal `u_diag` and unit superdiagonal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BidiagonalFactors<S> {
    #[serde(rename = "L_sub")]
    pub l_sub: Vec<S>,
    #[serde(rename = "U_diag")]
    pub u_diag: Vec<S>,
    #[serde(skip)]
    pub shift: S,
}

impl<S: Scalar> BidiagonalFactors<S> {
    pub fn size(&self) -> usize {
        self.u_diag.len()
    }

    /// `L U + shift·E_11`, which reproduces the factored matrix.
    pub fn product(&self) -> TridiagonalMatrix<S> {
        let n = self.size();
        let mut diag = Vec::with_capacity(n);
        let mut sub = Vec::with_capacity(n.saturating_sub(1));
        for k in 0..n {
            let mut d = self.u_diag[k].clone();
            if k == 0 {
                d = d + self.shift.clone();
            } else {
                d = d + self.l_sub[k - 1].clone();
            }
            diag.push(d);
            if k + 1 < n {
                sub.push(self.l_sub[k].clone() * self.u_diag[k].clone());
            }
        }
        TridiagonalMatrix { diag, sub }
    }
}

/// Factors `J - γ₁E_11`. With `γ₁` the first entry of a γ-decomposition the
/// pivots are `γ_2, γ_4, …` and the multipliers `γ_3, γ_5, …`.
pub fn lu_factor<S: Scalar>(j: &TridiagonalMatrix<S>, gamma1: &S) -> Result<BidiagonalFactors<S>> {
    if *gamma1 < S::zero() {
        return Err(Error::InvalidGamma1);
    }
    let n = j.size();
    let mut u_diag = Vec::with_capacity(n);
    let mut l_sub: Vec<S> = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let u = if k == 0 {
            j.diag[0].clone() - gamma1.clone()
        } else {
            j.diag[k].clone() - l_sub[k - 1].clone()
        };
        if !u.is_positive() {
            return Err(Error::PivotBreakdown(k + 1));
        }
        if k + 1 < n {
            if !j.sub[k].is_positive() {
                return Err(Error::NonPositiveA2(k + 1));
            }
            l_sub.push(j.sub[k].clone() / u.clone());
        }
        u_diag.push(u);
    }
    Ok(BidiagonalFactors {
        l_sub,
        u_diag,
        shift: gamma1.clone(),
    })
}

/// `U L`: diagonal `γ_2+γ_3, γ_4+γ_5, …, γ_{2n}`, subdiagonal
/// `γ_3γ_4, γ_5γ_6, …`. The last diagonal entry lacks `γ_{2n+1}`, which the
/// infinite product would contribute.
pub fn ul_product<S: Scalar>(f: &BidiagonalFactors<S>) -> TridiagonalMatrix<S> {
    let n = f.size();
    let diag = (0..n)
        .map(|k| match f.l_sub.get(k) {
            Some(l) => f.u_diag[k].clone() + l.clone(),
            None => f.u_diag[k].clone(),
        })
        .collect();
    let sub = (0..n.saturating_sub(1))
        .map(|k| f.u_diag[k + 1].clone() * f.l_sub[k].clone())
        .collect();
    TridiagonalMatrix { diag, sub }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Zero {
    pub value: f64,
    pub bracket_width: f64,
}

/// Number of eigenvalues below `x` of the symmetric matrix similar to
/// (`diag`, `a2`).
fn count_below(diag: &[f64], a2: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for k in 0..diag.len() {
        q = if k == 0 {
            diag[0] - x
        } else {
            (diag[k] - x) - a2[k - 1] / q
        };
        if q == 0.0 {
            q = -1e-300;
        } else if q.abs() < 1e-300 {
            q = q.signum() * 1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Zeros of `P_n`, ascending, each bracketed by bisection to width `≤ tol`
/// (or to float resolution when `tol` is below it).
pub fn zeros<S: Scalar>(sys: &ThreeTermSystem<S>, n: usize, tol: f64) -> Result<Vec<Zero>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let m = truncate(sys, n)?;
    let diag: Vec<f64> = m.diag.iter().map(Scalar::to_f64).collect();
    let mut a2 = Vec::with_capacity(m.sub.len());
    for (k, v) in m.sub.iter().enumerate() {
        if !v.is_positive() {
            return Err(Error::NonPositiveA2(k + 1));
        }
        a2.push(v.to_f64());
    }
    let off: Vec<f64> = a2.iter().map(|v| v.sqrt()).collect();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..n {
        let r = if k > 0 { off[k - 1] } else { 0.0 } + off.get(k).copied().unwrap_or(0.0);
        lo = lo.min(diag[k] - r);
        hi = hi.max(diag[k] + r);
    }
    let pad = tol + 1e-12 * (lo.abs() + hi.abs());
    let (lo, hi) = (lo - pad, hi + pad);
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let (mut a, mut b) = (lo, hi);
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if count_below(&diag, &a2, mid) >= k {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(Zero {
            value: 0.5 * (a + b),
            bracket_width: b - a,
        });
    }
    Ok(out)
}

/// Values only.
pub fn zero_values<S: Scalar>(sys: &ThreeTermSystem<S>, n: usize, tol: f64) -> Result<Vec<f64>> {
    Ok(zeros(sys, n, tol)?.into_iter().map(|z| z.value).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Interlacing {
    Interlaced,
    NotInterlaced { witness: usize },
    /// The pair at `witness` could not be separated within the refinement
    /// budget (a shared zero, or zeros closer than the budget resolves).
    Unresolved { witness: usize },
}

/// Strict interlacing `x_1 < y_1 < x_2 < …` (or with the roles swapped,
/// decided by the first entries), every gap wider than `tol`. The witness is
/// the 1-based index `j` of the first pair that breaks the pattern.
pub fn interlace_check(xs: &[f64], ys: &[f64], tol: f64) -> Result<Interlacing> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.is_empty() {
        return Ok(Interlacing::Interlaced);
    }
    let (first, second) = if xs[0] < ys[0] { (xs, ys) } else { (ys, xs) };
    for j in 0..first.len() {
        let below = first[j] + tol < second[j];
        let above = j + 1 >= first.len() || second[j] + tol < first[j + 1];
        if !(below && above) {
            return Ok(Interlacing::NotInterlaced { witness: j + 1 });
        }
    }
    Ok(Interlacing::Interlaced)
}

/// Number of zeros of `P_n` strictly below `t` and whether `P_n(t) = 0`,
/// from sign changes of `P_0(t), …, P_n(t)` (a Sturm sequence: the count of
/// changes equals the number of zeros above `t`).
fn sturm_below(b: &[Rational], a2: &[Rational], t: &Rational) -> (usize, bool) {
    let n = b.len();
    let (mut prev, mut cur) = (Rational::zero(), Rational::one());
    let mut changes = 0;
    let mut last_sign = 1;
    for k in 0..n {
        let next = (t - &b[k]) * &cur - if k > 0 { &a2[k - 1] * &prev } else { Rational::zero() };
        prev = std::mem::replace(&mut cur, next);
        let sign = if Signed::is_positive(&cur) { 1 } else if cur.is_negative() { -1 } else { 0 };
        if sign != 0 {
            if sign != last_sign {
                changes += 1;
            }
            last_sign = sign;
        }
    }
    let at_zero = cur.is_zero();
    (n - changes - usize::from(at_zero), at_zero)
}

const CERTIFY_STEPS: usize = 400;

/// Exact version of [`interlace_check`] for the zeros of `P_n` from two
/// rational systems. Float zeros only seed the search; every comparison is
/// certified by a rational separator `t` with exact Sturm counts on both
/// sides. Orientation is taken from the first float zeros.
pub fn interlace_certified(
    p: &ThreeTermSystem<Rational>,
    q: &ThreeTermSystem<Rational>,
    n: usize,
    tol: f64,
) -> Result<Interlacing> {
    if n == 0 {
        return Ok(Interlacing::Interlaced);
    }
    let (zp, zq) = (zeros(p, n, tol)?, zeros(q, n, tol)?);
    let (mp, mq) = (truncate(p, n)?, truncate(q, n)?);
    let p_first = zp[0].value <= zq[0].value;
    let (first, second, mf, ms) = if p_first { (&zp, &zq, &mp, &mq) } else { (&zq, &zp, &mq, &mp) };
    // expected order f_1 < s_1 < f_2 < s_2 < … < f_n < s_n
    for j in 0..2 * n - 1 {
        let (lo_z, lo_m, lo_rank, hi_z, hi_m, hi_rank) = if j % 2 == 0 {
            (&first[j / 2], mf, j / 2 + 1, &second[j / 2], ms, j / 2 + 1)
        } else {
            (&second[j / 2], ms, j / 2 + 1, &first[j / 2 + 1], mf, j / 2 + 2)
        };
        let witness = j / 2 + 1;
        let pad = 2.0 * lo_z.bracket_width.max(hi_z.bracket_width)
            + 1e-9 * (lo_z.value.abs() + hi_z.value.abs() + 1.0);
        let (a, b) = (lo_z.value.min(hi_z.value) - pad, lo_z.value.max(hi_z.value) + pad);
        let (Some(mut a), Some(mut b)) = (Rational::from_float(a), Rational::from_float(b)) else {
            return Err(Error::InvalidArgument("zero estimate is not finite".into()));
        };
        let mut found = false;
        for _ in 0..CERTIFY_STEPS {
            let t = (&a + &b) / Rational::from_integer(2.into());
            // lower zero must be < t, upper zero must be > t
            let (below_lo, _) = sturm_below(&lo_m.diag, &lo_m.sub, &t);
            let (below_hi, hi_at) = sturm_below(&hi_m.diag, &hi_m.sub, &t);
            let lo_ok = below_lo >= lo_rank;
            let hi_ok = below_hi + usize::from(hi_at) < hi_rank;
            match (lo_ok, hi_ok) {
                (true, true) => {
                    found = true;
                    break;
                }
                (false, false) => return Ok(Interlacing::NotInterlaced { witness }),
                (false, true) => a = t,
                (true, false) => b = t,
            }
        }
        if !found {
            return Ok(Interlacing::Unresolved { witness });
        }
    }
    Ok(Interlacing::Interlaced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chainseq::{gamma_from_system, system_from_gamma, GammaSeq};
    use crate::families::laguerre_system;
    use crate::recurrence::{kernel_system, monic_eval};
    use crate::scalar::{int, rat, Rational};

    fn lag0() -> ThreeTermSystem<Rational> {
        laguerre_system(&int(0)).unwrap()
    }

    #[test]
    fn truncate_laguerre() {
        let m = truncate(&lag0(), 3).unwrap();
        assert_eq!(m.diag, [1, 3, 5].map(int).to_vec());
        assert_eq!(m.sub, [1, 4].map(int).to_vec());
        assert_eq!(m.trace(), int(9));
        let one = truncate(&lag0(), 1).unwrap();
        assert_eq!(one.dense(), vec![vec![int(1)]]);
    }

    #[test]
    fn lu_laguerre() {
        let m = truncate(&lag0(), 3).unwrap();
        let f = lu_factor(&m, &int(0)).unwrap();
        assert_eq!(f.l_sub, [1, 2].map(int).to_vec());
        assert_eq!(f.u_diag, [1, 2, 3].map(int).to_vec());
        assert_eq!(f.product(), m);
        assert_eq!(
            f.product().dense(),
            vec![
                vec![int(1), int(1), int(0)],
                vec![int(1), int(3), int(1)],
                vec![int(0), int(4), int(5)],
            ]
        );
    }

    #[test]
    fn lu_with_positive_gamma1() {
        let g = GammaSeq::from_vec([1, 2, 3, 4].map(int).to_vec());
        let sys = system_from_gamma(&g).unwrap();
        let m = truncate(&sys, 2).unwrap();
        let f = lu_factor(&m, &int(1)).unwrap();
        let oracle = gamma_from_system(&sys, &int(1), 1).unwrap();
        assert_eq!(f.u_diag, vec![oracle.get(2).unwrap(), oracle.get(4).unwrap()]);
        assert_eq!(f.l_sub, vec![oracle.get(3).unwrap()]);
        assert_eq!(f.u_diag, vec![int(2), int(4)]);
        assert_eq!(f.product(), m);
        assert_eq!(lu_factor(&m, &int(3)).unwrap_err(), Error::PivotBreakdown(1));
        assert_eq!(lu_factor(&m, &int(5)).unwrap_err(), Error::PivotBreakdown(1));
    }

    #[test]
    fn lu_breakdown_later() {
        let m = TridiagonalMatrix::new(vec![int(1), int(1)], vec![int(4)]).unwrap();
        assert_eq!(lu_factor(&m, &int(0)).unwrap_err(), Error::PivotBreakdown(2));
    }

    #[test]
    fn ul_is_kernel_except_boundary() {
        let gamma = gamma_from_system(&lag0(), &int(0), 6).unwrap();
        let f = lu_factor(&truncate(&lag0(), 3).unwrap(), &int(0)).unwrap();
        let ul = ul_product(&f);
        let k = truncate(&kernel_system(&gamma).unwrap(), 3).unwrap();
        assert_eq!(ul.diag[..2], k.diag[..2]);
        assert_eq!(ul.sub, k.sub);
        assert_eq!(ul.diag[2], gamma.get(6).unwrap());
        assert_eq!(k.diag[2].clone() - ul.diag[2].clone(), gamma.get(7).unwrap());
        assert_eq!(ul.diag, [2, 4, 3].map(int).to_vec());

        let one = lu_factor(&truncate(&lag0(), 1).unwrap(), &int(0)).unwrap();
        assert_eq!(ul_product(&one).diag, vec![int(1)]);
    }

    #[test]
    fn lu_ul_lu_shifts_gamma() {
        let g = GammaSeq::from_vec((1..=14).map(|k| rat(k + 3, k % 4 + 1)).collect());
        let sys = system_from_gamma(&g).unwrap();
        let n = 6;
        let f = lu_factor(&truncate(&sys, n).unwrap(), &g.get(1).unwrap()).unwrap();
        let ul = ul_product(&f);
        let lead = TridiagonalMatrix::new(ul.diag[..n - 1].to_vec(), ul.sub[..n - 2].to_vec()).unwrap();
        let f2 = lu_factor(&lead, &g.get(2).unwrap()).unwrap();
        for k in 0..n - 1 {
            assert_eq!(f2.u_diag[k], g.get(2 * k + 3).unwrap());
        }
        for k in 0..n - 2 {
            assert_eq!(f2.l_sub[k], g.get(2 * k + 4).unwrap());
        }
    }

    #[test]
    fn laguerre_zeros() {
        let z = zeros(&lag0(), 2, 1e-12).unwrap();
        let s2 = 2f64.sqrt();
        assert!((z[0].value - (2.0 - s2)).abs() < 1e-10);
        assert!((z[1].value - (2.0 + s2)).abs() < 1e-10);
        assert!(z.iter().all(|z| z.bracket_width <= 1e-12));
        let one = zeros(&lag0(), 1, 1e-12).unwrap();
        assert!((one[0].value - 1.0).abs() < 1e-12);
        for n in 1..=8 {
            let tol = 1e-11;
            let z = zero_values(&lag0(), n, tol).unwrap();
            let sum: f64 = z.iter().sum();
            assert!((sum - (n * n) as f64).abs() <= n as f64 * tol);
            assert!(z.windows(2).all(|w| w[0] < w[1]));
            assert!(z[0] > 0.0);
            let p = monic_eval(&laguerre_system(&0.0f64).unwrap(), n).unwrap();
            for x in &z {
                let scale: f64 = (1..=n).map(|k| k as f64).product();
                assert!(p.eval(x).abs() < 1e-6 * scale, "P_{n}({x})");
            }
        }
    }

    #[test]
    fn zeros_reject_bad_input() {
        let s = ThreeTermSystem::from_vecs(vec![int(1), int(2)], vec![int(0)]);
        assert_eq!(zeros(&s, 2, 1e-10).unwrap_err(), Error::NonPositiveA2(1));
        assert!(zeros(&lag0(), 2, 0.0).is_err());
    }

    #[test]
    fn interlacing() {
        assert_eq!(interlace_check(&[1.0, 3.0], &[2.0, 4.0], 1e-12).unwrap(), Interlacing::Interlaced);
        assert_eq!(
            interlace_check(&[1.0, 2.0], &[5.0, 6.0], 1e-12).unwrap(),
            Interlacing::NotInterlaced { witness: 1 }
        );
        assert_eq!(interlace_check(&[2.0, 4.0], &[1.0, 3.0], 1e-12).unwrap(), Interlacing::Interlaced);
        assert_eq!(interlace_check(&[1.0], &[1.0, 2.0], 0.0).unwrap_err(), Error::LengthMismatch(1, 2));
        let gamma = gamma_from_system(&lag0(), &int(0), 8).unwrap();
        let k = kernel_system(&gamma).unwrap();
        for n in 1..=8 {
            let p = zero_values(&lag0(), n, 1e-13).unwrap();
            let q = zero_values(&k, n, 1e-13).unwrap();
            assert_eq!(interlace_check(&p, &q, 1e-9).unwrap(), Interlacing::Interlaced, "n = {n}");
        }
    }

    #[test]
    fn certified_interlacing() {
        let gamma = gamma_from_system(&lag0(), &int(0), 9).unwrap();
        let k = kernel_system(&gamma).unwrap();
        for n in 1..=8 {
            assert_eq!(interlace_certified(&lag0(), &k, n, 1e-12).unwrap(), Interlacing::Interlaced);
            assert_eq!(interlace_certified(&k, &lag0(), n, 1e-12).unwrap(), Interlacing::Interlaced);
        }
        // P_2 of L^(0) against itself shares both zeros
        assert!(matches!(
            interlace_certified(&lag0(), &lag0(), 2, 1e-12).unwrap(),
            Interlacing::NotInterlaced { .. } | Interlacing::Unresolved { .. }
        ));
        // (x - 1)(x - 3) against (x - 2)(x - 10): 1 < 2 < 3 < 10
        let p = ThreeTermSystem::from_vecs(vec![int(2), int(2)], vec![int(1)]);
        let q = ThreeTermSystem::from_vecs(vec![int(6), int(6)], vec![int(16)]);
        assert_eq!(interlace_certified(&p, &q, 2, 1e-12).unwrap(), Interlacing::Interlaced);
        // (x - 1)(x - 3) against (x - 4)(x - 6): 1 < 3 < 4 breaks at the first pair's right side
        let r = ThreeTermSystem::from_vecs(vec![int(5), int(5)], vec![int(1)]);
        assert_eq!(
            interlace_certified(&p, &r, 2, 1e-12).unwrap(),
            Interlacing::NotInterlaced { witness: 1 }
        );
    }

    #[test]
    fn sturm_counts() {
        let m = truncate(&lag0(), 2).unwrap();
        // zeros 2 ± √2
        assert_eq!(sturm_below(&m.diag, &m.sub, &int(0)), (0, false));
        assert_eq!(sturm_below(&m.diag, &m.sub, &int(1)), (1, false));
        assert_eq!(sturm_below(&m.diag, &m.sub, &int(4)), (2, false));
        // P_2 = (x - 1)(x - 3)
        let p = ThreeTermSystem::from_vecs(vec![int(2), int(2)], vec![int(1)]);
        let m = truncate(&p, 2).unwrap();
        assert_eq!(sturm_below(&m.diag, &m.sub, &int(1)), (0, true));
        assert_eq!(sturm_below(&m.diag, &m.sub, &int(3)), (1, true));
    }
}
