//! Closed-form families: Laguerre, the E-family and its γ₁ = 1 tail,
//! associated Laguerre of order one, Routh–Romanovski monicization, and
//! Christoffel pairs described by an l-sequence.

use crate::chainseq::GammaSeq;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::recurrence::{ClosedForm, ThreeTermSystem};
use crate::scalar::Scalar;
use crate::stream::Stream;

fn check_alpha<S: Scalar>(alpha: &S) -> Result<()> {
    if *alpha > -S::one() {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha.to_text()))
    }
}

fn n_of<S: Scalar>(n: usize) -> S {
    S::from_i64(n as i64)
}

fn closed_system<S, B, A>(name: &str, alpha: &S, b: B, a2: A) -> ThreeTermSystem<S>
where
    S: Scalar,
    B: Fn(usize) -> S + Send + Sync + 'static,
    A: Fn(usize) -> S + Send + Sync + 'static,
{
    ThreeTermSystem::new(
        Stream::generated("b", 1, None, move |n| Ok(b(n))),
        Stream::generated("a2", 1, None, move |n| Ok(a2(n))),
    )
    .with_closed_form(ClosedForm::new(name, &[("alpha", alpha.to_text())]))
}

/// Monic Laguerre: `b_{n+1} = 2n + α + 1`, `a_n^2 = n(n + α)`.
pub fn laguerre_system<S: Scalar>(alpha: &S) -> Result<ThreeTermSystem<S>> {
    check_alpha(alpha)?;
    let (a, c) = (alpha.clone(), alpha.clone());
    Ok(closed_system(
        "laguerre",
        alpha,
        move |n| n_of::<S>(2 * n - 1) + a.clone(),
        move |n| n_of::<S>(n) * (n_of::<S>(n) + c.clone()),
    ))
}

/// E-family: `b_{n+1} = 2n + α + 2` (so `b_1 = α + 2`), `a_n^2 = (n + 1)(n + α)`.
pub fn e_family_system<S: Scalar>(alpha: &S) -> Result<ThreeTermSystem<S>> {
    check_alpha(alpha)?;
    let (a, c) = (alpha.clone(), alpha.clone());
    Ok(closed_system(
        "e_family",
        alpha,
        move |n| n_of::<S>(2 * n) + a.clone(),
        move |n| n_of::<S>(n + 1) * (n_of::<S>(n) + c.clone()),
    ))
}

/// The E-family with its own first polynomial `E_1 = x - (α + 1)`; only
/// `b_1` differs from [`e_family_system`].
pub fn e_family_base_system<S: Scalar>(alpha: &S) -> Result<ThreeTermSystem<S>> {
    check_alpha(alpha)?;
    let (a, c) = (alpha.clone(), alpha.clone());
    Ok(closed_system(
        "e_family_base",
        alpha,
        move |n| {
            if n == 1 {
                S::one() + a.clone()
            } else {
                n_of::<S>(2 * n) + a.clone()
            }
        },
        move |n| n_of::<S>(n + 1) * (n_of::<S>(n) + c.clone()),
    ))
}

/// Associated Laguerre of order one: `b_{n+1} = 2n + α + 3`,
/// `a_n^2 = (n + 1)(n + α + 1)`.
pub fn laguerre_assoc1<S: Scalar>(alpha: &S) -> Result<ThreeTermSystem<S>> {
    check_alpha(alpha)?;
    let (a, c) = (alpha.clone(), alpha.clone());
    Ok(closed_system(
        "laguerre_assoc1",
        alpha,
        move |n| n_of::<S>(2 * n + 1) + a.clone(),
        move |n| n_of::<S>(n + 1) * (n_of::<S>(n + 1) + c.clone()),
    ))
}

/// Closed-form γ of the Laguerre family.
///
/// `gamma1 = 0`: `(0, 1+α, 1, 2+α, 2, …)`, the decomposition of `L^(α)`.
/// `gamma1 = 1`: `(1, 1+α, 2, 2+α, 3, …)`, the decomposition of the E-family.
pub fn laguerre_gamma<S: Scalar>(alpha: &S, gamma1: u8) -> Result<GammaSeq<S>> {
    check_alpha(alpha)?;
    let shift: usize = match gamma1 {
        0 => 0,
        1 => 1,
        other => {
            return Err(Error::InvalidArgument(format!(
                "laguerre gamma1 must be 0 or 1, got {other}"
            )))
        }
    };
    let a = alpha.clone();
    Ok(GammaSeq::generated(move |k| {
        Ok(match k {
            1 => n_of(shift),
            k if k % 2 == 0 => n_of::<S>(k / 2) + a.clone(),
            k => n_of((k - 1) / 2 + shift),
        })
    }))
}

/// `b_{n+1} = -B_n / A_n`, `a_n^2 = C_n / (A_n A_{n-1})` for a recurrence
/// `N_{n+1} = (A_n x + B_n) N_n - C_n N_{n-1}`.
pub fn monicize<S: Scalar>(n: usize, a_n: &S, b_n: &S, c_n: &S, a_prev: &S) -> Result<(S, S)> {
    if a_n.is_zero() || a_prev.is_zero() {
        return Err(Error::ZeroDenominator(n));
    }
    Ok((
        -b_n.clone() / a_n.clone(),
        c_n.clone() / (a_n.clone() * a_prev.clone()),
    ))
}

/// Routh–Romanovski parameter `p` and its orthogonality window.
#[derive(Clone, Debug, PartialEq)]
pub struct RRParams<S> {
    pub p: S,
    /// Degrees `0..n_max` are served: `b_1..b_{n_max}`, `a_1^2..a_{n_max-1}^2`.
    pub n_max: usize,
}

const RR_SCAN_CAP: usize = 4096;

impl<S: Scalar> RRParams<S> {
    pub fn new(p: S) -> Self {
        let mut params = RRParams { p, n_max: 0 };
        let mut n = 0;
        while n < RR_SCAN_CAP {
            match params.raw(n) {
                Ok((_, a2)) if n == 0 || a2.is_positive() => n += 1,
                _ => break,
            }
        }
        params.n_max = n;
        params
    }

    fn pn(&self, k: i64) -> S {
        self.p.clone() - S::from_i64(k)
    }

    /// `(A_n, B_n, C_n)`.
    pub fn pieces(&self, n: usize) -> Result<(S, S, S)> {
        let k = n as i64;
        let (d1, d2, d3) = (self.pn(k + 1), self.pn(2 * k), self.pn(2 * k + 2));
        if d1.is_zero() || d2.is_zero() {
            return Err(Error::ZeroDenominator(n));
        }
        let a = d3.clone() * self.pn(2 * k + 1) / d1.clone();
        let b = -(self.p.clone() * self.pn(2 * k + 1)) / (d1.clone() * d2.clone());
        let c = S::from_i64(k) * d3 / (d1 * d2);
        Ok((a, b, c))
    }

    fn raw(&self, n: usize) -> Result<(S, S)> {
        let (a, b, c) = self.pieces(n)?;
        if n == 0 {
            if a.is_zero() {
                return Err(Error::ZeroDenominator(0));
            }
            return Ok((-b / a, S::zero()));
        }
        let (a_prev, _, _) = self.pieces(n - 1)?;
        monicize(n, &a, &b, &c, &a_prev)
    }

    /// Finite system `b_1..b_{n_max}`, `a_1^2..a_{n_max-1}^2`.
    pub fn system(&self) -> Result<ThreeTermSystem<S>> {
        let mut b = Vec::with_capacity(self.n_max);
        let mut a2 = Vec::new();
        for n in 0..self.n_max {
            let (bn, an) = self.raw(n)?;
            b.push(bn);
            if n > 0 {
                a2.push(an);
            }
        }
        Ok(ThreeTermSystem::from_vecs(b, a2).with_closed_form(ClosedForm::new(
            "routh_romanovski",
            &[("p", self.p.to_text())],
        )))
    }

    /// `N_0..=N_n` straight from the unnormalised recurrence.
    pub fn n_polynomials(&self, n: usize) -> Result<Vec<Polynomial<S>>> {
        let mut out = vec![Polynomial::one()];
        let mut prev = Polynomial::zero();
        for k in 0..n {
            let (a, b, c) = self.pieces(k)?;
            let cur = out[k].clone();
            let next = &(&cur.shift_up().scale(&a) + &cur.scale(&b)) - &prev.scale(&c);
            prev = cur;
            out.push(next);
        }
        Ok(out)
    }
}

/// Monic `(b_{n+1}, a_n^2)` of the Routh–Romanovski recurrence at degree `n`
/// (`a_0^2` is reported as 0).
pub fn rr_monicize<S: Scalar>(params: &RRParams<S>, n: usize) -> Result<(S, S)> {
    let out = params.raw(n)?;
    if n >= params.n_max {
        return Err(Error::DegreeBeyondFamily {
            n,
            n_max: params.n_max,
        });
    }
    Ok(out)
}

/// `l_0 = 1`, `l_n > 1`, together with the Christoffel constant `k > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LSequence<S> {
    l: Vec<S>,
    k: S,
}

impl<S: Scalar> LSequence<S> {
    pub fn new(l: Vec<S>, k: S) -> Result<Self> {
        if !k.is_positive() {
            return Err(Error::NonPositiveInput(format!("k = {k}")));
        }
        match l.first() {
            Some(l0) if *l0 == S::one() => {}
            _ => return Err(Error::InvalidArgument("l_0 must equal 1".into())),
        }
        if let Some(n) = (1..l.len()).find(|&n| l[n] <= S::one()) {
            return Err(Error::NonPositiveInput(format!("l_{n} - 1 = {}", l[n].clone() - S::one())));
        }
        Ok(LSequence { l, k })
    }

    pub fn l(&self, n: usize) -> Option<&S> {
        self.l.get(n)
    }

    pub fn values(&self) -> &[S] {
        &self.l
    }

    pub fn k(&self) -> &S {
        &self.k
    }

    pub fn last_index(&self) -> usize {
        self.l.len() - 1
    }
}

/// Forward solve `l_n = 1 + 4k γ^{φ1}_{n+1} / (l_{n-1} + 1)` for `n = 1..=n_max`.
/// `gamma_phi1` must cover indices `2..=n_max+1`.
pub fn l_from_gamma<S: Scalar>(gamma_phi1: &Stream<S>, k: &S, n_max: usize) -> Result<LSequence<S>> {
    if !k.is_positive() {
        return Err(Error::NonPositiveInput(format!("k = {k}")));
    }
    let four_k = S::from_i64(4) * k.clone();
    let mut l = vec![S::one()];
    for n in 1..=n_max {
        let g = gamma_phi1.get(n + 1)?;
        if !g.is_positive() {
            return Err(Error::NonPositiveInput(format!("gamma_phi1_{} = {g}", n + 1)));
        }
        let next = S::one() + four_k.clone() * g / (l[n - 1].clone() + S::one());
        l.push(next);
    }
    LSequence::new(l, k.clone())
}

/// `γ^{φ1}_{n+1} = (l_n - 1)(l_{n-1} + 1) / 4k`, indices `2..=N+1`.
pub fn gamma_phi1_from_l<S: Scalar>(l: &LSequence<S>) -> Stream<S> {
    let four_k = S::from_i64(4) * l.k.clone();
    let v = (1..=l.last_index())
        .map(|n| (l.l[n].clone() - S::one()) * (l.l[n - 1].clone() + S::one()) / four_k.clone())
        .collect();
    Stream::from_vec("gamma_phi1", 2, v)
}

/// `γ^{φ2}_{n+1} = (l_n - 1)(l_{n+1} + 1) / 4k`, indices `2..=N`.
pub fn gamma_phi2_from_l<S: Scalar>(l: &LSequence<S>) -> Stream<S> {
    let four_k = S::from_i64(4) * l.k.clone();
    let v = (1..l.last_index())
        .map(|n| (l.l[n].clone() - S::one()) * (l.l[n + 1].clone() + S::one()) / four_k.clone())
        .collect();
    Stream::from_vec("gamma_phi2", 2, v)
}

/// `l_0 = 1` followed by the period-4 pattern `a, b, b, a` (so
/// `l_1 = l_4 = l_5 = l_8 = …` and `l_2 = l_3 = l_6 = l_7 = …`).
pub fn periodic_l<S: Scalar>(a: S, b: S, k: S, n_max: usize) -> Result<LSequence<S>> {
    let mut l = vec![S::one()];
    for n in 1..=n_max {
        l.push(if matches!(n % 4, 1 | 0) { a.clone() } else { b.clone() });
    }
    LSequence::new(l, k)
}

/// Checks that `γ^{φ2}` is `γ^{φ1}` with adjacent pairs `(3,4), (5,6), …`
/// swapped, on every index where both sides exist. Returns the first
/// failing index.
pub fn pair_swap_witness<S: Scalar>(phi1: &Stream<S>, phi2: &Stream<S>) -> Result<Option<usize>> {
    let last = phi2
        .last_index()
        .unwrap_or(0)
        .min(phi1.last_index().unwrap_or(0));
    let mut j = 3;
    while j < last {
        if phi2.get(j)? != phi1.get(j + 1)? {
            return Ok(Some(j));
        }
        if phi2.get(j + 1)? != phi1.get(j)? {
            return Ok(Some(j + 1));
        }
        j += 2;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chainseq::{chain_at, gamma_from_system, minimal_parameters};
    use crate::recurrence::{kernel_system, monic_sequence};
    use crate::scalar::{int, rat, Rational};

    #[test]
    fn laguerre_coefficients() {
        let s = laguerre_system(&int(0)).unwrap();
        assert_eq!(s.b_stream().take(3).unwrap(), [1, 3, 5].map(int).to_vec());
        assert_eq!(s.a2_stream().take(3).unwrap(), [1, 4, 9].map(int).to_vec());
        assert_eq!(
            laguerre_system(&int(-1)).unwrap_err(),
            Error::AlphaOutOfRange("-1".into())
        );
        assert_eq!(s.closed_form().unwrap().name, "laguerre");
    }

    #[test]
    fn laguerre_chain_and_minimal_parameters() {
        for alpha in [rat(-1, 2), int(0), int(1), rat(7, 3)] {
            let s = laguerre_system(&alpha).unwrap();
            let d = chain_at(&s, &int(0), 12).unwrap();
            for n in 1..=12i64 {
                let nn = int(n);
                let expect = nn.clone() * (nn.clone() + alpha.clone())
                    / ((int(2 * n - 1) + alpha.clone()) * (int(2 * n + 1) + alpha.clone()));
                assert_eq!(d.get(n as usize).unwrap(), expect);
            }
            let m = minimal_parameters(&d, 12).unwrap();
            for n in 0..=12i64 {
                assert_eq!(m.values()[n as usize], int(n) / (int(2 * n + 1) + alpha.clone()));
            }
        }
    }

    #[test]
    fn laguerre_gamma_branches() {
        let g = laguerre_gamma(&int(0), 0).unwrap();
        assert_eq!(g.take(9).unwrap(), [0, 1, 1, 2, 2, 3, 3, 4, 4].map(int).to_vec());
        let g = laguerre_gamma(&int(0), 1).unwrap();
        assert_eq!(g.take(6).unwrap(), [1, 1, 2, 2, 3, 3].map(int).to_vec());
        assert!(laguerre_gamma(&int(0), 2).is_err());
        for alpha in [rat(-1, 2), int(0), int(1), rat(7, 3)] {
            let closed = laguerre_gamma(&alpha, 0).unwrap();
            let rec = gamma_from_system(&laguerre_system(&alpha).unwrap(), &int(0), 20).unwrap();
            assert_eq!(closed.take(42).unwrap(), rec.take(42).unwrap());
            let closed = laguerre_gamma(&alpha, 1).unwrap();
            let rec = gamma_from_system(&e_family_system(&alpha).unwrap(), &int(1), 20).unwrap();
            assert_eq!(closed.take(42).unwrap(), rec.take(42).unwrap());
        }
    }

    #[test]
    fn kernel_of_laguerre_is_shifted_laguerre() {
        let alpha = rat(7, 3);
        let k = kernel_system(&laguerre_gamma(&alpha, 0).unwrap()).unwrap();
        let l1 = laguerre_system(&(alpha + int(1))).unwrap();
        assert_eq!(k.first_difference(&l1, 20).unwrap(), None);
    }

    #[test]
    fn e_family_and_assoc() {
        let e = e_family_system(&int(0)).unwrap();
        assert_eq!(e.b_stream().take(3).unwrap(), [2, 4, 6].map(int).to_vec());
        assert_eq!(e.a2_stream().take(3).unwrap(), [2, 6, 12].map(int).to_vec());
        let e = e_family_system(&rat(1, 2)).unwrap();
        assert_eq!(e.b_stream().take(2).unwrap(), vec![rat(5, 2), rat(9, 2)]);
        assert_eq!(e.a2(1).unwrap(), int(3));
        let base = e_family_base_system(&int(0)).unwrap();
        assert_eq!(base.b(1).unwrap(), int(1));
        assert_eq!(base.b(2).unwrap(), int(4));
        let a = laguerre_assoc1(&int(0)).unwrap();
        assert_eq!(a.b_stream().take(2).unwrap(), [3, 5].map(int).to_vec());
        assert_eq!(a.a2_stream().take(2).unwrap(), [4, 9].map(int).to_vec());
        let g = gamma_from_system(&a, &int(1), 3).unwrap();
        assert_eq!(g.take(8).unwrap(), [1, 2, 2, 3, 3, 4, 4, 5].map(int).to_vec());
    }

    #[test]
    fn rr_examples() {
        let p = RRParams::new(int(10));
        assert_eq!(p.n_max, 4);
        assert_eq!(rr_monicize(&p, 0).unwrap().0, rat(1, 8));
        for n in 0..4 {
            let (b, a2) = rr_monicize(&p, n).unwrap();
            let k = n as i64;
            assert_eq!(b, int(10) / (int(10 - 2 * k) * int(8 - 2 * k)));
            if n > 0 {
                assert!(a2.is_positive());
            }
        }
        assert_eq!(rr_monicize(&p, 4).unwrap_err(), Error::ZeroDenominator(4));
        assert_eq!(rr_monicize(&p, 1).unwrap().1, rat(1, 448));
        // p = 21/2: no denominator vanishes, the window ends at a² ≤ 0
        let q = RRParams::new(rat(21, 2));
        assert!(q.n_max < RR_SCAN_CAP);
        assert!(matches!(
            rr_monicize(&q, q.n_max),
            Err(Error::DegreeBeyondFamily { .. }) | Err(Error::ZeroDenominator(_))
        ));
    }

    #[test]
    fn rr_monic_matches_normalised_n() {
        let p = RRParams::new(int(10));
        let sys = p.system().unwrap();
        let monic = monic_sequence(&sys, 4).unwrap();
        let raw = p.n_polynomials(4).unwrap();
        let mut lead = int(1);
        for n in 0..=4 {
            assert_eq!(monic[n], raw[n].scale(&(int(1) / lead.clone())), "degree {n}");
            if n < 4 {
                lead *= p.pieces(n).unwrap().0;
            }
        }
    }

    #[test]
    fn monicize_sanity_family() {
        let (b, a2) = monicize(1, &int(1), &int(-3), &rat(2, 5), &int(1)).unwrap();
        assert_eq!((b, a2), (int(3), rat(2, 5)));
        assert_eq!(
            monicize(2, &int(0), &int(1), &int(1), &int(1)).unwrap_err(),
            Error::ZeroDenominator(2)
        );
    }

    #[test]
    fn l_sequence_forward() {
        let g: Stream<Rational> = Stream::from_vec("gamma_phi1", 2, vec![int(1), int(2)]);
        let l = l_from_gamma(&g, &int(1), 2).unwrap();
        assert_eq!(l.values(), &[int(1), int(3), int(3)]);
        let zero: Stream<Rational> = Stream::from_vec("gamma_phi1", 2, vec![int(0)]);
        assert!(matches!(l_from_gamma(&zero, &int(1), 1), Err(Error::NonPositiveInput(_))));
        assert!(matches!(
            LSequence::new(vec![int(1), int(1)], int(1)),
            Err(Error::NonPositiveInput(_))
        ));
        let back = gamma_phi1_from_l(&l);
        assert_eq!(back.take(2).unwrap(), g.take(2).unwrap());
    }

    #[test]
    fn gamma_phi2_examples() {
        let l = LSequence::new(vec![int(1), int(3), int(5)], int(1)).unwrap();
        assert_eq!(gamma_phi2_from_l(&l).get(2).unwrap(), int(3));
        let c = LSequence::new(vec![int(1), int(4), int(4), int(4), int(4)], rat(1, 3)).unwrap();
        let (p1, p2) = (gamma_phi1_from_l(&c), gamma_phi2_from_l(&c));
        for j in 3..=4 {
            assert_eq!(p1.get(j).unwrap(), p2.get(j).unwrap());
        }
    }

    #[test]
    fn periodic_pattern_swaps_pairs() {
        let l = periodic_l(rat(7, 2), int(5), rat(3, 4), 12).unwrap();
        assert_eq!(l.l(1), l.l(4));
        assert_eq!(l.l(5), l.l(9));
        assert_eq!(l.l(2), l.l(7));
        let (p1, p2) = (gamma_phi1_from_l(&l), gamma_phi2_from_l(&l));
        assert_eq!(pair_swap_witness(&p1, &p2).unwrap(), None);
        assert_ne!(p1.get(3).unwrap(), p1.get(4).unwrap());
        // a non-periodic l breaks the swap
        let mut v = l.values().to_vec();
        v[6] = int(9);
        let bad = LSequence::new(v, rat(3, 4)).unwrap();
        assert!(pair_swap_witness(&gamma_phi1_from_l(&bad), &gamma_phi2_from_l(&bad))
            .unwrap()
            .is_some());
    }
}
