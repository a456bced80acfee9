//! Coefficient maxima, the anisotropic scale τ(η', δ), dilations, and the
//! rescaled defining function with its P and Q^α polynomials.
//!
//! τ(η,δ) = min{ (δ/A_l)^{1/l}, (δ^{1/2}/B_{l'})^{1/l'} : 2 ≤ l ≤ 2m,
//! 2 ≤ l' ≤ m } over nonzero maxima. Every candidate is an exact root of a
//! rational ((δ/A_l)^{1/l} = (δ²/A_l²)^{1/2l} with A_l² rational), so the
//! minimum, the coefficient-boundedness inequalities, and (whenever the
//! scales close in ℚ) the rescaled polynomial itself are all exact.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::normalize::NormalizationResult;
use crate::poly::{Multidegree, Poly, RealPoly};
use crate::scalar::{rational_from_f64, rational_pow, rational_to_f64, RationalRoot};

/// The Q sup-norm estimate is asymptotic in τ; it only applies below this.
pub const Q_ESTIMATE_TAU_THRESHOLD: f64 = 0.1;

/// Coefficient maxima A_l = max{|a_{j,k}| : j+k=l}, B_{l'} = max{|b^α_{j,k}| :
/// j+k=l'}. Squared maxima are kept exact; the f64 views derive from them.
#[derive(Clone, Debug)]
pub struct CoefficientMaxima {
    pub m: u32,
    /// l → A_l² (exact), 2 ≤ l ≤ 2m; zero entries present.
    pub a2: BTreeMap<u32, BigRational>,
    /// l' → B_{l'}² (exact), 2 ≤ l' ≤ m.
    pub b2: BTreeMap<u32, BigRational>,
}

impl CoefficientMaxima {
    pub fn a(&self, l: u32) -> f64 {
        self.a2
            .get(&l)
            .map_or(0.0, |r| rational_to_f64(r).sqrt())
    }

    pub fn b(&self, l: u32) -> f64 {
        self.b2
            .get(&l)
            .map_or(0.0, |r| rational_to_f64(r).sqrt())
    }
}

pub fn coefficient_maxima(norm: &NormalizationResult, m: u32) -> CoefficientMaxima {
    let mut a2 = BTreeMap::new();
    for l in 2..=2 * m {
        a2.insert(l, BigRational::zero());
    }
    for (&(j, k), c) in &norm.a_table {
        let l = j + k;
        let v = c.abs2();
        if let Some(cur) = a2.get_mut(&l) {
            if v > *cur {
                *cur = v;
            }
        }
    }
    let mut b2 = BTreeMap::new();
    for l in 2..=m {
        b2.insert(l, BigRational::zero());
    }
    for (&(_alpha, j, k), c) in &norm.b_table {
        let l = j + k;
        let v = c.abs2();
        if let Some(cur) = b2.get_mut(&l) {
            if v > *cur {
                *cur = v;
            }
        }
    }
    CoefficientMaxima { m, a2, b2 }
}

/// One contributor to the τ minimum.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ActiveIndex {
    /// "A" or "B".
    pub kind: char,
    pub degree: u32,
}

/// Exact τ(η', δ) with the set of indices attaining the minimum.
/// Zero maxima contribute +∞ and are skipped; A_{2m} = 0 is an error.
pub fn tau_exact(
    maxima: &CoefficientMaxima,
    delta: &BigRational,
    m: u32,
) -> Result<(RationalRoot, Vec<ActiveIndex>)> {
    if !delta.is_positive() {
        return Err(Error::InvalidDomain("δ must be positive".into()));
    }
    if maxima
        .a2
        .get(&(2 * m))
        .map_or(true, |r| r.is_zero())
    {
        return Err(Error::Hypothesis(format!(
            "finite-type hypothesis violated at this point: A_{} = 0",
            2 * m
        )));
    }
    let mut candidates: Vec<(RationalRoot, ActiveIndex)> = Vec::new();
    for (&l, a2) in &maxima.a2 {
        if a2.is_zero() {
            continue;
        }
        // (δ/A_l)^{1/l} = (δ²/A_l²)^{1/2l}
        let radicand = rational_pow(delta, 2) / a2;
        candidates.push((
            RationalRoot::new(radicand, 2 * l),
            ActiveIndex { kind: 'A', degree: l },
        ));
    }
    for (&l, b2) in &maxima.b2 {
        if b2.is_zero() {
            continue;
        }
        // (δ^{1/2}/B_l)^{1/l} = (δ/B_l²)^{1/2l}
        let radicand = delta / b2;
        candidates.push((
            RationalRoot::new(radicand, 2 * l),
            ActiveIndex { kind: 'B', degree: l },
        ));
    }
    let best = candidates
        .iter()
        .min_by(|x, y| x.0.cmp_exact(&y.0))
        .expect("A_{2m} candidate exists")
        .0
        .clone();
    let active = candidates
        .iter()
        .filter(|(r, _)| r.cmp_exact(&best) == std::cmp::Ordering::Equal)
        .map(|(_, i)| i.clone())
        .collect();
    Ok((best, active))
}

/// Binary64 front end: δ is rationalized exactly first.
pub fn tau(maxima: &CoefficientMaxima, delta: f64, m: u32) -> Result<f64> {
    let (root, _) = tau_exact(maxima, &rational_from_f64(delta), m)?;
    Ok(root.to_f64())
}

/// Δ_η^ε point form: divides coordinate k by scale k.
pub fn dilate_point(scales: &[f64], point: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(scales.len(), point.len());
    assert!(scales.iter().all(|&s| s > 0.0), "nonpositive scale");
    point
        .iter()
        .zip(scales)
        .map(|(z, &s)| z / s)
        .collect()
}

/// (Δ_η^ε)⁻¹ on polynomials: substitutes w_k ↦ τ_k·w_k. Multipliers are
/// rationalized binary64 values, so the output is exact for the given scales.
pub fn inverse_dilation_poly(scales: &[f64], p: &Poly) -> Poly {
    assert_eq!(scales.len(), p.nvars());
    assert!(scales.iter().all(|&s| s > 0.0), "nonpositive scale");
    let exact: Vec<BigRational> = scales.iter().map(|&s| rational_from_f64(s)).collect();
    let mut out = Poly::zero(p.nvars());
    for (md, c) in p.iter() {
        let mut w = BigRational::one();
        for i in 0..p.nvars() {
            w *= rational_pow(&exact[i], i64::from(md.holo[i] + md.anti[i]));
        }
        out.add_term(md.clone(), c.scale(&w));
    }
    out
}

/// ε, τ, the scale vector, the rescaled defining function and its P, Q^α.
#[derive(Clone, Debug)]
pub struct ScalingData {
    pub epsilon: f64,
    pub epsilon_exact: BigRational,
    pub tau: f64,
    pub tau_exact: RationalRoot,
    /// (τ, √ε, …, √ε, ε).
    pub scales: Vec<f64>,
    /// P(w₁,w̄₁) = Σ a_{j,k} ε⁻¹ τ^{j+k} w₁^j w̄₁^k, single-variable ring.
    pub p: RealPoly,
    /// α → Q^α(w₁,w̄₁) = Σ b^α_{j,k} ε^{-1/2} τ^{j+k} w₁^j w̄₁^k.
    pub q: BTreeMap<usize, Poly>,
    /// ε⁻¹ ρ∘Φ⁻¹∘(Δ)⁻¹(w), full n-variable ring.
    pub rescaled_rho: RealPoly,
    pub active_indices: Vec<ActiveIndex>,
    /// Exact |coeff(P)| ≤ 1 and |coeff(Q^α)| ≤ 1 verdict (τ min-definition).
    pub coeff_bound_ok: bool,
    /// True when every dilation weight closed in ℚ, making `p`, `q` and
    /// `rescaled_rho` coefficientwise exact.
    pub exact_scales: bool,
}

/// Per-monomial dilation weight ε^{-1}·τ^{s₁}·(√ε)^{s_*}·ε^{s_n} as an exact
/// root value.
fn monomial_weight(
    md: &Multidegree,
    n: usize,
    tau: &RationalRoot,
    eps: &BigRational,
) -> RationalRoot {
    let s1 = md.degree_in(1);
    let s_mid: u32 = (2..n).map(|v| md.degree_in(v)).sum();
    let s_n = md.degree_in(n);
    // rational part: ε^{s_n - 1} · ε^{s_mid / 2 rounded down}
    let mut rational = rational_pow(eps, i64::from(s_n) - 1);
    rational *= rational_pow(eps, i64::from(s_mid / 2));
    let mut w = RationalRoot::from_rational(rational);
    if s_mid % 2 == 1 {
        w = w.mul(&RationalRoot::new(eps.clone(), 2));
    }
    if s1 > 0 {
        w = w.mul(&tau.powi(s1));
    }
    w
}

/// Exact check that x·τ^{2s} ≤ 1 for rational x ≥ 0 (clears the root by
/// raising both sides to the root degree).
fn weighted_le_one(x: &BigRational, tau: &RationalRoot, s: u32) -> bool {
    let lhs = rational_pow(x, i64::from(tau.degree))
        * rational_pow(&tau.radicand, i64::from(2 * s));
    lhs <= BigRational::one()
}

pub fn rescaled_rho(
    norm: &NormalizationResult,
    epsilon: &BigRational,
    m: u32,
) -> Result<ScalingData> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidDomain("ε must be positive".into()));
    }
    let n = norm.n();
    let maxima = coefficient_maxima(norm, m);
    let (tau_root, active_indices) = tau_exact(&maxima, epsilon, m)?;

    // rescale ρ∘Φ⁻¹ term by term
    let full = norm.reconstruct();
    let mut rescaled = Poly::zero(n);
    let mut exact_scales = true;
    for (md, c) in full.as_poly().iter() {
        let w = monomial_weight(md, n, &tau_root, epsilon);
        let factor = match w.exact_rational() {
            Some(r) => r,
            None => {
                exact_scales = false;
                rational_from_f64(w.to_f64())
            }
        };
        rescaled.add_term(md.clone(), c.scale(&factor));
    }

    // P and Q^α by the direct formulas, in the single-variable ring
    let mut p = Poly::zero(1);
    let mut coeff_bound_ok = true;
    let inv_eps2 = rational_pow(epsilon, -2);
    for (&(j, k), a) in &norm.a_table {
        let s = j + k;
        let weight = RationalRoot::from_rational(epsilon.recip()).mul(&tau_root.powi(s));
        let factor = weight
            .exact_rational()
            .unwrap_or_else(|| rational_from_f64(weight.to_f64()));
        p.add_term(
            Multidegree {
                holo: vec![j],
                anti: vec![k],
            },
            a.scale(&factor),
        );
        // |a|²·ε⁻²·τ^{2s} ≤ 1
        if !weighted_le_one(&(a.abs2() * &inv_eps2), &tau_root, s) {
            coeff_bound_ok = false;
        }
    }
    let mut q: BTreeMap<usize, Poly> = BTreeMap::new();
    let inv_eps = rational_pow(epsilon, -1);
    for (&(alpha, j, k), b) in &norm.b_table {
        let s = j + k;
        // ε^{-1/2} τ^s
        let weight = RationalRoot::new(epsilon.recip(), 2).mul(&tau_root.powi(s));
        let factor = weight
            .exact_rational()
            .unwrap_or_else(|| rational_from_f64(weight.to_f64()));
        q.entry(alpha).or_insert_with(|| Poly::zero(1)).add_term(
            Multidegree {
                holo: vec![j],
                anti: vec![k],
            },
            b.scale(&factor),
        );
        // |b|²·ε⁻¹·τ^{2s} ≤ 1
        if !weighted_le_one(&(b.abs2() * &inv_eps), &tau_root, s) {
            coeff_bound_ok = false;
        }
    }

    let eps_f = rational_to_f64(epsilon);
    let tau_f = tau_root.to_f64();
    let mut scales = vec![tau_f];
    scales.extend(std::iter::repeat(eps_f.sqrt()).take(n - 2));
    scales.push(eps_f);

    Ok(ScalingData {
        epsilon: eps_f,
        epsilon_exact: epsilon.clone(),
        tau: tau_f,
        tau_exact: tau_root,
        scales,
        p: RealPoly::new(p)?,
        q,
        rescaled_rho: RealPoly::new(rescaled)?,
        active_indices,
        coeff_bound_ok,
        exact_scales,
    })
}

/// Binary64 front end (ε rationalized exactly).
pub fn rescaled_rho_f64(
    norm: &NormalizationResult,
    epsilon: f64,
    m: u32,
) -> Result<ScalingData> {
    rescaled_rho(norm, &rational_from_f64(epsilon), m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QVerdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct QEstimateReport {
    pub tau: f64,
    pub bound: f64,
    pub max_q: f64,
    pub samples: usize,
    pub verdict: QVerdict,
}

/// Samples max_α max_{|w₁|≤1} |Q^α| against the bound τ^exponent. The bound
/// is asymptotic, so the check is not applicable when τ ≥ 0.1.
pub fn check_q_estimate(sd: &ScalingData, exponent: f64, samples: usize) -> QEstimateReport {
    let bound = sd.tau.powf(exponent);
    let rings = 8usize;
    let per_ring = samples.div_euclid(rings).max(1);
    let mut max_q = 0.0f64;
    let mut used = 0usize;
    for q in sd.q.values() {
        for ri in 1..=rings {
            let r = ri as f64 / rings as f64;
            for ai in 0..per_ring {
                let th = 2.0 * std::f64::consts::PI * ai as f64 / per_ring as f64;
                let w1 = Complex64::from_polar(r, th);
                let v = q.evaluate(&[w1]).norm();
                if v > max_q {
                    max_q = v;
                }
                used += 1;
            }
        }
    }
    let verdict = if sd.tau >= Q_ESTIMATE_TAU_THRESHOLD {
        QVerdict::NotApplicable
    } else if max_q <= bound {
        QVerdict::Pass
    } else {
        QVerdict::Fail
    };
    QEstimateReport {
        tau: sd.tau,
        bound,
        max_q,
        samples: used.max(1),
        verdict,
    }
}

/// Scans `rescaled_rho` for the pure-z₁ mixed block and compares with `p`
/// coefficientwise; the largest |difference| is returned (consistency probe).
pub fn p_scan_residual(sd: &ScalingData) -> f64 {
    let n = sd.rescaled_rho.nvars();
    let mut worst = 0.0f64;
    for (md, c) in sd.rescaled_rho.as_poly().iter() {
        let j = md.holo[0];
        let k = md.anti[0];
        let rest: u32 = (2..=n).map(|v| md.degree_in(v)).sum();
        if rest == 0 && j > 0 && k > 0 {
            let from_p = sd.p.as_poly().coeff(&Multidegree {
                holo: vec![j],
                anti: vec![k],
            });
            let d = (&from_p - c).abs_f64();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

impl ScalingData {
    /// Full numeric value of ε⁻¹ρ(Φ⁻¹(Δ⁻¹w)) at a point in w-coordinates.
    pub fn evaluate(&self, w: &[Complex64]) -> f64 {
        self.rescaled_rho.evaluate_real(w)
    }
}
