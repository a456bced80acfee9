//! Interior sequences, the limit polynomial along them, classification of
//! the limit model, and the top-homogeneous matcher.
//!
//! A sequence η_j → 0 inside the domain is lifted to the boundary,
//! normalized, and rescaled per j. Convergence of the P-coefficient vectors
//! is detected by a tail-window Cauchy test: only subsequential convergence
//! is guaranteed in general, so a non-convergent run reports its full traces
//! instead of failing. The limit model
//! M_P = {Re w_n + P(w₁,w̄₁) + Σ|w_α|² < 0} is classified by exact degree
//! structure plus a sampled subharmonicity certificate on ΔP.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::normalize::{lift_to_boundary, normalize_at};
use crate::parse::{parse_point, parse_rational};
use crate::poly::{Multidegree, Poly, RealPoly};
use crate::scalar::{rational_pow, ComplexScalar};
use crate::scaling::{rescaled_rho, ScalingData};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_JMAX: u32 = 64;
pub const DEFAULT_WINDOW: usize = 3;
pub const DEFAULT_SAMPLES: usize = 4096;
/// Relative margin of the sampled subharmonicity certificate.
pub const SUBHARMONIC_MARGIN: f64 = 1e-9;
/// Default sign margin for the domain-convergence probe.
pub const DEFAULT_PROBE_MARGIN: f64 = 1e-3;
/// Default residual tolerance of the top-homogeneous matcher.
pub const DEFAULT_MATCH_TOL: f64 = 1e-9;

/// How the interior points approach the origin.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum SequenceKind {
    /// (0, …, 0, −1/j): straight in along the inward normal.
    Normal,
    /// Normal approach tilted sideways: z' = (aperture/j)·direction.
    Cone { direction: String, aperture: String },
    /// z_i = 1/j^{p_i} tangentially; depth chosen so ρ = −1/j^{p_last}.
    Tangential { powers: Vec<u32> },
    /// Fixed list of interior points ("re,im;…" strings), looked up by j.
    Explicit { points: Vec<String> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceSpec {
    #[serde(flatten)]
    pub kind: SequenceKind,
    pub jmax: u32,
}

impl SequenceSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidDomain(format!("sequence JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct serializes")
    }

    /// Explicit lists cap the usable range at their length.
    pub fn effective_jmax(&self) -> u32 {
        match &self.kind {
            SequenceKind::Explicit { points } => self.jmax.min(points.len() as u32),
            _ => self.jmax,
        }
    }
}

/// The j-th point of the sequence, exact and verified interior.
pub fn generate_sequence(
    spec: &DomainSpec,
    seq: &SequenceSpec,
    j: u32,
) -> Result<Vec<ComplexScalar>> {
    if j == 0 || j > seq.jmax {
        return Err(Error::InvalidDomain(format!(
            "j = {j} outside 1..=jmax ({})",
            seq.jmax
        )));
    }
    let n = spec.n();
    let jr = BigRational::from_integer(BigInt::from(j));
    let point = match &seq.kind {
        SequenceKind::Normal => {
            let mut pt = vec![ComplexScalar::zero(); n];
            pt[n - 1] = ComplexScalar::from_rational(-jr.recip());
            pt
        }
        SequenceKind::Cone {
            direction,
            aperture,
        } => {
            let dir = parse_point(direction, n - 1)?;
            let ap = parse_rational(aperture)?;
            if ap.is_negative() {
                return Err(Error::InvalidDomain("aperture must be nonnegative".into()));
            }
            let scale = &ap / &jr;
            let mut pt: Vec<ComplexScalar> = dir.iter().map(|d| d.scale(&scale)).collect();
            pt.push(ComplexScalar::from_rational(-jr.recip()));
            pt
        }
        SequenceKind::Tangential { powers } => {
            if powers.len() < 2 || powers.len() > n {
                return Err(Error::InvalidDomain(format!(
                    "tangential powers must list 2..={n} entries, got {}",
                    powers.len()
                )));
            }
            if powers.iter().any(|&p| p == 0) {
                return Err(Error::InvalidDomain("powers must be ≥ 1".into()));
            }
            let mut pt = vec![ComplexScalar::zero(); n];
            for (i, &p) in powers[..powers.len() - 1].iter().enumerate() {
                pt[i] = ComplexScalar::from_rational(rational_pow(&jr, i64::from(p)).recip());
            }
            // z_n real with ρ = −1/j^{p_last} exactly; pt still has z_n = 0
            // here, so rho_at_exact returns F(z').
            let depth = rational_pow(&jr, i64::from(*powers.last().expect("len ≥ 2"))).recip();
            let f_val = spec.rho_at_exact(&pt);
            pt[n - 1] = ComplexScalar::from_rational(-(depth + f_val));
            pt
        }
        SequenceKind::Explicit { points } => {
            let Some(text) = points.get((j - 1) as usize) else {
                return Err(Error::InvalidDomain(format!(
                    "explicit sequence has {} points, j = {j}",
                    points.len()
                )));
            };
            parse_point(text, n)?
        }
    };
    if !spec.rho_at_exact(&point).is_negative() {
        return Err(Error::InvalidDomain(format!(
            "generated point at j = {j} is not interior"
        )));
    }
    Ok(point)
}

/// One pipeline pass: interior point → boundary lift → normal form → rescale.
pub fn scaling_at(spec: &DomainSpec, eta: &[ComplexScalar], m: u32) -> Result<ScalingData> {
    let (eta_prime, epsilon) = lift_to_boundary(spec, eta)?;
    let norm = normalize_at(spec, &eta_prime, m)?;
    rescaled_rho(&norm, &epsilon, m)
}

/// Origin gates shared by the sequence pipelines: normal form and even type.
/// Returns m with 2m the z₁-type at the origin.
pub fn pipeline_type(spec: &DomainSpec) -> Result<u32> {
    if !spec.validate_normal_form().structural_ok() {
        return Err(Error::InvalidDomain(
            "domain is not in coefficient normal form at the origin".into(),
        ));
    }
    let ty = spec.dangelo_type_z1()?;
    if !ty.is_even {
        return Err(Error::Hypothesis(format!(
            "z1-type {} is odd; the scaling normal form requires an even type 2m",
            ty.type_degree
        )));
    }
    Ok(ty.type_degree / 2)
}

/// One P-coefficient in binary64, keyed by (j, k) powers of (w₁, w̄₁).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CoeffEntry {
    pub j: u32,
    pub k: u32,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelClass {
    pub is_subharmonic: bool,
    pub laplacian_nontrivial: bool,
    pub degree: u32,
    pub is_homogeneous: bool,
    pub is_strongly_pseudoconvex_model: bool,
    /// Set exactly when P = c·|z₁|², c > 0.
    pub c: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct LimitReport {
    /// P from the final computed j, exact coefficients.
    pub p_limit: RealPoly,
    /// Per-j P-coefficient vectors.
    pub coeff_trace: Vec<Vec<CoeffEntry>>,
    /// Per-j largest |coefficient| over all Q^α.
    pub q_decay: Vec<f64>,
    pub tau_trace: Vec<f64>,
    pub eps_trace: Vec<f64>,
    pub converged: bool,
    /// Exact |coeff| ≤ 1 verdicts, ANDed over the run.
    pub coeff_bounds_ok: bool,
    pub model: ModelClass,
}

fn p_coeff_map(p: &RealPoly) -> BTreeMap<(u32, u32), Complex64> {
    p.as_poly()
        .iter()
        .map(|(md, c)| ((md.holo[0], md.anti[0]), c.to_c64()))
        .collect()
}

fn coeff_dist(a: &BTreeMap<(u32, u32), Complex64>, b: &BTreeMap<(u32, u32), Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for key in a.keys().chain(b.keys()) {
        let va = a.get(key).copied().unwrap_or_default();
        let vb = b.get(key).copied().unwrap_or_default();
        worst = worst.max((va - vb).norm());
    }
    worst
}

fn q_coeff_sup(sd: &ScalingData) -> f64 {
    sd.q
        .values()
        .flat_map(|q| q.iter())
        .map(|(_, c)| c.abs_f64())
        .fold(0.0, f64::max)
}

/// Runs the scaling pipeline along the sequence and extracts the limit P.
///
/// Stops early once the last `window` coefficient vectors are pairwise
/// within `tol` and max|Q^α| stays below `tol` across that window; otherwise
/// runs to jmax and reports converged = false with full traces.
pub fn limit_polynomial(
    spec: &DomainSpec,
    seq: &SequenceSpec,
    tol: f64,
    window: usize,
    samples: usize,
) -> Result<LimitReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidDomain("tol must be positive".into()));
    }
    if window < 2 {
        return Err(Error::InvalidDomain("window must be ≥ 2".into()));
    }
    let jmax = seq.effective_jmax();
    if (jmax as usize) < window {
        return Err(Error::InvalidDomain(format!(
            "jmax = {jmax} is smaller than window = {window}"
        )));
    }
    let m = pipeline_type(spec)?;

    let mut coeff_trace: Vec<Vec<CoeffEntry>> = Vec::new();
    let mut coeff_maps: Vec<BTreeMap<(u32, u32), Complex64>> = Vec::new();
    let mut q_decay: Vec<f64> = Vec::new();
    let mut tau_trace: Vec<f64> = Vec::new();
    let mut eps_trace: Vec<f64> = Vec::new();
    let mut coeff_bounds_ok = true;
    let mut last_p: Option<RealPoly> = None;
    let mut converged = false;

    for j in 1..=jmax {
        let eta = generate_sequence(spec, seq, j)?;
        let sd = scaling_at(spec, &eta, m)?;
        let map = p_coeff_map(&sd.p);
        coeff_trace.push(
            map.iter()
                .map(|(&(pj, pk), c)| CoeffEntry {
                    j: pj,
                    k: pk,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        );
        coeff_maps.push(map);
        q_decay.push(q_coeff_sup(&sd));
        tau_trace.push(sd.tau);
        eps_trace.push(sd.epsilon);
        coeff_bounds_ok &= sd.coeff_bound_ok;
        last_p = Some(sd.p);

        if coeff_maps.len() >= window {
            let tail = &coeff_maps[coeff_maps.len() - window..];
            let cauchy = (0..window).all(|x| {
                (x + 1..window).all(|y| coeff_dist(&tail[x], &tail[y]) <= tol)
            });
            let q_ok = q_decay[q_decay.len() - window..].iter().all(|&v| v < tol);
            if cauchy && q_ok {
                converged = true;
                break;
            }
        }
    }

    let p_limit = last_p.expect("jmax ≥ window ≥ 2 ran at least one pass");
    let model = classify_model(&p_limit, samples)?;
    Ok(LimitReport {
        p_limit,
        coeff_trace,
        q_decay,
        tau_trace,
        eps_trace,
        converged,
        coeff_bounds_ok,
        model,
    })
}

/// Copies a polynomial into the single-variable (z₁, z̄₁) ring, rejecting
/// any dependence on other variables.
fn project_univariate(p: &RealPoly) -> Result<Poly> {
    let src = p.as_poly();
    if src.nvars() == 0 {
        return Err(Error::InvalidDomain("polynomial has no variables".into()));
    }
    let mut out = Poly::zero(1);
    for (md, c) in src.iter() {
        if (2..=src.nvars()).any(|v| md.degree_in(v) > 0) {
            return Err(Error::InvalidDomain(
                "polynomial must involve only z1 and zb1".into(),
            ));
        }
        out.add_term(
            Multidegree {
                holo: vec![md.holo[0]],
                anti: vec![md.anti[0]],
            },
            c.clone(),
        );
    }
    Ok(out)
}

/// Sampled nonnegativity certificate for a Hermitian Laplacian polynomial.
///
/// Radial polynomials (every term j = k) are decided exactly when the
/// coefficient signs agree; otherwise the value min over `samples` angles of
/// the component-combined sum is required to clear −margin·scale at a ladder
/// of radii plus seeded random radii, with scale the largest possible
/// magnitude at that radius.
fn subharmonic_certificate(lap: &Poly, samples: usize) -> bool {
    if lap.is_zero() {
        return true;
    }
    let radial = lap.iter().all(|(md, _)| md.holo[0] == md.anti[0]);
    if radial {
        if lap.iter().all(|(_, c)| !c.re.is_negative()) {
            return true;
        }
        if lap.iter().all(|(_, c)| !c.re.is_positive()) {
            return false;
        }
    }
    let samples = samples.max(8);
    let mut components: BTreeMap<u32, Vec<(i64, Complex64)>> = BTreeMap::new();
    for (md, c) in lap.iter() {
        components
            .entry(md.total())
            .or_default()
            .push((i64::from(md.holo[0]) - i64::from(md.anti[0]), c.to_c64()));
    }
    let tables: Vec<(u32, Vec<f64>)> = components
        .iter()
        .map(|(&d, terms)| {
            let vals = (0..samples)
                .map(|u| {
                    let th = 2.0 * PI * u as f64 / samples as f64;
                    terms
                        .iter()
                        .map(|&(w, c)| (c * Complex64::from_polar(1.0, w as f64 * th)).re)
                        .sum()
                })
                .collect();
            (d, vals)
        })
        .collect();
    let mut radii: Vec<f64> = (-6..=6).map(|t| 2.0f64.powi(t)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ca1e);
    for _ in 0..16 {
        radii.push(10f64.powf(rng.gen_range(-2.0..2.0)));
    }
    for &r in &radii {
        let mut scale = 0.0f64;
        let powers: Vec<f64> = tables
            .iter()
            .map(|(d, vals)| {
                let rd = r.powi(*d as i32);
                let cmax = vals.iter().fold(0.0f64, |mx, v| mx.max(v.abs()));
                scale += rd * cmax;
                rd
            })
            .collect();
        if scale == 0.0 {
            continue;
        }
        for u in 0..samples {
            let total: f64 = tables
                .iter()
                .zip(&powers)
                .map(|((_, vals), rd)| rd * vals[u])
                .sum();
            if total < -SUBHARMONIC_MARGIN * scale {
                return false;
            }
        }
    }
    true
}

/// Classifies the limit model M_P from its polynomial P.
pub fn classify_model(p: &RealPoly, samples: usize) -> Result<ModelClass> {
    let p1 = project_univariate(p)?;
    for (md, _) in p1.iter() {
        if md.holo[0] == 0 || md.anti[0] == 0 {
            return Err(Error::InvalidDomain(format!(
                "P contains the harmonic monomial z1^{}*zb1^{}",
                md.holo[0], md.anti[0]
            )));
        }
    }
    let lap = p1.laplacian_z1();
    let laplacian_nontrivial = !lap.is_zero();
    let is_subharmonic = subharmonic_certificate(&lap, samples);
    let degree = p1.total_degree().unwrap_or(0);
    let degrees: BTreeSet<u32> = p1.iter().map(|(md, _)| md.total()).collect();
    let is_homogeneous = degrees.len() <= 1;
    let c_entry = p1.coeff(&Multidegree {
        holo: vec![1],
        anti: vec![1],
    });
    let is_strongly_pseudoconvex_model =
        p1.num_terms() == 1 && c_entry.im.is_zero() && c_entry.re.is_positive();
    let c = if is_strongly_pseudoconvex_model {
        Some(c_entry.to_c64().re)
    } else {
        None
    };
    Ok(ModelClass {
        is_subharmonic,
        laplacian_nontrivial,
        degree,
        is_homogeneous,
        is_strongly_pseudoconvex_model,
        c,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MatchReport {
    pub lambda: f64,
    /// Canonical smallest solution in [0, 2π); 0 when phase-free.
    pub nu: f64,
    /// True when every matched term has j = k, leaving ν unconstrained.
    pub phase_free: bool,
    pub max_residual: f64,
}

/// Solves Q_top = λ·H(e^{iν}·) coefficientwise: q_{j,k} = λ e^{i(j−k)ν} h_{j,k}.
///
/// Returns None when no consistent (λ > 0, ν) exists within `tol`; errors
/// when H is not an admissible top form (homogeneous of the matching even
/// degree, no harmonic terms, subharmonic).
pub fn match_top_homogeneous(
    q: &RealPoly,
    h: &RealPoly,
    tol: f64,
) -> Result<Option<MatchReport>> {
    let h1 = project_univariate(h)?;
    let q1 = project_univariate(q)?;
    if h1.is_zero() {
        return Err(Error::Hypothesis("H must be nonzero".into()));
    }
    for (md, _) in h1.iter() {
        if md.holo[0] == 0 || md.anti[0] == 0 {
            return Err(Error::Hypothesis("H contains harmonic terms".into()));
        }
    }
    let dh = h1.total_degree().expect("H nonzero");
    if h1.iter().any(|(md, _)| md.total() != dh) {
        return Err(Error::Hypothesis("H is not homogeneous".into()));
    }
    if dh % 2 != 0 {
        return Err(Error::Hypothesis(format!(
            "H has odd degree {dh}; the admissible class has degree 2m"
        )));
    }
    if !subharmonic_certificate(&h1.laplacian_z1(), DEFAULT_SAMPLES) {
        return Err(Error::Hypothesis(
            "H failed the subharmonicity certificate".into(),
        ));
    }
    let Some(dq) = q1.total_degree() else {
        return Ok(None);
    };
    if dq != dh {
        return Err(Error::Hypothesis(format!(
            "degree mismatch: deg Q = {dq} but deg H = {dh}"
        )));
    }
    let q_top = q1.homogeneous_part(dq, None);

    let hm: BTreeMap<(u32, u32), Complex64> = h1
        .iter()
        .map(|(md, c)| ((md.holo[0], md.anti[0]), c.to_c64()))
        .collect();
    let qm: BTreeMap<(u32, u32), Complex64> = q_top
        .iter()
        .map(|(md, c)| ((md.holo[0], md.anti[0]), c.to_c64()))
        .collect();

    // support of Q_top outside the support of H is unmatchable
    for (key, qv) in &qm {
        if !hm.contains_key(key) && qv.norm() > tol {
            return Ok(None);
        }
    }

    let (_, (lam_q, lam_h)) = hm
        .iter()
        .map(|(key, hv)| {
            let qv = qm.get(key).copied().unwrap_or_default();
            (hv.norm(), (qv, *hv))
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("H nonzero");
    let lambda = lam_q.norm() / lam_h.norm();
    if lambda <= tol {
        return Ok(None);
    }

    let residual = |nu: f64| -> f64 {
        let mut worst = 0.0f64;
        for (key, hv) in &hm {
            let qv = qm.get(key).copied().unwrap_or_default();
            let w = f64::from(key.0) - f64::from(key.1);
            let predicted = lambda * Complex64::from_polar(1.0, w * nu) * hv;
            worst = worst.max((qv - predicted).norm());
        }
        for (key, qv) in &qm {
            if !hm.contains_key(key) {
                worst = worst.max(qv.norm());
            }
        }
        worst
    };

    // phase pivot: the off-diagonal index with the strongest joint signal
    let pivot = hm
        .iter()
        .filter(|((pj, pk), _)| pj != pk)
        .map(|(key, hv)| {
            let qv = qm.get(key).copied().unwrap_or_default();
            (qv.norm() * hv.norm(), *key, *hv, qv)
        })
        .max_by(|a, b| a.0.total_cmp(&b.0));

    let report = match pivot {
        None => {
            let r = residual(0.0);
            (r <= tol).then_some(MatchReport {
                lambda,
                nu: 0.0,
                phase_free: true,
                max_residual: r,
            })
        }
        Some((_, (pj, pk), hv, qv)) => {
            let w = i64::from(pj) - i64::from(pk);
            let candidates: Vec<f64> = if qv.norm() == 0.0 {
                vec![0.0]
            } else {
                let base = (qv / hv).arg();
                (0..w.unsigned_abs())
                    .map(|t| ((base + 2.0 * PI * t as f64) / w as f64).rem_euclid(2.0 * PI))
                    .collect()
            };
            let mut best: Option<MatchReport> = None;
            for nu in candidates {
                let r = residual(nu);
                if r <= tol && best.map_or(true, |b| nu < b.nu) {
                    best = Some(MatchReport {
                        lambda,
                        nu,
                        phase_free: false,
                        max_residual: r,
                    });
                }
            }
            best
        }
    };
    Ok(report)
}

/// Re w_n + P(w₁, w̄₁) + Σ_α |w_α|² at a point of ℂⁿ (P univariate).
pub fn model_rho_value(p: &RealPoly, w: &[Complex64]) -> f64 {
    let n = w.len();
    assert!(n >= 2, "model needs at least (w1, wn)");
    let pv = p.evaluate_real(&[w[0]]);
    let alpha: f64 = w[1..n - 1].iter().map(|z| z.norm_sqr()).sum();
    w[n - 1].re + pv + alpha
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbePoint {
    /// Re w_n + P + Σ|w_α|² at the grid point.
    pub model_value: f64,
    pub expected_interior: bool,
    /// Smallest j₀ with the correct rescaled sign for all j ≥ j₀ up to jmax.
    pub stabilized_at: Option<u32>,
    /// True when |model_value| < margin: too close to ∂M_P to classify.
    pub skipped: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub pass: bool,
    pub margin: f64,
    pub jmax: u32,
    pub points: Vec<ProbePoint>,
}

/// Samples Definition-2.1 convergence of the rescaled domains toward
/// M_{candidate_P}: margin-interior grid points must eventually have
/// rescaled ρ < 0, margin-exterior ones > 0.
pub fn domain_convergence_probe(
    spec: &DomainSpec,
    seq: &SequenceSpec,
    candidate_p: &RealPoly,
    grid: &[Vec<Complex64>],
    margin: f64,
) -> Result<ProbeReport> {
    if !(margin > 0.0) {
        return Err(Error::InvalidDomain("margin must be positive".into()));
    }
    let p1 = RealPoly::new(project_univariate(candidate_p)?)?;
    let m = pipeline_type(spec)?;
    let n = spec.n();
    let jmax = seq.effective_jmax();
    if jmax == 0 {
        return Err(Error::InvalidDomain("sequence has no points".into()));
    }

    let mut points: Vec<ProbePoint> = grid
        .iter()
        .map(|w| {
            assert_eq!(w.len(), n, "grid point dimension mismatch");
            let v = model_rho_value(&p1, w);
            ProbePoint {
                model_value: v,
                expected_interior: v < 0.0,
                stabilized_at: None,
                skipped: v.abs() < margin,
            }
        })
        .collect();

    let mut last_wrong = vec![0u32; grid.len()];
    for j in 1..=jmax {
        let eta = generate_sequence(spec, seq, j)?;
        let sd = scaling_at(spec, &eta, m)?;
        for (i, w) in grid.iter().enumerate() {
            if points[i].skipped {
                continue;
            }
            let v = sd.evaluate(w);
            let ok = if points[i].expected_interior {
                v < 0.0
            } else {
                v > 0.0
            };
            if !ok {
                last_wrong[i] = j;
            }
        }
    }
    let mut pass = true;
    for (i, pt) in points.iter_mut().enumerate() {
        if pt.skipped {
            continue;
        }
        if last_wrong[i] < jmax {
            pt.stabilized_at = Some(last_wrong[i] + 1);
        } else {
            pass = false;
        }
    }
    Ok(ProbeReport {
        pass,
        margin,
        jmax,
        points,
    })
}

/// Seeded random grid around ∂M_P: each point has model value −t with
/// 2·margin ≤ |t| ≤ 1, interior exactly when t > 0.
pub fn model_grid(
    p: &RealPoly,
    n: usize,
    count: usize,
    margin: f64,
    seed: u64,
) -> Vec<Vec<Complex64>> {
    assert!(n >= 2 && margin > 0.0 && margin < 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut w = Vec::with_capacity(n);
            w.push(Complex64::from_polar(
                rng.gen_range(0.0..1.2),
                rng.gen_range(0.0..2.0 * PI),
            ));
            for _ in 0..n - 2 {
                w.push(Complex64::from_polar(
                    rng.gen_range(0.0..1.0),
                    rng.gen_range(0.0..2.0 * PI),
                ));
            }
            let t_raw: f64 = rng.gen_range(-1.0f64..1.0);
            let t = t_raw.signum() * (2.0 * margin + t_raw.abs() * (1.0 - 2.0 * margin));
            let base = p.evaluate_real(&w[..1])
                + w[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
            w.push(Complex64::new(-base - t, rng.gen_range(-1.0..1.0)));
            w
        })
        .collect()
}
