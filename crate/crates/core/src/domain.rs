//! Rigid polynomial model domains ρ = Re z_n + F(z', z̄') and their boundary
//! invariants: Levi data, D'Angelo type in the degenerate direction, and a
//! sampled pseudoconvexity check.

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{hermitian_eigen, rank_corank};
use crate::parse::parse_real_poly;
use crate::poly::{Multidegree, Poly, RealPoly};
use crate::scalar::ComplexScalar;

/// Default eigenvalue tolerance for Levi rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Rigid domain {ρ < 0} with ρ = Re z_n + F. F is stored in the full
/// n-variable ring but never touches z_n.
#[derive(Clone, Debug)]
pub struct DomainSpec {
    n: usize,
    f: RealPoly,
    pub label: String,
}

/// On-disk form: {"n": int, "F": "<expression>", "label": string}.
#[derive(Serialize, Deserialize)]
struct RawDomain {
    n: usize,
    #[serde(rename = "F")]
    f: String,
    #[serde(default)]
    label: String,
}

impl DomainSpec {
    pub fn new(n: usize, f: RealPoly, label: impl Into<String>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDomain(format!("dimension n={n} < 2")));
        }
        if f.nvars() != n {
            return Err(Error::InvalidDomain(format!(
                "F has nvars {} but n={n}",
                f.nvars()
            )));
        }
        for (md, _) in f.as_poly().iter() {
            if md.degree_in(n) > 0 {
                return Err(Error::InvalidDomain(
                    "F must not involve z_n or its conjugate".into(),
                ));
            }
            if md.total() == 0 {
                return Err(Error::InvalidDomain("F must vanish at the origin".into()));
            }
        }
        Ok(DomainSpec {
            n,
            f,
            label: label.into(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawDomain = serde_json::from_str(text)
            .map_err(|e| Error::InvalidDomain(format!("domain JSON: {e}")))?;
        let f = parse_real_poly(&raw.f, raw.n)?;
        DomainSpec::new(raw.n, f, raw.label)
    }

    pub fn to_json(&self) -> String {
        let raw = RawDomain {
            n: self.n,
            f: self.f.to_string(),
            label: self.label.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("plain struct serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> &RealPoly {
        &self.f
    }

    /// ρ = Re z_n + F as an exact polynomial.
    pub fn rho(&self) -> RealPoly {
        let re_zn = Poly::var_pow(self.n, self.n, 1, false)
            .expect("index in range")
            .real_projection();
        RealPoly::new(re_zn.add(self.f.as_poly()).expect("same nvars"))
            .expect("sum of Hermitian polys")
    }

    pub fn rho_at(&self, point: &[Complex64]) -> f64 {
        point[self.n - 1].re + self.f.evaluate_real(point)
    }

    pub fn rho_at_exact(&self, point: &[ComplexScalar]) -> num_rational::BigRational {
        &point[self.n - 1].re + self.f.evaluate_exact_real(point)
    }

    /// ∂²F/∂z_j∂z̄_k as exact polynomials, (n−1)×(n−1).
    pub fn levi_polys(&self) -> Vec<Vec<Poly>> {
        let p = self.f.as_poly();
        (1..self.n)
            .map(|j| {
                let dj = p.wirtinger(j, false).expect("index in range");
                (1..self.n)
                    .map(|k| dj.wirtinger(k, true).expect("index in range"))
                    .collect()
            })
            .collect()
    }

    pub fn levi_form(&self, point: &[Complex64]) -> LeviData {
        self.levi_form_tol(point, DEFAULT_RANK_TOL)
    }

    pub fn levi_form_tol(&self, point: &[Complex64], tol: f64) -> LeviData {
        assert_eq!(point.len(), self.n - 1, "point must list z_1..z_{{n-1}}");
        let mut full = point.to_vec();
        full.push(Complex64::zero()); // F ignores z_n
        let polys = self.levi_polys();
        let matrix: Vec<Vec<Complex64>> = polys
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(&full)).collect())
            .collect();
        let eig = hermitian_eigen(&matrix);
        let (rank, corank) = rank_corank(&eig.eigenvalues, tol);
        LeviData {
            matrix,
            eigenvalues: eig.eigenvalues,
            rank,
            corank,
        }
    }

    pub fn levi_rank_corank(&self, point: &[Complex64], tol: f64) -> (usize, usize) {
        let data = self.levi_form_tol(point, tol);
        (data.rank, data.corank)
    }

    pub fn validate_normal_form(&self) -> NormalFormReport {
        let f = self.f.as_poly();
        let n = self.n;
        let mut no_constant_or_linear = true;
        let mut no_harmonic_z1 = true;
        for (md, _) in f.iter() {
            if md.total() <= 1 {
                no_constant_or_linear = false;
            }
            // pure power of z1 alone, or of z̄1 alone
            let others = (2..n).map(|v| md.degree_in(v)).sum::<u32>();
            if others == 0 && ((md.holo[0] > 0) != (md.anti[0] > 0)) {
                no_harmonic_z1 = false;
            }
        }
        // quadratic block over z_2..z_{n-1}: coeff(z_α z̄_β) = δ_{αβ}, and no
        // z_1 z̄_α cross terms
        let mut alpha_block_identity = true;
        let quad = |a: usize, b: usize| -> ComplexScalar {
            let mut md = Multidegree::zero(n);
            md.holo[a - 1] += 1;
            md.anti[b - 1] += 1;
            f.coeff(&md)
        };
        for alpha in 2..n {
            for beta in 2..n {
                let want = if alpha == beta {
                    ComplexScalar::one()
                } else {
                    ComplexScalar::zero()
                };
                if quad(alpha, beta) != want {
                    alpha_block_identity = false;
                }
            }
            if !quad(1, alpha).is_zero() || !quad(alpha, 1).is_zero() {
                alpha_block_identity = false;
            }
        }
        let z1_levi_degenerate = quad(1, 1).is_zero();
        NormalFormReport {
            no_constant_or_linear,
            alpha_block_identity,
            no_harmonic_z1,
            z1_levi_degenerate,
        }
    }

    /// Minimal mixed degree in the z₁ direction: min{j+k : a_{j,k} ≠ 0}.
    /// Under the corank-≤1 normal form this is the D'Angelo type; otherwise
    /// it is only a lower-bound certificate and the report says so.
    pub fn dangelo_type_z1(&self) -> Result<TypeReport> {
        let f = self.f.as_poly();
        let n = self.n;
        let mut best: Option<u32> = None;
        for (md, _) in f.iter() {
            let others = (2..n).map(|v| md.degree_in(v)).sum::<u32>();
            if others == 0 && md.holo[0] > 0 && md.anti[0] > 0 {
                let d = md.total();
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        let Some(type_degree) = best else {
            return Err(Error::Hypothesis(
                "no finite type detected in z1 up to degree cap (no mixed pure-z1 term)".into(),
            ));
        };
        let normal_form = self.validate_normal_form();
        let mut warnings = Vec::new();
        if type_degree % 2 != 0 {
            warnings.push(format!(
                "minimal mixed degree {type_degree} is odd; real-valuedness forces a conjugate \
                 pair, so this does not fit the 2m normal form"
            ));
        }
        if !normal_form.structural_ok() {
            warnings.push(
                "normal-form constraints fail at the origin; value is a lower-bound certificate"
                    .into(),
            );
        }
        Ok(TypeReport {
            type_degree,
            is_even: type_degree % 2 == 0,
            certified: normal_form.structural_ok() && type_degree % 2 == 0,
            warnings,
        })
    }

    /// Samples the polydisc {|z_k| ≤ radius} in the z' slice and reports the
    /// minimum Levi eigenvalue. For rigid ρ the Levi form restricted to the
    /// complex tangent space equals the full F-Hessian form on z'-vectors
    /// (the z_n component absorbs the tangency constraint and never enters
    /// the Hessian), so sampling the F-Hessian is the exact restriction.
    pub fn pseudoconvexity_sample(
        &self,
        radius: f64,
        count: usize,
        seed: u64,
    ) -> PseudoconvexityReport {
        assert!(radius > 0.0 && count >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut min_eigenvalue = f64::INFINITY;
        let mut argmin = vec![Complex64::zero(); self.n - 1];
        for _ in 0..count {
            let pt: Vec<Complex64> = (0..self.n - 1)
                .map(|_| {
                    Complex64::new(
                        rng.gen_range(-radius..=radius),
                        rng.gen_range(-radius..=radius),
                    )
                })
                .collect();
            let levi = self.levi_form(&pt);
            let lam = levi.eigenvalues[0];
            if lam < min_eigenvalue {
                min_eigenvalue = lam;
                argmin = pt;
            }
        }
        PseudoconvexityReport {
            samples: count,
            radius,
            min_eigenvalue,
            argmin_point: argmin,
            pass: min_eigenvalue >= -1e-7,
        }
    }
}

/// Levi form of F at a point: Hermitian matrix, spectrum, rank and corank.
#[derive(Clone, Debug)]
pub struct LeviData {
    pub matrix: Vec<Vec<Complex64>>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub rank: usize,
    pub corank: usize,
}

/// Origin normal-form constraints, reported independently.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NormalFormReport {
    pub no_constant_or_linear: bool,
    pub alpha_block_identity: bool,
    pub no_harmonic_z1: bool,
    /// Informational: false means type 2 (strongly pseudoconvex) at the
    /// origin, which is still within the normal form.
    pub z1_levi_degenerate: bool,
}

impl NormalFormReport {
    /// The constraints the pipeline needs; z₁-degeneracy is not among them.
    pub fn structural_ok(&self) -> bool {
        self.no_constant_or_linear && self.alpha_block_identity && self.no_harmonic_z1
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeReport {
    pub type_degree: u32,
    pub is_even: bool,
    pub certified: bool,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct PseudoconvexityReport {
    pub samples: usize,
    pub radius: f64,
    pub min_eigenvalue: f64,
    pub argmin_point: Vec<Complex64>,
    pub pass: bool,
}

/// F = |z1|^{2m} + Σ_α |z_α|², the egg family, as a ready-made spec.
pub fn egg_domain(n: usize, m: u32) -> DomainSpec {
    let mut f = Poly::zero(n);
    let mut md = Multidegree::zero(n);
    md.holo[0] = m;
    md.anti[0] = m;
    f.add_term(md, ComplexScalar::one());
    for alpha in 2..n {
        let mut md = Multidegree::zero(n);
        md.holo[alpha - 1] = 1;
        md.anti[alpha - 1] = 1;
        f.add_term(md, ComplexScalar::one());
    }
    DomainSpec::new(
        n,
        RealPoly::new(f).expect("Hermitian by construction"),
        format!("egg E{m}"),
    )
    .expect("valid by construction")
}
