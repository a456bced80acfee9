//! Coordinate normalization at a boundary point of a rigid domain.
//!
//! `normalize_at` builds the biholomorphism Φ taking a boundary point η' to
//! the origin and putting ρ∘Φ⁻¹ into the coefficient normal form
//!
//! ```text
//! Re w_n + Σ_{j,k>0, j+k≤2m} a_{j,k} w₁^j w̄₁^k + Σ_α |w_α|²
//!        + Σ_{α} Σ_{j,k>0, j+k≤m} Re[(b^α_{j,k} w₁^j w̄₁^k) w_α] + remainder
//! ```
//!
//! where the remainder carries no monomial of the displayed classes. The
//! pipeline: translate η' to 0; shear all harmonic (pure holomorphic and
//! conjugate) z'-terms of degree ≤ 2m into w_n, which also aligns the
//! gradient; turn the Levi block over (w₂..w_{n−1}) into the identity; then
//! shear w_α by polynomials in w₁ of degree ≤ m to delete the
//! harmonic-in-w₁, α-linear terms. Every map has exact rational
//! coefficients, so the decomposition is an exact polynomial identity; when
//! the Levi block needs an irrational eigenbasis the basis is rationalized
//! from binary64 and the class-absence postcondition is re-verified with
//! tolerance instead of exactly.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::hermitian::hermitian_eigen;
use crate::poly::{HoloMap, Multidegree, Poly, RealPoly, DEFAULT_DEGREE_CAP};
use crate::scalar::{rational_from_f64, rational_sqrt, ComplexScalar};

/// Residual tolerance for the class-absence postcondition when the Levi
/// eigenbasis had to be rationalized from binary64.
pub const BINARY64_CLASS_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct NormalizationResult {
    /// w = phi(z), phi(η') = 0.
    pub phi: HoloMap,
    /// Exact compositional inverse, z = phi_inv(w).
    pub phi_inv: HoloMap,
    /// (j,k) → a_{j,k}, stored for nonzero entries with j,k>0, j+k ≤ 2m.
    pub a_table: BTreeMap<(u32, u32), ComplexScalar>,
    /// (α,j,k) → b^α_{j,k}, nonzero entries with j,k>0, j+k ≤ m, 2 ≤ α ≤ n−1.
    pub b_table: BTreeMap<(usize, u32, u32), ComplexScalar>,
    /// ρ∘phi_inv − (main part); exact by construction.
    pub remainder: RealPoly,
    pub base_point: Vec<ComplexScalar>,
    pub m: u32,
    /// False when the Levi block was diagonalized through binary64.
    pub exact: bool,
    /// Largest |coefficient| left on a main-class monomial (0 when exact).
    pub max_class_residual: f64,
}

impl NormalizationResult {
    pub fn n(&self) -> usize {
        self.phi.dim()
    }

    pub fn a(&self, j: u32, k: u32) -> ComplexScalar {
        self.a_table
            .get(&(j, k))
            .cloned()
            .unwrap_or_else(ComplexScalar::zero)
    }

    pub fn b(&self, alpha: usize, j: u32, k: u32) -> ComplexScalar {
        self.b_table
            .get(&(alpha, j, k))
            .cloned()
            .unwrap_or_else(ComplexScalar::zero)
    }

    /// The displayed normal-form sum as an exact polynomial.
    pub fn main_part(&self) -> RealPoly {
        let n = self.n();
        let mut main = Poly::var_pow(n, n, 1, false)
            .expect("index in range")
            .real_projection();
        for (&(j, k), c) in &self.a_table {
            main.add_term(md_z1(n, j, k), c.clone());
        }
        for alpha in 2..n {
            let mut md = Multidegree::zero(n);
            md.holo[alpha - 1] = 1;
            md.anti[alpha - 1] = 1;
            main.add_term(md, ComplexScalar::one());
        }
        let half = ComplexScalar::from_ratio(1, 2);
        for (&(alpha, j, k), b) in &self.b_table {
            main.add_term(md_b(n, j, k, alpha, false), &half * b);
            main.add_term(md_b(n, k, j, alpha, true), &half * &b.conj());
        }
        RealPoly::new(main).expect("main part is Hermitian")
    }

    /// main_part + remainder = ρ∘phi_inv as exact polynomials.
    pub fn reconstruct(&self) -> RealPoly {
        RealPoly::new(
            self.main_part()
                .as_poly()
                .add(self.remainder.as_poly())
                .expect("same nvars"),
        )
        .expect("sum of Hermitian polys")
    }
}

/// w₁^j w̄₁^k in n variables.
fn md_z1(n: usize, j: u32, k: u32) -> Multidegree {
    let mut md = Multidegree::zero(n);
    md.holo[0] = j;
    md.anti[0] = k;
    md
}

/// w₁^j w̄₁^k w_α (or the conjugated α factor when `barred`).
fn md_b(n: usize, j: u32, k: u32, alpha: usize, barred: bool) -> Multidegree {
    let mut md = md_z1(n, j, k);
    if barred {
        md.anti[alpha - 1] = 1;
    } else {
        md.holo[alpha - 1] = 1;
    }
    md
}

/// Interior point → boundary point straight up the Re z_n axis.
/// ε = −ρ(η) exactly, since ρ is affine in Re z_n with slope 1.
pub fn lift_to_boundary(
    spec: &DomainSpec,
    eta: &[ComplexScalar],
) -> Result<(Vec<ComplexScalar>, BigRational)> {
    if eta.len() != spec.n() {
        return Err(Error::InvalidDomain(format!(
            "point has {} coordinates, expected {}",
            eta.len(),
            spec.n()
        )));
    }
    let rho = spec.rho_at_exact(eta);
    if !rho.is_negative() {
        return Err(Error::Hypothesis(format!(
            "point is not interior: ρ(η) = {rho} ≥ 0"
        )));
    }
    let epsilon = -rho;
    let mut eta_prime = eta.to_vec();
    eta_prime[spec.n() - 1] = &eta_prime[spec.n() - 1]
        + &ComplexScalar::from_rational(epsilon.clone());
    debug_assert!(spec.rho_at_exact(&eta_prime).is_zero());
    Ok((eta_prime, epsilon))
}

/// Accepts a boundary point unchanged and lifts an interior point; exterior
/// points are rejected. The returned height is Some exactly when a lift
/// happened.
pub fn boundary_point_of(
    spec: &DomainSpec,
    point: &[ComplexScalar],
) -> Result<(Vec<ComplexScalar>, Option<BigRational>)> {
    if point.len() != spec.n() {
        return Err(Error::InvalidDomain(format!(
            "point has {} coordinates, expected {}",
            point.len(),
            spec.n()
        )));
    }
    let rho = spec.rho_at_exact(point);
    if rho.is_zero() {
        return Ok((point.to_vec(), None));
    }
    if rho.is_negative() {
        let (bp, eps) = lift_to_boundary(spec, point)?;
        return Ok((bp, Some(eps)));
    }
    Err(Error::InvalidDomain(format!(
        "point lies outside the closed domain: ρ = {rho} > 0"
    )))
}

/// Exact inverse of a square ComplexScalar matrix by Gauss–Jordan.
fn invert_exact(a: &[Vec<ComplexScalar>]) -> Result<Vec<Vec<ComplexScalar>>> {
    let n = a.len();
    let mut m: Vec<Vec<ComplexScalar>> = a.to_vec();
    let mut inv: Vec<Vec<ComplexScalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        ComplexScalar::one()
                    } else {
                        ComplexScalar::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs2().cmp(&m[j][col].abs2()))
            .expect("nonempty range");
        if m[pivot][col].is_zero() {
            return Err(Error::Hypothesis("singular linear change".into()));
        }
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].recip();
        for j in 0..n {
            m[col][j] = &m[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in 0..n {
                let mj = &m[col][j] * &f;
                m[i][j] = &m[i][j] - &mj;
                let ij = &inv[col][j] * &f;
                inv[i][j] = &inv[i][j] - &ij;
            }
        }
    }
    Ok(inv)
}

/// Linear HoloMap w ↦ M·w restricted to variables `first..=last` (1-based),
/// identity elsewhere.
fn linear_block_map(n: usize, first: usize, m: &[Vec<ComplexScalar>]) -> HoloMap {
    let mut components = Vec::with_capacity(n);
    for var in 1..=n {
        if var < first || var >= first + m.len() {
            components.push(Poly::var_pow(n, var, 1, false).expect("index in range"));
        } else {
            let row = var - first;
            let mut p = Poly::zero(n);
            for (col, c) in m[row].iter().enumerate() {
                if !c.is_zero() {
                    p = p
                        .add(&Poly::var_pow(n, first + col, 1, false)
                            .expect("index in range")
                            .scale(c))
                        .expect("same nvars");
                }
            }
            components.push(p);
        }
    }
    HoloMap::new(components).expect("linear components are holomorphic")
}

/// One shear: component `var` becomes z_var + delta, identity elsewhere.
fn shear_map(n: usize, var: usize, delta: &Poly) -> HoloMap {
    let mut components = Vec::with_capacity(n);
    for v in 1..=n {
        let mut p = Poly::var_pow(n, v, 1, false).expect("index in range");
        if v == var {
            p = p.add(delta).expect("same nvars");
        }
        components.push(p);
    }
    HoloMap::new(components).expect("shear components are holomorphic")
}

struct Pipeline {
    cap: u32,
    cur: Poly,
    phi: HoloMap,
    phi_inv: HoloMap,
}

impl Pipeline {
    /// Applies an elementary step given its forward and inverse maps.
    fn step(&mut self, fwd: HoloMap, inv: HoloMap) -> Result<()> {
        self.cur = self.cur.substitute(&inv, self.cap)?;
        self.phi = fwd.compose(&self.phi, self.cap)?;
        self.phi_inv = self.phi_inv.compose(&inv, self.cap)?;
        Ok(())
    }
}

/// Main-class monomial predicate for the remainder scan. The classes are the
/// displayed terms of the normal form: constants, all linear terms, all
/// quadratic mixed terms in z', pure-z₁ mixed terms with j+k ≤ 2m, and
/// α-linear b-terms with j,k > 0, j+k ≤ m.
fn is_main_class(md: &Multidegree, n: usize, m: u32) -> bool {
    let total = md.total();
    if total <= 1 {
        return true;
    }
    let z1h = md.holo[0];
    let z1a = md.anti[0];
    let holo_rest: u32 = md.holo[1..n - 1].iter().sum();
    let anti_rest: u32 = md.anti[1..n - 1].iter().sum();
    let zn = md.degree_in(n);
    if zn > 0 {
        return false; // w_n beyond the linear term never appears for rigid ρ
    }
    // pure z1, mixed, within table range
    if holo_rest == 0 && anti_rest == 0 && z1h > 0 && z1a > 0 && z1h + z1a <= 2 * m {
        return true;
    }
    // quadratic mixed in z': |w_α|², cross terms, and w₁w̄_α shapes
    if total == 2 && md.holo.iter().sum::<u32>() == 1 && md.anti.iter().sum::<u32>() == 1 {
        return true;
    }
    // b-class: w₁^j w̄₁^k times a single α factor, j,k > 0, j+k ≤ m
    if z1h > 0 && z1a > 0 && z1h + z1a <= m {
        let single_alpha = holo_rest + anti_rest == 1;
        if single_alpha {
            return true;
        }
    }
    false
}

/// Builds the normalization at a boundary point. `m` is half the D'Angelo
/// type at the origin; shears run to degree 2m (into w_n) and m (into w_α).
pub fn normalize_at(
    spec: &DomainSpec,
    eta_prime: &[ComplexScalar],
    m: u32,
) -> Result<NormalizationResult> {
    let n = spec.n();
    if eta_prime.len() != n {
        return Err(Error::InvalidDomain(format!(
            "point has {} coordinates, expected {n}",
            eta_prime.len()
        )));
    }
    if m == 0 {
        return Err(Error::InvalidDomain("m must be ≥ 1".into()));
    }
    let rho_eta = spec.rho_at_exact(eta_prime);
    if !rho_eta.is_zero() {
        return Err(Error::Hypothesis(format!(
            "point is not on the boundary: ρ(η') = {rho_eta}"
        )));
    }

    let cap = DEFAULT_DEGREE_CAP;
    let mut pipe = Pipeline {
        cap,
        cur: spec.rho().into_poly(),
        phi: HoloMap::identity(n),
        phi_inv: HoloMap::identity(n),
    };

    // translate η' to the origin: u = z − η'
    {
        let fwd_components = (1..=n)
            .map(|v| {
                Poly::var_pow(n, v, 1, false)
                    .expect("index in range")
                    .add(&Poly::constant(n, -&eta_prime[v - 1]))
                    .expect("same nvars")
            })
            .collect();
        let inv_components = (1..=n)
            .map(|v| {
                Poly::var_pow(n, v, 1, false)
                    .expect("index in range")
                    .add(&Poly::constant(n, eta_prime[v - 1].clone()))
                    .expect("same nvars")
            })
            .collect();
        pipe.step(
            HoloMap::new(fwd_components).expect("affine components"),
            HoloMap::new(inv_components).expect("affine components"),
        )?;
    }

    // absorb every harmonic z'-term of degree 1..=2m into w_n;
    // the degree-1 part is the gradient alignment
    {
        let mut y = Poly::zero(n);
        for (md, c) in pipe.cur.iter() {
            let harmonic = md.anti.iter().all(|&e| e == 0);
            if harmonic && md.degree_in(n) == 0 && (1..=2 * m).contains(&md.total()) {
                y.add_term(md.clone(), c.clone());
            }
        }
        if !y.is_zero() {
            let two_y = y.scale(&ComplexScalar::from_int(2));
            let fwd = shear_map(n, n, &two_y);
            let inv = shear_map(n, n, &two_y.neg());
            pipe.step(fwd, inv)?;
        }
    }

    // Levi block over u_2..u_{n-1}: make it the identity
    let mut exact = true;
    if n > 2 {
        let block: Vec<Vec<ComplexScalar>> = (2..n)
            .map(|alpha| {
                (2..n)
                    .map(|beta| {
                        let mut md = Multidegree::zero(n);
                        md.holo[alpha - 1] += 1;
                        md.anti[beta - 1] += 1;
                        pipe.cur.coeff(&md)
                    })
                    .collect()
            })
            .collect();
        let k = n - 2;
        let identity_already = (0..k).all(|i| {
            (0..k).all(|j| {
                let want = if i == j {
                    ComplexScalar::one()
                } else {
                    ComplexScalar::zero()
                };
                block[i][j] == want
            })
        });
        if !identity_already {
            let diagonal = (0..k).all(|i| (0..k).all(|j| i == j || block[i][j].is_zero()));
            let rational_roots: Option<Vec<BigRational>> = if diagonal {
                (0..k)
                    .map(|i| {
                        let d = &block[i][i];
                        if d.is_real() && d.re.is_positive() {
                            rational_sqrt(&d.re)
                        } else {
                            None
                        }
                    })
                    .collect()
            } else {
                None
            };
            let c_matrix: Vec<Vec<ComplexScalar>> = match rational_roots {
                // exact: u_α = v_α / √λ_α
                Some(roots) => (0..k)
                    .map(|i| {
                        (0..k)
                            .map(|j| {
                                if i == j {
                                    ComplexScalar::from_rational(roots[i].recip())
                                } else {
                                    ComplexScalar::zero()
                                }
                            })
                            .collect()
                    })
                    .collect(),
                // binary64 eigenbasis, rationalized: C = U·D^{-1/2}
                None => {
                    if diagonal {
                        let ok = (0..k)
                            .all(|i| block[i][i].is_real() && block[i][i].re.is_positive());
                        if !ok {
                            return Err(Error::Hypothesis(
                                "Levi block over (w_2..w_{n-1}) is not positive definite \
                                 (corank hypothesis violated at this point)"
                                    .into(),
                            ));
                        }
                    }
                    exact = false;
                    let bf: Vec<Vec<num_complex::Complex64>> = block
                        .iter()
                        .map(|row| row.iter().map(|c| c.to_c64()).collect())
                        .collect();
                    let eig = hermitian_eigen(&bf);
                    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));
                    if eig.eigenvalues[0] <= 1e-10 * (1.0 + scale) {
                        return Err(Error::Hypothesis(
                            "Levi block over (w_2..w_{n-1}) is singular or not positive \
                             definite (corank hypothesis violated at this point)"
                                .into(),
                        ));
                    }
                    (0..k)
                        .map(|row| {
                            (0..k)
                                .map(|col| {
                                    let u = eig.eigenvectors[col][row];
                                    let z = u / eig.eigenvalues[col].sqrt();
                                    ComplexScalar::new(
                                        rational_from_f64(z.re),
                                        rational_from_f64(z.im),
                                    )
                                })
                                .collect()
                        })
                        .collect()
                }
            };
            let c_inv = invert_exact(&c_matrix)?;
            // inverse map: u_α = Σ C_{αβ} v_β; forward: v = C⁻¹ u
            let inv = linear_block_map(n, 2, &c_matrix);
            let fwd = linear_block_map(n, 2, &c_inv);
            pipe.step(fwd, inv)?;
        }
    }

    // α-shears by w₁-powers, staged by degree so created targets (always of
    // higher degree) are caught by later passes
    for h in 1..=m {
        for alpha in 2..n {
            let target = md_b(n, h, 0, alpha, true);
            let d = pipe.cur.coeff(&target);
            if d.is_zero() {
                continue;
            }
            let w1h = Poly::var_pow(n, 1, h, false).expect("index in range");
            let inv = shear_map(n, alpha, &w1h.scale(&(-&d)));
            let fwd = shear_map(n, alpha, &w1h.scale(&d));
            pipe.step(fwd, inv)?;
        }
    }

    // extraction: read the tables off the final polynomial
    let cur = &pipe.cur;
    let half = ComplexScalar::from_ratio(1, 2);
    {
        let wn = Poly::var_pow(n, n, 1, false).expect("index in range");
        let lead = cur.coeff(wn.iter().next().expect("one term").0);
        assert_eq!(lead, half, "Re w_n leading coefficient must be 1");
    }
    let mut a_table = BTreeMap::new();
    let mut b_table = BTreeMap::new();
    for (md, c) in cur.iter() {
        if md.degree_in(n) > 0 {
            continue; // rigid: w_n appears only in the leading Re w_n
        }
        let z1h = md.holo[0];
        let z1a = md.anti[0];
        let rest_h: u32 = md.holo[1..].iter().sum();
        let rest_a: u32 = md.anti[1..].iter().sum();
        if z1h > 0 && z1a > 0 && z1h + z1a <= 2 * m && rest_h == 0 && rest_a == 0 {
            a_table.insert((z1h, z1a), c.clone());
        }
        if z1h > 0 && z1a > 0 && z1h + z1a <= m && rest_h == 1 && rest_a == 0 {
            let alpha = (2..n)
                .find(|&v| md.holo[v - 1] == 1)
                .expect("single α factor");
            b_table.insert((alpha, z1h, z1a), c / &half);
        }
    }
    let result = NormalizationResult {
        phi: pipe.phi,
        phi_inv: pipe.phi_inv,
        a_table,
        b_table,
        remainder: RealPoly::new(Poly::zero(n)).expect("zero is Hermitian"),
        base_point: eta_prime.to_vec(),
        m,
        exact,
        max_class_residual: 0.0,
    };
    let main = result.main_part();
    let remainder_poly = cur.sub(main.as_poly())?;

    // class-absence postcondition
    let mut max_class_residual = 0.0f64;
    for (md, c) in remainder_poly.iter() {
        if is_main_class(md, n, m) {
            let r = c.abs_f64();
            max_class_residual = max_class_residual.max(r);
            if exact {
                panic!(
                    "normalization postcondition violated exactly: class monomial {md:?} \
                     with coefficient {c:?} left in remainder"
                );
            }
        }
    }
    if !exact && max_class_residual > BINARY64_CLASS_TOL {
        return Err(Error::Hypothesis(format!(
            "binary64 Levi step left class residual {max_class_residual:.3e} > {BINARY64_CLASS_TOL:.0e}"
        )));
    }

    Ok(NormalizationResult {
        remainder: RealPoly::new(remainder_poly)?,
        max_class_residual,
        ..result
    })
}
