//! Sparse exact polynomial algebra over ℂ in z₁..z_n and z̄₁..z̄_n.
//!
//! The 2n symbols commute; conjugation swaps the exponent blocks. Canonical
//! form is a graded-lexicographic term map with no stored zero coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::ComplexScalar;

/// Guardrail on total degree for composition-heavy operations.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// Exponent vector: `holo[i]` is the power of z_{i+1}, `anti[i]` of z̄_{i+1}.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Multidegree {
    pub holo: Vec<u32>,
    pub anti: Vec<u32>,
}

impl Multidegree {
    pub fn zero(n: usize) -> Self {
        Multidegree {
            holo: vec![0; n],
            anti: vec![0; n],
        }
    }

    /// Single variable z_{var} (1-based) to the given power.
    pub fn var(n: usize, var: usize, pow: u32, barred: bool) -> Self {
        let mut md = Multidegree::zero(n);
        if barred {
            md.anti[var - 1] = pow;
        } else {
            md.holo[var - 1] = pow;
        }
        md
    }

    pub fn total(&self) -> u32 {
        self.holo.iter().sum::<u32>() + self.anti.iter().sum::<u32>()
    }

    /// Degree counting only z_{var} and its conjugate (1-based index).
    pub fn degree_in(&self, var: usize) -> u32 {
        self.holo[var - 1] + self.anti[var - 1]
    }

    pub fn conj(&self) -> Self {
        Multidegree {
            holo: self.anti.clone(),
            anti: self.holo.clone(),
        }
    }

    fn mul(&self, other: &Multidegree) -> Self {
        Multidegree {
            holo: self
                .holo
                .iter()
                .zip(&other.holo)
                .map(|(a, b)| a + b)
                .collect(),
            anti: self
                .anti
                .iter()
                .zip(&other.anti)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Graded lexicographic: total degree first, then (holo, anti) lex.
impl Ord for Multidegree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.holo.cmp(&other.holo))
            .then_with(|| self.anti.cmp(&other.anti))
    }
}

impl PartialOrd for Multidegree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in canonical form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Multidegree, ComplexScalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: ComplexScalar) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(Multidegree::zero(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, ComplexScalar::one())
    }

    /// z_{var}^pow or z̄_{var}^pow (1-based index).
    pub fn var_pow(nvars: usize, var: usize, pow: u32, barred: bool) -> Result<Self> {
        if var == 0 || var > nvars {
            return Err(Error::VariableRange {
                index: var,
                n: nvars,
            });
        }
        let mut p = Poly::zero(nvars);
        p.add_term(
            Multidegree::var(nvars, var, pow, barred),
            ComplexScalar::one(),
        );
        Ok(p)
    }

    pub fn monomial(nvars: usize, md: Multidegree, c: ComplexScalar) -> Self {
        assert_eq!(md.holo.len(), nvars);
        let mut p = Poly::zero(nvars);
        p.add_term(md, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Multidegree, &ComplexScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, md: &Multidegree) -> ComplexScalar {
        self.terms.get(md).cloned().unwrap_or_else(ComplexScalar::zero)
    }

    /// Merges a term, pruning exact zeros.
    pub fn add_term(&mut self, md: Multidegree, c: ComplexScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(md) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Max total degree over stored terms; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|md| md.total()).max()
    }

    /// Max degree in z_{var}, z̄_{var} (1-based); `None` for zero.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|md| md.degree_in(var)).max()
    }

    fn check_nvars(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Unsupported(format!(
                "nvars mismatch: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (md, c) in &other.terms {
            out.add_term(md.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.check_nvars(other)?;
        let mut out = self.clone();
        for (md, c) in &other.terms {
            out.add_term(md.clone(), -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (md, c) in &self.terms {
            out.terms.insert(md.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &ComplexScalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        let mut out = Poly::zero(self.nvars);
        for (md, t) in &self.terms {
            out.terms.insert(md.clone(), t * c);
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Poly {
        self.scale(&ComplexScalar::from_rational(r.clone()))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_nvars(other)?;
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Poly> {
        let mut out = Poly::one(self.nvars);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Swaps exponent blocks and conjugates coefficients.
    pub fn conjugate(&self) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (md, c) in &self.terms {
            out.terms.insert(md.conj(), c.conj());
        }
        out
    }

    /// Formal ∂/∂z_{var} (or ∂/∂z̄_{var} when `barred`), 1-based index.
    pub fn wirtinger(&self, var: usize, barred: bool) -> Result<Poly> {
        if var == 0 || var > self.nvars {
            return Err(Error::VariableRange {
                index: var,
                n: self.nvars,
            });
        }
        let i = var - 1;
        let mut out = Poly::zero(self.nvars);
        for (md, c) in &self.terms {
            let e = if barred { md.anti[i] } else { md.holo[i] };
            if e == 0 {
                continue;
            }
            let mut nd = md.clone();
            if barred {
                nd.anti[i] -= 1;
            } else {
                nd.holo[i] -= 1;
            }
            out.add_term(nd, c.scale(&BigRational::from_integer(e.into())));
        }
        Ok(out)
    }

    /// ∂²/∂z₁∂z̄₁; positive multiple of the Laplacian in the z₁ plane.
    pub fn laplacian_z1(&self) -> Poly {
        self.wirtinger(1, false)
            .and_then(|p| p.wirtinger(1, true))
            .expect("variable 1 always present")
    }

    /// Replaces z_k by phi_k and z̄_k by conj(phi_k). `cap` bounds the total
    /// degree any term image may reach.
    pub fn substitute(&self, phi: &HoloMap, cap: u32) -> Result<Poly> {
        if phi.dim() != self.nvars {
            return Err(Error::Unsupported(format!(
                "map dimension {} does not match nvars {}",
                phi.dim(),
                self.nvars
            )));
        }
        let comp_deg: Vec<u32> = phi
            .components
            .iter()
            .map(|p| p.total_degree().unwrap_or(0))
            .collect();
        // power caches per component, holomorphic and conjugated
        let mut max_h = vec![0u32; self.nvars];
        let mut max_a = vec![0u32; self.nvars];
        for md in self.terms.keys() {
            for i in 0..self.nvars {
                max_h[i] = max_h[i].max(md.holo[i]);
                max_a[i] = max_a[i].max(md.anti[i]);
            }
        }
        let mut pow_h: Vec<Vec<Poly>> = Vec::with_capacity(self.nvars);
        let mut pow_a: Vec<Vec<Poly>> = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let mut hs = vec![Poly::one(self.nvars)];
            for e in 1..=max_h[i] {
                hs.push(hs[(e - 1) as usize].mul(&phi.components[i])?);
            }
            pow_h.push(hs);
            let conj_i = phi.components[i].conjugate();
            let mut as_ = vec![Poly::one(self.nvars)];
            for e in 1..=max_a[i] {
                as_.push(as_[(e - 1) as usize].mul(&conj_i)?);
            }
            pow_a.push(as_);
        }
        let mut out = Poly::zero(self.nvars);
        for (md, c) in &self.terms {
            let bound: u32 = (0..self.nvars)
                .map(|i| (md.holo[i] + md.anti[i]) * comp_deg[i])
                .sum();
            if bound > cap {
                return Err(Error::Unsupported(format!(
                    "degree cap exceeded: substituted term reaches degree {bound} > {cap}"
                )));
            }
            let mut term = Poly::constant(self.nvars, c.clone());
            for i in 0..self.nvars {
                if md.holo[i] > 0 {
                    term = term.mul(&pow_h[i][md.holo[i] as usize])?;
                }
                if md.anti[i] > 0 {
                    term = term.mul(&pow_a[i][md.anti[i] as usize])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Direct term summation in canonical order.
    pub fn evaluate(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut max_h = vec![0u32; self.nvars];
        let mut max_a = vec![0u32; self.nvars];
        for md in self.terms.keys() {
            for i in 0..self.nvars {
                max_h[i] = max_h[i].max(md.holo[i]);
                max_a[i] = max_a[i].max(md.anti[i]);
            }
        }
        let pow = |base: Complex64, top: u32| -> Vec<Complex64> {
            let mut v = vec![Complex64::new(1.0, 0.0)];
            for e in 1..=top {
                let prev = v[(e - 1) as usize];
                v.push(prev * base);
            }
            v
        };
        let pows_h: Vec<Vec<Complex64>> = (0..self.nvars).map(|i| pow(point[i], max_h[i])).collect();
        let pows_a: Vec<Vec<Complex64>> =
            (0..self.nvars).map(|i| pow(point[i].conj(), max_a[i])).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (md, c) in &self.terms {
            let mut t = c.to_c64();
            for i in 0..self.nvars {
                t *= pows_h[i][md.holo[i] as usize];
                t *= pows_a[i][md.anti[i] as usize];
            }
            acc += t;
        }
        acc
    }

    /// Exact rational evaluation.
    pub fn evaluate_exact(&self, point: &[ComplexScalar]) -> ComplexScalar {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut acc = ComplexScalar::zero();
        for (md, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..self.nvars {
                for _ in 0..md.holo[i] {
                    t = &t * &point[i];
                }
                let cj = point[i].conj();
                for _ in 0..md.anti[i] {
                    t = &t * &cj;
                }
            }
            acc += &t;
        }
        acc
    }

    /// Terms of total degree d; restricted to z_{var}, z̄_{var} exponents when
    /// `var_restricted` is set (1-based).
    pub fn homogeneous_part(&self, d: u32, var_restricted: Option<usize>) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (md, c) in &self.terms {
            let deg = match var_restricted {
                Some(v) => md.degree_in(v),
                None => md.total(),
            };
            if deg == d {
                out.terms.insert(md.clone(), c.clone());
            }
        }
        out
    }

    /// Exact Hermitian symmetry: coeff(J,K) = conj(coeff(K,J)).
    pub fn is_hermitian(&self) -> bool {
        self.terms
            .iter()
            .all(|(md, c)| self.coeff(&md.conj()) == c.conj())
    }

    /// (p + conj(p))/2.
    pub fn real_projection(&self) -> Poly {
        let half = ComplexScalar::from_ratio(1, 2);
        self.add(&self.conjugate())
            .expect("same nvars")
            .scale(&half)
    }

    /// True when every term has zero antiholomorphic block.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|md| md.anti.iter().all(|&e| e == 0))
    }

    /// Drops terms whose coefficient modulus² is below `floor2` (exact compare).
    pub fn prune_below(&self, floor2: &BigRational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (md, c) in &self.terms {
            if &c.abs2() >= floor2 {
                out.terms.insert(md.clone(), c.clone());
            }
        }
        out
    }
}

fn fmt_monomial(md: &Multidegree) -> String {
    let mut parts = Vec::new();
    for (i, &e) in md.holo.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("z{}", i + 1)),
            _ => parts.push(format!("z{}^{}", i + 1, e)),
        }
    }
    for (i, &e) in md.anti.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("zb{}", i + 1)),
            _ => parts.push(format!("zb{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

/// Renders in the expression grammar; `parse_poly` accepts the output.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (md, c) in &self.terms {
            // pure-real and pure-imaginary negatives join with " - " so that
            // rendered terms never start with a sign mid-expression
            let negative = (c.im.is_zero() && c.re.is_negative())
                || (c.re.is_zero() && c.im.is_negative());
            let (joiner, coeff) = if negative {
                (" - ", -c)
            } else {
                (" + ", c.clone())
            };
            if first {
                if joiner == " - " {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, "{joiner}")?;
            }
            let mono = fmt_monomial(md);
            let coeff_is_one = coeff.is_real() && coeff.re.is_one();
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff_is_one {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{coeff}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Real-valued polynomial: Hermitian coefficient symmetry is enforced exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealPoly {
    inner: Poly,
}

impl RealPoly {
    pub fn new(inner: Poly) -> Result<Self> {
        if !inner.is_hermitian() {
            return Err(Error::Unsupported(
                "polynomial is not Hermitian-symmetric (not real-valued)".into(),
            ));
        }
        Ok(RealPoly { inner })
    }

    /// Projects onto the real part first; always succeeds.
    pub fn from_projection(p: &Poly) -> Self {
        RealPoly {
            inner: p.real_projection(),
        }
    }

    pub fn as_poly(&self) -> &Poly {
        &self.inner
    }

    pub fn into_poly(self) -> Poly {
        self.inner
    }

    pub fn nvars(&self) -> usize {
        self.inner.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Real value at a numeric point (imaginary part is exactly cancelled by
    /// Hermitian symmetry up to rounding).
    pub fn evaluate_real(&self, point: &[Complex64]) -> f64 {
        self.inner.evaluate(point).re
    }

    /// Exact rational value at an exact point.
    pub fn evaluate_exact_real(&self, point: &[ComplexScalar]) -> BigRational {
        let v = self.inner.evaluate_exact(point);
        debug_assert!(v.im.is_zero());
        v.re
    }

    pub fn add(&self, other: &RealPoly) -> Result<RealPoly> {
        Ok(RealPoly {
            inner: self.inner.add(&other.inner)?,
        })
    }

    pub fn mul(&self, other: &RealPoly) -> Result<RealPoly> {
        Ok(RealPoly {
            inner: self.inner.mul(&other.inner)?,
        })
    }
}

impl fmt::Display for RealPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.inner)
    }
}

/// Polynomial self-map of ℂⁿ with holomorphic components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HoloMap {
    pub components: Vec<Poly>,
}

impl HoloMap {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        let n = components.len();
        for (i, c) in components.iter().enumerate() {
            if c.nvars() != n {
                return Err(Error::Unsupported(format!(
                    "component {} has nvars {} in a {}-dimensional map",
                    i + 1,
                    c.nvars(),
                    n
                )));
            }
            if !c.is_holomorphic() {
                return Err(Error::Unsupported(format!(
                    "component {} is not holomorphic",
                    i + 1
                )));
            }
        }
        Ok(HoloMap { components })
    }

    pub fn identity(n: usize) -> Self {
        let components = (1..=n)
            .map(|i| Poly::var_pow(n, i, 1, false).expect("index in range"))
            .collect();
        HoloMap { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// (self ∘ other)(z) = self(other(z)).
    pub fn compose(&self, other: &HoloMap, cap: u32) -> Result<HoloMap> {
        if self.dim() != other.dim() {
            return Err(Error::Unsupported("map dimension mismatch".into()));
        }
        let components = self
            .components
            .iter()
            .map(|c| c.substitute(other, cap))
            .collect::<Result<Vec<_>>>()?;
        HoloMap::new(components)
    }

    pub fn apply(&self, point: &[Complex64]) -> Vec<Complex64> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }

    pub fn apply_exact(&self, point: &[ComplexScalar]) -> Vec<ComplexScalar> {
        self.components
            .iter()
            .map(|c| c.evaluate_exact(point))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == HoloMap::identity(self.dim())
    }
}
