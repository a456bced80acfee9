//! Shared fixtures for the pipeline benchmarks.

use pinscale_core::{egg_domain, parse_real_poly, ComplexScalar, DomainSpec};

/// The egg |z₁|⁴ + |z₂|² in ℂ³: type 4, Levi corank 1.
pub fn egg2() -> DomainSpec {
    egg_domain(3, 2)
}

/// Egg with an α-linear cross term, so rescaling carries Q-blocks.
pub fn perturbed_egg() -> DomainSpec {
    let f = parse_real_poly("abs2(z1)^2 + abs2(z2) + 1/10*Re(z1*zb1^2*z2)", 3)
        .expect("fixture parses");
    DomainSpec::new(3, f, "perturbed egg").expect("fixture validates")
}

/// Boundary point (η₁, η₂, −F(η')) with rational η' of denominator 64.
pub fn boundary_point(spec: &DomainSpec, num1: i64, num2: i64) -> Vec<ComplexScalar> {
    let p1 = ComplexScalar::from_ratio(num1, 64);
    let p2 = ComplexScalar::from_ratio(num2, 64);
    let f = spec.rho_at_exact(&[p1.clone(), p2.clone(), ComplexScalar::zero()]);
    vec![p1, p2, ComplexScalar::from_rational(-f)]
}
