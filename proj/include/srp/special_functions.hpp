#pragma once

#include <cstddef>

namespace srp {

/// Γ(s,x) = ∫_x^∞ u^{s-1} e^{-u} du for any real s and x > 0.
///
/// s > 0 splits at x = s + 1 between the lower-gamma series and a
/// Lentz continued fraction. For s <= 0 the continued fraction is used
/// when x >= 1; below that the value is recurred down from s + ceil(-s)
/// with Γ(s,x) = (Γ(s+1,x) - x^s e^{-x}) / s, seeded by the series or
/// by E_1(x) when s is an integer. Throws std::domain_error for x <= 0.
double upper_incomplete_gamma(double s, double x);

/// E_1(x) = Γ(0,x), x > 0.
double exponential_integral_e1(double x);

/// ζ_N(z) = Σ_{i=1}^N i^{-z}, summed smallest terms first.
double partial_zeta(std::size_t n, double z);

/// ζ(z) for z > 1: partial sum plus Euler–Maclaurin tail.
double riemann_zeta(double z);

}  // namespace srp
