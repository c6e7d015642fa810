#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "srp/limit_laws.hpp"

namespace srp {

/// Finite-difference check that the closed-form tails solve
///   ∂_t U_α + (Σ_β w_β U_β) ∂_y U_α = -w_α U_α,
///   U_α(0,t) = r_α,  U_α(y,0) = u_α(y).
struct PdeCheckConfig {
    double h = 1e-4;
    std::size_t y_points = 20;
    std::size_t t_points = 20;
    double y_min = 0.01;
    double y_max = 0.99;
    double t_min = 0.1;
    double t_max = 2.0;
    // grid points closer than gluing_margin * h to y = y_C(t) are skipped
    double gluing_margin = 10.0;
};

struct ResidualSample {
    double y;
    double t;
    std::size_t alpha;
    double residual;
    double h;
};

/// Central-difference residual of the PDE at (y,t). Throws
/// std::domain_error when the stencil leaves (0,1)x(0,∞), comes within
/// 10h of the gluing curve, or straddles a density jump.
double pde_residual(const LimitEvaluator& ev, std::size_t alpha, double y, double t, double h);

/// |U_α(0,t) - r_α| and the central time difference of U_α(0,·).
double boundary_residual(const LimitEvaluator& ev, std::size_t alpha, double t, double h);

/// |U_α(y,0) - u_α(y)|.
double initial_residual(const LimitEvaluator& ev, std::size_t alpha, double y);

/// Residuals over the interior grid of `config`, all classes.
std::vector<ResidualSample> residual_grid(const LimitEvaluator& ev, const PdeCheckConfig& config);

struct TopSide {
    double t1;  // curve starts at (y, t) = (0, t1)
};
struct TailSide {
    double y0;  // curve starts at (y, t) = (y0, 0)
};
using CharacteristicStart = std::variant<TopSide, TailSide>;

struct CharacteristicCurve {
    std::vector<double> t;
    std::vector<double> y;
    std::vector<std::vector<double>> phi;  // phi[step][alpha]
};

/// RK4 integration (fixed step count) of the characteristic system
///   dy/dt = Σ_β w_β(t) φ_β,   dφ_α/dt = -w_α(t) φ_α,
/// from the start point to t_end. The carried values φ_α start from the
/// boundary (r_α) or initial (u_α(y0)) data and never consult the closed
/// form. Throws std::domain_error if the curve leaves [0,1).
CharacteristicCurve characteristic_curve(const LimitEvaluator& ev, CharacteristicStart start, double t_end,
                                         std::size_t steps);

}  // namespace srp
