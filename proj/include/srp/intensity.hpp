#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "srp/rng.hpp"

namespace srp {

/// Shared activity profile ã(t) > 0 and its cumulative A(t) = ∫_0^t ã.
///
/// Periodic shapes are normalized so that the mean level over one period
/// is 1; the constant shape is level 1 with no period.
class ActivityProfile {
public:
    struct Constant {};
    struct Sinusoidal {
        double period;
        double amplitude;
    };
    /// Levels repeat with period breakpoints.back(); breakpoints[0] == 0.
    struct PiecewiseConstant {
        std::vector<double> breakpoints;
        std::vector<double> levels;
    };
    using Shape = std::variant<Constant, Sinusoidal, PiecewiseConstant>;

    static ActivityProfile constant();
    /// ã(t) = 1 + amplitude * sin(2πt / period).
    static ActivityProfile sinusoidal(double period, double amplitude);
    /// Levels whose period-mean is within 1e-9 of 1 are rescaled to
    /// exactly 1; anything further off is rejected.
    static ActivityProfile piecewise_constant(std::vector<double> breakpoints, std::vector<double> levels);

    double density(double t) const;
    double cumulative(double t) const;
    /// Smallest t with A(t) >= m.
    double inverse_cumulative(double m) const;

    /// Period T, or nullopt for the constant profile.
    std::optional<double> period() const;
    /// A_p(t) = A(t) - t, periodic with period T.
    double periodic_part(double t) const;

    const Shape& shape() const noexcept { return shape_; }
    bool is_constant() const noexcept { return std::holds_alternative<Constant>(shape_); }

private:
    explicit ActivityProfile(Shape shape) : shape_(std::move(shape)) {}

    Shape shape_;
    // Cumulative mass at each breakpoint, piecewise case only.
    std::vector<double> cumulative_at_breaks_;
};

/// Cumulative intensity R(t) = ρ((0,t]) of one particle class.
class IntensitySpec {
public:
    struct Homogeneous {
        double rate;
    };
    struct CommonProfile {
        double rate;
        ActivityProfile profile;
    };
    /// Linear interpolation between knots; beyond the last knot the final
    /// slope continues.
    struct PiecewiseLinearCumulative {
        std::vector<std::pair<double, double>> knots;
    };
    using Kind = std::variant<Homogeneous, CommonProfile, PiecewiseLinearCumulative>;

    static IntensitySpec homogeneous(double rate);
    static IntensitySpec common_profile(double rate, ActivityProfile profile);
    static IntensitySpec piecewise_linear(std::vector<std::pair<double, double>> knots);

    /// R(t).
    double cumulative(double t) const;
    /// R^{-1}(m) = inf{t : R(t) >= m}. Returns +inf if R never reaches m.
    double inverse_cumulative(double m) const;
    /// Density w(t); right-continuous segment slope for piecewise specs.
    double density(double t) const;
    /// True when t lies within `margin` of a knot where the density jumps.
    bool near_density_jump(double t, double margin) const;

    const Kind& kind() const noexcept { return kind_; }

private:
    explicit IntensitySpec(Kind kind) : kind_(std::move(kind)) {}

    Kind kind_;
};

/// ρ((s,t]) = R(t) - R(s). Throws std::invalid_argument unless 0 <= s <= t.
double interval_mass(const IntensitySpec& spec, double s, double t);

/// Points of a unit-rate Poisson process on (0, mass], as partial sums of
/// unit exponentials.
std::vector<double> unit_poisson_points(double mass, Rng& rng);

/// Jump times in (0, horizon]: R^{-1} applied to unit Poisson points.
std::vector<double> sample_jump_times(const IntensitySpec& spec, double horizon, Rng& rng);

struct MixtureAtom {
    double weight;
    IntensitySpec spec;
};

/// Discrete mixing measure Σ r_α δ_{ρ_α}.
class MixtureSpec {
public:
    const std::vector<MixtureAtom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    const MixtureAtom& operator[](std::size_t alpha) const { return atoms_.at(alpha); }

private:
    friend MixtureSpec build_mixture(std::vector<MixtureAtom> atoms);
    explicit MixtureSpec(std::vector<MixtureAtom> atoms) : atoms_(std::move(atoms)) {}

    std::vector<MixtureAtom> atoms_;
};

/// Validates a mixture. Weights must be positive and sum to 1 within 1e-9;
/// they are then renormalized. Throws std::invalid_argument otherwise.
MixtureSpec build_mixture(std::vector<MixtureAtom> atoms);

}  // namespace srp
