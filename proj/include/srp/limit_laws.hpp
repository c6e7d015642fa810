#pragma once

#include <cstddef>
#include <vector>

#include "srp/intensity.hpp"
#include "srp/ranking_sim.hpp"

namespace srp {

/// Closed-form hydrodynamic limit of the ranking process for a discrete
/// mixture Σ r_α δ_{ρ_α} and an initial layout.
///
/// y_a and y_b are the characteristic families; invert_t0 and invert_yhat
/// are their generalized inverses (left edge of any flat piece). Inverses
/// use at most 60 bisection steps and stop once the bracket is narrower
/// than `inversion_tolerance`; a tolerance of 0 runs all 60 steps, which
/// is at the resolution of a double on the brackets used here.
class LimitEvaluator {
public:
    explicit LimitEvaluator(MixtureSpec mixture, Layout layout = Layout::Proportional,
                            double inversion_tolerance = 1e-10);

    const MixtureSpec& mixture() const noexcept { return mixture_; }
    std::size_t n_classes() const noexcept { return mixture_.size(); }
    Layout layout() const noexcept { return layout_; }
    double inversion_tolerance() const noexcept { return tolerance_; }

    /// u_α(y): limit fraction of class α initially at scaled rank >= y.
    double initial_tail(std::size_t alpha, double y) const;

    double y_c(double t) const;
    double y_a(double t0, double t) const;
    double y_b(double y0, double t) const;
    double invert_t0(double y, double t) const;
    double invert_yhat(double y, double t) const;

    /// U_α(y,t), gluing the top branch (y <= y_c) and the tail branch.
    double limit_tail(std::size_t alpha, double y, double t) const;

private:
    double mass(std::size_t alpha, double s, double t) const;

    MixtureSpec mixture_;
    Layout layout_;
    double tolerance_;
    std::vector<double> block_start_;  // cumulative weights, Blocks layout
};

}  // namespace srp
