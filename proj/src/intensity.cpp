#include "srp/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace srp {

namespace {

constexpr double kInverseTolerance = 1e-12;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Smallest t in [lo, hi] with f(t) >= target, for non-decreasing f with
// f(lo) < target <= f(hi).
template <typename F>
double bisect_monotone(F&& f, double target, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > kInverseTolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

// ---------------------------------------------------------------------------
// ActivityProfile

ActivityProfile ActivityProfile::constant() { return ActivityProfile(Constant{}); }

ActivityProfile ActivityProfile::sinusoidal(double period, double amplitude) {
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw std::invalid_argument("sinusoidal profile: period must be positive");
    }
    if (!(amplitude >= 0.0 && amplitude < 1.0)) {
        throw std::invalid_argument("sinusoidal profile: amplitude must lie in [0, 1)");
    }
    return ActivityProfile(Sinusoidal{period, amplitude});
}

ActivityProfile ActivityProfile::piecewise_constant(std::vector<double> breakpoints, std::vector<double> levels) {
    if (breakpoints.size() < 2 || levels.size() + 1 != breakpoints.size()) {
        throw std::invalid_argument("piecewise profile: need m+1 breakpoints for m levels (m >= 1)");
    }
    if (breakpoints.front() != 0.0) {
        throw std::invalid_argument("piecewise profile: first breakpoint must be 0");
    }
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
        if (!(breakpoints[k] > breakpoints[k - 1])) {
            throw std::invalid_argument("piecewise profile: breakpoints must be strictly increasing");
        }
    }
    for (double level : levels) {
        if (!(level > 0.0) || !std::isfinite(level)) {
            throw std::invalid_argument("piecewise profile: levels must be positive");
        }
    }
    const double period = breakpoints.back();
    double mass = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        mass += levels[k] * (breakpoints[k + 1] - breakpoints[k]);
    }
    const double mean = mass / period;
    if (std::abs(mean - 1.0) > 1e-9) {
        throw std::invalid_argument("piecewise profile: mean level over one period is " + std::to_string(mean) +
                                    ", expected 1");
    }
    for (double& level : levels) level /= mean;

    ActivityProfile profile(PiecewiseConstant{breakpoints, levels});
    profile.cumulative_at_breaks_.assign(breakpoints.size(), 0.0);
    for (std::size_t k = 0; k < levels.size(); ++k) {
        profile.cumulative_at_breaks_[k + 1] =
            profile.cumulative_at_breaks_[k] + levels[k] * (breakpoints[k + 1] - breakpoints[k]);
    }
    return profile;
}

double ActivityProfile::density(double t) const {
    return std::visit(Overloaded{
                          [](const Constant&) { return 1.0; },
                          [t](const Sinusoidal& s) { return 1.0 + s.amplitude * std::sin(kTwoPi * t / s.period); },
                          [t](const PiecewiseConstant& p) {
                              const double period = p.breakpoints.back();
                              const double r = t - std::floor(t / period) * period;
                              auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), r);
                              auto k = static_cast<std::size_t>(it - p.breakpoints.begin()) - 1;
                              return p.levels[std::min(k, p.levels.size() - 1)];
                          },
                      },
                      shape_);
}

double ActivityProfile::cumulative(double t) const {
    return std::visit(Overloaded{
                          [t](const Constant&) { return t; },
                          [t](const Sinusoidal& s) {
                              return t + s.amplitude * s.period / kTwoPi * (1.0 - std::cos(kTwoPi * t / s.period));
                          },
                          [t, this](const PiecewiseConstant& p) {
                              const double period = p.breakpoints.back();
                              const double cycles = std::floor(t / period);
                              const double r = t - cycles * period;
                              auto it = std::upper_bound(p.breakpoints.begin(), p.breakpoints.end(), r);
                              auto k = std::min(static_cast<std::size_t>(it - p.breakpoints.begin()) - 1,
                                                p.levels.size() - 1);
                              return cycles * cumulative_at_breaks_.back() + cumulative_at_breaks_[k] +
                                     p.levels[k] * (r - p.breakpoints[k]);
                          },
                      },
                      shape_);
}

double ActivityProfile::inverse_cumulative(double m) const {
    if (m <= 0.0) return 0.0;
    return std::visit(Overloaded{
                          [m](const Constant&) { return m; },
                          [m, this](const Sinusoidal& s) {
                              // A(t) lies in [t, t + εT/π].
                              const double lo = std::max(0.0, m - s.amplitude * s.period / std::numbers::pi);
                              if (cumulative(lo) >= m) return lo;
                              return bisect_monotone([this](double t) { return cumulative(t); }, m, lo, m);
                          },
                          [m, this](const PiecewiseConstant& p) {
                              const double per_cycle = cumulative_at_breaks_.back();
                              double cycles = std::floor(m / per_cycle);
                              double r = m - cycles * per_cycle;
                              if (r <= 0.0 && cycles > 0.0) {
                                  cycles -= 1.0;
                                  r += per_cycle;
                              }
                              auto it = std::lower_bound(cumulative_at_breaks_.begin(), cumulative_at_breaks_.end(), r);
                              auto k = static_cast<std::size_t>(it - cumulative_at_breaks_.begin());
                              k = std::clamp<std::size_t>(k, 1, p.levels.size());
                              return cycles * p.breakpoints.back() + p.breakpoints[k - 1] +
                                     (r - cumulative_at_breaks_[k - 1]) / p.levels[k - 1];
                          },
                      },
                      shape_);
}

std::optional<double> ActivityProfile::period() const {
    return std::visit(Overloaded{
                          [](const Constant&) -> std::optional<double> { return std::nullopt; },
                          [](const Sinusoidal& s) -> std::optional<double> { return s.period; },
                          [](const PiecewiseConstant& p) -> std::optional<double> { return p.breakpoints.back(); },
                      },
                      shape_);
}

double ActivityProfile::periodic_part(double t) const {
    if (is_constant()) return 0.0;
    if (const auto* s = std::get_if<Sinusoidal>(&shape_)) {
        // Closed form avoids cancellation in A(t) - t for large t.
        return s->amplitude * s->period / kTwoPi * (1.0 - std::cos(kTwoPi * t / s->period));
    }
    const double period = *this->period();
    const double r = t - std::floor(t / period) * period;
    return cumulative(r) - r;
}

// ---------------------------------------------------------------------------
// IntensitySpec

IntensitySpec IntensitySpec::homogeneous(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("homogeneous intensity: rate must be positive");
    }
    return IntensitySpec(Homogeneous{rate});
}

IntensitySpec IntensitySpec::common_profile(double rate, ActivityProfile profile) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("common-profile intensity: rate must be positive");
    }
    return IntensitySpec(CommonProfile{rate, std::move(profile)});
}

IntensitySpec IntensitySpec::piecewise_linear(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2) {
        throw std::invalid_argument("piecewise-linear intensity: need at least two knots");
    }
    if (knots.front().first != 0.0 || knots.front().second != 0.0) {
        throw std::invalid_argument("piecewise-linear intensity: first knot must be (0, 0)");
    }
    for (std::size_t k = 1; k < knots.size(); ++k) {
        if (!(knots[k].first > knots[k - 1].first)) {
            throw std::invalid_argument("piecewise-linear intensity: knot times must be strictly increasing");
        }
        if (!(knots[k].second >= knots[k - 1].second) || !std::isfinite(knots[k].second)) {
            throw std::invalid_argument("piecewise-linear intensity: cumulative values must be non-decreasing");
        }
    }
    return IntensitySpec(PiecewiseLinearCumulative{std::move(knots)});
}

namespace {

double pwl_slope(const std::vector<std::pair<double, double>>& knots, std::size_t segment) {
    const auto& [t0, c0] = knots[segment];
    const auto& [t1, c1] = knots[segment + 1];
    return (c1 - c0) / (t1 - t0);
}

// Index of the segment [k, k+1] containing t (right-continuous); the last
// segment extends to infinity.
std::size_t pwl_segment(const std::vector<std::pair<double, double>>& knots, double t) {
    auto it = std::upper_bound(knots.begin(), knots.end(), t,
                               [](double value, const auto& knot) { return value < knot.first; });
    auto k = static_cast<std::size_t>(it - knots.begin());
    return std::clamp<std::size_t>(k, 1, knots.size() - 1) - 1;
}

}  // namespace

double IntensitySpec::cumulative(double t) const {
    return std::visit(Overloaded{
                          [t](const Homogeneous& h) { return h.rate * t; },
                          [t](const CommonProfile& c) { return c.rate * c.profile.cumulative(t); },
                          [t](const PiecewiseLinearCumulative& p) {
                              const std::size_t k = pwl_segment(p.knots, t);
                              return p.knots[k].second + pwl_slope(p.knots, k) * (t - p.knots[k].first);
                          },
                      },
                      kind_);
}

double IntensitySpec::inverse_cumulative(double m) const {
    if (m <= 0.0) return 0.0;
    return std::visit(Overloaded{
                          [m](const Homogeneous& h) { return m / h.rate; },
                          [m](const CommonProfile& c) { return c.profile.inverse_cumulative(m / c.rate); },
                          [m](const PiecewiseLinearCumulative& p) {
                              const auto& knots = p.knots;
                              auto it = std::lower_bound(knots.begin(), knots.end(), m,
                                                         [](const auto& knot, double value) { return knot.second < value; });
                              auto k = static_cast<std::size_t>(it - knots.begin());
                              if (k == knots.size()) {
                                  const std::size_t last = knots.size() - 2;
                                  const double slope = pwl_slope(knots, last);
                                  if (slope <= 0.0) return std::numeric_limits<double>::infinity();
                                  return knots.back().first + (m - knots.back().second) / slope;
                              }
                              // knots[k-1].second < m <= knots[k].second, so the slope is positive.
                              return knots[k - 1].first + (m - knots[k - 1].second) / pwl_slope(knots, k - 1);
                          },
                      },
                      kind_);
}

double IntensitySpec::density(double t) const {
    return std::visit(Overloaded{
                          [](const Homogeneous& h) { return h.rate; },
                          [t](const CommonProfile& c) { return c.rate * c.profile.density(t); },
                          [t](const PiecewiseLinearCumulative& p) { return pwl_slope(p.knots, pwl_segment(p.knots, t)); },
                      },
                      kind_);
}

bool IntensitySpec::near_density_jump(double t, double margin) const {
    return std::visit(Overloaded{
                          [](const Homogeneous&) { return false; },
                          [t, margin](const CommonProfile& c) {
                              const auto* p = std::get_if<ActivityProfile::PiecewiseConstant>(&c.profile.shape());
                              if (p == nullptr) return false;
                              const double period = p->breakpoints.back();
                              const double r = t - std::floor(t / period) * period;
                              for (double b : p->breakpoints) {
                                  if (std::abs(r - b) <= margin) return true;
                              }
                              return false;
                          },
                          [t, margin](const PiecewiseLinearCumulative& p) {
                              for (std::size_t k = 0; k + 1 < p.knots.size(); ++k) {
                                  if (std::abs(t - p.knots[k].first) <= margin) return true;
                              }
                              return false;
                          },
                      },
                      kind_);
}

// ---------------------------------------------------------------------------

double interval_mass(const IntensitySpec& spec, double s, double t) {
    if (!(s >= 0.0) || !(t >= s)) {
        throw std::invalid_argument("interval_mass: require 0 <= s <= t");
    }
    if (s == t) return 0.0;
    return spec.cumulative(t) - spec.cumulative(s);
}

std::vector<double> unit_poisson_points(double mass, Rng& rng) {
    std::vector<double> points;
    double g = rng.exponential();
    while (g <= mass) {
        points.push_back(g);
        g += rng.exponential();
    }
    return points;
}

std::vector<double> sample_jump_times(const IntensitySpec& spec, double horizon, Rng& rng) {
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("sample_jump_times: horizon must be positive");
    }
    const std::vector<double> masses = unit_poisson_points(spec.cumulative(horizon), rng);
    std::vector<double> times;
    times.reserve(masses.size());
    for (double m : masses) {
        double tau = std::min(spec.inverse_cumulative(m), horizon);
        if (!times.empty() && tau <= times.back()) {
            // Inversion tolerance can merge two nearly coincident masses.
            tau = std::nextafter(times.back(), horizon + 1.0);
            if (tau > horizon) break;
        }
        times.push_back(tau);
    }
    return times;
}

MixtureSpec build_mixture(std::vector<MixtureAtom> atoms) {
    if (atoms.empty()) {
        throw std::invalid_argument("build_mixture: empty atom list");
    }
    double total = 0.0;
    for (const auto& atom : atoms) {
        if (!(atom.weight > 0.0) || !std::isfinite(atom.weight)) {
            throw std::invalid_argument("build_mixture: weights must be positive");
        }
        total += atom.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("build_mixture: weights sum to " + std::to_string(total) + ", expected 1");
    }
    for (auto& atom : atoms) atom.weight /= total;
    return MixtureSpec(std::move(atoms));
}

}  // namespace srp
