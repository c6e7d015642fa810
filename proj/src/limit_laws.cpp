#include "srp/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace srp {

namespace {

constexpr int kMaxBisection = 60;
constexpr double kTopOfUnitInterval = 1.0 - 1e-12;
// slack for domain checks against values computed by the same formulas
constexpr double kDomainSlack = 1e-12;

}  // namespace

LimitEvaluator::LimitEvaluator(MixtureSpec mixture, Layout layout, double inversion_tolerance)
    : mixture_(std::move(mixture)), layout_(layout), tolerance_(inversion_tolerance) {
    if (!(tolerance_ >= 0.0)) throw std::invalid_argument("LimitEvaluator: negative inversion tolerance");
    block_start_.assign(mixture_.size() + 1, 0.0);
    for (std::size_t a = 0; a < mixture_.size(); ++a) block_start_[a + 1] = block_start_[a] + mixture_[a].weight;
    block_start_.back() = 1.0;
}

double LimitEvaluator::mass(std::size_t alpha, double s, double t) const {
    return interval_mass(mixture_[alpha].spec, s, t);
}

double LimitEvaluator::initial_tail(std::size_t alpha, double y) const {
    if (layout_ == Layout::Proportional) return mixture_[alpha].weight * (1.0 - y);
    const double lo = block_start_[alpha];
    const double hi = block_start_[alpha + 1];
    return std::max(0.0, hi - std::max(y, lo));
}

double LimitEvaluator::y_c(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("y_c: t must be non-negative");
    double sum = 0.0;
    for (std::size_t a = 0; a < n_classes(); ++a) sum += mixture_[a].weight * std::exp(-mass(a, 0.0, t));
    return 1.0 - sum;
}

double LimitEvaluator::y_a(double t0, double t) const {
    if (!(t0 >= 0.0 && t0 <= t)) throw std::invalid_argument("y_a: require 0 <= t0 <= t");
    double sum = 0.0;
    for (std::size_t a = 0; a < n_classes(); ++a) sum += mixture_[a].weight * std::exp(-mass(a, t - t0, t));
    return 1.0 - sum;
}

double LimitEvaluator::y_b(double y0, double t) const {
    if (!(y0 >= 0.0 && y0 < 1.0)) throw std::invalid_argument("y_b: y0 must lie in [0,1)");
    if (!(t >= 0.0)) throw std::invalid_argument("y_b: t must be non-negative");
    double sum = 0.0;
    for (std::size_t a = 0; a < n_classes(); ++a) sum += initial_tail(a, y0) * std::exp(-mass(a, 0.0, t));
    return 1.0 - sum;
}

double LimitEvaluator::invert_t0(double y, double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("invert_t0: t must be non-negative");
    const double top = y_c(t);
    if (!(y >= -kDomainSlack) || y > top + kDomainSlack) {
        throw std::invalid_argument("invert_t0: y outside [0, y_c(t)]");
    }
    if (y <= 0.0) return 0.0;
    y = std::min(y, top);
    double lo = 0.0;
    double hi = t;
    for (int it = 0; it < kMaxBisection && hi - lo > tolerance_; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (y_a(mid, t) >= y) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double LimitEvaluator::invert_yhat(double y, double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("invert_yhat: t must be non-negative");
    const double bottom = y_c(t);
    if (y < bottom - kDomainSlack || !(y < 1.0)) {
        throw std::invalid_argument("invert_yhat: y outside [y_c(t), 1)");
    }
    if (y <= bottom) return 0.0;
    if (t == 0.0) return y;
    double lo = 0.0;
    double hi = kTopOfUnitInterval;
    if (y_b(hi, t) < y) return hi;
    for (int it = 0; it < kMaxBisection && hi - lo > tolerance_; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (y_b(mid, t) >= y) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double LimitEvaluator::limit_tail(std::size_t alpha, double y, double t) const {
    if (alpha >= n_classes()) throw std::out_of_range("limit_tail: class index out of range");
    if (!(y >= 0.0 && y < 1.0)) throw std::invalid_argument("limit_tail: y must lie in [0,1)");
    if (!(t >= 0.0)) throw std::invalid_argument("limit_tail: t must be non-negative");
    if (t == 0.0) return initial_tail(alpha, y);
    if (y <= y_c(t)) {
        const double t0 = invert_t0(y, t);
        return mixture_[alpha].weight * std::exp(-mass(alpha, t - t0, t));
    }
    const double yhat = invert_yhat(y, t);
    return initial_tail(alpha, yhat) * std::exp(-mass(alpha, 0.0, t));
}

}  // namespace srp
