#include "srp/burgers_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace srp {

namespace {

double density(const LimitEvaluator& ev, std::size_t alpha, double t) { return ev.mixture()[alpha].spec.density(t); }

bool straddles_density_jump(const LimitEvaluator& ev, double t, double h) {
    for (const auto& atom : ev.mixture().atoms()) {
        if (atom.spec.near_density_jump(t, h)) return true;
    }
    return false;
}

}  // namespace

double pde_residual(const LimitEvaluator& ev, std::size_t alpha, double y, double t, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("pde_residual: h must be positive");
    if (alpha >= ev.n_classes()) throw std::out_of_range("pde_residual: class index out of range");
    if (y - h <= 0.0 || y + h >= 1.0 || t - h <= 0.0) {
        throw std::domain_error("pde_residual: stencil leaves the open domain");
    }
    for (double s : {t - h, t, t + h}) {
        if (std::abs(y - ev.y_c(s)) < 10.0 * h) throw std::domain_error("pde_residual: too close to y_C(t)");
    }
    if (straddles_density_jump(ev, t, h)) throw std::domain_error("pde_residual: stencil straddles a density jump");

    const double dt = (ev.limit_tail(alpha, y, t + h) - ev.limit_tail(alpha, y, t - h)) / (2.0 * h);
    const double dy = (ev.limit_tail(alpha, y + h, t) - ev.limit_tail(alpha, y - h, t)) / (2.0 * h);
    double speed = 0.0;
    for (std::size_t b = 0; b < ev.n_classes(); ++b) speed += density(ev, b, t) * ev.limit_tail(b, y, t);
    return dt + speed * dy + density(ev, alpha, t) * ev.limit_tail(alpha, y, t);
}

double boundary_residual(const LimitEvaluator& ev, std::size_t alpha, double t, double h) {
    if (!(t - h > 0.0)) throw std::domain_error("boundary_residual: need t > h");
    const double r = ev.mixture()[alpha].weight;
    const double value = std::abs(ev.limit_tail(alpha, 0.0, t) - r);
    const double dt = (ev.limit_tail(alpha, 0.0, t + h) - ev.limit_tail(alpha, 0.0, t - h)) / (2.0 * h);
    return std::max(value, std::abs(dt));
}

double initial_residual(const LimitEvaluator& ev, std::size_t alpha, double y) {
    return std::abs(ev.limit_tail(alpha, y, 0.0) - ev.initial_tail(alpha, y));
}

std::vector<ResidualSample> residual_grid(const LimitEvaluator& ev, const PdeCheckConfig& config) {
    std::vector<ResidualSample> out;
    const auto lin = [](double lo, double hi, std::size_t k, std::size_t n) {
        return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    };
    for (std::size_t ti = 0; ti < config.t_points; ++ti) {
        const double t = lin(config.t_min, config.t_max, ti, config.t_points);
        if (straddles_density_jump(ev, t, config.h)) continue;
        for (std::size_t yi = 0; yi < config.y_points; ++yi) {
            const double y = lin(config.y_min, config.y_max, yi, config.y_points);
            bool near_curve = false;
            for (double s : {t - config.h, t, t + config.h}) {
                if (std::abs(y - ev.y_c(s)) < config.gluing_margin * config.h) near_curve = true;
            }
            if (near_curve) continue;
            for (std::size_t a = 0; a < ev.n_classes(); ++a) {
                out.push_back({y, t, a, pde_residual(ev, a, y, t, config.h), config.h});
            }
        }
    }
    return out;
}

CharacteristicCurve characteristic_curve(const LimitEvaluator& ev, CharacteristicStart start, double t_end,
                                         std::size_t steps) {
    if (steps == 0) throw std::invalid_argument("characteristic_curve: need at least one step");
    const std::size_t k = ev.n_classes();
    double t0 = 0.0;
    double y = 0.0;
    std::vector<double> phi(k);
    if (const auto* top = std::get_if<TopSide>(&start)) {
        if (!(top->t1 >= 0.0) || t_end < top->t1) throw std::invalid_argument("characteristic_curve: need 0 <= t1 <= t_end");
        t0 = top->t1;
        for (std::size_t a = 0; a < k; ++a) phi[a] = ev.mixture()[a].weight;
    } else {
        const auto& tail = std::get<TailSide>(start);
        if (!(tail.y0 >= 0.0 && tail.y0 < 1.0)) throw std::invalid_argument("characteristic_curve: y0 must lie in [0,1)");
        if (!(t_end >= 0.0)) throw std::invalid_argument("characteristic_curve: t_end must be non-negative");
        y = tail.y0;
        for (std::size_t a = 0; a < k; ++a) phi[a] = ev.initial_tail(a, tail.y0);
    }

    CharacteristicCurve curve;
    curve.t.push_back(t0);
    curve.y.push_back(y);
    curve.phi.push_back(phi);
    if (t_end == t0) return curve;

    // state = (y, phi_1..phi_k)
    const auto rhs = [&](double t, const std::vector<double>& s) {
        std::vector<double> d(k + 1);
        for (std::size_t a = 0; a < k; ++a) {
            const double w = density(ev, a, t);
            d[0] += w * s[a + 1];
            d[a + 1] = -w * s[a + 1];
        }
        return d;
    };
    const auto axpy = [](const std::vector<double>& s, double c, const std::vector<double>& d) {
        std::vector<double> r(s);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += c * d[i];
        return r;
    };

    std::vector<double> state(k + 1);
    state[0] = y;
    for (std::size_t a = 0; a < k; ++a) state[a + 1] = phi[a];
    const double dt = (t_end - t0) / static_cast<double>(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = t0 + dt * static_cast<double>(n);
        const auto k1 = rhs(t, state);
        const auto k2 = rhs(t + 0.5 * dt, axpy(state, 0.5 * dt, k1));
        const auto k3 = rhs(t + 0.5 * dt, axpy(state, 0.5 * dt, k2));
        const auto k4 = rhs(t + dt, axpy(state, dt, k3));
        for (std::size_t i = 0; i < state.size(); ++i) state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!(state[0] >= 0.0 && state[0] < 1.0)) throw std::domain_error("characteristic_curve: curve left [0,1)");
        curve.t.push_back(n + 1 == steps ? t_end : t + dt);
        curve.y.push_back(state[0]);
        curve.phi.emplace_back(state.begin() + 1, state.end());
    }
    return curve;
}

}  // namespace srp
