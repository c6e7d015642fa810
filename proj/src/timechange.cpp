#include "srp/timechange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "srp/special_functions.hpp"

namespace srp {

namespace {

void check_family(const ZipfFamily& family) {
    if (!(family.a > 0.0) || !(family.b > 0.0) || family.n == 0) {
        throw std::invalid_argument("ZipfFamily: need a > 0, b > 0, N >= 1");
    }
}

}  // namespace

std::vector<double> zipf_weights(const ZipfFamily& family) {
    check_family(family);
    std::vector<double> w(family.n);
    const double nd = static_cast<double>(family.n);
    for (std::size_t i = 1; i <= family.n; ++i) {
        w[i - 1] = family.a * std::pow(nd / static_cast<double>(i), 1.0 / family.b);
    }
    return w;
}

ZipfSums zipf_weights_and_Z(const ZipfFamily& family, std::size_t subset) {
    if (subset < 1 || subset > family.n) throw std::invalid_argument("zipf_weights_and_Z: need 1 <= n <= N");
    ZipfSums out;
    out.weights = zipf_weights(family);
    // smallest weights first
    double total = 0.0;
    for (std::size_t i = out.weights.size(); i-- > 0;) {
        total += out.weights[i];
    }
    double head = 0.0;
    for (std::size_t i = subset; i-- > 0;) head += out.weights[i];
    out.subset_total = subset == family.n ? total : head;
    out.total = total;
    return out;
}

double zipf_Z_asymptotic(const ZipfFamily& family) {
    check_family(family);
    const double nd = static_cast<double>(family.n);
    if (family.b > 1.0) return family.a * nd * family.b / (family.b - 1.0);
    if (family.b == 1.0) return family.a * nd * std::log(nd);
    return family.a * std::pow(nd, 1.0 / family.b) * riemann_zeta(1.0 / family.b);
}

double pareto_tail(double a, double b, double w) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("pareto_tail: need a, b > 0");
    if (w < a) return 1.0;
    return std::pow(a / w, b);
}

double empirical_weight_tail(std::span<const double> weights, double w) {
    const auto count = std::count_if(weights.begin(), weights.end(), [w](double v) { return v >= w; });
    return static_cast<double>(count) / static_cast<double>(weights.size());
}

RankingCurve RankingCurve::make(std::size_t n, double b, CurveForm form) {
    if (n == 0 || !(b > 0.0)) throw std::invalid_argument("RankingCurve: need N >= 1 and b > 0");
    if (form != CurveForm::Sum && !(b < 1.0)) {
        throw std::invalid_argument("RankingCurve: incomplete-gamma forms need 0 < b < 1");
    }
    return RankingCurve{n, b, partial_zeta(n, 1.0 / b), form};
}

double x_b_curve(const RankingCurve& curve, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("x_b_curve: S must be non-negative");
    const double nd = static_cast<double>(curve.n);
    const double inv_b = 1.0 / curve.b;
    if (curve.form == CurveForm::Sum) {
        // w_i / Z(N) = i^{-1/b} / ζ_N(1/b)
        double sum = 0.0;
        for (std::size_t i = curve.n; i >= 1; --i) {
            sum += std::exp(-s * std::pow(static_cast<double>(i), -inv_b) / curve.zeta_n);
        }
        return nd - sum;
    }
    if (!(curve.b < 1.0)) throw std::invalid_argument("x_b_curve: incomplete-gamma forms need 0 < b < 1");
    if (s == 0.0) return 0.0;
    // x = S / (N^{1/b} ζ_N), and (S/ζ_N)^b = N x^b
    const double x = s / (std::exp(inv_b * std::log(nd)) * curve.zeta_n);
    const double scale = nd * std::pow(x, curve.b);
    if (curve.form == CurveForm::ParetoIntegral) {
        return nd - curve.b * scale * upper_incomplete_gamma(-curve.b, x);
    }
    return nd - nd * std::exp(-x) + scale * upper_incomplete_gamma(1.0 - curve.b, x);
}

double x_b_sum(const ZipfFamily& family, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("x_b_sum: S must be non-negative");
    const ZipfSums sums = zipf_weights_and_Z(family, family.n);
    double acc = 0.0;
    for (std::size_t i = sums.weights.size(); i-- > 0;) acc += std::exp(-sums.weights[i] * s / sums.total);
    return static_cast<double>(family.n) - acc;
}

PeriodicShift periodic_shift(const ActivityProfile& profile, double t0) {
    if (profile.is_constant()) return {0.0, t0};
    const double period = *profile.period();
    const double mean = profile.cumulative(period) / period;
    if (std::abs(mean - 1.0) > 1e-12) {
        throw std::invalid_argument("periodic_shift: profile mean over one period is " + std::to_string(mean));
    }
    const double ap = profile.periodic_part(t0);
    return {ap, t0 + ap};
}

double sampled_boundary_shifted(const MixtureSpec& mixture, double t0, std::size_t n) {
    const ActivityProfile* profile = nullptr;
    for (const auto& atom : mixture.atoms()) {
        const auto* c = std::get_if<IntensitySpec::CommonProfile>(&atom.spec.kind());
        if (c == nullptr) throw std::invalid_argument("sampled_boundary_shifted: atoms must be common-profile");
        if (profile == nullptr) {
            profile = &c->profile;
        } else if (c->profile.period() != profile->period()) {
            throw std::invalid_argument("sampled_boundary_shifted: atoms must share one profile");
        }
    }
    const double period = profile->period().value_or(0.0);
    const PeriodicShift shift = periodic_shift(*profile, t0);
    const double clock = static_cast<double>(n) * period + shift.shifted_origin;
    double sum = 0.0;
    for (const auto& atom : mixture.atoms()) {
        const double w = std::get<IntensitySpec::CommonProfile>(atom.spec.kind()).rate;
        sum += atom.weight * std::exp(-w * clock);
    }
    return 1.0 - sum;
}

ParticleSystem common_profile_system(std::span<const double> weights, const ActivityProfile& profile,
                                     double horizon, Rng& rng) {
    std::vector<IntensitySpec> specs;
    specs.reserve(weights.size());
    for (double w : weights) specs.push_back(IntensitySpec::common_profile(w, profile));
    return sample_system(specs, std::vector<std::size_t>(weights.size(), 0), 1, horizon, rng);
}

double timechange_observable(const ParticleSystem& system, double z_total, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("timechange_observable: t must be non-negative");
    // the clock starts at the origin, before the first jump
    if (t == 0.0) return 0.0;
    const auto s = system.total_jumps_inverse(z_total * t);
    if (!s) {
        throw std::out_of_range("timechange_observable: scaled time exceeds the recorded jumps; extend the horizon");
    }
    return system.boundary_fraction(*s);
}

double timechange_limit(std::span<const double> weights, double t) {
    double sum = 0.0;
    for (double w : weights) sum += std::exp(-w * t);
    return 1.0 - sum / static_cast<double>(weights.size());
}

}  // namespace srp
