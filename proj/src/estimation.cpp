#include "srp/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "srp/csv.hpp"
#include "srp/parallel.hpp"
#include "srp/rng.hpp"
#include "srp/special_functions.hpp"

namespace srp {

namespace {

constexpr double kBoundaryFlag = 1e-3;
constexpr double kBootstrapBracket = 0.15;

// Per-distinct-S sufficient statistics.
struct Groups {
    std::vector<double> count;
    std::vector<double> mean;
    double within = 0.0;  // Σ (x - group mean)^2
};

// Model values x_b^N(S) at a fixed set of distinct S values. Beyond
// `table_size` distinct values the curve is evaluated on log-spaced nodes
// and interpolated linearly in log S.
class CurveModel {
public:
    CurveModel(std::size_t n, std::vector<double> s_values, CurveForm form, std::size_t table_size)
        : n_(n), s_values_(std::move(s_values)), form_(form) {
        double s_min = 0.0;
        double s_max = 0.0;
        for (double s : s_values_) {
            if (s > 0.0 && (s_min == 0.0 || s < s_min)) s_min = s;
            s_max = std::max(s_max, s);
        }
        if (s_values_.size() <= table_size || s_min == 0.0 || table_size < 2) {
            nodes_ = s_values_;
            return;
        }
        tabulated_ = true;
        nodes_.resize(table_size);
        const double l0 = std::log(s_min);
        const double l1 = std::log(s_max);
        for (std::size_t k = 0; k < table_size; ++k) {
            nodes_[k] = std::exp(l0 + (l1 - l0) * static_cast<double>(k) / static_cast<double>(table_size - 1));
        }
        nodes_.front() = s_min;
        nodes_.back() = s_max;
        lower_.resize(s_values_.size());
        frac_.resize(s_values_.size());
        for (std::size_t j = 0; j < s_values_.size(); ++j) {
            const double s = s_values_[j];
            if (s <= 0.0) {
                lower_[j] = kZero;
                continue;
            }
            const double pos = (std::log(s) - l0) / (l1 - l0) * static_cast<double>(table_size - 1);
            const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(0.0, std::floor(pos))), table_size - 2);
            lower_[j] = k;
            frac_[j] = std::clamp((std::log(s) - std::log(nodes_[k])) / (std::log(nodes_[k + 1]) - std::log(nodes_[k])),
                                  0.0, 1.0);
        }
    }

    void evaluate(double b, std::vector<double>& out) const {
        std::vector<double> at_nodes(nodes_.size());
        const RankingCurve curve = RankingCurve::make(n_, b, form_);
        if (form_ == CurveForm::Sum) {
            std::vector<double> rate(n_);
            for (std::size_t i = 1; i <= n_; ++i) {
                rate[n_ - i] = std::pow(static_cast<double>(i), -1.0 / b) / curve.zeta_n;
            }
            for (std::size_t k = 0; k < nodes_.size(); ++k) {
                double sum = 0.0;
                for (double r : rate) sum += std::exp(-nodes_[k] * r);
                at_nodes[k] = static_cast<double>(n_) - sum;
            }
        } else {
            for (std::size_t k = 0; k < nodes_.size(); ++k) at_nodes[k] = x_b_curve(curve, nodes_[k]);
        }
        out.resize(s_values_.size());
        if (!tabulated_) {
            out = std::move(at_nodes);
            return;
        }
        for (std::size_t j = 0; j < s_values_.size(); ++j) {
            if (lower_[j] == kZero) {
                out[j] = 0.0;
                continue;
            }
            const std::size_t k = lower_[j];
            out[j] = at_nodes[k] + frac_[j] * (at_nodes[k + 1] - at_nodes[k]);
        }
    }

private:
    static constexpr std::size_t kZero = static_cast<std::size_t>(-1);

    std::size_t n_;
    std::vector<double> s_values_;
    CurveForm form_;
    bool tabulated_ = false;
    std::vector<double> nodes_;
    std::vector<std::size_t> lower_;
    std::vector<double> frac_;
};

double grouped_loss(const Groups& g, const std::vector<double>& model) {
    double loss = g.within;
    for (std::size_t k = 0; k < model.size(); ++k) {
        if (g.count[k] > 0.0) {
            const double d = model[k] - g.mean[k];
            loss += g.count[k] * d * d;
        }
    }
    return loss;
}

template <typename F>
double golden_section(double lo, double hi, double tol, F&& f) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

struct Prepared {
    std::vector<double> s_values;
    std::vector<std::size_t> group_of;  // per record
};

Prepared prepare(const ObservationSet& obs) {
    std::vector<double> s;
    s.reserve(obs.records.size());
    for (const auto& r : obs.records) s.push_back(r.s);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    Prepared p;
    p.group_of.reserve(obs.records.size());
    for (const auto& r : obs.records) {
        p.group_of.push_back(static_cast<std::size_t>(std::lower_bound(s.begin(), s.end(), r.s) - s.begin()));
    }
    p.s_values = std::move(s);
    return p;
}

Groups group(const ObservationSet& obs, const Prepared& p, const std::vector<double>& weight) {
    const std::size_t m = p.s_values.size();
    Groups g;
    g.count.assign(m, 0.0);
    g.mean.assign(m, 0.0);
    for (std::size_t r = 0; r < obs.records.size(); ++r) {
        g.count[p.group_of[r]] += weight[r];
        g.mean[p.group_of[r]] += weight[r] * obs.records[r].x;
    }
    for (std::size_t k = 0; k < m; ++k) {
        if (g.count[k] > 0.0) g.mean[k] /= g.count[k];
    }
    for (std::size_t r = 0; r < obs.records.size(); ++r) {
        if (weight[r] > 0.0) {
            const double d = obs.records[r].x - g.mean[p.group_of[r]];
            g.within += weight[r] * d * d;
        }
    }
    return g;
}

void validate(const ObservationSet& obs) {
    if (obs.n == 0) throw std::invalid_argument("fit_b: population size N must be positive");
    if (obs.records.empty()) throw std::invalid_argument("fit_b: no observations");
    double s_min_pos = 0.0;
    double s_max = 0.0;
    bool all_equal = true;
    for (const auto& r : obs.records) {
        if (!(r.s >= 0.0) || !std::isfinite(r.s)) throw std::invalid_argument("fit_b: S must be non-negative");
        if (r.s != obs.records.front().s) all_equal = false;
        if (r.s > 0.0 && (s_min_pos == 0.0 || r.s < s_min_pos)) s_min_pos = r.s;
        s_max = std::max(s_max, r.s);
    }
    if (all_equal) throw std::invalid_argument("fit_b: degenerate observations (all S equal)");
    if (obs.records.size() < 10) throw std::invalid_argument("fit_b: need at least 10 records");
    if (s_max < 10.0 * s_min_pos) throw std::invalid_argument("fit_b: S values must span at least a decade");
    for (const auto& r : obs.records) {
        if (!(r.x >= 1.0 && r.x <= static_cast<double>(obs.n))) {
            throw std::invalid_argument("fit_b: positions must lie in [1, N]");
        }
    }
}

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto k = static_cast<std::size_t>(std::floor(pos));
    if (k + 1 >= v.size()) return v.back();
    return v[k] + (pos - static_cast<double>(k)) * (v[k + 1] - v[k]);
}

}  // namespace

double fit_loss(const ObservationSet& obs, double b, CurveForm form) {
    const RankingCurve curve = RankingCurve::make(obs.n, b, form);
    double loss = 0.0;
    for (const auto& r : obs.records) {
        const double d = r.x - x_b_curve(curve, r.s);
        loss += d * d;
    }
    return loss;
}

FitResult fit_b(const ObservationSet& obs, const FitOptions& options) {
    validate(obs);
    if (!(options.b_lo > 0.0 && options.b_lo < options.b_hi)) throw std::invalid_argument("fit_b: bad search interval");
    if (options.form != CurveForm::Sum && !(options.b_hi < 1.0)) {
        throw std::invalid_argument("fit_b: incomplete-gamma forms need b_hi < 1");
    }

    const Prepared prepared = prepare(obs);
    const CurveModel model(obs.n, prepared.s_values, options.form, options.table_size);
    const std::vector<double> unit(obs.records.size(), 1.0);
    const Groups all = group(obs, prepared, unit);

    auto search = [&](const Groups& g, double lo, double hi) {
        std::vector<double> values;
        return golden_section(lo, hi, options.tolerance, [&](double b) {
            model.evaluate(b, values);
            return grouped_loss(g, values);
        });
    };

    FitResult result{};
    result.b_hat = search(all, options.b_lo, options.b_hi);
    {
        std::vector<double> values;
        model.evaluate(result.b_hat, values);
        result.rms = std::sqrt(grouped_loss(all, values) / static_cast<double>(obs.records.size()));
    }
    result.at_boundary =
        result.b_hat - options.b_lo < kBoundaryFlag || options.b_hi - result.b_hat < kBoundaryFlag;

    result.ci_halfwidth = 0.0;
    if (options.bootstrap > 1) {
        const double lo = std::max(options.b_lo, result.b_hat - kBootstrapBracket);
        const double hi = std::min(options.b_hi, result.b_hat + kBootstrapBracket);
        std::vector<double> estimates(options.bootstrap);
        parallel_for(options.bootstrap, options.threads, [&](std::size_t k) {
            Rng rng(derive_seed(options.seed, k));
            std::vector<double> weight(obs.records.size(), 0.0);
            for (std::size_t r = 0; r < obs.records.size(); ++r) weight[rng.below(obs.records.size())] += 1.0;
            estimates[k] = search(group(obs, prepared, weight), lo, hi);
        });
        result.ci_halfwidth = 0.5 * (quantile(estimates, 0.95) - quantile(estimates, 0.05));
    }
    return result;
}

ObservationSet observations_from_system(const ParticleSystem& system, std::span<const double> times) {
    ObservationSet obs;
    obs.n = system.size();
    PositionIndex index(system);
    for (double t : times) {
        if (!(t >= 0.0) || t > system.horizon()) throw std::out_of_range("observations_from_system: time outside horizon");
        index.advance_to(t);
        const auto total = static_cast<double>(index.applied_events());
        for (std::size_t i = 0; i < system.size(); ++i) {
            const std::ptrdiff_t last = index.last_event(i);
            if (last < 0) continue;
            obs.records.push_back({total - static_cast<double>(last + 1), static_cast<double>(index.position(i))});
        }
    }
    return obs;
}

ObservationSet read_observations(std::istream& in, std::size_t n) {
    ObservationSet obs;
    obs.n = n;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("observations: empty input");
    const auto header = split_csv_line(line);
    if (header.size() != 2 || header[0] != "S" || header[1] != "x") {
        throw std::invalid_argument("observations: expected header \"S,x\"");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2) throw std::invalid_argument("observations: line " + std::to_string(line_no) + " needs 2 fields");
        try {
            obs.records.push_back({std::stod(fields[0]), std::stod(fields[1])});
        } catch (const std::logic_error&) {
            throw std::invalid_argument("observations: line " + std::to_string(line_no) + " is not numeric");
        }
    }
    return obs;
}

void write_observations(std::ostream& out, const ObservationSet& obs) {
    CsvTable table{{"S", "x"}, {}};
    table.rows.reserve(obs.records.size());
    for (const auto& r : obs.records) table.rows.push_back({r.s, r.x});
    write_csv(out, table);
}

void write_fit_result(std::ostream& out, const FitResult& result) {
    write_csv(out, CsvTable{{"b_hat", "rms", "ci90"}, {{result.b_hat, result.rms, result.ci_halfwidth}}});
}

}  // namespace srp
