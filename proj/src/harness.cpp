#include "srp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

#include "srp/csv.hpp"
#include "srp/estimation.hpp"
#include "srp/limit_laws.hpp"
#include "srp/parallel.hpp"

namespace srp {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSimulationStream = 1;
constexpr std::uint64_t kBootstrapStream = 2;

constexpr std::pair<ExperimentKind, std::string_view> kKindNames[] = {
    {ExperimentKind::BoundaryConvergence, "boundary_convergence"},
    {ExperimentKind::TailConvergence, "tail_convergence"},
    {ExperimentKind::SupNormSweep, "sup_norm_sweep"},
    {ExperimentKind::PdeResidual, "pde_residual"},
    {ExperimentKind::Timechange, "timechange"},
    {ExperimentKind::Fit, "fit"},
};

[[noreturn]] void fail(std::string_view field, std::string_view what) {
    throw ConfigError(fmt::format("config field '{}': {}", field, what));
}

double get_number(const json& j, std::string_view field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

std::vector<double> parse_grid(const json& j, std::string_view field) {
    std::vector<double> grid;
    if (j.is_array()) {
        for (const auto& v : j) grid.push_back(get_number(v, field));
    } else if (j.is_object()) {
        if (!j.contains("start") || !j.contains("stop") || !j.contains("count")) {
            fail(field, "grid object needs start, stop and count");
        }
        const double start = get_number(j["start"], field);
        const double stop = get_number(j["stop"], field);
        const auto count = j["count"].get<std::size_t>();
        if (count == 0) fail(field, "count must be positive");
        for (std::size_t k = 0; k < count; ++k) {
            grid.push_back(count == 1 ? start
                                      : start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1));
        }
    } else {
        fail(field, "expected an array or {start, stop, count}");
    }
    if (grid.empty()) fail(field, "grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end())) fail(field, "grid must be sorted ascending");
    return grid;
}

Layout parse_layout(const json& j) {
    const auto name = j.get<std::string>();
    if (name == "proportional") return Layout::Proportional;
    if (name == "blocks") return Layout::Blocks;
    fail("layout", "expected \"proportional\" or \"blocks\"");
}

CurveForm parse_form(const json& j) {
    const auto name = j.get<std::string>();
    if (name == "sum") return CurveForm::Sum;
    if (name == "gamma") return CurveForm::Gamma;
    if (name == "pareto_integral") return CurveForm::ParetoIntegral;
    fail("fit.form", "expected \"sum\", \"gamma\" or \"pareto_integral\"");
}

void write_summary(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "experiment,N,metric,value\n";
    for (const auto& row : rows) {
        out << row.experiment << ',' << row.n << ',' << row.metric << ',' << format_number(row.value) << '\n';
    }
}

class Run {
public:
    Run(const ExperimentConfig& cfg, ExperimentReport& report) : cfg_(cfg), report_(report) {}

    void add(std::size_t n, std::string metric, double value) {
        report_.summary.push_back({std::string(kind_name(cfg_.kind)), n, std::move(metric), value});
    }

    void write(const std::string& name, const CsvTable& table) {
        const auto path = cfg_.output_dir / name;
        write_csv_file(path, table);
        report_.files.push_back(path);
    }

    std::string per_n(std::size_t n) const { return fmt::format("{}_{}.csv", kind_name(cfg_.kind), n); }

    Rng replica_rng(std::uint64_t seed, std::size_t n) const {
        return Rng(derive_seed(seed, static_cast<std::uint64_t>(n), kSimulationStream));
    }

    const ExperimentConfig& cfg() const { return cfg_; }

private:
    const ExperimentConfig& cfg_;
    ExperimentReport& report_;
};

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

// boundary_convergence and sup_norm_sweep share this: the seed-averaged
// boundary curve and max-over-grid deviations from y_C per N.
void run_boundary(Run& run, std::string_view metric_prefix) {
    const auto& cfg = run.cfg();
    const LimitEvaluator ev(*cfg.mixture, cfg.layout);
    std::vector<double> limit;
    for (double t : cfg.time_grid) limit.push_back(ev.y_c(t));
    CsvTable limit_table{{"t", "Yc_limit"}, {}};
    for (std::size_t k = 0; k < limit.size(); ++k) limit_table.rows.push_back({cfg.time_grid[k], limit[k]});
    run.write(fmt::format("{}_limit.csv", kind_name(cfg.kind)), limit_table);

    for (std::size_t n : cfg.n_list) {
        std::vector<std::vector<double>> curves(cfg.seeds.size());
        parallel_for(cfg.seeds.size(), cfg.threads, [&](std::size_t s) {
            Rng rng = run.replica_rng(cfg.seeds[s], n);
            const ParticleSystem sys = init_system(n, *cfg.mixture, cfg.layout, cfg.horizon, rng);
            for (double t : cfg.time_grid) curves[s].push_back(sys.boundary_fraction(t));
        });
        std::vector<double> per_seed;
        std::vector<double> mean(cfg.time_grid.size(), 0.0);
        for (const auto& c : curves) {
            double dev = 0.0;
            for (std::size_t k = 0; k < c.size(); ++k) {
                dev = std::max(dev, std::abs(c[k] - limit[k]));
                mean[k] += c[k] / static_cast<double>(curves.size());
            }
            per_seed.push_back(dev);
        }
        double dev_of_mean = 0.0;
        for (std::size_t k = 0; k < mean.size(); ++k) dev_of_mean = std::max(dev_of_mean, std::abs(mean[k] - limit[k]));

        CsvTable table{{"t", "Yc_emp"}, {}};
        for (std::size_t k = 0; k < mean.size(); ++k) table.rows.push_back({cfg.time_grid[k], mean[k]});
        run.write(run.per_n(n), table);
        run.add(n, fmt::format("{}_mean", metric_prefix), mean_of(per_seed));
        run.add(n, fmt::format("{}_worst", metric_prefix), *std::max_element(per_seed.begin(), per_seed.end()));
        run.add(n, fmt::format("{}_of_mean", metric_prefix), dev_of_mean);
    }
}

void run_tails(Run& run) {
    const auto& cfg = run.cfg();
    const LimitEvaluator ev(*cfg.mixture, cfg.layout);
    const std::size_t k = cfg.mixture->size();
    // limit[t][alpha][y]
    std::vector<std::vector<std::vector<double>>> limit(cfg.time_grid.size(), std::vector<std::vector<double>>(k));
    CsvTable limit_table{{"t", "y", "alpha", "U_limit"}, {}};
    for (std::size_t ti = 0; ti < cfg.time_grid.size(); ++ti) {
        for (std::size_t a = 0; a < k; ++a) {
            for (double y : cfg.y_grid) limit[ti][a].push_back(ev.limit_tail(a, y, cfg.time_grid[ti]));
        }
        for (std::size_t yi = 0; yi < cfg.y_grid.size(); ++yi) {
            for (std::size_t a = 0; a < k; ++a) {
                limit_table.rows.push_back({cfg.time_grid[ti], cfg.y_grid[yi], static_cast<double>(a + 1), limit[ti][a][yi]});
            }
        }
    }
    run.write("limit_tails.csv", limit_table);

    for (std::size_t n : cfg.n_list) {
        std::vector<std::vector<EmpiricalSnapshot>> snaps(cfg.seeds.size());
        parallel_for(cfg.seeds.size(), cfg.threads, [&](std::size_t s) {
            Rng rng = run.replica_rng(cfg.seeds[s], n);
            const ParticleSystem sys = init_system(n, *cfg.mixture, cfg.layout, cfg.horizon, rng);
            snaps[s] = take_snapshots(sys, cfg.time_grid, cfg.y_grid);
        });
        std::vector<double> per_seed;
        std::vector<double> boundary_per_seed;
        const double inv_seeds = 1.0 / static_cast<double>(cfg.seeds.size());
        std::vector<std::vector<std::vector<double>>> mean(
            cfg.time_grid.size(), std::vector<std::vector<double>>(k, std::vector<double>(cfg.y_grid.size(), 0.0)));
        for (const auto& seed_snaps : snaps) {
            double dev = 0.0;
            double bdev = 0.0;
            for (std::size_t ti = 0; ti < seed_snaps.size(); ++ti) {
                bdev = std::max(bdev, std::abs(seed_snaps[ti].boundary_fraction - ev.y_c(cfg.time_grid[ti])));
                for (std::size_t a = 0; a < k; ++a) {
                    for (std::size_t yi = 0; yi < cfg.y_grid.size(); ++yi) {
                        const double u = seed_snaps[ti].class_tails[a][yi];
                        dev = std::max(dev, std::abs(u - limit[ti][a][yi]));
                        mean[ti][a][yi] += u * inv_seeds;
                    }
                }
            }
            per_seed.push_back(dev);
            boundary_per_seed.push_back(bdev);
        }
        CsvTable table{{"t", "y", "alpha", "U_emp"}, {}};
        double dev_of_mean = 0.0;
        for (std::size_t ti = 0; ti < cfg.time_grid.size(); ++ti) {
            for (std::size_t yi = 0; yi < cfg.y_grid.size(); ++yi) {
                for (std::size_t a = 0; a < k; ++a) {
                    table.rows.push_back({cfg.time_grid[ti], cfg.y_grid[yi], static_cast<double>(a + 1), mean[ti][a][yi]});
                    dev_of_mean = std::max(dev_of_mean, std::abs(mean[ti][a][yi] - limit[ti][a][yi]));
                }
            }
        }
        run.write(run.per_n(n), table);
        run.add(n, "tail_max_dev_mean", mean_of(per_seed));
        run.add(n, "tail_max_dev_worst", *std::max_element(per_seed.begin(), per_seed.end()));
        run.add(n, "tail_max_dev_of_mean", dev_of_mean);
        run.add(n, "boundary_max_dev_mean", mean_of(boundary_per_seed));
    }
}

void run_pde(Run& run) {
    const auto& cfg = run.cfg();
    const LimitEvaluator ev(*cfg.mixture, cfg.layout, 0.0);
    PdeCheckConfig half = cfg.pde;
    half.h = cfg.pde.h / 2.0;
    const auto coarse = residual_grid(ev, cfg.pde);
    const auto fine = residual_grid(ev, half);
    CsvTable table{{"y", "t", "alpha", "residual", "h"}, {}};
    double max_coarse = 0.0;
    double max_fine = 0.0;
    for (const auto& r : coarse) {
        table.rows.push_back({r.y, r.t, static_cast<double>(r.alpha + 1), r.residual, r.h});
        max_coarse = std::max(max_coarse, std::abs(r.residual));
    }
    for (const auto& r : fine) {
        table.rows.push_back({r.y, r.t, static_cast<double>(r.alpha + 1), r.residual, r.h});
        max_fine = std::max(max_fine, std::abs(r.residual));
    }
    run.write("pde_residual.csv", table);
    run.add(0, "grid_points", static_cast<double>(coarse.size()));
    run.add(0, "max_residual_h", max_coarse);
    run.add(0, "max_residual_half_h", max_fine);
    run.add(0, "order_ratio", max_fine > 0.0 ? max_coarse / max_fine : 0.0);

    double boundary = 0.0;
    double initial = 0.0;
    for (std::size_t a = 0; a < ev.n_classes(); ++a) {
        for (std::size_t i = 0; i < cfg.pde.t_points; ++i) {
            const double t = cfg.pde.t_min + (cfg.pde.t_max - cfg.pde.t_min) * static_cast<double>(i) /
                                                 static_cast<double>(std::max<std::size_t>(1, cfg.pde.t_points - 1));
            boundary = std::max(boundary, std::abs(ev.limit_tail(a, 0.0, t) - ev.mixture()[a].weight));
        }
        for (std::size_t i = 0; i < cfg.pde.y_points; ++i) {
            const double y = static_cast<double>(i) / static_cast<double>(cfg.pde.y_points);
            initial = std::max(initial, initial_residual(ev, a, y));
        }
    }
    run.add(0, "boundary_max", boundary);
    run.add(0, "initial_max", initial);

    const double t_end = cfg.pde.t_max;
    double curve_err = 0.0;
    double phi_err = 0.0;
    auto check_phi = [&](const CharacteristicCurve& c) {
        const double y = c.y.back();
        if (y >= 1.0) return;
        for (std::size_t a = 0; a < ev.n_classes(); ++a) {
            phi_err = std::max(phi_err, std::abs(c.phi.back()[a] - ev.limit_tail(a, y, t_end)));
        }
    };
    for (double frac : {0.0, 0.25, 0.5, 0.75}) {
        const double t1 = frac * t_end;
        const auto c = characteristic_curve(ev, TopSide{t1}, t_end, cfg.characteristic_steps);
        curve_err = std::max(curve_err, std::abs(c.y.back() - ev.y_a(t_end - t1, t_end)));
        check_phi(c);
    }
    for (double y0 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const auto c = characteristic_curve(ev, TailSide{y0}, t_end, cfg.characteristic_steps);
        curve_err = std::max(curve_err, std::abs(c.y.back() - ev.y_b(y0, t_end)));
        check_phi(c);
    }
    run.add(0, "characteristic_max_error", curve_err);
    run.add(0, "characteristic_phi_max_error", phi_err);
}

void run_timechange(Run& run) {
    const auto& cfg = run.cfg();
    for (std::size_t n : cfg.n_list) {
        const ZipfFamily family{cfg.zipf.a, cfg.zipf.b, n};
        const ZipfSums sums = zipf_weights_and_Z(family, n);
        std::vector<std::vector<double>> curves(cfg.seeds.size());
        parallel_for(cfg.seeds.size(), cfg.threads, [&](std::size_t s) {
            Rng rng = run.replica_rng(cfg.seeds[s], n);
            const ParticleSystem sys = common_profile_system(sums.weights, *cfg.profile, cfg.horizon, rng);
            for (double t : cfg.time_grid) curves[s].push_back(timechange_observable(sys, sums.total, t));
        });
        std::vector<double> mean(cfg.time_grid.size(), 0.0);
        for (const auto& c : curves) {
            for (std::size_t k = 0; k < c.size(); ++k) mean[k] += c[k] / static_cast<double>(curves.size());
        }
        CsvTable table{{"t_scaled", "Yc_timechanged", "Yc_limit"}, {}};
        double dev = 0.0;
        for (std::size_t k = 0; k < mean.size(); ++k) {
            const double limit = timechange_limit(sums.weights, cfg.time_grid[k]);
            table.rows.push_back({cfg.time_grid[k], mean[k], limit});
            dev = std::max(dev, std::abs(mean[k] - limit));
        }
        run.write(run.per_n(n), table);
        run.add(n, "timechange_max_dev_of_mean", dev);
        run.add(n, "Z_exact", sums.total);
        run.add(n, "Z_asymptotic", zipf_Z_asymptotic(family));

        if (cfg.zipf.b < 1.0) {
            const RankingCurve gamma = RankingCurve::make(n, cfg.zipf.b, CurveForm::Gamma);
            CsvTable curve{{"S", "x_sum_form", "x_gamma_form"}, {{0.0, 0.0, 0.0}}};
            constexpr int kPoints = 60;
            for (int p = 0; p < kPoints; ++p) {
                const double s = sums.total * std::pow(10.0, -3.0 + (std::log10(50.0) + 3.0) * p / (kPoints - 1));
                curve.rows.push_back({s, x_b_sum(family, s), x_b_curve(gamma, s)});
            }
            run.write(fmt::format("ranking_curve_{}.csv", n), curve);
        }
    }
}

void run_fit(Run& run) {
    const auto& cfg = run.cfg();
    FitOptions options;
    options.form = cfg.fit.form;
    options.bootstrap = cfg.fit.bootstrap;
    options.threads = cfg.threads;

    auto write_results = [&](std::size_t n, const std::vector<FitResult>& results) {
        CsvTable table{{"b_hat", "rms", "ci90"}, {}};
        std::vector<double> b;
        std::size_t at_boundary = 0;
        for (const auto& r : results) {
            table.rows.push_back({r.b_hat, r.rms, r.ci_halfwidth});
            b.push_back(r.b_hat);
            at_boundary += r.at_boundary ? 1 : 0;
        }
        run.write(run.per_n(n), table);
        run.add(n, "b_hat_mean", mean_of(b));
        run.add(n, "b_hat_min", *std::min_element(b.begin(), b.end()));
        run.add(n, "b_hat_max", *std::max_element(b.begin(), b.end()));
        run.add(n, "ci90_first", results.front().ci_halfwidth);
        run.add(n, "at_boundary_count", static_cast<double>(at_boundary));
    };

    if (cfg.fit.data) {
        const std::size_t n = cfg.n_list.front();
        std::ifstream in(*cfg.fit.data);
        if (!in) fail("fit.data", "cannot open " + cfg.fit.data->string());
        const ObservationSet obs = read_observations(in, n);
        options.seed = derive_seed(cfg.seeds.front(), n, kBootstrapStream);
        write_results(n, {fit_b(obs, options)});
        return;
    }

    std::vector<double> times = cfg.fit.snapshot_times;
    if (times.empty()) {
        for (int k = 1; k <= 20; ++k) times.push_back(cfg.horizon * k / 20.0);
    }
    for (std::size_t n : cfg.n_list) {
        const std::vector<double> weights = zipf_weights({cfg.zipf.a, cfg.zipf.b, n});
        std::vector<FitResult> results;
        // bootstrap already fans out over threads; replicas run in order
        for (std::uint64_t seed : cfg.seeds) {
            Rng rng = run.replica_rng(seed, n);
            const ParticleSystem sys = common_profile_system(weights, *cfg.profile, cfg.horizon, rng);
            const ObservationSet obs = observations_from_system(sys, times);
            FitOptions o = options;
            o.seed = derive_seed(seed, n, kBootstrapStream);
            results.push_back(fit_b(obs, o));
        }
        write_results(n, results);
    }
}

}  // namespace

std::optional<ExperimentKind> parse_kind(std::string_view name) {
    for (const auto& [kind, text] : kKindNames) {
        if (text == name) return kind;
    }
    return std::nullopt;
}

std::string_view kind_name(ExperimentKind kind) {
    for (const auto& [k, text] : kKindNames) {
        if (k == kind) return text;
    }
    return "unknown";
}

ActivityProfile parse_profile(const json& j) {
    if (!j.is_object() || !j.contains("shape")) fail("profile", "expected an object with a \"shape\"");
    const auto shape = j["shape"].get<std::string>();
    try {
        if (shape == "constant") return ActivityProfile::constant();
        if (shape == "sinusoidal") {
            return ActivityProfile::sinusoidal(get_number(j.at("period"), "profile.period"),
                                               get_number(j.at("amplitude"), "profile.amplitude"));
        }
        if (shape == "piecewise_constant") {
            return ActivityProfile::piecewise_constant(j.at("breakpoints").get<std::vector<double>>(),
                                                       j.at("levels").get<std::vector<double>>());
        }
    } catch (const json::exception& e) {
        fail("profile", e.what());
    } catch (const std::invalid_argument& e) {
        fail("profile", e.what());
    }
    fail("profile.shape", "expected constant, sinusoidal or piecewise_constant");
}

IntensitySpec parse_intensity(const json& j) {
    if (!j.is_object() || !j.contains("kind")) fail("mixture.intensity", "expected an object with a \"kind\"");
    const auto kind = j["kind"].get<std::string>();
    try {
        if (kind == "homogeneous") return IntensitySpec::homogeneous(get_number(j.at("rate"), "intensity.rate"));
        if (kind == "common_profile") {
            return IntensitySpec::common_profile(get_number(j.at("rate"), "intensity.rate"), parse_profile(j.at("profile")));
        }
        if (kind == "piecewise_linear") {
            std::vector<std::pair<double, double>> knots;
            for (const auto& k : j.at("knots")) knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
            return IntensitySpec::piecewise_linear(std::move(knots));
        }
    } catch (const json::exception& e) {
        fail("mixture.intensity", e.what());
    } catch (const std::invalid_argument& e) {
        fail("mixture.intensity", e.what());
    }
    fail("mixture.intensity.kind", "expected homogeneous, common_profile or piecewise_linear");
}

ExperimentConfig parse_config(const json& j, std::optional<ExperimentKind> kind) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    if (kind) {
        cfg.kind = *kind;
        if (j.contains("experiment")) {
            const auto named = parse_kind(j["experiment"].get<std::string>());
            if (!named || *named != *kind) fail("experiment", "does not match the requested subcommand");
        }
    } else {
        if (!j.contains("experiment")) fail("experiment", "missing");
        const auto named = parse_kind(j["experiment"].get<std::string>());
        if (!named) fail("experiment", "unknown experiment kind");
        cfg.kind = *named;
    }
    const bool zipf_kind = cfg.kind == ExperimentKind::Timechange || cfg.kind == ExperimentKind::Fit;

    if (j.contains("mixture")) {
        if (!j["mixture"].is_array()) fail("mixture", "expected an array of {weight, intensity}");
        std::vector<MixtureAtom> atoms;
        for (const auto& a : j["mixture"]) {
            if (!a.contains("weight") || !a.contains("intensity")) fail("mixture", "each atom needs weight and intensity");
            atoms.push_back({get_number(a["weight"], "mixture.weight"), parse_intensity(a["intensity"])});
        }
        try {
            cfg.mixture = build_mixture(std::move(atoms));
        } catch (const std::invalid_argument& e) {
            fail("mixture", e.what());
        }
    } else if (!zipf_kind) {
        fail("mixture", "missing");
    }
    if (j.contains("layout")) cfg.layout = parse_layout(j["layout"]);

    if (j.contains("zipf")) {
        const auto& z = j["zipf"];
        if (z.contains("a")) cfg.zipf.a = get_number(z["a"], "zipf.a");
        if (z.contains("b")) cfg.zipf.b = get_number(z["b"], "zipf.b");
        if (z.contains("N")) cfg.zipf.n = z["N"].get<std::size_t>();
        if (!(cfg.zipf.a > 0.0) || !(cfg.zipf.b > 0.0)) fail("zipf", "a and b must be positive");
    }
    if (j.contains("profile")) cfg.profile = parse_profile(j["profile"]);
    if (zipf_kind && !cfg.profile) cfg.profile = ActivityProfile::constant();

    if (j.contains("n_list")) {
        cfg.n_list = j["n_list"].get<std::vector<std::size_t>>();
        for (std::size_t k = 0; k < cfg.n_list.size(); ++k) {
            if (cfg.n_list[k] == 0) fail("n_list", "entries must be positive");
            if (k > 0 && cfg.n_list[k] <= cfg.n_list[k - 1]) fail("n_list", "must be strictly increasing");
        }
    }
    if (cfg.n_list.empty()) {
        if (zipf_kind) {
            cfg.n_list = {cfg.zipf.n};
        } else if (cfg.kind != ExperimentKind::PdeResidual) {
            fail("n_list", "missing");
        }
    }

    if (j.contains("time_grid")) cfg.time_grid = parse_grid(j["time_grid"], "time_grid");
    if (j.contains("y_grid")) {
        cfg.y_grid = parse_grid(j["y_grid"], "y_grid");
        if (cfg.y_grid.front() < 0.0 || cfg.y_grid.back() >= 1.0) fail("y_grid", "values must lie in [0,1)");
    } else {
        for (int k = 0; k <= 20; ++k) cfg.y_grid.push_back(0.95 * k / 20.0);
    }
    const bool needs_time = cfg.kind != ExperimentKind::PdeResidual && cfg.kind != ExperimentKind::Fit;
    if (needs_time && cfg.time_grid.empty()) fail("time_grid", "missing");
    if (!cfg.time_grid.empty() && cfg.time_grid.front() < 0.0) fail("time_grid", "times must be non-negative");

    if (j.contains("horizon")) {
        cfg.horizon = get_number(j["horizon"], "horizon");
    } else if (cfg.kind == ExperimentKind::Timechange) {
        cfg.horizon = 1.5 * cfg.time_grid.back() + 1.0;
    } else if (cfg.kind == ExperimentKind::Fit) {
        cfg.horizon = 10.0;
    } else if (!cfg.time_grid.empty()) {
        cfg.horizon = cfg.time_grid.back();
    }
    if (cfg.kind != ExperimentKind::PdeResidual) {
        if (!(cfg.horizon > 0.0)) fail("horizon", "must be positive");
        const bool real_time = cfg.kind != ExperimentKind::Timechange && cfg.kind != ExperimentKind::Fit;
        if (real_time && cfg.horizon < cfg.time_grid.back()) fail("horizon", "shorter than the time grid");
    }

    if (j.contains("seeds")) cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (cfg.seeds.empty() && cfg.kind != ExperimentKind::PdeResidual) fail("seeds", "need at least one seed");
    if (j.contains("threads")) cfg.threads = std::max<std::size_t>(1, j["threads"].get<std::size_t>());
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();

    if (j.contains("pde")) {
        const auto& p = j["pde"];
        auto num = [&](const char* key, double& dst) {
            if (p.contains(key)) dst = get_number(p[key], std::string("pde.") + key);
        };
        num("h", cfg.pde.h);
        num("y_min", cfg.pde.y_min);
        num("y_max", cfg.pde.y_max);
        num("t_min", cfg.pde.t_min);
        num("t_max", cfg.pde.t_max);
        num("gluing_margin", cfg.pde.gluing_margin);
        if (p.contains("y_points")) cfg.pde.y_points = p["y_points"].get<std::size_t>();
        if (p.contains("t_points")) cfg.pde.t_points = p["t_points"].get<std::size_t>();
        if (p.contains("characteristic_steps")) cfg.characteristic_steps = p["characteristic_steps"].get<std::size_t>();
        if (!(cfg.pde.h > 0.0)) fail("pde.h", "must be positive");
        if (!(cfg.pde.y_min > 0.0 && cfg.pde.y_max < 1.0 && cfg.pde.y_min <= cfg.pde.y_max)) {
            fail("pde.y_min/y_max", "need 0 < y_min <= y_max < 1");
        }
        if (!(cfg.pde.t_min > 0.0 && cfg.pde.t_min <= cfg.pde.t_max)) fail("pde.t_min/t_max", "need 0 < t_min <= t_max");
    }

    if (j.contains("fit")) {
        const auto& f = j["fit"];
        if (f.contains("bootstrap")) cfg.fit.bootstrap = f["bootstrap"].get<std::size_t>();
        if (f.contains("form")) cfg.fit.form = parse_form(f["form"]);
        if (f.contains("snapshot_times")) {
            cfg.fit.snapshot_times = parse_grid(f["snapshot_times"], "fit.snapshot_times");
            if (cfg.fit.snapshot_times.back() > cfg.horizon) fail("fit.snapshot_times", "beyond horizon");
        }
        if (f.contains("data")) cfg.fit.data = f["data"].get<std::string>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> kind) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j, kind);
}

std::optional<double> ExperimentReport::metric(std::string_view name, std::optional<std::size_t> n) const {
    for (const auto& row : summary) {
        if (row.metric == name && (!n || row.n == *n)) return row.value;
    }
    return std::nullopt;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    std::filesystem::create_directories(config.output_dir);
    ExperimentReport report;
    Run run(config, report);
    switch (config.kind) {
        case ExperimentKind::BoundaryConvergence:
            run_boundary(run, "max_dev");
            break;
        case ExperimentKind::SupNormSweep:
            run_boundary(run, "sup_dev");
            break;
        case ExperimentKind::TailConvergence:
            run_tails(run);
            break;
        case ExperimentKind::PdeResidual:
            run_pde(run);
            break;
        case ExperimentKind::Timechange:
            run_timechange(run);
            break;
        case ExperimentKind::Fit:
            run_fit(run);
            break;
    }
    const auto summary_path = config.output_dir / "summary.csv";
    write_summary(summary_path, report.summary);
    report.files.push_back(summary_path);
    return report;
}

}  // namespace srp
