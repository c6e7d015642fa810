#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "srp/harness.hpp"

namespace {

struct Overrides {
    std::string config;
    std::string out;
    std::string seeds;
    std::size_t threads = 0;
    std::string data;
};

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            seeds.push_back(std::stoull(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw srp::ConfigError(fmt::format("--seeds: '{}' is not an unsigned integer", item));
        }
    }
    if (seeds.empty()) throw srp::ConfigError("--seeds: empty list");
    return seeds;
}

int run(srp::ExperimentKind kind, const Overrides& o) {
    std::ifstream in(o.config);
    if (!in) throw srp::ConfigError("cannot open config " + o.config);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw srp::ConfigError(fmt::format("config {} is not valid JSON: {}", o.config, e.what()));
    }
    if (!o.out.empty()) j["output_dir"] = o.out;
    if (!o.seeds.empty()) j["seeds"] = parse_seed_list(o.seeds);
    if (o.threads > 0) j["threads"] = o.threads;
    if (!o.data.empty()) j["fit"]["data"] = o.data;

    const auto cfg = srp::parse_config(j, kind);
    const auto report = srp::run_experiment(cfg);
    for (const auto& row : report.summary) {
        fmt::print("{} N={} {} = {:.6g}\n", row.experiment, row.n, row.metric, row.value);
    }
    for (const auto& f : report.files) fmt::print("wrote {}\n", f.string());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic ranking process experiments"};
    app.require_subcommand(1);
    Overrides overrides;
    srp::ExperimentKind chosen = srp::ExperimentKind::BoundaryConvergence;

    const srp::ExperimentKind kinds[] = {
        srp::ExperimentKind::BoundaryConvergence, srp::ExperimentKind::TailConvergence,
        srp::ExperimentKind::SupNormSweep,        srp::ExperimentKind::PdeResidual,
        srp::ExperimentKind::Timechange,          srp::ExperimentKind::Fit,
    };
    for (auto kind : kinds) {
        auto* sub = app.add_subcommand(std::string(srp::kind_name(kind)));
        sub->add_option("--config", overrides.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", overrides.out, "output directory (overrides output_dir)");
        sub->add_option("--seeds", overrides.seeds, "comma-separated seed list (overrides seeds)");
        sub->add_option("--threads", overrides.threads, "worker threads")->check(CLI::PositiveNumber);
        if (kind == srp::ExperimentKind::Fit) {
            sub->add_option("--data", overrides.data, "CSV of S,x observations to fit instead of simulating")
                ->check(CLI::ExistingFile);
        }
        sub->callback([&chosen, kind] { chosen = kind; });
    }

    CLI11_PARSE(app, argc, argv);
    try {
        return run(chosen, overrides);
    } catch (const srp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
