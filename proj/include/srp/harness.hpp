#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "srp/burgers_check.hpp"
#include "srp/intensity.hpp"
#include "srp/ranking_sim.hpp"
#include "srp/timechange.hpp"

namespace srp {

enum class ExperimentKind { BoundaryConvergence, TailConvergence, SupNormSweep, PdeResidual, Timechange, Fit };

std::optional<ExperimentKind> parse_kind(std::string_view name);
std::string_view kind_name(ExperimentKind kind);

/// Invalid configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FitSettings {
    std::size_t bootstrap = 200;
    CurveForm form = CurveForm::Sum;
    std::vector<double> snapshot_times;  // empty: 20 evenly spaced in (0, horizon]
    std::optional<std::filesystem::path> data;
};

/// Parsed experiment description. See README for the JSON schema.
///
/// Replica streams: seed s, population N and replica purpose p map to
/// derive_seed(s, N, p), i.e. three chained splitmix64 rounds. Outputs
/// therefore depend only on the config, never on thread scheduling.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::BoundaryConvergence;
    std::optional<MixtureSpec> mixture;
    Layout layout = Layout::Proportional;
    std::vector<std::size_t> n_list;
    std::vector<double> time_grid;
    std::vector<double> y_grid;
    double horizon = 0.0;
    std::vector<std::uint64_t> seeds;
    std::size_t threads = 1;
    std::filesystem::path output_dir = "out";
    PdeCheckConfig pde;
    std::size_t characteristic_steps = 10000;
    ZipfFamily zipf{1.0, 0.872, 697};
    std::optional<ActivityProfile> profile;
    FitSettings fit;
};

ActivityProfile parse_profile(const nlohmann::json& j);
IntensitySpec parse_intensity(const nlohmann::json& j);

/// Validates and fills defaults. `kind` overrides the config's
/// "experiment" field (the CLI subcommand wins). Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j, std::optional<ExperimentKind> kind = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> kind = std::nullopt);

struct SummaryRow {
    std::string experiment;
    std::size_t n;
    std::string metric;
    double value;
};

struct ExperimentReport {
    std::vector<SummaryRow> summary;
    std::vector<std::filesystem::path> files;

    /// First summary value with this metric (and N, when given).
    std::optional<double> metric(std::string_view name, std::optional<std::size_t> n = std::nullopt) const;
};

/// Runs the experiment, writes <kind>_<N>.csv tables and summary.csv into
/// the output directory, and returns the summary.
ExperimentReport run_experiment(const ExperimentConfig& config);

}  // namespace srp
