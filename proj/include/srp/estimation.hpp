#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "srp/ranking_sim.hpp"
#include "srp/timechange.hpp"

namespace srp {

struct Observation {
    double s;  // total jumps since the particle's own jump
    double x;  // observed position, 1..N
};

struct ObservationSet {
    std::size_t n = 0;  // population size N
    std::vector<Observation> records;
};

struct FitOptions {
    CurveForm form = CurveForm::Sum;
    double b_lo = 0.05;
    double b_hi = 0.99;
    double tolerance = 1e-4;
    std::size_t bootstrap = 200;
    std::uint64_t seed = 0x5eed;
    std::size_t threads = 1;
    // above this many distinct S values the model is tabulated on a log grid
    std::size_t table_size = 256;
};

struct FitResult {
    double b_hat;
    double rms;
    double ci_halfwidth;  // 90% percentile-bootstrap half-width
    bool at_boundary;     // b_hat within 1e-3 of the search interval's ends
};

/// Sum of squared residuals Σ (x - x_b^N(S))^2 at exponent b.
double fit_loss(const ObservationSet& obs, double b, CurveForm form = CurveForm::Sum);

/// Least-squares b by golden-section search, with a bootstrap CI.
/// Throws std::invalid_argument on degenerate data (all S equal), fewer
/// than 10 records, S spanning less than a decade, or x outside [1, N].
FitResult fit_b(const ObservationSet& obs, const FitOptions& options = {});

/// One record per particle that has jumped by t, for each t: S counts the
/// events after its latest jump, x is its position.
ObservationSet observations_from_system(const ParticleSystem& system, std::span<const double> times);

/// Reads CSV with header "S,x".
ObservationSet read_observations(std::istream& in, std::size_t n);
void write_observations(std::ostream& out, const ObservationSet& obs);

/// Writes "b_hat,rms,ci90" and one data row.
void write_fit_result(std::ostream& out, const FitResult& result);

}  // namespace srp
