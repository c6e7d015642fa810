#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "srp/fenwick.hpp"
#include "srp/intensity.hpp"
#include "srp/rng.hpp"

namespace srp {

enum class Layout { Proportional, Blocks };

/// One jump of one particle. Events are totally ordered by (time, particle):
/// simultaneous jumps count the higher particle index as the later one.
struct Event {
    double time;
    std::size_t particle;

    friend bool operator<(const Event& a, const Event& b) {
        return a.time < b.time || (a.time == b.time && a.particle < b.particle);
    }
};

/// N particles under move-to-front dynamics with pre-sampled jump streams.
///
/// Immutable after construction. Positions are never stored; they are
/// recovered from last-jump order statistics on demand.
class ParticleSystem {
public:
    /// Builds from explicit jump streams. `initial_rank[i]` is particle i's
    /// rank at t = 0 (1-based, a permutation of 1..N). Each stream must be
    /// strictly increasing inside (0, horizon].
    ParticleSystem(std::vector<std::vector<double>> jump_times, std::vector<std::size_t> class_of,
                   std::vector<std::size_t> initial_rank, std::size_t n_classes, double horizon);

    std::size_t size() const noexcept { return jump_times_.size(); }
    std::size_t n_classes() const noexcept { return n_classes_; }
    double horizon() const noexcept { return horizon_; }

    std::size_t class_of(std::size_t i) const { return class_of_.at(i); }
    std::size_t initial_rank(std::size_t i) const { return initial_rank_.at(i); }
    std::span<const double> jump_times(std::size_t i) const { return jump_times_.at(i); }
    /// All jumps of all particles, in event order.
    std::span<const Event> events() const noexcept { return events_; }

    /// X_i(t) by direct counting over last-jump times. O(N log J).
    std::size_t position_at(std::size_t i, double t) const;
    /// All positions at time t via a single PositionIndex sweep.
    std::vector<std::size_t> positions_at(double t) const;

    /// Y_C(t) = #{i : first jump <= t} / N.
    double boundary_fraction(double t) const;

    /// S(t): number of jump events in (0, t].
    std::size_t total_jumps(double t) const;
    /// s(u) = inf{s : S(s) > u}; nullopt when u >= S(horizon).
    std::optional<double> total_jumps_inverse(double u) const;

private:
    void check_time(double t) const;

    std::vector<std::vector<double>> jump_times_;
    std::vector<std::size_t> class_of_;
    std::vector<std::size_t> initial_rank_;
    std::size_t n_classes_;
    double horizon_;
    std::vector<Event> events_;
    std::vector<double> event_times_;
    std::vector<double> first_jumps_;  // sorted; particles that ever jump
};

/// Fenwick-backed position oracle at a movable query time.
///
/// One slot per event marks each particle's most recent jump; a second tree
/// over initial ranks marks particles that have jumped at least once.
/// advance_to is amortized O(log E) per event crossed; position is O(log E).
class PositionIndex {
public:
    explicit PositionIndex(const ParticleSystem& system);

    /// Moves the query time to t. Moving backwards rebuilds from t = 0.
    void advance_to(double t);
    double time() const noexcept { return time_; }

    std::size_t position(std::size_t i) const;
    std::size_t jumped_count() const noexcept { return jumped_; }
    /// S(t) at the current query time.
    std::size_t applied_events() const noexcept { return next_event_; }
    /// Event-order index of particle i's latest jump, or -1.
    std::ptrdiff_t last_event(std::size_t i) const { return last_event_.at(i); }

private:
    void reset();

    const ParticleSystem* system_;
    double time_ = 0.0;
    std::size_t next_event_ = 0;
    std::size_t jumped_ = 0;
    std::vector<std::ptrdiff_t> last_event_;
    FenwickTree latest_;
    FenwickTree jumped_by_rank_;
};

/// Class sizes by largest-remainder rounding of r_α N (ties to lower α).
std::vector<std::size_t> class_counts(std::size_t n, const MixtureSpec& mixture);

/// Class of the particle at each initial rank (index 0 is rank 1).
/// Proportional interleaves by largest running deficit; Blocks fills
/// contiguous rank ranges in class order.
std::vector<std::size_t> assign_classes(std::size_t n, const MixtureSpec& mixture, Layout layout);

/// Samples a system whose particle i starts at rank i+1 with class
/// class_of[i] and intensity particle_specs[i]. Streams are drawn in
/// particle order from `rng`.
ParticleSystem sample_system(std::span<const IntensitySpec> particle_specs, std::vector<std::size_t> class_of,
                             std::size_t n_classes, double horizon, Rng& rng);

/// N particles drawn from a mixture with the given initial layout.
ParticleSystem init_system(std::size_t n, const MixtureSpec& mixture, Layout layout, double horizon, Rng& rng);

struct EmpiricalSnapshot {
    double time;
    std::vector<double> scaled_positions;  // Y_i = (X_i - 1) / N
    double boundary_fraction;
    std::vector<double> grid;
    std::vector<std::vector<double>> class_tails;  // [alpha][grid index]
};

/// U_α(y,t) = #{i in class α : Y_i(t) >= y} / N for each grid y.
std::vector<std::vector<double>> empirical_tail(const ParticleSystem& system, double t, std::span<const double> grid);

/// Snapshots at non-decreasing times, sharing one position sweep.
std::vector<EmpiricalSnapshot> take_snapshots(const ParticleSystem& system, std::span<const double> times,
                                              std::span<const double> grid);

}  // namespace srp
