#include "srp/ranking_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace srp {

ParticleSystem::ParticleSystem(std::vector<std::vector<double>> jump_times, std::vector<std::size_t> class_of,
                               std::vector<std::size_t> initial_rank, std::size_t n_classes, double horizon)
    : jump_times_(std::move(jump_times)),
      class_of_(std::move(class_of)),
      initial_rank_(std::move(initial_rank)),
      n_classes_(n_classes),
      horizon_(horizon) {
    const std::size_t n = jump_times_.size();
    if (n == 0) throw std::invalid_argument("ParticleSystem: need at least one particle");
    if (class_of_.size() != n || initial_rank_.size() != n) {
        throw std::invalid_argument("ParticleSystem: class and rank arrays must have one entry per particle");
    }
    if (!(horizon_ > 0.0)) throw std::invalid_argument("ParticleSystem: horizon must be positive");

    std::vector<bool> seen(n, false);
    for (std::size_t rank : initial_rank_) {
        if (rank < 1 || rank > n || seen[rank - 1]) {
            throw std::invalid_argument("ParticleSystem: initial ranks must be a permutation of 1..N");
        }
        seen[rank - 1] = true;
    }
    for (std::size_t c : class_of_) {
        if (c >= n_classes_) throw std::invalid_argument("ParticleSystem: class index out of range");
    }

    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& times = jump_times_[i];
        for (std::size_t j = 0; j < times.size(); ++j) {
            if (!(times[j] > 0.0) || times[j] > horizon_ || (j > 0 && !(times[j] > times[j - 1]))) {
                throw std::invalid_argument("ParticleSystem: jump times of particle " + std::to_string(i) +
                                            " must be strictly increasing in (0, horizon]");
            }
        }
        total += times.size();
        if (!times.empty()) first_jumps_.push_back(times.front());
    }
    std::sort(first_jumps_.begin(), first_jumps_.end());

    events_.reserve(total);
    for (std::size_t i = 0; i < n; ++i) {
        for (double t : jump_times_[i]) events_.push_back({t, i});
    }
    std::sort(events_.begin(), events_.end());
    event_times_.reserve(total);
    for (const auto& e : events_) event_times_.push_back(e.time);
}

void ParticleSystem::check_time(double t) const {
    if (!(t >= 0.0) || t > horizon_) {
        throw std::out_of_range("query time " + std::to_string(t) + " outside [0, horizon]");
    }
}

std::size_t ParticleSystem::position_at(std::size_t i, double t) const {
    check_time(t);
    const std::size_t n = size();
    if (i >= n) throw std::out_of_range("position_at: particle index out of range");

    // Last jump of particle k at or before t, or nullopt.
    auto last_jump = [&](std::size_t k) -> std::optional<double> {
        const auto& times = jump_times_[k];
        auto it = std::upper_bound(times.begin(), times.end(), t);
        if (it == times.begin()) return std::nullopt;
        return *(it - 1);
    };

    const auto own = last_jump(i);
    std::size_t count = 0;
    if (!own) {
        for (std::size_t k = 0; k < n; ++k) {
            if (initial_rank_[k] > initial_rank_[i] && last_jump(k)) ++count;
        }
        return initial_rank_[i] + count;
    }
    const Event mine{*own, i};
    for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        if (const auto other = last_jump(k); other && mine < Event{*other, k}) ++count;
    }
    return 1 + count;
}

std::vector<std::size_t> ParticleSystem::positions_at(double t) const {
    check_time(t);
    PositionIndex index(*this);
    index.advance_to(t);
    std::vector<std::size_t> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = index.position(i);
    return out;
}

double ParticleSystem::boundary_fraction(double t) const {
    check_time(t);
    const auto jumped = std::upper_bound(first_jumps_.begin(), first_jumps_.end(), t) - first_jumps_.begin();
    return static_cast<double>(jumped) / static_cast<double>(size());
}

std::size_t ParticleSystem::total_jumps(double t) const {
    check_time(t);
    return static_cast<std::size_t>(std::upper_bound(event_times_.begin(), event_times_.end(), t) -
                                    event_times_.begin());
}

std::optional<double> ParticleSystem::total_jumps_inverse(double u) const {
    if (u < 0.0) return 0.0;
    if (u >= static_cast<double>(event_times_.size())) return std::nullopt;
    return event_times_[static_cast<std::size_t>(std::floor(u))];
}

// ---------------------------------------------------------------------------

PositionIndex::PositionIndex(const ParticleSystem& system) : system_(&system) { reset(); }

void PositionIndex::reset() {
    time_ = 0.0;
    next_event_ = 0;
    jumped_ = 0;
    last_event_.assign(system_->size(), -1);
    latest_ = FenwickTree(system_->events().size());
    jumped_by_rank_ = FenwickTree(system_->size());
}

void PositionIndex::advance_to(double t) {
    if (t < time_) reset();
    const auto events = system_->events();
    while (next_event_ < events.size() && events[next_event_].time <= t) {
        const std::size_t p = events[next_event_].particle;
        if (last_event_[p] >= 0) {
            latest_.add(static_cast<std::size_t>(last_event_[p]), -1);
        } else {
            jumped_by_rank_.add(system_->initial_rank(p) - 1, 1);
            ++jumped_;
        }
        latest_.add(next_event_, 1);
        last_event_[p] = static_cast<std::ptrdiff_t>(next_event_);
        ++next_event_;
    }
    time_ = t;
}

std::size_t PositionIndex::position(std::size_t i) const {
    const std::ptrdiff_t last = last_event_.at(i);
    if (last < 0) {
        const std::size_t rank = system_->initial_rank(i);
        // jumped particles that started below rank
        return rank + static_cast<std::size_t>(jumped_by_rank_.suffix(rank));
    }
    return 1 + static_cast<std::size_t>(latest_.suffix(static_cast<std::size_t>(last) + 1));
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> class_counts(std::size_t n, const MixtureSpec& mixture) {
    const std::size_t k = mixture.size();
    std::vector<std::size_t> counts(k);
    std::vector<double> remainder(k);
    std::size_t assigned = 0;
    for (std::size_t a = 0; a < k; ++a) {
        const double quota = mixture[a].weight * static_cast<double>(n);
        counts[a] = static_cast<std::size_t>(std::floor(quota));
        remainder[a] = quota - static_cast<double>(counts[a]);
        assigned += counts[a];
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t j = 0; assigned < n; ++j, ++assigned) ++counts[order[j % k]];
    return counts;
}

std::vector<std::size_t> assign_classes(std::size_t n, const MixtureSpec& mixture, Layout layout) {
    const std::vector<std::size_t> counts = class_counts(n, mixture);
    std::vector<std::size_t> by_rank;
    by_rank.reserve(n);
    if (layout == Layout::Blocks) {
        for (std::size_t a = 0; a < counts.size(); ++a) {
            if (counts[a] == 0) {
                throw std::invalid_argument("init_system: Blocks layout needs at least one particle per class");
            }
            by_rank.insert(by_rank.end(), counts[a], a);
        }
        return by_rank;
    }
    std::vector<std::size_t> placed(counts.size(), 0);
    const double nd = static_cast<double>(n);
    for (std::size_t rank = 1; rank <= n; ++rank) {
        std::size_t best = 0;
        double best_deficit = -1e300;
        for (std::size_t a = 0; a < counts.size(); ++a) {
            const double deficit =
                static_cast<double>(counts[a]) * static_cast<double>(rank) / nd - static_cast<double>(placed[a]);
            if (placed[a] < counts[a] && deficit > best_deficit) {
                best = a;
                best_deficit = deficit;
            }
        }
        ++placed[best];
        by_rank.push_back(best);
    }
    return by_rank;
}

ParticleSystem sample_system(std::span<const IntensitySpec> particle_specs, std::vector<std::size_t> class_of,
                             std::size_t n_classes, double horizon, Rng& rng) {
    const std::size_t n = particle_specs.size();
    std::vector<std::vector<double>> jumps(n);
    for (std::size_t i = 0; i < n; ++i) jumps[i] = sample_jump_times(particle_specs[i], horizon, rng);
    std::vector<std::size_t> ranks(n);
    std::iota(ranks.begin(), ranks.end(), 1);
    return ParticleSystem(std::move(jumps), std::move(class_of), std::move(ranks), n_classes, horizon);
}

ParticleSystem init_system(std::size_t n, const MixtureSpec& mixture, Layout layout, double horizon, Rng& rng) {
    if (n == 0) throw std::invalid_argument("init_system: N must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("init_system: horizon must be positive");
    std::vector<std::size_t> class_of = assign_classes(n, mixture, layout);
    std::vector<IntensitySpec> specs;
    specs.reserve(n);
    for (std::size_t c : class_of) specs.push_back(mixture[c].spec);
    return sample_system(specs, std::move(class_of), mixture.size(), horizon, rng);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<double>> tails_from_positions(const ParticleSystem& system,
                                                      const std::vector<std::size_t>& positions,
                                                      std::span<const double> grid) {
    const std::size_t n = system.size();
    const double nd = static_cast<double>(n);
    // Y_i >= y  <=>  X_i >= ceil(y N) + 1, so count positions per class.
    std::vector<std::vector<std::size_t>> sorted(system.n_classes());
    for (std::size_t i = 0; i < n; ++i) sorted[system.class_of(i)].push_back(positions[i]);
    for (auto& v : sorted) std::sort(v.begin(), v.end());

    std::vector<std::vector<double>> tails(system.n_classes(), std::vector<double>(grid.size(), 0.0));
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (!(grid[g] >= 0.0 && grid[g] < 1.0)) throw std::invalid_argument("empirical_tail: grid values must lie in [0,1)");
        for (std::size_t a = 0; a < sorted.size(); ++a) {
            const auto& v = sorted[a];
            // count Y = (X-1)/N >= y
            auto it = std::partition_point(v.begin(), v.end(), [&](std::size_t x) {
                return static_cast<double>(x - 1) / nd < grid[g];
            });
            tails[a][g] = static_cast<double>(v.end() - it) / nd;
        }
    }
    return tails;
}

}  // namespace

std::vector<std::vector<double>> empirical_tail(const ParticleSystem& system, double t, std::span<const double> grid) {
    return tails_from_positions(system, system.positions_at(t), grid);
}

std::vector<EmpiricalSnapshot> take_snapshots(const ParticleSystem& system, std::span<const double> times,
                                              std::span<const double> grid) {
    PositionIndex index(system);
    std::vector<EmpiricalSnapshot> out;
    out.reserve(times.size());
    const double nd = static_cast<double>(system.size());
    std::vector<std::size_t> positions(system.size());
    for (double t : times) {
        system.boundary_fraction(t);  // range check
        index.advance_to(t);
        EmpiricalSnapshot snap;
        snap.time = t;
        snap.scaled_positions.resize(system.size());
        for (std::size_t i = 0; i < system.size(); ++i) {
            positions[i] = index.position(i);
            snap.scaled_positions[i] = static_cast<double>(positions[i] - 1) / nd;
        }
        snap.boundary_fraction = system.boundary_fraction(t);
        snap.grid.assign(grid.begin(), grid.end());
        snap.class_tails = tails_from_positions(system, positions, grid);
        out.push_back(std::move(snap));
    }
    return out;
}

}  // namespace srp
