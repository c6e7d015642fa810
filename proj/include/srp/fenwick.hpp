#pragma once

#include <cstddef>
#include <vector>

namespace srp {

/// Binary indexed tree over 0-based slots holding counts.
class FenwickTree {
public:
    explicit FenwickTree(std::size_t n = 0) : tree_(n + 1, 0) {}

    std::size_t size() const noexcept { return tree_.size() - 1; }

    void add(std::size_t slot, long delta) {
        for (std::size_t i = slot + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
    }

    // sum over slots [0, slot)
    long prefix(std::size_t slot) const {
        long sum = 0;
        for (std::size_t i = slot; i > 0; i -= i & (~i + 1)) sum += tree_[i];
        return sum;
    }

    long total() const { return prefix(size()); }

    // sum over slots [slot, n)
    long suffix(std::size_t slot) const { return total() - prefix(slot); }

private:
    std::vector<long> tree_;
};

}  // namespace srp
