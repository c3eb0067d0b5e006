#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lpred/core.hpp"

namespace lpred {

/// The stored keys sharing one prefix, as a sorted array of their low bits.
/// Buckets are threaded into a doubly linked list in prefix order by their
/// owner; the links are non-owning.
struct Bucket {
    std::uint64_t prefix = 0;
    std::vector<std::uint64_t> lows;
    Bucket* prev = nullptr;
    Bucket* next = nullptr;

    std::size_t size() const noexcept { return lows.size(); }
    bool empty() const noexcept { return lows.empty(); }

    /// False if already present.
    bool insert(std::uint64_t low);
    /// False if absent. The owner must drop the bucket once it is empty.
    bool erase(std::uint64_t low);

    /// Largest low strictly below x; probe count goes to m.bucket_probes.
    std::optional<std::uint64_t> pred(std::uint64_t x, OpMetrics& m) const;
    /// Smallest low strictly above x.
    std::optional<std::uint64_t> succ(std::uint64_t x, OpMetrics& m) const;

    // Precondition: nonempty.
    std::uint64_t min() const noexcept { return lows.front(); }
    std::uint64_t max() const noexcept { return lows.back(); }
};

}  // namespace lpred
