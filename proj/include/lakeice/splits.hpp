#pragma once

#include <cstdint>
#include <vector>

#include "lakeice/core.hpp"

namespace lakeice {

/// Partitions the unique dates into k folds with a seeded shuffle. All
/// acquisitions from the same day stay together because folds are sets of
/// dates. The same seed always produces the same folds.
std::vector<std::vector<Date>> kfold_split(const std::vector<Date>& dates, std::size_t k,
                                           std::uint64_t seed);

/// Temporal interleaving: runs of `step` consecutive available dates
/// alternate between the two splits (d1,d2 -> split1; d3,d4 -> split2; ...).
struct InterleavedSplit {
    std::vector<Date> split1;
    std::vector<Date> split2;
};
InterleavedSplit interleaved_split(const std::vector<Date>& dates, std::size_t step = 2);

}  // namespace lakeice
