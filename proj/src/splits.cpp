#include "lakeice/splits.hpp"

#include <algorithm>
#include <random>

namespace lakeice {

namespace {

std::vector<Date> unique_sorted(const std::vector<Date>& dates) {
    std::vector<Date> out = dates;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<std::vector<Date>> kfold_split(const std::vector<Date>& dates, std::size_t k,
                                           std::uint64_t seed) {
    if (k < 2) throw validation_error("kfold_split: k must be >= 2");
    std::vector<Date> uniq = unique_sorted(dates);
    if (uniq.empty()) throw validation_error("kfold_split: no dates");
    if (uniq.size() < k)
        throw validation_error("kfold_split: fewer dates (" + std::to_string(uniq.size()) +
                               ") than folds (" + std::to_string(k) + ")");

    std::mt19937_64 rng(seed);
    deterministic_shuffle(uniq, rng);

    std::vector<std::vector<Date>> folds(k);
    for (std::size_t i = 0; i < uniq.size(); ++i) folds[i % k].push_back(uniq[i]);
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

InterleavedSplit interleaved_split(const std::vector<Date>& dates, std::size_t step) {
    if (step == 0) throw validation_error("interleaved_split: step must be >= 1");
    const std::vector<Date> uniq = unique_sorted(dates);
    if (uniq.empty()) throw validation_error("interleaved_split: no dates");

    InterleavedSplit split;
    for (std::size_t i = 0; i < uniq.size(); ++i) {
        const bool first = (i / step) % 2 == 0;
        (first ? split.split1 : split.split2).push_back(uniq[i]);
    }
    return split;
}

}  // namespace lakeice
