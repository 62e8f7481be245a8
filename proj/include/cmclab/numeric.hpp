#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cmclab {

/// Pairwise (cascade) summation in a fixed order, so results do not depend
/// on how callers chunk the work.
inline double pairwise_sum(std::span<const double> values)
{
    constexpr std::size_t kLeaf = 16;
    if (values.size() <= kLeaf) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& values)
{
    return pairwise_sum(std::span<const double>(values));
}

} // namespace cmclab
