#pragma once

#include <cstdint>
#include <vector>

namespace cda::sweep {

using Composition = std::vector<int>;

/// Every way to split n slots among t strategies, in descending
/// lexicographic order (n:0:...:0 first, 0:...:0:n last).
std::vector<Composition> enumerate_ratios(int t, int n);

/// C(n, k) in 64 bits; throws std::overflow_error if it does not fit.
std::uint64_t binomial(int n, int k);

/// C(n + t - 1, t - 1).
std::uint64_t ratio_count(int t, int n);

}  // namespace cda::sweep
