#pragma once

#include <span>

namespace cda::sweep {

enum class UMethod { Exact, Normal };

struct UTestResult {
  double u{0.0};           // pairs with a > b, ties counting one half
  double p_two_sided{1.0};
  double p_greater{1.0};   // alternative: a tends to exceed b
  double p_less{1.0};      // alternative: b tends to exceed a
  UMethod method{UMethod::Exact};
  bool degenerate{false};  // pooled sample has no spread; p fixed at 1
};

/// Largest pooled size handled by full enumeration.
inline constexpr int kExactUMaxN = 16;

/// Wilcoxon-Mann-Whitney rank-sum test with midranks. Exact permutation
/// p-values up to kExactUMaxN pooled observations, otherwise the normal
/// approximation with tie and continuity corrections. Throws
/// std::invalid_argument if either sample is empty.
UTestResult u_test(std::span<const double> a, std::span<const double> b);

/// Forces the normal approximation.
UTestResult u_test_normal(std::span<const double> a, std::span<const double> b);

}  // namespace cda::sweep
