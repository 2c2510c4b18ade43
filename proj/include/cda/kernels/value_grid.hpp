#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Expected-value sweep over a quote-price grid, the hot loop of the GDX
// dynamic program:
//
//   out[i] = belief[i] * (surplus[i] + on_success) + (1 - belief[i]) * on_failure
//
// Every variant evaluates each element with the same operation order and no
// fused multiply-add, so results are bit-identical across variants.

namespace cda::kernels {

/// Fills `out` and returns max(out), or -inf for an empty grid.
using ValueGridFn = double (*)(std::span<const double> belief, std::span<const double> surplus,
                               double on_success, double on_failure, std::span<double> out);

enum class Isa { Scalar, Avx2 };

double value_grid_scalar(std::span<const double> belief, std::span<const double> surplus,
                         double on_success, double on_failure, std::span<double> out);

#if defined(__x86_64__) || defined(_M_X64)
double value_grid_avx2(std::span<const double> belief, std::span<const double> surplus,
                       double on_success, double on_failure, std::span<double> out);
#endif

[[nodiscard]] bool isa_available(Isa isa) noexcept;
[[nodiscard]] ValueGridFn value_grid_for(Isa isa) noexcept;

/// Best variant for this CPU, chosen once. CDA_ARENA_SIMD=scalar forces the
/// reference kernel.
[[nodiscard]] ValueGridFn value_grid() noexcept;
[[nodiscard]] Isa active_isa() noexcept;
[[nodiscard]] std::string_view isa_name(Isa isa) noexcept;

}  // namespace cda::kernels
