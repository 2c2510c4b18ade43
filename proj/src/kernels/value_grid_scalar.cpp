#include "cda/kernels/value_grid.hpp"

#include <cstdlib>
#include <cstring>
#include <limits>

namespace cda::kernels {

double value_grid_scalar(std::span<const double> belief, std::span<const double> surplus,
                         double on_success, double on_failure, std::span<double> out) {
  double best = -std::numeric_limits<double>::infinity();
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double b = belief[i];
    const double hit = b * (surplus[i] + on_success);
    const double miss = (1.0 - b) * on_failure;
    const double v = hit + miss;
    out[i] = v;
    if (v > best) best = v;
  }
  return best;
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

ValueGridFn value_grid_for(Isa isa) noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) return &value_grid_avx2;
#endif
  (void)isa;
  return &value_grid_scalar;
}

Isa active_isa() noexcept {
  static const Isa chosen = [] {
    const char* force = std::getenv("CDA_ARENA_SIMD");
    if (force != nullptr && std::strcmp(force, "scalar") == 0) return Isa::Scalar;
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  }();
  return chosen;
}

ValueGridFn value_grid() noexcept {
  static const ValueGridFn fn = value_grid_for(active_isa());
  return fn;
}

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace cda::kernels
