#include "cda/sweep/ratios.hpp"

#include <stdexcept>

namespace cda::sweep {

namespace {

void fill(int slot, int left, Composition& cur, std::vector<Composition>& out) {
  const auto t = static_cast<int>(cur.size());
  if (slot == t - 1) {
    cur[static_cast<std::size_t>(slot)] = left;
    out.push_back(cur);
    return;
  }
  for (int k = left; k >= 0; --k) {
    cur[static_cast<std::size_t>(slot)] = k;
    fill(slot + 1, left - k, cur, out);
  }
}

}  // namespace

std::vector<Composition> enumerate_ratios(int t, int n) {
  if (t < 1 || n < 0) throw std::invalid_argument("enumerate_ratios needs t >= 1 and n >= 0");
  std::vector<Composition> out;
  Composition cur(static_cast<std::size_t>(t), 0);
  fill(0, n, cur, out);
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > UINT64_MAX) throw std::overflow_error("binomial overflow");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t ratio_count(int t, int n) { return binomial(n + t - 1, t - 1); }

}  // namespace cda::sweep
