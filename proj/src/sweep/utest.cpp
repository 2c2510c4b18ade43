#include "cda/sweep/utest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace cda::sweep {

namespace {

struct Ranked {
  std::vector<double> rank;  // midranks, a first then b
  double tie_term{0.0};      // sum of t^3 - t over tie groups
};

Ranked midranks(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> v(a.begin(), a.end());
  v.insert(v.end(), b.begin(), b.end());
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
  Ranked r;
  r.rank.assign(n, 0.0);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) r.rank[idx[k]] = mid;
    const double t = static_cast<double>(j - i + 1);
    r.tie_term += t * t * t - t;
    i = j + 1;
  }
  return r;
}

double u_from_ranks(const Ranked& r, std::size_t na) {
  double sum = 0.0;
  for (std::size_t i = 0; i < na; ++i) sum += r.rank[i];
  const double n = static_cast<double>(na);
  return sum - n * (n + 1.0) / 2.0;
}

UTestResult base(std::span<const double> a, std::span<const double> b, Ranked& r) {
  if (a.empty() || b.empty()) throw std::invalid_argument("u_test needs two non-empty samples");
  r = midranks(a, b);
  UTestResult out;
  out.u = u_from_ranks(r, a.size());
  const double n = static_cast<double>(a.size() + b.size());
  out.degenerate = r.tie_term == n * n * n - n;
  return out;
}

void normal(UTestResult& out, const Ranked& r, std::size_t na, std::size_t nb) {
  out.method = UMethod::Normal;
  const double a = static_cast<double>(na);
  const double b = static_cast<double>(nb);
  const double n = a + b;
  const double mean = a * b / 2.0;
  const double var = a * b / 12.0 * ((n + 1.0) - r.tie_term / (n * (n - 1.0)));
  const double sd = std::sqrt(var);
  const double d = out.u - mean;
  const double z2 = std::max(0.0, std::abs(d) - 0.5) / sd;
  out.p_two_sided = std::min(1.0, std::erfc(z2 / std::sqrt(2.0)));
  out.p_greater = 0.5 * std::erfc(((d - 0.5) / sd) / std::sqrt(2.0));
  out.p_less = 0.5 * std::erfc(((-d - 0.5) / sd) / std::sqrt(2.0));
}

void exact(UTestResult& out, const Ranked& r, std::size_t na, std::size_t nb) {
  out.method = UMethod::Exact;
  const std::size_t n = na + nb;
  const double shift = static_cast<double>(na) * (static_cast<double>(na) + 1.0) / 2.0;
  const double mean = static_cast<double>(na) * static_cast<double>(nb) / 2.0;
  const double dev = std::abs(out.u - mean);
  constexpr double eps = 1e-9;
  std::uint64_t total = 0, two = 0, ge = 0, le = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != static_cast<int>(na)) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) sum += r.rank[i];
    const double u = sum - shift;
    ++total;
    if (std::abs(u - mean) >= dev - eps) ++two;
    if (u >= out.u - eps) ++ge;
    if (u <= out.u + eps) ++le;
  }
  const double t = static_cast<double>(total);
  out.p_two_sided = static_cast<double>(two) / t;
  out.p_greater = static_cast<double>(ge) / t;
  out.p_less = static_cast<double>(le) / t;
}

}  // namespace

UTestResult u_test(std::span<const double> a, std::span<const double> b) {
  Ranked r;
  UTestResult out = base(a, b, r);
  if (out.degenerate) return out;
  if (static_cast<int>(a.size() + b.size()) <= kExactUMaxN)
    exact(out, r, a.size(), b.size());
  else
    normal(out, r, a.size(), b.size());
  return out;
}

UTestResult u_test_normal(std::span<const double> a, std::span<const double> b) {
  Ranked r;
  UTestResult out = base(a, b, r);
  if (out.degenerate) {
    out.method = UMethod::Normal;
    return out;
  }
  normal(out, r, a.size(), b.size());
  return out;
}

}  // namespace cda::sweep
