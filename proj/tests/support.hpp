#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qvolterra/operator.hpp"
#include "qvolterra/simplex.hpp"
#include "qvolterra/skew.hpp"

namespace qvtest {

using namespace qvolterra;

// Random valid Dense spec. Entries are multiples of 2^-52 in [-1, 1] so that
// the tensor roundtrip (a -> (1+a)/2 -> a) is exact.
inline SkewSpec random_dense(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> d(-(std::int64_t{1} << 52), std::int64_t{1} << 52);
  std::vector<double> a(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::ldexp(static_cast<double>(d(rng)), -52);
      a[k * n + i] = v;
      a[i * n + k] = -v;
    }
  }
  return SkewSpec::dense(n, std::move(a));
}

// Pure spec: every off-diagonal entry is +-1.
inline SkewSpec random_pure(std::size_t n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<double> a(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = coin(rng) ? 1.0 : -1.0;
      a[k * n + i] = v;
      a[i * n + k] = -v;
    }
  }
  return SkewSpec::dense(n, std::move(a));
}

inline SkewSpec rps() { return SkewSpec::dense({{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}}); }

// Reference evaluation straight from the formula in long double, over a
// dense index range 1..n. Shares no code with the library.
inline std::vector<long double> oracle_volterra(const SkewSpec& s, const SimplexPoint& x, std::size_t n) {
  std::vector<long double> out(n + 1, 0.0L);
  for (std::size_t k = 1; k <= n; ++k) {
    long double acc = 0.0L;
    for (std::size_t i = 1; i <= n; ++i) acc += static_cast<long double>(s.entry(k, i)) * x[i];
    out[k] = x[k] * (1.0L + acc);
  }
  return out;
}

}  // namespace qvtest
