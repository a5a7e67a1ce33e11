#pragma once

#include "scalar.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace dirac {

using ProbePoint = std::vector<Scalar>;

/// Seeded source of rational probe points: numerators uniform in {-9..9}, denominators in {1,2,3}.
/// The mapping from generator output to values is spelled out so streams are identical across
/// standard library implementations.
class ProbeSampler {
public:
  explicit ProbeSampler(std::uint64_t seed = 0) : rng_(seed) {}

  Scalar coordinate() {
    long num = static_cast<long>(rng_() % 19) - 9;
    long den = static_cast<long>(rng_() % 3) + 1;
    return Scalar(num, den);
  }
  ProbePoint point(std::size_t n) {
    ProbePoint p;
    p.reserve(n);
    for (std::size_t k = 0; k < n; ++k) p.push_back(coordinate());
    return p;
  }
  std::vector<ProbePoint> points(std::size_t n, std::size_t count) {
    std::vector<ProbePoint> v;
    for (std::size_t k = 0; k < count; ++k) v.push_back(point(n));
    return v;
  }
  /// Small nonzero integer, used for auxiliary directions.
  long small_nonzero() {
    long v = static_cast<long>(rng_() % 9) + 1;
    return (rng_() & 1u) ? v : -v;
  }
  std::uint64_t next() { return rng_(); }

private:
  std::mt19937_64 rng_;
};

inline std::string point_str(const ProbePoint &p) {
  std::string s = "(";
  for (std::size_t k = 0; k < p.size(); ++k) s += (k ? ", " : "") + p[k].str();
  return s + ")";
}

} // namespace dirac
