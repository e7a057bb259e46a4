#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopfharm {

using cplx = std::complex<double>;
using Point2 = cplx;

inline constexpr double kPi = std::numbers::pi;

// Cross product of two planar vectors, positive when b lies CCW of a.
inline double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

inline double dot(cplx a, cplx b) { return a.real() * b.real() + a.imag() * b.imag(); }

inline double sqr(double x) { return x * x; }

// Compensated accumulator; keeps long sums of mixed-magnitude terms stable.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw error(msg);
}

// Deterministic xorshift-based generator used anywhere the library itself
// needs random draws; tests and the CLI seed it explicitly.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed = 7) : state(seed * 2685821657736338717ULL + 1442695040888963407ULL) {
    if (state == 0) state = 0x9e3779b97f4a7c15ULL;
  }
  uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(next() % uint64_t(hi - lo + 1));
  }
};

}  // namespace hopfharm
