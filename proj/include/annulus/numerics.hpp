#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

namespace annulus {

inline constexpr double pi = std::numbers::pi;

// Error families. The CLI maps ParameterError to exit code 2.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace num {

inline bool finite(double v) { return std::isfinite(v); }

inline double clamp_unit(double c) { return c < -1.0 ? -1.0 : (c > 1.0 ? 1.0 : c); }

// Root of f on [lo, hi] given a sign change. Bisection keeps the bracket,
// a secant step is tried first and accepted only when it lands inside.
template <class F>
double find_root(F&& f, double lo, double hi, double tol = 1e-13, int max_iter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw RegimeError("find_root: no sign change on bracket");
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    double s = hi - fhi * (hi - lo) / (fhi - flo);
    // alternate: secant on even steps if it is well inside the bracket
    double x = (it % 2 == 0 && s > lo && s < hi) ? s : mid;
    double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0) == (flo > 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
  }
  return 0.5 * (lo + hi);
}

struct MinResult {
  double x;
  double fx;
  int evaluations;
};

// Golden-section search for a minimum of f on [lo, hi].
template <class F>
MinResult golden_min(F&& f, double lo, double hi, double tol = 1e-12) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo);
  double d = lo + g * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
    ++evals;
    if (evals > 400) break;
  }
  double x = fc < fd ? c : d;
  return {x, fc < fd ? fc : fd, evals};
}

// Round to a fixed number of significant digits (used for printed output).
inline double round_sig(double v, int digits = 10) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
  return std::strtod(buf, nullptr);
}

inline std::string fmt_sig(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// std::mt19937_64 is bit-exact across standard libraries; the distributions are
// not, so uniform draws are built from raw bits here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  // uniform in [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // uniform integer in [lo, hi]
  long long integer(long long lo, long long hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(eng_() % span);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace num
}  // namespace annulus
