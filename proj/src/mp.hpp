#pragma once

// Extended-precision helpers for the coherent-overlap double sums. The sums
// cancel down to O(|alpha|^{2k}) from O(1) terms, so double precision is not
// enough near the number-state limit.

#include <complex>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace catqfi::mp {

using real = boost::multiprecision::cpp_bin_float_100;

struct complex {
  real re = 0;
  real im = 0;

  complex& operator+=(const complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend complex operator*(const complex& a, const complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend complex operator*(const real& s, const complex& a) { return {s * a.re, s * a.im}; }
};

inline real pi() { return boost::math::constants::pi<real>(); }

// omega^j = e^{2 pi i j/d}
inline complex root_of_unity(long j, int d) {
  const long r = ((j % d) + d) % d;
  const real theta = 2 * pi() * r / d;
  return {cos(theta), sin(theta)};
}

// e^{x (omega^j - 1)}
inline complex overlap_kernel(const real& x, long j, int d) {
  const complex w = root_of_unity(j, d);
  const real mag = exp(x * (w.re - 1));
  const real arg = x * w.im;
  return {mag * cos(arg), mag * sin(arg)};
}

}  // namespace catqfi::mp
