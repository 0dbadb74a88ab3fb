#include "catqfi/cat.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mp.hpp"

namespace catqfi {

namespace {

// Sector sums of the Poisson kernel x^n/n! over n = k (mod d), n >= n_from,
// scaled by e^{-scale}; scale is the largest log-term on the sector.
struct SectorSums {
  double scale = 0;  // log of the common factor
  double s0 = 0;     // sum t_n
  double s1 = 0;     // sum n t_n
  double s2 = 0;     // sum n^2 t_n
  double sf = 0;     // sum n(n-1) t_n
  bool empty = true;
};

double log_term(int n, double log_x) {
  return n == 0 ? 0.0 : n * log_x - std::lgamma(n + 1.0);
}

SectorSums sector_sums(int d, int k, double x, int n_from = 0) {
  SectorSums s;
  int first = k;
  while (first < n_from) first += d;
  if (x == 0.0) {
    if (first == 0) {
      s.s0 = 1.0;
      s.empty = false;
    }
    return s;
  }
  const double log_x = std::log(x);
  // The log-term peaks at n ~ x; scale by the sector maximum.
  int peak = first;
  if (x > first) peak = first + static_cast<int>(std::floor((x - first) / d)) * d;
  double scale = std::max(log_term(peak, log_x), log_term(peak + d, log_x));
  scale = std::max(scale, log_term(first, log_x));
  s.scale = scale;
  for (int n = first;; n += d) {
    const double t = std::exp(log_term(n, log_x) - scale);
    const double dn = n;
    s.s0 += t;
    s.s1 += dn * t;
    s.s2 += dn * dn * t;
    s.sf += dn * (dn - 1.0) * t;
    if (n > x && t < 1e-22 * s.s0) break;
    if (n > 100000) break;
  }
  s.empty = s.s0 == 0.0;
  return s;
}

}  // namespace

CatSpec::CatSpec(int d, int k, cplx alpha) : d_(d), k_(k), alpha_(alpha) {
  if (d < 1) fail(ErrorKind::parameter, "cat period d must be >= 1");
  if (k < 0 || k >= d) {
    fail(ErrorKind::parameter,
         "sector k=" + std::to_string(k) + " outside [0, " + std::to_string(d - 1) + "]");
  }
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    fail(ErrorKind::parameter, "alpha must be finite");
  if (alpha == cplx{} && k != 0)
    fail(ErrorKind::degenerate, "alpha = 0 with k != 0 has zero norm");
}

cplx CatSpec::omega() const { return std::polar(1.0, 2.0 * std::numbers::pi / d_); }

double sector_norm(int d, int k, double x) {
  if (d < 1 || k < 0 || k >= d || x < 0.0) fail(ErrorKind::parameter, "invalid sector");
  const auto s = sector_sums(d, k, x);
  if (s.empty) return 0.0;
  return static_cast<double>(d) * d * std::exp(-x + s.scale) * s.s0;
}

double norm_M(const CatSpec& spec) { return sector_norm(spec.d(), spec.k(), spec.x()); }

double norm_M_double_sum(const CatSpec& spec, double* imag_residue) {
  const int d = spec.d();
  const mp::real x = spec.x();
  // Kernel depends on (q - q') mod d only: omega^{-k j} e^{x(omega^j - 1)}.
  std::vector<mp::complex> kernel(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j)
    kernel[j] = mp::root_of_unity(-static_cast<long>(spec.k()) * j, d) * mp::overlap_kernel(x, j, d);
  mp::complex sum;
  for (int q = 0; q < d; ++q)
    for (int qp = 0; qp < d; ++qp) sum += kernel[((q - qp) % d + d) % d];
  if (imag_residue) *imag_residue = std::abs(static_cast<double>(sum.im));
  return static_cast<double>(sum.re);
}

CatMoments cat_moments(const CatSpec& spec) {
  CatMoments m;
  m.norm_M = norm_M(spec);
  const auto s = sector_sums(spec.d(), spec.k(), spec.x());
  m.mean_n = s.s1 / s.s0;
  m.mean_n2 = s.s2 / s.s0;
  if (m.mean_n > 0.0) {
    m.g2 = (s.sf / s.s0) / (m.mean_n * m.mean_n);
  } else {
    // alpha = 0, k = 0: vacuum. Report the small-amplitude limit.
    const auto c = sector_sums(spec.d(), spec.k(), 1e-16);
    const double mean = c.s1 / c.s0;
    m.g2 = (c.sf / c.s0) / (mean * mean);
    m.g2_is_limit = true;
  }
  m.mandel_q = m.mean_n * (m.g2 - 1.0);
  return m;
}

double fidelity_to_number_state(const CatSpec& spec) {
  const double x = spec.x();
  const int k = spec.k();
  const double M = norm_M(spec);
  const double log_num = 2.0 * std::log(static_cast<double>(spec.d())) - x +
                         (k == 0 ? 0.0 : k * std::log(x)) - std::lgamma(k + 1.0);
  return std::min(1.0, std::exp(log_num - std::log(M)));
}

double vacuum_overlap_sq(const CatSpec& spec) {
  return spec.k() == 0 ? fidelity_to_number_state(spec) : 0.0;
}

FockVector cat_to_fock(const CatSpec& spec, int n_max) {
  if (n_max < 0 || n_max > kMaxPhotonsPerMode)
    fail(ErrorKind::truncation, "n_max outside [0, " + std::to_string(kMaxPhotonsPerMode) + "]");
  const double x = spec.x();
  const auto all = sector_sums(spec.d(), spec.k(), x);
  const auto tail = sector_sums(spec.d(), spec.k(), x, n_max + 1);
  if (!tail.empty) {
    const double rel = std::exp(tail.scale - all.scale) * tail.s0 / all.s0;
    if (rel > kTailTolerance) {
      std::ostringstream os;
      os << "n_max=" << n_max << " drops sector weight " << rel << " of the cat state";
      fail(ErrorKind::truncation, os.str());
    }
  }
  auto v = zero_vector(FockBasis::full(1, n_max));
  const double log_r = x > 0.0 ? 0.5 * std::log(x) : 0.0;
  const double theta = std::arg(spec.alpha());
  // Unnormalized log-magnitudes, shifted by the sector maximum.
  for (int n = spec.k(); n <= n_max; n += spec.d()) {
    const double lm = (n == 0 ? 0.0 : n * log_r) - 0.5 * std::lgamma(n + 1.0) - 0.5 * all.scale;
    v.amps[n] = std::polar(std::exp(lm), n * theta);
  }
  return v.normalized();
}

FockVector cat_to_fock(const CatSpec& spec) { return cat_to_fock(spec, required_n_max(spec.x())); }

FockVector cat_from_coherent_sum(const CatSpec& spec, int n_max) {
  auto v = zero_vector(FockBasis::full(1, n_max));
  const int d = spec.d();
  for (int q = 0; q < d; ++q) {
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi * ((static_cast<long>(spec.k()) * q) % d) / d);
    const cplx point = spec.alpha() * std::polar(1.0, 2.0 * std::numbers::pi * q / d);
    v.amps += std::conj(w) * coherent_vector(point, n_max).amps;
  }
  return v.normalized();
}

FockVector shifted_cat(const CatSpec& spec, double phi, int n_max) {
  return cat_to_fock(spec.with_alpha(spec.alpha() * std::polar(1.0, phi)), n_max);
}

}  // namespace catqfi
