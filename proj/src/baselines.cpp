#include "catqfi/baselines.hpp"

#include <cmath>
#include <numbers>

namespace catqfi {

const char* to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::noon: return "noon";
    case BaselineKind::tmsv: return "tmsv";
    case BaselineKind::sql: return "sql";
  }
  return "unknown";
}

BaselineKind baseline_from_string(const std::string& name) {
  if (name == "noon") return BaselineKind::noon;
  if (name == "tmsv") return BaselineKind::tmsv;
  if (name == "sql") return BaselineKind::sql;
  fail(ErrorKind::parameter, "unknown baseline '" + name + "' (expected noon, tmsv or sql)");
}

FockVector noon_vector(int k) {
  if (k < 1) fail(ErrorKind::parameter, "NOON photon number must be >= 1");
  if (k > kMaxPhotonsPerMode) fail(ErrorKind::truncation, "NOON photon number above the cutoff cap");
  auto v = zero_vector(FockBasis::axes(k));
  v.amps[v.basis->find({k, 0})] = (1.0 / std::numbers::sqrt2);
  v.amps[v.basis->find({0, k})] = (1.0 / std::numbers::sqrt2);
  return v;
}

QfiResult noon_qfi(int k, double eta) {
  require_transmission(eta);
  const auto v = noon_vector(k);
  if (eta == 1.0) {
    auto r = make_qfi_result(static_cast<double>(k) * k, QfiMethod::pure_eq5);
    r.diagnostics["n_av"] = 0.5 * k;
    return r;
  }
  auto r = qfi_mixed_numeric(MatrixFamily([&](double phi) {
                               return loss_channel_all_modes(projector(apply_phase_shift(v, phi, 1)), eta);
                             }),
                             0.0);
  r.diagnostics["n_av"] = 0.5 * k;
  return r;
}

double tmsv_nav(double r) { return std::pow(std::sinh(r), 2); }

double tmsv_r_for_nav(double n_av) {
  if (!(n_av > 0.0)) fail(ErrorKind::parameter, "TMSV needs n_av > 0");
  return std::asinh(std::sqrt(n_av));
}

namespace {

// Truncated, renormalized TMSV amplitudes tanh^n r / cosh r.
std::vector<double> tmsv_amplitudes(double r, int n_max) {
  const double t = std::tanh(r);
  std::vector<double> c(static_cast<std::size_t>(n_max) + 1);
  double norm = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    c[n] = std::pow(t, n) / std::cosh(r);
    norm += c[n] * c[n];
  }
  for (auto& v : c) v /= std::sqrt(norm);
  return c;
}

}  // namespace

int tmsv_n_max(double r, double eta) {
  if (!(r > 0.0)) fail(ErrorKind::parameter, "squeeze parameter r must be > 0");
  const double nbar = tmsv_nav(r);
  const int base = static_cast<int>(std::ceil(20.0 * nbar + 20.0));
  if (base > kMaxPhotonsPerMode)
    fail(ErrorKind::truncation, "TMSV thermal tail needs n_max=" + std::to_string(base) + " above the cap");
  if (eta < 1.0) return base;
  // Lossless: p_n = (1 - t) t^n with t = tanh^2 r.
  const double t = std::pow(std::tanh(r), 2);
  const double variance = nbar * (nbar + 1.0);
  for (int n_max = base; n_max <= kMaxPhotonsPerMode; ++n_max) {
    double tail = 0.0;
    for (int n = n_max + 1;; ++n) {
      const double term = (1.0 - t) * std::pow(t, n) * n * n;
      tail += term;
      if (term < 1e-30 * (tail + 1e-300) || n > 100000) break;
    }
    if (tail < 1e-12 * variance) return n_max;
  }
  fail(ErrorKind::truncation, "lossless TMSV variance needs more than 200 photons per mode");
}

QfiResult tmsv_qfi(double r, double eta) {
  require_transmission(eta);
  const int n_max = tmsv_n_max(r, eta);
  const auto c = tmsv_amplitudes(r, n_max);
  QfiResult res;
  if (eta == 1.0) {
    std::vector<FockIndex> states;
    for (int n = 0; n <= n_max; ++n) states.push_back({n, n});
    auto v = zero_vector(FockBasis::from_states(2, n_max, std::move(states)));
    for (int n = 0; n <= n_max; ++n) v.amps[v.basis->find({n, n})] = c[n];
    res = make_qfi_result(pure_variance_qfi(v, [](FockIndex s) { return static_cast<double>(s.b); }),
                          QfiMethod::pure_eq5);
  } else {
    // Loss keeps n_a - n_b = delta fixed between bra and ket blocks, so the
    // output is block diagonal in delta.
    std::vector<std::vector<double>> w(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
      w[n].resize(static_cast<std::size_t>(n) + 1);
      for (int m = 0; m <= n; ++m) w[n][m] = loss_kraus_weight(n, m, eta);
    }
    std::vector<FockMatrix> blocks;
    for (int delta = -n_max; delta <= n_max; ++delta) {
      std::vector<FockIndex> states;
      for (int a = std::max(0, delta); a <= n_max && a - delta <= n_max; ++a) states.push_back({a, a - delta});
      auto basis = FockBasis::from_states(2, n_max, states);
      const auto dim = static_cast<Eigen::Index>(states.size());
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        const auto [a, b] = states[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i; j < dim; ++j) {
          const auto [ap, bp] = states[static_cast<std::size_t>(j)];
          double acc = 0.0;
          // Photons lost from mode a: m1; the source pair is (n, n).
          for (int m1 = 0; a + m1 <= n_max && ap + m1 <= n_max; ++m1) {
            const int n = a + m1;
            const int np = ap + m1;
            if (n < b || np < bp) continue;
            acc += c[n] * c[np] * w[n][m1] * w[n][n - b] * w[np][m1] * w[np][np - bp];
          }
          m(i, j) = acc;
          m(j, i) = acc;
        }
      }
      blocks.push_back({basis, m});
    }
    res = qfi_mixed_numeric(BlockFamily([&](double phi) {
                              std::vector<FockMatrix> out;
                              out.reserve(blocks.size());
                              for (const auto& b : blocks) out.push_back(apply_phase_generator(b, phi, 0.0, 1.0));
                              return out;
                            }),
                            0.0);
  }
  res.diagnostics["n_av"] = tmsv_nav(r);
  res.diagnostics["n_max"] = n_max;
  return res;
}

double sql_bound(double n_av) {
  if (!(n_av > 0.0)) fail(ErrorKind::parameter, "SQL needs n_av > 0");
  return 1.0 / std::sqrt(n_av);
}

}  // namespace catqfi
