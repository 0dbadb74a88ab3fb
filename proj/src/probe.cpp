#include "catqfi/probe.hpp"

#include <cmath>
#include <numbers>

#include "mp.hpp"

namespace catqfi {

double probe_norm(const CatSpec& spec) {
  return 1.0 / std::sqrt(2.0 * (1.0 + vacuum_overlap_sq(spec)));
}

double probe_nav(const CatSpec& spec) {
  const double n = probe_norm(spec);
  return n * n * cat_moments(spec).mean_n;
}

ProbeState build_probe(const CatSpec& spec) { return build_probe(spec, required_n_max(spec.x())); }

ProbeState build_probe(const CatSpec& spec, int n_max) {
  const auto cat = cat_to_fock(spec, n_max);
  const auto basis = FockBasis::axes(n_max);
  const double norm = probe_norm(spec);
  FockVector vec{basis, norm * (place_in_mode(cat, 0, basis).amps + place_in_mode(cat, 1, basis).amps)};
  return {spec, norm, probe_nav(spec), std::move(vec)};
}

FockVector swap_modes(const FockVector& v) {
  if (v.modes() != 2) fail(ErrorKind::shape, "swap_modes needs a two-mode vector");
  std::vector<FockIndex> states;
  for (const auto& s : v.basis->states()) states.push_back({s.b, s.a});
  auto basis = FockBasis::from_states(2, v.n_max(), std::move(states));
  auto out = zero_vector(basis);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& s = (*v.basis)[i];
    out.amps[basis->find({s.b, s.a})] = v.amps[i];
  }
  return out;
}

ProbeMoments probe_moments(const CatSpec& spec) {
  const int d = spec.d();
  const mp::real x = spec.x();
  // With j = q - q', both sums depend on j only:
  //   <n_b>   ~ sum omega^{-kj} x omega^j e^{x(omega^j - 1)}
  //   <n_b^2> ~ sum omega^{-kj} (x omega^j + x^2 omega^{2j}) e^{x(omega^j - 1)}
  std::vector<mp::complex> k1(d), k2(d);
  for (int j = 0; j < d; ++j) {
    const mp::complex phase = mp::root_of_unity(-static_cast<long>(spec.k()) * j, d);
    const mp::complex w = mp::root_of_unity(j, d);
    const mp::complex w2 = mp::root_of_unity(2L * j, d);
    const mp::complex base = phase * mp::overlap_kernel(x, j, d);
    k1[j] = x * (w * base);
    mp::complex lin = x * w;
    lin += (x * x) * w2;
    k2[j] = lin * base;
  }
  mp::complex s1, s2;
  for (int q = 0; q < d; ++q) {
    for (int qp = 0; qp < d; ++qp) {
      const int j = ((q - qp) % d + d) % d;
      s1 += k1[j];
      s2 += k2[j];
    }
  }
  const double n2 = std::pow(probe_norm(spec), 2);
  const double M = norm_M(spec);
  ProbeMoments m;
  m.mean_nb = n2 * static_cast<double>(s1.re) / M;
  m.mean_nb2 = n2 * static_cast<double>(s2.re) / M;
  const auto rel = [](const mp::complex& z) {
    const double re = std::abs(static_cast<double>(z.re));
    const double im = std::abs(static_cast<double>(z.im));
    return re > 0.0 ? im / re : im;
  };
  m.imag_residue = std::max(rel(s1), rel(s2));
  return m;
}

std::vector<double> PhaseAveragedProbe::mixture_weights() const {
  const double n2 = norm_N * norm_N;
  std::vector<double> w(weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    w[i] = (photons[i] == 0 ? 4.0 : 2.0) * n2 * weights[i];
    total += w[i];
  }
  for (auto& v : w) v /= total;
  return w;
}

FockMatrix PhaseAveragedProbe::density() const {
  const int n_max = photons.empty() ? 0 : photons.back();
  const auto basis = FockBasis::axes(n_max);
  const auto dim = static_cast<Eigen::Index>(basis->size());
  FockMatrix rho{basis, Eigen::MatrixXcd::Zero(dim, dim)};
  const auto w = mixture_weights();
  for (std::size_t i = 0; i < photons.size(); ++i) {
    const int n = photons[i];
    if (n == 0) {
      const long v = basis->find({0, 0});
      rho.entries(v, v) += w[i];
      continue;
    }
    const long a = basis->find({n, 0});
    const long b = basis->find({0, n});
    const double h = 0.5 * w[i];
    rho.entries(a, a) += h;
    rho.entries(b, b) += h;
    rho.entries(a, b) += h;
    rho.entries(b, a) += h;
  }
  return rho;
}

PhaseAveragedProbe phase_averaged(const CatSpec& spec) {
  const double x = spec.x();
  const int n_max = required_n_max(x);
  const double M = norm_M(spec);
  const double log_pref = 2.0 * std::log(static_cast<double>(spec.d())) - x - std::log(M);
  PhaseAveragedProbe p{spec, probe_norm(spec), {}, {}, 0.0, 0.0};
  double total = 0.0;
  for (int n = spec.k(); n <= n_max; n += spec.d()) {
    const double lt = n == 0 ? 0.0 : n * std::log(x) - std::lgamma(n + 1.0);
    p.photons.push_back(n);
    p.weights.push_back(std::exp(log_pref + lt));
    total += p.weights.back();
  }
  for (auto& w : p.weights) w /= total;
  p.renormalization = 1.0 - total;
  p.quoted_prefactor = 4.0 * p.norm_N * p.norm_N;
  return p;
}

}  // namespace catqfi
