#include "catqfi/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace catqfi {

namespace {

cplx root(long j, int d) {
  const long r = ((j % d) + d) % d;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / d);
}

// Coherent vectors |alpha sqrt(eta) omega^q e^{i phi}>, q = 0..d-1.
std::vector<FockVector> ring(const CatSpec& spec, double eta, double phi, int n_max) {
  std::vector<FockVector> out;
  const cplx base = spec.alpha() * std::sqrt(eta) * std::polar(1.0, phi);
  for (int q = 0; q < spec.d(); ++q) out.push_back(coherent_vector(base * root(q, spec.d()), n_max));
  return out;
}

// sum_{q,q'} coef(q - q' mod d) u_q v_q'^dag
Eigen::MatrixXcd ring_sum(const std::vector<Eigen::VectorXcd>& u,
                          const std::vector<Eigen::VectorXcd>& v,
                          const std::vector<cplx>& coef) {
  const int d = static_cast<int>(u.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(u[0].size(), v[0].size());
  for (int q = 0; q < d; ++q)
    for (int qp = 0; qp < d; ++qp) out.noalias() += coef[((q - qp) % d + d) % d] * u[q] * v[qp].adjoint();
  return out;
}

// omega^{k(q'-q)} as a function of j = q - q'
std::vector<cplx> sector_phase(int d, int k) {
  std::vector<cplx> c(d);
  for (int j = 0; j < d; ++j) c[j] = root(-static_cast<long>(k) * j, d);
  return c;
}

std::vector<Eigen::VectorXcd> in_mode(const std::vector<FockVector>& vs, int mode, const BasisPtr& basis) {
  std::vector<Eigen::VectorXcd> out;
  for (const auto& v : vs) out.push_back(place_in_mode(v, mode, basis).amps);
  return out;
}

FockVector two_mode_pair(const FockVector& left, const FockVector& right, double sign, const BasisPtr& basis) {
  FockVector v{basis, place_in_mode(left, 0, basis).amps + sign * place_in_mode(right, 1, basis).amps};
  return v.normalized();
}

FockVector phase_derivative(const FockVector& v) {
  FockVector out = v;
  for (std::size_t i = 0; i < v.size(); ++i) out.amps[i] *= cplx(0.0, (*v.basis)[i].b);
  return out;
}

}  // namespace

void require_transmission(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) fail(ErrorKind::parameter, "transmission eta must lie in (0, 1]");
}

FockMatrix lossy_cat_exact(const CatSpec& spec, double eta) {
  require_transmission(eta);
  const int n_max = required_n_max(spec.x());
  const int d = spec.d();
  const double lost = spec.x() * (1.0 - eta);
  auto coef = sector_phase(d, spec.k());
  for (int j = 0; j < d; ++j) coef[j] *= std::exp((root(j, d) - 1.0) * lost);
  std::vector<Eigen::VectorXcd> vs;
  for (const auto& v : ring(spec, eta, 0.0, n_max)) vs.push_back(v.amps);
  FockMatrix rho{FockBasis::full(1, n_max), ring_sum(vs, vs, coef)};
  rho.entries /= rho.trace();
  return rho;
}

WeakLossWeights weak_loss_weights(const CatSpec& spec, double eta) {
  require_transmission(eta);
  const double lost = spec.x() * (1.0 - eta);
  const double xe = spec.x() * eta;
  WeakLossWeights w;
  w.a = (1.0 - lost) * sector_norm(spec.d(), spec.k(), xe);
  w.b = lost * sector_norm(spec.d(), spec.lowered_k(), xe);
  if (!(w.a > 0.0)) {
    fail(ErrorKind::domain, "weak-loss form needs |alpha|^2 (1 - eta) < 1 (got " +
                                std::to_string(lost) + ")");
  }
  return w;
}

FockMatrix lossy_cat_weak(const CatSpec& spec, double eta) {
  const auto w = weak_loss_weights(spec, eta);
  const int n_max = required_n_max(spec.x());
  const cplx a = spec.alpha() * std::sqrt(eta);
  const auto upper = cat_to_fock(spec.with_alpha(a), n_max);
  const double t = w.a + w.b;
  Eigen::MatrixXcd m = (w.a / t) * upper.amps * upper.amps.adjoint();
  if (w.b > 0.0) {
    const auto lower = cat_to_fock(spec.lowered().with_alpha(a), n_max);
    m += (w.b / t) * lower.amps * lower.amps.adjoint();
  }
  return {upper.basis, m};
}

FockMatrix lossy_probe_paper_exact(const CatSpec& spec, double eta, double phi, int n_max) {
  require_transmission(eta);
  const int d = spec.d();
  const auto basis = FockBasis::axes(n_max);
  const auto a = in_mode(ring(spec, eta, 0.0, n_max), 0, basis);
  const auto b = in_mode(ring(spec, eta, phi, n_max), 1, basis);
  const double lost = spec.x() * (1.0 - eta);
  const double pre = std::pow(probe_norm(spec), 2) / norm_M(spec);

  const auto phase = sector_phase(d, spec.k());
  std::vector<cplx> diag(d), cross(d);
  for (int j = 0; j < d; ++j) {
    diag[j] = pre * phase[j] * std::exp((root(j, d) - 1.0) * lost);
    cross[j] = pre * phase[j] * std::exp(-lost);
  }
  Eigen::MatrixXcd m = ring_sum(a, a, diag) + ring_sum(b, b, diag);
  m += ring_sum(a, b, cross) + ring_sum(b, a, cross);
  return {basis, m};
}

FockMatrix lossy_probe_paper_weak(const CatSpec& spec, double eta, double phi, int n_max) {
  require_transmission(eta);
  const int d = spec.d();
  const auto basis = FockBasis::axes(n_max);
  const auto a = in_mode(ring(spec, eta, 0.0, n_max), 0, basis);
  const auto b = in_mode(ring(spec, eta, phi, n_max), 1, basis);
  const double lost = spec.x() * (1.0 - eta);
  const double pre = std::pow(probe_norm(spec), 2) / norm_M(spec);

  const auto upper = sector_phase(d, spec.k());
  const auto lower = sector_phase(d, spec.lowered_k());
  std::vector<cplx> c1(d), c2(d), c3(d);
  for (int j = 0; j < d; ++j) {
    c1[j] = pre * (1.0 - lost) * upper[j];
    c2[j] = pre * lost * lower[j];
    c3[j] = pre * std::exp(-lost) * upper[j];
  }
  Eigen::MatrixXcd m = ring_sum(a, a, c1) + ring_sum(b, b, c1);
  m += ring_sum(a, a, c2) + ring_sum(b, b, c2);
  m += ring_sum(a, b, c3) + ring_sum(b, a, c3);
  m /= m.trace();
  return {basis, m};
}

FockMatrix lossy_probe_oracle(const CatSpec& spec, double eta, double phi, int n_max) {
  require_transmission(eta);
  const auto probe = build_probe(spec, n_max);
  const auto shifted = apply_phase_shift(probe.vec, phi, 1);
  const auto out = loss_channel_all_modes(projector(shifted), eta);
  return embed(out, FockBasis::axes(n_max));
}

PaperSpectrum paper_spectrum(const CatSpec& spec, double eta, double phi, int n_max) {
  require_transmission(eta);
  PaperSpectrum s;
  const double x = spec.x();
  const double lost = x * (1.0 - eta);
  const cplx a = spec.alpha() * std::sqrt(eta);
  const CatSpec up = spec.with_alpha(a);
  const double M = norm_M(spec);
  const double v0 = vacuum_overlap_sq(spec);
  const double m_up = norm_M(up);
  const double v_up = vacuum_overlap_sq(up);
  const int k_low = spec.lowered_k();
  const double m_low = sector_norm(spec.d(), k_low, x * eta);
  const double v_low = (k_low == 0 && m_low > 0.0) ? static_cast<double>(spec.d()) * spec.d() * std::exp(-x * eta) / m_low : 0.0;

  s.e[0] = m_up / M * (1.0 + v_up) / (1.0 + v0) * (1.0 - lost + std::exp(-lost)) / 2.0;
  s.e[1] = m_up / M * (1.0 - v_up) / (1.0 + v0) * (1.0 - lost - std::exp(-lost)) / 2.0;
  s.e[2] = m_low / M * (1.0 + v_low) / (1.0 + v0) * lost / 2.0;
  s.e[3] = m_low / M * (1.0 - v_low) / (1.0 + v0) * lost / 2.0;
  const double total = s.e[0] + s.e[1] + s.e[2] + s.e[3];
  for (int i = 0; i < 4; ++i) s.lambda[i] = s.e[i] / total;
  s.min_lambda = *std::min_element(s.lambda.begin(), s.lambda.end());

  const auto basis = FockBasis::axes(n_max);
  const auto c_up = cat_to_fock(up, n_max);
  const auto c_up_phi = shifted_cat(up, phi, n_max);
  s.vectors[0] = two_mode_pair(c_up, c_up_phi, +1.0, basis);
  s.vectors[1] = two_mode_pair(c_up, c_up_phi, -1.0, basis);
  if (m_low > 0.0) {
    const CatSpec low = spec.lowered().with_alpha(a);
    const auto c_low = cat_to_fock(low, n_max);
    const auto c_low_phi = shifted_cat(low, phi, n_max);
    s.vectors[2] = two_mode_pair(c_low, c_low_phi, +1.0, basis);
    s.vectors[3] = two_mode_pair(c_low, c_low_phi, -1.0, basis);
  } else {
    // alpha = 0: the lowered sector is empty and carries no weight.
    s.vectors[2] = zero_vector(basis);
    s.vectors[3] = zero_vector(basis);
  }
  for (int i = 0; i < 4; ++i) s.derivatives[i] = phase_derivative(s.vectors[i]);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      s.orthogonality_residue = std::max(s.orthogonality_residue, std::abs(s.vectors[i].amps.dot(s.vectors[j].amps)));
  return s;
}

FockMatrix reconstruct(const PaperSpectrum& s) {
  const auto& basis = s.vectors[0].basis;
  const auto n = static_cast<Eigen::Index>(basis->size());
  FockMatrix m{basis, Eigen::MatrixXcd::Zero(n, n)};
  for (int i = 0; i < 4; ++i) m.entries += s.lambda[i] * s.vectors[i].amps * s.vectors[i].amps.adjoint();
  return m;
}

LossyProbe lossy_probe(const CatSpec& spec, double eta, double phi) {
  require_transmission(eta);
  const int n_max = required_n_max(spec.x());
  LossyProbe lp{spec,
                eta,
                phi,
                n_max,
                lossy_probe_paper_exact(spec, eta, phi, n_max),
                lossy_probe_oracle(spec, eta, phi, n_max),
                {},
                false,
                paper_spectrum(spec, eta, phi, n_max)};
  if (spec.x() * (1.0 - eta) < 1.0) {
    lp.weak_form = lossy_probe_paper_weak(spec, eta, phi, n_max);
    lp.weak_available = true;
  }
  return lp;
}

}  // namespace catqfi
