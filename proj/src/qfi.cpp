#include "catqfi/qfi.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace catqfi {

const char* to_string(QfiMethod m) {
  switch (m) {
    case QfiMethod::pure_eq5: return "pure_eq5";
    case QfiMethod::pure_eq10: return "pure_eq10";
    case QfiMethod::mixed_eq15_paper: return "mixed_eq15_paper";
    case QfiMethod::mixed_numeric_oracle: return "mixed_numeric_oracle";
  }
  return "unknown";
}

QfiResult make_qfi_result(double f_q, QfiMethod method) {
  QfiResult r;
  r.f_q = std::max(f_q, 0.0);
  r.delta_phi = r.f_q > 0.0 ? 1.0 / std::sqrt(r.f_q) : std::numeric_limits<double>::infinity();
  r.method = method;
  return r;
}

QfiResult qfi_pure(const CatSpec& spec) {
  const auto m = probe_moments(spec);
  auto r = make_qfi_result(4.0 * (m.mean_nb2 - m.mean_nb * m.mean_nb), QfiMethod::pure_eq5);
  r.diagnostics["imag_residue"] = m.imag_residue;
  r.diagnostics["n_av"] = m.mean_nb;
  return r;
}

double qfi_from_g2(double norm_sq, double mean_n, double g2) {
  return 4.0 * norm_sq * mean_n * ((g2 - norm_sq) * mean_n + 1.0);
}

QfiResult qfi_pure_g2(const CatSpec& spec) {
  const auto m = cat_moments(spec);
  if (!(m.mean_n > 0.0)) fail(ErrorKind::domain, "g2 form needs <n> > 0");
  const double n2 = std::pow(probe_norm(spec), 2);
  auto r = make_qfi_result(qfi_from_g2(n2, m.mean_n, m.g2), QfiMethod::pure_eq10);
  r.diagnostics["g2"] = m.g2;
  return r;
}

double pure_variance_qfi(const FockVector& v, const std::function<double(FockIndex)>& generator) {
  const double norm = v.amps.squaredNorm();
  const double m1 = expectation(v, generator) / norm;
  const double m2 = expectation(v, [&](FockIndex s) { return std::pow(generator(s), 2); }) / norm;
  return 4.0 * (m2 - m1 * m1);
}

QfiResult qfi_mixed_paper(const PaperSpectrum& s) {
  double f = 0.0;
  int skipped = 0;
  for (int i = 0; i < 4; ++i) {
    const auto& l = s.vectors[i].amps;
    const auto& dl = s.derivatives[i].amps;
    f += 4.0 * s.lambda[i] * (dl.squaredNorm() - std::norm(dl.dot(l)));
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const double den = s.lambda[i] + s.lambda[j];
      if (den < kNullEigenvalue) {
        ++skipped;
        continue;
      }
      f -= 8.0 * s.lambda[i] * s.lambda[j] / den * std::norm(s.derivatives[i].amps.dot(s.vectors[j].amps));
    }
  }
  auto r = make_qfi_result(f, QfiMethod::mixed_eq15_paper);
  r.diagnostics["skipped_pairs"] = skipped;
  r.diagnostics["orthogonality_residue"] = s.orthogonality_residue;
  r.diagnostics["min_lambda"] = s.min_lambda;
  return r;
}

QfiResult qfi_mixed_paper(const LossyProbe& lp) { return qfi_mixed_paper(lp.spectral); }

double sld_qfi(const EigenSystem& eig, const Eigen::MatrixXcd& drho, int* skipped_pairs) {
  const Eigen::MatrixXcd t = eig.eigenvectors.adjoint() * drho * eig.eigenvectors;
  const auto n = eig.eigenvalues.size();
  double f = 0.0;
  int skipped = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double den = eig.eigenvalues[i] + eig.eigenvalues[j];
      if (den < kNullEigenvalue) {
        ++skipped;
        continue;
      }
      f += 2.0 * std::norm(t(i, j)) / den;
    }
  }
  if (skipped_pairs) *skipped_pairs += skipped;
  return f;
}

namespace {

// Connected components of the union of the sparsity patterns.
std::vector<std::vector<long>> components(const std::vector<const Eigen::MatrixXcd*>& ms) {
  const auto n = ms.front()->rows();
  std::vector<long> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0L);
  auto find = [&](long i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto* m : ms)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        if ((*m)(i, j) != cplx{} || (*m)(j, i) != cplx{}) parent[find(i)] = find(j);
  std::map<long, std::vector<long>> groups;
  for (long i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<long>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

Eigen::MatrixXcd take(const Eigen::MatrixXcd& m, const std::vector<long>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

struct BlockData {
  FockMatrix rho;
  Eigen::MatrixXcd coarse;  // Richardson derivative from (h, h/2)
  Eigen::MatrixXcd fine;    // from (h/2, h/4)
};

QfiResult assemble(const std::vector<BlockData>& blocks) {
  double f_coarse = 0.0;
  double f_fine = 0.0;
  int skipped = 0;
  double min_eig = std::numeric_limits<double>::infinity();
  double trace = 0.0;
  for (const auto& b : blocks) {
    const auto eig = hermitian_eig(b.rho);
    min_eig = std::min(min_eig, eig.eigenvalues.minCoeff());
    trace += eig.eigenvalues.sum();
    f_coarse += sld_qfi(eig, b.coarse);
    f_fine += sld_qfi(eig, b.fine, &skipped);
  }
  const double mismatch = std::abs(f_coarse - f_fine) / std::max(std::abs(f_fine), 1e-12);
  if (mismatch > kDerivativeFailure) {
    std::ostringstream os;
    os << "finite-difference QFI unstable: relative change " << mismatch << " under step halving";
    fail(ErrorKind::numerical, os.str());
  }
  auto r = make_qfi_result(f_fine, QfiMethod::mixed_numeric_oracle);
  r.diagnostics["step_mismatch"] = mismatch;
  r.diagnostics["stable"] = mismatch < kStabilityTolerance ? 1.0 : 0.0;
  r.diagnostics["skipped_pairs"] = skipped;
  r.diagnostics["blocks"] = static_cast<double>(blocks.size());
  r.diagnostics["min_eigenvalue"] = min_eig;
  r.diagnostics["trace"] = trace;
  return r;
}

Eigen::MatrixXcd richardson(const Eigen::MatrixXcd& d_h, const Eigen::MatrixXcd& d_h2) {
  return (4.0 * d_h2 - d_h) / 3.0;
}

}  // namespace

QfiResult qfi_mixed_numeric(const MatrixFamily& family, double phi0) {
  const double h = kDerivativeStep;
  const auto rho = family(phi0);
  std::array<Eigen::MatrixXcd, 3> diff;
  std::array<FockMatrix, 2> plus_first;
  for (int s = 0; s < 3; ++s) {
    const double step = h / (1 << s);
    auto plus = family(phi0 + step);
    auto minus = family(phi0 - step);
    if (!plus.basis->same_as(*rho.basis)) plus = embed(plus, rho.basis);
    if (!minus.basis->same_as(*rho.basis)) minus = embed(minus, rho.basis);
    diff[s] = (plus.entries - minus.entries) / (2.0 * step);
    if (s == 0) plus_first[0] = plus;
  }
  const Eigen::MatrixXcd coarse = richardson(diff[0], diff[1]);
  const Eigen::MatrixXcd fine = richardson(diff[1], diff[2]);

  const auto groups = components({&rho.entries, &plus_first[0].entries});
  std::vector<BlockData> blocks;
  // Members of each group are in basis order, so the sub-basis keeps it.
  for (const auto& g : groups) {
    std::vector<FockIndex> states;
    for (long i : g) states.push_back((*rho.basis)[static_cast<std::size_t>(i)]);
    blocks.push_back({FockMatrix{FockBasis::from_states(rho.modes(), rho.n_max(), states), take(rho.entries, g)},
                      take(coarse, g), take(fine, g)});
  }
  return assemble(blocks);
}

QfiResult qfi_mixed_numeric(const BlockFamily& family, double phi0) {
  const double h = kDerivativeStep;
  const auto rho = family(phi0);
  std::vector<std::array<Eigen::MatrixXcd, 3>> diff(rho.size());
  for (int s = 0; s < 3; ++s) {
    const double step = h / (1 << s);
    const auto plus = family(phi0 + step);
    const auto minus = family(phi0 - step);
    if (plus.size() != rho.size() || minus.size() != rho.size())
      fail(ErrorKind::shape, "block family changed its block structure");
    for (std::size_t b = 0; b < rho.size(); ++b) diff[b][s] = (plus[b].entries - minus[b].entries) / (2.0 * step);
  }
  std::vector<BlockData> blocks;
  for (std::size_t b = 0; b < rho.size(); ++b)
    blocks.push_back({rho[b], richardson(diff[b][0], diff[b][1]), richardson(diff[b][1], diff[b][2])});
  return assemble(blocks);
}

MatrixFamily phase_family(FockMatrix rho, double ca, double cb) {
  return [rho = std::move(rho), ca, cb](double phi) { return apply_phase_generator(rho, phi, ca, cb); };
}

QfiResult qfi_lossy_oracle(const CatSpec& spec, double eta, double phi0) {
  require_transmission(eta);
  const int n_max = required_n_max(spec.x());
  return qfi_mixed_numeric(
      MatrixFamily([&](double phi) { return lossy_probe_oracle(spec, eta, phi, n_max); }), phi0);
}

}  // namespace catqfi
