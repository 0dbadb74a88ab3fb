#include "catqfi/genscheme.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "catqfi/probe.hpp"

namespace catqfi {

namespace {

constexpr double kMinProbability = 1e-12;

cplx root(long j, int d) {
  const long r = ((j % d) + d) % d;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / d);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

int target_sector(int k1, int k2) { return k1 == 0 ? k2 : k1; }

}  // namespace

FockVector entangled_coherent(cplx alpha, int n_max) {
  const auto basis = FockBasis::full(2, n_max);
  const auto c = coherent_vector(alpha, n_max);
  FockVector v{basis, place_in_mode(c, 0, basis).amps + place_in_mode(c, 1, basis).amps};
  return v.normalized();
}

FockVector bs_stage(cplx alpha) {
  const int n_max = required_n_max(std::norm(alpha));
  const cplx half = alpha / std::numbers::sqrt2;
  FockVector cat{FockBasis::full(1, n_max),
                 coherent_vector(half, n_max).amps + coherent_vector(-half, n_max).amps};
  if (cat.norm() == 0.0) fail(ErrorKind::numerical, "input cat has zero norm");
  const auto in = tensor(cat.normalized(), coherent_vector(half, n_max));
  const auto out = beamsplitter_50_50(in, n_max);
  return apply_phase_shift(out, std::numbers::pi, 1).normalized();
}

CpmResult cpm_stage(cplx alpha, double beta, int d) {
  if (d < 2) fail(ErrorKind::parameter, "modulator period d must be >= 2");
  if (!(beta > 0.0)) fail(ErrorKind::parameter, "ancilla amplitude beta must be > 0");
  CpmResult r;
  if (beta < d) {
    std::ostringstream os;
    os << "beta=" << beta << " is below d=" << d << "; sectors overlap noticeably";
    r.warnings.push_back(os.str());
  }
  const int n_max = std::max(required_n_max(std::norm(alpha)), required_n_max(beta * beta));
  r.state = cross_kerr_unitary(tensor(coherent_vector(alpha, n_max), coherent_vector(beta, n_max)), d);
  return r;
}

std::vector<cplx> branch_overlaps(const FockVector& state, cplx alpha, double beta, int d) {
  std::vector<cplx> out;
  const int n_max = state.n_max();
  for (int k = 0; k < d; ++k) {
    const CatSpec spec(d, k, alpha);
    const auto branch = embed(tensor(cat_to_fock(spec, n_max), coherent_vector(beta * root(k, d), n_max)), state.basis);
    out.push_back(branch.amps.dot(state.amps));
  }
  return out;
}

Eigen::MatrixXcd sector_povm(int d, int k, int n_max) {
  if (d < 1 || k < 0 || k >= d) fail(ErrorKind::parameter, "invalid heterodyne sector");
  const double theta = 2.0 * std::numbers::pi * k / d;
  Eigen::MatrixXcd p(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n_max; ++m) {
      if (n == m) {
        p(n, m) = 1.0 / d;
        continue;
      }
      const int j = n - m;
      // radial part Gamma((n+m)/2 + 1) / (2 pi sqrt(n! m!)), angular part
      // integral of e^{i j t} over the sector
      const double radial =
          std::exp(std::lgamma(0.5 * (n + m) + 1.0) - 0.5 * (std::lgamma(n + 1.0) + std::lgamma(m + 1.0))) /
          (2.0 * std::numbers::pi);
      const double angular = 2.0 * std::sin(j * std::numbers::pi / d) / j;
      p(n, m) = radial * angular * std::polar(1.0, j * theta);
    }
  }
  return p;
}

double leakage_bound(double beta, int d, int k) {
  double s = 0.0;
  for (int j = 0; j < d; ++j)
    if (j != k) s += std::exp(-0.5 * std::norm(beta * (root(j, d) - root(k, d))));
  return s;
}

std::vector<long> sample_counts(const std::vector<double>& probabilities, long shots, std::uint64_t seed) {
  std::vector<double> cdf(probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) cdf[i] = acc += probabilities[i];
  std::vector<long> counts(probabilities.size(), 0);
  for (long s = 0; s < shots; ++s) {
    std::mt19937_64 gen(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(s))));
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53 * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    ++counts[std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1)];
  }
  return counts;
}

bool within_three_sigma(const std::vector<long>& counts, const std::vector<double>& probabilities, long shots) {
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double p = std::clamp(probabilities[i], 0.0, 1.0);
    const double mean = shots * p;
    const double sigma = std::sqrt(shots * p * (1.0 - p));
    if (std::abs(counts[i] - mean) > 3.0 * sigma + 1e-9) return false;
  }
  return true;
}

HeterodyneReport heterodyne_condition(const FockVector& state, cplx alpha, double beta, int d,
                                      long shots, std::uint64_t seed) {
  if (state.modes() != 2) fail(ErrorKind::shape, "heterodyne conditioning needs signal and ancilla modes");
  if (shots < 1) fail(ErrorKind::parameter, "shots must be >= 1");
  const int n = state.n_max();
  // Psi(s, a): signal row, ancilla column
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (std::size_t i = 0; i < state.size(); ++i) psi((*state.basis)[i].a, (*state.basis)[i].b) = state.amps[i];

  HeterodyneReport rep;
  std::vector<double> probs;
  for (int k = 0; k < d; ++k) {
    const Eigen::MatrixXcd rho = psi * sector_povm(d, k, n).transpose() * psi.adjoint();
    GenOutcome o;
    o.k1 = k;
    o.target_k = k;
    o.probability = std::real(rho.trace());
    o.predicted = norm_M(CatSpec(d, k, alpha)) / (static_cast<double>(d) * d);
    o.leakage = leakage_bound(beta, d, k);
    o.leakage_flagged = o.leakage > kLeakageFlag;
    if (o.probability > kMinProbability) {
      const auto c = cat_to_fock(CatSpec(d, k, alpha), n).amps;
      o.conditional_fidelity = std::real(c.dot(rho * c)) / o.probability;
    } else {
      o.conditional_fidelity = std::numeric_limits<double>::quiet_NaN();
    }
    probs.push_back(o.probability);
    rep.probability_sum += o.probability;
    rep.outcomes.push_back(o);
  }
  const auto counts = sample_counts(probs, shots, seed);
  for (int k = 0; k < d; ++k) rep.outcomes[k].count = counts[k];
  rep.frequencies_ok = within_three_sigma(counts, probs, shots);
  return rep;
}

void GenConfig::validate() const {
  if (d < 2) fail(ErrorKind::parameter, "d must be >= 2");
  if (shots < 1) fail(ErrorKind::parameter, "shots must be >= 1");
  if (!(resolved_beta() > 0.0)) fail(ErrorKind::parameter, "beta must be > 0");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) fail(ErrorKind::parameter, "alpha must be finite");
}

EndToEndReport end_to_end(const GenConfig& cfg) {
  cfg.validate();
  const int d = cfg.d;
  EndToEndReport rep;
  rep.config = cfg;
  rep.beta = cfg.resolved_beta();
  if (rep.beta < d) {
    std::ostringstream os;
    os << "beta=" << rep.beta << " is below d=" << d << "; sectors overlap noticeably";
    rep.warnings.push_back(os.str());
  }
  const auto psi = bs_stage(cfg.alpha);
  const int n_sig = psi.n_max();
  rep.bs_fidelity = fidelity(psi, entangled_coherent(cfg.alpha, n_sig));

  // G_k(r, r') = <beta omega^r'| Pi_k |beta omega^r>: the ancilla of an arm
  // holding s photons ends in |beta omega^{s mod d}>.
  const int n_anc = required_n_max(rep.beta * rep.beta);
  std::vector<Eigen::VectorXcd> anc;
  for (int r = 0; r < d; ++r) anc.push_back(coherent_vector(rep.beta * root(r, d), n_anc).amps);
  std::vector<Eigen::MatrixXcd> g(d, Eigen::MatrixXcd(d, d));
  for (int k = 0; k < d; ++k) {
    const Eigen::MatrixXcd pov = sector_povm(d, k, n_anc);
    for (int r = 0; r < d; ++r)
      for (int rp = 0; rp < d; ++rp) g[k](r, rp) = anc[rp].dot(pov * anc[r]);
  }

  // Amplitude mass and target overlaps grouped by residue pair.
  auto residue = [d](const FockIndex& s) { return (s.a % d) * d + (s.b % d); };
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(d * d);
  for (std::size_t i = 0; i < psi.size(); ++i) weight[residue((*psi.basis)[i])] += std::norm(psi.amps[i]);

  std::vector<double> probs;
  for (int k1 = 0; k1 < d; ++k1) {
    for (int k2 = 0; k2 < d; ++k2) {
      GenOutcome o;
      o.k1 = k1;
      o.k2 = k2;
      o.target_k = target_sector(k1, k2);
      for (int r1 = 0; r1 < d; ++r1)
        for (int r2 = 0; r2 < d; ++r2)
          o.probability += weight[r1 * d + r2] * std::real(g[k1](r1, r1) * g[k2](r2, r2));
      o.predicted = std::numeric_limits<double>::quiet_NaN();
      o.leakage = leakage_bound(rep.beta, d, k1) + leakage_bound(rep.beta, d, k2);
      o.leakage_flagged = o.leakage > kLeakageFlag;
      if (o.probability > kMinProbability) {
        const auto target = build_probe(CatSpec(d, o.target_k, cfg.alpha), n_sig).vec;
        Eigen::VectorXcd a = Eigen::VectorXcd::Zero(d * d);
        for (std::size_t i = 0; i < psi.size(); ++i) {
          const auto& s = (*psi.basis)[i];
          a[residue(s)] += std::conj(target.amp(s)) * psi.amps[i];
        }
        cplx overlap{};
        for (int r = 0; r < d * d; ++r)
          for (int rp = 0; rp < d * d; ++rp)
            overlap += a[r] * std::conj(a[rp]) * g[k1](r / d, rp / d) * g[k2](r % d, rp % d);
        o.conditional_fidelity = std::real(overlap) / o.probability;
      } else {
        o.conditional_fidelity = std::numeric_limits<double>::quiet_NaN();
      }
      rep.probability_sum += o.probability;
      probs.push_back(o.probability);
      rep.outcomes.push_back(o);
    }
  }
  const auto counts = sample_counts(probs, cfg.shots, cfg.seed);
  for (std::size_t i = 0; i < counts.size(); ++i) rep.outcomes[i].count = counts[i];
  rep.frequencies_ok = within_three_sigma(counts, probs, cfg.shots);
  return rep;
}

}  // namespace catqfi
