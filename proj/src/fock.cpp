#include "catqfi/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace catqfi {

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

void require_two_mode(int modes, const char* op) {
  if (modes != 2) fail(ErrorKind::shape, std::string(op) + " needs a two-mode state");
}

void require_mode(int modes, int mode) {
  if (mode < 0 || mode >= modes) {
    fail(ErrorKind::shape, "mode index " + std::to_string(mode) + " invalid for a " +
                               std::to_string(modes) + "-mode object");
  }
}

FockIndex shifted(FockIndex s, int mode, int by) {
  if (mode == 0) s.a += by; else s.b += by;
  return s;
}

}  // namespace

int required_n_max(double abs_alpha_sq) {
  if (!(abs_alpha_sq >= 0.0) || !std::isfinite(abs_alpha_sq)) {
    fail(ErrorKind::parameter, "|alpha|^2 must be finite and non-negative");
  }
  const double n = std::ceil(abs_alpha_sq + 10.0 * std::sqrt(abs_alpha_sq + 1.0) + 20.0);
  if (n > kMaxPhotonsPerMode) {
    std::ostringstream os;
    os << "truncation rule needs n_max=" << n << " for |alpha|^2=" << abs_alpha_sq
       << ", above the cap of " << kMaxPhotonsPerMode;
    fail(ErrorKind::truncation, os.str());
  }
  return static_cast<int>(n);
}

double poisson_tail(double x, int n_max) {
  if (x <= 0.0) return 0.0;
  double tail = 0.0;
  for (int n = n_max + 1;; ++n) {
    const double term = std::exp(-x + n * std::log(x) - log_factorial(n));
    tail += term;
    if (n > x && term < 1e-30 * std::max(tail, 1e-300)) break;
    if (n > n_max + 100000) break;
  }
  return tail;
}

// ---- FockBasis --------------------------------------------------------------

FockBasis::FockBasis(int modes, int n_max, std::vector<FockIndex> states)
    : modes_(modes), n_max_(n_max), states_(std::move(states)) {
  const std::size_t side = static_cast<std::size_t>(n_max_) + 1;
  lookup_.assign(modes_ == 1 ? side : side * side, -1);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const auto& s = states_[i];
    lookup_[static_cast<std::size_t>(s.a) * (modes_ == 1 ? 1 : side) +
            static_cast<std::size_t>(s.b)] = static_cast<long>(i);
  }
}

BasisPtr FockBasis::full(int modes, int n_max) {
  if (modes != 1 && modes != 2) fail(ErrorKind::shape, "only one- and two-mode bases exist");
  if (n_max < 0) fail(ErrorKind::parameter, "n_max must be non-negative");
  if (n_max > kMaxPhotonsPerMode) fail(ErrorKind::truncation, "n_max above the per-mode cap");
  std::vector<FockIndex> states;
  if (modes == 1) {
    for (int n = 0; n <= n_max; ++n) states.push_back({n, 0});
  } else {
    states.reserve(static_cast<std::size_t>(n_max + 1) * (n_max + 1));
    for (int a = 0; a <= n_max; ++a)
      for (int b = 0; b <= n_max; ++b) states.push_back({a, b});
  }
  return BasisPtr(new FockBasis(modes, n_max, std::move(states)));
}

BasisPtr FockBasis::axes(int n_max) {
  std::vector<FockIndex> states;
  for (int n = 0; n <= n_max; ++n) states.push_back({0, n});
  for (int n = 1; n <= n_max; ++n) states.push_back({n, 0});
  return from_states(2, n_max, std::move(states));
}

BasisPtr FockBasis::from_states(int modes, int n_max, std::vector<FockIndex> states) {
  if (modes != 1 && modes != 2) fail(ErrorKind::shape, "only one- and two-mode bases exist");
  if (n_max < 0 || n_max > kMaxPhotonsPerMode) fail(ErrorKind::truncation, "n_max out of range");
  for (const auto& s : states) {
    if (s.a < 0 || s.b < 0 || s.a > n_max || s.b > n_max || (modes == 1 && s.b != 0)) {
      fail(ErrorKind::shape, "basis state outside the cutoff");
    }
  }
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  return BasisPtr(new FockBasis(modes, n_max, std::move(states)));
}

long FockBasis::find(FockIndex s) const {
  if (s.a < 0 || s.b < 0 || s.a > n_max_ || s.b > n_max_) return -1;
  if (modes_ == 1) return s.b == 0 ? lookup_[static_cast<std::size_t>(s.a)] : -1;
  const std::size_t side = static_cast<std::size_t>(n_max_) + 1;
  return lookup_[static_cast<std::size_t>(s.a) * side + static_cast<std::size_t>(s.b)];
}

bool FockBasis::same_as(const FockBasis& other) const {
  return this == &other ||
         (modes_ == other.modes_ && n_max_ == other.n_max_ && states_ == other.states_);
}

BasisPtr union_basis(const FockBasis& x, const FockBasis& y) {
  if (x.modes() != y.modes()) fail(ErrorKind::shape, "cannot combine one- and two-mode objects");
  std::vector<FockIndex> states(x.states().begin(), x.states().end());
  states.insert(states.end(), y.states().begin(), y.states().end());
  return FockBasis::from_states(x.modes(), std::max(x.n_max(), y.n_max()), std::move(states));
}

// ---- FockVector / FockMatrix ------------------------------------------------

cplx FockVector::amp(FockIndex s) const {
  const long i = basis->find(s);
  return i < 0 ? cplx{} : amps[i];
}

FockVector FockVector::normalized() const {
  const double n = norm();
  if (n == 0.0) fail(ErrorKind::numerical, "cannot normalize a zero vector");
  return {basis, amps / n};
}

double FockMatrix::hermitian_residue() const {
  if (entries.size() == 0) return 0.0;
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

cplx FockMatrix::at(FockIndex row, FockIndex col) const {
  const long i = basis->find(row);
  const long j = basis->find(col);
  return (i < 0 || j < 0) ? cplx{} : entries(i, j);
}

FockVector EigenSystem::vector(std::size_t i) const {
  return {basis, eigenvectors.col(static_cast<Eigen::Index>(i))};
}

Eigen::MatrixXcd EigenSystem::reconstruct() const {
  return eigenvectors * eigenvalues.cast<cplx>().asDiagonal() * eigenvectors.adjoint();
}

// ---- construction -----------------------------------------------------------

FockVector zero_vector(BasisPtr basis) {
  const auto n = static_cast<Eigen::Index>(basis->size());
  return {std::move(basis), Eigen::VectorXcd::Zero(n)};
}

FockVector number_state(int n, int n_max) {
  if (n < 0 || n > n_max) fail(ErrorKind::parameter, "photon number outside the cutoff");
  auto v = zero_vector(FockBasis::full(1, n_max));
  v.amps[n] = 1.0;
  return v;
}

FockVector number_state(FockIndex s, int n_max) {
  auto v = zero_vector(FockBasis::full(2, n_max));
  const long i = v.basis->find(s);
  if (i < 0) fail(ErrorKind::parameter, "photon numbers outside the cutoff");
  v.amps[i] = 1.0;
  return v;
}

FockVector coherent_vector(cplx alpha, int n_max) {
  const double x = std::norm(alpha);
  required_n_max(x);  // rejects amplitudes whose rule exceeds the cap
  if (poisson_tail(x, n_max) > kTailTolerance) {
    std::ostringstream os;
    os << "n_max=" << n_max << " leaves a Poisson tail above " << kTailTolerance
       << " for |alpha|^2=" << x;
    fail(ErrorKind::truncation, os.str());
  }
  auto v = zero_vector(FockBasis::full(1, n_max));
  if (x == 0.0) {
    v.amps[0] = 1.0;
    return v;
  }
  const double log_r = std::log(std::abs(alpha));
  const double theta = std::arg(alpha);
  for (int n = 0; n <= n_max; ++n) {
    const double mag = std::exp(-0.5 * x + n * log_r - 0.5 * log_factorial(n));
    v.amps[n] = std::polar(mag, n * theta);
  }
  return v;
}

FockVector tensor(const FockVector& a, const FockVector& b) {
  if (a.modes() != 1 || b.modes() != 1) fail(ErrorKind::shape, "tensor expects single-mode factors");
  const int n_max = std::max(a.n_max(), b.n_max());
  auto out = zero_vector(FockBasis::full(2, n_max));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.amps[i] == cplx{}) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const long k = out.basis->find({(*a.basis)[i].a, (*b.basis)[j].a});
      out.amps[k] = a.amps[i] * b.amps[j];
    }
  }
  return out;
}

FockVector embed(const FockVector& v, BasisPtr basis) {
  if (v.basis->same_as(*basis)) return {basis, v.amps};
  if (v.modes() != basis->modes()) fail(ErrorKind::shape, "embed across different mode counts");
  auto out = zero_vector(basis);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const long j = basis->find((*v.basis)[i]);
    if (j < 0) {
      if (v.amps[i] != cplx{}) fail(ErrorKind::shape, "target basis misses part of the support");
      continue;
    }
    out.amps[j] = v.amps[i];
  }
  return out;
}

FockMatrix embed(const FockMatrix& m, BasisPtr basis) {
  if (m.basis->same_as(*basis)) return {basis, m.entries};
  if (m.modes() != basis->modes()) fail(ErrorKind::shape, "embed across different mode counts");
  std::vector<long> map(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) map[i] = basis->find((*m.basis)[i]);
  const auto n = static_cast<Eigen::Index>(basis->size());
  FockMatrix out{basis, Eigen::MatrixXcd::Zero(n, n)};
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      const cplx v = m.entries(i, j);
      if (map[i] < 0 || map[j] < 0) {
        if (v != cplx{}) fail(ErrorKind::shape, "target basis misses part of the support");
        continue;
      }
      out.entries(map[i], map[j]) = v;
    }
  }
  return out;
}

FockVector place_in_mode(const FockVector& single, int mode, BasisPtr two_mode) {
  if (single.modes() != 1) fail(ErrorKind::shape, "place_in_mode expects a single-mode vector");
  require_two_mode(two_mode->modes(), "place_in_mode");
  require_mode(2, mode);
  auto out = zero_vector(two_mode);
  for (std::size_t i = 0; i < single.size(); ++i) {
    const int n = (*single.basis)[i].a;
    const FockIndex s = mode == 0 ? FockIndex{n, 0} : FockIndex{0, n};
    const long j = two_mode->find(s);
    if (j < 0) {
      if (single.amps[i] != cplx{}) fail(ErrorKind::shape, "target basis too small");
      continue;
    }
    out.amps[j] = single.amps[i];
  }
  return out;
}

FockVector compress(const FockVector& v) {
  std::vector<FockIndex> states;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.amps[i] != cplx{}) states.push_back((*v.basis)[i]);
  return embed(v, FockBasis::from_states(v.modes(), v.n_max(), std::move(states)));
}

FockMatrix projector(const FockVector& v) {
  const auto c = compress(v);
  return {c.basis, c.amps * c.amps.adjoint()};
}

FockMatrix outer(const FockVector& ket, const FockVector& bra) {
  if (ket.basis->same_as(*bra.basis)) return {ket.basis, ket.amps * bra.amps.adjoint()};
  auto basis = union_basis(*ket.basis, *bra.basis);
  const auto k = embed(ket, basis);
  const auto b = embed(bra, basis);
  return {basis, k.amps * b.amps.adjoint()};
}

// ---- unitaries --------------------------------------------------------------

FockVector apply_phase_shift(const FockVector& v, double phi, int mode) {
  require_mode(v.modes(), mode);
  return apply_phase_generator(v, phi, mode == 0 ? 1.0 : 0.0, mode == 1 ? 1.0 : 0.0);
}

FockMatrix apply_phase_shift(const FockMatrix& m, double phi, int mode) {
  require_mode(m.modes(), mode);
  return apply_phase_generator(m, phi, mode == 0 ? 1.0 : 0.0, mode == 1 ? 1.0 : 0.0);
}

FockVector apply_phase_generator(const FockVector& v, double phi, double ca, double cb) {
  FockVector out = v;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& s = (*v.basis)[i];
    out.amps[i] *= std::polar(1.0, phi * (ca * s.a + cb * s.b));
  }
  return out;
}

FockMatrix apply_phase_generator(const FockMatrix& m, double phi, double ca, double cb) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::VectorXcd phase(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = (*m.basis)[static_cast<std::size_t>(i)];
    phase[i] = std::polar(1.0, phi * (ca * s.a + cb * s.b));
  }
  return {m.basis, phase.asDiagonal() * m.entries * phase.conjugate().asDiagonal()};
}

FockVector beamsplitter_50_50(const FockVector& v, std::optional<int> out_n_max) {
  require_two_mode(v.modes(), "beamsplitter_50_50");
  const int n_out = out_n_max.value_or(v.n_max());
  auto out = zero_vector(FockBasis::full(2, n_out));

  // The single-photon map M = (sigma_z + sigma_x)/sqrt2 equals exp(i pi P),
  // P = (1 - M)/2, so the Fock-space unitary is exp(i pi G) with
  // G = sum_ij P_ij a_i^dag a_j. G conserves the total photon number N and
  // has integer spectrum 0..N in each block.
  const double r = 1.0 / std::numbers::sqrt2;
  const double p11 = 0.5 * (1.0 - r);
  const double p22 = 0.5 * (1.0 + r);
  const double p12 = -0.5 * r;

  int max_total = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.amps[i] != cplx{}) max_total = std::max(max_total, (*v.basis)[i].a + (*v.basis)[i].b);

  for (int total = 0; total <= max_total; ++total) {
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(total + 1);
    bool any = false;
    for (int n = 0; n <= total; ++n) {
      in[n] = v.amp({n, total - n});
      any = any || in[n] != cplx{};
    }
    if (!any) continue;

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(total + 1, total + 1);
    for (int n = 0; n <= total; ++n) {
      g(n, n) = p11 * n + p22 * (total - n);
      if (n < total) {
        // a1^dag a2 |n, N-n> = sqrt((n+1)(N-n)) |n+1, N-n-1>
        const double c = p12 * std::sqrt(static_cast<double>(n + 1) * (total - n));
        g(n + 1, n) = c;
        g(n, n + 1) = c;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "beamsplitter block diagonalization failed");
    Eigen::VectorXd sign(total + 1);
    for (int i = 0; i <= total; ++i) sign[i] = (std::lround(es.eigenvalues()[i]) % 2 == 0) ? 1.0 : -1.0;
    const Eigen::MatrixXd u = es.eigenvectors() * sign.asDiagonal() * es.eigenvectors().transpose();
    const Eigen::VectorXcd res = u.cast<cplx>() * in;
    for (int m = 0; m <= total; ++m) {
      const long k = out.basis->find({m, total - m});
      if (k >= 0) out.amps[k] += res[m];
    }
  }
  return out;
}

FockVector cross_kerr_unitary(const FockVector& v, int d) {
  require_two_mode(v.modes(), "cross_kerr_unitary");
  if (d < 2) fail(ErrorKind::parameter, "cross-Kerr period d must be >= 2");
  FockVector out = v;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& s = (*v.basis)[i];
    const long residue = (static_cast<long>(s.a) * s.b) % d;
    out.amps[i] *= std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(residue) / d);
  }
  return out;
}

// ---- channels ---------------------------------------------------------------

double loss_kraus_weight(int n, int m, double eta) {
  if (m < 0 || m > n) return 0.0;
  double log_w = log_factorial(n) - log_factorial(m) - log_factorial(n - m);
  if (n - m > 0) log_w += (n - m) * std::log(eta);
  if (m > 0) {
    if (eta >= 1.0) return 0.0;
    log_w += m * std::log1p(-eta);
  }
  return std::exp(0.5 * log_w);
}

FockMatrix loss_channel(const FockMatrix& rho, double eta, int mode) {
  if (!(eta > 0.0 && eta <= 1.0)) fail(ErrorKind::parameter, "transmission eta must lie in (0, 1]");
  require_mode(rho.modes(), mode);
  if (eta == 1.0) return rho;

  const int n_max = rho.n_max();
  std::vector<FockIndex> closure;
  for (const auto& s : rho.basis->states())
    for (int m = 0; m <= s[mode]; ++m) closure.push_back(shifted(s, mode, -m));
  auto out_basis = FockBasis::from_states(rho.modes(), n_max, std::move(closure));

  // weight[n][m] for K_m acting on |n>
  std::vector<std::vector<double>> weight(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    weight[n].resize(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) weight[n][m] = loss_kraus_weight(n, m, eta);
  }

  const auto dim = static_cast<Eigen::Index>(out_basis->size());
  FockMatrix out{out_basis, Eigen::MatrixXcd::Zero(dim, dim)};
  // For every output state collect the (input index, photon loss m, weight)
  // pairs that feed it.
  struct Source { long index; int m; double w; };
  std::vector<std::vector<Source>> sources(out_basis->size());
  for (std::size_t i = 0; i < out_basis->size(); ++i) {
    const auto s = (*out_basis)[i];
    for (int m = 0; s[mode] + m <= n_max; ++m) {
      const auto from = shifted(s, mode, m);
      const long k = rho.basis->find(from);
      if (k < 0) continue;
      const double w = weight[from[mode]][m];
      if (w < 1e-18) continue;
      sources[i].push_back({k, m, w});
    }
  }
  for (std::size_t i = 0; i < out_basis->size(); ++i) {
    for (std::size_t j = 0; j < out_basis->size(); ++j) {
      cplx acc{};
      auto it_j = sources[j].begin();
      for (const auto& si : sources[i]) {
        while (it_j != sources[j].end() && it_j->m < si.m) ++it_j;
        if (it_j == sources[j].end()) break;
        if (it_j->m != si.m) continue;
        acc += si.w * it_j->w * rho.entries(si.index, it_j->index);
      }
      out.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return out;
}

FockMatrix loss_channel_all_modes(const FockMatrix& rho, double eta) {
  FockMatrix out = loss_channel(rho, eta, 0);
  if (rho.modes() == 2) out = loss_channel(out, eta, 1);
  return out;
}

// ---- spectral ---------------------------------------------------------------

EigenSystem hermitian_eig(const FockMatrix& m) {
  const double residue = m.hermitian_residue();
  if (!(residue < kHermitianTolerance)) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max |M - M^dag| = " << residue << ")";
    fail(ErrorKind::shape, os.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.entries);
  if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "Hermitian eigensolver did not converge");
  const auto n = es.eigenvalues().size();
  EigenSystem sys{m.basis, es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse(), {}};
  sys.numerically_null.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    sys.numerically_null[static_cast<std::size_t>(i)] = std::abs(sys.eigenvalues[i]) < kNullEigenvalue;
  return sys;
}

double fidelity(const FockVector& a, const FockVector& b) {
  if (a.basis->same_as(*b.basis)) return std::norm(a.amps.dot(b.amps));
  auto basis = union_basis(*a.basis, *b.basis);
  return std::norm(embed(a, basis).amps.dot(embed(b, basis).amps));
}

double fidelity(const FockVector& a, const FockMatrix& rho) {
  auto basis = union_basis(*a.basis, *rho.basis);
  const auto v = embed(a, basis);
  const auto r = embed(rho, basis);
  return std::max(0.0, std::real(v.amps.dot(r.entries * v.amps)));
}

namespace {

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "eigensolver failed in matrix square root");
  const Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const FockMatrix& rho, const FockMatrix& sigma) {
  auto basis = union_basis(*rho.basis, *sigma.basis);
  const auto r = embed(rho, basis);
  const auto s = embed(sigma, basis);
  const Eigen::MatrixXcd sr = psd_sqrt(r.entries);
  Eigen::MatrixXcd inner = sr * s.entries * sr;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(inner, Eigen::EigenvaluesOnly);
  const double t = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(t * t, 0.0, 1.0);
}

double trace_distance(const FockMatrix& rho, const FockMatrix& sigma) {
  auto basis = union_basis(*rho.basis, *sigma.basis);
  Eigen::MatrixXcd diff = embed(rho, basis).entries - embed(sigma, basis).entries;
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorKind::numerical, "eigensolver failed in trace distance");
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double expectation(const FockVector& v, const std::function<double(FockIndex)>& diag) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += std::norm(v.amps[i]) * diag((*v.basis)[i]);
  return acc;
}

double expectation(const FockMatrix& rho, const std::function<double(FockIndex)>& diag) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    acc += std::real(rho.entries(ii, ii)) * diag((*rho.basis)[i]);
  }
  return acc;
}

cplx expectation(const FockVector& v, const Eigen::MatrixXcd& op) {
  if (op.rows() != v.amps.size() || op.cols() != v.amps.size())
    fail(ErrorKind::shape, "operator dimension does not match the vector");
  return v.amps.dot(op * v.amps);
}

FockMatrix partial_trace(const FockMatrix& rho, int keep_mode) {
  require_two_mode(rho.modes(), "partial_trace");
  require_mode(2, keep_mode);
  const int other = 1 - keep_mode;
  auto basis = FockBasis::full(1, rho.n_max());
  const auto n = static_cast<Eigen::Index>(basis->size());
  FockMatrix out{basis, Eigen::MatrixXcd::Zero(n, n)};
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const auto& r = (*rho.basis)[i];
    for (std::size_t j = 0; j < rho.size(); ++j) {
      const auto& c = (*rho.basis)[j];
      if (r[other] != c[other]) continue;
      out.entries(r[keep_mode], c[keep_mode]) +=
          rho.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

}  // namespace catqfi
