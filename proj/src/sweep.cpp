#include "catqfi/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace catqfi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Largest amplitude whose cutoff stays within the per-mode cap.
double alpha_cap() {
  static const double cap = [] {
    double lo = 0.0, hi = 20.0;
    auto fits = [](double a) {
      const double x = a * a;
      return std::ceil(x + 10.0 * std::sqrt(x + 1.0) + 20.0) <= kMaxPhotonsPerMode;
    };
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (fits(mid) ? lo : hi) = mid;
    }
    return lo;
  }();
  return cap;
}

SweepRow error_row(int d, int k, double eta, double n_av, const std::string& method, const Error& e) {
  SweepRow r;
  r.d = d;
  r.k = k;
  r.alpha = kNaN;
  r.eta = eta;
  r.n_av = n_av;
  r.f_q = kNaN;
  r.delta_phi = kNaN;
  r.method = std::string(to_string(e.kind())) + "_error";
  r.error = method + ": " + e.what();
  return r;
}

}  // namespace

double nav_of_alpha(int d, int k, double alpha) {
  if (alpha < 0.0) fail(ErrorKind::parameter, "amplitude must be non-negative");
  if (alpha == 0.0) return nav_infimum(d, k);
  return probe_nav(CatSpec(d, k, alpha));
}

double nav_infimum(int d, int k) {
  CatSpec(d, k, 1.0);  // validates d and k
  return 0.5 * k;
}

double alpha_for_nav(int d, int k, double target) {
  const double floor_nav = nav_infimum(d, k);
  if (!(target > floor_nav)) {
    std::ostringstream os;
    os << "N_av=" << target << " is not above the sector infimum k/2=" << floor_nav;
    fail(ErrorKind::domain, os.str());
  }
  const double cap = alpha_cap();
  double hi = 0.5;
  while (hi < cap && nav_of_alpha(d, k, hi) < target) hi = std::min(2.0 * hi, cap);
  if (nav_of_alpha(d, k, hi) < target) {
    std::ostringstream os;
    os << "N_av=" << target << " needs |alpha| above " << cap << ", beyond the photon-number cap";
    fail(ErrorKind::domain, os.str());
  }
  // The map is expected to be non-decreasing; check it on the bracket.
  constexpr int samples = 64;
  double prev = floor_nav;
  for (int i = 1; i <= samples; ++i) {
    const double v = nav_of_alpha(d, k, hi * i / samples);
    if (v < prev - 1e-12 * std::max(1.0, prev))
      fail(ErrorKind::numerical, "N_av(alpha) is not monotone on the bisection bracket");
    prev = v;
  }
  double lo = 0.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = nav_of_alpha(d, k, mid);
    if (std::abs(v - target) < kNavTolerance) return mid;
    (v < target ? lo : hi) = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  const double mid = 0.5 * (lo + hi);
  if (std::abs(nav_of_alpha(d, k, mid) - target) < kNavTolerance) return mid;
  fail(ErrorKind::numerical, "bisection for alpha did not reach the N_av tolerance");
}

void CurveRequest::validate() const {
  if (d_list.empty()) fail(ErrorKind::parameter, "empty d list");
  if (k_list.empty()) fail(ErrorKind::parameter, "empty k list");
  for (int d : d_list)
    if (d < 1 || d > 16) fail(ErrorKind::parameter, "d must lie in [1, 16]");
  for (int k : k_list)
    if (k < 0) fail(ErrorKind::parameter, "k must be >= 0");
  require_transmission(eta);
  if (points < 2) fail(ErrorKind::parameter, "a curve needs at least 2 points");
  if (!(n_av_min > 0.0) || !(n_av_max > n_av_min)) fail(ErrorKind::parameter, "need 0 < n_av_min < n_av_max");
  if (workers < 1) fail(ErrorKind::parameter, "workers must be >= 1");
}

std::vector<double> CurveRequest::grid() const {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[i] = n_av_min + (n_av_max - n_av_min) * i / (points - 1);
  return g;
}

bool row_less(const SweepRow& a, const SweepRow& b) {
  if (a.d != b.d) return a.d < b.d;
  if (a.k != b.k) return a.k < b.k;
  if (a.n_av != b.n_av) return a.n_av < b.n_av;
  return a.method < b.method;
}

SweepRow evaluate_cat(int d, int k, double eta, double n_av) {
  const std::string method = eta == 1.0 ? "pure_eq5" : "mixed_numeric_oracle";
  try {
    require_transmission(eta);
    const double alpha = alpha_for_nav(d, k, n_av);
    const CatSpec spec(d, k, alpha);
    SweepRow r;
    r.d = d;
    r.k = k;
    r.alpha = alpha;
    r.eta = eta;
    r.n_av = n_av;
    const QfiResult q = eta == 1.0 ? qfi_pure(spec) : qfi_lossy_oracle(spec, eta);
    r.f_q = q.f_q;
    r.delta_phi = q.delta_phi;
    r.method = to_string(q.method);
    if (eta < 1.0) {
      const auto s = paper_spectrum(spec, eta, 0.0, required_n_max(spec.x()));
      r.f_q_paper = qfi_mixed_paper(s).f_q;
    }
    return r;
  } catch (const Error& e) {
    return error_row(d, k, eta, n_av, method, e);
  }
}

namespace {

SweepRow baseline_row(BaselineKind kind, double eta, double n_av, int noon_k) {
  SweepRow r;
  r.d = 0;
  r.eta = eta;
  r.method = to_string(kind);
  try {
    switch (kind) {
      case BaselineKind::noon: {
        r.k = noon_k;
        r.n_av = 0.5 * noon_k;
        const auto q = noon_qfi(noon_k, eta);
        r.f_q = q.f_q;
        r.delta_phi = q.delta_phi;
        break;
      }
      case BaselineKind::tmsv: {
        r.n_av = n_av;
        r.alpha = tmsv_r_for_nav(n_av);
        const auto q = tmsv_qfi(r.alpha, eta);
        r.f_q = q.f_q;
        r.delta_phi = q.delta_phi;
        break;
      }
      case BaselineKind::sql:
        r.n_av = n_av;
        r.delta_phi = sql_bound(n_av);
        r.f_q = n_av;
        break;
    }
  } catch (const Error& e) {
    return error_row(0, r.k, eta, r.n_av, r.method, e);
  }
  return r;
}

template <class Task>
std::vector<SweepRow> run_parallel(const std::vector<Task>& tasks, int workers) {
  std::vector<SweepRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) rows[i] = tasks[i]();
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace

std::vector<SweepRow> trace_curve(const CurveRequest& req) {
  req.validate();
  const auto grid = req.grid();
  std::vector<std::function<SweepRow()>> tasks;
  for (int d : req.d_list) {
    for (int k : req.k_list) {
      if (k >= d) continue;  // no such sector
      for (double n : grid) tasks.push_back([=] { return evaluate_cat(d, k, req.eta, n); });
    }
  }
  if (req.baselines.count(BaselineKind::noon)) {
    for (int k = 1; 0.5 * k <= req.n_av_max; ++k)
      tasks.push_back([=] { return baseline_row(BaselineKind::noon, req.eta, 0.0, k); });
  }
  for (auto kind : {BaselineKind::tmsv, BaselineKind::sql}) {
    if (!req.baselines.count(kind)) continue;
    for (double n : grid) tasks.push_back([=] { return baseline_row(kind, req.eta, n, 0); });
  }
  auto rows = run_parallel(tasks, req.workers);
  std::stable_sort(rows.begin(), rows.end(), row_less);
  return rows;
}

std::optional<double> find_crossover(const std::vector<SweepRow>& rows, int ka, int kb) {
  std::map<double, const SweepRow*> a, b;
  int d = -1;
  double eta = -1.0;
  for (const auto& r : rows) {
    if (r.d == 0 || (r.k != ka && r.k != kb)) continue;
    if (d >= 0 && r.d != d) fail(ErrorKind::shape, "crossover search needs rows for a single d");
    if (eta >= 0.0 && r.eta != eta) fail(ErrorKind::shape, "crossover search needs rows for a single eta");
    d = r.d;
    eta = r.eta;
    (r.k == ka ? a : b)[r.n_av] = &r;
  }
  if (ka == kb) b = a;
  if (a.empty() || b.empty()) fail(ErrorKind::shape, "rows lack one of the two sectors");
  if (a.size() != b.size() || !std::equal(a.begin(), a.end(), b.begin(),
                                          [](const auto& x, const auto& y) { return x.first == y.first; })) {
    fail(ErrorKind::shape, "the two sectors are not on a common N_av grid");
  }
  if (ka == kb) return std::nullopt;

  auto sign_at = [](double fa, double fb) { return fa > fb ? 1 : (fa < fb ? -1 : 0); };
  double prev_n = 0.0;
  int prev_sign = 0;
  for (const auto& [n, ra] : a) {
    const auto* rb = b[n];
    if (!ra->ok() || !rb->ok()) continue;
    const int s = sign_at(ra->f_q, rb->f_q);
    if (s == 0) continue;
    if (prev_sign != 0 && s != prev_sign) {
      double lo = prev_n, hi = n;
      while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        const auto ea = evaluate_cat(d, ka, eta, mid);
        const auto eb = evaluate_cat(d, kb, eta, mid);
        if (!ea.ok() || !eb.ok()) fail(ErrorKind::numerical, "evaluation failed inside the crossover bracket");
        (sign_at(ea.f_q, eb.f_q) == prev_sign ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_sign = s;
    prev_n = n;
  }
  return std::nullopt;
}

OptimalProbe optimal_probe(double n_av, double eta, int d_max, int k_max) {
  if (d_max < 1 || d_max > 16) fail(ErrorKind::parameter, "d_max must lie in [1, 16]");
  if (k_max < 0) fail(ErrorKind::parameter, "k_max must be >= 0");
  require_transmission(eta);
  std::optional<OptimalProbe> best;
  for (int d = 1; d <= d_max; ++d) {
    for (int k = 0; k <= std::min(k_max, d - 1); ++k) {
      if (!(n_av > 0.5 * k)) continue;
      const auto row = evaluate_cat(d, k, eta, n_av);
      if (!row.ok()) continue;
      if (!best || row.f_q > best->f_q * (1.0 + 1e-12)) best = OptimalProbe{d, k, row.alpha, row.f_q};
    }
  }
  if (!best) fail(ErrorKind::domain, "no feasible (d, k) for the requested N_av");
  return *best;
}

}  // namespace catqfi
