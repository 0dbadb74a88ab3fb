#include "cli/commands.hpp"

#include <cmath>
#include <sstream>

#include <CLI11.hpp>

#include "catqfi/genscheme.hpp"
#include "catqfi/sweep.hpp"
#include "cli/config.hpp"
#include "cli/emit.hpp"
#include "cli/verify.hpp"

namespace catqfi::cli {

namespace {

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string range_text(const Range& r) {
  return format_number(r.min) + ":" + format_number(r.max) + ":" + std::to_string(r.points);
}

std::vector<double> range_grid(const Range& r) {
  std::vector<double> g;
  for (int i = 0; i < r.points; ++i)
    g.push_back(r.points == 1 ? r.min : r.min + (r.max - r.min) * i / (r.points - 1));
  return g;
}

void require_format(const std::string& f) {
  if (f != "csv" && f != "json") throw UsageError("format must be csv or json");
}

Json number(double v) { return Json(v); }  // NaN becomes null in JSON

}  // namespace

int cmd_curve(const CurveArgs& a, std::ostream& out, std::ostream& err, std::vector<SweepRow>* rows_out) {
  require_format(a.format);
  CurveRequest req;
  req.d_list = parse_int_list(a.d);
  req.k_list = parse_int_list(a.k);
  if (req.d_list.empty()) throw UsageError("empty d list");
  if (req.k_list.empty()) throw UsageError("empty k list");
  const Range nav = parse_range(a.nav);
  req.eta = a.eta;
  req.n_av_min = nav.min;
  req.n_av_max = nav.max;
  req.points = nav.points;
  req.workers = a.workers;
  std::vector<std::string> names;
  for (const auto& b : parse_word_list(a.baselines)) {
    req.baselines.insert(baseline_from_string(b));
  }
  for (auto kind : req.baselines) names.push_back(to_string(kind));
  req.validate();

  // Worker count and output path do not change the document and stay out
  // of the metadata.
  RunConfig cfg;
  cfg.command = "curve";
  cfg.format = a.format;
  cfg.seed = a.seed;
  cfg.set("d", join(req.d_list));
  cfg.set("k", join(req.k_list));
  cfg.set("eta", format_number(req.eta));
  cfg.set("nav", range_text(nav));
  std::string bl;
  for (std::size_t i = 0; i < names.size(); ++i) bl += (i ? "," : "") + names[i];
  cfg.set("baselines", bl);
  cfg.set("format", a.format);
  cfg.set("seed", std::to_string(a.seed));

  const auto rows = trace_curve(req);
  Table t;
  t.columns = {"d", "k", "alpha", "eta", "n_av", "f_q", "delta_phi", "method"};
  const bool lossy = req.eta < 1.0;
  if (lossy) t.columns.push_back("f_q_paper");
  int domain = 0, numerical = 0;
  for (const auto& r : rows) {
    Json j;
    j["d"] = r.d;
    j["k"] = r.k;
    j["alpha"] = number(r.alpha);
    j["eta"] = number(r.eta);
    j["n_av"] = number(r.n_av);
    j["f_q"] = number(r.f_q);
    j["delta_phi"] = number(r.delta_phi);
    j["method"] = r.method;
    if (lossy) j["f_q_paper"] = number(r.f_q_paper.value_or(std::nan("")));
    if (!r.ok()) {
      j["error"] = r.error;
      (r.method == "domain_error" ? domain : numerical)++;
    }
    t.rows.push_back(std::move(j));
  }
  write_output(a.output, render(cfg, t), out);
  if (domain) err << "note: " << domain << " grid points lie outside their sector's reachable N_av and are marked domain_error\n";
  if (rows_out) *rows_out = rows;
  if (numerical) {
    err << "error: " << numerical << " rows failed numerically\n";
    return kExitNumerical;
  }
  return kExitOk;
}

namespace {

struct G2Args {
  std::string d = "4,8,16", k = "0,1", alpha_sq = "0.1:14:140", format = "csv", output = "-", config;
};

int cmd_g2(const G2Args& a, std::ostream& out, std::ostream&) {
  require_format(a.format);
  const auto ds = parse_int_list(a.d);
  const auto ks = parse_int_list(a.k);
  if (ds.empty()) throw UsageError("empty d list");
  if (ks.empty()) throw UsageError("empty k list");
  const Range r = parse_range(a.alpha_sq);
  RunConfig cfg;
  cfg.command = "g2";
  cfg.format = a.format;
  cfg.set("d", join(ds));
  cfg.set("k", join(ks));
  cfg.set("alpha-sq", range_text(r));
  cfg.set("format", a.format);

  Table t;
  t.columns = {"d", "k", "alpha_sq", "g2", "mandel_q"};
  for (int d : ds) {
    for (int k : ks) {
      if (k >= d) continue;
      for (double x : range_grid(r)) {
        const auto m = cat_moments(CatSpec(d, k, std::sqrt(x)));
        Json j;
        j["d"] = d;
        j["k"] = k;
        j["alpha_sq"] = number(x);
        j["g2"] = number(m.g2);
        j["mandel_q"] = number(m.mandel_q);
        t.rows.push_back(std::move(j));
      }
    }
  }
  write_output(a.output, render(cfg, t), out);
  return kExitOk;
}

struct GenArgs {
  int d = 4;
  double alpha = 1.0, beta = 0.0;
  long shots = 10000;
  std::uint64_t seed = 0;
  std::string format = "json", output = "-", config;
};

Json outcome_json(const GenOutcome& o, bool joint) {
  Json j;
  j["k1"] = o.k1;
  if (joint) j["k2"] = o.k2;
  j["target_k"] = o.target_k;
  j["probability"] = number(o.probability);
  if (!joint) j["predicted"] = number(o.predicted);
  j["conditional_fidelity"] = number(o.conditional_fidelity);
  j["leakage"] = number(o.leakage);
  j["leakage_flagged"] = o.leakage_flagged;
  j["count"] = o.count;
  return j;
}

int cmd_genscheme(const GenArgs& a, std::ostream& out, std::ostream& err) {
  if (a.format != "json") throw UsageError("genscheme writes JSON only");
  GenConfig g;
  g.d = a.d;
  g.alpha = a.alpha;
  g.beta = a.beta;
  g.shots = a.shots;
  g.seed = a.seed;
  g.validate();

  RunConfig cfg;
  cfg.command = "genscheme";
  cfg.format = "json";
  cfg.seed = a.seed;
  cfg.set("d", std::to_string(a.d));
  cfg.set("alpha", format_number(a.alpha));
  cfg.set("beta", format_number(g.resolved_beta()));
  cfg.set("shots", std::to_string(a.shots));
  cfg.set("seed", std::to_string(a.seed));

  const auto cpm = cpm_stage(g.alpha, g.resolved_beta(), g.d);
  const auto single = heterodyne_condition(cpm.state, g.alpha, g.resolved_beta(), g.d, g.shots, g.seed);
  const auto e2e = end_to_end(g);

  Json j = json_header(cfg);
  j["beta"] = number(e2e.beta);
  j["warnings"] = e2e.warnings;
  Json s;
  s["probability_sum"] = number(single.probability_sum);
  s["frequencies_within_3sigma"] = single.frequencies_ok;
  s["outcomes"] = Json::array();
  for (const auto& o : single.outcomes) s["outcomes"].push_back(outcome_json(o, false));
  j["single_arm"] = s;
  Json e;
  e["bs_fidelity"] = number(e2e.bs_fidelity);
  e["probability_sum"] = number(e2e.probability_sum);
  e["frequencies_within_3sigma"] = e2e.frequencies_ok;
  e["outcomes"] = Json::array();
  for (const auto& o : e2e.outcomes) e["outcomes"].push_back(outcome_json(o, true));
  j["end_to_end"] = e;
  for (const auto& w : e2e.warnings) err << "warning: " << w << "\n";
  write_output(a.output, j.dump(2) + "\n", out);
  return kExitOk;
}

struct OptimalArgs {
  std::string nav = "1";
  double eta = 1.0;
  int d_max = 16, k_max = 3;
  std::string format = "csv", output = "-", config;
};

int cmd_optimal(const OptimalArgs& a, std::ostream& out, std::ostream&) {
  require_format(a.format);
  std::vector<double> navs;
  {
    std::istringstream is(a.nav);
    std::string item;
    while (std::getline(is, item, ',')) {
      try {
        std::size_t used = 0;
        navs.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw UsageError("nav: '" + item + "' is not a number");
      }
    }
  }
  if (navs.empty()) throw UsageError("empty nav list");
  RunConfig cfg;
  cfg.command = "optimal";
  cfg.format = a.format;
  std::string nav_text;
  for (std::size_t i = 0; i < navs.size(); ++i) nav_text += (i ? "," : "") + format_number(navs[i]);
  cfg.set("nav", nav_text);
  cfg.set("eta", format_number(a.eta));
  cfg.set("d-max", std::to_string(a.d_max));
  cfg.set("k-max", std::to_string(a.k_max));
  cfg.set("format", a.format);

  Table t;
  t.columns = {"n_av", "eta", "d", "k", "alpha", "f_q", "delta_phi"};
  for (double n : navs) {
    const auto p = optimal_probe(n, a.eta, a.d_max, a.k_max);
    Json j;
    j["n_av"] = number(n);
    j["eta"] = number(a.eta);
    j["d"] = p.d;
    j["k"] = p.k;
    j["alpha"] = number(p.alpha);
    j["f_q"] = number(p.f_q);
    j["delta_phi"] = number(p.f_q > 0 ? 1.0 / std::sqrt(p.f_q) : INFINITY);
    t.rows.push_back(std::move(j));
  }
  write_output(a.output, render(cfg, t), out);
  return kExitOk;
}

int exit_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::numerical:
    case ErrorKind::truncation: return kExitNumerical;
    default: return kExitUsage;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Fisher information of multi-component cat probes", kToolName};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  CurveArgs ca;
  auto* curve = app.add_subcommand("curve", "QFI against N_av for cat sectors and baselines");
  curve->add_option("--d", ca.d, "comma list of component counts")->capture_default_str();
  curve->add_option("--k", ca.k, "comma list of sectors")->capture_default_str();
  curve->add_option("--eta", ca.eta, "transmission in (0, 1]")->capture_default_str();
  curve->add_option("--nav", ca.nav, "N_av grid min:max:points")->capture_default_str();
  curve->add_option("--baselines", ca.baselines, "comma list from noon, tmsv, sql");
  curve->add_option("--format", ca.format, "csv or json")->capture_default_str();
  curve->add_option("--output", ca.output, "output file, - for stdout")->capture_default_str();
  curve->add_option("--workers", ca.workers, "worker threads")->capture_default_str();
  curve->add_option("--seed", ca.seed, "recorded seed")->capture_default_str();
  curve->add_option("--config", ca.config, "key = value file; flags override it");

  G2Args ga;
  auto* g2 = app.add_subcommand("g2", "g2(0) and Mandel Q of single-mode cats");
  g2->add_option("--d", ga.d)->capture_default_str();
  g2->add_option("--k", ga.k)->capture_default_str();
  g2->add_option("--alpha-sq", ga.alpha_sq, "|alpha|^2 grid min:max:points")->capture_default_str();
  g2->add_option("--format", ga.format)->capture_default_str();
  g2->add_option("--output", ga.output)->capture_default_str();
  g2->add_option("--config", ga.config);

  GenArgs gen;
  auto* gs = app.add_subcommand("genscheme", "simulate conditional cat generation");
  gs->add_option("--d", gen.d)->capture_default_str();
  gs->add_option("--alpha", gen.alpha, "real coherent amplitude")->capture_default_str();
  gs->add_option("--beta", gen.beta, "ancilla amplitude, 0 for 1.5 d")->capture_default_str();
  gs->add_option("--shots", gen.shots)->capture_default_str();
  gs->add_option("--seed", gen.seed)->capture_default_str();
  gs->add_option("--format", gen.format, "json")->capture_default_str();
  gs->add_option("--output", gen.output)->capture_default_str();
  gs->add_option("--config", gen.config);

  OptimalArgs oa;
  auto* opt = app.add_subcommand("optimal", "best (d, k) at fixed N_av");
  opt->add_option("--nav", oa.nav, "comma list of N_av values")->capture_default_str();
  opt->add_option("--eta", oa.eta)->capture_default_str();
  opt->add_option("--d-max", oa.d_max)->capture_default_str();
  opt->add_option("--k-max", oa.k_max)->capture_default_str();
  opt->add_option("--format", oa.format)->capture_default_str();
  opt->add_option("--output", oa.output)->capture_default_str();
  opt->add_option("--config", oa.config);

  VerifyOptions vo;
  std::string vconfig;
  auto* ver = app.add_subcommand("verify", "invariant suite and golden-file comparison");
  ver->add_option("--golden-dir", vo.golden_dir)->capture_default_str();
  ver->add_option("--tol-scale", vo.tol_scale, "multiplies every error tolerance")->capture_default_str();
  ver->add_option("--report", vo.report_path, "report file, - for stdout")->capture_default_str();
  ver->add_flag("--write-golden", vo.write_golden, "regenerate the golden files instead of comparing");
  ver->add_option("--criterion", vo.criteria, "run only these criteria (1-based)");
  ver->add_option("--config", vconfig);

  try {
    std::vector<std::string> argv;
    if (!args.empty() && args[0].rfind("-", 0) != 0) {
      argv.push_back(args[0]);
      const auto rest = expand_config({args.begin() + 1, args.end()});
      argv.insert(argv.end(), rest.begin(), rest.end());
    } else {
      argv = args;
    }
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);

    if (curve->parsed()) return cmd_curve(ca, out, err);
    if (g2->parsed()) return cmd_g2(ga, out, err);
    if (gs->parsed()) return cmd_genscheme(gen, out, err);
    if (opt->parsed()) return cmd_optimal(oa, out, err);
    if (ver->parsed()) return run_verify(vo, out, err);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace catqfi::cli
