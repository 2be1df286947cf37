// Batch front-end for the PU-learning risk laboratory: scenario ingestion,
// bound evaluation, Monte Carlo campaigns, CSV/JSON emission.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pulab/bounds.hpp"
#include "pulab/common.hpp"
#include "pulab/erm.hpp"
#include "pulab/experiments.hpp"
#include "pulab/losses.hpp"
#include "pulab/model.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;

json g_config;  // loaded from --config; flags override

// Applies a config-file value to an option the user did not pass.
template <typename T>
void merge_config(const CLI::App& cmd, const std::string& flag,
                  const char* key, T& value) {
  if (cmd.count(flag) == 0 && g_config.contains(key))
    value = g_config.at(key).get<T>();
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::invalid_argument("grid: empty grid list");
  return out;
}

pulab::Scenario load_scenario(const std::string& spec) {
  if (std::filesystem::exists(spec)) {
    std::ifstream in(spec);
    json j;
    in >> j;
    return pulab::Scenario::from_json(j);
  }
  // Fall back to an inline JSON object.
  return pulab::Scenario::from_json(json::parse(spec));
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("out: cannot write '" + path + "'");
  out << content;
}

void write_manifest(const std::string& out_path, const std::string& subcommand,
                    const json& resolved, uint64_t seed, double wall_s) {
  json manifest{{"subcommand", subcommand},
                {"config", resolved},
                {"seed", seed},
                {"version", pulab::kVersion},
                {"wall_time_s", wall_s},
                {"output", out_path}};
  write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

void require_seed(const CLI::App& cmd, uint64_t& seed) {
  if (cmd.count("--seed") == 0) {
    if (g_config.contains("seed")) {
      seed = g_config.at("seed").get<uint64_t>();
    } else {
      throw std::invalid_argument(
          "seed: required for stochastic subcommands");
    }
  }
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

// Built-in scenario/classifier battery reused by `validate`.
std::vector<std::pair<pulab::Scenario, std::vector<pulab::Hypothesis>>>
validation_battery() {
  using pulab::Hypothesis;
  using pulab::Scenario;
  std::vector<std::pair<Scenario, std::vector<Hypothesis>>> cases;
  const auto flip_first = [](const Hypothesis& g) {
    auto bits = g.bits();
    bits[0] ^= 1;
    return Hypothesis::table(bits);
  };
  const auto add = [&](Scenario s) {
    const Hypothesis star = pulab::bayes_classifier(s);
    const std::size_t m = s.support().size();
    std::vector<Hypothesis> gs{
        star, flip_first(star),
        Hypothesis::table(std::vector<uint8_t>(m, 1)),
        Hypothesis::table(std::vector<uint8_t>(m, 0))};
    cases.emplace_back(std::move(s), std::move(gs));
  };
  add(Scenario::assouad_scar(3, 0.3, 0.8, {1, 0}, 0.5, "scar-v3"));
  add(Scenario::assouad_scar(4, 0.2, 0.5, {1, 1, 0}, 0.8, "scar-v4"));
  add(Scenario::discrete(
      {{{0.0}, 0.25, 0.9, 0.6},
       {{1.0}, 0.25, 0.7, 0.6},
       {{2.0}, 0.25, 0.3, 0.6},
       {{3.0}, 0.25, 0.05, 0.6}},
      0.0, "general-4pt"));
  add(Scenario::assouad_scar(2, 0.5, 1.0, {1}, 0.4, "scar-noiseless"));
  add(Scenario::discrete(
      {{{0.0}, 0.2, 0.85, 1.0},
       {{1.0}, 0.3, 0.6, 1.0},
       {{2.0}, 0.3, 0.35, 1.0},
       {{3.0}, 0.2, 0.1, 1.0}},
      0.0, "general-e1"));
  return cases;
}

int cmd_validate(uint64_t seed, std::size_t replicates, int workers,
                 const std::string& out_path) {
  bool all_ok = true;
  std::string report = "# schema: pu-risklab.validate.v1\ncheck,status,detail\n";
  const auto record = [&](const std::string& name, bool ok,
                          const std::string& detail) {
    all_ok = all_ok && ok;
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << name
              << (detail.empty() ? "" : " (" + detail + ")") << "\n";
    report += name + "," + (ok ? "pass" : "fail") + "," + detail + "\n";
  };

  // Unbiasedness z-suite.
  {
    const auto suite = pulab::run_unbiasedness_suite(
        validation_battery(), 50, replicates, seed,
        {pulab::LossKind::SAR, pulab::LossKind::SCAREm,
         pulab::LossKind::SCARAlpha},
        workers);
    double worst = 0.0;
    for (const auto& row : suite.rows)
      worst = std::max(worst, std::abs(row.z));
    record("unbiasedness", suite.pass,
           "max |z| = " + pulab::format_double(worst));
  }

  // Variance bound and the conditional-variance identity.
  {
    bool ok = true;
    double worst_gap = 0.0;
    pulab::RngStream rng(pulab::derive_seed(seed, 2, 0));
    for (int trial = 0; trial < 100 && ok; ++trial) {
      const int V = 2 + static_cast<int>(rng.next_u64() % 5);
      std::vector<pulab::SupportPoint> pts;
      std::vector<double> raw(static_cast<std::size_t>(V));
      double total = 0.0;
      for (auto& w : raw) {
        w = 0.05 + rng.next_double();
        total += w;
      }
      for (int i = 0; i < V; ++i)
        pts.push_back({{static_cast<double>(i)},
                       raw[static_cast<std::size_t>(i)] / total,
                       rng.next_double(),
                       0.1 + 0.9 * rng.next_double()});
      pts.back().prob =
          1.0 - (total - raw.back()) / total;  // exact complement
      const auto scenario = pulab::Scenario::discrete(pts, 0.0);
      std::vector<uint8_t> gb, gpb;
      for (int i = 0; i < V; ++i) {
        gb.push_back(static_cast<uint8_t>(rng.next_u64() & 1u));
        gpb.push_back(static_cast<uint8_t>(rng.next_u64() & 1u));
      }
      const auto g = pulab::Hypothesis::table(gb);
      const auto gp = pulab::Hypothesis::table(gpb);

      // Exact enumeration over (x, s) outcomes.
      pulab::KahanSum m1, m2, ident;
      for (int i = 0; i < V; ++i) {
        const auto& pt = pts[static_cast<std::size_t>(i)];
        const double dg = gb[static_cast<std::size_t>(i)] -
                          static_cast<double>(gpb[static_cast<std::size_t>(i)]);
        const double ps1 = pt.prob * pt.eta * pt.e;
        const double d_s1 = dg * (1.0 - 2.0 / pt.e);
        const double d_s0 = dg;
        m1.add(ps1 * d_s1 + (pt.prob - ps1) * d_s0);
        m2.add(ps1 * d_s1 * d_s1 + (pt.prob - ps1) * d_s0 * d_s0);
        ident.add(pt.prob * dg * dg *
                  (1.0 + 4.0 * pt.eta * (1.0 - pt.e) / pt.e));
      }
      const double var = m2.value() - m1.value() * m1.value();
      pulab::KahanSum dist;
      for (int i = 0; i < V; ++i) {
        const double dg = gb[static_cast<std::size_t>(i)] -
                          static_cast<double>(gpb[static_cast<std::size_t>(i)]);
        dist.add(pts[static_cast<std::size_t>(i)].prob * dg * dg);
      }
      const double rhs = 2.0 * pulab::c_e(scenario.e_min()) * dist.value();
      const double ident_gap = std::abs(m2.value() - ident.value());
      worst_gap = std::max(worst_gap, ident_gap);
      ok = var <= rhs + 1e-12 &&
           ident_gap <= 1e-12 * std::max(1.0, std::abs(m2.value()));
    }
    record("variance-bound", ok,
           "worst identity gap = " + pulab::format_double(worst_gap));
  }

  // Hellinger closed form vs enumeration on the (p, e, h) grid.
  {
    bool ok = true;
    double worst = 0.0;
    for (double p : {0.1, 0.2, 0.3, 0.4, 0.5}) {
      for (double e : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        for (double h : {0.2, 0.4, 0.6, 0.8, 1.0}) {
          const auto sb =
              pulab::Scenario::assouad(3, p, h, {0, 1}, {e, 0.7, 0.9});
          const auto sbp =
              pulab::Scenario::assouad(3, p, h, {1, 1}, {e, 0.7, 0.9});
          const auto r = pulab::hellinger_sq_exact(sb, sbp);
          worst = std::max(worst, std::abs(r.closed_form - r.brute_force));
          ok = ok && std::abs(r.closed_form - r.brute_force) <= 1e-12 &&
               r.closed_form <= r.bound + 1e-12;
        }
      }
    }
    record("hellinger", ok, "worst gap = " + pulab::format_double(worst));
  }

  // Dyadic series against its closed-form majorant.
  {
    bool ok = true;
    for (double ce : {1.5, 3.0, 19.0})
      for (double sigma : {0.01, 0.1, 1.0, 10.0}) {
        const auto chk = pulab::series_majorant_check(ce, sigma, 60);
        ok = ok && chk.lhs_partial <= chk.rhs;
      }
    record("series-majorant", ok, "");
  }

  // Fixed-point sandwich on a parameter grid.
  {
    bool ok = true;
    for (std::size_t n : {100u, 1000u, 10000u})
      for (int V : {2, 5, 10})
        for (double h : {0.1, 0.5, 1.0})
          for (double e_m : {0.3, 0.6, 1.0}) {
            const double eps_sq =
                pulab::solve_fixed_point(n, V, h, e_m, 1.0,
                                         pulab::WKind::Margin);
            const double ce = pulab::c_e(e_m);
            const double nd = static_cast<double>(n);
            const double lo = 2.0 * ce * V / (nd * h);
            const double hi =
                4.0 * V / (nd * h * e_m) *
                (1.0 + std::log(std::max(nd * h * h / V, 1.0)));
            ok = ok && eps_sq >= lo * (1.0 - 1e-9) &&
                 eps_sq <= hi * (1.0 + 1e-9);
          }
    record("fixed-point-sandwich", ok, "");
  }

  if (!out_path.empty()) write_file(out_path, report);
  std::cout << (all_ok ? "validate: all checks passed"
                       : "validate: FAILURES detected")
            << "\n";
  return all_ok ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pu_risklab: PU-learning risk estimation laboratory"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override");

  // Shared parameters.
  uint64_t seed = 0;
  int workers = 0;
  std::string out_path;

  // --- validate ---
  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  validate->set_help_flag("--help", "print help and exit");
  std::size_t v_replicates = 20000;
  validate->add_option("--seed", seed);
  validate->add_option("--replicates", v_replicates);
  validate->add_option("--workers", workers);
  validate->add_option("--out", out_path);

  // --- risk ---
  auto* risk = app.add_subcommand("risk", "risk report for one classifier");
  risk->set_help_flag("--help", "print help and exit");
  std::string scenario_spec, g_bits;
  std::size_t r_n = 100;
  double r_alpha = -1.0, r_em = -1.0;
  risk->add_option("--scenario", scenario_spec, "scenario JSON file or inline")
      ->required();
  risk->add_option("--g", g_bits, "table bits, e.g. 101; default Bayes");
  risk->add_option("--n", r_n);
  risk->add_option("--seed", seed);
  risk->add_option("--alpha", r_alpha, "class prior for the alpha-form risk");
  risk->add_option("--em", r_em, "constant propensity for the e_m-form risk");
  risk->add_option("--out", out_path);

  // --- erm ---
  auto* erm = app.add_subcommand("erm", "exact empirical risk minimization");
  erm->set_help_flag("--help", "print help and exit");
  std::string erm_class = "labelings", loss_name = "sar";
  std::size_t e_n = 100;
  double e_alpha = -1.0, e_em = -1.0;
  erm->add_option("--scenario", scenario_spec)->required();
  erm->add_option("--n", e_n);
  erm->add_option("--seed", seed);
  erm->add_option("--loss", loss_name,
                  "standard|nontrad|scar-alpha|scar-em|sar");
  erm->add_option("--class", erm_class, "labelings|stumps");
  erm->add_option("--alpha", e_alpha);
  erm->add_option("--em", e_em);
  erm->add_option("--out", out_path);

  // --- bounds ---
  auto* bounds = app.add_subcommand("bounds", "evaluate the risk bounds");
  bounds->set_help_flag("--help", "print help and exit");
  std::size_t b_n = 1000;
  int b_V = 2;
  double b_h = 0.5, b_em = 1.0, b_kappa1 = 1.0, b_kappa2 = -1.0, b_K = 1.0;
  bounds->add_option("--n", b_n)->required();
  bounds->add_option("--V", b_V)->required();
  bounds->add_option("--h", b_h)->required();
  bounds->add_option("--em", b_em)->required();
  bounds->add_option("--kappa1", b_kappa1);
  bounds->add_option("--kappa2", b_kappa2, "default: 1/54 or 1/(54 sqrt 2)");
  bounds->add_option("--K", b_K);
  bounds->add_option("--out", out_path);

  // --- curve ---
  auto* curve = app.add_subcommand("curve", "excess-risk rate sweep");
  curve->set_help_flag("--help", "print help and exit");
  std::string sweep_name = "n", grid_csv;
  std::size_t c_n = 1000, c_replicates = 2000;
  int c_V = 4;
  double c_h = 0.5, c_em = 0.5, c_p = -1.0, c_theta = 2.0 / 9.0;
  double c_track = -1.0;
  curve->add_option("--sweep", sweep_name, "n|h|em");
  curve->add_option("--grid", grid_csv, "comma-separated grid")->required();
  curve->add_option("--n", c_n);
  curve->add_option("--V", c_V);
  curve->add_option("--h", c_h);
  curve->add_option("--em", c_em);
  curve->add_option("--p", c_p, "fixed Assouad mass; default theta/(e_m h^2 n)");
  curve->add_option("--theta", c_theta, "worst-case mass coefficient");
  curve->add_option("--track-hprime", c_track,
                    "h = SCALE*sqrt(V/(n e_m)) along an n sweep");
  curve->add_option("--replicates", c_replicates);
  curve->add_option("--loss", loss_name);
  curve->add_option("--seed", seed);
  curve->add_option("--workers", workers);
  curve->add_option("--out", out_path);

  // --- minimax ---
  auto* minimax = app.add_subcommand("minimax", "sup over the Assouad family");
  minimax->set_help_flag("--help", "print help and exit");
  std::size_t m_n = 2000, m_replicates = 2000;
  int m_V = 4;
  double m_h = 0.3, m_em = 0.5, m_p = -1.0;
  minimax->add_option("--V", m_V);
  minimax->add_option("--h", m_h);
  minimax->add_option("--em", m_em);
  minimax->add_option("--p", m_p, "default: 2/(9 e_m h^2 n)");
  minimax->add_option("--n", m_n);
  minimax->add_option("--replicates", m_replicates);
  minimax->add_option("--seed", seed);
  minimax->add_option("--workers", workers);
  minimax->add_option("--out", out_path);

  // --- cannings ---
  auto* cannings = app.add_subcommand(
      "cannings", "nontraditional vs SAR under the Cannings condition");
  cannings->set_help_flag("--help", "print help and exit");
  std::string cn_grid = "1000,3162,10000";
  std::size_t cn_replicates = 500;
  cannings->add_option("--grid", cn_grid, "n grid");
  cannings->add_option("--replicates", cn_replicates);
  cannings->add_option("--seed", seed);
  cannings->add_option("--workers", workers);
  cannings->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in)
        throw std::invalid_argument("config: cannot open '" + config_path +
                                    "'");
      in >> g_config;
    }

    Timer timer;

    if (*validate) {
      require_seed(*validate, seed);
      merge_config(*validate, "--replicates", "replicates", v_replicates);
      merge_config(*validate, "--workers", "workers", workers);
      merge_config(*validate, "--out", "out", out_path);
      const int rc = cmd_validate(seed, v_replicates, workers, out_path);
      if (!out_path.empty()) {
        json resolved{{"replicates", v_replicates}, {"workers", workers}};
        write_manifest(out_path, "validate", resolved, seed, timer.seconds());
      }
      return rc;
    }

    if (*risk) {
      require_seed(*risk, seed);
      merge_config(*risk, "--n", "n", r_n);
      merge_config(*risk, "--out", "out", out_path);
      const auto scenario = load_scenario(scenario_spec);
      pulab::RngStream rng(pulab::derive_seed(seed, 0, 0));
      const auto smp = pulab::sample(scenario, r_n, rng);
      pulab::Hypothesis g = pulab::bayes_classifier(scenario);
      if (risk->count("--g")) {
        std::vector<uint8_t> bits;
        for (char c : g_bits) bits.push_back(c == '1' ? 1 : 0);
        g = pulab::Hypothesis::table(bits);
      }
      std::optional<double> alpha, em;
      if (r_alpha >= 0.0) alpha = r_alpha;
      if (r_em > 0.0) em = r_em;
      const auto report =
          pulab::risk_report(scenario, smp, g, alpha, em, seed);
      const std::string csv = "# schema: pu-risklab.risk.v1\n" +
                              pulab::RiskReport::csv_header() + "\n" +
                              report.csv_row() + "\n";
      if (out_path.empty()) out_path = "risk.csv";
      write_file(out_path, csv);
      std::cout << csv;
      return kExitOk;
    }

    if (*erm) {
      require_seed(*erm, seed);
      merge_config(*erm, "--n", "n", e_n);
      merge_config(*erm, "--loss", "loss", loss_name);
      merge_config(*erm, "--out", "out", out_path);
      const auto scenario = load_scenario(scenario_spec);
      pulab::RngStream rng(pulab::derive_seed(seed, 0, 0));
      const auto smp = pulab::sample(scenario, e_n, rng);
      pulab::LossSpec spec{pulab::loss_kind_from_string(loss_name), {}, {}};
      if (e_alpha >= 0.0) spec.alpha = e_alpha;
      if (e_em > 0.0) spec.e_m = e_em;
      if (spec.kind == pulab::LossKind::SCARAlpha && !spec.alpha)
        spec.alpha = scenario.alpha();
      pulab::ERMResult result;
      if (erm_class == "stumps") {
        result = pulab::erm_stump(smp, spec);
      } else if (erm_class == "labelings") {
        result = pulab::erm_finite(
            pulab::HypothesisClass::all_labelings(
                static_cast<int>(scenario.support().size())),
            smp, spec);
      } else {
        throw std::invalid_argument("class: unknown class '" + erm_class +
                                    "'");
      }
      const std::string payload = result.to_json().dump(2) + "\n";
      if (out_path.empty()) out_path = "erm.json";
      write_file(out_path, payload);
      std::cout << payload;
      return kExitOk;
    }

    if (*bounds) {
      std::optional<double> kappa2;
      if (b_kappa2 > 0.0) kappa2 = b_kappa2;
      const auto report =
          pulab::make_bound_report(b_n, b_V, b_h, b_em, b_kappa1, kappa2, b_K);
      const std::string csv = "# schema: pu-risklab.bounds.v1\n" +
                              pulab::BoundReport::csv_header() + "\n" +
                              report.csv_row() + "\n";
      if (!out_path.empty()) write_file(out_path, csv);
      std::cout << csv;
      return kExitOk;
    }

    if (*curve) {
      require_seed(*curve, seed);
      merge_config(*curve, "--sweep", "sweep", sweep_name);
      merge_config(*curve, "--n", "n", c_n);
      merge_config(*curve, "--V", "V", c_V);
      merge_config(*curve, "--h", "h", c_h);
      merge_config(*curve, "--em", "em", c_em);
      merge_config(*curve, "--p", "p", c_p);
      merge_config(*curve, "--theta", "theta", c_theta);
      merge_config(*curve, "--track-hprime", "track_hprime", c_track);
      merge_config(*curve, "--replicates", "replicates", c_replicates);
      merge_config(*curve, "--loss", "loss", loss_name);
      merge_config(*curve, "--workers", "workers", workers);
      merge_config(*curve, "--out", "out", out_path);
      pulab::SweepConfig config;
      config.swept = pulab::swept_param_from_string(sweep_name);
      config.grid = parse_grid(grid_csv);
      config.V = c_V;
      config.n = c_n;
      config.h = c_h;
      config.e_m = c_em;
      config.p = c_p;
      config.p_theta = c_theta;
      if (c_track > 0.0) {
        config.h_tracks_hprime = true;
        config.h_scale = c_track;
      }
      config.replicates = c_replicates;
      config.seed = seed;
      config.loss = pulab::loss_kind_from_string(loss_name);
      config.workers = workers;
      const auto fit = pulab::run_rate_sweep(config);
      const std::string csv = "# schema: pu-risklab.curve.v1\n" +
                              pulab::RateFit::csv_header() + "\n" +
                              fit.csv_rows();
      if (out_path.empty()) out_path = "curve.csv";
      write_file(out_path, csv);
      json resolved{{"sweep", sweep_name},   {"grid", config.grid},
                    {"V", c_V},              {"n", c_n},
                    {"h", c_h},              {"em", c_em},
                    {"p", c_p},              {"theta", c_theta},
                    {"track_hprime", c_track}, {"replicates", c_replicates},
                    {"loss", loss_name},     {"workers", workers}};
      json fit_json{{"fit_ok", fit.fit_ok},
                    {"slope", fit.slope},
                    {"intercept", fit.intercept},
                    {"r_squared", fit.r_squared},
                    {"excluded", fit.excluded}};
      resolved["fit"] = fit_json;
      write_manifest(out_path, "curve", resolved, seed, timer.seconds());
      std::cout << "curve: wrote " << out_path << "\n";
      if (fit.fit_ok) {
        std::cout << "fit: slope = " << pulab::format_double(fit.slope)
                  << ", r^2 = " << pulab::format_double(fit.r_squared)
                  << ", excluded = " << fit.excluded << "\n";
      } else {
        std::cout << "fit: no-fit (" << fit.points.size()
                  << " usable points)\n";
      }
      return kExitOk;
    }

    if (*minimax) {
      require_seed(*minimax, seed);
      merge_config(*minimax, "--V", "V", m_V);
      merge_config(*minimax, "--h", "h", m_h);
      merge_config(*minimax, "--em", "em", m_em);
      merge_config(*minimax, "--p", "p", m_p);
      merge_config(*minimax, "--n", "n", m_n);
      merge_config(*minimax, "--replicates", "replicates", m_replicates);
      merge_config(*minimax, "--workers", "workers", workers);
      merge_config(*minimax, "--out", "out", out_path);
      if (m_p <= 0.0)
        m_p = (2.0 / 9.0) /
              (m_em * m_h * m_h * static_cast<double>(m_n));
      const auto result = pulab::run_minimax_experiment(
          m_V, m_p, m_h, std::vector<double>(static_cast<std::size_t>(m_V), m_em),
          m_n, m_replicates, seed, workers);
      const std::string csv = "# schema: pu-risklab.minimax.v1\n" +
                              pulab::MinimaxResult::csv_header() + "\n" +
                              result.csv_rows();
      if (out_path.empty()) out_path = "minimax.csv";
      write_file(out_path, csv);
      json resolved{{"V", m_V},           {"p", m_p},
                    {"h", m_h},           {"em", m_em},
                    {"n", m_n},           {"replicates", m_replicates},
                    {"workers", workers}};
      resolved["sup_mean"] = result.sup_mean;
      resolved["lower"] = result.lower;
      resolved["upper_kappa1"] = result.upper_kappa1;
      write_manifest(out_path, "minimax", resolved, seed, timer.seconds());
      std::cout << "minimax: sup_b mean excess = "
                << pulab::format_double(result.sup_mean)
                << " (lower bound " << pulab::format_double(result.lower)
                << ", kappa1=1 envelope "
                << pulab::format_double(result.upper_kappa1) << ")\n";
      return kExitOk;
    }

    if (*cannings) {
      require_seed(*cannings, seed);
      merge_config(*cannings, "--grid", "grid", cn_grid);
      merge_config(*cannings, "--replicates", "replicates", cn_replicates);
      merge_config(*cannings, "--workers", "workers", workers);
      merge_config(*cannings, "--out", "out", out_path);
      const auto holds = pulab::Scenario::discrete(
          {{{0.0}, 0.5, 0.9, 0.6}, {{1.0}, 0.5, 0.1, 0.6}}, 0.0,
          "cannings-holds");
      const auto violated = pulab::Scenario::discrete(
          {{{0.0}, 0.5, 0.6, 0.5}, {{1.0}, 0.5, 0.2, 0.5}}, 0.0,
          "cannings-violated");
      std::vector<std::size_t> n_grid;
      for (double v : parse_grid(cn_grid))
        n_grid.push_back(static_cast<std::size_t>(v));
      const auto study = pulab::run_cannings_study(
          holds, violated, n_grid, cn_replicates, seed, workers);
      const std::string csv = "# schema: pu-risklab.cannings.v1\n" +
                              pulab::CanningsStudy::csv_header() + "\n" +
                              study.csv_rows();
      if (out_path.empty()) out_path = "cannings.csv";
      write_file(out_path, csv);
      json resolved{{"grid", cn_grid},
                    {"replicates", cn_replicates},
                    {"workers", workers}};
      write_manifest(out_path, "cannings", resolved, seed, timer.seconds());
      std::cout << "cannings: wrote " << out_path << "\n";
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
