#include "pulab/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "pulab/common.hpp"
#include "pulab/rng.hpp"

namespace pulab {

// ---------------------------------------------------------------------------
// Unbiasedness suite

std::string UnbiasednessReport::csv_header() {
  return "scenario_id,g_id,estimator,mc_mean,mc_se,exact,z";
}

std::string UnbiasednessReport::csv_rows() const {
  std::string out;
  for (const auto& r : rows) {
    out += r.scenario_id + "," + r.g_id + "," + to_string(r.estimator) + "," +
           format_double(r.mc_mean) + "," + format_double(r.mc_se) + "," +
           format_double(r.exact) + "," + format_double(r.z) + "\n";
  }
  return out;
}

UnbiasednessReport run_unbiasedness_suite(
    const std::vector<std::pair<Scenario, std::vector<Hypothesis>>>& cases,
    std::size_t n, std::size_t replicates, uint64_t seed,
    const std::vector<LossKind>& estimators, int workers, double z_threshold) {
  if (replicates < 2)
    throw std::invalid_argument("replicates: need at least 2");
  UnbiasednessReport report;
  report.z_threshold = z_threshold;
  report.pass = true;

  for (std::size_t sc = 0; sc < cases.size(); ++sc) {
    const Scenario& scenario = cases[sc].first;
    const auto& classifiers = cases[sc].second;
    const std::size_t lanes = classifiers.size() * estimators.size();
    std::vector<std::vector<double>> values(
        lanes, std::vector<double>(replicates, 0.0));

    parallel_for(replicates, workers, [&](std::size_t r) {
      RngStream rng = derive_stream(seed, sc, r);
      const PUSample smp = sample(scenario, n, rng);
      std::size_t lane = 0;
      for (const auto& g : classifiers) {
        for (const LossKind kind : estimators) {
          LossSpec spec{kind, scenario.alpha(), scenario.e_min()};
          values[lane][r] = emp_risk(smp, g, spec);
          ++lane;
        }
      }
    });

    std::size_t lane = 0;
    for (const auto& g : classifiers) {
      const double r_true = true_risk(scenario, g);
      const double r_s = true_risk_s(scenario, g);
      for (const LossKind kind : estimators) {
        const MeanSe stat = mean_se(values[lane]);
        UnbiasednessRow row;
        row.scenario_id = scenario.id();
        row.g_id = g.encoding();
        row.estimator = kind;
        row.mc_mean = stat.mean;
        row.mc_se = stat.se;
        row.exact = kind == LossKind::Nontraditional ? r_s : r_true;
        const double diff = stat.mean - row.exact;
        // Constant estimators (se = 0) would demand bit-exact agreement
        // between two summation routes; an ulp-scale floor keeps the test
        // meaningful without weakening any statistical tolerance.
        const double se_floor = 1e-12 * std::max(1.0, std::abs(row.exact));
        row.z = diff / std::max(stat.se, se_floor);
        if (!(std::abs(row.z) <= z_threshold)) report.pass = false;
        report.rows.push_back(std::move(row));
        ++lane;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Rate sweeps

const char* to_string(SweptParam p) {
  switch (p) {
    case SweptParam::N: return "n";
    case SweptParam::H: return "h";
    case SweptParam::Em: return "em";
  }
  return "?";
}

SweptParam swept_param_from_string(std::string_view name) {
  if (name == "n") return SweptParam::N;
  if (name == "h") return SweptParam::H;
  if (name == "em") return SweptParam::Em;
  throw std::invalid_argument("sweep: unknown swept parameter '" +
                              std::string(name) + "'");
}

namespace {

struct PointParams {
  std::size_t n;
  double h;
  double e_m;
  double p;
};

PointParams resolve_point(const SweepConfig& config, double grid_value) {
  PointParams pt{config.n, config.h, config.e_m, config.p};
  switch (config.swept) {
    case SweptParam::N:
      pt.n = static_cast<std::size_t>(grid_value);
      break;
    case SweptParam::H:
      pt.h = grid_value;
      break;
    case SweptParam::Em:
      pt.e_m = grid_value;
      break;
  }
  if (config.h_tracks_hprime) {
    if (config.swept == SweptParam::H)
      throw std::invalid_argument(
          "sweep: h cannot both be swept and track h'");
    pt.h = config.h_scale *
           std::sqrt(config.V / (static_cast<double>(pt.n) * pt.e_m));
    pt.h = std::min(pt.h, 1.0);
  }
  if (!(pt.p > 0.0)) {
    pt.p = config.p_theta /
           (pt.e_m * pt.h * pt.h * static_cast<double>(pt.n));
    pt.p = std::min(pt.p, 1.0 / (config.V - 1));
  }
  return pt;
}

void validate_sweep(const SweepConfig& config) {
  if (config.grid.size() < 2)
    throw std::invalid_argument("grid: need at least two points");
  for (std::size_t i = 1; i < config.grid.size(); ++i)
    if (!(config.grid[i] > config.grid[i - 1]))
      throw std::invalid_argument("grid: must be strictly increasing");
  if (config.replicates < 100)
    throw std::invalid_argument("replicates: need at least 100");
  if (config.V < 2) throw std::invalid_argument("V: need V >= 2");
  if (!config.b.empty() &&
      config.b.size() != static_cast<std::size_t>(config.V - 1))
    throw std::invalid_argument("b: need length V-1");
}

}  // namespace

Scenario sweep_scenario(const SweepConfig& config, double grid_value) {
  const PointParams pt = resolve_point(config, grid_value);
  std::vector<uint8_t> b = config.b;
  if (b.empty()) b.assign(static_cast<std::size_t>(config.V - 1), 1);
  return Scenario::assouad_scar(config.V, pt.p, pt.h, std::move(b), pt.e_m);
}

std::string RateFit::csv_header() {
  return "swept,grid_value,n,h,e_m,p,replicates,mean_excess,std_err,in_fit";
}

std::string RateFit::csv_rows() const {
  std::string out;
  for (const auto& pt : table) {
    out += std::string("value,") + format_double(pt.grid_value) + "," +
           std::to_string(pt.n) + "," + format_double(pt.h) + "," +
           format_double(pt.e_m) + "," + format_double(pt.p) + "," +
           std::to_string(pt.replicates) + "," +
           format_double(pt.mean_excess) + "," + format_double(pt.std_err) +
           "," + (pt.in_fit ? "1" : "0") + "\n";
  }
  return out;
}

RateFit run_rate_sweep(const SweepConfig& config) {
  validate_sweep(config);
  RateFit fit;
  const HypothesisClass cls = HypothesisClass::all_labelings(config.V);

  for (std::size_t i = 0; i < config.grid.size(); ++i) {
    const PointParams params = resolve_point(config, config.grid[i]);
    const Scenario scenario = sweep_scenario(config, config.grid[i]);
    LossSpec spec{config.loss, scenario.alpha(), scenario.e_min()};
    const std::vector<double> excess =
        excess_of_erm(scenario, cls, params.n, spec, config.replicates,
                      derive_seed(config.seed, 1000003, i), config.workers);
    const MeanSe stat = mean_se(excess);

    SweepPoint pt;
    pt.grid_value = config.grid[i];
    pt.n = params.n;
    pt.h = params.h;
    pt.e_m = params.e_m;
    pt.p = params.p;
    pt.replicates = config.replicates;
    pt.mean_excess = stat.mean;
    pt.std_err = stat.se;
    pt.in_fit = stat.mean > 0.0 && stat.mean > config.fit_se_factor * stat.se;
    fit.table.push_back(pt);
    if (pt.in_fit)
      fit.points.emplace_back(std::log(pt.grid_value),
                              std::log(pt.mean_excess));
  }
  fit.excluded = fit.table.size() - fit.points.size();

  if (fit.points.size() >= 2) {
    fit.fit_ok = true;
    KahanSum sx, sy;
    for (const auto& [x, y] : fit.points) {
      sx.add(x);
      sy.add(y);
    }
    const double mx = sx.value() / static_cast<double>(fit.points.size());
    const double my = sy.value() / static_cast<double>(fit.points.size());
    KahanSum sxx, sxy;
    for (const auto& [x, y] : fit.points) {
      sxx.add((x - mx) * (x - mx));
      sxy.add((x - mx) * (y - my));
    }
    fit.slope = sxy.value() / sxx.value();
    fit.intercept = my - fit.slope * mx;
    KahanSum ss_res, ss_tot;
    for (const auto& [x, y] : fit.points) {
      const double fitted = fit.intercept + fit.slope * x;
      ss_res.add((y - fitted) * (y - fitted));
      ss_tot.add((y - my) * (y - my));
    }
    fit.r_squared =
        ss_tot.value() > 0.0 ? 1.0 - ss_res.value() / ss_tot.value() : 1.0;
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Minimax experiment

std::string MinimaxResult::csv_header() {
  return "b,mean_excess,std_err";
}

std::string MinimaxResult::csv_rows() const {
  std::string out;
  const int bits = std::countr_zero(mean_by_b.size());  // V - 1
  for (std::size_t beta = 0; beta < mean_by_b.size(); ++beta) {
    std::string bstr;
    for (int i = bits - 1; i >= 0; --i)
      bstr += ((beta >> i) & 1u) ? '1' : '0';
    out += bstr + "," + format_double(mean_by_b[beta]) + "," +
           format_double(se_by_b[beta]) + "\n";
  }
  return out;
}

MinimaxResult run_minimax_experiment(int V, double p, double h,
                                     std::vector<double> e_values,
                                     std::size_t n, std::size_t replicates,
                                     uint64_t seed, int workers) {
  if (V < 2 || V > 13)
    throw std::invalid_argument("V: minimax experiment supports 2 <= V <= 13");
  const std::size_t num_b = std::size_t{1} << (V - 1);
  const HypothesisClass cls = HypothesisClass::all_labelings(V);

  MinimaxResult out;
  out.mean_by_b.resize(num_b);
  out.se_by_b.resize(num_b);
  for (std::size_t beta = 0; beta < num_b; ++beta) {
    std::vector<uint8_t> b(static_cast<std::size_t>(V - 1));
    for (int i = 0; i < V - 1; ++i)
      b[static_cast<std::size_t>(i)] =
          static_cast<uint8_t>((beta >> (V - 2 - i)) & 1u);
    const Scenario scenario = Scenario::assouad(V, p, h, b, e_values);
    const std::vector<double> excess =
        excess_of_erm(scenario, cls, n, LossSpec{LossKind::SAR, {}, {}},
                      replicates, derive_seed(seed, 31337, beta), workers);
    const MeanSe stat = mean_se(excess);
    out.mean_by_b[beta] = stat.mean;
    out.se_by_b[beta] = stat.se;
    if (beta == 0 || stat.mean > out.sup_mean) {
      out.sup_mean = stat.mean;
      out.sup_se = stat.se;
      out.argmax_b = beta;
    }
  }

  const double e_m = *std::min_element(e_values.begin(), e_values.end());
  const LowerBoundResult low = lower_bound(n, V, h, e_m);
  out.lower = low.value;
  out.lower_case = low.which;
  out.upper_kappa1 = upper_bound(n, V, h, e_m, 1.0).value;
  return out;
}

// ---------------------------------------------------------------------------
// kappa1 calibration

KappaCalibration calibrate_kappa1(
    const std::vector<std::array<double, 4>>& grid, std::size_t replicates,
    uint64_t seed, int workers) {
  if (grid.empty()) throw std::invalid_argument("grid: must be non-empty");
  KappaCalibration out;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto [nd, Vd, h, e_m] = grid[j];
    const auto n = static_cast<std::size_t>(nd);
    const int V = static_cast<int>(Vd);
    // Worst-case mass on the shattered points: 2/(9 e_m h^2 n) above
    // the regime boundary, the full 1/(V-1) at or below it, where extra
    // mass no longer eases any single point.
    const double h_prime = std::sqrt(V / (nd * e_m));
    const double cap = 1.0 / (V - 1);
    const double p =
        h <= h_prime
            ? cap
            : std::min((2.0 / 9.0) / (e_m * h * h * nd), cap);
    const Scenario scenario = Scenario::assouad_scar(
        V, p, h, std::vector<uint8_t>(static_cast<std::size_t>(V - 1), 1),
        e_m);
    const std::vector<double> excess = excess_of_erm(
        scenario, HypothesisClass::all_labelings(V), n,
        LossSpec{LossKind::SAR, {}, {}}, replicates,
        derive_seed(seed, 777, j), workers);
    const MeanSe stat = mean_se(excess);

    KappaCalibration::Point pt;
    pt.n = n;
    pt.V = V;
    pt.h = h;
    pt.e_m = e_m;
    pt.p = p;
    pt.mean_excess = stat.mean;
    pt.std_err = stat.se;
    pt.envelope = upper_bound(n, V, h, e_m, 1.0).value;
    pt.ratio = stat.mean / pt.envelope;
    out.kappa1_hat = std::max(out.kappa1_hat, pt.ratio);
    out.points.push_back(pt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cannings study

std::string CanningsStudy::csv_header() {
  return "scenario_id,condition_holds,n,nt_mean,nt_se,sar_mean,sar_se,"
         "plateau_exact";
}

std::string CanningsStudy::csv_rows() const {
  std::string out;
  for (const auto& r : rows) {
    out += r.scenario_id + "," + (r.condition_holds ? "1" : "0") + "," +
           std::to_string(r.n) + "," + format_double(r.nt_mean) + "," +
           format_double(r.nt_se) + "," + format_double(r.sar_mean) + "," +
           format_double(r.sar_se) + "," + format_double(r.plateau_exact) +
           "\n";
  }
  return out;
}

CanningsStudy run_cannings_study(const Scenario& holds,
                                 const Scenario& violated,
                                 const std::vector<std::size_t>& n_grid,
                                 std::size_t replicates, uint64_t seed,
                                 int workers) {
  if (!cannings_holds(holds).first)
    throw std::invalid_argument(
        "scenario: the first scenario must satisfy the Cannings condition");
  if (cannings_holds(violated).first)
    throw std::invalid_argument(
        "scenario: the second scenario must violate the Cannings condition");

  CanningsStudy study;
  const Scenario* scenarios[2] = {&holds, &violated};
  for (std::size_t sc = 0; sc < 2; ++sc) {
    const Scenario& scenario = *scenarios[sc];
    const HypothesisClass cls = HypothesisClass::all_labelings(
        static_cast<int>(scenario.support().size()));
    const double r_star = true_risk(scenario, bayes_classifier(scenario));
    const double plateau = excess_risk(scenario, bayes_classifier_s(scenario));

    for (std::size_t k = 0; k < n_grid.size(); ++k) {
      const std::size_t n = n_grid[k];
      std::vector<double> nt(replicates, 0.0), sar(replicates, 0.0);
      const uint64_t point_seed = derive_seed(seed, sc + 1, k);
      parallel_for(replicates, workers, [&](std::size_t r) {
        RngStream rng = derive_stream(point_seed, 0, r);
        const PUSample smp = sample(scenario, n, rng);
        const ERMResult nt_erm =
            erm_finite(cls, smp, LossSpec{LossKind::Nontraditional, {}, {}});
        const ERMResult sar_erm =
            erm_finite(cls, smp, LossSpec{LossKind::SAR, {}, {}});
        nt[r] =
            std::max(0.0, true_risk(scenario, nt_erm.minimizer) - r_star);
        sar[r] =
            std::max(0.0, true_risk(scenario, sar_erm.minimizer) - r_star);
      });
      const MeanSe nt_stat = mean_se(nt);
      const MeanSe sar_stat = mean_se(sar);
      CanningsRow row;
      row.scenario_id = scenario.id();
      row.condition_holds = sc == 0;
      row.n = n;
      row.nt_mean = nt_stat.mean;
      row.nt_se = nt_stat.se;
      row.sar_mean = sar_stat.mean;
      row.sar_se = sar_stat.se;
      row.plateau_exact = plateau;
      study.rows.push_back(std::move(row));
    }
  }
  return study;
}

}  // namespace pulab
