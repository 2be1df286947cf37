#pragma once

#include <array>
#include <string>
#include <vector>

#include "pulab/bounds.hpp"
#include "pulab/erm.hpp"

namespace pulab {

// ---------------------------------------------------------------------------
// Unbiasedness suite

struct UnbiasednessRow {
  std::string scenario_id;
  std::string g_id;
  LossKind estimator = LossKind::SAR;
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double exact = 0.0;  // R(g), or P(g != S) for the nontraditional row
  double z = 0.0;
};

struct UnbiasednessReport {
  std::vector<UnbiasednessRow> rows;
  bool pass = false;  // all |z| <= z_threshold
  double z_threshold = 4.0;

  static std::string csv_header();
  std::string csv_rows() const;
};

// Monte Carlo means of the selected estimators against exact enumeration
// targets. Sampling streams are derived from (seed, scenario index,
// replicate index); the worker count never changes the result.
UnbiasednessReport run_unbiasedness_suite(
    const std::vector<std::pair<Scenario, std::vector<Hypothesis>>>& cases,
    std::size_t n, std::size_t replicates, uint64_t seed,
    const std::vector<LossKind>& estimators, int workers = 0,
    double z_threshold = 4.0);

// ---------------------------------------------------------------------------
// Rate sweeps

enum class SweptParam { N, H, Em };

const char* to_string(SweptParam p);
SweptParam swept_param_from_string(std::string_view name);

// Scenario template instantiated at every grid point. The Assouad mass p
// defaults to the worst-case choice p = theta/(e_m h^2 n) capped at
// 1/(V-1); a fixed p > 0 overrides it. In h-tracking mode the margin
// follows h = h_scale * sqrt(V/(n e_m)) along an n sweep.
struct SweepConfig {
  SweptParam swept = SweptParam::N;
  std::vector<double> grid;  // strictly increasing
  int V = 4;
  std::size_t n = 1000;  // fixed when not swept
  double h = 0.5;        // fixed when not swept / not tracking
  double e_m = 0.5;      // fixed when not swept
  double p = -1.0;       // <= 0: worst-case choice theta/(e_m h^2 n)
  double p_theta = 2.0 / 9.0;
  bool h_tracks_hprime = false;
  double h_scale = 1.0;
  std::vector<uint8_t> b;  // defaults to all-ones
  std::size_t replicates = 2000;
  uint64_t seed = 0;
  LossKind loss = LossKind::SAR;
  int workers = 0;
  double fit_se_factor = 10.0;
};

struct SweepPoint {
  double grid_value = 0.0;
  std::size_t n = 0;
  double h = 0.0;
  double e_m = 0.0;
  double p = 0.0;
  std::size_t replicates = 0;
  double mean_excess = 0.0;
  double std_err = 0.0;
  bool in_fit = false;
};

struct RateFit {
  bool fit_ok = false;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log x, log mean)
  std::size_t excluded = 0;
  std::vector<SweepPoint> table;

  static std::string csv_header();
  std::string csv_rows() const;
};

// Instantiates the scenario at a grid point (exposed for tests).
Scenario sweep_scenario(const SweepConfig& config, double grid_value);

RateFit run_rate_sweep(const SweepConfig& config);

// ---------------------------------------------------------------------------
// Minimax experiment

struct MinimaxResult {
  double sup_mean = 0.0;
  double sup_se = 0.0;
  std::size_t argmax_b = 0;
  std::vector<double> mean_by_b;
  std::vector<double> se_by_b;
  double lower = 0.0;
  LowerCase lower_case = LowerCase::C1;
  double upper_kappa1 = 1.0;  // upper-bound envelope at kappa1 = 1

  static std::string csv_header();
  std::string csv_rows() const;
};

// Mean excess of the SAR empirical minimizer under every P_b in the
// Assouad family, and its sup over b, next to the evaluated bounds.
MinimaxResult run_minimax_experiment(int V, double p, double h,
                                     std::vector<double> e_values,
                                     std::size_t n, std::size_t replicates,
                                     uint64_t seed, int workers = 0);

// ---------------------------------------------------------------------------
// kappa1 calibration

struct KappaCalibration {
  struct Point {
    std::size_t n = 0;
    int V = 0;
    double h = 0.0;
    double e_m = 0.0;
    double p = 0.0;
    double mean_excess = 0.0;
    double std_err = 0.0;
    double envelope = 0.0;  // upper bound at kappa1 = 1
    double ratio = 0.0;
  };
  double kappa1_hat = 0.0;  // max ratio over the grid
  std::vector<Point> points;
};

// Smallest kappa1 making the upper-bound envelope dominate the observed
// mean excess across the whole (n, V, h, e_m) grid. Each point uses the
// worst-case Assouad scenario with b = all-ones: mass theta/(e_m h^2 n)
// above the regime boundary h', maximal mass 1/(V-1) at or below it.
KappaCalibration calibrate_kappa1(
    const std::vector<std::array<double, 4>>& grid, std::size_t replicates,
    uint64_t seed, int workers = 0);

// ---------------------------------------------------------------------------
// Cannings comparison study

struct CanningsRow {
  std::string scenario_id;
  bool condition_holds = false;
  std::size_t n = 0;
  double nt_mean = 0.0;
  double nt_se = 0.0;
  double sar_mean = 0.0;
  double sar_se = 0.0;
  double plateau_exact = 0.0;  // l(g~*, g*) for the scenario
};

struct CanningsStudy {
  std::vector<CanningsRow> rows;

  static std::string csv_header();
  std::string csv_rows() const;
};

// Mean excess of the nontraditional and SAR minimizers along an n grid,
// for one scenario satisfying the Cannings condition and one violating it.
CanningsStudy run_cannings_study(const Scenario& holds,
                                 const Scenario& violated,
                                 const std::vector<std::size_t>& n_grid,
                                 std::size_t replicates, uint64_t seed,
                                 int workers = 0);

}  // namespace pulab
