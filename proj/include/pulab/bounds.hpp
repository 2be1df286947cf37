#pragma once

#include <optional>
#include <string>
#include <utility>

#include "pulab/model.hpp"

namespace pulab {

// Length of the SAR loss range: C_e = 2/e_m - 1.
double c_e(double e_m);

enum class Regime { Fast, Slow };
enum class LowerCase { C1, C2 };

const char* to_string(Regime r);
const char* to_string(LowerCase c);

struct UpperBoundResult {
  double value = 0.0;
  Regime regime = Regime::Fast;  // branch attaining the min
  double fast_branch = 0.0;  // kappa1 * V/(n e_m h) * (1 + log(n h^2/V v 1))
  double slow_branch = 0.0;  // kappa1 * sqrt(V/(n e_m))
};

// Excess-risk upper bound for the propensity-weighted empirical risk
// minimizer: kappa1 * min(fast, slow).
UpperBoundResult upper_bound(std::size_t n, int V, double h, double e_m,
                             double kappa1 = 1.0);

struct LowerBoundResult {
  double value = 0.0;
  LowerCase which = LowerCase::C1;
  double kappa2_used = 0.0;
};

// Minimax lower bound. Case C1 (h >= h' = sqrt(V/(n e_m))):
// kappa2 (V-1)/(h n e_m); case C2: kappa2 sqrt((V-1)/(n e_m)). When kappa2
// is not given, the constants 1/54 and 1/(54 sqrt 2) from the Assouad
// construction apply.
// The boundary h = h' is assigned to C1.
LowerBoundResult lower_bound(std::size_t n, int V, double h, double e_m,
                             std::optional<double> kappa2 = std::nullopt);

// (V-1)/2 * (1 - sqrt(gamma n)); may be negative (vacuous), returned as-is.
double assouad_lower(int V, double gamma, std::size_t n);

struct HellingerResult {
  double closed_form = 0.0;
  double brute_force = 0.0;
  double bound = 0.0;  // 2 p e(x_i) h^2
  std::size_t differing_coordinate = 0;
};

// Squared Hellinger distance between two Assouad scenarios whose b vectors
// differ in exactly one coordinate: the closed form and an independent
// enumeration over the 2V outcomes (x, s).
HellingerResult hellinger_sq_exact(const Scenario& scenario_b,
                                   const Scenario& scenario_b_prime);

// Checks e(x) >= 1/(2 eta(x)) at every support point with eta(x) >= 1/2.
// Returns the first violating point as witness.
std::pair<bool, std::optional<Covariate>> cannings_holds(
    const Scenario& scenario);

// Phi(sigma) = K sigma sqrt(V (1 + log(C_e/sigma v 1))).
double phi(double sigma, int V, double c_e, double K);

// w(x) = sqrt(2 C_e / h) x.
double w_margin(double x, double c_e, double h);
// w0(x) = sqrt(2 C_e) v x sqrt(2 C_e / h').
double w_zero(double x, double c_e, double h_prime);

enum class WKind { Margin, Zero };

// Unique positive root of sqrt(n) eps^2 = Phi(w(eps)), by bisection to
// relative width 1e-10. Returns eps*^2.
double solve_fixed_point(std::size_t n, int V, double h, double e_m, double K,
                         WKind which_w);

struct SeriesCheck {
  double lhs_partial = 0.0;
  double rhs = 0.0;
};

// Partial sum of sum_j 2^-j sqrt(1 + log(2^{j+1} C_e/sigma v 1)) against
// its closed-form majorant 2(1+log 2) sqrt(1 + log(C_e/sigma v 1)).
SeriesCheck series_majorant_check(double c_e, double sigma, int terms);

struct BoundReport {
  std::size_t n = 0;
  int V = 0;
  double h = 0.0;
  double e_m = 0.0;
  double c_e = 0.0;
  double upper_fast = 0.0;
  double upper_slow = 0.0;
  double upper = 0.0;
  Regime regime = Regime::Fast;
  double lower = 0.0;
  double h_prime = 0.0;
  double kappa1 = 1.0;
  double kappa2 = 0.0;
  std::optional<double> eps_star_sq;

  static std::string csv_header();
  std::string csv_row() const;
};

BoundReport make_bound_report(std::size_t n, int V, double h, double e_m,
                              double kappa1 = 1.0,
                              std::optional<double> kappa2 = std::nullopt,
                              double K = 1.0,
                              bool with_fixed_point = true);

}  // namespace pulab
