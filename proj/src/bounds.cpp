#include "pulab/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "pulab/common.hpp"

namespace pulab {

namespace {

constexpr double kKappa2C1 = 1.0 / 54.0;
const double kKappa2C2 = 1.0 / (54.0 * std::sqrt(2.0));

void check_core_params(std::size_t n, int V, double h, double e_m) {
  if (n < 1) throw std::invalid_argument("n: need n >= 1");
  if (V < 1) throw std::invalid_argument("V: need V >= 1");
  if (!(h > 0.0 && h <= 1.0)) throw std::invalid_argument("h: need h in (0,1]");
  if (!(e_m > 0.0 && e_m <= 1.0))
    throw std::invalid_argument("e_m: need e_m in (0,1]");
}

}  // namespace

const char* to_string(Regime r) { return r == Regime::Fast ? "fast" : "slow"; }
const char* to_string(LowerCase c) { return c == LowerCase::C1 ? "C1" : "C2"; }

double c_e(double e_m) {
  if (!(e_m > 0.0 && e_m <= 1.0))
    throw std::invalid_argument("e_m: need e_m in (0,1]");
  return 2.0 / e_m - 1.0;
}

UpperBoundResult upper_bound(std::size_t n, int V, double h, double e_m,
                             double kappa1) {
  check_core_params(n, V, h, e_m);
  if (!(kappa1 > 0.0)) throw std::invalid_argument("kappa1: must be > 0");
  const double nd = static_cast<double>(n);
  const double log_arg = std::max(nd * h * h / V, 1.0);
  UpperBoundResult r;
  r.fast_branch = kappa1 * V / (nd * e_m * h) * (1.0 + std::log(log_arg));
  r.slow_branch = kappa1 * std::sqrt(V / (nd * e_m));
  if (r.fast_branch <= r.slow_branch) {
    r.value = r.fast_branch;
    r.regime = Regime::Fast;
  } else {
    r.value = r.slow_branch;
    r.regime = Regime::Slow;
  }
  return r;
}

LowerBoundResult lower_bound(std::size_t n, int V, double h, double e_m,
                             std::optional<double> kappa2) {
  check_core_params(n, V, h, e_m);
  if (V < 2) throw std::invalid_argument("V: the lower bound needs V >= 2");
  const double nd = static_cast<double>(n);
  if (nd * e_m < V)
    throw std::invalid_argument("hypothesis-violated: need n e_m >= V");
  const double h_prime = std::sqrt(V / (nd * e_m));
  LowerBoundResult r;
  if (h >= h_prime) {
    r.which = LowerCase::C1;
    r.kappa2_used = kappa2.value_or(kKappa2C1);
    r.value = r.kappa2_used * (V - 1) / (h * nd * e_m);
  } else {
    r.which = LowerCase::C2;
    r.kappa2_used = kappa2.value_or(kKappa2C2);
    r.value = r.kappa2_used * std::sqrt((V - 1) / (nd * e_m));
  }
  return r;
}

double assouad_lower(int V, double gamma, std::size_t n) {
  if (V < 2) throw std::invalid_argument("V: need V >= 2");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma: must be >= 0");
  return 0.5 * (V - 1) *
         (1.0 - std::sqrt(gamma * static_cast<double>(n)));
}

HellingerResult hellinger_sq_exact(const Scenario& scenario_b,
                                   const Scenario& scenario_b_prime) {
  if (scenario_b.kind() != ScenarioKind::DiscreteAssouad ||
      scenario_b_prime.kind() != ScenarioKind::DiscreteAssouad)
    throw std::invalid_argument("scenario: both must be Assouad scenarios");
  const int V = scenario_b.assouad_v();
  if (V != scenario_b_prime.assouad_v() ||
      scenario_b.assouad_p() != scenario_b_prime.assouad_p() ||
      scenario_b.assouad_h() != scenario_b_prime.assouad_h())
    throw std::invalid_argument("scenario: (V, p, h) must match");
  const auto& sup_b = scenario_b.support();
  const auto& sup_bp = scenario_b_prime.support();
  for (int i = 0; i < V; ++i)
    if (sup_b[static_cast<std::size_t>(i)].e !=
        sup_bp[static_cast<std::size_t>(i)].e)
      throw std::invalid_argument("scenario: e_values must match");

  const auto& b = scenario_b.assouad_b();
  const auto& bp = scenario_b_prime.assouad_b();
  std::size_t diff = 0, where = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] != bp[i]) {
      ++diff;
      where = i;
    }
  }
  if (diff != 1)
    throw std::invalid_argument(
        "not-adjacent: b vectors must differ in exactly one coordinate");

  const double p = scenario_b.assouad_p();
  const double h = scenario_b.assouad_h();
  const double ei = sup_b[where].e;

  HellingerResult out;
  out.differing_coordinate = where;
  const double one_m_h2 = (1.0 - h) * (1.0 + h);
  out.closed_form =
      0.5 * p *
      (2.0 - ei * std::sqrt(one_m_h2) -
       2.0 * std::sqrt(1.0 - ei + 0.25 * ei * ei * one_m_h2));
  out.bound = 2.0 * p * ei * h * h;

  KahanSum brute;
  for (std::size_t j = 0; j < sup_b.size(); ++j) {
    const double p1_b = sup_b[j].prob * sup_b[j].eta * sup_b[j].e;
    const double p1_bp = sup_bp[j].prob * sup_bp[j].eta * sup_bp[j].e;
    const double d1 = std::sqrt(p1_b) - std::sqrt(p1_bp);
    const double d0 =
        std::sqrt(sup_b[j].prob - p1_b) - std::sqrt(sup_bp[j].prob - p1_bp);
    brute.add(d1 * d1);
    brute.add(d0 * d0);
  }
  out.brute_force = 0.5 * brute.value();
  return out;
}

std::pair<bool, std::optional<Covariate>> cannings_holds(
    const Scenario& scenario) {
  if (!scenario.is_discrete())
    throw std::invalid_argument("scenario: cannings check needs a discrete "
                                "scenario");
  for (const auto& pt : scenario.support()) {
    if (pt.eta >= 0.5 && pt.e < 1.0 / (2.0 * pt.eta))
      return {false, pt.x};
  }
  return {true, std::nullopt};
}

double phi(double sigma, int V, double c_e, double K) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma: must be > 0");
  if (!(K >= 1.0)) throw std::invalid_argument("K: must be >= 1");
  if (V < 1) throw std::invalid_argument("V: need V >= 1");
  const double log_arg = std::max(c_e / sigma, 1.0);
  return K * sigma * std::sqrt(V * (1.0 + std::log(log_arg)));
}

double w_margin(double x, double c_e, double h) {
  if (!(x >= 0.0)) throw std::invalid_argument("x: must be >= 0");
  if (!(h > 0.0 && h <= 1.0)) throw std::invalid_argument("h: need h in (0,1]");
  return std::sqrt(2.0 * c_e / h) * x;
}

double w_zero(double x, double c_e, double h_prime) {
  if (!(x >= 0.0)) throw std::invalid_argument("x: must be >= 0");
  if (!(h_prime > 0.0)) throw std::invalid_argument("h_prime: must be > 0");
  return std::max(std::sqrt(2.0 * c_e), x * std::sqrt(2.0 * c_e / h_prime));
}

double solve_fixed_point(std::size_t n, int V, double h, double e_m, double K,
                         WKind which_w) {
  check_core_params(n, V, h, e_m);
  if (!(K >= 1.0)) throw std::invalid_argument("K: must be >= 1");
  const double ce = c_e(e_m);
  const double nd = static_cast<double>(n);
  const double h_prime = std::sqrt(V / (nd * e_m));

  const auto w = [&](double x) {
    return which_w == WKind::Margin ? w_margin(x, ce, h)
                                    : w_zero(x, ce, h_prime);
  };
  // F(eps) = sqrt(n) eps^2 - Phi(w(eps)): negative near 0, eventually
  // positive; F(eps)/eps is increasing, so the root is unique.
  const auto F = [&](double eps) {
    return std::sqrt(nd) * eps * eps - phi(w(eps), V, ce, K);
  };

  double lo = 1e-9;
  double hi = ce + 1.0;
  if (F(lo) >= 0.0)
    throw std::logic_error("solve_fixed_point: lower bracket failed");
  int guard = 0;
  while (F(hi) <= 0.0) {
    hi *= 2.0;
    if (++guard > 200)
      throw std::logic_error("solve_fixed_point: upper bracket failed");
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (F(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double eps = 0.5 * (lo + hi);
  return eps * eps;
}

SeriesCheck series_majorant_check(double c_e, double sigma, int terms) {
  if (!(c_e > 1.0)) throw std::invalid_argument("c_e: need c_e > 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma: must be > 0");
  if (terms < 50) throw std::invalid_argument("terms: need at least 50");
  SeriesCheck out;
  KahanSum lhs;
  double weight = 1.0;   // 2^-j
  double doubling = 2.0; // 2^{j+1}
  for (int j = 0; j < terms; ++j) {
    const double log_arg = std::max(doubling * c_e / sigma, 1.0);
    lhs.add(weight * std::sqrt(1.0 + std::log(log_arg)));
    weight *= 0.5;
    doubling *= 2.0;
  }
  out.lhs_partial = lhs.value();
  out.rhs = 2.0 * (1.0 + std::log(2.0)) *
            std::sqrt(1.0 + std::log(std::max(c_e / sigma, 1.0)));
  return out;
}

std::string BoundReport::csv_header() {
  return "n,V,h,e_m,c_e,upper_fast,upper_slow,upper,regime,lower,h_prime,"
         "kappa1,kappa2,eps_star_sq";
}

std::string BoundReport::csv_row() const {
  std::string row = std::to_string(n) + "," + std::to_string(V) + "," +
                    format_double(h) + "," + format_double(e_m) + "," +
                    format_double(c_e) + "," + format_double(upper_fast) +
                    "," + format_double(upper_slow) + "," +
                    format_double(upper) + "," + to_string(regime) + "," +
                    format_double(lower) + "," + format_double(h_prime) +
                    "," + format_double(kappa1) + "," +
                    format_double(kappa2) + ",";
  if (eps_star_sq) row += format_double(*eps_star_sq);
  return row;
}

BoundReport make_bound_report(std::size_t n, int V, double h, double e_m,
                              double kappa1, std::optional<double> kappa2,
                              double K, bool with_fixed_point) {
  BoundReport r;
  r.n = n;
  r.V = V;
  r.h = h;
  r.e_m = e_m;
  r.c_e = c_e(e_m);
  const UpperBoundResult up = upper_bound(n, V, h, e_m, kappa1);
  r.upper_fast = up.fast_branch;
  r.upper_slow = up.slow_branch;
  r.upper = up.value;
  r.regime = up.regime;
  r.h_prime = std::sqrt(V / (static_cast<double>(n) * e_m));
  r.kappa1 = kappa1;
  const LowerBoundResult low = lower_bound(n, V, h, e_m, kappa2);
  r.lower = low.value;
  r.kappa2 = low.kappa2_used;
  if (with_fixed_point)
    r.eps_star_sq = solve_fixed_point(n, V, h, e_m, K, WKind::Margin);
  return r;
}

}  // namespace pulab
