#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "pulab/model.hpp"

namespace pulab {

enum class LossKind { Standard, Nontraditional, SCARAlpha, SCAREm, SAR };

const char* to_string(LossKind kind);
LossKind loss_kind_from_string(std::string_view name);

// Empirical risk selector. alpha is required for SCARAlpha; e_m defaults
// to the sample's certified bound for SCAREm.
struct LossSpec {
  LossKind kind = LossKind::SAR;
  std::optional<double> alpha;
  std::optional<double> e_m;
};

// Propensity-weighted per-observation loss:
//   r = 1[s=1]/e * (2*1[g=0] - 1) + 1[g=1],
// with values in [1 - 1/e, 1/e]. e is read only when s = 1.
double loss_sar(int g_of_x, int s, double e_at_x);

// Empirical means over the sample; an empty sample yields 0 for every
// hypothesis by convention. May be negative; never clipped.
double emp_risk_sar(const PUSample& sample, const Hypothesis& g);
double emp_risk_scar_em(const PUSample& sample, const Hypothesis& g,
                        double e_m);
double emp_risk_scar_alpha(const PUSample& sample, const Hypothesis& g,
                           double alpha);
// Labeled-as-positive, unlabeled-as-negative 0-1 risk (targets S, not Y).
double emp_risk_nontraditional(const PUSample& sample, const Hypothesis& g);
// 0-1 risk against the hidden truth; diagnostics only.
double emp_risk_standard(const PUSample& sample, const Hypothesis& g);

double emp_risk(const PUSample& sample, const Hypothesis& g,
                const LossSpec& spec);

struct RiskReport {
  std::string scenario_id;
  std::string g_id;
  std::size_t n = 0;
  uint64_t seed = 0;
  double r_true = 0.0;
  double r_excess = 0.0;
  double r_emp_sar = 0.0;
  std::optional<double> r_emp_scar_alpha;
  std::optional<double> r_emp_scar_em;
  double r_emp_nontraditional = 0.0;
  double r_emp_standard = 0.0;

  static std::string csv_header();
  std::string csv_row() const;
};

RiskReport risk_report(const Scenario& scenario, const PUSample& sample,
                       const Hypothesis& g,
                       std::optional<double> alpha = std::nullopt,
                       std::optional<double> e_m = std::nullopt,
                       uint64_t seed = 0);

}  // namespace pulab
