#include "pulab/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "pulab/common.hpp"

namespace pulab {

const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::Standard: return "standard";
    case LossKind::Nontraditional: return "nontrad";
    case LossKind::SCARAlpha: return "scar-alpha";
    case LossKind::SCAREm: return "scar-em";
    case LossKind::SAR: return "sar";
  }
  return "?";
}

LossKind loss_kind_from_string(std::string_view name) {
  if (name == "standard") return LossKind::Standard;
  if (name == "nontrad") return LossKind::Nontraditional;
  if (name == "scar-alpha") return LossKind::SCARAlpha;
  if (name == "scar-em") return LossKind::SCAREm;
  if (name == "sar") return LossKind::SAR;
  throw std::invalid_argument("loss: unknown loss kind '" + std::string(name) +
                              "'");
}

double loss_sar(int g_of_x, int s, double e_at_x) {
  if (s == 0) return g_of_x ? 1.0 : 0.0;
  if (std::isnan(e_at_x))
    throw std::invalid_argument(
        "missing-propensity: labeled observation lacks e_at_x");
  if (!(e_at_x > 0.0 && e_at_x <= 1.0))
    throw std::invalid_argument("invalid-propensity: e_at_x must be in (0,1]");
  // 1[s=1]/e * (2*1[g=0] - 1) + 1[g=1]
  return (g_of_x ? -1.0 : 1.0) / e_at_x + (g_of_x ? 1.0 : 0.0);
}

namespace {

// Per-observation predicted bit. On discrete samples the hypothesis is
// resolved to support-indexed bits once per call.
struct Predictor {
  std::vector<uint8_t> owned;
  bool via_index = false;
  const Hypothesis* g = nullptr;

  static Predictor make(const PUSample& sample, const Hypothesis& g) {
    Predictor p;
    if (sample.scenario().is_discrete()) {
      p.owned = materialize_bits(sample.scenario(), g);
      p.via_index = true;
    } else {
      p.g = &g;
    }
    return p;
  }

  int operator()(const PUObservation& o) const {
    if (via_index) return owned[static_cast<std::size_t>(o.support_index)];
    return g->eval_x1(o.x1);
  }
};

}  // namespace

double emp_risk_sar(const PUSample& sample, const Hypothesis& g) {
  if (sample.n() == 0) return 0.0;
  const Predictor pred = Predictor::make(sample, g);
  double sum = 0.0;
  for (const auto& o : sample.observations())
    sum += loss_sar(pred(o), o.s, o.e_at_x);
  return sum / static_cast<double>(sample.n());
}

double emp_risk_scar_em(const PUSample& sample, const Hypothesis& g,
                        double e_m) {
  if (!(e_m > 0.0 && e_m <= 1.0))
    throw std::invalid_argument("invalid-propensity: e_m must be in (0,1]");
  if (sample.n() == 0) return 0.0;
  const Predictor pred = Predictor::make(sample, g);
  double sum = 0.0;
  for (const auto& o : sample.observations())
    sum += loss_sar(pred(o), o.s, e_m);
  return sum / static_cast<double>(sample.n());
}

double emp_risk_scar_alpha(const PUSample& sample, const Hypothesis& g,
                           double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha: must be in [0,1]");
  if (sample.n() == 0) return 0.0;
  const Predictor pred = Predictor::make(sample, g);
  long labeled = 0, labeled_pred0 = 0, pred1 = 0;
  for (const auto& o : sample.observations()) {
    const int gx = pred(o);
    pred1 += gx;
    if (o.s) {
      ++labeled;
      labeled_pred0 += 1 - gx;
    }
  }
  const double second =
      static_cast<double>(pred1) / static_cast<double>(sample.n());
  if (labeled == 0) return second;  // empty labeled-sum convention
  // sum over labeled points of (1[g=0] - 1[g=1]) = 2*labeled_pred0 - labeled
  const double first = alpha *
                       static_cast<double>(2 * labeled_pred0 - labeled) /
                       static_cast<double>(labeled);
  return first + second;
}

double emp_risk_nontraditional(const PUSample& sample, const Hypothesis& g) {
  if (sample.n() == 0) return 0.0;
  const Predictor pred = Predictor::make(sample, g);
  long errors = 0;
  for (const auto& o : sample.observations())
    errors += pred(o) != o.s;
  return static_cast<double>(errors) / static_cast<double>(sample.n());
}

double emp_risk_standard(const PUSample& sample, const Hypothesis& g) {
  if (sample.n() == 0) return 0.0;
  const Predictor pred = Predictor::make(sample, g);
  long errors = 0;
  for (const auto& o : sample.observations())
    errors += pred(o) != o.y_hidden;
  return static_cast<double>(errors) / static_cast<double>(sample.n());
}

double emp_risk(const PUSample& sample, const Hypothesis& g,
                const LossSpec& spec) {
  switch (spec.kind) {
    case LossKind::Standard:
      return emp_risk_standard(sample, g);
    case LossKind::Nontraditional:
      return emp_risk_nontraditional(sample, g);
    case LossKind::SCARAlpha:
      if (!spec.alpha)
        throw std::invalid_argument("alpha: required for the scar-alpha risk");
      return emp_risk_scar_alpha(sample, g, *spec.alpha);
    case LossKind::SCAREm:
      return emp_risk_scar_em(sample, g, spec.e_m.value_or(sample.e_m()));
    case LossKind::SAR:
      return emp_risk_sar(sample, g);
  }
  throw std::logic_error("emp_risk: unreachable");
}

std::string RiskReport::csv_header() {
  return "scenario_id,g_id,n,seed,r_true,r_excess,r_emp_sar,"
         "r_emp_scar_alpha,r_emp_scar_em,r_emp_nontraditional,"
         "r_emp_standard";
}

std::string RiskReport::csv_row() const {
  std::string row = scenario_id + "," + g_id + "," + std::to_string(n) + "," +
                    std::to_string(seed) + "," + format_double(r_true) + "," +
                    format_double(r_excess) + "," + format_double(r_emp_sar) +
                    ",";
  row += r_emp_scar_alpha ? format_double(*r_emp_scar_alpha) : "";
  row += ",";
  row += r_emp_scar_em ? format_double(*r_emp_scar_em) : "";
  row += "," + format_double(r_emp_nontraditional) + "," +
         format_double(r_emp_standard);
  return row;
}

RiskReport risk_report(const Scenario& scenario, const PUSample& sample,
                       const Hypothesis& g, std::optional<double> alpha,
                       std::optional<double> e_m, uint64_t seed) {
  RiskReport r;
  r.scenario_id = scenario.id();
  r.g_id = g.encoding();
  r.n = sample.n();
  r.seed = seed;
  r.r_true = true_risk(scenario, g);
  r.r_excess = excess_risk(scenario, g);
  r.r_emp_sar = emp_risk_sar(sample, g);
  if (alpha) r.r_emp_scar_alpha = emp_risk_scar_alpha(sample, g, *alpha);
  if (e_m) r.r_emp_scar_em = emp_risk_scar_em(sample, g, *e_m);
  r.r_emp_nontraditional = emp_risk_nontraditional(sample, g);
  r.r_emp_standard = emp_risk_standard(sample, g);
  return r;
}

}  // namespace pulab
