#include "pulab/erm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pulab/common.hpp"
#include "pulab/rng.hpp"

namespace pulab {

nlohmann::json ERMResult::to_json() const {
  return nlohmann::json{{"loss_kind", to_string(loss_kind)},
                        {"min_emp_risk", min_emp_risk},
                        {"num_ties", num_ties},
                        {"hypothesis_encoding", minimizer.encoding()}};
}

ERMResult erm_finite(const HypothesisClass& cls, const PUSample& sample,
                     const LossSpec& spec) {
  if (!cls.enumerable())
    throw std::invalid_argument("class: erm_finite needs an enumerable class");
  const std::size_t count = cls.size();
  if (count > (std::size_t{1} << 20))
    throw std::invalid_argument("enumeration-guard: class exceeds 2^20");

  ERMResult best;
  best.loss_kind = spec.kind;
  best.minimizer = cls.member(0);
  best.min_emp_risk = emp_risk(sample, best.minimizer, spec);
  best.num_ties = 1;
  for (std::size_t k = 1; k < count; ++k) {
    Hypothesis g = cls.member(k);
    const double risk = emp_risk(sample, g, spec);
    if (risk < best.min_emp_risk) {
      best.min_emp_risk = risk;
      best.minimizer = std::move(g);
      best.num_ties = 1;
    } else if (risk == best.min_emp_risk) {
      ++best.num_ties;
    }
  }
  return best;
}

namespace {

// Raw per-observation loss of predicting `bit`, scaled so that the
// empirical risk is the plain mean of these values over the sample.
double raw_loss(const LossSpec& spec, const PUObservation& o, int bit,
                double n, double n_labeled, double e_m_default) {
  switch (spec.kind) {
    case LossKind::Standard:
      return bit != o.y_hidden ? 1.0 : 0.0;
    case LossKind::Nontraditional:
      return bit != o.s ? 1.0 : 0.0;
    case LossKind::SAR:
      return loss_sar(bit, o.s, o.e_at_x);
    case LossKind::SCAREm:
      return loss_sar(bit, o.s, spec.e_m.value_or(e_m_default));
    case LossKind::SCARAlpha: {
      if (!spec.alpha)
        throw std::invalid_argument("alpha: required for the scar-alpha risk");
      double v = bit ? 1.0 : 0.0;
      if (o.s && n_labeled > 0)
        v += n * (*spec.alpha) * (bit ? -1.0 : 1.0) / n_labeled;
      return v;
    }
  }
  throw std::logic_error("raw_loss: unreachable");
}

}  // namespace

ERMResult erm_stump(const PUSample& sample, const LossSpec& spec) {
  if (sample.scenario().dimension() != 1)
    throw std::invalid_argument("erm_stump: needs 1-D covariates");

  ERMResult out;
  out.loss_kind = spec.kind;
  const std::size_t n = sample.n();
  if (n == 0) {
    out.minimizer = Hypothesis::stump(0.0, StumpPolarity::GE);
    out.min_emp_risk = 0.0;
    out.num_ties = 2;
    return out;
  }

  double n_labeled = 0;
  for (const auto& o : sample.observations()) n_labeled += o.s;

  struct Item {
    double x;
    double a0;  // loss of predicting 0
    double a1;  // loss of predicting 1
  };
  std::vector<Item> items;
  items.reserve(n);
  for (const auto& o : sample.observations())
    items.push_back(
        {o.x1,
         raw_loss(spec, o, 0, static_cast<double>(n), n_labeled,
                  sample.e_m()),
         raw_loss(spec, o, 1, static_cast<double>(n), n_labeled,
                  sample.e_m())});
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.x < b.x; });

  // prefix0[k] = sum of a0 over ranks < k; suffix1[k] = sum of a1 over
  // ranks >= k; same for the opposite polarity.
  std::vector<double> prefix0(n + 1, 0.0), prefix1(n + 1, 0.0);
  std::vector<double> suffix0(n + 1, 0.0), suffix1(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    prefix0[j + 1] = prefix0[j] + items[j].a0;
    prefix1[j + 1] = prefix1[j] + items[j].a1;
  }
  for (std::size_t j = n; j-- > 0;) {
    suffix0[j] = suffix0[j + 1] + items[j].a0;
    suffix1[j] = suffix1[j + 1] + items[j].a1;
  }

  const auto threshold_at = [&](std::size_t k) -> double {
    if (k == 0) return items.front().x - 1.0;
    if (k == n) return items.back().x + 1.0;
    const double lo = items[k - 1].x, hi = items[k].x;
    double mid = 0.5 * (lo + hi);
    if (!(mid > lo)) mid = hi;  // adjacent doubles: the upper value splits
    return mid;
  };

  bool have_best = false;
  double best_raw = 0.0;
  std::size_t ties = 0;
  double best_t = 0.0;
  StumpPolarity best_pol = StumpPolarity::GE;

  for (std::size_t k = 0; k <= n; ++k) {
    const bool is_gap =
        k == 0 || k == n || items[k - 1].x < items[k].x;
    if (!is_gap) continue;
    const double risk_ge = prefix0[k] + suffix1[k];  // ranks >= k predict 1
    const double risk_lt = prefix1[k] + suffix0[k];  // ranks < k predict 1
    for (int pol = 0; pol < 2; ++pol) {
      const double raw = pol == 0 ? risk_ge : risk_lt;
      if (!have_best || raw < best_raw) {
        have_best = true;
        best_raw = raw;
        ties = 1;
        best_t = threshold_at(k);
        best_pol = pol == 0 ? StumpPolarity::GE : StumpPolarity::LT;
      } else if (raw == best_raw) {
        ++ties;
      }
    }
  }

  out.minimizer = Hypothesis::stump(best_t, best_pol);
  // Report the risk through the same path emp_risk uses, so re-evaluating
  // the minimizer reproduces it exactly.
  out.min_emp_risk = emp_risk(sample, out.minimizer, spec);
  out.num_ties = ties;
  return out;
}

namespace {

bool bayes_in_class(const Scenario& scenario, const HypothesisClass& cls) {
  switch (cls.kind()) {
    case HypothesisClass::Kind::AllLabelingsOfPoints:
      return scenario.is_discrete() &&
             cls.vc_dim() == static_cast<int>(scenario.support().size());
    case HypothesisClass::Kind::FiniteEnumeration: {
      const auto star = materialize_bits(scenario, bayes_classifier(scenario));
      for (std::size_t k = 0; k < cls.size(); ++k)
        if (materialize_bits(scenario, cls.member(k)) == star) return true;
      return false;
    }
    case HypothesisClass::Kind::Stumps1D: {
      if (scenario.dimension() != 1) return false;
      // Bayes must be a one-threshold function of x.
      std::vector<uint8_t> bits;
      if (scenario.is_discrete()) {
        bits = materialize_bits(scenario, bayes_classifier(scenario));
      } else {
        for (const auto& seg : scenario.segments())
          bits.push_back(seg.eta >= 0.5 ? 1 : 0);
      }
      std::size_t changes = 0;
      for (std::size_t i = 1; i < bits.size(); ++i)
        changes += bits[i] != bits[i - 1];
      return changes <= 1;
    }
  }
  return false;
}

}  // namespace

std::vector<double> excess_of_erm(const Scenario& scenario,
                                  const HypothesisClass& cls, std::size_t n,
                                  const LossSpec& spec, std::size_t replicates,
                                  uint64_t seed, int workers) {
  if (!bayes_in_class(scenario, cls))
    throw std::invalid_argument(
        "approximation-error-nonzero: Bayes classifier is not in the class");
  const double r_star = true_risk(scenario, bayes_classifier(scenario));
  std::vector<double> out(replicates, 0.0);
  parallel_for(replicates, workers, [&](std::size_t r) {
    RngStream rng = derive_stream(seed, 0, r);
    const PUSample smp = sample(scenario, n, rng);
    const ERMResult erm = cls.kind() == HypothesisClass::Kind::Stumps1D
                              ? erm_stump(smp, spec)
                              : erm_finite(cls, smp, spec);
    out[r] = std::max(0.0, true_risk(scenario, erm.minimizer) - r_star);
  });
  return out;
}

}  // namespace pulab
