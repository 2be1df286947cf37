// Test-side oracles, written independently of the library internals they
// check: plain enumeration loops, naive ERM scans, and generators that keep
// every propensity a power of two so risk sums are exact in double
// arithmetic and tie-breaking comparisons cannot drift between routes.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pulab/erm.hpp"
#include "pulab/losses.hpp"
#include "pulab/model.hpp"
#include "pulab/rng.hpp"

namespace oracles {

using pulab::Covariate;
using pulab::Hypothesis;
using pulab::HypothesisClass;
using pulab::LossKind;
using pulab::LossSpec;
using pulab::PUObservation;
using pulab::PUSample;
using pulab::Scenario;
using pulab::SupportPoint;

// R(g) by direct enumeration over the support.
inline double true_risk_enum(const Scenario& scenario,
                             const std::vector<uint8_t>& bits) {
  double acc = 0.0, comp = 0.0;
  const auto& pts = scenario.support();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double term =
        pts[i].prob * (bits[i] ? (1.0 - pts[i].eta) : pts[i].eta);
    const double t = acc + term;
    comp += std::abs(acc) >= std::abs(term) ? (acc - t) + term
                                            : (term - t) + acc;
    acc = t;
  }
  return acc + comp;
}

// E[|g - g*|^2 |2 eta - 1|] with g* thresholding eta at 1/2.
inline double excess_via_margin_identity(const Scenario& scenario,
                                         const std::vector<uint8_t>& bits) {
  double acc = 0.0;
  const auto& pts = scenario.support();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const uint8_t star = pts[i].eta >= 0.5 ? 1 : 0;
    if (bits[i] != star)
      acc += pts[i].prob * std::abs(2.0 * pts[i].eta - 1.0);
  }
  return acc;
}

// P(g != S) by enumeration with the biased regression eta~ = eta * e.
inline double nontraditional_target_enum(const Scenario& scenario,
                                         const std::vector<uint8_t>& bits) {
  double acc = 0.0;
  const auto& pts = scenario.support();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double eta_s = pts[i].eta * pts[i].e;
    acc += pts[i].prob * (bits[i] ? (1.0 - eta_s) : eta_s);
  }
  return acc;
}

// Per-observation loss written from the definitions, not via the library.
inline double obs_loss(LossKind kind, int bit, const PUObservation& o,
                       double n, double n_labeled, double alpha, double e_m) {
  switch (kind) {
    case LossKind::Standard:
      return bit != o.y_hidden ? 1.0 : 0.0;
    case LossKind::Nontraditional:
      return bit != o.s ? 1.0 : 0.0;
    case LossKind::SAR:
      if (o.s == 0) return bit ? 1.0 : 0.0;
      return (2.0 * (bit == 0 ? 1.0 : 0.0) - 1.0) / o.e_at_x +
             (bit ? 1.0 : 0.0);
    case LossKind::SCAREm:
      if (o.s == 0) return bit ? 1.0 : 0.0;
      return (2.0 * (bit == 0 ? 1.0 : 0.0) - 1.0) / e_m + (bit ? 1.0 : 0.0);
    case LossKind::SCARAlpha: {
      double v = bit ? 1.0 : 0.0;
      if (o.s == 1 && n_labeled > 0)
        v += n * alpha * ((bit == 0 ? 1.0 : 0.0) - (bit ? 1.0 : 0.0)) /
             n_labeled;
      return v;
    }
  }
  return 0.0;
}

// Empirical risk of explicit bits over the sample, observation order. The
// alpha-form risk follows its two-sum display directly.
inline double emp_risk_enum(const PUSample& sample,
                            const std::vector<uint8_t>& bits, LossKind kind,
                            double alpha, double e_m) {
  if (sample.n() == 0) return 0.0;
  if (kind == LossKind::SCARAlpha) {
    long labeled = 0, labeled_signed = 0, positive_preds = 0;
    for (const auto& o : sample.observations()) {
      const int bit = bits[static_cast<std::size_t>(o.support_index)];
      positive_preds += bit;
      if (o.s) {
        ++labeled;
        labeled_signed += bit == 0 ? 1 : -1;
      }
    }
    const double second = static_cast<double>(positive_preds) /
                          static_cast<double>(sample.n());
    if (labeled == 0) return second;
    return alpha * static_cast<double>(labeled_signed) /
               static_cast<double>(labeled) +
           second;
  }
  double n_labeled = 0;
  for (const auto& o : sample.observations()) n_labeled += o.s;
  double sum = 0.0;
  for (const auto& o : sample.observations())
    sum += obs_loss(kind, bits[static_cast<std::size_t>(o.support_index)], o,
                    static_cast<double>(sample.n()), n_labeled, alpha, e_m);
  return sum / static_cast<double>(sample.n());
}

struct NaiveErm {
  std::size_t argmin = 0;
  double min_risk = 0.0;
  std::size_t ties = 1;
};

// Full re-evaluation of every class member, first strict minimum wins.
inline NaiveErm naive_erm_scan(const HypothesisClass& cls,
                               const PUSample& sample, LossKind kind,
                               double alpha, double e_m) {
  NaiveErm out;
  for (std::size_t k = 0; k < cls.size(); ++k) {
    const auto bits = pulab::materialize_bits(sample.scenario(),
                                              cls.member(k));
    const double risk = emp_risk_enum(sample, bits, kind, alpha, e_m);
    if (k == 0 || risk < out.min_risk) {
      out.argmin = k;
      out.min_risk = risk;
      out.ties = 1;
    } else if (risk == out.min_risk) {
      ++out.ties;
    }
  }
  return out;
}

struct NaiveStump {
  double threshold = 0.0;
  bool polarity_ge = true;
  double min_risk = 0.0;
  std::size_t ties = 1;
};

// O(n^2) scan: every gap between sorted distinct values plus both outer
// gaps, both polarities, each risk recomputed from scratch in original
// observation order.
inline NaiveStump naive_stump_scan(const PUSample& sample, LossKind kind,
                                   double alpha, double e_m) {
  std::vector<double> xs;
  for (const auto& o : sample.observations()) xs.push_back(o.x1);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> thresholds;
  thresholds.push_back(xs.front() - 1.0);
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    double mid = 0.5 * (xs[j] + xs[j + 1]);
    if (!(mid > xs[j])) mid = xs[j + 1];
    thresholds.push_back(mid);
  }
  thresholds.push_back(xs.back() + 1.0);

  double n_labeled = 0;
  for (const auto& o : sample.observations()) n_labeled += o.s;

  NaiveStump out;
  bool have = false;
  for (double t : thresholds) {
    for (int pol = 0; pol < 2; ++pol) {
      double sum = 0.0;
      for (const auto& o : sample.observations()) {
        const bool ge = o.x1 >= t;
        const int bit = pol == 0 ? (ge ? 1 : 0) : (ge ? 0 : 1);
        sum += obs_loss(kind, bit, o, static_cast<double>(sample.n()),
                        n_labeled, alpha, e_m);
      }
      const double risk = sum / static_cast<double>(sample.n());
      if (!have || risk < out.min_risk) {
        have = true;
        out.threshold = t;
        out.polarity_ge = pol == 0;
        out.min_risk = risk;
        out.ties = 1;
      } else if (risk == out.min_risk) {
        ++out.ties;
      }
    }
  }
  return out;
}

// Dyadic propensities keep 1/e an integer, so every loss value and every
// partial sum is exact in double arithmetic.
inline double dyadic_e(pulab::RngStream& rng) {
  constexpr double choices[4] = {1.0, 0.5, 0.25, 0.125};
  return choices[rng.next_u64() % 4];
}

inline Scenario random_discrete_scenario(pulab::RngStream& rng, int max_points,
                                         bool dyadic) {
  const int m = 2 + static_cast<int>(rng.next_u64() % (max_points - 1));
  std::vector<double> raw(static_cast<std::size_t>(m));
  double total = 0.0;
  for (auto& w : raw) {
    w = 0.05 + rng.next_double();
    total += w;
  }
  std::vector<SupportPoint> pts;
  double assigned = 0.0;
  for (int i = 0; i < m; ++i) {
    SupportPoint pt;
    pt.x = {static_cast<double>(i) + 0.5 * rng.next_double()};
    pt.prob = raw[static_cast<std::size_t>(i)] / total;
    if (i == m - 1) pt.prob = 1.0 - assigned;
    assigned += pt.prob;
    pt.eta = rng.next_double();
    pt.e = dyadic ? dyadic_e(rng) : 0.1 + 0.9 * rng.next_double();
    pts.push_back(std::move(pt));
  }
  return Scenario::discrete(std::move(pts), 0.0);
}

}  // namespace oracles
