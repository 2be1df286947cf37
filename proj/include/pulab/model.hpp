#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pulab/rng.hpp"

namespace pulab {

using Covariate = std::vector<double>;

// One atom of a discrete joint distribution of (X, Y, S):
// P(X = x) = prob, P(Y=1 | X=x) = eta, P(S=1 | Y=1, X=x) = e.
struct SupportPoint {
  Covariate x;
  double prob;
  double eta;
  double e;
};

// Piece of a 1-D continuous scenario: X uniform on [lo, hi) within the
// piece, eta and e constant on it.
struct Segment {
  double lo;
  double hi;
  double eta;
  double e;
};

enum class ScenarioKind { DiscreteAssouad, DiscreteGeneral, ContinuousMargin };

const char* to_string(ScenarioKind kind);

// Immutable joint distribution of (X, Y, S). Copies share state and are
// safe to use concurrently.
class Scenario {
 public:
  // Assouad family from the minimax construction: V support points
  // realized as basis vectors of R^V, P(X=x_i)=p for i<V, the last point
  // carries the remaining mass with eta=0, and eta(x_i)=(1+(2b_i-1)h)/2.
  static Scenario assouad(int V, double p, double h, std::vector<uint8_t> b,
                          std::vector<double> e_values, std::string id = "");
  // Same with constant propensity.
  static Scenario assouad_scar(int V, double p, double h,
                               std::vector<uint8_t> b, double e,
                               std::string id = "");
  // Arbitrary finite support. margin_h is the certified Massart margin
  // (0 if none is claimed); it is validated against eta.
  static Scenario discrete(std::vector<SupportPoint> points, double margin_h,
                           std::string id = "");
  // X uniform over [0,1) split into segments with piecewise-constant
  // eta and e. The margin is derived from the eta values.
  static Scenario continuous_margin(std::vector<Segment> segments,
                                    std::string id = "");

  ScenarioKind kind() const;
  const std::string& id() const;
  bool is_discrete() const;
  std::size_t dimension() const;

  const std::vector<SupportPoint>& support() const;  // discrete kinds only
  const std::vector<Segment>& segments() const;      // continuous only

  double alpha() const;     // P(Y=1) = E[eta(X)], exact
  double margin_h() const;  // certified Massart margin, 0 if none
  double e_min() const;     // lower bound on the propensity over the support
  double prob_s1() const;   // P(S=1) = E[eta(X) e(X)], exact

  // Assouad parameters; throw unless kind()==DiscreteAssouad.
  int assouad_v() const;
  double assouad_p() const;
  double assouad_h() const;
  const std::vector<uint8_t>& assouad_b() const;

  nlohmann::json to_json() const;
  static Scenario from_json(const nlohmann::json& j);

  bool operator==(const Scenario& other) const;

 private:
  struct Impl;
  explicit Scenario(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

enum class StumpPolarity : uint8_t { GE, LT };

// Binary classifier. Tables are indexed by support point, stumps act on
// the first coordinate, explicit hypotheses wrap a closure.
class Hypothesis {
 public:
  enum class Kind { TableOnSupport, Stump, Explicit };

  static Hypothesis table(std::vector<uint8_t> bits);
  static Hypothesis stump(double threshold, StumpPolarity polarity);
  // segment_constant marks closures that are constant on every segment of
  // the continuous scenario they were built for; exact integration relies
  // on it.
  static Hypothesis explicit_fn(std::function<int(const Covariate&)> fn,
                                std::string label,
                                bool segment_constant = false);

  Kind kind() const;
  const std::vector<uint8_t>& bits() const;  // TableOnSupport only
  double threshold() const;                  // Stump only
  StumpPolarity polarity() const;            // Stump only
  bool segment_constant() const;

  int eval_x(const Covariate& x) const;  // Stump / Explicit
  int eval_x1(double x1) const;          // Stump / Explicit (1-D shortcut)
  int eval_support(std::size_t support_index) const;  // TableOnSupport

  // Encoding used for ordering, tie-breaking and serialization:
  // "t:0110", "s:ge:<thr>", "x:<label>".
  std::string encoding() const;

 private:
  Kind kind_;
  std::vector<uint8_t> bits_;
  double threshold_ = 0.0;
  StumpPolarity polarity_ = StumpPolarity::GE;
  std::function<int(const Covariate&)> fn_;
  std::string label_;
  bool segment_constant_ = false;
};

// Evaluates g at every support point of a discrete scenario.
std::vector<uint8_t> materialize_bits(const Scenario& scenario,
                                      const Hypothesis& g);

struct PUObservation {
  int32_t support_index;  // index into scenario support; -1 for continuous
  double x1;              // first coordinate of the covariate
  uint8_t s;              // observed label
  uint8_t y_hidden;       // ground truth, evaluation only
  double e_at_x;          // propensity at x; NaN encodes "absent"
};

class PUSample {
 public:
  PUSample(Scenario scenario, std::vector<PUObservation> observations);

  std::size_t n() const { return obs_.size(); }
  const std::vector<PUObservation>& observations() const { return obs_; }
  double e_m() const { return e_m_; }
  const Scenario& scenario() const { return scenario_; }
  Covariate covariate(std::size_t i) const;

 private:
  Scenario scenario_;
  std::vector<PUObservation> obs_;
  double e_m_;
};

class HypothesisClass {
 public:
  enum class Kind { FiniteEnumeration, AllLabelingsOfPoints, Stumps1D };

  static HypothesisClass finite(std::vector<Hypothesis> members, int vc_dim,
                                std::string id = "");
  static HypothesisClass all_labelings(int num_points);
  static HypothesisClass stumps_1d();

  Kind kind() const { return kind_; }
  int vc_dim() const { return vc_dim_; }
  const std::string& id() const { return id_; }
  bool enumerable() const { return kind_ != Kind::Stumps1D; }
  std::size_t size() const;  // throws for Stumps1D
  // Enumeration order is ascending lexicographic encoding.
  Hypothesis member(std::size_t k) const;

 private:
  Kind kind_;
  int vc_dim_ = 0;
  int num_points_ = 0;
  std::vector<Hypothesis> members_;
  std::string id_;
};

// g*(x) = 1[eta(x) >= 1/2]; table for discrete scenarios, segment-constant
// explicit hypothesis for continuous ones.
Hypothesis bayes_classifier(const Scenario& scenario);

// Bayes classifier of the observed label S, thresholding eta(x)e(x).
Hypothesis bayes_classifier_s(const Scenario& scenario);

// R(g) = P(g(X) != Y), exact.
double true_risk(const Scenario& scenario, const Hypothesis& g);

// P(g(X) != S), exact; the quantity targeted by the nontraditional risk.
double true_risk_s(const Scenario& scenario, const Hypothesis& g);

// l(g, g*) = R(g) - R(g*), clamped at 0 against roundoff.
double excess_risk(const Scenario& scenario, const Hypothesis& g);

PUSample sample(const Scenario& scenario, std::size_t n, RngStream& rng);

// n * E[eta(X) e(X)]; equals n*alpha*e_m under constant propensity.
double expected_labeled_count(const Scenario& scenario, std::size_t n);

}  // namespace pulab
