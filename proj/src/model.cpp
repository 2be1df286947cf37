#include "pulab/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pulab/common.hpp"

namespace pulab {

namespace {

void check_probability_table(const std::vector<SupportPoint>& pts) {
  if (pts.empty()) throw std::invalid_argument("support: must be non-empty");
  KahanSum total;
  for (const auto& pt : pts) {
    if (!(pt.prob >= 0.0) || !std::isfinite(pt.prob))
      throw std::invalid_argument("prob: support masses must be >= 0");
    if (!(pt.eta >= 0.0 && pt.eta <= 1.0))
      throw std::invalid_argument("eta: regression function must be in [0,1]");
    if (!(pt.e > 0.0 && pt.e <= 1.0))
      throw std::invalid_argument("e: propensity must be in (0,1]");
    for (double c : pt.x)
      if (!std::isfinite(c))
        throw std::invalid_argument("x: covariate entries must be finite");
    total.add(pt.prob);
  }
  if (std::abs(total.value() - 1.0) > 1e-9)
    throw std::invalid_argument("prob: support masses must sum to 1");
  const std::size_t d = pts.front().x.size();
  if (d == 0) throw std::invalid_argument("x: dimension must be >= 1");
  for (const auto& pt : pts)
    if (pt.x.size() != d)
      throw std::invalid_argument("x: dimension must be fixed per scenario");
}

double min_margin_discrete(const std::vector<SupportPoint>& pts) {
  double m = 1.0;
  for (const auto& pt : pts) m = std::min(m, std::abs(2.0 * pt.eta - 1.0));
  return m;
}

}  // namespace

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::DiscreteAssouad: return "discrete_assouad";
    case ScenarioKind::DiscreteGeneral: return "discrete_general";
    case ScenarioKind::ContinuousMargin: return "continuous_margin";
  }
  return "?";
}

struct Scenario::Impl {
  static std::shared_ptr<const Impl> finish_discrete(
      std::shared_ptr<Impl> impl);

  ScenarioKind kind;
  std::string id;
  std::vector<SupportPoint> support;  // discrete kinds
  std::vector<Segment> segments;      // continuous
  double alpha = 0.0;
  double margin_h = 0.0;
  double e_min = 1.0;
  double prob_s1 = 0.0;
  // Assouad parameters
  int V = 0;
  double p = 0.0;
  double h = 0.0;
  std::vector<uint8_t> b;
};

Scenario::Scenario(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ScenarioKind Scenario::kind() const { return impl_->kind; }
const std::string& Scenario::id() const { return impl_->id; }
bool Scenario::is_discrete() const {
  return impl_->kind != ScenarioKind::ContinuousMargin;
}

std::size_t Scenario::dimension() const {
  return is_discrete() ? impl_->support.front().x.size() : 1;
}

const std::vector<SupportPoint>& Scenario::support() const {
  if (!is_discrete())
    throw std::logic_error("support: scenario is not discrete");
  return impl_->support;
}

const std::vector<Segment>& Scenario::segments() const {
  if (is_discrete())
    throw std::logic_error("segments: scenario is not continuous");
  return impl_->segments;
}

double Scenario::alpha() const { return impl_->alpha; }
double Scenario::margin_h() const { return impl_->margin_h; }
double Scenario::e_min() const { return impl_->e_min; }
double Scenario::prob_s1() const { return impl_->prob_s1; }

int Scenario::assouad_v() const {
  if (impl_->kind != ScenarioKind::DiscreteAssouad)
    throw std::logic_error("assouad_v: not an Assouad scenario");
  return impl_->V;
}
double Scenario::assouad_p() const {
  if (impl_->kind != ScenarioKind::DiscreteAssouad)
    throw std::logic_error("assouad_p: not an Assouad scenario");
  return impl_->p;
}
double Scenario::assouad_h() const {
  if (impl_->kind != ScenarioKind::DiscreteAssouad)
    throw std::logic_error("assouad_h: not an Assouad scenario");
  return impl_->h;
}
const std::vector<uint8_t>& Scenario::assouad_b() const {
  if (impl_->kind != ScenarioKind::DiscreteAssouad)
    throw std::logic_error("assouad_b: not an Assouad scenario");
  return impl_->b;
}

std::shared_ptr<const Scenario::Impl> Scenario::Impl::finish_discrete(
    std::shared_ptr<Impl> impl) {
  check_probability_table(impl->support);
  KahanSum alpha, ps1;
  impl->e_min = 1.0;
  for (const auto& pt : impl->support) {
    alpha.add(pt.prob * pt.eta);
    ps1.add(pt.prob * pt.eta * pt.e);
    impl->e_min = std::min(impl->e_min, pt.e);
  }
  impl->alpha = alpha.value();
  impl->prob_s1 = ps1.value();
  if (impl->margin_h > 0.0 &&
      min_margin_discrete(impl->support) < impl->margin_h - 1e-12)
    throw std::invalid_argument(
        "margin_h: |2 eta - 1| falls below the certified margin");
  return impl;
}

Scenario Scenario::assouad(int V, double p, double h, std::vector<uint8_t> b,
                           std::vector<double> e_values, std::string id) {
  if (V < 2) throw std::invalid_argument("V: need V >= 2");
  if (!(h > 0.0 && h <= 1.0)) throw std::invalid_argument("h: need h in (0,1]");
  if (!(p > 0.0) || p * (V - 1) > 1.0 + 1e-12)
    throw std::invalid_argument("p: need p in (0, 1/(V-1)]");
  if (static_cast<int>(b.size()) != V - 1)
    throw std::invalid_argument("b: need length V-1");
  if (static_cast<int>(e_values.size()) != V)
    throw std::invalid_argument("e: need length V");
  for (uint8_t bit : b)
    if (bit > 1) throw std::invalid_argument("b: entries must be bits");

  auto impl = std::make_shared<Impl>();
  impl->kind = ScenarioKind::DiscreteAssouad;
  impl->V = V;
  impl->p = p;
  impl->h = h;
  impl->b = b;
  impl->margin_h = h;
  const double last_mass = std::max(0.0, 1.0 - p * (V - 1));
  for (int i = 0; i < V; ++i) {
    SupportPoint pt;
    pt.x.assign(static_cast<std::size_t>(V), 0.0);
    pt.x[static_cast<std::size_t>(i)] = 1.0;
    if (i < V - 1) {
      pt.prob = p;
      pt.eta = 0.5 * (b[static_cast<std::size_t>(i)] ? (1.0 + h) : (1.0 - h));
    } else {
      pt.prob = last_mass;
      pt.eta = 0.0;
    }
    pt.e = e_values[static_cast<std::size_t>(i)];
    impl->support.push_back(std::move(pt));
  }
  if (id.empty()) {
    std::ostringstream os;
    os << "assouad-V" << V << "-p" << p << "-h" << h << "-b";
    for (uint8_t bit : b) os << int(bit);
    impl->id = os.str();
  } else {
    impl->id = std::move(id);
  }
  return Scenario(Impl::finish_discrete(std::move(impl)));
}

Scenario Scenario::assouad_scar(int V, double p, double h,
                                std::vector<uint8_t> b, double e,
                                std::string id) {
  return assouad(V, p, h, std::move(b),
                 std::vector<double>(static_cast<std::size_t>(V), e),
                 std::move(id));
}

Scenario Scenario::discrete(std::vector<SupportPoint> points, double margin_h,
                            std::string id) {
  if (!(margin_h >= 0.0 && margin_h <= 1.0))
    throw std::invalid_argument("margin_h: need margin in [0,1]");
  auto impl = std::make_shared<Impl>();
  impl->kind = ScenarioKind::DiscreteGeneral;
  impl->support = std::move(points);
  impl->margin_h = margin_h;
  impl->id = id.empty() ? "discrete" : std::move(id);
  return Scenario(Impl::finish_discrete(std::move(impl)));
}

Scenario Scenario::continuous_margin(std::vector<Segment> segments,
                                     std::string id) {
  if (segments.empty())
    throw std::invalid_argument("segments: must be non-empty");
  if (segments.front().lo != 0.0 || segments.back().hi != 1.0)
    throw std::invalid_argument("segments: must tile [0,1]");
  auto impl = std::make_shared<Impl>();
  impl->kind = ScenarioKind::ContinuousMargin;
  impl->id = id.empty() ? "continuous" : std::move(id);
  KahanSum alpha, ps1;
  impl->e_min = 1.0;
  double margin = 1.0;
  double prev_hi = 0.0;
  for (const auto& seg : segments) {
    if (seg.lo != prev_hi || !(seg.hi > seg.lo))
      throw std::invalid_argument("segments: must be contiguous, increasing");
    if (!(seg.eta >= 0.0 && seg.eta <= 1.0))
      throw std::invalid_argument("eta: must be in [0,1]");
    if (!(seg.e > 0.0 && seg.e <= 1.0))
      throw std::invalid_argument("e: propensity must be in (0,1]");
    const double len = seg.hi - seg.lo;
    alpha.add(len * seg.eta);
    ps1.add(len * seg.eta * seg.e);
    impl->e_min = std::min(impl->e_min, seg.e);
    margin = std::min(margin, std::abs(2.0 * seg.eta - 1.0));
    prev_hi = seg.hi;
  }
  impl->segments = std::move(segments);
  impl->alpha = alpha.value();
  impl->prob_s1 = ps1.value();
  impl->margin_h = margin;
  return Scenario(std::move(impl));
}

nlohmann::json Scenario::to_json() const {
  nlohmann::json j;
  j["kind"] = to_string(impl_->kind);
  j["id"] = impl_->id;
  if (is_discrete()) {
    nlohmann::json support = nlohmann::json::array();
    nlohmann::json prob = nlohmann::json::array();
    nlohmann::json eta = nlohmann::json::array();
    nlohmann::json e = nlohmann::json::array();
    for (const auto& pt : impl_->support) {
      support.push_back(pt.x);
      prob.push_back(pt.prob);
      eta.push_back(pt.eta);
      e.push_back(pt.e);
    }
    j["support"] = std::move(support);
    j["prob"] = std::move(prob);
    j["eta"] = std::move(eta);
    j["e"] = std::move(e);
    j["margin_h"] = impl_->margin_h;
    if (impl_->kind == ScenarioKind::DiscreteAssouad) {
      j["V"] = impl_->V;
      j["p"] = impl_->p;
      j["h"] = impl_->h;
      j["b"] = impl_->b;
    }
  } else {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& seg : impl_->segments)
      segs.push_back({{"lo", seg.lo},
                      {"hi", seg.hi},
                      {"eta", seg.eta},
                      {"e", seg.e}});
    j["segments"] = std::move(segs);
  }
  return j;
}

Scenario Scenario::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const std::string id = j.value("id", std::string{});
  if (kind == "discrete_assouad") {
    return assouad(j.at("V").get<int>(), j.at("p").get<double>(),
                   j.at("h").get<double>(),
                   j.at("b").get<std::vector<uint8_t>>(),
                   j.at("e").get<std::vector<double>>(), id);
  }
  if (kind == "discrete_general") {
    const auto xs = j.at("support").get<std::vector<Covariate>>();
    const auto prob = j.at("prob").get<std::vector<double>>();
    const auto eta = j.at("eta").get<std::vector<double>>();
    const auto e = j.at("e").get<std::vector<double>>();
    if (prob.size() != xs.size() || eta.size() != xs.size() ||
        e.size() != xs.size())
      throw std::invalid_argument("scenario: table lengths disagree");
    std::vector<SupportPoint> pts;
    for (std::size_t i = 0; i < xs.size(); ++i)
      pts.push_back({xs[i], prob[i], eta[i], e[i]});
    return discrete(std::move(pts), j.value("margin_h", 0.0), id);
  }
  if (kind == "continuous_margin") {
    std::vector<Segment> segs;
    for (const auto& sj : j.at("segments"))
      segs.push_back({sj.at("lo").get<double>(), sj.at("hi").get<double>(),
                      sj.at("eta").get<double>(), sj.at("e").get<double>()});
    return continuous_margin(std::move(segs), id);
  }
  throw std::invalid_argument("kind: unknown scenario kind '" + kind + "'");
}

bool Scenario::operator==(const Scenario& other) const {
  return to_json() == other.to_json();
}

// ---------------------------------------------------------------------------
// Hypothesis

Hypothesis Hypothesis::table(std::vector<uint8_t> bits) {
  for (uint8_t b : bits)
    if (b > 1) throw std::invalid_argument("bits: entries must be bits");
  Hypothesis g;
  g.kind_ = Kind::TableOnSupport;
  g.bits_ = std::move(bits);
  return g;
}

Hypothesis Hypothesis::stump(double threshold, StumpPolarity polarity) {
  if (!std::isfinite(threshold))
    throw std::invalid_argument("threshold: must be finite");
  Hypothesis g;
  g.kind_ = Kind::Stump;
  g.threshold_ = threshold;
  g.polarity_ = polarity;
  return g;
}

Hypothesis Hypothesis::explicit_fn(std::function<int(const Covariate&)> fn,
                                   std::string label, bool segment_constant) {
  if (!fn) throw std::invalid_argument("fn: must be callable");
  Hypothesis g;
  g.kind_ = Kind::Explicit;
  g.fn_ = std::move(fn);
  g.label_ = std::move(label);
  g.segment_constant_ = segment_constant;
  return g;
}

Hypothesis::Kind Hypothesis::kind() const { return kind_; }

const std::vector<uint8_t>& Hypothesis::bits() const {
  if (kind_ != Kind::TableOnSupport)
    throw std::logic_error("bits: not a table hypothesis");
  return bits_;
}

double Hypothesis::threshold() const {
  if (kind_ != Kind::Stump) throw std::logic_error("threshold: not a stump");
  return threshold_;
}

StumpPolarity Hypothesis::polarity() const {
  if (kind_ != Kind::Stump) throw std::logic_error("polarity: not a stump");
  return polarity_;
}

bool Hypothesis::segment_constant() const { return segment_constant_; }

int Hypothesis::eval_x(const Covariate& x) const {
  switch (kind_) {
    case Kind::Stump:
      return eval_x1(x.at(0));
    case Kind::Explicit: {
      const int v = fn_(x);
      if (v != 0 && v != 1)
        throw std::domain_error("hypothesis: output must be in {0,1}");
      return v;
    }
    case Kind::TableOnSupport:
      throw std::logic_error(
          "eval_x: table hypotheses are evaluated by support index");
  }
  return 0;
}

int Hypothesis::eval_x1(double x1) const {
  if (kind_ == Kind::Stump) {
    const bool ge = x1 >= threshold_;
    return polarity_ == StumpPolarity::GE ? (ge ? 1 : 0) : (ge ? 0 : 1);
  }
  return eval_x(Covariate{x1});
}

int Hypothesis::eval_support(std::size_t support_index) const {
  if (kind_ != Kind::TableOnSupport)
    throw std::logic_error("eval_support: not a table hypothesis");
  return bits_.at(support_index);
}

std::string Hypothesis::encoding() const {
  switch (kind_) {
    case Kind::TableOnSupport: {
      std::string out = "t:";
      for (uint8_t b : bits_) out += b ? '1' : '0';
      return out;
    }
    case Kind::Stump:
      return std::string("s:") +
             (polarity_ == StumpPolarity::GE ? "ge:" : "lt:") +
             format_double(threshold_);
    case Kind::Explicit:
      return "x:" + label_;
  }
  return "?";
}

std::vector<uint8_t> materialize_bits(const Scenario& scenario,
                                      const Hypothesis& g) {
  const auto& pts = scenario.support();
  std::vector<uint8_t> bits(pts.size());
  if (g.kind() == Hypothesis::Kind::TableOnSupport) {
    if (g.bits().size() != pts.size())
      throw std::invalid_argument(
          "hypothesis: table size does not match the support");
    return g.bits();
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    bits[i] = static_cast<uint8_t>(g.eval_x(pts[i].x));
  return bits;
}

// ---------------------------------------------------------------------------
// PUSample

PUSample::PUSample(Scenario scenario, std::vector<PUObservation> observations)
    : scenario_(std::move(scenario)),
      obs_(std::move(observations)),
      e_m_(scenario_.e_min()) {
  const std::size_t support_size =
      scenario_.is_discrete() ? scenario_.support().size() : 0;
  for (const auto& o : obs_) {
    if (o.s > 1 || o.y_hidden > 1)
      throw std::invalid_argument("observation: s and y must be bits");
    if (o.s == 1 && o.y_hidden != 1)
      throw std::invalid_argument(
          "observation: s=1 requires y=1, negatives are never labeled");
    if (!std::isnan(o.e_at_x)) {
      if (!(o.e_at_x > 0.0 && o.e_at_x <= 1.0))
        throw std::invalid_argument("e_at_x: must be in (0,1]");
      if (o.e_at_x < e_m_ - 1e-12)
        throw std::invalid_argument("e_at_x: below the certified bound e_m");
    } else if (o.s == 1) {
      throw std::invalid_argument(
          "missing-propensity: labeled observation lacks e_at_x");
    }
    if (scenario_.is_discrete()) {
      if (o.support_index < 0 ||
          static_cast<std::size_t>(o.support_index) >= support_size)
        throw std::invalid_argument("support_index: out of range");
    }
  }
}

Covariate PUSample::covariate(std::size_t i) const {
  const auto& o = obs_.at(i);
  if (scenario_.is_discrete())
    return scenario_.support()[static_cast<std::size_t>(o.support_index)].x;
  return Covariate{o.x1};
}

// ---------------------------------------------------------------------------
// HypothesisClass

HypothesisClass HypothesisClass::finite(std::vector<Hypothesis> members,
                                        int vc_dim, std::string id) {
  if (members.empty())
    throw std::invalid_argument("members: must be non-empty");
  if (vc_dim < 1) throw std::invalid_argument("vc_dim: must be >= 1");
  HypothesisClass c;
  c.kind_ = Kind::FiniteEnumeration;
  c.members_ = std::move(members);
  c.vc_dim_ = vc_dim;
  c.id_ = id.empty() ? "finite" : std::move(id);
  return c;
}

HypothesisClass HypothesisClass::all_labelings(int num_points) {
  if (num_points < 1 || num_points > 20)
    throw std::invalid_argument(
        "enumeration-guard: all_labelings supports 1..20 points");
  HypothesisClass c;
  c.kind_ = Kind::AllLabelingsOfPoints;
  c.num_points_ = num_points;
  c.vc_dim_ = num_points;
  c.id_ = "labelings" + std::to_string(num_points);
  return c;
}

HypothesisClass HypothesisClass::stumps_1d() {
  HypothesisClass c;
  c.kind_ = Kind::Stumps1D;
  c.vc_dim_ = 2;
  c.id_ = "stumps1d";
  return c;
}

std::size_t HypothesisClass::size() const {
  switch (kind_) {
    case Kind::FiniteEnumeration:
      return members_.size();
    case Kind::AllLabelingsOfPoints:
      return std::size_t{1} << num_points_;
    case Kind::Stumps1D:
      throw std::logic_error("size: stump class is not enumerable");
  }
  return 0;
}

Hypothesis HypothesisClass::member(std::size_t k) const {
  switch (kind_) {
    case Kind::FiniteEnumeration:
      return members_.at(k);
    case Kind::AllLabelingsOfPoints: {
      if (k >= size()) throw std::out_of_range("member: index out of range");
      std::vector<uint8_t> bits(static_cast<std::size_t>(num_points_));
      // Bit 0 of the encoding is the most significant so that ascending k
      // is ascending lexicographic order of the bit string.
      for (int i = 0; i < num_points_; ++i)
        bits[static_cast<std::size_t>(i)] =
            static_cast<uint8_t>((k >> (num_points_ - 1 - i)) & 1u);
      return Hypothesis::table(std::move(bits));
    }
    case Kind::Stumps1D:
      throw std::logic_error("member: stump class is not enumerable");
  }
  throw std::logic_error("member: unreachable");
}

// ---------------------------------------------------------------------------
// Operations

Hypothesis bayes_classifier(const Scenario& scenario) {
  if (scenario.is_discrete()) {
    std::vector<uint8_t> bits;
    bits.reserve(scenario.support().size());
    for (const auto& pt : scenario.support())
      bits.push_back(pt.eta >= 0.5 ? 1 : 0);
    return Hypothesis::table(std::move(bits));
  }
  std::vector<std::pair<double, uint8_t>> pieces;  // (hi, bit)
  std::string label = "seg:";
  for (const auto& seg : scenario.segments()) {
    const uint8_t bit = seg.eta >= 0.5 ? 1 : 0;
    pieces.emplace_back(seg.hi, bit);
    label += bit ? '1' : '0';
  }
  auto fn = [pieces](const Covariate& x) -> int {
    const double v = x.at(0);
    for (const auto& [hi, bit] : pieces)
      if (v < hi) return bit;
    return pieces.back().second;
  };
  return Hypothesis::explicit_fn(std::move(fn), std::move(label),
                                 /*segment_constant=*/true);
}

Hypothesis bayes_classifier_s(const Scenario& scenario) {
  if (scenario.is_discrete()) {
    std::vector<uint8_t> bits;
    bits.reserve(scenario.support().size());
    for (const auto& pt : scenario.support())
      bits.push_back(pt.eta * pt.e >= 0.5 ? 1 : 0);
    return Hypothesis::table(std::move(bits));
  }
  std::vector<std::pair<double, uint8_t>> pieces;
  std::string label = "seg-s:";
  for (const auto& seg : scenario.segments()) {
    const uint8_t bit = seg.eta * seg.e >= 0.5 ? 1 : 0;
    pieces.emplace_back(seg.hi, bit);
    label += bit ? '1' : '0';
  }
  auto fn = [pieces](const Covariate& x) -> int {
    const double v = x.at(0);
    for (const auto& [hi, bit] : pieces)
      if (v < hi) return bit;
    return pieces.back().second;
  };
  return Hypothesis::explicit_fn(std::move(fn), std::move(label),
                                 /*segment_constant=*/true);
}

namespace {

// Integrates P(g(X) != label) over a continuous scenario, where the label
// regression is eta (label Y) or eta*e (label S), selected by use_s.
double continuous_risk(const Scenario& scenario, const Hypothesis& g,
                       bool use_s) {
  const bool splittable =
      g.kind() == Hypothesis::Kind::Stump ||
      (g.kind() == Hypothesis::Kind::Explicit && g.segment_constant());
  if (!splittable)
    throw std::invalid_argument(
        "not-representable: exact risk on a continuous scenario needs a "
        "stump or a segment-constant hypothesis");
  KahanSum risk;
  for (const auto& seg : scenario.segments()) {
    const double regression = use_s ? seg.eta * seg.e : seg.eta;
    // Split the segment at the stump threshold when it falls inside.
    double cuts[3] = {seg.lo, seg.hi, seg.hi};
    int ncuts = 2;
    if (g.kind() == Hypothesis::Kind::Stump) {
      const double t = g.threshold();
      if (t > seg.lo && t < seg.hi) {
        cuts[1] = t;
        cuts[2] = seg.hi;
        ncuts = 3;
      }
    }
    for (int i = 0; i + 1 < ncuts; ++i) {
      const double lo = cuts[i], hi = cuts[i + 1];
      const int bit = g.eval_x1(0.5 * (lo + hi));
      risk.add((hi - lo) * (bit ? (1.0 - regression) : regression));
    }
  }
  return risk.value();
}

}  // namespace

double true_risk(const Scenario& scenario, const Hypothesis& g) {
  if (!scenario.is_discrete()) return continuous_risk(scenario, g, false);
  const auto bits = materialize_bits(scenario, g);
  const auto& pts = scenario.support();
  KahanSum risk;
  for (std::size_t i = 0; i < pts.size(); ++i)
    risk.add(pts[i].prob * (bits[i] ? (1.0 - pts[i].eta) : pts[i].eta));
  return risk.value();
}

double true_risk_s(const Scenario& scenario, const Hypothesis& g) {
  if (!scenario.is_discrete()) return continuous_risk(scenario, g, true);
  const auto bits = materialize_bits(scenario, g);
  const auto& pts = scenario.support();
  KahanSum risk;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double eta_s = pts[i].eta * pts[i].e;
    risk.add(pts[i].prob * (bits[i] ? (1.0 - eta_s) : eta_s));
  }
  return risk.value();
}

double excess_risk(const Scenario& scenario, const Hypothesis& g) {
  const double r = true_risk(scenario, g);
  const double r_star = true_risk(scenario, bayes_classifier(scenario));
  return std::max(0.0, r - r_star);
}

namespace {

std::size_t pick_index(const std::vector<double>& cum, double u) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  return std::min<std::size_t>(
      static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
}

}  // namespace

PUSample sample(const Scenario& scenario, std::size_t n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("n: need n >= 1");
  std::vector<PUObservation> obs;
  obs.reserve(n);
  if (scenario.is_discrete()) {
    const auto& pts = scenario.support();
    std::vector<double> cum(pts.size());
    double running = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      running += pts[i].prob;
      cum[i] = running;
    }
    cum.back() = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t idx = pick_index(cum, rng.next_double());
      const auto& pt = pts[idx];
      const uint8_t y = rng.bernoulli(pt.eta) ? 1 : 0;
      const uint8_t s = (y && rng.bernoulli(pt.e)) ? 1 : 0;
      obs.push_back({static_cast<int32_t>(idx), pt.x[0], s, y, pt.e});
    }
  } else {
    const auto& segs = scenario.segments();
    std::vector<double> cum(segs.size());
    double running = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      running += segs[i].hi - segs[i].lo;
      cum[i] = running;
    }
    cum.back() = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t idx = pick_index(cum, rng.next_double());
      const auto& seg = segs[idx];
      const double x1 = seg.lo + rng.next_double() * (seg.hi - seg.lo);
      const uint8_t y = rng.bernoulli(seg.eta) ? 1 : 0;
      const uint8_t s = (y && rng.bernoulli(seg.e)) ? 1 : 0;
      obs.push_back({-1, x1, s, y, seg.e});
    }
  }
  return PUSample(scenario, std::move(obs));
}

double expected_labeled_count(const Scenario& scenario, std::size_t n) {
  return static_cast<double>(n) * scenario.prob_s1();
}

}  // namespace pulab
