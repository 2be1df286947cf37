#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pulab/losses.hpp"

namespace pulab {

struct ERMResult {
  Hypothesis minimizer;
  double min_emp_risk = 0.0;
  std::size_t num_ties = 1;
  LossKind loss_kind = LossKind::SAR;

  nlohmann::json to_json() const;
};

// Exact empirical risk minimization by full enumeration of the class.
// Ties are broken by the smallest lexicographic encoding, which is the
// enumeration order. Classes above 2^20 members are rejected.
ERMResult erm_finite(const HypothesisClass& cls, const PUSample& sample,
                     const LossSpec& spec);

// Exact minimizer over 1-D decision stumps: every gap between sorted
// distinct covariate values plus both outer gaps, both polarities, via a
// single sort and prefix sums. Ties prefer the smallest threshold, then
// the >= polarity.
ERMResult erm_stump(const PUSample& sample, const LossSpec& spec);

// Per-replicate excess risk of the empirical minimizer. Requires the
// Bayes classifier to belong to the class. Replicate r draws from the
// stream derived from (seed, 0, r); results are ordered by replicate, so
// the worker count never changes the output.
std::vector<double> excess_of_erm(const Scenario& scenario,
                                  const HypothesisClass& cls, std::size_t n,
                                  const LossSpec& spec, std::size_t replicates,
                                  uint64_t seed, int workers = 0);

}  // namespace pulab
