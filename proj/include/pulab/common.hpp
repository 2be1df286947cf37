#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace pulab {

inline constexpr const char* kVersion = "0.1.0";

// Neumaier-compensated accumulator. Used wherever an exact-enumeration
// value or an order-independent aggregate is required.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double kahan_total(std::span<const double> xs);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  std::size_t count = 0;
};

// Mean and standard error computed by compensated two-pass summation,
// so the result does not depend on how the inputs were produced in parallel.
MeanSe mean_se(std::span<const double> xs);

// Worker-count policy: explicit request > PU_RISKLAB_WORKERS > hardware.
int resolve_workers(int requested);

// Runs body(i) for i in [0, count) on up to `workers` threads. Work items
// are claimed through an atomic counter; callers must write results into
// per-index slots so the output is independent of the schedule.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& body);

// Shortest round-trip decimal form, used for all CSV/JSON number output.
std::string format_double(double x);

}  // namespace pulab
