#include "pulab/common.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace pulab {

double kahan_total(std::span<const double> xs) {
  KahanSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

MeanSe mean_se(std::span<const double> xs) {
  MeanSe out;
  out.count = xs.size();
  if (xs.empty()) return out;
  out.mean = kahan_total(xs) / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  KahanSum sq;
  for (double x : xs) {
    const double d = x - out.mean;
    sq.add(d * d);
  }
  const double var = sq.value() / static_cast<double>(xs.size() - 1);
  out.se = std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PU_RISKLAB_WORKERS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& body) {
  const int nthreads =
      static_cast<int>(std::min<std::size_t>(resolve_workers(workers), count));
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::string format_double(double x) {
  return nlohmann::json(x).dump();
}

}  // namespace pulab
