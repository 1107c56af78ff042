#include "hardmdp/util.hpp"

#include <cmath>
#include <thread>
#include <vector>

namespace hardmdp {

double pairwiseSum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  if (xs.size() == 1) return xs[0];
  size_t half = xs.size() / 2;
  return pairwiseSum(xs.first(half)) + pairwiseSum(xs.subspan(half));
}

MeanStderr meanStderr(std::span<const double> xs) {
  MeanStderr stats;
  stats.count = static_cast<long>(xs.size());
  if (xs.empty()) return stats;
  stats.mean = pairwiseSum(xs) / static_cast<double>(xs.size());
  if (xs.size() < 2) return stats;
  double ss = 0.0;
  for (double x : xs) ss += (x - stats.mean) * (x - stats.mean);
  stats.se = std::sqrt(ss / (static_cast<double>(xs.size()) * (static_cast<double>(xs.size()) - 1.0)));
  return stats;
}

void parallelFor(long n, int workers, const std::function<void(long)>& fn) {
  if (workers == 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  int used = static_cast<int>(std::min<long>(workers, n));
  std::vector<std::thread> pool;
  pool.reserve(used);
  std::vector<std::exception_ptr> failures(used);
  for (int w = 0; w < used; ++w)
    pool.emplace_back([&, w] {
      try {
        for (long i = w; i < n; i += used) fn(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);
}

}  // namespace hardmdp
