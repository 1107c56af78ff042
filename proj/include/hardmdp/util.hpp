#pragma once

#include <functional>
#include <span>

namespace hardmdp {

// Sum with a fixed pairwise reduction order, so merged estimates do not
// depend on worker count or scheduling.
double pairwiseSum(std::span<const double> xs);

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;
  long count = 0;
};

MeanStderr meanStderr(std::span<const double> xs);

// Runs fn(0..n-1) on up to `workers` threads; workers <= 1 runs inline.
// workers == 0 means hardware concurrency.
void parallelFor(long n, int workers, const std::function<void(long)>& fn);

}  // namespace hardmdp
