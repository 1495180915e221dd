#pragma once

#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ltlab {

/// Worker count: explicit request if positive, else $LTLAB_THREADS, else
/// hardware concurrency.
unsigned resolve_threads(int requested = 0);

/// Runs body(i) for i in [0, n) on up to `threads` workers. Work is split in
/// contiguous blocks; each index is visited exactly once, so results written
/// to per-index slots are independent of the worker count.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& body);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace ltlab
