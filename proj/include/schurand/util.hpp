#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace schurand {

// Thrown when a request exceeds the dense-matrix budget (the CLI maps this
// to its own exit code, distinct from validation errors).
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Shortest round-trippable decimal form of a double.
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

// Worker count: SCHURAND_THREADS overrides the flag value when set to a
// positive integer. Always at least 1.
inline int resolve_threads(int flag_value) {
  if (const char* env = std::getenv("SCHURAND_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return flag_value > 0 ? flag_value : 1;
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  long long n = 0;
};

// Streaming scalar accumulator (sum / sum of squares).
struct Accumulator {
  double sum = 0.0;
  double sumsq = 0.0;
  long long n = 0;
  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  // Merge keeps determinism as long as merge order is fixed.
  void merge(const Accumulator& o) {
    sum += o.sum;
    sumsq += o.sumsq;
    n += o.n;
  }
  MeanStderr result() const {
    MeanStderr r;
    r.n = n;
    if (n == 0) return r;
    r.mean = sum / static_cast<double>(n);
    if (n > 1) {
      double var = (sumsq - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1);
      if (var < 0) var = 0;
      r.stderr_ = std::sqrt(var / static_cast<double>(n));
    }
    return r;
  }
};

// Runs `body(worker, begin, end)` over a contiguous partition of [0, total).
// Worker w handles samples [w*total/W, (w+1)*total/W). Caller reduces the
// per-worker results in ascending worker order for bit-determinism at a
// fixed worker count.
inline void run_partitioned(long long total, int workers,
                            const std::function<void(int, long long, long long)>& body) {
  if (workers <= 1) {
    body(0, 0, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    long long begin = total * w / workers;
    long long end = total * (w + 1) / workers;
    pool.emplace_back(body, w, begin, end);
  }
  for (auto& t : pool) t.join();
}

}  // namespace schurand
