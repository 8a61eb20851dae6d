#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace gecdq {

/// Static-partition parallel loop. Work item i always lands in slot i of
/// whatever the caller writes to, so results never depend on thread count.
class Executor {
 public:
  explicit Executor(int threads = 1) : threads_(std::max(1, threads)) {}

  int threads() const noexcept { return threads_; }

  template <class Fn>
  void parallel_for(std::size_t n, Fn&& fn) const {
    const std::size_t workers = std::min<std::size_t>(threads_, n);
    if (workers <= 1) {
      for (std::size_t i = 0; i < n; ++i) fn(i);
      return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          const std::size_t begin = n * w / workers;
          const std::size_t end = n * (w + 1) / workers;
          try {
            for (std::size_t i = begin; i < end; ++i) fn(i);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  /// out[i] = fn(i) for i in [0, n).
  template <class T, class Fn>
  std::vector<T> map(std::size_t n, Fn&& fn) const {
    std::vector<T> out(n);
    parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
    return out;
  }

 private:
  int threads_;
};

}  // namespace gecdq
