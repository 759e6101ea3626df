#pragma once

#include <cstddef>
#include <functional>

namespace calderon::numkit {

/// Fixed-size pool for index-parallel loops. Each index is processed exactly
/// once and results are written by index, so output does not depend on the
/// thread count. One thread (the default) runs inline.
class WorkerPool {
 public:
  explicit WorkerPool(unsigned threads = 1);

  unsigned threads() const { return threads_; }

  /// Runs body(i) for i in [0, count). The first exception thrown is rethrown.
  void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body) const;

 private:
  unsigned threads_;
};

/// Runs on `pool` when given, inline otherwise.
void parallel_for(const WorkerPool* pool, std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace calderon::numkit
