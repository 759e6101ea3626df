#include "calderon/numkit/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "calderon/numkit/errors.hpp"

namespace calderon::numkit {

WorkerPool::WorkerPool(unsigned threads) : threads_(threads) {
  if (threads == 0) throw ParameterError("worker pool needs at least one thread");
}

void WorkerPool::for_each_index(std::size_t count, const std::function<void(std::size_t)>& body) const {
  if (threads_ == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  const unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(threads_, count));
  std::vector<std::jthread> workers;
  workers.reserve(spawn - 1);
  for (unsigned t = 1; t < spawn; ++t) workers.emplace_back(worker);
  worker();
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

void parallel_for(const WorkerPool* pool, std::size_t count, const std::function<void(std::size_t)>& body) {
  if (pool != nullptr) {
    pool->for_each_index(count, body);
  } else {
    for (std::size_t i = 0; i < count; ++i) body(i);
  }
}

}  // namespace calderon::numkit
