#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mdim {

/// Worker count read from MDIM_WORKERS; 1 when unset or malformed.
inline unsigned workers_from_env() {
  const char* raw = std::getenv("MDIM_WORKERS");
  if (raw == nullptr) return 1;
  try {
    const long v = std::stol(raw);
    return v >= 1 ? static_cast<unsigned>(v) : 1U;
  } catch (...) {
    return 1;
  }
}

/// Runs task(i) for i in [0, count) on up to `workers` threads. Tasks must write
/// only to their own slot; callers reduce afterwards in index order, which keeps
/// results independent of scheduling. The exception of the lowest failing index wins.
template <class Task>
void parallel_for(std::size_t count, unsigned workers, Task&& task) {
  if (count == 0) return;
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = count;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace mdim
