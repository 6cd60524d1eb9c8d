#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace critlimit {

/// Runs body(worker, index) for every index in [0, count) on up to `threads`
/// workers. Indices are handed out dynamically; the first exception thrown by
/// any worker is rethrown on the calling thread after all workers stop.
template <class MakeWorker, class Body>
void parallel_for(std::size_t count, std::size_t threads, MakeWorker make_worker, Body body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto run = [&] {
    try {
      auto worker = make_worker();
      for (std::size_t i; !stop && (i = next++) < count;) body(worker, i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      stop = true;
    }
  };

  if (threads == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace critlimit
