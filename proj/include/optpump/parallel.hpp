#ifndef OPTPUMP_PARALLEL_HPP
#define OPTPUMP_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace optpump {

/// Evaluates fn(i) for i in [0, count) on up to `jobs` threads and returns
/// results in index order. The first exception thrown by any task is
/// rethrown after all workers join.
template <class Result, class Fn>
std::vector<Result> parallel_map(std::size_t count, std::size_t jobs, Fn&& fn) {
  std::vector<Result> out(count);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace optpump

#endif  // OPTPUMP_PARALLEL_HPP
