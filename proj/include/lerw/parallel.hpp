#ifndef LERW_PARALLEL_HPP
#define LERW_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace lerw {

/// Worker count: LERW_THREADS if set and positive, else the hardware count.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("LERW_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Result slot of one replica: a value or the message of the exception it threw.
template <class T>
struct ReplicaResult {
  std::optional<T> value;
  std::string error;
  bool ok() const { return value.has_value(); }
};

/// Evaluates fn(i) for i in [0, count) on `threads` workers. Results are
/// stored by index, so any reduction done in index order is independent of
/// scheduling.
template <class Fn>
auto parallel_replicas(std::size_t count, unsigned threads, Fn&& fn)
    -> std::vector<ReplicaResult<decltype(fn(std::size_t{}))>> {
  using T = decltype(fn(std::size_t{}));
  std::vector<ReplicaResult<T>> results(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        results[i].value.emplace(fn(i));
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return results;
}

}  // namespace lerw

#endif  // LERW_PARALLEL_HPP
