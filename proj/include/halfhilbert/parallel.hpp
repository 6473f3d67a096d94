#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace halfhilbert {

/// Number of worker threads used when none is requested.
inline std::size_t default_threads() { return std::max<std::size_t>(1, std::thread::hardware_concurrency()); }

/// out[i] = fn(in[i]); results keep input order regardless of scheduling.
/// The first exception (by index) is rethrown after all workers finish.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& in, Fn fn, std::size_t threads = 0) {
  using Out = decltype(fn(in.front()));
  std::vector<Out> out(in.size());
  std::vector<std::exception_ptr> errors(in.size());
  if (threads == 0) threads = default_threads();
  threads = std::min(threads, in.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < in.size(); i = next++) {
      try {
        out[i] = fn(in[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace halfhilbert
