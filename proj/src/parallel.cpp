#include "gsp4/parallel.hpp"

#include "gsp4/arith.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace gsp4 {

namespace {

int initial_workers() {
  const char* env = std::getenv("GSP4_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const int n = std::stoi(env);
    return n >= 1 ? n : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

std::atomic<int>& workers() {
  static std::atomic<int> n{initial_workers()};
  return n;
}

}  // namespace

int worker_count() { return workers().load(); }

void set_worker_count(int n) {
  if (n < 1) throw DomainError("worker count must be at least 1");
  workers().store(n);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < w; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace gsp4
