#include "wodzicki/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace wodzicki {

namespace {

std::atomic<int> g_threads{0};

// Hardware threads, capped by WODZICKI_THREADS when set.
int env_threads() {
  const int hw = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  const char* s = std::getenv("WODZICKI_THREADS");
  if (!s) return hw;
  try {
    return std::clamp(std::stoi(s), 1, hw);
  } catch (...) {
    return hw;
  }
}

}  // namespace

int thread_count() {
  const int t = g_threads.load();
  return t > 0 ? t : env_threads();
}

void set_thread_count(int n) { g_threads.store(std::max(1, n)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(thread_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace wodzicki
