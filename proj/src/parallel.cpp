#include "spinpair/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace spinpair {

unsigned thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("SPINPAIR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v) < hw ? v : hw;
  }
  return hw;
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  const unsigned budget = thread_budget();
  if (n == 0) return;
  if (budget <= 1 || n < 16) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<size_t>(budget, n));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace spinpair
