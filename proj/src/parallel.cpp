#include "tunneltimes/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace tunneltimes {

unsigned worker_count() {
  unsigned hint = 0;
  if (const char* env = std::getenv("TUNNELTIMES_THREADS")) {
    try {
      hint = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      hint = 0;
    }
  }
  if (hint == 0) hint = std::max(1u, std::thread::hardware_concurrency());
  return hint;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    body(0, count);
    return;
  }
  const std::size_t block = (count + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * block;
      const std::size_t end = std::min(count, begin + block);
      if (begin >= end) break;
      pool.emplace_back([&, w, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace tunneltimes
