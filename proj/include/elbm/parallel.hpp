#ifndef ELBM_PARALLEL_HPP_
#define ELBM_PARALLEL_HPP_

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace elbm {

/// Calls fn(begin, end) over contiguous row blocks of [0, rows), one block per
/// worker, and joins. The first exception thrown by any block is rethrown.
template <typename Fn>
void parallel_rows(int rows, int workers, Fn&& fn) {
  workers = std::clamp(workers, 1, std::max(rows, 1));
  if (workers == 1) {
    fn(0, rows);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int k = 0; k < workers; ++k) {
      const int begin = rows * k / workers;
      const int end = rows * (k + 1) / workers;
      pool.emplace_back([&, k, begin, end] {
        try {
          fn(begin, end);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace elbm

#endif  // ELBM_PARALLEL_HPP_
