#pragma once

#include <cstddef>
#include <vector>

#include <omp.h>

namespace dynwalk {

// How a sample loop is executed. workers <= 0 means the OpenMP default.
// Every kernel writes sample i's outcome into slot i and reduces serially in
// index order afterwards, so results do not depend on the worker count.
struct Execution {
  int workers = 1;

  static Execution serial() { return {1}; }
  bool is_serial() const { return workers == 1; }
};

// Reference implementation: plain loop.
template <class T, class Fn>
std::vector<T> collect_samples_serial(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  return out;
}

template <class T, class Fn>
std::vector<T> collect_samples_parallel(std::size_t n, int workers, Fn&& fn) {
  std::vector<T> out(n);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (long long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  return out;
}

template <class T, class Fn>
std::vector<T> collect_samples(std::size_t n, const Execution& exec, Fn&& fn) {
  if (exec.is_serial()) return collect_samples_serial<T>(n, std::forward<Fn>(fn));
  return collect_samples_parallel<T>(n, exec.workers, std::forward<Fn>(fn));
}

}  // namespace dynwalk
