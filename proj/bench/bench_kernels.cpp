// Serial reference vs OpenMP kernels. Thread count from LEVELSET_LAB_THREADS
// or the OpenMP default.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "lsl/harness.hpp"
#include "lsl/parallel.hpp"
#include "lsl/poisson.hpp"

using namespace lsl;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-26s %10.4f %10.4f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", thread_count());
  std::printf("%-26s %10s %10s %9s\n", "kernel", "serial s", "parallel s", "speedup");

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> xy(-0.65, 0.65);
  std::vector<Point> pts(200000);
  for (auto& p : pts) p = {xy(rng), xy(rng)};
  const auto m = sample_f_class(3, 512).measure();
  volatile double sink = 0;
  const double js = best_of(3, [&] { sink = sink + evaluate_jets(m, pts, Exec::serial)[7].u; });
  const double jp = best_of(3, [&] { sink = sink + evaluate_jets(m, pts, Exec::parallel)[7].u; });
  row("evaluate_jets 200k x 513", js, jp);

  const double fs = best_of(1, [] { falsify_batch(1000, 42, 128, Exec::serial); });
  const double fp = best_of(1, [] { falsify_batch(1000, 42, 128, Exec::parallel); });
  row("falsify_batch 1000", fs, fp);

  std::vector<double> as(20000);
  for (std::size_t i = 0; i < as.size(); ++i) as[i] = 1e-3 + (pi - 2e-3) * i / (as.size() - 1);
  const double ss = best_of(3, [&] { sweep_symmetric(as, Exec::serial); });
  const double sp = best_of(3, [&] { sweep_symmetric(as, Exec::parallel); });
  row("sweep_symmetric 20000", ss, sp);
  return 0;
}
