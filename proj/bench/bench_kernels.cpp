// Serial vs OpenMP timings for the parallel kernels, plus the O(n) gravity
// sweep for reference. Usage: pcs_bench [sections] [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "pcs/sim.hpp"
#include "pcs/statics.hpp"

using namespace pcs;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best,
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

StrainVector random_strains(std::mt19937& gen, int n) {
  std::uniform_real_distribution<> u(-1.0, 1.0);
  StrainVector q = reference_strains(n);
  for (Eigen::Index i = 0; i < q.size(); ++i) q(i) += (i % 6 < 3 ? 4.0 : 0.2) * u(gen);
  return q;
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 20;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 5;
  std::mt19937 gen(2024);
  const StaticsWorkspace ws(RodSpec::uniform(n), 5);
  const StrainVector q = random_strains(gen, n);
  std::printf("threads=%d sections=%d repeats=%d\n", omp_get_max_threads(), n, repeats);

  MatrixXd a, b, c;
  const double t_sweep = best_of(repeats, [&] { a = gravity_matrix(ws, q); });
  const double t_serial = best_of(repeats, [&] { b = gravity_matrix_direct(ws, q, Exec::serial); });
  const double t_par = best_of(repeats, [&] { c = gravity_matrix_direct(ws, q, Exec::parallel); });
  std::printf("gravity sweep          %10.3f ms\n", 1e3 * t_sweep);
  std::printf("gravity direct serial  %10.3f ms\n", 1e3 * t_serial);
  std::printf("gravity direct omp     %10.3f ms  speedup %.2fx  bitwise=%s\n", 1e3 * t_par,
              t_serial / t_par, b == c ? "yes" : "no");
  std::printf("sweep vs direct max diff %.2e\n", (a - b).cwiseAbs().maxCoeff());

  RodSpec free_rod = RodSpec::uniform(std::min(n, 4));
  free_rod.gravity.setZero();
  const StaticsWorkspace free_ws(free_rod);
  std::vector<VectorXd> initial;
  for (int i = 0; i < 64; ++i) {
    initial.push_back(random_strains(gen, free_rod.num_sections) - free_ws.q_star());
  }
  std::vector<FreeDecay> ds, dp;
  const double d_serial =
      best_of(repeats, [&] { ds = run_free_decay_batch(free_ws, initial, 1e-4, 200, Exec::serial); });
  const double d_par =
      best_of(repeats, [&] { dp = run_free_decay_batch(free_ws, initial, 1e-4, 200, Exec::parallel); });
  bool same = ds.size() == dp.size();
  for (std::size_t i = 0; same && i < ds.size(); ++i) same = ds[i].norms == dp[i].norms;
  std::printf("free-decay batch serial %9.3f ms\n", 1e3 * d_serial);
  std::printf("free-decay batch omp    %9.3f ms  speedup %.2fx  identical=%s\n", 1e3 * d_par,
              d_serial / d_par, same ? "yes" : "no");
  return same && b == c ? 0 : 1;
}
