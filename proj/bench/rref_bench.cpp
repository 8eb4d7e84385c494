// Times the serial and OpenMP elimination kernels on the same inputs and
// checks that their reduced forms agree. Sizes mimic the matrices the length
// computations actually produce: many rows, moderately wide, mostly sparse.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nrcalc/field.hpp"
#include "nrcalc/rref.hpp"

using namespace nrcalc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class K, class Gen>
std::vector<std::vector<K>> make_matrix(std::mt19937& rng, int m, int n, Gen gen, int fill_pct) {
  std::uniform_int_distribution<int> pick(0, 99);
  std::vector<std::vector<K>> rows(m);
  for (auto& r : rows) {
    r.resize(n);
    for (auto& x : r)
      if (pick(rng) < fill_pct) x = gen(rng);
  }
  return rows;
}

template <class K>
bool same_matrix(const std::vector<std::vector<K>>& a, const std::vector<std::vector<K>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (!(a[i][j] == b[i][j])) return false;
  return true;
}

template <class K, class Gen>
void run_case(const char* label, std::mt19937& rng, int m, int n, Gen gen, int fill_pct) {
  auto serial_input = make_matrix<K>(rng, m, n, gen, fill_pct);
  auto parallel_input = serial_input;

  auto t0 = Clock::now();
  auto so = rref_serial(serial_input);
  double ts = seconds_since(t0);

  t0 = Clock::now();
  auto po = rref_parallel(parallel_input);
  double tp = seconds_since(t0);

  bool ok = so.pivot_cols == po.pivot_cols && same_matrix(serial_input, parallel_input);
  std::printf("%-28s %5dx%-5d rank %5zu  serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n",
              label, m, n, so.rank(), ts, tp, tp > 0 ? ts / tp : 0.0,
              ok ? "match" : "MISMATCH");
  if (!ok) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = argc > 1 && std::string(argv[1]) == "--quick";
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp not enabled; both kernels run serially\n");
#endif
  std::mt19937 rng(20240610);

  const std::uint32_t p = 1000003;
  auto fp_coeff = [p](std::mt19937& r) { return Fp(static_cast<long long>(r() % p), p); };
  auto rat_coeff = [](std::mt19937& r) {
    std::uniform_int_distribution<int> num(-30, 30);
    std::uniform_int_distribution<int> den(1, 12);
    Rat q(num(r), den(r));
    q.canonicalize();
    return q;
  };

  run_case<Fp>("fp dense", rng, quick ? 200 : 600, quick ? 200 : 600, fp_coeff, 95);
  run_case<Fp>("fp sparse tall", rng, quick ? 400 : 1500, quick ? 150 : 500, fp_coeff, 20);
  run_case<Rat>("rational dense", rng, quick ? 60 : 160, quick ? 60 : 160, rat_coeff, 95);
  run_case<Rat>("rational sparse tall", rng, quick ? 150 : 500, quick ? 60 : 180, rat_coeff, 20);
  return 0;
}
