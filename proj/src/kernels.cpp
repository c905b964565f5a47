#include "friedrichs/kernels.hpp"

#include <cmath>

#include <omp.h>

#include "friedrichs/error.hpp"

namespace friedrichs {

void set_jobs(int jobs) {
  if (jobs < 0) throw Error(ErrorKind::InvalidInput, "jobs must be nonnegative");
  if (jobs > 0) omp_set_num_threads(jobs);
}

int jobs() { return omp_get_max_threads(); }

std::vector<double> linear_grid(double a, double b, int n) {
  if (n < 1 || !(b >= a)) throw Error(ErrorKind::InvalidInput, "linear grid needs n >= 1 and b >= a");
  if (n == 1) return {a};
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  g.back() = b;
  return g;
}

std::vector<double> log_grid(double a, double b, int n) {
  if (n < 1 || !(a > 0.0) || !(b >= a)) throw Error(ErrorKind::InvalidInput, "log grid needs n >= 1 and 0 < a <= b");
  if (n == 1) return {a};
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

std::vector<Mat> self_energy_sweep(const SelfEnergyEvaluator& s, const std::vector<cplx>& z, Exec exec) {
  return sweep<Mat>(static_cast<long>(z.size()), [&](long i) { return s.self_energy(z[i]); }, exec);
}

std::vector<Mat> boundary_resolvent_sweep(const ResolventEvaluator& ev, const std::vector<double>& w, int side,
                                          Exec exec) {
  return sweep<Mat>(static_cast<long>(w.size()), [&](long i) { return boundary_resolvent(ev, w[i], side); }, exec);
}

std::vector<Mat> spectral_density_sweep(const ResolventEvaluator& ev, const std::vector<double>& w, Exec exec) {
  return sweep<Mat>(static_cast<long>(w.size()), [&](long i) { return spectral_density(ev, w[i]); }, exec);
}

std::vector<cplx> oracle_evolution_sweep(const DiscretizedHamiltonian& dh, const Vec& psi,
                                         const std::vector<double>& t, Exec exec) {
  const auto& e = dh.eigenvalues();
  const auto& c = dh.level_components();
  std::vector<double> en, wt;
  for (int k = 0; k < e.size(); ++k) {
    if (e(k) <= 0.0) continue;
    en.push_back(e(k));
    wt.push_back(std::norm(c.col(k).dot(psi)));
  }
  return sweep<cplx>(
      static_cast<long>(t.size()),
      [&](long i) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < en.size(); ++k) s += wt[k] * std::exp(cplx(0.0, -t[i] * en[k]));
        return s;
      },
      exec);
}

}  // namespace friedrichs
