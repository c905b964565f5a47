#pragma once

#include <exception>
#include <vector>

#include "friedrichs/evolve.hpp"
#include "friedrichs/oracle.hpp"

namespace friedrichs {

// worker count for parallel sweeps; 0 keeps the runtime default
void set_jobs(int jobs);
int jobs();

std::vector<double> linear_grid(double a, double b, int n);
std::vector<double> log_grid(double a, double b, int n);

// out[i] = f(i); the first exception thrown by any worker is rethrown
template <class T, class F>
std::vector<T> sweep(long n, F&& f, Exec exec) {
  std::vector<T> out(n);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = f(i);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<Mat> self_energy_sweep(const SelfEnergyEvaluator& s, const std::vector<cplx>& z, Exec exec = Exec::Parallel);
std::vector<Mat> boundary_resolvent_sweep(const ResolventEvaluator& ev, const std::vector<double>& w, int side,
                                          Exec exec = Exec::Parallel);
std::vector<Mat> spectral_density_sweep(const ResolventEvaluator& ev, const std::vector<double>& w,
                                        Exec exec = Exec::Parallel);
std::vector<cplx> oracle_evolution_sweep(const DiscretizedHamiltonian& dh, const Vec& psi,
                                         const std::vector<double>& t, Exec exec = Exec::Parallel);

}  // namespace friedrichs
