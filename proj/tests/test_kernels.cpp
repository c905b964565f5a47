#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "friedrichs/error.hpp"
#include "friedrichs/kernels.hpp"

using namespace friedrichs;

TEST_CASE("grids") {
  auto l = linear_grid(0.0, 50.0, 60);
  CHECK(l.size() == 60);
  CHECK(l.front() == 0.0);
  CHECK(l.back() == 50.0);
  auto g = log_grid(1e2, 1e4, 5);
  CHECK(g[2] == doctest::Approx(1e3).epsilon(1e-14));
  CHECK(g.back() == 1e4);
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), Error);
  CHECK_THROWS_AS(linear_grid(1.0, 0.0, 3), Error);
  CHECK(linear_grid(2.0, 2.0, 1) == std::vector<double>{2.0});
}

TEST_CASE("serial and parallel sweeps agree bitwise") {
  ResolventEvaluator ev(fixtures::two_level_odd(0.3));
  auto w = linear_grid(0.01, 20.0, 97);
  auto a = spectral_density_sweep(ev, w, Exec::Serial);
  auto b = spectral_density_sweep(ev, w, Exec::Parallel);
  REQUIRE(a.size() == w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK((a[i] - b[i]).norm() == 0.0);
    CHECK((a[i] - spectral_density(ev, w[i])).norm() == 0.0);
  }
  std::vector<cplx> z;
  for (double x : w) z.emplace_back(x - 3.0, 0.5);
  auto s1 = self_energy_sweep(ev.self_energy(), z, Exec::Serial);
  auto s2 = self_energy_sweep(ev.self_energy(), z, Exec::Parallel);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK((s1[i] - s2[i]).norm() == 0.0);
  auto r1 = boundary_resolvent_sweep(ev, w, -1, Exec::Serial);
  auto r2 = boundary_resolvent_sweep(ev, w, -1, Exec::Parallel);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK((r1[i] - r2[i]).norm() == 0.0);
}

TEST_CASE("oracle evolution sweep matches the direct sum") {
  DiscretizedHamiltonian dh(model_b(0.3), DiscretizationParams{800});
  Vec psi = Vec::Unit(1, 0);
  auto t = linear_grid(0.0, 50.0, 31);
  auto ref = oracle_evolution(dh, psi, t);
  auto s = oracle_evolution_sweep(dh, psi, t, Exec::Serial);
  auto p = oracle_evolution_sweep(dh, psi, t, Exec::Parallel);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(s[i] == p[i]);
    CHECK(std::abs(s[i] - ref[i]) < 1e-14);
  }
}

TEST_CASE("sweep propagates worker errors") {
  auto f = [](long i) -> double {
    if (i == 7) throw Error(ErrorKind::Domain, "boom");
    return 1.0 * i;
  };
  CHECK_THROWS_AS(sweep<double>(20, f, Exec::Parallel), Error);
  CHECK_THROWS_AS(sweep<double>(20, f, Exec::Serial), Error);
  ResolventEvaluator ev(model_a(0.3));
  CHECK_THROWS_AS(spectral_density_sweep(ev, {1.0, -1.0}), Error);
}

TEST_CASE("jobs") {
  int before = jobs();
  set_jobs(1);
  CHECK(jobs() == 1);
  set_jobs(before);
  CHECK_THROWS_AS(set_jobs(-1), Error);
}
