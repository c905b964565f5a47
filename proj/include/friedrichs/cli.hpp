#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace friedrichs {

struct RunConfig {
  std::string command;
  std::string scenario;
  std::string out;  // empty writes tables to stdout
  double tol = 1e-8;
  double tmin = 0.0, tmax = 50.0;
  int tpoints = 60;
  bool log = false;
  double wmin = 0.01, wmax = 10.0;
  int points = 200;
  int level = 0;
  double lo = 0.0, hi = 0.0;  // lambda^2 search interval, 0 selects the bracket
  double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;  // resonance box, 0 selects a default
  int m = 4000;
  int probes = 20;
  long max_panels = 200000000;
  int jobs = 0;
  std::uint64_t seed = 0;

  // every field that affects results, in a fixed textual form
  std::string canonical() const;
};

std::uint64_t fnv1a(std::string_view s);

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace friedrichs
