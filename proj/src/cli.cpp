#include "friedrichs/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "friedrichs/asymptotics.hpp"
#include "friedrichs/classify.hpp"
#include "friedrichs/error.hpp"
#include "friedrichs/evolve.hpp"
#include "friedrichs/kernels.hpp"
#include "friedrichs/oracle.hpp"
#include "friedrichs/scenario.hpp"

namespace friedrichs {

namespace {

std::string num(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

class Table {
 public:
  explicit Table(std::vector<std::string> cols) : cols_(std::move(cols)) {}
  void add(std::vector<std::string> r) {
    if (r.size() != cols_.size()) throw Error(ErrorKind::Numerical, "table row has the wrong width");
    rows_.push_back(std::move(r));
  }
  void write(std::ostream& os, const std::string& digest) const {
    os << "# digest=" << digest << "\n";
    for (std::size_t i = 0; i < cols_.size(); ++i) os << (i ? "," : "") << cols_[i];
    os << "\n";
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << "\n";
    }
  }

 private:
  std::vector<std::string> cols_;
  std::vector<std::vector<std::string>> rows_;
};

void emit(const RunConfig& cfg, const Table& t, const std::string& digest, std::ostream& out) {
  if (cfg.out.empty()) {
    t.write(out, digest);
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + cfg.out);
  t.write(f, digest);
  if (!f) throw Error(ErrorKind::InvalidInput, "write to " + cfg.out + " failed");
}

void matrix_columns(std::vector<std::string>& cols, const std::string& name, int n) {
  for (const char* part : {"Re", "Im"})
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) cols.push_back(part + name + "_" + std::to_string(a) + "_" + std::to_string(b));
}

void matrix_values(std::vector<std::string>& row, const Mat& m) {
  for (int part = 0; part < 2; ++part)
    for (int a = 0; a < m.rows(); ++a)
      for (int b = 0; b < m.cols(); ++b) row.push_back(num(part ? m(a, b).imag() : m(a, b).real()));
}

std::vector<double> grid(double a, double b, int n, bool log) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "grids need at least one point");
  if (log) {
    if (!(a > 0.0)) throw Error(ErrorKind::InvalidInput, "a logarithmic grid needs a positive lower end");
    return log_grid(a, b, n);
  }
  return linear_grid(a, b, n);
}

std::vector<double> time_grid(const RunConfig& c) { return grid(c.tmin, c.tmax, c.tpoints, c.log); }

std::vector<double> frequency_grid(const RunConfig& c) {
  if (!(c.wmin > 0.0)) throw Error(ErrorKind::InvalidInput, "frequencies must be positive");
  return grid(c.wmin, c.wmax, c.points, c.log);
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }
bool bit_equal(cplx a, cplx b) { return bit_equal(a.real(), b.real()) && bit_equal(a.imag(), b.imag()); }

bool bit_equal(const ModelSpec& a, const ModelSpec& b) {
  if (a.levels.size() != b.levels.size() || !bit_equal(a.coupling, b.coupling) ||
      a.form_factors.size() != b.form_factors.size())
    return false;
  for (std::size_t i = 0; i < a.levels.size(); ++i)
    if (!bit_equal(a.levels[i], b.levels[i])) return false;
  auto same = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!bit_equal(x[i], y[i])) return false;
    return true;
  };
  for (std::size_t i = 0; i < a.form_factors.size(); ++i) {
    const FormFactor &f = a.form_factors[i], &g = b.form_factors[i];
    if (f.half_power != g.half_power || !same(f.numerator, g.numerator) || !same(f.denominator, g.denominator))
      return false;
  }
  return true;
}

struct Context {
  const RunConfig& cfg;
  const ModelSpec& spec;
  std::string digest;
  std::ostream& out;
  std::ostream& err;
};

int cmd_validate(Context& x) {
  ValidationReport rep = validate_model(x.spec);
  if (!rep.ok) {
    std::string msg;
    for (const auto& m : rep.messages) msg += (msg.empty() ? "" : "; ") + m;
    throw Error(ErrorKind::Validation, msg);
  }
  bool rt = bit_equal(parse_scenario(dump_scenario(x.spec)), x.spec);
  SelfEnergyEvaluator se(build_gamma(x.spec));
  std::mt19937_64 rng(x.cfg.seed);
  double scale = se.pole_scale() + 1.0;
  std::uniform_real_distribution<double> re(-scale, 3.0 * scale), im(0.05 * scale, 2.0 * scale);
  Table t({"probe", "re_z", "im_z", "m", "n", "closed_form_re", "closed_form_im", "rel_err"});
  double worst = 0.0;
  int n = se.size();
  for (int p = 0; p < x.cfg.probes; ++p) {
    cplx z(re(rng), im(rng));
    Mat s = se.self_energy(z);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const RationalFunction& g = se.gamma()(a, b);
        std::vector<double> bp{1.0};
        if (z.real() > 0.0)
          for (double k : {-8.0, -2.0, 0.0, 2.0, 8.0}) bp.push_back(z.real() + k * z.imag());
        cplx q = oracle_quadrature([&](double w) { return g(w) / (w - z); }, 0.0,
                                   std::numeric_limits<double>::infinity(), 1e-12, bp)
                     .value;
        double e = std::abs(s(a, b) - q) / std::max(std::abs(q), 1e-300);
        if (std::abs(q) < 1e-14 && std::abs(s(a, b)) < 1e-14) e = 0.0;
        worst = std::max(worst, e);
        t.add({std::to_string(p), num(z.real()), num(z.imag()), std::to_string(a), std::to_string(b),
               num(s(a, b).real()), num(s(a, b).imag()), num(e)});
      }
  }
  x.out << "valid\n";
  x.out << "round-trip: " << (rt ? "bit-equal" : "MISMATCH") << "\n";
  x.out << "probes=" << x.cfg.probes << " seed=" << x.cfg.seed << " worst_rel_err=" << num(worst) << "\n";
  if (!x.cfg.out.empty()) emit(x.cfg, t, x.digest, x.out);
  if (!rt) throw Error(ErrorKind::Schema, "scenario does not round-trip");
  if (worst > 1e-6) throw Error(ErrorKind::Numerical, "closed-form self-energy disagrees with quadrature");
  return 0;
}

int cmd_classify(Context& x) {
  ResolventEvaluator ev(x.spec);
  ZeroEnergyClassification c = classify_zero_energy(ev);
  x.out << to_string(c.kind) << "\n";
  x.out << "dim M=" << c.kernel.cols() << " dim M1=" << c.m1.cols() << " dim M2=" << c.m2.cols() << "\n";
  Table t({"projection", "row", "col", "re", "im"});
  const Mat* q[3] = {&c.q0, &c.q1, &c.q2};
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < q[k]->rows(); ++a)
      for (int b = 0; b < q[k]->cols(); ++b)
        t.add({"Q" + std::to_string(k), std::to_string(a), std::to_string(b), num((*q[k])(a, b).real()),
               num((*q[k])(a, b).imag())});
  emit(x.cfg, t, x.digest, x.out);
  return 0;
}

int cmd_critical(Context& x) {
  ResolventEvaluator ev(x.spec);
  auto br = critical_bracket(ev, x.cfg.level);
  double lo = x.cfg.lo > 0.0 ? x.cfg.lo : 0.5 * br[0];
  double hi = x.cfg.hi > 0.0 ? x.cfg.hi : (std::isfinite(br[1]) ? 1.5 * br[1] : 100.0 * br[0]);
  auto found = critical_couplings(ev, x.cfg.level, lo, hi);
  Table t({"lambda", "lambda2", "residual", "in_bracket", "kind"});
  for (const CriticalCoupling& c : found) {
    bool in = c.lambda2 >= br[0] * (1 - 1e-12) && c.lambda2 <= br[1] * (1 + 1e-12);
    t.add({num(c.lambda), num(c.lambda2), num(std::abs(c.kappa)), in ? "1" : "0", to_string(c.kind)});
  }
  x.out << "# level=" << x.cfg.level << " bracket=[" << num(br[0]) << "," << num(br[1]) << "] search=[" << num(lo)
        << "," << num(hi) << "] found=" << found.size() << "\n";
  emit(x.cfg, t, x.digest, x.out);
  return 0;
}

int cmd_self_energy(Context& x) {
  SelfEnergyEvaluator se(build_gamma(x.spec));
  auto w = frequency_grid(x.cfg);
  auto bv = sweep<BoundaryValues>(static_cast<long>(w.size()), [&](long i) { return se.boundary_values(w[i]); },
                                  Exec::Parallel);
  std::vector<std::string> cols{"w"};
  matrix_columns(cols, "D", se.size());
  matrix_columns(cols, "Gamma", se.size());
  Table t(cols);
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::vector<std::string> r{num(w[i])};
    matrix_values(r, bv[i].d);
    matrix_values(r, bv[i].gamma);
    t.add(std::move(r));
  }
  emit(x.cfg, t, x.digest, x.out);
  return 0;
}

int cmd_spectral_density(Context& x) {
  ResolventEvaluator ev(x.spec);
  auto w = frequency_grid(x.cfg);
  auto rho = spectral_density_sweep(ev, w);
  std::vector<std::string> cols{"w"};
  matrix_columns(cols, "Rho", ev.size());
  Table t(cols);
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::vector<std::string> r{num(w[i])};
    matrix_values(r, rho[i]);
    t.add(std::move(r));
  }
  emit(x.cfg, t, x.digest, x.out);
  return 0;
}

int cmd_resonances(Context& x) {
  ResolventEvaluator ev(x.spec);
  double scale = 1.0;
  for (double l : x.spec.levels) scale = std::max(scale, std::abs(l));
  SearchRectangle box{x.cfg.re_min, x.cfg.re_max, x.cfg.im_min, x.cfg.im_max};
  if (box.re_max == 0.0) box.re_max = 2.0 * scale;
  if (box.re_min == 0.0) box.re_min = 1e-3 * scale;
  if (box.im_min == 0.0) box.im_min = -scale;
  if (box.im_max == 0.0) box.im_max = -1e-4 * scale;
  ResonanceSearch rs = find_resonance_poles(ev, box);
  Table t({"re", "im", "det_abs"});
  for (const ResonancePole& p : rs.poles) t.add({num(p.z.real()), num(p.z.imag()), num(p.det_abs)});
  x.out << "# box=[" << num(box.re_min) << "," << num(box.re_max) << "]x[" << num(box.im_min) << ","
        << num(box.im_max) << "] poles=" << rs.poles.size() << " failed_seeds=" << rs.failed_seeds << "\n";
  emit(x.cfg, t, x.digest, x.out);
  return 0;
}

EvolutionOptions evolution_options(const RunConfig& c) {
  EvolutionOptions o;
  o.max_panels = c.max_panels;
  return o;
}

int cmd_evolve(Context& x) {
  ResolventEvaluator ev(x.spec);
  TimeEvolutionResult r = reduced_evolution(ev, time_grid(x.cfg), x.cfg.tol, evolution_options(x.cfg));
  int n = ev.size();
  std::vector<std::vector<double>> surv(n);
  for (int k = 0; k < n; ++k) {
    try {
      surv[k] = survival_probability(r, Vec::Unit(n, k));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UndefinedSurvival) throw;
      surv[k].assign(r.times.size(), std::nan(""));
    }
  }
  std::vector<std::string> cols{"t"};
  matrix_columns(cols, "U", n);
  for (int k = 0; k < n; ++k) cols.push_back("P_" + std::to_string(k));
  cols.push_back("error_bound");
  Table t(cols);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    std::vector<std::string> row{num(r.times[i])};
    matrix_values(row, r.u[i]);
    for (int k = 0; k < n; ++k) row.push_back(num(surv[k][i]));
    row.push_back(num(r.diagnostics[i].error()));
    t.add(std::move(row));
  }
  x.out << "# kind=" << to_string(r.kind) << " points=" << r.times.size() << "\n";
  emit(x.cfg, t, x.digest, x.out);
  return 0;
}

Mat asymptote(const AsymptoteModel& m, double t) {
  return m.kind == ZeroKind::Regular ? theorem1_asymptote(m, t) : theorem2_asymptote(m, t);
}

int cmd_asymptote(Context& x) {
  ResolventEvaluator ev(x.spec);
  AsymptoteModel m = asymptote_model(ev, classify_zero_energy(ev));
  auto times = time_grid(x.cfg);
  std::vector<std::string> cols{"t"};
  matrix_columns(cols, "A", ev.size());
  Table t(cols);
  for (double s : times) {
    std::vector<std::string> row{num(s)};
    matrix_values(row, asymptote(m, s));
    t.add(std::move(row));
  }
  x.out << "# kind=" << to_string(m.kind) << " n_a=" << m.n_a << " n_b=" << m.n_b << "\n";
  emit(x.cfg, t, x.digest, x.out);
  return 0;
}

int cmd_compare(Context& x) {
  ResolventEvaluator ev(x.spec);
  AsymptoteModel m = asymptote_model(ev, classify_zero_energy(ev));
  auto times = time_grid(x.cfg);
  std::vector<Mat> a;
  for (double s : times) a.push_back(asymptote(m, s));
  TimeEvolutionResult r = reduced_evolution(ev, times, x.cfg.tol, evolution_options(x.cfg));
  std::vector<std::string> cols{"t"};
  matrix_columns(cols, "U", ev.size());
  matrix_columns(cols, "A", ev.size());
  cols.push_back("rel_err");
  Table t(cols);
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<std::string> row{num(times[i])};
    matrix_values(row, r.u[i]);
    matrix_values(row, a[i]);
    row.push_back(num((r.u[i] - a[i]).norm() / a[i].norm()));
    t.add(std::move(row));
  }
  x.out << "# kind=" << to_string(m.kind) << " n_a=" << m.n_a << " n_b=" << m.n_b << "\n";
  emit(x.cfg, t, x.digest, x.out);
  return 0;
}

int cmd_oracle_compare(Context& x) {
  ResolventEvaluator ev(x.spec);
  auto times = time_grid(x.cfg);
  TimeEvolutionResult r = reduced_evolution(ev, times, x.cfg.tol, evolution_options(x.cfg));
  DiscretizationParams p;
  p.m = x.cfg.m;
  DiscretizedHamiltonian dh(x.spec, p);
  int n = ev.size();
  std::vector<std::vector<cplx>> o;
  for (int k = 0; k < n; ++k) o.push_back(oracle_evolution_sweep(dh, Vec::Unit(n, k), times));
  std::vector<std::string> cols{"t"};
  for (int k = 0; k < n; ++k) {
    std::string s = std::to_string(k) + "_" + std::to_string(k);
    for (const char* c : {"ReU_", "ImU_", "ReO_", "ImO_", "diff_"}) cols.push_back(c + s);
  }
  Table t(cols);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<std::string> row{num(times[i])};
    for (int k = 0; k < n; ++k) {
      cplx u = r.u[i](k, k), q = o[k][i];
      double d = std::abs(u - q);
      worst = std::max(worst, d);
      for (double v : {u.real(), u.imag(), q.real(), q.imag(), d}) row.push_back(num(v));
    }
    t.add(std::move(row));
  }
  x.out << "# m=" << x.cfg.m << " spacing=" << num(dh.spacing()) << " max_abs_diff=" << num(worst) << "\n";
  emit(x.cfg, t, x.digest, x.out);
  return 0;
}

using Handler = int (*)(Context&);

const std::vector<std::pair<std::string, Handler>>& commands() {
  static const std::vector<std::pair<std::string, Handler>> c{
      {"validate", cmd_validate},       {"classify", cmd_classify},
      {"critical-coupling", cmd_critical}, {"self-energy", cmd_self_energy},
      {"spectral-density", cmd_spectral_density}, {"resonances", cmd_resonances},
      {"evolve", cmd_evolve},           {"asymptote", cmd_asymptote},
      {"compare", cmd_compare},         {"oracle-compare", cmd_oracle_compare}};
  return c;
}

std::string hex(std::uint64_t v) {
  char b[20];
  std::snprintf(b, sizeof b, "%016llx", static_cast<unsigned long long>(v));
  return b;
}

}  // namespace

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "command=" << command << ";tol=" << num(tol) << ";tmin=" << num(tmin) << ";tmax=" << num(tmax)
     << ";tpoints=" << tpoints << ";log=" << log << ";wmin=" << num(wmin) << ";wmax=" << num(wmax)
     << ";points=" << points << ";level=" << level << ";lo=" << num(lo) << ";hi=" << num(hi)
     << ";box=" << num(re_min) << "," << num(re_max) << "," << num(im_min) << "," << num(im_max) << ";m=" << m
     << ";probes=" << probes << ";max_panels=" << max_panels << ";seed=" << seed;
  return os.str();
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Handler h = nullptr;
    for (const auto& [name, fn] : commands())
      if (name == cfg.command) h = fn;
    if (!h) throw Error(ErrorKind::InvalidInput, "unknown command '" + cfg.command + "'");
    if (!(cfg.tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tolerance must be positive");
    set_jobs(cfg.jobs);
    ModelSpec spec = load_scenario(cfg.scenario);
    if (cfg.command != "validate") require_valid(spec);
    Context x{cfg, spec, hex(fnv1a(cfg.canonical() + "\n" + dump_scenario(spec, -1))), out, err};
    return h(x);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Friedrichs model analyses"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  RunConfig c;
  app.add_option("--scenario", c.scenario, "scenario JSON file")->required();
  app.add_option("--out", c.out, "CSV output path (stdout if omitted)");
  app.add_option("--tol", c.tol, "absolute tolerance")->capture_default_str();
  app.add_option("--tmin", c.tmin)->capture_default_str();
  app.add_option("--tmax", c.tmax)->capture_default_str();
  app.add_option("--tpoints", c.tpoints)->capture_default_str();
  app.add_flag("--log", c.log, "logarithmic time and frequency grids");
  app.add_option("--wmin", c.wmin)->capture_default_str();
  app.add_option("--wmax", c.wmax)->capture_default_str();
  app.add_option("--points", c.points, "frequency grid size")->capture_default_str();
  app.add_option("--level", c.level, "level index for critical-coupling")->capture_default_str();
  app.add_option("--lo", c.lo, "lower end of the lambda^2 search interval");
  app.add_option("--hi", c.hi, "upper end of the lambda^2 search interval");
  app.add_option("--re-min", c.re_min);
  app.add_option("--re-max", c.re_max);
  app.add_option("--im-min", c.im_min);
  app.add_option("--im-max", c.im_max);
  app.add_option("--m", c.m, "oracle grid size")->capture_default_str();
  app.add_option("--probes", c.probes, "random probes for validate")->capture_default_str();
  app.add_option("--max-panels", c.max_panels, "quadrature panel budget")->capture_default_str();
  app.add_option("--jobs", c.jobs, "worker threads (0: runtime default)")->capture_default_str();
  for (const auto& [name, fn] : commands()) app.add_subcommand(name);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (const char* s = std::getenv("FRIEDRICHS_SEED")) {
    char* end = nullptr;
    c.seed = std::strtoull(s, &end, 10);
    if (end == s || *end) {
      err << "error: FRIEDRICHS_SEED must be an unsigned integer\n";
      return 1;
    }
  }
  return run(c, out, err);
}

}  // namespace friedrichs
