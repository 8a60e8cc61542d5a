#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pingff/bounds.hpp"
#include "pingff/gaussfield.hpp"
#include "pingff/io.hpp"
#include "pingff/lattice.hpp"
#include "pingff/pinning.hpp"
#include "pingff/scan.hpp"
#include "pingff/verify.hpp"
#include "pingff/walk.hpp"

namespace {

using namespace pingff;

// output sink: --out path or stdout
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::invalid_argument("cannot open output: " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_scan(const scan::ScanConfig& cfg) {
  auto result = scan::run_scan(cfg);
  Sink sink(cfg.out);
  sink.os() << result.header << result.body;
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<std::string> suites;
  if (suite == "all")
    suites = verify::suite_names();
  else
    suites.push_back(suite);

  bool ok = true;
  for (const auto& name : suites) {
    auto report = verify::run_suite(name, seed);
    verify::print_report(report, std::cout);
    ok = ok && report.pass();
  }
  return ok ? 0 : 1;
}

// h below which the d=2 bound stops certifying positivity, by bisection
double d2_curve(double b, const bounds::BoundConstants& c) {
  if (b <= 0.0) return 0.0;
  auto positive = [&](double h) {
    return bounds::region_positive_d2(b, h, c).positive;
  };
  double hi = -1e-9;
  if (!bounds::region_positive_d2(b, hi, c).covered)
    return std::numeric_limits<double>::quiet_NaN();
  if (!positive(hi)) return 0.0;
  double lo = -0.999 * std::min(b, c.epsilon);
  if (positive(lo)) return lo;
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (positive(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

int cmd_bounds(const std::vector<double>& b_grid, int d, double a, double m,
               const std::string& out) {
  auto c3 = bounds::estimate_constants(std::max(d, 3), a);
  auto c2 = bounds::estimate_constants(2, a, m);

  Sink sink(out);
  std::ostream& os = sink.os();
  os << "# " << c3.provenance << "\n# " << c2.provenance << "\n";
  os << "b,h_annealed,h_quenched_bound_d3,h_quenched_bound_d2,K,C1,C2,"
        "C1_tilde,C_prime\n";
  os.precision(12);
  for (double b : b_grid) {
    const auto curve = bounds::critical_curve_d3(b, c3);
    const double h3 = curve.bisection_root.value_or(
        std::numeric_limits<double>::quiet_NaN());
    os << b << ',' << bounds::annealed_critical_h(b) << ',' << h3 << ','
       << d2_curve(b, c2) << ',' << c3.k_coefficient() << ',' << c3.c1 << ','
       << c3.c2 << ',' << c2.c1_tilde << ',' << c2.c_prime << '\n';
  }
  return 0;
}

int cmd_sample(int d, int n, double a, double b, double h, std::uint64_t seed,
               int count, int burn_in, bool binary, const std::string& out) {
  lattice::BoxSpec box(d, n);
  auto env = lattice::sample_environment(box, b, h, seed);
  auto base = gauss::build_model(box, 0.0, 0.0, 0.0);
  auto model = pinning::make_model(std::move(env), a, base);

  CounterRng rng(seed);
  pinning::HeatBathChain chain(model, 1.0, rng.stream(1));
  for (int s = 0; s < burn_in; ++s) chain.sweep();

  Sink sink(out);
  for (int k = 0; k < count; ++k) {
    if (k > 0)
      for (int s = 0; s < burn_in; ++s) chain.sweep();
    if (binary)
      io::field_to_binary(box, chain.state(), sink.os());
    else
      io::field_to_csv(box, chain.state(), sink.os());
  }
  return 0;
}

int cmd_walk_table(const std::vector<double>& m_grid, int n,
                   const std::string& out) {
  Sink sink(out);
  std::ostream& os = sink.os();
  os << "m,n,variance,ratio_to_log,zratio_series,zratio_logdet\n";
  os.precision(12);
  const double n_sites = static_cast<double>(n) * n;
  for (double m : m_grid) {
    const auto mv = walk::massive_variance_bound(m, n);
    const double series = walk::ratio_Z_series(m, n);
    auto model = gauss::build_model(lattice::BoxSpec(2, n), m, 0.0, 0.0);
    const double logdet = -gauss::log_partition(model) / n_sites;
    os << m << ',' << n << ',' << mv.variance << ',' << mv.bound_ratio << ','
       << series << ',' << logdet << '\n';
  }
  return 0;
}

int cmd_env_gen(int d, int n, double b, double h, std::uint64_t seed,
                const std::string& out) {
  auto env = lattice::sample_environment(lattice::BoxSpec(d, n), b, h, seed);
  Sink sink(out);
  sink.os() << io::environment_to_json(env).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"disordered square-well pinning of a lattice free field"};
  app.require_subcommand(1);
  // free the short -h so grid options can be spelled --h
  app.set_help_flag("--help", "print help");

  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;
  std::string config_path;
  app.add_option("--seed", seed, "master seed")->capture_default_str();
  app.add_option("--workers", workers, "worker thread count")
      ->capture_default_str();
  app.add_option("--out", out, "output path (default stdout)");
  app.add_option("--config", config_path, "JSON config file");
  app.fallthrough();

  auto* sc_scan = app.add_subcommand("scan", "phase-diagram sweep over (b,h)");
  scan::ScanConfig cfg;
  auto* o_d = sc_scan->add_option("--d", cfg.d, "dimension");
  auto* o_n = sc_scan->add_option("--n", cfg.n, "box side");
  auto* o_a = sc_scan->add_option("--a", cfg.a, "well half-width");
  auto* o_b = sc_scan->add_option("--b", cfg.b_grid, "b grid values");
  auto* o_h = sc_scan->add_option("--h", cfg.h_grid, "h grid values");
  auto* o_envs = sc_scan->add_option("--envs", cfg.n_envs,
                                     "environments per grid point");
  auto* o_samples = sc_scan->add_option("--samples", cfg.n_samples,
                                        "Monte Carlo samples per estimate");
  auto* o_est = sc_scan->add_option("--estimator", cfg.estimator,
                                    "auto | is | ti");

  auto* sc_verify = app.add_subcommand("verify", "run an invariant suite");
  std::string suite;
  sc_verify->add_option("suite", suite, "suite name or 'all'")->required();

  auto* sc_bounds = app.add_subcommand("bounds", "critical-curve export");
  std::vector<double> b_grid{0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
  int bd = 3;
  double ba = 1.0, bm = 0.01;
  sc_bounds->add_option("--b", b_grid, "b grid values");
  sc_bounds->add_option("--d", bd, "dimension for the d>=3 constants");
  sc_bounds->add_option("--a", ba, "well half-width");
  sc_bounds->add_option("--m", bm, "mass for the d=2 constants");

  auto* sc_sample = app.add_subcommand("sample", "draw interacting fields");
  int sd = 2, sn = 8, count = 1, burn_in = 500;
  double sa = 1.0, sb = 0.0, sh = 0.0;
  bool binary = false;
  sc_sample->add_option("--d", sd, "dimension");
  sc_sample->add_option("--n", sn, "box side");
  sc_sample->add_option("--a", sa, "well half-width");
  sc_sample->add_option("--b", sb, "disorder amplitude");
  sc_sample->add_option("--h", sh, "mean pinning strength");
  sc_sample->add_option("--count", count, "configurations to draw");
  sc_sample->add_option("--burn-in", burn_in, "sweeps before each draw");
  sc_sample->add_flag("--binary", binary, "binary dump instead of CSV");

  auto* sc_walk = app.add_subcommand("walk-table",
                                     "massive-field diagnostics over an m-grid");
  std::vector<double> m_grid{0.3, 0.2, 0.1, 0.05, 0.02};
  int wn = 16;
  sc_walk->add_option("--m", m_grid, "m grid values");
  sc_walk->add_option("--n", wn, "box side");

  auto* sc_env = app.add_subcommand("env", "environment utilities");
  auto* sc_env_gen = sc_env->add_subcommand("gen", "generate a disorder file");
  int ed = 2, en = 8;
  double eb = 1.0, eh = 0.0;
  sc_env_gen->add_option("--d", ed, "dimension");
  sc_env_gen->add_option("--n", en, "box side");
  sc_env_gen->add_option("--b", eb, "disorder amplitude");
  sc_env_gen->add_option("--h", eh, "mean pinning strength");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sc_scan->parsed()) {
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot read " + config_path);
        nlohmann::json j = nlohmann::json::parse(in);
        scan::ScanConfig from_file = scan::config_from_json(j);
        // flags override file values
        if (!o_d->count()) cfg.d = from_file.d;
        if (!o_n->count()) cfg.n = from_file.n;
        if (!o_a->count()) cfg.a = from_file.a;
        if (!o_b->count()) cfg.b_grid = from_file.b_grid;
        if (!o_h->count()) cfg.h_grid = from_file.h_grid;
        if (!o_envs->count()) cfg.n_envs = from_file.n_envs;
        if (!o_samples->count()) cfg.n_samples = from_file.n_samples;
        if (!o_est->count()) cfg.estimator = from_file.estimator;
        if (!app.get_option("--seed")->count()) seed = from_file.seed;
        if (!app.get_option("--workers")->count()) workers = from_file.workers;
        if (!app.get_option("--out")->count()) out = from_file.out;
        cfg.ti_sweeps = from_file.ti_sweeps;
        cfg.ti_burn_in = from_file.ti_burn_in;
        cfg.ti_nodes = from_file.ti_nodes;
      }
      cfg.seed = seed;
      cfg.workers = workers;
      cfg.out = out;
      return cmd_scan(cfg);
    }
    if (sc_verify->parsed()) return cmd_verify(suite, seed);
    if (sc_bounds->parsed()) return cmd_bounds(b_grid, bd, ba, bm, out);
    if (sc_sample->parsed())
      return cmd_sample(sd, sn, sa, sb, sh, seed, count, burn_in, binary, out);
    if (sc_walk->parsed()) return cmd_walk_table(m_grid, wn, out);
    if (sc_env->parsed() && sc_env_gen->parsed())
      return cmd_env_gen(ed, en, eb, eh, seed, out);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
