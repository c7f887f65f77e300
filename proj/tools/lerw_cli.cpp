// lerw: command-line front end for graph generation, LERW sampling, driver
// extraction, verification experiments and rendering.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lerw/lerw.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace lerw;

namespace {

enum Exit : int { kOk = 0, kVerifyFailed = 1, kInvalidInput = 2, kPartial = 3 };

/// Input rejected before any simulation ran.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

std::string config_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

/// Fills options not given on the command line from a flat JSON object whose
/// keys are long option names.
void apply_config(CLI::App& app, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw InputError("malformed config " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw InputError("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = app.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw InputError("config key '" + key + "' is not an option of '" + app.get_name() + "'");
    }
    if (opt->count() > 0) continue;
    if (value.is_array()) {
      for (const auto& item : value) opt->add_result(config_value(item));
    } else {
      opt->add_result(config_value(value));
    }
    opt->run_callback();
  }
}

struct GraphSource {
  std::string graph;
  std::string kind = "lattice";
  double mesh = 0.0;
  double p = 0.75;
  std::uint64_t graph_seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--graph", graph, "Graph JSON file");
    app->add_option("--kind", kind, "Generated graph kind when no file is given")
        ->check(CLI::IsMember({"lattice", "percolation", "lawler"}));
    app->add_option("--mesh", mesh, "Mesh of a generated graph");
    app->add_option("--p", p, "Bond probability for percolation");
    app->add_option("--graph-seed", graph_seed, "Seed of a generated random graph");
  }

  EmbeddedGraph load(double domain_radius) const {
    if (!graph.empty()) return load_graph(graph);
    if (!(mesh > 0.0)) throw InputError("either --graph or a positive --mesh is required");
    const double radius = domain_radius + 3.0 * mesh;
    if (kind == "percolation") return build_percolation_cluster(mesh, p, radius, graph_seed);
    if (kind == "lawler") return build_lawler_environment(mesh, radius, graph_seed);
    return build_square_lattice(mesh, radius);
  }
};

VertexId nearest_vertex(const EmbeddedGraph& g, Point z) {
  VertexId best = 0;
  double dist = std::numeric_limits<double>::infinity();
  for (VertexId v = 0; v < g.size(); ++v)
    if (const double d = std::abs(g.position(v) - z); d < dist) {
      dist = d;
      best = v;
    }
  return best;
}

std::string sample_name(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%05zu%s", stem, i, ext);
  return buf;
}

void require_value(const std::string& value, const char* name) {
  if (value.empty()) throw InputError(std::string(name) + " is required (in flags or config)");
}

bool self_avoiding(const std::vector<VertexId>& vs) {
  std::vector<VertexId> sorted = vs;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string config;
  std::string kind = "lattice";
  double mesh = 0.02;
  double radius = 1.5;
  double p = 0.75;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  require_value(a.out, "--out");
  EmbeddedGraph g = [&] {
    if (a.kind == "lattice") return build_square_lattice(a.mesh, a.radius);
    if (!a.seed_given) throw InputError("--seed is required for random graphs");
    if (a.kind == "percolation") return build_percolation_cluster(a.mesh, a.p, a.radius, a.seed);
    return build_lawler_environment(a.mesh, a.radius, a.seed);
  }();
  save_graph(g, a.out);
  std::cout << graph_hash(g) << "  " << a.out << "  (" << g.size() << " vertices, " << g.edge_count() << " edges)\n";
  return kOk;
}

// ---------------------------------------------------------------- walk

struct WalkArgs {
  std::string config;
  GraphSource source;
  double domain_radius = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_walk(const WalkArgs& a) {
  require_value(a.out, "--out");
  const auto g = a.source.load(a.domain_radius);
  const auto d = Domain::disc(a.domain_radius);
  const auto w = run_walk(g, g.origin(), d, a.seed);
  save_walk(w, g, d, a.out);
  std::cout << "walk: " << w.steps() << " steps -> " << a.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- lerw

struct LerwArgs {
  std::string config;
  GraphSource source;
  double domain_radius = 1.0;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  unsigned threads = default_thread_count();
  bool save_walks = false;
  std::string out = "lerw_out";
};

int cmd_lerw(const LerwArgs& a) {
  const auto g = a.source.load(a.domain_radius);
  const auto d = Domain::disc(a.domain_radius);
  require_extends_beyond(g, d);
  const fs::path dir = a.out;
  fs::create_directories(dir);

  struct Sample {
    WalkPath walk;
    LoopErasedCurve lerw;
  };
  auto results = parallel_replicas(a.n, a.threads, [&](std::size_t i) {
    Sample s;
    s.walk = run_walk(g, g.origin(), d, replica_seed(a.seed, i));
    s.walk.replica = i;
    s.lerw = lerw_of_reversal(s.walk, g);
    if (!self_avoiding(s.lerw.vertices)) throw std::logic_error("loop-erasure is not self-avoiding");
    const double r0 = std::abs(s.lerw.curve.points.front());
    if (std::abs(r0 - a.domain_radius) > 1e-9) throw std::logic_error("curve does not start on the boundary");
    return s;
  });

  json index{{"graph_hash", graph_hash(g)}, {"domain", d.describe()}, {"seed", a.seed}, {"requested", a.n}};
  json samples = json::array();
  json skipped = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) {
      skipped.push_back({{"index", i}, {"error", results[i].error}});
      std::cerr << "sample " << i << " skipped: " << results[i].error << "\n";
      continue;
    }
    const auto& s = *results[i].value;
    const std::string name = sample_name("curve", i, ".csv");
    save_curve(s.lerw.curve, dir / name);
    json entry{{"index", i},
               {"file", name},
               {"seed", replica_seed(a.seed, i)},
               {"points", s.lerw.curve.size()},
               {"walk_steps", s.walk.steps()},
               {"exit_edge", {s.lerw.exit_edge.from, s.lerw.exit_edge.to}}};
    if (a.save_walks) {
      const std::string wname = sample_name("walk", i, ".csv");
      save_walk(s.walk, g, d, dir / wname);
      entry["walk"] = wname;
    }
    samples.push_back(entry);
  }
  index["samples"] = samples;
  index["skipped"] = skipped;
  write_json(dir / "index.json", index);
  std::cout << "lerw: " << samples.size() << " curves, " << skipped.size() << " skipped -> " << dir.string() << "\n";
  return skipped.empty() ? kOk : kPartial;
}

// ---------------------------------------------------------------- extract / sle

struct ExtractArgs {
  std::string config;
  std::string curve;
  double domain_radius = 1.0;
  double max_capacity = 3.0;
  double max_dt = 1e-3;
  double max_dtheta = 0.1;
  std::string out;
};

int cmd_extract(const ExtractArgs& a) {
  require_value(a.curve, "--curve");
  require_value(a.out, "--out");
  Curve c = load_curve(a.curve);
  for (auto& p : c.points) p /= a.domain_radius;
  ExtractOptions opt;
  opt.max_capacity = a.max_capacity;
  opt.max_dt = a.max_dt;
  opt.max_dtheta = a.max_dtheta;
  const auto drv = extract_driving(c, opt);
  write_file(a.out, driving_csv(drv));
  std::cout << "extract: horizon " << drv.horizon() << ", " << drv.size() << " samples -> " << a.out << "\n";
  return kOk;
}

struct SleArgs {
  std::string config;
  double kappa = 2.0;
  double horizon = 1.0;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  std::string out_curve;
  std::string out_driver;
};

int cmd_sle(const SleArgs& a) {
  const auto s = sample_sle(a.kappa, a.horizon, a.dt, a.seed);
  if (!a.out_curve.empty()) write_file(a.out_curve, curve_csv(s.trace));
  if (!a.out_driver.empty()) write_file(a.out_driver, driving_csv(s.driving));
  std::cout << "sle: " << s.trace.size() << " trace points\n";
  return kOk;
}

// ---------------------------------------------------------------- verify

struct KernelArgs {
  std::string config;
  double mesh = 0.02;
  std::vector<double> compare_mesh;
  std::size_t arcs = 16;
  double a = 0.4;
  double epsilon = 0.5;
  double max_deviation = 0.15;
  double max_residual = 1e-12;
  std::uint64_t mc = 0;
  std::uint64_t seed = 0;
  unsigned threads = default_thread_count();
  std::string out = "kernel_report.json";
};

int cmd_verify_kernel(const KernelArgs& a) {
  auto run = [&](double mesh) {
    const auto g = build_square_lattice(mesh, 1.0 + 3.0 * mesh);
    KernelOptions opt;
    opt.arcs = a.arcs;
    opt.epsilon = a.epsilon;
    opt.exact = a.mc == 0;
    opt.samples = a.mc;
    opt.seed = a.seed;
    opt.threads = a.threads;
    return kernel_ratio_experiment(g, nearest_vertex(g, {a.a, 0.0}), opt);
  };
  const auto main_report = run(a.mesh);
  json report{{"mesh", a.mesh}, {"result", kernel_report_json(main_report)}};
  std::vector<std::string> failures;
  if (!(main_report.max_deviation <= a.max_deviation))
    failures.push_back("max_deviation " + std::to_string(main_report.max_deviation) + " > " +
                       std::to_string(a.max_deviation));
  if (main_report.exact && !(main_report.residual <= a.max_residual))
    failures.push_back("residual " + std::to_string(main_report.residual));
  json comparisons = json::array();
  for (double m : a.compare_mesh) {
    const auto r = run(m);
    comparisons.push_back({{"mesh", m}, {"result", kernel_report_json(r)}});
    if (m > a.mesh && !(main_report.max_deviation < r.max_deviation))
      failures.push_back("max_deviation not below the value " + std::to_string(r.max_deviation) + " at mesh " +
                         std::to_string(m));
  }
  report["comparisons"] = comparisons;
  report["failures"] = failures;
  report["pass"] = failures.empty();
  write_json(a.out, report);
  std::cout << "kernel: max deviation " << main_report.max_deviation << " at mesh " << a.mesh << "\n";
  for (const auto& f : failures) std::cerr << "FAIL " << f << "\n";
  return failures.empty() ? kOk : kVerifyFailed;
}

struct MartingaleArgs {
  std::string config;
  std::size_t lattice = 5;
  std::size_t steps = 4;
  double tolerance = 1e-12;
  std::string out = "martingale_report.json";
  std::string trace = "martingale_trace.csv";
};

int cmd_verify_martingale(const MartingaleArgs& a) {
  if (a.lattice < 3) throw InputError("--lattice must be at least 3");
  // L sites across the diameter of the unit disc.
  const double mesh = 2.0 / static_cast<double>(a.lattice - 1);
  const auto g = build_square_lattice(mesh, 1.0 + mesh);
  const auto rep = martingale_check(g, Domain::unit_disc(), a.steps);
  const bool pass = rep.max_abs_error <= a.tolerance && !rep.rows.empty();
  write_file(a.trace, martingale_csv(rep));
  write_json(a.out, {{"lattice", a.lattice},
                     {"mesh", mesh},
                     {"steps", a.steps},
                     {"prefixes", rep.prefixes},
                     {"rows", rep.rows.size()},
                     {"max_abs_error", rep.max_abs_error},
                     {"max_law_defect", rep.max_law_defect},
                     {"tolerance", a.tolerance},
                     {"pass", pass}});
  std::cout << "martingale: " << rep.prefixes << " prefixes, max |E[M_{n+1}|F_n] - M_n| = " << rep.max_abs_error
            << "\n";
  if (!pass) std::cerr << "FAIL max_abs_error " << rep.max_abs_error << " > " << a.tolerance << "\n";
  return pass ? kOk : kVerifyFailed;
}

struct Sle2Args {
  std::string config;
  GraphSource source;
  double domain_radius = 1.0;
  std::size_t n = 2000;
  std::uint64_t seed = 0;
  unsigned threads = default_thread_count();
  double grid_lo = 0.05;
  double grid_hi = 1.0;
  std::size_t grid_points = 20;
  double kappa_lo = 1.6;
  double kappa_hi = 2.4;
  std::size_t max_skipped = 0;
  std::string out = "sle2_report.json";
  std::string csv;
};

int cmd_verify_sle2(const Sle2Args& a) {
  const auto g = a.source.load(a.domain_radius);
  LerwEnsembleOptions opt;
  opt.samples = a.n;
  opt.seed = a.seed;
  opt.threads = a.threads;
  opt.grid = capacity_grid(a.grid_lo, a.grid_hi, a.grid_points);
  const auto ens = lerw_driver_ensemble(g, Domain::disc(a.domain_radius), opt);

  std::vector<std::string> failures;
  json report{{"graph_hash", graph_hash(g)},
              {"samples", a.n},
              {"seed", a.seed},
              {"used", ens.drivers.size()},
              {"excluded", ens.excluded},
              {"kappa_band", {a.kappa_lo, a.kappa_hi}}};
  json skipped = json::array();
  for (const auto& s : ens.skipped) skipped.push_back({{"index", s.index}, {"error", s.message}});
  report["skipped"] = skipped;
  if (ens.skipped.size() > a.max_skipped)
    failures.push_back("skipped samples " + std::to_string(ens.skipped.size()));
  if (ens.summary) {
    const auto& s = *ens.summary;
    report["summary"] = summary_json(s);
    if (!(s.kappa_hat >= a.kappa_lo && s.kappa_hat <= a.kappa_hi))
      failures.push_back("kappa_hat " + std::to_string(s.kappa_hat) + " outside band");
    if (!a.csv.empty()) write_file(a.csv, summary_csv(s));
    std::cout << "sle2: kappa_hat " << s.kappa_hat << " CI [" << s.kappa_lo << ", " << s.kappa_hi << "] from "
              << s.samples << " drivers\n";
  } else {
    failures.push_back("fewer than " + std::to_string(kMinEnsemble) + " usable samples");
  }
  report["failures"] = failures;
  report["pass"] = failures.empty();
  write_json(a.out, report);
  for (const auto& f : failures) std::cerr << "FAIL " << f << "\n";
  if (!failures.empty()) return kVerifyFailed;
  return ens.skipped.empty() ? kOk : kPartial;
}

struct ReversalArgs {
  std::string config;
  GraphSource source;
  double domain_radius = 1.0;
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  unsigned threads = default_thread_count();
  double alpha = 0.01;
  bool self_test = false;
  std::string out = "reversal_report.json";
};

int cmd_verify_reversal(const ReversalArgs& a) {
  const auto g = a.source.load(a.domain_radius);
  const auto rep = reversal_law_test(g, Domain::disc(a.domain_radius), a.n, a.seed, a.threads, a.self_test);
  const bool pass = rep.angle.p_value > a.alpha;
  write_json(a.out, {{"graph_hash", graph_hash(g)},
                     {"samples", rep.samples},
                     {"seed", a.seed},
                     {"mode", a.self_test ? "forward-vs-forward" : "forward-vs-reversal"},
                     {"exit_angle", {{"ks", rep.angle.statistic}, {"p", rep.angle.p_value}}},
                     {"length", {{"ks", rep.length.statistic}, {"p", rep.length.p_value}}},
                     {"alpha", a.alpha},
                     {"pass", pass}});
  std::cout << "reversal: exit-angle KS p = " << rep.angle.p_value << ", length KS p = " << rep.length.p_value << "\n";
  if (!pass) std::cerr << "FAIL exit-angle p " << rep.angle.p_value << " <= " << a.alpha << "\n";
  return pass ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- render

struct RenderArgs {
  std::string config;
  std::vector<std::string> curves;
  std::string walk;
  double domain_radius = 1.0;
  int size = 800;
  std::string out = "figure.svg";
};

int cmd_render(const RenderArgs& a) {
  std::vector<Curve> curves;
  for (const auto& f : a.curves) {
    Curve c = load_curve(f);
    for (auto& p : c.points) p /= a.domain_radius;
    curves.push_back(std::move(c));
  }
  std::optional<Curve> walk;
  if (!a.walk.empty()) {
    walk = load_walk_points(a.walk);
    for (auto& p : walk->points) p /= a.domain_radius;
  }
  write_file(a.out, render_svg(curves, walk ? &*walk : nullptr, a.size));
  std::cout << "render: " << curves.size() << " curves -> " << a.out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loop-erased random walk and radial SLE toolkit"};
  app.require_subcommand(1);
  unsigned threads_override = 0;
  app.add_option("--threads", threads_override, "Worker threads (default: LERW_THREADS or core count)");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Build a graph and print its content hash");
  generate->add_option("--config", gen.config, "JSON config");
  generate->add_option("--kind", gen.kind)->check(CLI::IsMember({"lattice", "percolation", "lawler"}));
  generate->add_option("--mesh", gen.mesh);
  generate->add_option("--radius", gen.radius);
  generate->add_option("--p", gen.p);
  auto* gen_seed = generate->add_option("--seed", gen.seed);
  generate->add_option("-o,--out", gen.out);

  WalkArgs wk;
  auto* walk = app.add_subcommand("walk", "Run one random walk from the origin");
  walk->add_option("--config", wk.config);
  wk.source.attach(walk);
  walk->add_option("--domain-radius", wk.domain_radius);
  walk->add_option("--seed", wk.seed);
  walk->add_option("-o,--out", wk.out);

  LerwArgs lw;
  auto* lerw_cmd = app.add_subcommand("lerw", "Sample loop-erased random walks");
  lerw_cmd->add_option("--config", lw.config);
  lw.source.attach(lerw_cmd);
  lerw_cmd->add_option("--domain-radius", lw.domain_radius);
  lerw_cmd->add_option("-n,--n", lw.n);
  lerw_cmd->add_option("--seed", lw.seed);
  lerw_cmd->add_flag("--save-walks", lw.save_walks);
  lerw_cmd->add_option("-o,--out", lw.out);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Extract the driving function of a curve");
  extract->add_option("--config", ex.config);
  extract->add_option("--curve", ex.curve);
  extract->add_option("--domain-radius", ex.domain_radius);
  extract->add_option("--max-capacity", ex.max_capacity);
  extract->add_option("--max-dt", ex.max_dt);
  extract->add_option("--max-dtheta", ex.max_dtheta);
  extract->add_option("-o,--out", ex.out);

  SleArgs sl;
  auto* sle = app.add_subcommand("sle", "Sample a radial SLE trace");
  sle->add_option("--config", sl.config);
  sle->add_option("--kappa", sl.kappa);
  sle->add_option("--horizon", sl.horizon);
  sle->add_option("--dt", sl.dt);
  sle->add_option("--seed", sl.seed);
  sle->add_option("--out-curve", sl.out_curve);
  sle->add_option("--out-driver", sl.out_driver);

  auto* verify = app.add_subcommand("verify", "Run a verification experiment");
  verify->require_subcommand(1);

  KernelArgs ka;
  auto* vk = verify->add_subcommand("kernel", "Discrete Poisson kernel ratios against the disc kernel");
  vk->add_option("--config", ka.config);
  vk->add_option("--mesh", ka.mesh);
  vk->add_option("--compare-mesh", ka.compare_mesh, "Coarser meshes whose deviation must be larger");
  vk->add_option("--arcs", ka.arcs);
  vk->add_option("--a", ka.a, "Real coordinate of the interior point");
  vk->add_option("--epsilon", ka.epsilon);
  vk->add_option("--max-deviation", ka.max_deviation);
  vk->add_option("--max-residual", ka.max_residual);
  vk->add_option("--mc", ka.mc, "Monte Carlo walks instead of the exact solve");
  vk->add_option("--seed", ka.seed);
  vk->add_option("-o,--out", ka.out);

  MartingaleArgs ma;
  auto* vm = verify->add_subcommand("martingale", "Exact martingale identity on a small lattice");
  vm->add_option("--config", ma.config);
  vm->add_option("--lattice", ma.lattice, "Sites across the diameter");
  vm->add_option("--steps", ma.steps);
  vm->add_option("--tolerance", ma.tolerance);
  vm->add_option("-o,--out", ma.out);
  vm->add_option("--trace", ma.trace);

  Sle2Args sa;
  auto* vs = verify->add_subcommand("sle2", "Variance slope of LERW driving functions");
  vs->add_option("--config", sa.config);
  sa.source.attach(vs);
  vs->add_option("--domain-radius", sa.domain_radius);
  vs->add_option("-n,--n", sa.n);
  vs->add_option("--seed", sa.seed);
  vs->add_option("--grid-lo", sa.grid_lo);
  vs->add_option("--grid-hi", sa.grid_hi);
  vs->add_option("--grid-points", sa.grid_points);
  vs->add_option("--kappa-lo", sa.kappa_lo);
  vs->add_option("--kappa-hi", sa.kappa_hi);
  vs->add_option("--max-skipped", sa.max_skipped);
  vs->add_option("-o,--out", sa.out);
  vs->add_option("--csv", sa.csv);

  ReversalArgs ra;
  auto* vr = verify->add_subcommand("reversal", "Forward against reversed loop-erasure laws");
  vr->add_option("--config", ra.config);
  ra.source.attach(vr);
  vr->add_option("--domain-radius", ra.domain_radius);
  vr->add_option("-n,--n", ra.n);
  vr->add_option("--seed", ra.seed);
  vr->add_option("--alpha", ra.alpha);
  vr->add_flag("--self-test", ra.self_test);
  vr->add_option("-o,--out", ra.out);

  RenderArgs rd;
  auto* render = app.add_subcommand("render", "Draw curves and a walk as SVG");
  render->add_option("--config", rd.config);
  render->add_option("--curves", rd.curves);
  render->add_option("--walk", rd.walk);
  render->add_option("--domain-radius", rd.domain_radius);
  render->add_option("--size", rd.size);
  render->add_option("-o,--out", rd.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalidInput;
  }

  // Randomized commands need an explicit seed, from flags or config.
  auto with_config = [](CLI::App* sub, const std::string& cfg) {
    apply_config(*sub, cfg);
    if (sub->get_option("--seed")->count() == 0) throw InputError("--seed is required (in flags or config)");
  };

  try {
    const unsigned threads = threads_override > 0 ? threads_override : default_thread_count();
    lw.threads = sa.threads = ra.threads = ka.threads = threads;
    if (*generate) {
      apply_config(*generate, gen.config);
      gen.seed_given = gen_seed->count() > 0;
      return cmd_generate(gen);
    }
    if (*walk) return with_config(walk, wk.config), cmd_walk(wk);
    if (*lerw_cmd) return with_config(lerw_cmd, lw.config), cmd_lerw(lw);
    if (*extract) return apply_config(*extract, ex.config), cmd_extract(ex);
    if (*sle) return with_config(sle, sl.config), cmd_sle(sl);
    if (*vk) return apply_config(*vk, ka.config), cmd_verify_kernel(ka);
    if (*vm) return apply_config(*vm, ma.config), cmd_verify_martingale(ma);
    if (*vs) return with_config(vs, sa.config), cmd_verify_sle2(sa);
    if (*vr) return with_config(vr, ra.config), cmd_verify_reversal(ra);
    if (*render) return apply_config(*render, rd.config), cmd_render(rd);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}
