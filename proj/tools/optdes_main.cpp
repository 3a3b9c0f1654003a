// Command-line front-end: optimal approximate designs (solve), benchmark
// sweeps (bench) and minimum-volume enclosing ellipsoids (mvee) over
// file-based CSV I/O. Every run writes a manifest.json sufficient to
// reproduce its outputs bit-for-bit (see `replay`).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "optdes/optdes.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

std::string fnv1a_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

optdes::Criterion parse_criterion(const std::string& s) {
  if (s == "d") return optdes::Criterion::D;
  if (s == "a" || s == "i") return optdes::Criterion::A;
  throw CLI::ValidationError("--criterion", "must be one of d|a|i");
}

optdes::Algorithm parse_algorithm(const std::string& s) {
  if (s == "rex") return optdes::Algorithm::REX;
  if (s == "vem") return optdes::Algorithm::VEM;
  if (s == "mul") return optdes::Algorithm::MUL;
  throw std::runtime_error("unknown algorithm '" + s + "' (valid: rex, vem, mul)");
}

void write_design_csv(const fs::path& path, const optdes::Design& design) {
  std::ofstream out(path, std::ios::binary);
  out << "index,weight\n";
  for (optdes::Index x : design.support()) {
    out << (x + 1) << ',' << fmt17(design.weight(x)) << '\n';
  }
}

void write_manifest(const fs::path& path, const json& manifest) {
  std::ofstream out(path, std::ios::binary);
  out << manifest.dump(2) << '\n';
}

struct SolveArgs {
  std::string input;
  std::string criterion = "d";
  std::string moment;
  double gamma = 4.0;
  double eff = 0.999999;
  double t_max = 60.0;
  std::uint64_t seed = 0;
  std::string algorithm = "rex";
  std::string out_dir = ".";
  bool wall_clock = false;
};

optdes::SolverConfig to_config(const SolveArgs& a) {
  optdes::SolverConfig config;
  config.criterion = parse_criterion(a.criterion);
  config.gamma = a.gamma;
  config.eff_target = a.eff;
  config.t_max = a.t_max;
  config.seed = a.seed;
  config.algorithm = parse_algorithm(a.algorithm);
  config.timing = a.wall_clock ? optdes::TimingMode::Measured : optdes::TimingMode::Deterministic;
  return config;
}

json config_json(const SolveArgs& a) {
  return json{{"input", a.input},   {"criterion", a.criterion}, {"moment", a.moment},
              {"gamma", a.gamma},   {"eff", a.eff},             {"t_max", a.t_max},
              {"seed", a.seed},     {"algorithm", a.algorithm}, {"wall_clock", a.wall_clock}};
}

int run_solve(const SolveArgs& args) {
  if (args.criterion == "i" && args.moment.empty()) {
    std::cerr << "error: --criterion i requires --moment <path> (m x m SPD matrix CSV)\n";
    return 1;
  }

  const Eigen::MatrixXd F = optdes::read_matrix_csv_file(args.input);
  optdes::DesignSpace space(F);
  json inputs{{args.input, fnv1a_digest(args.input)}};
  if (args.criterion == "i") {
    const Eigen::MatrixXd L = optdes::read_matrix_csv_file(args.moment);
    space = optdes::i_to_a_transform(space, L);
    inputs[args.moment] = fnv1a_digest(args.moment);
  }

  const optdes::SolverConfig config = to_config(args);
  const optdes::SolveResult res = optdes::run(space, config);

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_design_csv(out_dir / "design.csv", res.design);
  {
    std::ofstream out(out_dir / "trajectory.csv", std::ios::binary);
    optdes::write_trajectory_header(out);
    optdes::write_trajectory_rows(out, fs::path(args.input).stem().string(), config.algorithm, 0,
                                  res.trajectory);
  }
  json manifest{{"artifact_version", kArtifactVersion},
                {"command", "solve"},
                {"config", config_json(args)},
                {"inputs", inputs},
                {"seed", args.seed},
                {"result",
                 {{"termination", optdes::to_string(res.reason)},
                  {"criterion_value", res.final_criterion},
                  {"eff_bound", res.final_eff_bound},
                  {"support_size", res.design.support_size()}}}};
  write_manifest(out_dir / "manifest.json", manifest);

  return res.reason == optdes::TerminationReason::EffReached ? 0 : 2;
}

struct BenchArgs {
  std::string family;  // quadratic | random
  int d = 2;
  int points_per_axis = 11;
  long n = 1000;
  int m = 10;
  std::string algorithms = "rex,vem,mul";
  int repeats = 5;
  int workers = 1;
  SolveArgs solver;  // shared solver flags (input unused)
};

int run_bench(const BenchArgs& args) {
  if (args.repeats < 1) {
    std::cerr << "error: --repeats must be >= 1\n";
    return 1;
  }
  std::vector<optdes::Algorithm> algorithms;
  std::stringstream ss(args.algorithms);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    try {
      algorithms.push_back(parse_algorithm(name));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }

  std::vector<optdes::BenchInstance> instances;
  std::string instance_name;
  if (args.family == "quadratic") {
    optdes::QuadraticModelSpec spec{args.d, args.points_per_axis};
    instance_name = "quadratic_d" + std::to_string(args.d) + "_p" +
                    std::to_string(args.points_per_axis);
    instances.push_back({instance_name, optdes::quadratic_space(spec)});
  } else {
    optdes::RandomModelSpec spec{args.n, args.m, args.solver.seed};
    instance_name = "random_n" + std::to_string(args.n) + "_m" + std::to_string(args.m);
    instances.push_back({instance_name, optdes::random_space(spec)});
  }

  optdes::SolverConfig base = to_config(args.solver);
  // bench emits real wall-clock timestamps; that is the point of the plots
  base.timing = optdes::TimingMode::Measured;
  optdes::BenchReport report =
      optdes::run_benchmark(instances, algorithms, base, args.repeats, args.workers);

  const fs::path out_dir(args.solver.out_dir);
  fs::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "bench.csv", std::ios::binary);
    optdes::write_report_csv(out, report);
  }
  json cells = json::array();
  for (const auto& cell : report.cells) {
    json c{{"instance", cell.instance},
           {"algorithm", optdes::to_string(cell.algorithm)},
           {"repeat", cell.repeat},
           {"failed", cell.failed}};
    if (cell.failed) {
      c["error"] = cell.error;
    } else {
      c["criterion_value"] = cell.final_criterion;
      c["eff_bound"] = cell.final_eff_bound;
      c["support_size"] = cell.final_support;
      c["termination"] = optdes::to_string(cell.reason);
    }
    cells.push_back(std::move(c));
  }
  json manifest{{"artifact_version", kArtifactVersion},
                {"command", "bench"},
                {"config",
                 {{"family", args.family},
                  {"d", args.d},
                  {"points_per_axis", args.points_per_axis},
                  {"n", args.n},
                  {"m", args.m},
                  {"algorithms", args.algorithms},
                  {"repeats", args.repeats},
                  {"workers", args.workers},
                  {"criterion", args.solver.criterion},
                  {"gamma", args.solver.gamma},
                  {"eff", args.solver.eff},
                  {"t_max", args.solver.t_max},
                  {"seed", args.solver.seed}}},
                {"seed", args.solver.seed},
                {"cells", cells}};
  write_manifest(out_dir / "manifest.json", manifest);
  return 0;
}

struct MveeArgs {
  std::string input;
  double eps = 1e-6;
  double t_max = 60.0;
  std::uint64_t seed = 0;
  double gamma = 4.0;
  std::string out_dir = ".";
};

int run_mvee(const MveeArgs& args) {
  const Eigen::MatrixXd points = optdes::read_matrix_csv_file(args.input);
  optdes::SolverConfig config;
  config.gamma = args.gamma;
  config.t_max = args.t_max;
  config.seed = args.seed;

  const optdes::MveeResult res = optdes::mvee_solve(points, args.eps, config);

  // containment re-verified before anything is written
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (!optdes::contains(res.ellipsoid, points.row(i).transpose(), 1e-9)) {
      std::cerr << "error: computed ellipsoid does not contain input point " << (i + 1) << '\n';
      return 1;
    }
  }

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "ellipsoid.csv", std::ios::binary);
    optdes::write_matrix_csv(out, res.ellipsoid.H);
  }
  write_design_csv(out_dir / "design.csv", res.design);
  json manifest{{"artifact_version", kArtifactVersion},
                {"command", "mvee"},
                {"config",
                 {{"input", args.input},
                  {"eps", args.eps},
                  {"t_max", args.t_max},
                  {"seed", args.seed},
                  {"gamma", args.gamma}}},
                {"inputs", {{args.input, fnv1a_digest(args.input)}}},
                {"seed", args.seed},
                {"certificate",
                 {{"max_d", res.certificate.max_d},
                  {"eff_bound", res.certificate.eff_bound},
                  {"termination", optdes::to_string(res.reason)}}}};
  write_manifest(out_dir / "manifest.json", manifest);
  return res.reason == optdes::TerminationReason::EffReached ? 0 : 2;
}

int run_replay(const std::string& manifest_path, const std::string& out_dir) {
  std::ifstream in(manifest_path);
  if (!in) {
    std::cerr << "error: cannot open " << manifest_path << '\n';
    return 1;
  }
  const json manifest = json::parse(in);
  const std::string command = manifest.at("command");
  const json& c = manifest.at("config");
  if (command == "solve") {
    SolveArgs args;
    args.input = c.at("input");
    args.criterion = c.at("criterion");
    args.moment = c.at("moment");
    args.gamma = c.at("gamma");
    args.eff = c.at("eff");
    args.t_max = c.at("t_max");
    args.seed = c.at("seed");
    args.algorithm = c.at("algorithm");
    args.wall_clock = c.at("wall_clock");
    args.out_dir = out_dir;
    return run_solve(args);
  }
  if (command == "mvee") {
    MveeArgs args;
    args.input = c.at("input");
    args.eps = c.at("eps");
    args.t_max = c.at("t_max");
    args.seed = c.at("seed");
    args.gamma = c.at("gamma");
    args.out_dir = out_dir;
    return run_mvee(args);
  }
  if (command == "bench") {
    BenchArgs args;
    args.family = c.at("family");
    args.d = c.at("d");
    args.points_per_axis = c.at("points_per_axis");
    args.n = c.at("n");
    args.m = c.at("m");
    args.algorithms = c.at("algorithms");
    args.repeats = c.at("repeats");
    args.workers = c.at("workers");
    args.solver.criterion = c.at("criterion");
    args.solver.gamma = c.at("gamma");
    args.solver.eff = c.at("eff");
    args.solver.t_max = c.at("t_max");
    args.solver.seed = c.at("seed");
    args.solver.out_dir = out_dir;
    return run_bench(args);
  }
  std::cerr << "error: unknown command '" << command << "' in manifest\n";
  return 1;
}

void add_solver_flags(CLI::App* cmd, SolveArgs& args) {
  cmd->add_option("--criterion", args.criterion, "Optimality criterion: d|a|i")
      ->check(CLI::IsMember({"d", "a", "i"}));
  cmd->add_option("--gamma", args.gamma, "REX greedy batch tuning parameter");
  cmd->add_option("--eff", args.eff, "Certified efficiency stopping threshold");
  cmd->add_option("--t-max", args.t_max, "Wall-clock budget in seconds");
  cmd->add_option("--seed", args.seed, "RNG seed");
  cmd->add_option("--algorithm", args.algorithm, "Solver: rex|vem|mul")
      ->check(CLI::IsMember({"rex", "vem", "mul"}));
  cmd->add_option("--out", args.out_dir, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal approximate experimental designs on finite design spaces"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Compute an optimal approximate design");
  solve_cmd->add_option("--input", solve_args.input, "n x m regressor matrix CSV")->required();
  solve_cmd->add_option("--moment", solve_args.moment,
                        "m x m SPD moment matrix CSV (required for --criterion i)");
  add_solver_flags(solve_cmd, solve_args);
  solve_cmd->add_flag("--wall-clock", solve_args.wall_clock,
                      "Record measured wall-clock trajectory timestamps instead of the "
                      "deterministic work-based timestamps");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Run a timed benchmark sweep");
  bench_cmd->fallthrough();
  auto* quad_cmd = bench_cmd->add_subcommand("quadratic", "Full quadratic model on [-1,1]^d");
  quad_cmd->fallthrough();
  quad_cmd->add_option("--d", bench_args.d, "Cube dimension");
  quad_cmd->add_option("--points-per-axis", bench_args.points_per_axis, "Grid points per axis");
  auto* rand_cmd = bench_cmd->add_subcommand("random", "Gaussian random regressors");
  rand_cmd->fallthrough();
  rand_cmd->add_option("--n", bench_args.n, "Number of design points");
  rand_cmd->add_option("--m", bench_args.m, "Regressor dimension");
  bench_cmd->require_subcommand(1);
  bench_cmd->add_option("--algorithms", bench_args.algorithms,
                        "Comma-separated list from rex,vem,mul");
  bench_cmd->add_option("--repeats", bench_args.repeats, "Seeded repeats per cell");
  bench_cmd->add_option("--workers", bench_args.workers, "Parallel worker threads");
  add_solver_flags(bench_cmd, bench_args.solver);

  MveeArgs mvee_args;
  auto* mvee_cmd = app.add_subcommand("mvee", "Minimum-volume enclosing ellipsoid (origin-centered)");
  mvee_cmd->add_option("--input", mvee_args.input, "n x m point matrix CSV")->required();
  mvee_cmd->add_option("--eps", mvee_args.eps, "Relative enlargement tolerance");
  mvee_cmd->add_option("--t-max", mvee_args.t_max, "Wall-clock budget in seconds");
  mvee_cmd->add_option("--seed", mvee_args.seed, "RNG seed");
  mvee_cmd->add_option("--gamma", mvee_args.gamma, "REX greedy batch tuning parameter");
  mvee_cmd->add_option("--out", mvee_args.out_dir, "Output directory");

  std::string replay_manifest;
  std::string replay_out = ".";
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a recorded manifest bit-for-bit");
  replay_cmd->add_option("manifest", replay_manifest, "manifest.json from a previous run")
      ->required();
  replay_cmd->add_option("--out", replay_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(solve_args);
    if (bench_cmd->parsed()) {
      bench_args.family = quad_cmd->parsed() ? "quadratic" : "random";
      return run_bench(bench_args);
    }
    if (mvee_cmd->parsed()) return run_mvee(mvee_args);
    if (replay_cmd->parsed()) return run_replay(replay_manifest, replay_out);
  } catch (const optdes::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
