#ifndef OPTDES_BENCH_HPP
#define OPTDES_BENCH_HPP

#include <atomic>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "optdes/design_space.hpp"
#include "optdes/rng.hpp"
#include "optdes/solvers.hpp"

namespace optdes {

// Full quadratic model on an equally spaced grid over the cube [-1,1]^d.
struct QuadraticModelSpec {
  int d = 1;
  int points_per_axis = 3;
  long size_cap = 10'000'000;

  Index n() const {
    long n = 1;
    for (int i = 0; i < d; ++i) n *= points_per_axis;
    return n;
  }
  Index m() const { return static_cast<Index>((d + 1) * (d + 2)) / 2; }
};

// Regressor for one grid point: (1, t_1..t_d, t_j t_k for j <= k).
inline Eigen::RowVectorXd quadratic_regressor(const Eigen::VectorXd& t) {
  const Index d = t.size();
  Eigen::RowVectorXd row((d + 1) * (d + 2) / 2);
  Index c = 0;
  row(c++) = 1.0;
  for (Index j = 0; j < d; ++j) row(c++) = t(j);
  for (Index j = 0; j < d; ++j) {
    for (Index k = j; k < d; ++k) row(c++) = t(j) * t(k);
  }
  return row;
}

// Grid points in lexicographic order (first axis slowest).
inline DesignSpace quadratic_space(const QuadraticModelSpec& spec) {
  if (spec.d < 1) throw std::invalid_argument("cube dimension must be >= 1");
  if (spec.points_per_axis < 2) throw std::invalid_argument("need at least 2 points per axis");
  double nd = 1.0;
  for (int i = 0; i < spec.d; ++i) nd *= spec.points_per_axis;
  if (nd > static_cast<double>(spec.size_cap)) {
    throw SizeOverflow("grid of " + std::to_string(nd) + " points exceeds cap");
  }
  const Index n = spec.n();
  const Index d = spec.d;
  Eigen::MatrixXd F(n, spec.m());
  std::vector<std::string> labels(static_cast<std::size_t>(n));
  std::vector<int> odo(static_cast<std::size_t>(d), 0);
  Eigen::VectorXd t(d);
  for (Index row = 0; row < n; ++row) {
    std::string label;
    for (Index j = 0; j < d; ++j) {
      t(j) = -1.0 + 2.0 * odo[static_cast<std::size_t>(j)] / (spec.points_per_axis - 1);
      label += (j > 0 ? "," : "") + std::to_string(t(j));
    }
    F.row(row) = quadratic_regressor(t);
    labels[static_cast<std::size_t>(row)] = label;
    for (Index j = d - 1; j >= 0; --j) {
      if (++odo[static_cast<std::size_t>(j)] < spec.points_per_axis) break;
      odo[static_cast<std::size_t>(j)] = 0;
    }
  }
  return DesignSpace(std::move(F), std::move(labels));
}

// n regressors with independent standard normal entries, deterministic per
// seed.
struct RandomModelSpec {
  Index n = 100;
  Index m = 5;
  std::uint64_t seed = 0;
};

inline DesignSpace random_space(const RandomModelSpec& spec) {
  Rng rng(spec.seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    Eigen::MatrixXd F(spec.n, spec.m);
    for (Index i = 0; i < spec.n; ++i) {
      for (Index j = 0; j < spec.m; ++j) F(i, j) = rng.next_normal();
    }
    try {
      return DesignSpace(std::move(F));
    } catch (const RankDeficient&) {
    }
  }
  throw RankDeficient("random regressors rank-deficient after 10 resamples");
}

struct BenchInstance {
  std::string name;
  DesignSpace space;
};

struct BenchCell {
  std::string instance;
  Algorithm algorithm;
  int repeat = 0;
  bool failed = false;
  std::string error;
  Trajectory trajectory;
  double final_criterion = 0.0;
  double final_eff_bound = 0.0;
  Index final_support = 0;
  TerminationReason reason = TerminationReason::TimeOut;
};

struct BenchReport {
  std::vector<BenchCell> cells;  // keyed by (instance, algorithm, repeat)
};

// Runs every (instance, algorithm, repeat) cell; repeat r uses seed
// base_seed + r. Individual failures are recorded, not fatal. Cells are
// independent and may run on up to `workers` threads.
inline BenchReport run_benchmark(const std::vector<BenchInstance>& instances,
                                 const std::vector<Algorithm>& algorithms,
                                 const SolverConfig& base, int repeats, int workers = 1) {
  BenchReport report;
  for (const auto& inst : instances) {
    for (Algorithm alg : algorithms) {
      for (int rep = 0; rep < repeats; ++rep) {
        BenchCell cell;
        cell.instance = inst.name;
        cell.algorithm = alg;
        cell.repeat = rep;
        report.cells.push_back(std::move(cell));
      }
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= report.cells.size()) return;
      BenchCell& cell = report.cells[i];
      const DesignSpace* space = nullptr;
      for (const auto& inst : instances) {
        if (inst.name == cell.instance) space = &inst.space;
      }
      SolverConfig config = base;
      config.algorithm = cell.algorithm;
      config.seed = base.seed + static_cast<std::uint64_t>(cell.repeat);
      try {
        SolveResult res = optdes::run(*space, config);
        cell.trajectory = std::move(res.trajectory);
        cell.final_criterion = res.final_criterion;
        cell.final_eff_bound = res.final_eff_bound;
        cell.final_support = res.design.support_size();
        cell.reason = res.reason;
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return report;
}

inline void write_trajectory_header(std::ostream& out) {
  out << "instance,algorithm,repeat,iter,seconds,criterion,eff_bound,log_eff,support_size\n";
}

inline void write_trajectory_rows(std::ostream& out, const std::string& instance,
                                  Algorithm algorithm, int repeat, const Trajectory& traj) {
  char buf[128];
  for (const auto& rec : traj.records) {
    out << instance << ',' << to_string(algorithm) << ',' << repeat << ',' << rec.iteration << ',';
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g", rec.seconds, rec.criterion_value,
                  rec.eff_bound, log_efficiency(rec.eff_bound));
    out << buf << ',' << rec.support_size << '\n';
  }
}

// Trajectory CSV: one row per outer iteration, log-efficiency computed from
// the certified equivalence-theorem bound.
inline void write_report_csv(std::ostream& out, const BenchReport& report) {
  write_trajectory_header(out);
  for (const auto& cell : report.cells) {
    if (cell.failed) continue;
    write_trajectory_rows(out, cell.instance, cell.algorithm, cell.repeat, cell.trajectory);
  }
}

}  // namespace optdes

#endif  // OPTDES_BENCH_HPP
