#ifndef OPTDES_SOLVERS_HPP
#define OPTDES_SOLVERS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "optdes/criteria.hpp"
#include "optdes/design.hpp"
#include "optdes/design_space.hpp"
#include "optdes/errors.hpp"
#include "optdes/exchange.hpp"
#include "optdes/rng.hpp"
#include "optdes/state.hpp"

namespace optdes {

enum class Algorithm { REX, VEM, MUL };
enum class TerminationReason { EffReached, TimeOut, Stalled };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::REX: return "rex";
    case Algorithm::VEM: return "vem";
    default: return "mul";
  }
}

inline const char* to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::EffReached: return "eff_reached";
    case TerminationReason::TimeOut: return "timeout";
    default: return "stalled";
  }
}

// Timestamp source for trajectory records. Deterministic timestamps come
// from a fixed per-work-unit cost model, so identical (seed, config) runs
// produce byte-identical trajectories; Measured uses the monotonic clock.
// The t_max budget is always enforced on the monotonic clock.
enum class TimingMode { Deterministic, Measured };

struct SolverConfig {
  Criterion criterion = Criterion::D;
  double gamma = 4.0;                 // greedy batch tuning, >= 1/m
  double eff_target = 1.0 - 1e-6;    // certified-efficiency stopping threshold
  double t_max = 60.0;               // wall-clock budget in seconds
  std::uint64_t seed = 0;
  long refresh_cadence = 64;         // full refactorization every this many exchanges
  Algorithm algorithm = Algorithm::REX;
  TimingMode timing = TimingMode::Deterministic;

  void validate(Index m) const {
    if (gamma < 1.0 / static_cast<double>(m)) {
      throw std::invalid_argument("gamma must be >= 1/m");
    }
    if (!(eff_target > 0.0 && eff_target < 1.0)) {
      throw std::invalid_argument("eff_target must lie in (0, 1)");
    }
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (refresh_cadence < 1) throw std::invalid_argument("refresh_cadence must be >= 1");
  }
};

struct TrajectoryRecord {
  double seconds;
  double criterion_value;
  double eff_bound;
  Index support_size;
  long iteration;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
};

struct SolveResult {
  Design design;
  Trajectory trajectory;
  TerminationReason reason;
  double final_criterion = 0.0;
  double final_eff_bound = 0.0;
};

// Active subspace of one REX iteration.
struct SubspaceSelection {
  std::vector<Index> greedy;   // indices of the L = min(ceil(gamma m), n) largest g-values
  std::vector<Index> support;  // support of the current design
  std::vector<Index> active;   // union, sorted
};

inline SubspaceSelection select_subspace(const Eigen::VectorXd& g, const Design& design,
                                         double gamma, Index m) {
  const Index n = g.size();
  const Index L = std::min<Index>(static_cast<Index>(std::ceil(gamma * static_cast<double>(m))), n);
  SubspaceSelection sel;
  sel.greedy.resize(static_cast<std::size_t>(n));
  for (Index x = 0; x < n; ++x) sel.greedy[static_cast<std::size_t>(x)] = x;
  // L largest g entries; ties broken toward the lowest index.
  std::partial_sort(sel.greedy.begin(), sel.greedy.begin() + L, sel.greedy.end(),
                    [&g](Index a, Index b) { return g(a) != g(b) ? g(a) > g(b) : a < b; });
  sel.greedy.resize(static_cast<std::size_t>(L));
  sel.support = design.support();
  std::vector<Index> sorted_greedy = sel.greedy;
  std::sort(sorted_greedy.begin(), sorted_greedy.end());
  std::set_union(sorted_greedy.begin(), sorted_greedy.end(), sel.support.begin(),
                 sel.support.end(), std::back_inserter(sel.active));
  return sel;
}

struct LbeResult {
  StepResult step;
  Index k = 0;  // argmin of g over the support
  Index l = 0;  // argmax of g over all points
};

namespace detail {

inline Index argmax_all(const Eigen::VectorXd& g) {
  Index best = 0;
  for (Index x = 1; x < g.size(); ++x) {
    if (g(x) > g(best)) best = x;
  }
  return best;
}

inline Index argmin_support(const Eigen::VectorXd& g, const std::vector<Index>& support) {
  Index best = support.front();
  for (Index x : support) {
    if (g(x) < g(best)) best = x;
  }
  return best;
}

inline void refresh_if_due(SolverState& state, const DesignSpace& space, const Design& design,
                           long cadence) {
  if (state.exchanges_since_refresh >= cadence) refresh(state, space, design);
}

}  // namespace detail

// Leading Bohning exchange: moves weight optimally between the worst support
// point and the globally most promising point of the precomputed g-vector.
inline LbeResult lbe_step(SolverState& state, const DesignSpace& space, Design& design,
                          Criterion criterion, const Eigen::VectorXd& g) {
  LbeResult r;
  r.k = detail::argmin_support(g, design.support());
  r.l = detail::argmax_all(g);
  if (r.k == r.l) return r;
  r.step = criterion_step(criterion, state, space, design, r.k, r.l);
  if (r.step.alpha != 0.0) {
    try {
      apply_exchange(state, space, design, r.k, r.l, r.step.alpha);
    } catch (const NumericalBreakdown&) {
      refresh(state, space, design);
      r.step = StepResult{};
    }
  }
  return r;
}

struct RexIterStats {
  bool lbe_nullifying = false;
  long exchanges_applied = 0;
};

// One outer REX iteration: LBE on the precomputed g, subspace selection on
// the post-LBE g, then a randomly permuted sweep of all support x greedy
// pairs with live closed-form steps. When the LBE was nullifying, only
// nullifying inner exchanges are applied. `applied_steps`, when given,
// records every exchange that was actually applied.
inline RexIterStats rex_iterate(SolverState& state, const DesignSpace& space, Design& design,
                                const SolverConfig& config, Rng& rng, const Eigen::VectorXd& g,
                                std::vector<StepResult>* applied_steps = nullptr) {
  RexIterStats stats;
  const LbeResult lbe = lbe_step(state, space, design, config.criterion, g);
  stats.lbe_nullifying = lbe.step.nullifying;

  const Eigen::VectorXd g_post = g_vector(state, space, config.criterion);
  SubspaceSelection sel = select_subspace(g_post, design, config.gamma, space.m());
  rng.shuffle(sel.support);
  rng.shuffle(sel.greedy);

  for (Index l : sel.greedy) {
    for (Index k : sel.support) {
      if (k == l) continue;
      const StepResult step = criterion_step(config.criterion, state, space, design, k, l);
      if (step.alpha == 0.0) continue;
      if (stats.lbe_nullifying && !step.nullifying) continue;
      try {
        apply_exchange(state, space, design, k, l, step.alpha);
        ++stats.exchanges_applied;
        if (applied_steps != nullptr) applied_steps->push_back(step);
      } catch (const NumericalBreakdown&) {
        refresh(state, space, design);
      }
      detail::refresh_if_due(state, space, design, config.refresh_cadence);
    }
  }
  return stats;
}

namespace detail {

// Uniform weights on m points sampled without replacement, re-sampled until
// the information matrix is regular.
inline std::pair<Design, SolverState> random_regular_init(const DesignSpace& space,
                                                          const SolverConfig& config, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    const auto picked = rng.sample_without_replacement(space.n(), space.m());
    Design design = Design::uniform_on(space.n(), {picked.begin(), picked.end()});
    try {
      SolverState state = build_state(space, design);
      return {std::move(design), std::move(state)};
    } catch (const SingularDesign&) {
    }
  }
  throw NoRegularStart("no regular m-point initial design in 100 attempts");
}

constexpr double kNominalSecondsPerUnit = 1e-6;
constexpr double kStallRelTol = 1e-15;
constexpr int kStallWindow = 50;

class WorkClock {
 public:
  WorkClock(TimingMode mode) : mode_(mode), start_(std::chrono::steady_clock::now()) {}

  double elapsed_wall() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  // Timestamp for a trajectory record after `units` work units.
  double stamp(long units) const {
    return mode_ == TimingMode::Measured ? elapsed_wall()
                                         : static_cast<double>(units) * kNominalSecondsPerUnit;
  }

 private:
  TimingMode mode_;
  std::chrono::steady_clock::time_point start_;
};

template <typename IterateFn>
SolveResult solve_loop(const DesignSpace& space, const SolverConfig& config, Design design,
                       SolverState state, long units_per_iteration, IterateFn&& iterate) {
  const WorkClock clock(config.timing);
  SolveResult result{std::move(design), {}, TerminationReason::TimeOut};
  double last_phi = -1.0;
  int stall_count = 0;

  for (long iter = 0;; ++iter) {
    const Eigen::VectorXd g = g_vector(state, space, config.criterion);
    const EffBound bound = efficiency_bound_from_g(config.criterion, state, g);
    const double phi_val = phi(config.criterion, state);
    const long units = units_per_iteration > 0 ? iter * units_per_iteration
                                               : state.total_exchanges;
    result.trajectory.records.push_back(
        {clock.stamp(units), phi_val, bound.value, result.design.support_size(), iter});
    result.final_criterion = phi_val;
    result.final_eff_bound = bound.value;

    if (bound.value >= config.eff_target) {
      result.reason = TerminationReason::EffReached;
      break;
    }
    if (clock.elapsed_wall() >= config.t_max) {
      result.reason = TerminationReason::TimeOut;
      break;
    }
    if (phi_val - last_phi <= kStallRelTol * std::abs(last_phi)) {
      if (++stall_count >= kStallWindow) {
        result.reason = TerminationReason::Stalled;
        break;
      }
    } else {
      stall_count = 0;
    }
    last_phi = phi_val;

    iterate(state, result.design, g);
  }
  return result;
}

}  // namespace detail

// REX (randomized exchange algorithm).
inline SolveResult solve(const DesignSpace& space, const SolverConfig& config) {
  config.validate(space.m());
  Rng rng(config.seed);
  auto [design, state] = detail::random_regular_init(space, config, rng);
  return detail::solve_loop(space, config, std::move(design), std::move(state), 0,
                            [&](SolverState& st, Design& d, const Eigen::VectorXd& g) {
                              refresh(st, space, d);  // outer-iteration hygiene
                              rex_iterate(st, space, d, config, rng, g);
                            });
}

// Bohning's vertex exchange method: exactly one LBE per iteration with a
// full g recomputation.
inline SolveResult vem_solve(const DesignSpace& space, const SolverConfig& config) {
  config.validate(space.m());
  Rng rng(config.seed);
  auto [design, state] = detail::random_regular_init(space, config, rng);
  return detail::solve_loop(space, config, std::move(design), std::move(state), 0,
                            [&](SolverState& st, Design& d, const Eigen::VectorXd& g) {
                              lbe_step(st, space, d, config.criterion, g);
                              detail::refresh_if_due(st, space, d, config.refresh_cadence);
                            });
}

// Multiplicative baseline: w_x <- w_x g_x / sum_y w_y g_y each iteration.
// The update cannot grow the support, so it starts from uniform weights on
// all points rather than a random m-point design.
inline SolveResult mul_solve(const DesignSpace& space, const SolverConfig& config) {
  config.validate(space.m());
  Design design = Design::uniform(space.n());
  SolverState state = build_state(space, design);
  const long units_per_iter = space.n();
  return detail::solve_loop(
      space, config, std::move(design), std::move(state), units_per_iter,
      [&](SolverState& st, Design& d, const Eigen::VectorXd& g) {
        // sum_x w_x g_x equals m for D and tr(V) for A; dividing by the
        // realized sum keeps the weights an exact probability vector.
        const double denom = d.weights().dot(g);
        Eigen::VectorXd w = d.weights().cwiseProduct(g) / denom;
        d = Design(w / w.sum());
        refresh(st, space, d);
      });
}

inline SolveResult run(const DesignSpace& space, const SolverConfig& config) {
  switch (config.algorithm) {
    case Algorithm::REX: return solve(space, config);
    case Algorithm::VEM: return vem_solve(space, config);
    default: return mul_solve(space, config);
  }
}

}  // namespace optdes

#endif  // OPTDES_SOLVERS_HPP
