#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "optdes/bench.hpp"
#include "optdes/solvers.hpp"
#include "oracles.hpp"

using namespace optdes;
using Catch::Approx;

namespace {

SolverConfig quick_config(Criterion criterion, Algorithm algorithm, std::uint64_t seed = 0) {
  SolverConfig config;
  config.criterion = criterion;
  config.algorithm = algorithm;
  config.seed = seed;
  config.t_max = 10.0;
  return config;
}

void check_monotone(const Trajectory& traj) {
  for (std::size_t i = 1; i < traj.records.size(); ++i) {
    const double prev = traj.records[i - 1].criterion_value;
    REQUIRE(traj.records[i].criterion_value >= prev - 1e-12 * std::abs(prev));
    REQUIRE(traj.records[i].seconds >= traj.records[i - 1].seconds);
  }
}

}  // namespace

TEST_CASE("lbe_step at the D-optimal quadratic design does nothing") {
  const auto space = oracles::quadratic_three_point();
  Design design = Design::uniform(3);
  SolverState state = build_state(space, design);
  const Eigen::VectorXd g = g_vector(state, space, Criterion::D);
  const LbeResult lbe = lbe_step(state, space, design, Criterion::D, g);
  CHECK(std::abs(lbe.step.alpha) < 1e-9);
  CHECK(design.weight(0) == Approx(1.0 / 3.0).margin(1e-9));
}

TEST_CASE("lbe_step picks the Bohning pair on the tilted pair") {
  const auto space = oracles::orthonormal_pair();
  Design design(Eigen::Vector2d(0.75, 0.25));
  SolverState state = build_state(space, design);
  const Eigen::VectorXd g = g_vector(state, space, Criterion::D);
  const LbeResult lbe = lbe_step(state, space, design, Criterion::D, g);
  CHECK(lbe.k == 0);
  CHECK(lbe.l == 1);
  CHECK(lbe.step.alpha == Approx(0.25).margin(1e-12));
  CHECK(design.weight(0) == Approx(0.5));
  CHECK(design.weight(1) == Approx(0.5));
}

TEST_CASE("lbe_step degenerate single-point space") {
  Eigen::MatrixXd F(1, 1);
  F << 2.0;
  const DesignSpace space(F);
  Design design = Design::vertex(1, 0);
  SolverState state = build_state(space, design);
  const Eigen::VectorXd g = g_vector(state, space, Criterion::D);
  const LbeResult lbe = lbe_step(state, space, design, Criterion::D, g);
  CHECK(lbe.k == 0);
  CHECK(lbe.l == 0);
  CHECK(lbe.step.alpha == 0.0);
}

TEST_CASE("select_subspace") {
  SECTION("gamma m >= n activates every point") {
    Eigen::VectorXd g(4);
    g << 1, 2, 3, 4;
    const Design design(Eigen::Vector4d(0.25, 0.25, 0.25, 0.25));
    const auto sel = select_subspace(g, design, 4.0, 2);
    CHECK(sel.greedy.size() == 4);
    CHECK(sel.active == std::vector<Index>{0, 1, 2, 3});
  }

  SECTION("top-L with union of the support") {
    Eigen::VectorXd g(5);
    g << 5, 4, 3, 2, 1;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(5);
    w(3) = 1.0;
    const Design design(w);
    const auto sel = select_subspace(g, design, 1.0, 2);
    CHECK(sel.greedy == std::vector<Index>{0, 1});
    CHECK(sel.support == std::vector<Index>{3});
    CHECK(sel.active == std::vector<Index>{0, 1, 3});
  }

  SECTION("ties break to the lowest index") {
    Eigen::VectorXd g = Eigen::VectorXd::Constant(5, 1.0);
    const Design design(Eigen::VectorXd::Constant(5, 0.2));
    const auto sel = select_subspace(g, design, 1.0, 2);
    CHECK(sel.greedy == std::vector<Index>{0, 1});
  }

  SECTION("non-integer gamma m rounds up") {
    Eigen::VectorXd g(5);
    g << 5, 4, 3, 2, 1;
    const Design design(Eigen::VectorXd::Constant(5, 0.2));
    CHECK(select_subspace(g, design, 0.9, 3).greedy.size() == 3);  // ceil(2.7)
  }
}

TEST_CASE("rex_iterate is an ascent step") {
  std::mt19937 gen(3);
  const auto space = oracles::random_design_space(gen, 15, 4);
  SolverConfig config = quick_config(Criterion::D, Algorithm::REX);
  Rng rng(7);
  Design design = oracles::random_regular_design(gen, space, 6);
  SolverState state = build_state(space, design);
  for (int it = 0; it < 10; ++it) {
    const double before = phi(Criterion::D, state);
    const Eigen::VectorXd g = g_vector(state, space, Criterion::D);
    rex_iterate(state, space, design, config, rng, g);
    const double after = phi(Criterion::D, state);
    REQUIRE(after >= before - 1e-12 * before);
  }
}

TEST_CASE("rex_iterate with a nullifying LBE applies only nullifying exchanges") {
  std::mt19937 gen(5);
  SolverConfig config = quick_config(Criterion::D, Algorithm::REX);
  int nullifying_iters = 0;
  for (int rep = 0; rep < 40 && nullifying_iters < 10; ++rep) {
    const auto space = oracles::random_design_space(gen, 12, 3);
    Design design = oracles::random_regular_design(gen, space, 8);
    SolverState state = build_state(space, design);
    Rng rng(static_cast<std::uint64_t>(rep));
    for (int it = 0; it < 5; ++it) {
      const Eigen::VectorXd g = g_vector(state, space, Criterion::D);
      std::vector<StepResult> applied;
      const RexIterStats stats = rex_iterate(state, space, design, config, rng, g, &applied);
      if (!stats.lbe_nullifying) continue;
      ++nullifying_iters;
      for (const StepResult& step : applied) REQUIRE(step.nullifying);
    }
  }
  CHECK(nullifying_iters > 0);
}

TEST_CASE("rex converges to the uniform D-optimal quadratic design") {
  const auto space = oracles::quadratic_three_point();
  for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
    const SolveResult res = solve(space, quick_config(Criterion::D, Algorithm::REX, seed));
    REQUIRE(res.reason == TerminationReason::EffReached);
    for (Index x = 0; x < 3; ++x) {
      CHECK(res.design.weight(x) == Approx(1.0 / 3.0).margin(1e-4));
    }
    check_monotone(res.trajectory);
  }
}

TEST_CASE("solve on an orthonormal basis returns uniform weights immediately") {
  const DesignSpace space(Eigen::MatrixXd::Identity(3, 3));
  const SolveResult res = solve(space, quick_config(Criterion::D, Algorithm::REX));
  REQUIRE(res.reason == TerminationReason::EffReached);
  for (Index x = 0; x < 3; ++x) CHECK(res.design.weight(x) == Approx(1.0 / 3.0).margin(1e-9));
  CHECK(res.final_eff_bound >= 1.0 - 1e-9);
}

TEST_CASE("rex solves the A-optimal quadratic design") {
  // closed-form oracle: tr(M^{-1}) = 1/(w1 (1 - 2 w1)), minimized at (1/4, 1/2, 1/4)
  const auto space = oracles::quadratic_three_point();
  const SolveResult res = solve(space, quick_config(Criterion::A, Algorithm::REX));
  REQUIRE(res.reason == TerminationReason::EffReached);
  CHECK(res.design.weight(0) == Approx(0.25).margin(1e-4));
  CHECK(res.design.weight(1) == Approx(0.5).margin(1e-4));
  CHECK(res.design.weight(2) == Approx(0.25).margin(1e-4));
  CHECK(res.final_criterion == Approx(1.0 / 8.0).margin(1e-4));
  check_monotone(res.trajectory);
}

TEST_CASE("identical seeds give bit-identical trajectories") {
  std::mt19937 gen(9);
  const auto space = oracles::random_design_space(gen, 20, 4);
  const SolverConfig config = quick_config(Criterion::D, Algorithm::REX, 42);
  const SolveResult a = solve(space, config);
  const SolveResult b = solve(space, config);
  REQUIRE(a.trajectory.records.size() == b.trajectory.records.size());
  for (std::size_t i = 0; i < a.trajectory.records.size(); ++i) {
    REQUIRE(a.trajectory.records[i].criterion_value == b.trajectory.records[i].criterion_value);
    REQUIRE(a.trajectory.records[i].eff_bound == b.trajectory.records[i].eff_bound);
    REQUIRE(a.trajectory.records[i].seconds == b.trajectory.records[i].seconds);
  }
  REQUIRE(a.design.weights() == b.design.weights());
}

TEST_CASE("vem matches the small-instance optima") {
  const auto space = oracles::quadratic_three_point();
  SECTION("D") {
    const SolveResult res = vem_solve(space, quick_config(Criterion::D, Algorithm::VEM));
    REQUIRE(res.reason == TerminationReason::EffReached);
    for (Index x = 0; x < 3; ++x) CHECK(res.design.weight(x) == Approx(1.0 / 3.0).margin(1e-4));
    check_monotone(res.trajectory);
  }
  SECTION("A") {
    const SolveResult res = vem_solve(space, quick_config(Criterion::A, Algorithm::VEM));
    REQUIRE(res.reason == TerminationReason::EffReached);
    CHECK(res.design.weight(1) == Approx(0.5).margin(1e-4));
  }
}

TEST_CASE("the Bohning step strictly increases det at a sub-optimal design") {
  std::mt19937 gen(13);
  for (int rep = 0; rep < 30; ++rep) {
    const auto space = oracles::random_design_space(gen, 10, 3);
    Design design = oracles::random_regular_design(gen, space, 10);
    SolverState state = build_state(space, design);
    const Eigen::VectorXd g = g_vector(state, space, Criterion::D);
    if (efficiency_bound_from_g(Criterion::D, state, g).value > 1.0 - 1e-9) continue;
    const double before = state.logdet;
    lbe_step(state, space, design, Criterion::D, g);
    REQUIRE(state.logdet > before);
  }
}

TEST_CASE("mul converges on the quadratic model") {
  const auto space = oracles::quadratic_three_point();
  SolverConfig config = quick_config(Criterion::D, Algorithm::MUL);
  config.eff_target = 1.0 - 1e-6;
  const SolveResult res = mul_solve(space, config);
  REQUIRE(res.reason == TerminationReason::EffReached);
  for (Index x = 0; x < 3; ++x) CHECK(res.design.weight(x) == Approx(1.0 / 3.0).margin(1e-3));
  CHECK(res.trajectory.records.size() < 10000);
  check_monotone(res.trajectory);
}

TEST_CASE("the multiplicative update fixes the D-optimum and keeps a probability vector") {
  const auto space = oracles::quadratic_three_point();
  const Design design = Design::uniform(3);
  const SolverState state = build_state(space, design);
  const Eigen::VectorXd g = g_vector(state, space, Criterion::D);
  const Eigen::VectorXd updated = design.weights().cwiseProduct(g) / design.weights().dot(g);
  CHECK((updated - design.weights()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(updated.sum() == Approx(1.0).margin(1e-12));
}

TEST_CASE("termination quality: EffReached is certified by a full-vector check") {
  std::mt19937 gen(17);
  for (int rep = 0; rep < 5; ++rep) {
    const auto space = oracles::random_design_space(gen, 25, 4);
    for (Criterion criterion : {Criterion::D, Criterion::A}) {
      const SolveResult res =
          solve(space, quick_config(criterion, Algorithm::REX, static_cast<std::uint64_t>(rep)));
      REQUIRE(res.reason == TerminationReason::EffReached);
      const SolverState state = build_state(space, res.design);
      const Eigen::VectorXd g = g_vector(state, space, criterion);
      const double limit = criterion == Criterion::D
                               ? static_cast<double>(space.m()) / (1.0 - 1e-6)
                               : state.V.trace() / (1.0 - 1e-6);
      REQUIRE(g.maxCoeff() <= limit + 1e-9);
    }
  }
}

TEST_CASE("row-permutation invariance of the reached value") {
  std::mt19937 gen(19);
  const auto space = oracles::random_design_space(gen, 15, 3);
  std::vector<Index> perm(15);
  for (Index i = 0; i < 15; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), gen);
  Eigen::MatrixXd P(15, space.m());
  for (Index i = 0; i < 15; ++i) P.row(i) = space.regressor(perm[static_cast<std::size_t>(i)]);
  const DesignSpace permuted(P);

  const SolveResult a = solve(space, quick_config(Criterion::D, Algorithm::REX, 1));
  const SolveResult b = solve(permuted, quick_config(Criterion::D, Algorithm::REX, 99));
  REQUIRE(a.reason == TerminationReason::EffReached);
  REQUIRE(b.reason == TerminationReason::EffReached);
  CHECK(a.final_criterion == Approx(b.final_criterion).epsilon(1e-4));
}

TEST_CASE("support size at convergence respects the Caratheodory-style bound") {
  QuadraticModelSpec spec{1, 3};  // m = 3 on {-1, 0, 1}
  const auto space = quadratic_space(spec);
  const SolveResult res = solve(space, quick_config(Criterion::D, Algorithm::REX));
  REQUIRE(res.reason == TerminationReason::EffReached);
  CHECK(res.design.support_size() <= 1 + space.m() * (space.m() + 1) / 2);
}

TEST_CASE("config validation") {
  const auto space = oracles::quadratic_three_point();
  SolverConfig config = quick_config(Criterion::D, Algorithm::REX);
  SECTION("gamma below 1/m") {
    config.gamma = 0.1;
    CHECK_THROWS_AS(solve(space, config), std::invalid_argument);
  }
  SECTION("eff_target outside (0,1)") {
    config.eff_target = 1.0;
    CHECK_THROWS_AS(solve(space, config), std::invalid_argument);
  }
  SECTION("non-positive time budget") {
    config.t_max = 0.0;
    CHECK_THROWS_AS(solve(space, config), std::invalid_argument);
  }
}
