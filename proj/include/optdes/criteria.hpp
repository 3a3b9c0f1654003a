#ifndef OPTDES_CRITERIA_HPP
#define OPTDES_CRITERIA_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "optdes/design_space.hpp"
#include "optdes/errors.hpp"
#include "optdes/state.hpp"

namespace optdes {

// D: maximize det(M)^{1/m}. A: maximize (tr(M^{-1}))^{-1}. I-optimality is
// reduced to A by i_to_a_transform before a solver ever runs.
enum class Criterion { D, A };

inline const char* to_string(Criterion c) { return c == Criterion::D ? "D" : "A"; }

// Criterion value of the tracked state. Exponentiation happens only here, so
// large-m determinants never overflow inside the solver.
inline double phi(Criterion criterion, const SolverState& state) {
  if (criterion == Criterion::D) {
    return std::exp(state.logdet / static_cast<double>(state.m()));
  }
  return 1.0 / state.V.trace();
}

// Criterion value of an arbitrary information matrix; singular maps to 0.
inline double phi_of_matrix(Criterion criterion, const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const auto& lam = es.eigenvalues();
  if (lam(0) <= 0.0) return 0.0;
  if (criterion == Criterion::D) {
    return std::exp(lam.array().log().sum() / static_cast<double>(M.rows()));
  }
  return 1.0 / lam.cwiseInverse().sum();
}

// Variance-function vector g(w): d for D-optimality, a for A-optimality.
inline Eigen::VectorXd g_vector(const SolverState& state, const DesignSpace& space,
                                Criterion criterion) {
  const Eigen::MatrixXd Y = space.regressors() * state.V;  // n x m
  if (criterion == Criterion::D) {
    return Y.cwiseProduct(space.regressors()).rowwise().sum();
  }
  return Y.rowwise().squaredNorm();
}

struct EffBound {
  double value;        // certified lower bound on efficiency, in [0, 1]
  Criterion criterion;
  double max_g;        // max_x g_x(w) realizing the bound
};

inline EffBound efficiency_bound_from_g(Criterion criterion, const SolverState& state,
                                        const Eigen::VectorXd& g) {
  const double max_g = g.maxCoeff();
  const double raw = criterion == Criterion::D
                         ? static_cast<double>(state.m()) / max_g
                         : state.V.trace() / max_g;
  return EffBound{std::min(raw, 1.0), criterion, max_g};
}

// Equivalence-theorem stopping bound: eff_D >= m / max d_x,
// eff_A >= tr(M^{-1}) / max a_x.
inline EffBound efficiency_bound(Criterion criterion, const SolverState& state,
                                 const DesignSpace& space) {
  return efficiency_bound_from_g(criterion, state, g_vector(state, space, criterion));
}

// -log10(1 - eff), capped for eff == 1.
inline double log_efficiency(double eff, double cap = 16.0) {
  if (eff >= 1.0) return cap;
  return std::min(-std::log10(1.0 - eff), cap);
}

// Replaces each regressor f(x) by C^{-1} f(x) where L = C C' (Cholesky), so
// that tr(Mtilde(w)^{-1}) = tr(M(w)^{-1} L) for every regular w. Running the
// A-solver on the transformed space therefore solves the I-problem with
// moment matrix L.
inline DesignSpace i_to_a_transform(const DesignSpace& space, const Eigen::MatrixXd& L) {
  const Index m = space.m();
  if (L.rows() != m || L.cols() != m) throw NotSPD("moment matrix has wrong shape");
  if (!L.isApprox(L.transpose(), 1e-10)) throw NotSPD("moment matrix is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(L);
  if (llt.info() != Eigen::Success) throw NotSPD("moment matrix is not positive definite");
  const Eigen::MatrixXd C = llt.matrixL();
  Eigen::MatrixXd H =
      C.triangularView<Eigen::Lower>().solve(space.regressors().transpose()).transpose();
  return DesignSpace(std::move(H), space.labels());
}

}  // namespace optdes

#endif  // OPTDES_CRITERIA_HPP
