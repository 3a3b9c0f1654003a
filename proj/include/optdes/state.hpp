#ifndef OPTDES_STATE_HPP
#define OPTDES_STATE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "optdes/design.hpp"
#include "optdes/design_space.hpp"
#include "optdes/errors.hpp"

namespace optdes {

// Cached information-matrix state for one design: M(w), its inverse V and
// log det M, maintained under rank-one weight exchanges. Single-owner
// mutable value; not internally synchronized.
struct SolverState {
  Eigen::MatrixXd M;
  Eigen::MatrixXd V;
  double logdet = 0.0;
  long exchanges_since_refresh = 0;
  long total_exchanges = 0;

  Index m() const { return M.rows(); }
};

namespace detail {

constexpr double kConditionTol = 1e-12;

// Symmetric eigen-factorization of M(w) over the support; fills M, V, logdet.
inline void factorize_into(SolverState& state, const DesignSpace& space, const Design& design) {
  const Index m = space.m();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
  for (Index x : design.support()) {
    const auto f = space.regressor(x);
    M.noalias() += design.weight(x) * f.transpose() * f;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) throw SingularDesign("eigen-factorization failed");
  const auto& lam = es.eigenvalues();
  if (lam(0) <= kConditionTol * lam(m - 1) || lam(m - 1) <= 0.0) {
    throw SingularDesign("information matrix is singular or near-singular");
  }
  state.M = std::move(M);
  state.V.noalias() =
      es.eigenvectors() * lam.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  state.logdet = lam.array().log().sum();
}

}  // namespace detail

// Fresh state from a symmetric factorization of M(w).
inline SolverState build_state(const DesignSpace& space, const Design& design) {
  SolverState state;
  detail::factorize_into(state, space, design);
  return state;
}

// Recompute M, V, logdet from scratch and reset the drift counter.
inline void refresh(SolverState& state, const DesignSpace& space, const Design& design) {
  detail::factorize_into(state, space, design);
  state.exchanges_since_refresh = 0;
}

// d_x(w) = f'(x) M^{-1} f(x)
inline double variance_d(const SolverState& state, const DesignSpace& space, Index x) {
  const auto f = space.regressor(x);
  return f * state.V * f.transpose();
}

// a_x(w) = f'(x) M^{-2} f(x) = |V f(x)|^2
inline double variance_a(const SolverState& state, const DesignSpace& space, Index x) {
  return (state.V * space.regressor(x).transpose()).squaredNorm();
}

struct CrossTerms {
  double d_u, d_v, d_uv;
  double a_u, a_v, a_uv;
};

// All six bilinear forms for a pair of points, from one V-multiply per point.
inline CrossTerms cross_terms(const SolverState& state, const DesignSpace& space, Index u,
                              Index v) {
  const auto fu = space.regressor(u);
  const auto fv = space.regressor(v);
  const Eigen::VectorXd yu = state.V * fu.transpose();
  const Eigen::VectorXd yv = state.V * fv.transpose();
  CrossTerms t;
  t.d_u = fu.dot(yu);
  t.d_v = fv.dot(yv);
  t.d_uv = fu.dot(yv);
  t.a_u = yu.squaredNorm();
  t.a_v = yv.squaredNorm();
  t.a_uv = yu.dot(yv);
  return t;
}

namespace detail {

// V <- inverse of (M + c f f'), given V = M^{-1} (Sherman-Morrison).
// Returns the determinant factor 1 + c f'Vf, which must stay positive.
inline double rank_one_inverse_update(Eigen::MatrixXd& V, const Eigen::VectorXd& f, double c) {
  const Eigen::VectorXd y = V * f;
  const double denom = 1.0 + c * f.dot(y);
  V.noalias() -= (c / denom) * y * y.transpose();
  return denom;
}

}  // namespace detail

constexpr double kStepRangeTol = 1e-14;
constexpr double kBreakdownTol = 1e-14;

// Moves weight alpha from u to v and applies the matching rank-one
// corrections to M, V and logdet. The logdet change is
// log[(1 + alpha d_v)(1 - alpha d_u) + alpha^2 d_uv^2] at pre-update
// quantities (matrix determinant lemma). Steps within kStepRangeTol of a
// boundary of [-w_v, w_u] are snapped to it and the nullified weight is set
// to exactly zero. Throws StepOutOfRange beyond that tolerance and
// NumericalBreakdown (state untouched) when the determinant factor is not
// safely positive.
inline void apply_exchange(SolverState& state, const DesignSpace& space, Design& design, Index u,
                           Index v, double alpha) {
  const double wu = design.weight(u);
  const double wv = design.weight(v);
  if (alpha > wu + kStepRangeTol || alpha < -wv - kStepRangeTol) {
    throw StepOutOfRange("step " + std::to_string(alpha) + " outside [" + std::to_string(-wv) +
                         ", " + std::to_string(wu) + "]");
  }
  if (std::abs(alpha - wu) <= kStepRangeTol) alpha = wu;
  if (std::abs(alpha + wv) <= kStepRangeTol) alpha = -wv;
  if (alpha == 0.0) return;

  const Eigen::VectorXd fu = space.regressor(u).transpose();
  const Eigen::VectorXd fv = space.regressor(v).transpose();
  const Eigen::VectorXd yu = state.V * fu;
  const double d_u = fu.dot(yu);
  const double d_v = fv.dot(state.V * fv);
  const double d_uv = fv.dot(yu);
  const double factor = (1.0 + alpha * d_v) * (1.0 - alpha * d_u) + alpha * alpha * d_uv * d_uv;
  if (factor <= kBreakdownTol) {
    throw NumericalBreakdown("determinant update factor " + std::to_string(factor));
  }

  // Two Sherman-Morrison steps, positive-coefficient correction first so the
  // intermediate matrix stays positive definite.
  if (alpha > 0.0) {
    detail::rank_one_inverse_update(state.V, fv, alpha);
    detail::rank_one_inverse_update(state.V, fu, -alpha);
  } else {
    detail::rank_one_inverse_update(state.V, fu, -alpha);
    detail::rank_one_inverse_update(state.V, fv, alpha);
  }
  state.M.noalias() += alpha * (fv * fv.transpose() - fu * fu.transpose());
  state.logdet += std::log(factor);
  design.transfer(u, v, alpha);
  ++state.exchanges_since_refresh;
  ++state.total_exchanges;
}

}  // namespace optdes

#endif  // OPTDES_STATE_HPP
