#ifndef OPTDES_EXCHANGE_HPP
#define OPTDES_EXCHANGE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "optdes/criteria.hpp"
#include "optdes/design.hpp"
#include "optdes/errors.hpp"
#include "optdes/state.hpp"

namespace optdes {

enum class StepBranch {
  DIndependent,   // interior/clamped stationary point of the determinant factor
  DDependent,     // linearly dependent regressors, sign rule
  AStationaryG0,  // G = 0, B != 0, interior stationary point
  AStationary,    // G != 0, interior stationary point
  ABoundary,      // boundary by the sign of A
  Numeric,        // golden-section fallback
};

// Optimal two-point exchange step. A step is `nullifying` when it equals an
// endpoint of [-w_v, w_u], i.e. it empties one of the two weights.
struct StepResult {
  double alpha = 0.0;
  bool nullifying = false;
  StepBranch branch = StepBranch::DIndependent;
};

namespace detail {

// Linear dependence of f(u), f(v) is detected through the Cauchy-Schwarz
// equality condition d_u d_v = d_uv^2 rather than by inspecting regressors.
constexpr double kDependenceTol = 1e-12;
constexpr double kDiscriminantTol = 1e-9;
constexpr double kBoundarySnapTol = 1e-10;

inline StepResult finish(double alpha, double wu, double wv, StepBranch branch) {
  if (std::abs(alpha - wu) <= kStepRangeTol) alpha = wu;
  if (std::abs(alpha + wv) <= kStepRangeTol) alpha = -wv;
  return StepResult{alpha, alpha == wu || alpha == -wv, branch};
}

}  // namespace detail

// Closed-form D-optimal step for the exchange w + alpha (e_v - e_u),
// maximized over [-w_v, w_u].
inline StepResult d_step(const SolverState& state, const DesignSpace& space, const Design& design,
                         Index u, Index v) {
  const double wu = design.weight(u);
  const double wv = design.weight(v);
  if (wu == 0.0 && wv == 0.0) return StepResult{0.0, true, StepBranch::DDependent};

  const CrossTerms t = cross_terms(state, space, u, v);
  const double D_uv = t.d_u * t.d_v - t.d_uv * t.d_uv;
  if (D_uv <= detail::kDependenceTol * t.d_u * t.d_v) {
    double alpha = 0.0;
    if (t.d_u < t.d_v) alpha = wu;
    else if (t.d_u > t.d_v) alpha = -wv;
    return detail::finish(alpha, wu, wv, StepBranch::DDependent);
  }
  const double stationary = (t.d_v - t.d_u) / (2.0 * D_uv);
  const double alpha = std::min(wu, std::max(-wv, stationary));
  return detail::finish(alpha, wu, wv, StepBranch::DIndependent);
}

// Scalars of the A-optimal exchange objective
// h(alpha) = -tr(V) + (alpha A + alpha^2 B) / (1 + alpha C - alpha^2 D).
struct AStepConstants {
  double A, B, C, D, G;

  static AStepConstants from(const CrossTerms& t) {
    AStepConstants c;
    c.A = t.a_v - t.a_u;
    c.B = 2.0 * t.d_uv * t.a_uv - t.d_u * t.a_v - t.d_v * t.a_u;
    c.C = t.d_v - t.d_u;
    c.D = t.d_u * t.d_v - t.d_uv * t.d_uv;
    c.G = c.A * c.D + c.B * c.C;
    return c;
  }
};

// Closed-form A-optimal step: the four-branch maximizer of h on [-w_v, w_u].
// A stationary point landing exactly on a boundary is handled by the
// boundary branch, so boundary steps stay exactly nullifying.
inline StepResult a_step(const SolverState& state, const DesignSpace& space, const Design& design,
                         Index u, Index v) {
  const double wu = design.weight(u);
  const double wv = design.weight(v);
  if (wu == 0.0 && wv == 0.0) return StepResult{0.0, true, StepBranch::ABoundary};

  const AStepConstants c = AStepConstants::from(cross_terms(state, space, u, v));
  const double g_scale = std::abs(c.A * c.D) + std::abs(c.B * c.C);
  if (std::abs(c.G) <= detail::kDependenceTol * g_scale) {
    if (c.B != 0.0) {
      const double r = -c.A / (2.0 * c.B);
      if (-wv < r && r < wu) {
        return StepResult{r, false, StepBranch::AStationaryG0};
      }
    }
  } else {
    double disc = c.B * c.B - c.A * c.G;
    if (disc < 0.0) {
      const double scale = std::max(c.B * c.B, std::abs(c.A * c.G));
      if (-disc > detail::kDiscriminantTol * scale) {
        throw NumericalAnomaly("negative A-step discriminant " + std::to_string(disc) +
                               " at scale " + std::to_string(scale));
      }
      disc = 0.0;
    }
    // Two algebraically equal forms of the same root; each avoids the
    // catastrophic cancellation the other suffers for its sign of B.
    const double sqrt_disc = std::sqrt(disc);
    const double r = c.B <= 0.0 ? c.A / (sqrt_disc - c.B) : -(c.B + sqrt_disc) / c.G;
    if (-wv < r && r < wu) {
      return StepResult{r, false, StepBranch::AStationary};
    }
  }
  double alpha = 0.0;
  if (c.A > 0.0) alpha = wu;
  else if (c.A < 0.0) alpha = -wv;
  return detail::finish(alpha, wu, wv, StepBranch::ABoundary);
}

inline StepResult criterion_step(Criterion criterion, const SolverState& state,
                                 const DesignSpace& space, const Design& design, Index u,
                                 Index v) {
  return criterion == Criterion::D ? d_step(state, space, design, u, v)
                                   : a_step(state, space, design, u, v);
}

// Change of the exchange objective as a function of alpha, in closed form
// from the cached state. For D this is the log of the determinant factor;
// for A it is h(alpha) - h(0). Suitable as a numeric_step objective.
inline std::function<double(double)> exchange_objective(Criterion criterion,
                                                        const SolverState& state,
                                                        const DesignSpace& space, Index u,
                                                        Index v) {
  const CrossTerms t = cross_terms(state, space, u, v);
  if (criterion == Criterion::D) {
    return [t](double alpha) {
      const double factor =
          (1.0 + alpha * t.d_v) * (1.0 - alpha * t.d_u) + alpha * alpha * t.d_uv * t.d_uv;
      return factor > 0.0 ? std::log(factor) : -std::numeric_limits<double>::infinity();
    };
  }
  const AStepConstants c = AStepConstants::from(t);
  return [c](double alpha) {
    const double denom = 1.0 + alpha * c.C - alpha * alpha * c.D;
    if (denom <= 0.0) return -std::numeric_limits<double>::infinity();
    return (alpha * c.A + alpha * alpha * c.B) / denom;
  };
}

// Golden-section maximization of a concave objective over [-w_v, w_u].
// Resolves the interval to width 1e-12 (w_u + w_v), snaps to a boundary
// when within 1e-10 of it, and ties break to zero.
inline StepResult numeric_step(const Design& design, Index u, Index v,
                               const std::function<double(double)>& objective) {
  const double wu = design.weight(u);
  const double wv = design.weight(v);
  double lo = -wv, hi = wu;
  if (hi - lo <= 0.0) return StepResult{0.0, true, StepBranch::Numeric};

  constexpr double invphi = 0.6180339887498949;
  const double tol = 1e-12 * (wu + wv);
  double a = lo, b = hi;
  double c1 = b - invphi * (b - a);
  double c2 = a + invphi * (b - a);
  double f1 = objective(c1);
  double f2 = objective(c2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + invphi * (b - a);
      f2 = objective(c2);
    } else {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - invphi * (b - a);
      f1 = objective(c1);
    }
  }
  double alpha = 0.5 * (a + b);
  if (hi - alpha <= detail::kBoundarySnapTol) alpha = hi;
  else if (alpha - lo <= detail::kBoundarySnapTol) alpha = lo;
  if (lo <= 0.0 && 0.0 <= hi && objective(alpha) <= objective(0.0)) alpha = 0.0;
  return detail::finish(alpha, wu, wv, StepBranch::Numeric);
}

}  // namespace optdes

#endif  // OPTDES_EXCHANGE_HPP
