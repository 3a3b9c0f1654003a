#ifndef OPTDES_MVEE_HPP
#define OPTDES_MVEE_HPP

#include <Eigen/Dense>
#include <utility>

#include "optdes/criteria.hpp"
#include "optdes/errors.hpp"
#include "optdes/solvers.hpp"

namespace optdes {

// Origin-centered ellipsoid {f : f' H f <= 1}.
struct Ellipsoid {
  Eigen::MatrixXd H;
};

inline bool contains(const Ellipsoid& ellipsoid, const Eigen::VectorXd& point, double tol) {
  return point.dot(ellipsoid.H * point) <= 1.0 + tol;
}

struct MveeCertificate {
  double max_d;      // max_x d_x(w) at termination
  double eff_bound;  // certified D-efficiency lower bound
};

struct MveeResult {
  Ellipsoid ellipsoid;
  Design design;
  MveeCertificate certificate;
  TerminationReason reason;
};

// Minimum-volume enclosing ellipsoid via the D-optimal design dual. The
// shape matrix is M(w)^{-1} scaled by the realized max_x d_x, so every input
// point is contained for any approximate solution; at the exact optimum this
// is the textbook M^{-1}/m. eps maps to the stopping rule through
// eff_target = 1/(1+eps), i.e. max_x d_x <= m (1+eps) at EffReached.
inline MveeResult mvee_solve(const Eigen::MatrixXd& points, double eps, SolverConfig config) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  config.criterion = Criterion::D;
  config.eff_target = 1.0 / (1.0 + eps);

  DesignSpace space = [&] {
    try {
      return DesignSpace(points);
    } catch (const RankDeficient& e) {
      throw SpanFailure(e.what());
    }
  }();

  SolveResult res = solve(space, config);
  SolverState state = build_state(space, res.design);
  const Eigen::VectorXd d = g_vector(state, space, Criterion::D);
  const double max_d = d.maxCoeff();

  MveeResult out{Ellipsoid{state.V / max_d},
                 std::move(res.design),
                 MveeCertificate{max_d, res.final_eff_bound},
                 res.reason};
  return out;
}

}  // namespace optdes

#endif  // OPTDES_MVEE_HPP
