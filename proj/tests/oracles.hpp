// Test-only oracles: dense from-scratch linear algebra, a 1-D golden-section
// maximizer and simplex grid enumeration. Everything here is independent of
// the cached-state update paths it is used to check.
#ifndef OPTDES_TESTS_ORACLES_HPP
#define OPTDES_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "optdes/design.hpp"
#include "optdes/design_space.hpp"

namespace oracles {

using optdes::Index;

inline Eigen::MatrixXd info_matrix(const optdes::DesignSpace& space, const Eigen::VectorXd& w) {
  const Index m = space.m();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
  for (Index x = 0; x < space.n(); ++x) {
    const auto f = space.regressor(x);
    M.noalias() += w(x) * f.transpose() * f;
  }
  return M;
}

inline double logdet(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  return es.eigenvalues().array().log().sum();
}

inline Eigen::MatrixXd inverse(const Eigen::MatrixXd& M) {
  return M.fullPivLu().inverse();
}

// det^{1/m} and (tr M^{-1})^{-1} from dense factorizations; 0 when singular.
inline double phi_d(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.eigenvalues()(0) <= 0.0) return 0.0;
  return std::exp(es.eigenvalues().array().log().sum() / static_cast<double>(M.rows()));
}

inline double phi_a(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.eigenvalues()(0) <= 0.0) return 0.0;
  return 1.0 / es.eigenvalues().cwiseInverse().sum();
}

// Golden-section maximizer to absolute interval width `tol`.
inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         double tol) {
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double c1 = b - invphi * (b - a);
  double c2 = a + invphi * (b - a);
  double f1 = f(c1), f2 = f(c2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + invphi * (b - a);
      f2 = f(c2);
    } else {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - invphi * (b - a);
      f1 = f(c1);
    }
  }
  return 0.5 * (a + b);
}

// Calls fn for every weight vector on the n-simplex whose entries are
// multiples of 1/steps.
inline void enumerate_simplex(Index n, int steps,
                              const std::function<void(const Eigen::VectorXd&)>& fn) {
  Eigen::VectorXd w(n);
  std::function<void(Index, int)> rec = [&](Index coord, int left) {
    if (coord == n - 1) {
      w(coord) = static_cast<double>(left) / steps;
      fn(w);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      w(coord) = static_cast<double>(k) / steps;
      rec(coord + 1, left - k);
    }
  };
  rec(0, steps);
}

inline optdes::DesignSpace random_design_space(std::mt19937& gen, Index n, Index m) {
  std::normal_distribution<double> normal;
  for (;;) {
    Eigen::MatrixXd F(n, m);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < m; ++j) F(i, j) = normal(gen);
    }
    try {
      return optdes::DesignSpace(F);
    } catch (const optdes::RankDeficient&) {
    }
  }
}

// Random regular design supported on `support_size` points (positive weights
// from a Dirichlet-like draw).
inline optdes::Design random_regular_design(std::mt19937& gen, const optdes::DesignSpace& space,
                                            Index support_size) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  const Index n = space.n();
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::shuffle(idx.begin(), idx.end(), gen);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  double sum = 0.0;
  for (Index i = 0; i < support_size; ++i) {
    const double u = unif(gen);
    w(idx[static_cast<std::size_t>(i)]) = u;
    sum += u;
  }
  w /= sum;
  return optdes::Design(w);
}

inline Eigen::MatrixXd random_spd(std::mt19937& gen, Index m) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd A(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) A(i, j) = normal(gen);
  }
  return A * A.transpose() + 0.1 * Eigen::MatrixXd::Identity(m, m);
}

// The three-point quadratic model (1, t, t^2) on t in {-1, 0, 1}.
inline optdes::DesignSpace quadratic_three_point() {
  Eigen::MatrixXd F(3, 3);
  F << 1, -1, 1, 1, 0, 0, 1, 1, 1;
  return optdes::DesignSpace(F);
}

inline optdes::DesignSpace orthonormal_pair() {
  return optdes::DesignSpace(Eigen::MatrixXd::Identity(2, 2));
}

}  // namespace oracles

#endif  // OPTDES_TESTS_ORACLES_HPP
