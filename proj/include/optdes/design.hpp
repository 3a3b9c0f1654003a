#ifndef OPTDES_DESIGN_HPP
#define OPTDES_DESIGN_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "optdes/design_space.hpp"

namespace optdes {

// Approximate design: a probability vector over the design points together
// with its support. Support membership is exact: nullifying exchanges write
// exact zeros, so no epsilon is needed anywhere downstream.
class Design {
 public:
  static constexpr double kSumTol = 1e-12;

  // Weights are taken as given; support is derived as {x : w_x > 0}.
  explicit Design(Eigen::VectorXd weights) : weights_(std::move(weights)) {
    double sum = 0.0;
    for (Index x = 0; x < weights_.size(); ++x) {
      if (weights_(x) < 0.0) throw std::invalid_argument("negative design weight");
      if (weights_(x) > 0.0) support_.push_back(x);
      sum += weights_(x);
    }
    if (std::abs(sum - 1.0) > kSumTol) {
      throw std::invalid_argument("design weights must sum to 1");
    }
  }

  // Uniform weights 1/k on the given points.
  static Design uniform_on(Index n, const std::vector<Index>& points) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    const double p = 1.0 / static_cast<double>(points.size());
    for (Index x : points) w(x) = p;
    return Design(std::move(w));
  }

  static Design uniform(Index n) {
    return Design(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
  }

  // Vertex design e_x.
  static Design vertex(Index n, Index x) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    w(x) = 1.0;
    return Design(std::move(w));
  }

  Index n() const { return weights_.size(); }
  const Eigen::VectorXd& weights() const { return weights_; }
  double weight(Index x) const { return weights_(x); }
  const std::vector<Index>& support() const { return support_; }
  Index support_size() const { return static_cast<Index>(support_.size()); }

  // Moves mass alpha from u to v. `alpha` must already be snapped to the
  // exact boundary when nullifying; boundary steps write exact zeros.
  void transfer(Index u, Index v, double alpha) {
    const double wu = weights_(u);
    const double wv = weights_(v);
    if (alpha == wu) {
      set_weight(u, 0.0);
      set_weight(v, wv + alpha);
    } else if (alpha == -wv) {
      set_weight(v, 0.0);
      set_weight(u, wu - alpha);
    } else {
      set_weight(u, wu - alpha);
      set_weight(v, wv + alpha);
    }
  }

  void set_weight(Index x, double w) {
    const bool was = weights_(x) > 0.0;
    weights_(x) = w;
    const bool now = w > 0.0;
    if (was && !now) {
      support_.erase(std::lower_bound(support_.begin(), support_.end(), x));
    } else if (!was && now) {
      support_.insert(std::lower_bound(support_.begin(), support_.end(), x), x);
    }
  }

 private:
  Eigen::VectorXd weights_;
  std::vector<Index> support_;  // sorted
};

}  // namespace optdes

#endif  // OPTDES_DESIGN_HPP
