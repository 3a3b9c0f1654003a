#ifndef OPTDES_DESIGN_SPACE_HPP
#define OPTDES_DESIGN_SPACE_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "optdes/errors.hpp"

namespace optdes {

using Index = Eigen::Index;

// Finite design space: n candidate points with m-dimensional regressors,
// one regressor per row. Immutable after construction and safe to share
// across threads.
class DesignSpace {
 public:
  static constexpr double kRankTol = 1e-10;

  explicit DesignSpace(Eigen::MatrixXd regressors, std::vector<std::string> labels = {})
      : regressors_(std::move(regressors)), labels_(std::move(labels)) {
    const Index n = regressors_.rows();
    const Index m = regressors_.cols();
    if (m < 1 || n < m) {
      throw RankDeficient("design space needs n >= m >= 1, got n=" + std::to_string(n) +
                          ", m=" + std::to_string(m));
    }
    for (Index x = 0; x < n; ++x) {
      if (regressors_.row(x).isZero(0.0)) {
        throw RankDeficient("regressor " + std::to_string(x) + " is the zero vector");
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(regressors_);
    const auto& sv = svd.singularValues();
    if (sv(m - 1) <= kRankTol * sv(0)) {
      throw RankDeficient("regressors do not span the model space (singular value ratio " +
                          std::to_string(sv(m - 1) / sv(0)) + ")");
    }
    if (!labels_.empty() && static_cast<Index>(labels_.size()) != n) {
      throw RankDeficient("label count does not match point count");
    }
  }

  Index n() const { return regressors_.rows(); }
  Index m() const { return regressors_.cols(); }
  const Eigen::MatrixXd& regressors() const { return regressors_; }
  Eigen::MatrixXd::ConstRowXpr regressor(Index x) const { return regressors_.row(x); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  Eigen::MatrixXd regressors_;
  std::vector<std::string> labels_;
};

}  // namespace optdes

#endif  // OPTDES_DESIGN_SPACE_HPP
