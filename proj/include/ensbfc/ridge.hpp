#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace ensbfc {

// Regularized least squares kept as sufficient statistics:
//   A = lambda * I + sum phi phi^T,  b = sum y phi,  theta = A^{-1} b.
class RidgeModel {
 public:
  RidgeModel(std::size_t dimension, double lambda);

  void add(const Eigen::VectorXd& features, double response);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(b_.size()); }
  std::size_t count() const noexcept { return count_; }
  double lambda() const noexcept { return lambda_; }
  const Eigen::MatrixXd& design() const noexcept { return a_; }
  const Eigen::VectorXd& response() const noexcept { return b_; }

  // Throws std::logic_error if A is not numerically positive definite.
  Eigen::VectorXd coefficients() const;
  Eigen::MatrixXd inverse_design() const;

 private:
  Eigen::LLT<Eigen::MatrixXd> factor() const;

  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  double lambda_;
  std::size_t count_ = 0;
};

}  // namespace ensbfc
