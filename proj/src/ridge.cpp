#include "ensbfc/ridge.hpp"

#include <stdexcept>

namespace ensbfc {

RidgeModel::RidgeModel(std::size_t dimension, double lambda)
    : a_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dimension),
                                   static_cast<Eigen::Index>(dimension)) * lambda),
      b_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension))),
      lambda_(lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("ridge penalty must be positive");
}

void RidgeModel::add(const Eigen::VectorXd& features, double response) {
  a_.selfadjointView<Eigen::Lower>().rankUpdate(features);
  a_.triangularView<Eigen::StrictlyUpper>() = a_.transpose();
  b_ += response * features;
  ++count_;
}

Eigen::LLT<Eigen::MatrixXd> RidgeModel::factor() const {
  Eigen::LLT<Eigen::MatrixXd> llt(a_);
  if (llt.info() != Eigen::Success) {
    throw std::logic_error("ridge design matrix is not positive definite");
  }
  return llt;
}

Eigen::VectorXd RidgeModel::coefficients() const { return factor().solve(b_); }

Eigen::MatrixXd RidgeModel::inverse_design() const {
  return factor().solve(Eigen::MatrixXd::Identity(a_.rows(), a_.cols()));
}

}  // namespace ensbfc
