#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace smrom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Compressed sparse row storage; every assembled operator uses this type.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

enum class ErrorCode {
  invalid_argument,
  picard_divergence,
  singular_system,
  empty_snapshot_set,
  non_spd_weight,
  all_zero_spectrum,
  dimension_mismatch,
  time_grid_mismatch,
  hypothesis_violated,
  degenerate_fit,
  unknown_tag,
  non_convergence,
  mesh_generation,
  io,
  config,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace smrom
