#pragma once

#include <filesystem>

#include <Eigen/Dense>

#include "presist/graph.hpp"

namespace presist {

enum class PinvMethod {
  /// Rank-one shift, falling back to the eigendecomposition when the
  /// shifted matrix is not numerically positive definite.
  Auto,
  Shift,
  Eigen,
};

/// Dense pseudoinverse of a graph Laplacian, tagged with its source graph.
class LaplacianPinv {
 public:
  LaplacianPinv(Eigen::MatrixXd matrix, GraphFingerprint fingerprint, bool used_eigen = false);

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  const GraphFingerprint& fingerprint() const noexcept { return fingerprint_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  bool used_eigen_fallback() const noexcept { return used_eigen_; }

  /// L+ e_i.
  auto column(Vertex i) const { return matrix_.col(static_cast<Eigen::Index>(i)); }

  /// Classic effective resistance L+_ii + L+_jj - 2 L+_ij.
  double resistance2(Vertex i, Vertex j) const;

  /// Binary layout, little-endian: u64 n, u64 m, u64 edge hash, then n*n
  /// row-major f64.
  void save(const std::filesystem::path& path) const;

  /// Throws Error{FingerprintMismatch} when the file was written for a
  /// different graph, Error{Io} on short or unreadable files.
  static LaplacianPinv load(const std::filesystem::path& path, const GraphFingerprint& expected);

 private:
  Eigen::MatrixXd matrix_;
  GraphFingerprint fingerprint_;
  bool used_eigen_ = false;
};

LaplacianPinv laplacian_pinv(const Graph& g, PinvMethod method = PinvMethod::Auto);

/// (L + J/n)^{-1} - J/n for the Laplacian of a connected graph.
/// Throws Error{SingularShift} when the Cholesky factorisation breaks down.
Eigen::MatrixXd pinv_by_shift(const Eigen::MatrixXd& laplacian);

/// Pseudoinverse from the symmetric eigendecomposition, discarding
/// eigenvalues below `rel_cutoff` times the largest.
Eigen::MatrixXd pinv_by_eigen(const Eigen::MatrixXd& laplacian, double rel_cutoff = 1e-12);

}  // namespace presist
