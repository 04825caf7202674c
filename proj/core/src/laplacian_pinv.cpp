#include "presist/laplacian_pinv.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "detail.hpp"
#include "presist/error.hpp"

namespace presist {

namespace {

void write_u64(std::ostream& out, std::uint64_t v) { detail::write_pod(out, v); }
std::uint64_t read_u64(std::istream& in) { return detail::read_pod<std::uint64_t>(in); }

}  // namespace

LaplacianPinv::LaplacianPinv(Eigen::MatrixXd matrix, GraphFingerprint fingerprint, bool used_eigen)
    : matrix_(std::move(matrix)), fingerprint_(fingerprint), used_eigen_(used_eigen) {
  if (matrix_.rows() != matrix_.cols()) throw Error(ErrorKind::DimensionMismatch, "pseudoinverse must be square");
}

double LaplacianPinv::resistance2(Vertex i, Vertex j) const {
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  return matrix_(a, a) + matrix_(b, b) - 2.0 * matrix_(a, b);
}

void LaplacianPinv::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  write_u64(out, fingerprint_.n);
  write_u64(out, fingerprint_.m);
  write_u64(out, fingerprint_.hash);
  // Eigen is column-major; the matrix is symmetric but write rows explicitly.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = matrix_;
  out.write(reinterpret_cast<const char*>(rows.data()), static_cast<std::streamsize>(rows.size() * sizeof(double)));
  if (!out) throw Error(ErrorKind::Io, "short write to '" + path.string() + "'");
}

LaplacianPinv LaplacianPinv::load(const std::filesystem::path& path, const GraphFingerprint& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  GraphFingerprint fp;
  fp.n = read_u64(in);
  fp.m = read_u64(in);
  fp.hash = read_u64(in);
  if (!in) throw Error(ErrorKind::Io, "truncated header in '" + path.string() + "'");
  if (!(fp == expected)) {
    std::ostringstream msg;
    msg << "file was written for graph (n=" << fp.n << ", m=" << fp.m << ", hash=" << fp.hash
        << "), expected (n=" << expected.n << ", m=" << expected.m << ", hash=" << expected.hash << ")";
    throw Error(ErrorKind::FingerprintMismatch, msg.str());
  }
  const auto n = static_cast<Eigen::Index>(fp.n);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(n, n);
  in.read(reinterpret_cast<char*>(rows.data()), static_cast<std::streamsize>(rows.size() * sizeof(double)));
  if (!in) throw Error(ErrorKind::Io, "truncated matrix in '" + path.string() + "'");
  return LaplacianPinv(rows, fp);
}

Eigen::MatrixXd pinv_by_shift(const Eigen::MatrixXd& laplacian) {
  const auto n = laplacian.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::MatrixXd shifted = laplacian.array() + inv_n;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::SingularShift, "L + J/n is not positive definite");
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  if (!inv.allFinite()) throw Error(ErrorKind::SingularShift, "non-finite entries in (L + J/n)^{-1}");
  inv.array() -= inv_n;
  return 0.5 * (inv + inv.transpose());
}

Eigen::MatrixXd pinv_by_eigen(const Eigen::MatrixXd& laplacian, double rel_cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::EigenFailure, "Laplacian eigendecomposition failed");
  const auto& vals = eig.eigenvalues();
  const double cutoff = rel_cutoff * vals.cwiseAbs().maxCoeff();
  Eigen::VectorXd inv_vals = Eigen::VectorXd::Zero(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) {
    if (vals[k] > cutoff) inv_vals[k] = 1.0 / vals[k];
  }
  const auto& vecs = eig.eigenvectors();
  Eigen::MatrixXd out = vecs * inv_vals.asDiagonal() * vecs.transpose();
  return 0.5 * (out + out.transpose());
}

LaplacianPinv laplacian_pinv(const Graph& g, PinvMethod method) {
  const auto lap = laplacian(g);
  switch (method) {
    case PinvMethod::Shift:
      return LaplacianPinv(pinv_by_shift(lap), g.fingerprint());
    case PinvMethod::Eigen:
      return LaplacianPinv(pinv_by_eigen(lap), g.fingerprint(), true);
    case PinvMethod::Auto:
      break;
  }
  try {
    return LaplacianPinv(pinv_by_shift(lap), g.fingerprint());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularShift) throw;
    return LaplacianPinv(pinv_by_eigen(lap), g.fingerprint(), true);
  }
}

}  // namespace presist
