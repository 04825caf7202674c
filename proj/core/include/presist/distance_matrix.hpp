#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "presist/graph.hpp"
#include "presist/laplacian_pinv.hpp"
#include "presist/solver.hpp"

namespace presist {

enum class DistanceMode { Approx, Exact };
/// Resistance stores r; Metric stores r^{1/(p-1)} (or its approximation).
enum class DistanceForm { Resistance, Metric };

std::string_view to_string(DistanceMode mode) noexcept;
std::string_view to_string(DistanceForm form) noexcept;
std::optional<DistanceMode> parse_distance_mode(std::string_view name) noexcept;
std::optional<DistanceForm> parse_distance_form(std::string_view name) noexcept;

struct PairWarning {
  Vertex i = 0;
  Vertex j = 0;
  std::string message;

  friend bool operator==(const PairWarning&, const PairWarning&) = default;
};

struct DistanceMatrix {
  Eigen::MatrixXd values;
  double p = 2.0;
  DistanceMode mode = DistanceMode::Approx;
  DistanceForm form = DistanceForm::Metric;
  GraphFingerprint graph;
  /// Hash of the solver settings (exact mode), 0 in approx mode.
  std::uint64_t config_hash = 0;
  /// Free-form provenance document (JSON text) carried through save/load.
  std::string metadata;
  /// Pairs whose exact solve did not converge.
  std::vector<PairWarning> warnings;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
  double operator()(Vertex i, Vertex j) const {
    return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

struct DistanceOptions {
  SolverConfig solver;
  std::size_t workers = 1;
  /// Reused when given; must match the graph.
  const LaplacianPinv* pinv = nullptr;
};

struct DistanceTiming {
  double pinv_seconds = 0.0;
  double pair_seconds = 0.0;
  std::size_t pairs = 0;
};

/// All n(n-1)/2 pair values. Approx mode shares one L+ across workers;
/// exact mode runs one solve per pair and records unconverged pairs in
/// `warnings`. Output does not depend on the worker count.
/// Throws Error{NonFinite} when resistance form overflows (large p).
DistanceMatrix distance_matrix(const Graph& g, double p, DistanceMode mode, DistanceForm form,
                               const DistanceOptions& options = {}, DistanceTiming* timing = nullptr);

/// Wraps user-supplied values; throws Error{InvalidParams} unless square,
/// finite, non-negative, symmetric within 1e-10 and zero on the diagonal.
DistanceMatrix make_distance_matrix(Eigen::MatrixXd values);

std::uint64_t solver_config_hash(const SolverConfig& cfg);

/// Binary layout, little-endian: "PRDM", u32 version, u64 n, f64 p,
/// u8 mode, u8 form, u64 fingerprint n/m/hash, u64 config hash,
/// u64 length + metadata bytes, u64 warning count + (u64 i, u64 j,
/// u64 length, bytes) each, then n*n row-major f64.
void save_distance_matrix(const std::filesystem::path& path, const DistanceMatrix& dm);
DistanceMatrix load_distance_matrix(const std::filesystem::path& path);

/// Comma-separated rows at round-trip precision, preceded by the metadata
/// as '#' comment lines.
void write_distance_csv(std::ostream& out, const DistanceMatrix& dm);
void write_distance_csv(const std::filesystem::path& path, const DistanceMatrix& dm);
/// Reads a CSV written by write_distance_csv (or by hand) and validates it;
/// comment lines become the metadata.
DistanceMatrix read_distance_csv(const std::filesystem::path& path);

/// Loads either format, chosen by the magic bytes.
DistanceMatrix load_distance_any(const std::filesystem::path& path);

}  // namespace presist
