#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace presist {

struct FeatureDataset {
  /// n x d features.
  Eigen::MatrixXd x;
  /// Dense class ids 0..k-1 in first-appearance order.
  std::optional<std::vector<std::size_t>> labels;
  /// Original label text per class id.
  std::vector<std::string> class_names;
  std::string name;

  std::size_t size() const noexcept { return static_cast<std::size_t>(x.rows()); }
  std::size_t num_classes() const noexcept { return class_names.size(); }
};

enum class LabelColumn { First, Last };

struct LoadOptions {
  bool has_labels = true;
  LabelColumn label_column = LabelColumn::Last;
  /// Leading lines to ignore (e.g. a header).
  std::size_t skip_rows = 0;
  char delimiter = ',';
};

/// Reads a rectangular CSV of numeric features with an optional label
/// column. Blank lines are ignored. Throws ParseError with kinds
/// ParseError (empty input), RaggedRows or NonNumericFeature; row and
/// column are 1-based file positions.
FeatureDataset load_features(std::istream& in, const LoadOptions& options = {}, std::string name = {});
FeatureDataset load_features(const std::filesystem::path& path, const LoadOptions& options = {});

/// Centers each feature and scales it to unit variance; constant features
/// are only centered.
FeatureDataset standardize(FeatureDataset ds);

/// Keeps the given rows, relabelling classes densely again.
FeatureDataset restrict_rows(const FeatureDataset& ds, const std::vector<std::size_t>& rows);

}  // namespace presist
