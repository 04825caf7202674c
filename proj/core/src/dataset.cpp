#include "presist/dataset.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "presist/error.hpp"

namespace presist {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, delimiter)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == delimiter) out.emplace_back();
  return out;
}

}  // namespace

FeatureDataset load_features(std::istream& in, const LoadOptions& options, std::string name) {
  FeatureDataset ds;
  ds.name = std::move(name);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::size_t expected = 0;
  std::size_t row = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    if (row <= options.skip_rows) continue;
    if (trim(line).empty()) continue;
    auto cells = split(line, options.delimiter);
    if (expected == 0) {
      expected = cells.size();
      if (expected < (options.has_labels ? 2u : 1u)) {
        throw ParseError(ErrorKind::ParseError, row, 0, "row has no feature columns");
      }
    } else if (cells.size() != expected) {
      std::ostringstream msg;
      msg << "expected " << expected << " columns, found " << cells.size();
      throw ParseError(ErrorKind::RaggedRows, row, 0, msg.str());
    }
    std::size_t first_feature = 0;
    std::size_t end_feature = cells.size();
    if (options.has_labels) {
      if (options.label_column == LabelColumn::First) {
        raw_labels.push_back(cells.front());
        first_feature = 1;
      } else {
        raw_labels.push_back(cells.back());
        end_feature = cells.size() - 1;
      }
    }
    std::vector<double> values;
    for (std::size_t c = first_feature; c < end_feature; ++c) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cells[c], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cells[c].size() || !std::isfinite(v)) {
        throw ParseError(ErrorKind::NonNumericFeature, row, c + 1, "not a finite number: '" + cells[c] + "'");
      }
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(ErrorKind::ParseError, row, 0, "no data rows");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(rows.front().size());
  ds.x.resize(n, d);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) ds.x(a, b) = rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  if (options.has_labels) {
    std::map<std::string, std::size_t> ids;
    std::vector<std::size_t> labels;
    for (const auto& l : raw_labels) {
      auto [it, inserted] = ids.try_emplace(l, ds.class_names.size());
      if (inserted) ds.class_names.push_back(l);
      labels.push_back(it->second);
    }
    ds.labels = std::move(labels);
  }
  return ds;
}

FeatureDataset load_features(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open feature file '" + path.string() + "'");
  return load_features(in, options, path.stem().string());
}

FeatureDataset standardize(FeatureDataset ds) {
  const auto n = static_cast<double>(ds.x.rows());
  if (ds.x.rows() == 0) return ds;
  for (Eigen::Index c = 0; c < ds.x.cols(); ++c) {
    auto col = ds.x.col(c);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / n);
    if (sd > 0.0) col /= sd;
  }
  return ds;
}

FeatureDataset restrict_rows(const FeatureDataset& ds, const std::vector<std::size_t>& rows) {
  FeatureDataset out;
  out.name = ds.name;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), ds.x.cols());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    out.x.row(static_cast<Eigen::Index>(a)) = ds.x.row(static_cast<Eigen::Index>(rows[a]));
  }
  if (ds.labels) {
    std::map<std::size_t, std::size_t> ids;
    std::vector<std::size_t> labels;
    for (auto r : rows) {
      const auto old = (*ds.labels)[r];
      auto [it, inserted] = ids.try_emplace(old, out.class_names.size());
      if (inserted) out.class_names.push_back(ds.class_names[old]);
      labels.push_back(it->second);
    }
    out.labels = std::move(labels);
  }
  return out;
}

}  // namespace presist
