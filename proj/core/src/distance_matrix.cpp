#include "presist/distance_matrix.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "detail.hpp"
#include "presist/approx.hpp"
#include "presist/error.hpp"
#include "presist/norms.hpp"
#include "presist/parallel.hpp"

namespace presist {

namespace {

constexpr char kMagic[4] = {'P', 'R', 'D', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct PairSlot {
  double value = 0.0;
  std::string warning;
};

void validate_values(const Eigen::MatrixXd& v) {
  if (v.rows() != v.cols()) throw Error(ErrorKind::InvalidParams, "distance matrix must be square");
  if (!v.allFinite()) throw Error(ErrorKind::InvalidParams, "distance matrix has non-finite entries");
  for (Eigen::Index a = 0; a < v.rows(); ++a) {
    if (v(a, a) != 0.0) throw Error(ErrorKind::InvalidParams, "distance matrix diagonal must be zero");
    for (Eigen::Index b = 0; b < a; ++b) {
      if (v(a, b) < 0.0 || v(b, a) < 0.0) throw Error(ErrorKind::InvalidParams, "negative distance");
      const double scale = std::max({1.0, std::abs(v(a, b)), std::abs(v(b, a))});
      if (std::abs(v(a, b) - v(b, a)) > 1e-10 * scale) {
        std::ostringstream msg;
        msg << "distance matrix not symmetric at (" << a << ", " << b << ")";
        throw Error(ErrorKind::InvalidParams, msg.str());
      }
    }
  }
}

}  // namespace

std::string_view to_string(DistanceMode mode) noexcept { return mode == DistanceMode::Approx ? "approx" : "exact"; }

std::string_view to_string(DistanceForm form) noexcept {
  return form == DistanceForm::Resistance ? "resistance" : "metric";
}

std::optional<DistanceMode> parse_distance_mode(std::string_view name) noexcept {
  if (name == "approx") return DistanceMode::Approx;
  if (name == "exact") return DistanceMode::Exact;
  return std::nullopt;
}

std::optional<DistanceForm> parse_distance_form(std::string_view name) noexcept {
  if (name == "resistance") return DistanceForm::Resistance;
  if (name == "metric") return DistanceForm::Metric;
  return std::nullopt;
}

std::uint64_t solver_config_hash(const SolverConfig& cfg) {
  detail::Fnv1a h;
  h.mix(cfg.grad_tol);
  h.mix(cfg.rel_energy_tol);
  h.mix(static_cast<std::uint64_t>(cfg.max_iter));
  h.mix(cfg.smoothing_eps);
  h.mix(static_cast<std::uint64_t>(cfg.init));
  h.mix(static_cast<std::uint64_t>(cfg.method));
  return h.value();
}

DistanceMatrix distance_matrix(const Graph& g, double p, DistanceMode mode, DistanceForm form,
                               const DistanceOptions& options, DistanceTiming* timing) {
  require_p_above_one(p);
  options.solver.validate();
  const std::size_t n = g.num_vertices();

  DistanceMatrix out;
  out.p = p;
  out.mode = mode;
  out.form = form;
  out.graph = g.fingerprint();
  out.config_hash = mode == DistanceMode::Exact ? solver_config_hash(options.solver) : 0;
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  std::vector<std::pair<Vertex, Vertex>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
  std::vector<PairSlot> slots(pairs.size());
  DistanceTiming local;
  local.pairs = pairs.size();

  if (mode == DistanceMode::Approx) {
    auto start = Clock::now();
    std::optional<LaplacianPinv> owned;
    const LaplacianPinv* pinv = options.pinv;
    if (pinv == nullptr) {
      owned.emplace(laplacian_pinv(g));
      pinv = &*owned;
    }
    local.pinv_seconds = seconds_since(start);
    start = Clock::now();
    parallel_for(pairs.size(), options.workers, [&](std::size_t k) {
      const PairQuery q{pairs[k].first, pairs[k].second, p};
      slots[k].value = form == DistanceForm::Metric ? approx_metric(*pinv, g, q) : approx_presistance(*pinv, g, q);
    });
    local.pair_seconds = seconds_since(start);
  } else {
    const auto start = Clock::now();
    parallel_for(pairs.size(), options.workers, [&](std::size_t k) {
      const PairQuery q{pairs[k].first, pairs[k].second, p};
      const auto r = exact_presistance(g, q, options.solver);
      slots[k].value = form == DistanceForm::Metric ? r.metric : r.resistance;
      if (!r.report.converged) {
        std::ostringstream msg;
        msg << "not converged (" << r.report.stop_reason << ", relative gradient " << r.report.final_grad_norm
            << " after " << r.report.iterations << " iterations)";
        slots[k].warning = msg.str();
      }
    });
    local.pair_seconds = seconds_since(start);
  }

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [a, b] = pairs[k];
    if (!std::isfinite(slots[k].value)) {
      std::ostringstream msg;
      msg << "pair (" << a << ", " << b << ") is not representable at p = " << p
          << "; use the metric form for large p";
      throw Error(ErrorKind::NonFinite, msg.str());
    }
    out.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = slots[k].value;
    out.values(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = slots[k].value;
    if (!slots[k].warning.empty()) out.warnings.push_back({a, b, std::move(slots[k].warning)});
  }
  if (timing != nullptr) *timing = local;
  return out;
}

DistanceMatrix make_distance_matrix(Eigen::MatrixXd values) {
  validate_values(values);
  DistanceMatrix out;
  out.values = std::move(values);
  out.p = 0.0;
  return out;
}

void save_distance_matrix(const std::filesystem::path& path, const DistanceMatrix& dm) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out.write(kMagic, sizeof kMagic);
  detail::write_pod(out, kFormatVersion);
  detail::write_pod<std::uint64_t>(out, dm.size());
  detail::write_pod(out, dm.p);
  detail::write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(dm.mode));
  detail::write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(dm.form));
  detail::write_pod(out, dm.graph.n);
  detail::write_pod(out, dm.graph.m);
  detail::write_pod(out, dm.graph.hash);
  detail::write_pod(out, dm.config_hash);
  detail::write_string(out, dm.metadata);
  detail::write_pod<std::uint64_t>(out, dm.warnings.size());
  for (const auto& w : dm.warnings) {
    detail::write_pod<std::uint64_t>(out, w.i);
    detail::write_pod<std::uint64_t>(out, w.j);
    detail::write_string(out, w.message);
  }
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = dm.values;
  out.write(reinterpret_cast<const char*>(rows.data()), static_cast<std::streamsize>(rows.size() * sizeof(double)));
  if (!out) throw Error(ErrorKind::Io, "short write to '" + path.string() + "'");
}

DistanceMatrix load_distance_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  char magic[4] = {};
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorKind::Io, "'" + path.string() + "' is not a distance matrix file");
  }
  if (detail::read_pod<std::uint32_t>(in) != kFormatVersion) {
    throw Error(ErrorKind::Io, "unsupported distance matrix format version in '" + path.string() + "'");
  }
  DistanceMatrix dm;
  const auto n = detail::read_pod<std::uint64_t>(in);
  dm.p = detail::read_pod<double>(in);
  const auto mode = detail::read_pod<std::uint8_t>(in);
  const auto form = detail::read_pod<std::uint8_t>(in);
  if (mode > 1 || form > 1) throw Error(ErrorKind::Io, "corrupt mode/form in '" + path.string() + "'");
  dm.mode = static_cast<DistanceMode>(mode);
  dm.form = static_cast<DistanceForm>(form);
  dm.graph.n = detail::read_pod<std::uint64_t>(in);
  dm.graph.m = detail::read_pod<std::uint64_t>(in);
  dm.graph.hash = detail::read_pod<std::uint64_t>(in);
  dm.config_hash = detail::read_pod<std::uint64_t>(in);
  dm.metadata = detail::read_string(in);
  const auto warnings = detail::read_pod<std::uint64_t>(in);
  if (!in || warnings > n * n) throw Error(ErrorKind::Io, "truncated header in '" + path.string() + "'");
  for (std::uint64_t k = 0; k < warnings; ++k) {
    PairWarning w;
    w.i = detail::read_pod<std::uint64_t>(in);
    w.j = detail::read_pod<std::uint64_t>(in);
    w.message = detail::read_string(in);
    dm.warnings.push_back(std::move(w));
  }
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(size, size);
  in.read(reinterpret_cast<char*>(rows.data()), static_cast<std::streamsize>(rows.size() * sizeof(double)));
  if (!in) throw Error(ErrorKind::Io, "truncated matrix in '" + path.string() + "'");
  dm.values = rows;
  return dm;
}

void write_distance_csv(std::ostream& out, const DistanceMatrix& dm) {
  if (!dm.metadata.empty()) {
    std::istringstream lines(dm.metadata);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index a = 0; a < dm.values.rows(); ++a) {
    for (Eigen::Index b = 0; b < dm.values.cols(); ++b) {
      if (b > 0) out << ',';
      out << dm.values(a, b);
    }
    out << '\n';
  }
}

void write_distance_csv(const std::filesystem::path& path, const DistanceMatrix& dm) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  write_distance_csv(out, dm);
}

DistanceMatrix read_distance_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string metadata;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.front() == '#') {
      metadata += line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      metadata += '\n';
      continue;
    }
    std::vector<double> values;
    std::istringstream cells(line);
    std::string cell;
    std::size_t column = 0;
    while (std::getline(cells, cell, ',')) {
      ++column;
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ParseError(ErrorKind::ParseError, row, column, "not a number: '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
        throw ParseError(ErrorKind::ParseError, row, column, "not a number: '" + cell + "'");
      }
      values.push_back(v);
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw ParseError(ErrorKind::RaggedRows, row, 0, "row length differs from the first row");
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError(ErrorKind::ParseError, 0, 0, "empty distance matrix file");
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < rows[a].size(); ++b) {
      values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = rows[a][b];
    }
  }
  auto dm = make_distance_matrix(std::move(values));
  if (!metadata.empty()) metadata.pop_back();
  dm.metadata = std::move(metadata);
  return dm;
}

DistanceMatrix load_distance_any(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  char magic[4] = {};
  in.read(magic, sizeof magic);
  if (in && std::memcmp(magic, kMagic, sizeof kMagic) == 0) return load_distance_matrix(path);
  return read_distance_csv(path);
}

}  // namespace presist
