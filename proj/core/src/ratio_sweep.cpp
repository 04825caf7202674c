#include "presist/ratio_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "presist/alpha.hpp"
#include "presist/approx.hpp"
#include "presist/laplacian_pinv.hpp"
#include "presist/norms.hpp"
#include "presist/parallel.hpp"

namespace presist {

std::vector<RatioRow> ratio_sweep(const Graph& g, const std::vector<double>& p_grid,
                                  const RatioSweepOptions& options) {
  for (double p : p_grid) require_p_above_one(p);
  const auto n = g.num_vertices();

  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
  if (options.sample_pairs < pairs.size()) {
    std::mt19937_64 rng(options.seed);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(options.sample_pairs);
    std::sort(pairs.begin(), pairs.end());
  }

  const auto pinv = laplacian_pinv(g);
  std::vector<RatioRow> rows;
  for (double p : p_grid) {
    const auto alpha = alpha_gp(g, p, options.estimator);
    const double q = conjugate_exponent(p);
    std::vector<RatioRow> block(pairs.size());
    parallel_for(pairs.size(), options.workers, [&](std::size_t k) {
      auto& row = block[k];
      row.p = p;
      row.i = pairs[k].first;
      row.j = pairs[k].second;
      row.alpha = alpha.alpha_estimate;
      row.alpha_q = std::pow(alpha.alpha_estimate, q);
      row.ceiling_q = std::pow(alpha.ceiling, q);
      row.approx_metric = approx_metric(pinv, g, {row.i, row.j, p});
      try {
        const auto exact = exact_presistance(g, {row.i, row.j, p}, options.solver);
        row.exact_metric = exact.metric;
        row.converged = exact.report.converged;
        if (!row.converged) row.note = "not converged (" + exact.report.stop_reason + ")";
        row.ratio = row.approx_metric / row.exact_metric;
      } catch (const std::exception& e) {
        row.converged = false;
        row.note = e.what();
        row.ratio = std::numeric_limits<double>::quiet_NaN();
      }
    });
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

void write_ratio_csv(std::ostream& out, const std::vector<RatioRow>& rows) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "p,i,j,approx_metric,exact_metric,ratio,alpha,alpha_q,ceiling_q,converged,note\n";
  for (const auto& r : rows) {
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    out << r.p << ',' << r.i << ',' << r.j << ',' << r.approx_metric << ',' << r.exact_metric << ',' << r.ratio << ','
        << r.alpha << ',' << r.alpha_q << ',' << r.ceiling_q << ',' << (r.converged ? 1 : 0) << ',' << note << '\n';
  }
  out.precision(old);
}

}  // namespace presist
