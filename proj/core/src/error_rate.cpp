#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "presist/clustering.hpp"
#include "presist/error.hpp"

namespace presist {

namespace {

std::vector<std::size_t> densify(const std::vector<std::size_t>& labels, std::size_t& count) {
  std::map<std::size_t, std::size_t> ids;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (auto l : labels) {
    auto [it, inserted] = ids.try_emplace(l, ids.size());
    out.push_back(it->second);
  }
  count = ids.size();
  return out;
}

// Maximum-weight perfect matching on a square matrix (Hungarian method,
// minimising the negated weights). Returns row -> column.
std::vector<std::size_t> hungarian_max(const std::vector<std::vector<long>>& weight) {
  const std::size_t n = weight.size();
  constexpr long kBig = std::numeric_limits<long>::max() / 4;
  std::vector<long> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<long> minv(n + 1, kBig);
    std::vector<bool> used(n + 1, false);
    do {
      used[col0] = true;
      const std::size_t r = match[col0];
      long delta = kBig;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const long cur = -weight[r - 1][c - 1] - u[r] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<std::size_t> out(n, 0);
  for (std::size_t c = 1; c <= n; ++c) out[match[c] - 1] = c - 1;
  return out;
}

}  // namespace

Evaluation error_rate(const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& truth) {
  if (predicted.size() != truth.size()) {
    std::ostringstream msg;
    msg << predicted.size() << " predicted labels but " << truth.size() << " true labels";
    throw Error(ErrorKind::LengthMismatch, msg.str());
  }
  Evaluation out;
  if (predicted.empty()) return out;

  std::size_t np = 0;
  std::size_t nt = 0;
  const auto pred = densify(predicted, np);
  const auto tru = densify(truth, nt);
  const std::size_t size = std::max(np, nt);
  std::vector<std::vector<long>> confusion(size, std::vector<long>(size, 0));
  for (std::size_t a = 0; a < pred.size(); ++a) ++confusion[pred[a]][tru[a]];

  std::vector<std::size_t> best(size);
  if (size <= 6) {
    std::vector<std::size_t> perm(size);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    long best_hits = -1;
    do {
      long hits = 0;
      for (std::size_t c = 0; c < size; ++c) hits += confusion[c][perm[c]];
      if (hits > best_hits) {
        best_hits = hits;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    best = hungarian_max(confusion);
  }

  long hits = 0;
  out.matching.assign(np, -1);
  for (std::size_t c = 0; c < size; ++c) {
    hits += confusion[c][best[c]];
    if (c < np && best[c] < nt) out.matching[c] = static_cast<long>(best[c]);
  }
  out.error_rate = 1.0 - static_cast<double>(hits) / static_cast<double>(pred.size());
  return out;
}

}  // namespace presist
