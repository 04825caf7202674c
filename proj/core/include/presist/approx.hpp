#pragma once

#include "presist/graph.hpp"
#include "presist/laplacian_pinv.hpp"
#include "presist/solver.hpp"

namespace presist {

/// ||L+ e_i - L+ e_j||_{G,q} with q = p/(p-1), in O(m).
///
/// Throws Error{FingerprintMismatch} when `pinv` was built from another
/// graph, Error{InvalidP} for p <= 1.
double approx_seminorm(const LaplacianPinv& pinv, const Graph& g, const PairQuery& q);

/// Approximate p-resistance ||L+ e_i - L+ e_j||_{G,q}^p. Exact on trees and
/// at p = 2; an upper bound otherwise. Overflows to infinity for large p
/// on far-apart pairs; use approx_metric there.
double approx_presistance(const LaplacianPinv& pinv, const Graph& g, const PairQuery& q);

/// Approximate p-resistance metric ||L+ e_i - L+ e_j||_{G,q}^q, the
/// counterpart of r^{1/(p-1)}. Zero when i == j.
double approx_metric(const LaplacianPinv& pinv, const Graph& g, const PairQuery& q);

}  // namespace presist
