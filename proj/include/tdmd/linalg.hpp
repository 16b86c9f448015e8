// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tdmd/tensor.hpp"

namespace tdmd {

/// Economy SVD a = U diag(sigma) V^H with sigma sorted descending.
struct ThinSvd {
    ComplexMatrix U;
    Eigen::VectorXd sigma;
    ComplexMatrix V;
};

/// Singular vector pairs are only defined up to a unit phase; pass the side
/// whose columns should carry the real-positive pivot.
enum class PhaseAnchor { left, right };

[[nodiscard]] ThinSvd thin_svd(const ComplexMatrix& a, PhaseAnchor anchor);

/// Rotates every column by a unit phase so that its pivot entry is real and
/// positive. The pivot is the first entry whose magnitude is at least half of
/// the column's largest magnitude, which keeps the choice stable under
/// rounding-level perturbations. Returns the applied phases.
ComplexVector normalize_column_phases(ComplexMatrix& m);

/// Number of leading singular values with sigma_i >= threshold * sigma_1,
/// never less than one.
[[nodiscard]] std::size_t relative_rank(const Eigen::VectorXd& sigma, double threshold);

/// Largest distance between paired entries of two equally sized multisets,
/// pairing greedily by smallest distance first.
[[nodiscard]] double matched_max_distance(const ComplexVector& a, const ComplexVector& b);

}  // namespace tdmd
