// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tdmd/tensor.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace tdmd {

/// One-step shifted snapshot matrices: column j of Y follows column j of X.
struct SnapshotPair {
    ComplexMatrix X;
    ComplexMatrix Y;
};

/// Keep singular values with sigma_i >= threshold * sigma_1.
struct AutoRank {
    double threshold = 1e-10;
};

/// Either a fixed truncation rank or a relative-threshold rule.
using RankRule = std::variant<std::size_t, AutoRank>;

/// Singular values below this fraction of sigma_1 are treated as zero.
inline constexpr double kNumericalRankTol = 1e-13;

/// Exact DMD model. Eigenvalues are sorted by descending magnitude, then by
/// descending real part; Phi and b follow the same order.
class DmdModel {
public:
    DmdModel(ComplexMatrix phi, ComplexVector lambda, ComplexVector amplitudes, ComplexMatrix a_tilde);

    [[nodiscard]] const ComplexMatrix& modes() const noexcept { return phi_; }
    [[nodiscard]] const ComplexVector& eigenvalues() const noexcept { return lambda_; }
    [[nodiscard]] const ComplexVector& amplitudes() const noexcept { return b_; }
    [[nodiscard]] const ComplexMatrix& reduced_operator() const noexcept { return a_tilde_; }
    [[nodiscard]] std::size_t rank() const noexcept { return static_cast<std::size_t>(lambda_.size()); }
    [[nodiscard]] std::size_t state_size() const noexcept { return static_cast<std::size_t>(phi_.rows()); }

private:
    ComplexMatrix phi_;
    ComplexVector lambda_;
    ComplexVector b_;
    ComplexMatrix a_tilde_;
};

/// X = [h_1 .. h_{T-1}], Y = [h_2 .. h_T]. Needs T >= 3 equally long vectors.
[[nodiscard]] SnapshotPair build_snapshots(const std::vector<ComplexVector>& sequence);

/// Rank actually used for `pair` under `rule` (validates the rule as fit() does).
[[nodiscard]] std::size_t select_rank(const SnapshotPair& pair, const RankRule& rule);

/// Reduced operator U_r^H Y V_r Sigma_r^-1 from the truncated SVD of X.
[[nodiscard]] ComplexMatrix reduced_operator(const SnapshotPair& pair, const RankRule& rule);

/// Full exact-DMD fit. Amplitudes are anchored at the first column of X, so
/// exponent t-1 reproduces snapshot t.
[[nodiscard]] DmdModel fit(const SnapshotPair& pair, const RankRule& rule = AutoRank{});

/// Phi * diag(Lambda)^exponent * b.
[[nodiscard]] ComplexVector predict(const DmdModel& model, std::size_t exponent);

}  // namespace tdmd
