// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tdmd/tensor.hpp"

#include <array>

namespace tdmd {

/// Fixed Tucker projection subspace: one factor with orthonormal columns
/// per mode. The factors for (rx, tx, sc) are stored in mode order.
class TuckerModel {
public:
    /// Validates 1 <= R <= N for each factor and column orthonormality to 1e-10.
    explicit TuckerModel(std::array<ComplexMatrix, 3> factors);

    [[nodiscard]] const ComplexMatrix& factor(int mode) const;
    [[nodiscard]] const std::array<ComplexMatrix, 3>& factors() const noexcept { return factors_; }
    [[nodiscard]] Shape3 full_dims() const noexcept;
    [[nodiscard]] Shape3 ranks() const noexcept;

    /// kron(U_sc, kron(U_tx, U_rx)): maps vec(core) to vec(full tensor).
    /// Size grows with the product of all extents; intended for tests and diagnostics.
    [[nodiscard]] ComplexMatrix kronecker_basis() const;

private:
    std::array<ComplexMatrix, 3> factors_;
};

struct HosvdResult {
    TuckerModel model;
    CoreTensor core;
    /// Mode-wise singular values of the unfoldings (all of them, untruncated).
    std::array<Eigen::VectorXd, 3> singular_values;
};

/// Truncated HOSVD. Mode n keeps the singular vectors whose singular value
/// satisfies sigma_i / sigma_1 >= threshold (at least one), with the first
/// significant entry of each factor column made real-positive.
[[nodiscard]] HosvdResult hosvd(const ChannelTensor& t, double threshold);

/// t x1 U_rx^H x2 U_tx^H x3 U_sc^H.
[[nodiscard]] CoreTensor project_core(const ChannelTensor& t, const TuckerModel& model);

/// core x1 U_rx x2 U_tx x3 U_sc.
[[nodiscard]] ChannelTensor reconstruct(const TuckerModel& model, const CoreTensor& core);

[[nodiscard]] double compression_ratio(const Shape3& full_dims, const Shape3& ranks);

}  // namespace tdmd
