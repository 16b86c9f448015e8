// SPDX-License-Identifier: Apache-2.0
#include "tdmd/tucker.hpp"

#include "tdmd/error.hpp"
#include "tdmd/linalg.hpp"

#include <cmath>
#include <string>

namespace tdmd {

namespace {

constexpr double kOrthonormalityTol = 1e-10;

}  // namespace

TuckerModel::TuckerModel(std::array<ComplexMatrix, 3> factors) : factors_(std::move(factors)) {
    for (std::size_t n = 0; n < 3; ++n) {
        const ComplexMatrix& u = factors_[n];
        const std::string which = "mode-" + std::to_string(n + 1) + " factor";
        if (u.rows() < 1 || u.cols() < 1 || u.cols() > u.rows()) {
            throw DimensionError(which + " must satisfy 1 <= R <= N, got " + std::to_string(u.rows()) + "x" +
                                 std::to_string(u.cols()));
        }
        if (!u.allFinite()) throw NumericalError(which + " has non-finite entries");
        const double defect =
            (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
        if (defect > kOrthonormalityTol) {
            throw NumericalError(which + " columns are not orthonormal (max |U^H U - I| = " +
                                 std::to_string(defect) + ")");
        }
    }
}

const ComplexMatrix& TuckerModel::factor(int mode) const {
    if (mode < 1 || mode > 3) throw UsageError("invalid mode " + std::to_string(mode));
    return factors_[static_cast<std::size_t>(mode - 1)];
}

Shape3 TuckerModel::full_dims() const noexcept {
    return {static_cast<std::size_t>(factors_[0].rows()), static_cast<std::size_t>(factors_[1].rows()),
            static_cast<std::size_t>(factors_[2].rows())};
}

Shape3 TuckerModel::ranks() const noexcept {
    return {static_cast<std::size_t>(factors_[0].cols()), static_cast<std::size_t>(factors_[1].cols()),
            static_cast<std::size_t>(factors_[2].cols())};
}

ComplexMatrix TuckerModel::kronecker_basis() const {
    return kron(factors_[2], kron(factors_[1], factors_[0]));
}

HosvdResult hosvd(const ChannelTensor& t, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw UsageError("HOSVD threshold must lie in (0, 1), got " + std::to_string(threshold));
    }
    if (!t.all_finite()) throw NumericalError("HOSVD input has non-finite entries");
    if (frobenius_norm(t) == 0.0) throw NumericalError("HOSVD input tensor is identically zero");

    std::array<ComplexMatrix, 3> factors;
    std::array<Eigen::VectorXd, 3> sigmas;
    for (int mode = 1; mode <= 3; ++mode) {
        const auto n = static_cast<std::size_t>(mode - 1);
        ThinSvd svd = thin_svd(unfold(t, mode), PhaseAnchor::left);
        const auto rank = static_cast<Eigen::Index>(relative_rank(svd.sigma, threshold));
        factors[n] = svd.U.leftCols(rank);
        sigmas[n] = std::move(svd.sigma);
    }
    TuckerModel model(std::move(factors));
    CoreTensor core = project_core(t, model);
    return {std::move(model), std::move(core), std::move(sigmas)};
}

CoreTensor project_core(const ChannelTensor& t, const TuckerModel& model) {
    if (t.dims() != model.full_dims()) {
        throw DimensionError("tensor shape does not match the Tucker factors");
    }
    // Shrink the subcarrier mode first; it is by far the longest.
    CoreTensor g = mode_product(t, model.factor(3).adjoint(), 3);
    g = mode_product(g, model.factor(2).adjoint(), 2);
    return mode_product(g, model.factor(1).adjoint(), 1);
}

ChannelTensor reconstruct(const TuckerModel& model, const CoreTensor& core) {
    if (core.dims() != model.ranks()) {
        throw DimensionError("core shape does not match the Tucker ranks");
    }
    ChannelTensor h = mode_product(core, model.factor(1), 1);
    h = mode_product(h, model.factor(2), 2);
    return mode_product(h, model.factor(3), 3);
}

double compression_ratio(const Shape3& full_dims, const Shape3& ranks) {
    for (std::size_t n = 0; n < 3; ++n) {
        if (ranks[n] == 0 || ranks[n] > full_dims[n]) {
            throw UsageError("ranks must satisfy 1 <= R <= N in every mode");
        }
    }
    return static_cast<double>(volume(full_dims)) / static_cast<double>(volume(ranks));
}

}  // namespace tdmd
