// SPDX-License-Identifier: Apache-2.0
#include "tdmd/dmd.hpp"

#include "tdmd/error.hpp"
#include "tdmd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tdmd {

namespace {

void check_pair(const SnapshotPair& pair) {
    if (pair.X.rows() != pair.Y.rows() || pair.X.cols() != pair.Y.cols()) {
        throw DimensionError("snapshot matrices X and Y differ in shape");
    }
    if (pair.X.cols() < 2) {
        throw UsageError("DMD needs at least two snapshot pairs (three snapshots)");
    }
    if (pair.X.rows() < 1) throw DimensionError("snapshots have zero length");
    if (!pair.X.allFinite() || !pair.Y.allFinite()) {
        throw NumericalError("snapshot matrices contain non-finite entries");
    }
}

std::size_t rank_from_svd(const Eigen::VectorXd& sigma, const RankRule& rule) {
    const double s1 = sigma.size() > 0 ? sigma[0] : 0.0;
    if (!(s1 > 0.0)) throw NumericalError("snapshot matrix X is identically zero");
    const auto max_rank = static_cast<std::size_t>(sigma.size());

    if (const auto* fixed = std::get_if<std::size_t>(&rule)) {
        if (*fixed < 1 || *fixed > max_rank) {
            throw UsageError("DMD rank must lie in [1, " + std::to_string(max_rank) + "], got " +
                             std::to_string(*fixed));
        }
        if (sigma[static_cast<Eigen::Index>(*fixed - 1)] < kNumericalRankTol * s1) {
            throw RankDeficientError("requested DMD rank " + std::to_string(*fixed) +
                                     " exceeds the numerical rank of X");
        }
        return *fixed;
    }
    const double threshold = std::get<AutoRank>(rule).threshold;
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw UsageError("DMD rank threshold must lie in (0, 1), got " + std::to_string(threshold));
    }
    return relative_rank(sigma, std::max(threshold, kNumericalRankTol));
}

/// Truncated SVD pieces shared by reduced_operator() and fit().
struct Projection {
    ComplexMatrix U;      // N x r
    ComplexMatrix B;      // Y V_r Sigma_r^-1, N x r
    ComplexMatrix A;      // U^H B, r x r
};

Projection project(const SnapshotPair& pair, const RankRule& rule) {
    check_pair(pair);
    // V carries the phase convention: it is shared by any pair of data sets
    // related through an isometry, so the reduced operators agree entrywise.
    const ThinSvd svd = thin_svd(pair.X, PhaseAnchor::right);
    const auto r = static_cast<Eigen::Index>(rank_from_svd(svd.sigma, rule));

    Projection p;
    p.U = svd.U.leftCols(r);
    const Eigen::VectorXd inv_sigma = svd.sigma.head(r).cwiseInverse();
    p.B = pair.Y * (svd.V.leftCols(r) * inv_sigma.asDiagonal());
    p.A = p.U.adjoint() * p.B;
    return p;
}

Complex int_pow(Complex base, std::size_t exponent) noexcept {
    Complex result(1.0, 0.0);
    while (exponent > 0) {
        if (exponent & 1U) result *= base;
        base *= base;
        exponent >>= 1U;
    }
    return result;
}

}  // namespace

DmdModel::DmdModel(ComplexMatrix phi, ComplexVector lambda, ComplexVector amplitudes, ComplexMatrix a_tilde)
    : phi_(std::move(phi)), lambda_(std::move(lambda)), b_(std::move(amplitudes)), a_tilde_(std::move(a_tilde)) {
    const Eigen::Index r = lambda_.size();
    if (r < 1) throw DimensionError("DMD model needs rank >= 1");
    if (phi_.cols() != r || b_.size() != r || a_tilde_.rows() != r || a_tilde_.cols() != r) {
        throw DimensionError("DMD model components have inconsistent sizes");
    }
}

SnapshotPair build_snapshots(const std::vector<ComplexVector>& sequence) {
    if (sequence.size() < 3) {
        throw UsageError("DMD needs at least 3 snapshots, got " + std::to_string(sequence.size()));
    }
    const Eigen::Index n = sequence.front().size();
    const auto cols = static_cast<Eigen::Index>(sequence.size() - 1);
    SnapshotPair pair{ComplexMatrix(n, cols), ComplexMatrix(n, cols)};
    for (std::size_t t = 0; t < sequence.size(); ++t) {
        if (sequence[t].size() != n) {
            throw DimensionError("snapshot " + std::to_string(t) + " has length " +
                                 std::to_string(sequence[t].size()) + ", expected " + std::to_string(n));
        }
        const auto col = static_cast<Eigen::Index>(t);
        if (col < cols) pair.X.col(col) = sequence[t];
        if (col > 0) pair.Y.col(col - 1) = sequence[t];
    }
    return pair;
}

std::size_t select_rank(const SnapshotPair& pair, const RankRule& rule) {
    check_pair(pair);
    Eigen::BDCSVD<ComplexMatrix> svd(pair.X);
    return rank_from_svd(svd.singularValues(), rule);
}

ComplexMatrix reduced_operator(const SnapshotPair& pair, const RankRule& rule) {
    return project(pair, rule).A;
}

DmdModel fit(const SnapshotPair& pair, const RankRule& rule) {
    Projection p = project(pair, rule);
    const Eigen::Index r = p.A.rows();

    Eigen::ComplexEigenSolver<ComplexMatrix> eig(p.A, true);
    if (eig.info() != Eigen::Success) throw NumericalError("eigen-decomposition of the reduced operator failed");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(r));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const ComplexVector& ev = eig.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double ma = std::abs(ev[a]), mb = std::abs(ev[b]);
        if (ma != mb) return ma > mb;
        return ev[a].real() > ev[b].real();
    });

    ComplexVector lambda(r);
    ComplexMatrix w(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
        lambda[i] = ev[order[static_cast<std::size_t>(i)]];
        w.col(i) = eig.eigenvectors().col(order[static_cast<std::size_t>(i)]);
    }

    ComplexMatrix phi = p.B * w;
    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(phi);
    if (qr.rank() < r) throw NumericalError("DMD modes are linearly dependent; amplitudes are undefined");
    ComplexVector b = qr.solve(ComplexVector(pair.X.col(0)));
    if (!phi.allFinite() || !b.allFinite()) throw NumericalError("DMD fit produced non-finite values");

    return DmdModel(std::move(phi), std::move(lambda), std::move(b), std::move(p.A));
}

ComplexVector predict(const DmdModel& model, std::size_t exponent) {
    ComplexVector weights(model.eigenvalues().size());
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        weights[i] = int_pow(model.eigenvalues()[i], exponent) * model.amplitudes()[i];
    }
    return model.modes() * weights;
}

}  // namespace tdmd
