// SPDX-License-Identifier: Apache-2.0
#include "tdmd/linalg.hpp"

#include "tdmd/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

namespace tdmd {

ThinSvd thin_svd(const ComplexMatrix& a, PhaseAnchor anchor) {
    Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    ThinSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};

    ComplexMatrix& pivot_side = anchor == PhaseAnchor::left ? out.U : out.V;
    ComplexMatrix& other_side = anchor == PhaseAnchor::left ? out.V : out.U;
    const ComplexVector phases = normalize_column_phases(pivot_side);
    for (Eigen::Index j = 0; j < other_side.cols(); ++j) other_side.col(j) *= phases[j];
    return out;
}

ComplexVector normalize_column_phases(ComplexMatrix& m) {
    ComplexVector phases = ComplexVector::Ones(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double peak = m.col(j).cwiseAbs().maxCoeff();
        if (peak == 0.0) continue;
        Eigen::Index pivot = 0;
        while (std::abs(m(pivot, j)) < 0.5 * peak) ++pivot;
        const Complex phase = std::conj(m(pivot, j)) / std::abs(m(pivot, j));
        m.col(j) *= phase;
        m(pivot, j) = Complex(m(pivot, j).real(), 0.0);
        phases[j] = phase;
    }
    return phases;
}

std::size_t relative_rank(const Eigen::VectorXd& sigma, double threshold) {
    if (sigma.size() == 0 || !(sigma[0] > 0.0)) return 1;
    std::size_t rank = 1;
    for (Eigen::Index i = 1; i < sigma.size(); ++i) {
        if (sigma[i] / sigma[0] >= threshold) ++rank;
        else break;
    }
    return rank;
}

double matched_max_distance(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size()) {
        throw DimensionError("cannot match multisets of sizes " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()));
    }
    std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> pairs;
    pairs.reserve(static_cast<std::size_t>(a.size() * b.size()));
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j) pairs.emplace_back(std::abs(a[i] - b[j]), i, j);
    std::sort(pairs.begin(), pairs.end());

    std::vector<bool> used_a(static_cast<std::size_t>(a.size())), used_b(static_cast<std::size_t>(b.size()));
    double worst = 0.0;
    for (const auto& [d, i, j] : pairs) {
        if (used_a[static_cast<std::size_t>(i)] || used_b[static_cast<std::size_t>(j)]) continue;
        used_a[static_cast<std::size_t>(i)] = used_b[static_cast<std::size_t>(j)] = true;
        worst = std::max(worst, d);
    }
    return worst;
}

}  // namespace tdmd
