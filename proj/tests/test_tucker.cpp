// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "tdmd/error.hpp"
#include "tdmd/tucker.hpp"
#include "test_util.hpp"

#include <Eigen/Eigenvalues>

using namespace tdmd;
using tdmd::testing::random_matrix;
using tdmd::testing::random_orthonormal;
using tdmd::testing::random_tensor;
using tdmd::testing::random_vector;
using tdmd::testing::rank_one;
using tdmd::testing::rel_diff;

namespace {

// Oracle: leading eigenvectors of the Gram matrix of an unfolding.
ComplexMatrix gram_subspace(const Tensor3& t, int mode, Eigen::Index r) {
    const ComplexMatrix m = unfold(t, mode);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m * m.adjoint());
    return eig.eigenvectors().rightCols(r);  // ascending order
}

ComplexMatrix projector(const ComplexMatrix& u) { return u * u.adjoint(); }

double orthonormality_defect(const ComplexMatrix& u) {
    return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("tucker") {

TEST_CASE("rank-one tensor has ranks (1,1,1) and is reconstructed exactly") {
    Rng rng(21);
    const ComplexVector a = random_vector(rng, 3), b = random_vector(rng, 4), c = random_vector(rng, 6);
    const Tensor3 t = rank_one(a, b, c);
    const HosvdResult h = hosvd(t, 1e-3);
    CHECK(h.model.ranks() == Shape3{1, 1, 1});
    CHECK(rel_diff(reconstruct(h.model, h.core), t) < 1e-13);
    // Factor spans the generating vector.
    CHECK(rel_diff(projector(h.model.factor(1)), projector(a.normalized())) < 1e-13);
    CHECK(rel_diff(projector(h.model.factor(3)), projector(c.normalized())) < 1e-13);
    // Pivot entry of each column is real-positive.
    for (int mode = 1; mode <= 3; ++mode) {
        const ComplexVector u = h.model.factor(mode).col(0);
        const double big = u.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            if (std::abs(u[i]) >= 0.5 * big) {
                CHECK(std::abs(u[i].imag()) < 1e-14);
                CHECK(u[i].real() > 0.0);
                break;
            }
        }
    }
}

TEST_CASE("tiny threshold keeps full rank and reconstructs a random tensor") {
    Rng rng(22);
    const Tensor3 t = random_tensor(rng, {3, 4, 5});
    const HosvdResult h = hosvd(t, 1e-16);
    CHECK(h.model.ranks() == Shape3{3, 4, 5});
    CHECK(rel_diff(reconstruct(h.model, h.core), t) < 1e-13);
    for (int mode = 1; mode <= 3; ++mode) {
        CHECK(orthonormality_defect(h.model.factor(mode)) < 1e-12);
        CHECK(static_cast<std::size_t>(h.singular_values[static_cast<std::size_t>(mode - 1)].size()) ==
              t.dim(mode));
    }
}

TEST_CASE("two-term tensor with a small perturbation matches the Gram oracle") {
    Rng rng(23);
    const Tensor3 clean = rank_one(random_vector(rng, 4), random_vector(rng, 5), random_vector(rng, 6)) +
                          rank_one(random_vector(rng, 4), random_vector(rng, 5), random_vector(rng, 6));
    const Tensor3 noise = random_tensor(rng, clean.dims());
    const Tensor3 noisy = clean + Complex(1e-6 * frobenius_norm(clean) / frobenius_norm(noise)) * noise;
    const HosvdResult h = hosvd(noisy, 1e-3);
    REQUIRE(h.model.ranks() == Shape3{2, 2, 2});
    for (int mode = 1; mode <= 3; ++mode) {
        const ComplexMatrix oracle = gram_subspace(noisy, mode, 2);
        CHECK(rel_diff(projector(h.model.factor(mode)), projector(oracle)) < 1e-8);
    }
    CHECK(rel_diff(reconstruct(h.model, h.core), clean) < 1e-5);
}

TEST_CASE("truncation error is bounded by the discarded singular values") {
    Rng rng(24);
    for (double thr : {0.1, 0.3, 0.6}) {
        const Tensor3 t = random_tensor(rng, {4, 5, 6});
        const HosvdResult h = hosvd(t, thr);
        double discarded = 0.0;
        for (std::size_t n = 0; n < 3; ++n) {
            const Eigen::VectorXd& s = h.singular_values[n];
            for (Eigen::Index i = static_cast<Eigen::Index>(h.model.ranks()[n]); i < s.size(); ++i) discarded += s[i] * s[i];
        }
        const double err = frobenius_norm(t - reconstruct(h.model, h.core));
        CHECK(err * err <= discarded * (1.0 + 1e-12) + 1e-24);
    }
}

TEST_CASE("projection onto the subspace is idempotent and isometric on the span") {
    Rng rng(25);
    const TuckerModel model({random_orthonormal(rng, 4, 2), random_orthonormal(rng, 5, 3), random_orthonormal(rng, 7, 2)});
    const Tensor3 t = random_tensor(rng, {4, 5, 7});
    const Tensor3 once = reconstruct(model, project_core(t, model));
    const Tensor3 twice = reconstruct(model, project_core(once, model));
    CHECK(rel_diff(once, twice) < 1e-13);

    const Tensor3 core = random_tensor(rng, {2, 3, 2});
    const Tensor3 full = reconstruct(model, core);
    CHECK(frobenius_norm(full) == doctest::Approx(frobenius_norm(core)).epsilon(1e-13));
    CHECK(rel_diff(project_core(full, model), core) < 1e-13);

    const ComplexMatrix basis = model.kronecker_basis();
    CHECK(basis.rows() == 4 * 5 * 7);
    CHECK(basis.cols() == 2 * 3 * 2);
    CHECK(orthonormality_defect(basis) < 1e-12);
    CHECK(rel_diff(ComplexMatrix(basis * vec(core)), ComplexMatrix(vec(full))) < 1e-13);
}

TEST_CASE("ranks do not increase as the threshold grows") {
    Rng rng(26);
    const Tensor3 t = random_tensor(rng, {4, 6, 8});
    Shape3 prev{4, 6, 8};
    for (double thr : {1e-12, 1e-3, 0.2, 0.4, 0.6, 0.8, 0.99}) {
        const Shape3 r = hosvd(t, thr).model.ranks();
        for (std::size_t n = 0; n < 3; ++n) {
            CHECK(r[n] <= prev[n]);
            CHECK(r[n] >= 1);
        }
        prev = r;
    }
}

TEST_CASE("compression ratio") {
    CHECK(compression_ratio({4, 64, 1632}, {4, 64, 256}) == doctest::Approx(6.375).epsilon(1e-15));
    const double c = compression_ratio({4, 64, 1632}, {4, 37, 25});
    CHECK(c >= 112.8);
    CHECK(c <= 113.0);
    CHECK(compression_ratio({2, 8, 64}, {2, 8, 64}) == 1.0);
    CHECK(compression_ratio({2, 8, 64}, {1, 1, 1}) == 1024.0);
    CHECK_THROWS_AS((void)compression_ratio({2, 8, 64}, {3, 1, 1}), UsageError);
    CHECK_THROWS_AS((void)compression_ratio({2, 8, 64}, {0, 1, 1}), UsageError);
}

TEST_CASE("error paths") {
    Rng rng(27);
    const Tensor3 t = random_tensor(rng, {2, 3, 4});
    CHECK_THROWS_AS((void)hosvd(t, 0.0), UsageError);
    CHECK_THROWS_AS((void)hosvd(t, 1.0), UsageError);
    CHECK_THROWS_AS((void)hosvd(Tensor3({2, 3, 4}), 1e-3), NumericalError);
    Tensor3 bad = t;
    bad(0, 0, 0) = Complex(std::nan(""), 0.0);
    CHECK_THROWS_AS((void)hosvd(bad, 1e-3), NumericalError);

    CHECK_THROWS_AS(TuckerModel({random_matrix(rng, 2, 2), random_orthonormal(rng, 3, 1), random_orthonormal(rng, 4, 1)}),
                    NumericalError);
    CHECK_THROWS_AS(TuckerModel({random_orthonormal(rng, 2, 1), ComplexMatrix::Identity(3, 4), random_orthonormal(rng, 4, 1)}),
                    DimensionError);
    const TuckerModel model({random_orthonormal(rng, 2, 1), random_orthonormal(rng, 3, 2), random_orthonormal(rng, 4, 2)});
    CHECK_THROWS_AS((void)project_core(random_tensor(rng, {2, 3, 5}), model), DimensionError);
    CHECK_THROWS_AS((void)reconstruct(model, random_tensor(rng, {1, 2, 3})), DimensionError);
    CHECK_THROWS_AS((void)model.factor(0), UsageError);
}

TEST_CASE("property: random Tucker models have orthonormal factors") {
    Rng rng(28);
    for (int trial = 0; trial < 50; ++trial) {
        const Tensor3 t = random_tensor(rng, {2 + static_cast<std::size_t>(rng.uniform() * 3), 3 + static_cast<std::size_t>(rng.uniform() * 6),
                                              4 + static_cast<std::size_t>(rng.uniform() * 20)});
        const HosvdResult h = hosvd(t, 0.05 + 0.5 * rng.uniform());
        for (int mode = 1; mode <= 3; ++mode) CHECK(orthonormality_defect(h.model.factor(mode)) <= 1e-10);
        // The core is the projection of t.
        CHECK(rel_diff(h.core, project_core(t, h.model)) < 1e-14);
    }
}

}
