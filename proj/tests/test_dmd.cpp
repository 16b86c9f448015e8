// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "tdmd/dmd.hpp"
#include "tdmd/error.hpp"
#include "tdmd/linalg.hpp"
#include "test_util.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

using namespace tdmd;
using tdmd::testing::random_matrix;
using tdmd::testing::random_orthonormal;
using tdmd::testing::random_vector;
using tdmd::testing::rel_diff;

namespace {

std::vector<ComplexVector> trajectory(const ComplexMatrix& a, const ComplexVector& h0, std::size_t length) {
    std::vector<ComplexVector> out{h0};
    while (out.size() < length) out.push_back(a * out.back());
    return out;
}

// Oracle: least-squares operator via the pseudoinverse.
ComplexMatrix pinv_operator(const SnapshotPair& p) {
    return p.Y * Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>(p.X).pseudoInverse();
}

ComplexVector random_eigenvalues(Rng& rng, Eigen::Index r) {
    ComplexVector lambda(r);
    for (Eigen::Index i = 0; i < r; ++i) lambda[i] = std::polar(0.6 + 0.4 * rng.uniform(), rng.uniform(-3.1, 3.1));
    return lambda;
}

}  // namespace

TEST_SUITE("dmd") {

TEST_CASE("scalar geometric sequence") {
    const Complex lambda(0.9, 0.1);
    std::vector<ComplexVector> seq;
    Complex x(1.0, 0.0);
    for (int t = 0; t < 6; ++t, x *= lambda) seq.push_back(ComplexVector::Constant(1, x));
    const DmdModel m = fit(build_snapshots(seq));
    REQUIRE(m.rank() == 1);
    CHECK(std::abs(m.eigenvalues()[0] - lambda) < 1e-14);
    for (std::size_t t = 0; t < seq.size(); ++t) CHECK(std::abs(predict(m, t)[0] - seq[t][0]) < 1e-13);
    Complex expect(1.0, 0.0);
    for (int t = 0; t < 20; ++t) expect *= lambda;
    CHECK(std::abs(predict(m, 20)[0] - expect) < 1e-13);
}

TEST_CASE("constant sequence has eigenvalue one") {
    Rng rng(31);
    const ComplexVector h = random_vector(rng, 7);
    const std::vector<ComplexVector> seq(5, h);
    const DmdModel m = fit(build_snapshots(seq));
    REQUIRE(m.rank() == 1);
    CHECK(std::abs(m.eigenvalues()[0] - Complex(1.0)) < 1e-14);
    CHECK(rel_diff(ComplexMatrix(predict(m, 9)), ComplexMatrix(h)) < 1e-14);
}

TEST_CASE("full-rank linear system matches the pseudoinverse oracle") {
    Rng rng(32);
    const ComplexMatrix p = random_matrix(rng, 5, 5);
    const ComplexMatrix a = p * random_eigenvalues(rng, 5).asDiagonal() * p.inverse();
    const SnapshotPair pair = build_snapshots(trajectory(a, random_vector(rng, 5), 8));
    const DmdModel m = fit(pair);
    REQUIRE(m.rank() == 5);

    const ComplexMatrix oracle = pinv_operator(pair);
    CHECK(rel_diff(oracle, a) < 1e-9);
    const ComplexVector oracle_ev = Eigen::ComplexEigenSolver<ComplexMatrix>(oracle, false).eigenvalues();
    CHECK(matched_max_distance(m.eigenvalues(), oracle_ev) < 1e-9);

    // The reconstructed operator equals the oracle.
    const ComplexMatrix rebuilt = m.modes() * m.eigenvalues().asDiagonal() *
                                  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>(m.modes()).pseudoInverse();
    CHECK(rel_diff(rebuilt, oracle) < 1e-9);
    // Modes are eigenvectors of the oracle.
    for (Eigen::Index i = 0; i < 5; ++i) {
        const ComplexVector phi = m.modes().col(i);
        CHECK((oracle * phi - m.eigenvalues()[i] * phi).norm() < 1e-9 * phi.norm());
    }
}

TEST_CASE("low-rank operator in a large state space") {
    Rng rng(33);
    const ComplexMatrix p = random_matrix(rng, 64, 5);
    const ComplexVector lambda = random_eigenvalues(rng, 5);
    const ComplexMatrix a = p * lambda.asDiagonal() * Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>(p).pseudoInverse();
    const std::vector<ComplexVector> seq = trajectory(a, p * random_vector(rng, 5), 10);
    const SnapshotPair pair = build_snapshots(seq);
    const DmdModel m = fit(pair);
    REQUIRE(m.rank() == 5);
    CHECK(m.state_size() == 64);
    CHECK(matched_max_distance(m.eigenvalues(), lambda) < 1e-8);
    for (std::size_t t = 0; t < seq.size(); ++t) {
        CHECK(rel_diff(ComplexMatrix(predict(m, t)), ComplexMatrix(seq[t])) < 1e-6);
    }
    const ComplexVector oracle_ev = Eigen::ComplexEigenSolver<ComplexMatrix>(pinv_operator(pair), false).eigenvalues();
    // The oracle has 59 extra zero eigenvalues; the 5 largest must match.
    std::vector<Complex> sorted(oracle_ev.data(), oracle_ev.data() + oracle_ev.size());
    std::sort(sorted.begin(), sorted.end(), [](Complex x, Complex y) { return std::abs(x) > std::abs(y); });
    CHECK(matched_max_distance(m.eigenvalues(), Eigen::Map<ComplexVector>(sorted.data(), 5)) < 1e-8);
}

TEST_CASE("eigenvalues are sorted by magnitude") {
    Rng rng(34);
    const ComplexMatrix p = random_matrix(rng, 6, 6);
    const ComplexMatrix a = p * random_eigenvalues(rng, 6).asDiagonal() * p.inverse();
    const DmdModel m = fit(build_snapshots(trajectory(a, random_vector(rng, 6), 10)));
    for (Eigen::Index i = 1; i < m.eigenvalues().size(); ++i) {
        CHECK(std::abs(m.eigenvalues()[i - 1]) >= std::abs(m.eigenvalues()[i]));
    }
}

TEST_CASE("invariance under unitary transforms and scaling") {
    Rng rng(35);
    const ComplexMatrix p = random_matrix(rng, 12, 4);
    const ComplexMatrix a = p * random_eigenvalues(rng, 4).asDiagonal() * Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>(p).pseudoInverse();
    const std::vector<ComplexVector> seq = trajectory(a, p * random_vector(rng, 4), 9);
    const DmdModel base = fit(build_snapshots(seq));

    SUBCASE("isometry") {
        const ComplexMatrix q = random_orthonormal(rng, 20, 12);
        std::vector<ComplexVector> rotated;
        for (const auto& h : seq) rotated.push_back(q * h);
        const DmdModel m = fit(build_snapshots(rotated));
        REQUIRE(m.rank() == base.rank());
        CHECK(rel_diff(m.reduced_operator(), base.reduced_operator()) < 1e-10);
        CHECK(matched_max_distance(m.eigenvalues(), base.eigenvalues()) < 1e-10);
        CHECK(rel_diff(ComplexMatrix(predict(m, 12)), ComplexMatrix(q * predict(base, 12))) < 1e-9);
    }
    SUBCASE("scaling") {
        const Complex alpha(-2.5, 0.7);
        std::vector<ComplexVector> scaled;
        for (const auto& h : seq) scaled.push_back(alpha * h);
        const DmdModel m = fit(build_snapshots(scaled));
        CHECK(matched_max_distance(m.eigenvalues(), base.eigenvalues()) < 1e-10);
        CHECK(rel_diff(ComplexMatrix(predict(m, 11)), ComplexMatrix(alpha * predict(base, 11))) < 1e-9);
    }
}

TEST_CASE("amplitudes reproduce the first snapshot") {
    Rng rng(36);
    const ComplexMatrix p = random_matrix(rng, 9, 3);
    const ComplexMatrix a = p * random_eigenvalues(rng, 3).asDiagonal() * Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>(p).pseudoInverse();
    const std::vector<ComplexVector> seq = trajectory(a, p * random_vector(rng, 3), 6);
    const DmdModel m = fit(build_snapshots(seq));
    CHECK(rel_diff(ComplexMatrix(m.modes() * m.amplitudes()), ComplexMatrix(seq.front())) < 1e-11);
    CHECK(rel_diff(ComplexMatrix(predict(m, 0)), ComplexMatrix(seq.front())) < 1e-11);
}

TEST_CASE("rank selection") {
    Rng rng(37);
    const ComplexMatrix p = random_matrix(rng, 10, 3);
    const ComplexMatrix a = p * random_eigenvalues(rng, 3).asDiagonal() * Eigen::CompleteOrthogonalDecomposition<ComplexMatrix>(p).pseudoInverse();
    const SnapshotPair pair = build_snapshots(trajectory(a, p * random_vector(rng, 3), 8));
    CHECK(select_rank(pair, AutoRank{}) == 3);
    CHECK(select_rank(pair, std::size_t{2}) == 2);
    CHECK(fit(pair, std::size_t{2}).rank() == 2);
    CHECK(reduced_operator(pair, std::size_t{3}).rows() == 3);
    CHECK_THROWS_AS((void)fit(pair, std::size_t{5}), RankDeficientError);
    CHECK_THROWS_AS((void)fit(pair, std::size_t{0}), UsageError);
    CHECK_THROWS_AS((void)fit(pair, std::size_t{8}), UsageError);
    CHECK_THROWS_AS((void)fit(pair, AutoRank{0.0}), UsageError);
    CHECK_THROWS_AS((void)fit(pair, AutoRank{1.5}), UsageError);
    CHECK(select_rank(pair, AutoRank{0.999}) == 1);
}

TEST_CASE("error paths") {
    Rng rng(38);
    CHECK_THROWS_AS((void)build_snapshots({random_vector(rng, 3), random_vector(rng, 3)}), UsageError);
    CHECK_THROWS_AS((void)build_snapshots({random_vector(rng, 3), random_vector(rng, 4), random_vector(rng, 3)}),
                    DimensionError);
    const std::vector<ComplexVector> zeros(4, ComplexVector::Zero(3));
    CHECK_THROWS_AS((void)fit(build_snapshots(zeros)), NumericalError);
    std::vector<ComplexVector> bad(4, random_vector(rng, 3));
    bad[2][1] = Complex(std::numeric_limits<double>::infinity(), 0.0);
    CHECK_THROWS_AS((void)fit(build_snapshots(bad)), NumericalError);
    CHECK_THROWS_AS(DmdModel(ComplexMatrix::Zero(3, 2), ComplexVector::Zero(3), ComplexVector::Zero(2), ComplexMatrix::Zero(2, 2)),
                    DimensionError);
}

}
