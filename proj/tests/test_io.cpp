// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "tdmd/error.hpp"
#include "tdmd/io.hpp"
#include "test_util.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tdmd;
using tdmd::testing::random_orthonormal;
using tdmd::testing::random_tensor;
using tdmd::testing::random_vector;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "tdmd_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

double le_double(const std::string& bytes, std::size_t offset) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | static_cast<unsigned char>(bytes[offset + static_cast<std::size_t>(i)]);
    double v = 0.0;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("CT1 layout and round trip") {
    Tensor3 t({1, 2, 1});
    t(0, 0, 0) = Complex(1.5, -2.0);
    t(0, 1, 0) = Complex(0.25, 8.0);
    std::stringstream ss;
    write_tensor(ss, t);
    const std::string bytes = ss.str();
    const std::string header = "CT1 1 2 1\n";
    REQUIRE(bytes.size() == header.size() + 2 * 16);
    CHECK(bytes.substr(0, header.size()) == header);
    CHECK(le_double(bytes, header.size()) == 1.5);
    CHECK(le_double(bytes, header.size() + 8) == -2.0);
    CHECK(le_double(bytes, header.size() + 16) == 0.25);
    CHECK(le_double(bytes, header.size() + 24) == 8.0);
    CHECK(read_tensor(ss) == t);
}

TEST_CASE("CTS1 round trip") {
    Rng rng(51);
    ChannelSequence seq;
    seq.period_ms = 2.5;
    for (int i = 0; i < 3; ++i) seq.snapshots.push_back(random_tensor(rng, {2, 3, 4}));
    std::stringstream ss;
    write_sequence(ss, seq);
    CHECK(ss.str().rfind("CTS1 3 2 3 4 2.5\n", 0) == 0);
    const ChannelSequence back = read_sequence(ss);
    CHECK(back.period_ms == 2.5);
    CHECK(back.snapshots == seq.snapshots);
}

TEST_CASE("TKM1 round trip") {
    Rng rng(52);
    const TuckerModel model({random_orthonormal(rng, 3, 2), random_orthonormal(rng, 4, 1), random_orthonormal(rng, 6, 3)});
    std::stringstream ss;
    write_tucker(ss, model);
    CHECK(ss.str().rfind("TKM1 3 2 4 1 6 3\n", 0) == 0);
    const TuckerModel back = read_tucker(ss);
    for (int mode = 1; mode <= 3; ++mode) CHECK(back.factor(mode) == model.factor(mode));
}

TEST_CASE("DMD1 round trip") {
    Rng rng(53);
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 1) = 1.0;
    const DmdModel model(tdmd::testing::random_matrix(rng, 5, 2), random_vector(rng, 2), random_vector(rng, 2), a);
    std::stringstream ss;
    write_dmd(ss, model);
    CHECK(ss.str().rfind("DMD1 5 2\n", 0) == 0);
    const DmdModel back = read_dmd(ss);
    CHECK(back.modes() == model.modes());
    CHECK(back.eigenvalues() == model.eigenvalues());
    CHECK(back.amplitudes() == model.amplitudes());
    CHECK(back.reduced_operator() == ComplexMatrix(model.eigenvalues().asDiagonal()));
    for (std::size_t k : {0U, 3U}) CHECK(predict(back, k) == predict(model, k));
}

TEST_CASE("malformed input is rejected") {
    auto reject_tensor = [](const std::string& text) {
        std::stringstream ss(text);
        CHECK_THROWS_AS((void)read_tensor(ss), FormatError);
    };
    reject_tensor("");
    reject_tensor("CT2 1 1 1\n");
    reject_tensor("CT1 1 1\n");
    reject_tensor("CT1 1 0 1\n");
    reject_tensor("CT1 1 x 1\n");
    reject_tensor("CT1 1 1 1\n1234567");
    reject_tensor("CT1 1 1 1");
    reject_tensor("CT1 100000 100000 100000\n");
    reject_tensor("CT1 18446744073709551615 2 1\n");

    std::stringstream seq("CTS1 1 1 1 1 -5\n");
    CHECK_THROWS_AS((void)read_sequence(seq), FormatError);
    std::stringstream huge("CTS1 1000000 1000 1000 1000 5\n");
    CHECK_THROWS_AS((void)read_sequence(huge), FormatError);
    std::stringstream tkm("TKM1 2 3 1 1 1 1\n");
    CHECK_THROWS_AS((void)read_tucker(tkm), FormatError);

    // Non-orthonormal factor payload.
    std::stringstream bad;
    bad << "TKM1 1 1 1 1 1 1\n";
    const double two[2] = {2.0, 0.0};
    for (int i = 0; i < 3; ++i) bad.write(reinterpret_cast<const char*>(two), sizeof two);
    CHECK_THROWS_AS((void)read_tucker(bad), FormatError);
}

TEST_CASE("file wrappers and format detection") {
    Rng rng(54);
    const Tensor3 t = random_tensor(rng, {2, 2, 2});
    const std::string path = scratch("t.ct1").string();
    save_tensor(path, t);
    CHECK(load_tensor(path) == t);
    CHECK(detect_format(path) == "CT1");

    {
        std::ofstream app(path, std::ios::binary | std::ios::app);
        app.put('x');
    }
    CHECK_THROWS_AS((void)load_tensor(path), FormatError);
    CHECK_THROWS_AS((void)load_sequence(path), FormatError);

    ChannelSequence seq;
    seq.snapshots = {t, t, t};
    const std::string spath = scratch("s.cts1").string();
    save_sequence(spath, seq);
    CHECK(detect_format(spath) == "CTS1");
    CHECK(load_sequence(spath).snapshots == seq.snapshots);

    const std::string junk = scratch("junk.bin").string();
    {
        std::ofstream out(junk, std::ios::binary);
        out << "hello world\n";
    }
    CHECK_THROWS_AS((void)detect_format(junk), FormatError);
    CHECK_THROWS_AS((void)detect_format(scratch("missing.bin").string()), FormatError);
    CHECK_THROWS_AS((void)load_dmd(scratch("missing.bin").string()), FormatError);
}

}
