// SPDX-License-Identifier: Apache-2.0
#include "tdmd/io.hpp"

#include "tdmd/error.hpp"
#include "tdmd/keyvalue.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace tdmd {

namespace {

constexpr std::size_t kMaxHeader = 256;
constexpr std::size_t kMaxEntries = std::size_t{1} << 28;  // 4 GiB of complex doubles

void put_double(std::ostream& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    std::array<char, 8> bytes{};
    for (std::size_t b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xFFU);
    out.write(bytes.data(), bytes.size());
}

double get_double(std::istream& in) {
    std::array<unsigned char, 8> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw FormatError("payload truncated");
    }
    std::uint64_t bits = 0;
    for (std::size_t b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    return std::bit_cast<double>(bits);
}

template <typename Vec>
void put_entries(std::ostream& out, const Vec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        put_double(out, v.data()[i].real());
        put_double(out, v.data()[i].imag());
    }
}

void get_entries(std::istream& in, Complex* dst, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        const double re = get_double(in);
        const double im = get_double(in);
        dst[i] = Complex(re, im);
    }
}

/// Reads the header line and splits it into whitespace tokens.
std::vector<std::string> read_header(std::istream& in, const std::string& magic, std::size_t fields) {
    std::string line;
    char c = 0;
    while (in.get(c) && c != '\n') {
        line.push_back(c);
        if (line.size() > kMaxHeader) throw FormatError("header line too long");
    }
    if (c != '\n') throw FormatError("missing header line");
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (tokens.empty() || tokens.front() != magic) {
        throw FormatError("expected " + magic + " header, got '" + line.substr(0, 32) + "'");
    }
    if (tokens.size() != fields + 1) {
        throw FormatError(magic + " header needs " + std::to_string(fields) + " fields");
    }
    tokens.erase(tokens.begin());
    return tokens;
}

std::size_t positive_count(const std::string& tok, const std::string& what) {
    std::size_t v = 0;
    try {
        v = parse_count(tok, what);
    } catch (const Error&) {
        throw FormatError("bad " + what + " '" + tok + "'");
    }
    if (v == 0) throw FormatError(what + " must be positive");
    return v;
}

/// Entry count of a payload with the given extents; rejects headers whose
/// product overflows or exceeds kMaxEntries before anything is allocated.
std::size_t payload_entries(std::initializer_list<std::size_t> extents) {
    std::size_t total = 1;
    for (std::size_t e : extents) {
        if (e != 0 && total > kMaxEntries / e) throw FormatError("declared payload is too large");
        total *= e;
    }
    return total;
}

void write_tensor_payload(std::ostream& out, const ChannelTensor& t) {
    put_entries(out, t.entries());
}

ChannelTensor read_tensor_payload(std::istream& in, const Shape3& dims) {
    (void)payload_entries({dims[0], dims[1], dims[2]});
    ChannelTensor t(dims);
    get_entries(in, t.entries().data(), t.size());
    return t;
}

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
    put_entries(out, m.reshaped());
}

ComplexMatrix read_matrix(std::istream& in, std::size_t rows, std::size_t cols) {
    (void)payload_entries({rows, cols});
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    get_entries(in, m.data(), rows * cols);
    return m;
}

template <typename T, typename Reader>
T load_file(const std::string& path, Reader reader) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    T value = reader(in);
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in '" + path + "'");
    return value;
}

template <typename Writer>
void save_file(const std::string& path, Writer writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write '" + path + "'");
    writer(out);
    out.flush();
    if (!out) throw FormatError("write to '" + path + "' failed");
}

}  // namespace

void write_tensor(std::ostream& out, const ChannelTensor& t) {
    const Shape3& d = t.dims();
    out << "CT1 " << d[0] << ' ' << d[1] << ' ' << d[2] << '\n';
    write_tensor_payload(out, t);
}

ChannelTensor read_tensor(std::istream& in) {
    const auto f = read_header(in, "CT1", 3);
    const Shape3 dims{positive_count(f[0], "N_rx"), positive_count(f[1], "N_tx"), positive_count(f[2], "N_sc")};
    return read_tensor_payload(in, dims);
}

void write_sequence(std::ostream& out, const ChannelSequence& seq) {
    seq.validate();
    const Shape3& d = seq.dims();
    out << "CTS1 " << seq.length() << ' ' << d[0] << ' ' << d[1] << ' ' << d[2] << ' '
        << format_double(seq.period_ms) << '\n';
    for (const auto& h : seq.snapshots) write_tensor_payload(out, h);
}

ChannelSequence read_sequence(std::istream& in) {
    const auto f = read_header(in, "CTS1", 5);
    const std::size_t count = positive_count(f[0], "T");
    const Shape3 dims{positive_count(f[1], "N_rx"), positive_count(f[2], "N_tx"), positive_count(f[3], "N_sc")};
    ChannelSequence seq;
    try {
        seq.period_ms = parse_double(f[4], "Tp_ms");
    } catch (const Error&) {
        throw FormatError("bad Tp_ms '" + f[4] + "'");
    }
    if (!(seq.period_ms > 0.0)) throw FormatError("Tp_ms must be positive");
    (void)payload_entries({count, dims[0], dims[1], dims[2]});
    seq.snapshots.reserve(count);
    for (std::size_t t = 0; t < count; ++t) seq.snapshots.push_back(read_tensor_payload(in, dims));
    return seq;
}

void write_tucker(std::ostream& out, const TuckerModel& model) {
    const Shape3 n = model.full_dims();
    const Shape3 r = model.ranks();
    out << "TKM1 " << n[0] << ' ' << r[0] << ' ' << n[1] << ' ' << r[1] << ' ' << n[2] << ' ' << r[2] << '\n';
    for (const auto& u : model.factors()) write_matrix(out, u);
}

TuckerModel read_tucker(std::istream& in) {
    const auto f = read_header(in, "TKM1", 6);
    std::array<ComplexMatrix, 3> factors;
    for (std::size_t n = 0; n < 3; ++n) {
        const std::size_t rows = positive_count(f[2 * n], "N");
        const std::size_t cols = positive_count(f[2 * n + 1], "R");
        if (cols > rows) throw FormatError("TKM1 rank exceeds dimension");
        factors[n] = read_matrix(in, rows, cols);
    }
    try {
        return TuckerModel(std::move(factors));
    } catch (const Error& e) {
        throw FormatError(std::string("invalid TKM1 factors: ") + e.what());
    }
}

void write_dmd(std::ostream& out, const DmdModel& model) {
    out << "DMD1 " << model.state_size() << ' ' << model.rank() << '\n';
    write_matrix(out, model.modes());
    put_entries(out, model.eigenvalues());
    put_entries(out, model.amplitudes());
}

DmdModel read_dmd(std::istream& in) {
    const auto f = read_header(in, "DMD1", 2);
    const std::size_t n = positive_count(f[0], "N");
    const std::size_t r = positive_count(f[1], "r");
    ComplexMatrix phi = read_matrix(in, n, r);
    ComplexVector lambda(static_cast<Eigen::Index>(r));
    get_entries(in, lambda.data(), r);
    ComplexVector b(static_cast<Eigen::Index>(r));
    get_entries(in, b.data(), r);
    ComplexMatrix a_tilde = lambda.asDiagonal();
    return DmdModel(std::move(phi), std::move(lambda), std::move(b), std::move(a_tilde));
}

void save_tensor(const std::string& path, const ChannelTensor& t) {
    save_file(path, [&](std::ostream& o) { write_tensor(o, t); });
}
ChannelTensor load_tensor(const std::string& path) {
    return load_file<ChannelTensor>(path, [](std::istream& i) { return read_tensor(i); });
}
void save_sequence(const std::string& path, const ChannelSequence& seq) {
    save_file(path, [&](std::ostream& o) { write_sequence(o, seq); });
}
ChannelSequence load_sequence(const std::string& path) {
    return load_file<ChannelSequence>(path, [](std::istream& i) { return read_sequence(i); });
}
void save_tucker(const std::string& path, const TuckerModel& model) {
    save_file(path, [&](std::ostream& o) { write_tucker(o, model); });
}
TuckerModel load_tucker(const std::string& path) {
    return load_file<TuckerModel>(path, [](std::istream& i) { return read_tucker(i); });
}
void save_dmd(const std::string& path, const DmdModel& model) {
    save_file(path, [&](std::ostream& o) { write_dmd(o, model); });
}
DmdModel load_dmd(const std::string& path) {
    return load_file<DmdModel>(path, [](std::istream& i) { return read_dmd(i); });
}

std::string detect_format(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::string magic;
    char c = 0;
    while (magic.size() < 5 && in.get(c) && c != ' ' && c != '\n') magic.push_back(c);
    for (const char* known : {"CT1", "CTS1", "TKM1", "DMD1"}) {
        if (magic == known) return magic;
    }
    throw FormatError("'" + path + "' is not a CT1, CTS1, TKM1 or DMD1 file");
}

}  // namespace tdmd
