// SPDX-License-Identifier: Apache-2.0
#include "tdmd/tensor.hpp"

#include "tdmd/error.hpp"

#include <cmath>
#include <string>

namespace tdmd {

namespace {

void require_mode(int mode) {
    if (mode < 1 || mode > 3) {
        throw UsageError("invalid mode " + std::to_string(mode) + " (expected 1, 2 or 3)");
    }
}

std::string shape_string(const Shape3& s) {
    return std::to_string(s[0]) + "x" + std::to_string(s[1]) + "x" + std::to_string(s[2]);
}

void require_nonzero_dims(const Shape3& dims) {
    if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0) {
        throw DimensionError("tensor extents must be positive, got " + shape_string(dims));
    }
}

}  // namespace

Tensor3::Tensor3(const Shape3& dims) : dims_(dims) {
    require_nonzero_dims(dims);
    data_ = ComplexVector::Zero(static_cast<Eigen::Index>(volume(dims)));
}

Tensor3::Tensor3(const Shape3& dims, ComplexVector entries) : dims_(dims), data_(std::move(entries)) {
    require_nonzero_dims(dims);
    if (static_cast<std::size_t>(data_.size()) != volume(dims)) {
        throw DimensionError("tensor " + shape_string(dims) + " needs " + std::to_string(volume(dims)) +
                             " entries, got " + std::to_string(data_.size()));
    }
}

std::size_t Tensor3::dim(int mode) const {
    require_mode(mode);
    return dims_[static_cast<std::size_t>(mode - 1)];
}

bool Tensor3::all_finite() const noexcept {
    return data_.allFinite();
}

Tensor3& Tensor3::operator+=(const Tensor3& other) {
    if (other.dims_ != dims_) {
        throw DimensionError("cannot add " + shape_string(other.dims_) + " to " + shape_string(dims_));
    }
    data_ += other.data_;
    return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& other) {
    if (other.dims_ != dims_) {
        throw DimensionError("cannot subtract " + shape_string(other.dims_) + " from " + shape_string(dims_));
    }
    data_ -= other.data_;
    return *this;
}

Tensor3& Tensor3::operator*=(Complex scale) noexcept {
    data_ *= scale;
    return *this;
}

Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
Tensor3 operator*(Complex s, Tensor3 t) { return t *= s; }

ComplexVector vec(const Tensor3& t) {
    return t.entries();
}

Tensor3 unvec(const ComplexVector& v, const Shape3& dims) {
    if (static_cast<std::size_t>(v.size()) != volume(dims)) {
        throw DimensionError("cannot unvec length " + std::to_string(v.size()) + " into " + shape_string(dims));
    }
    return Tensor3(dims, v);
}

ComplexMatrix unfold(const Tensor3& t, int mode) {
    require_mode(mode);
    const auto [n1, n2, n3] = t.dims();
    const auto idx = [](std::size_t v) { return static_cast<Eigen::Index>(v); };
    switch (mode) {
    case 1:
        return Eigen::Map<const ComplexMatrix>(t.entries().data(), idx(n1), idx(n2 * n3));
    case 2: {
        ComplexMatrix m(idx(n2), idx(n1 * n3));
        for (std::size_t k = 0; k < n3; ++k)
            for (std::size_t j = 0; j < n2; ++j)
                for (std::size_t i = 0; i < n1; ++i) m(idx(j), idx(i + n1 * k)) = t(i, j, k);
        return m;
    }
    default:
        return Eigen::Map<const ComplexMatrix>(t.entries().data(), idx(n1 * n2), idx(n3)).transpose();
    }
}

Tensor3 fold(const ComplexMatrix& m, int mode, const Shape3& dims) {
    require_mode(mode);
    const auto [n1, n2, n3] = dims;
    const std::size_t rows = dims[static_cast<std::size_t>(mode - 1)];
    if (static_cast<std::size_t>(m.rows()) != rows ||
        static_cast<std::size_t>(m.cols()) * rows != volume(dims)) {
        throw DimensionError("matrix " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                             " is not a mode-" + std::to_string(mode) + " unfolding of " + shape_string(dims));
    }
    Tensor3 t(dims);
    const auto idx = [](std::size_t v) { return static_cast<Eigen::Index>(v); };
    for (std::size_t k = 0; k < n3; ++k)
        for (std::size_t j = 0; j < n2; ++j)
            for (std::size_t i = 0; i < n1; ++i) {
                switch (mode) {
                case 1: t(i, j, k) = m(idx(i), idx(j + n2 * k)); break;
                case 2: t(i, j, k) = m(idx(j), idx(i + n1 * k)); break;
                default: t(i, j, k) = m(idx(k), idx(i + n1 * j)); break;
                }
            }
    return t;
}

Tensor3 mode_product(const Tensor3& t, const ComplexMatrix& m, int mode) {
    require_mode(mode);
    const auto [n1, n2, n3] = t.dims();
    const std::size_t n = t.dim(mode);
    if (static_cast<std::size_t>(m.cols()) != n) {
        throw DimensionError("mode-" + std::to_string(mode) + " product needs " + std::to_string(n) +
                             " matrix columns, got " + std::to_string(m.cols()));
    }
    const auto rows = static_cast<std::size_t>(m.rows());
    const auto idx = [](std::size_t v) { return static_cast<Eigen::Index>(v); };

    Shape3 out_dims = t.dims();
    out_dims[static_cast<std::size_t>(mode - 1)] = rows;
    ComplexVector out(idx(volume(out_dims)));

    switch (mode) {
    case 1: {
        Eigen::Map<const ComplexMatrix> in(t.entries().data(), idx(n1), idx(n2 * n3));
        Eigen::Map<ComplexMatrix>(out.data(), idx(rows), idx(n2 * n3)).noalias() = m * in;
        break;
    }
    case 2: {
        const ComplexMatrix mt = m.transpose();
        for (std::size_t k = 0; k < n3; ++k) {
            Eigen::Map<const ComplexMatrix> slice(t.entries().data() + n1 * n2 * k, idx(n1), idx(n2));
            Eigen::Map<ComplexMatrix>(out.data() + n1 * rows * k, idx(n1), idx(rows)).noalias() = slice * mt;
        }
        break;
    }
    default: {
        Eigen::Map<const ComplexMatrix> in(t.entries().data(), idx(n1 * n2), idx(n3));
        Eigen::Map<ComplexMatrix>(out.data(), idx(n1 * n2), idx(rows)).noalias() = in * m.transpose();
        break;
    }
    }
    return Tensor3(out_dims, std::move(out));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double frobenius_norm(const Tensor3& t) noexcept {
    return t.entries().norm();
}

}  // namespace tdmd
