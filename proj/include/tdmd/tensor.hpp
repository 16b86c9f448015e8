// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>

namespace tdmd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Extents of a third-order tensor: (rx, tx, subcarrier).
using Shape3 = std::array<std::size_t, 3>;

[[nodiscard]] constexpr std::size_t volume(const Shape3& s) noexcept {
    return s[0] * s[1] * s[2];
}

/// Dense complex third-order tensor.
///
/// Storage is first-index-fastest: entry (i, j, k) lives at
/// i + N1 * (j + N2 * k). With this layout vec() is a plain copy and
///   vec(T x1 A x2 B x3 C) == kron(C, kron(B, A)) * vec(T)
/// holds exactly, which is what makes Tucker cores and full vectors
/// interchangeable through a single Kronecker isometry.
class Tensor3 {
public:
    /// Zero tensor. Every extent must be at least 1.
    explicit Tensor3(const Shape3& dims);
    Tensor3(const Shape3& dims, ComplexVector entries);

    [[nodiscard]] const Shape3& dims() const noexcept { return dims_; }
    [[nodiscard]] std::size_t dim(int mode) const;
    [[nodiscard]] std::size_t size() const noexcept { return volume(dims_); }

    [[nodiscard]] Complex& operator()(std::size_t i, std::size_t j, std::size_t k) noexcept {
        return data_[static_cast<Eigen::Index>(index(i, j, k))];
    }
    [[nodiscard]] const Complex& operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return data_[static_cast<Eigen::Index>(index(i, j, k))];
    }

    [[nodiscard]] const ComplexVector& entries() const noexcept { return data_; }
    [[nodiscard]] ComplexVector& entries() noexcept { return data_; }

    [[nodiscard]] bool all_finite() const noexcept;

    Tensor3& operator+=(const Tensor3& other);
    Tensor3& operator-=(const Tensor3& other);
    Tensor3& operator*=(Complex scale) noexcept;

    friend bool operator==(const Tensor3& a, const Tensor3& b) {
        return a.dims_ == b.dims_ && a.data_ == b.data_;
    }

private:
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return i + dims_[0] * (j + dims_[1] * k);
    }

    Shape3 dims_;
    ComplexVector data_;
};

using ChannelTensor = Tensor3;
using CoreTensor = Tensor3;

[[nodiscard]] Tensor3 operator+(Tensor3 a, const Tensor3& b);
[[nodiscard]] Tensor3 operator-(Tensor3 a, const Tensor3& b);
[[nodiscard]] Tensor3 operator*(Complex s, Tensor3 t);

[[nodiscard]] ComplexVector vec(const Tensor3& t);
[[nodiscard]] Tensor3 unvec(const ComplexVector& v, const Shape3& dims);

/// Mode-n matricization (mode in 1..3). Columns enumerate the remaining two
/// indices with the lower-numbered one varying fastest, so unfold(t, 1)
/// stacked column-major is exactly vec(t).
[[nodiscard]] ComplexMatrix unfold(const Tensor3& t, int mode);
[[nodiscard]] Tensor3 fold(const ComplexMatrix& m, int mode, const Shape3& dims);

/// t x_mode m, i.e. fold(m * unfold(t, mode)).
[[nodiscard]] Tensor3 mode_product(const Tensor3& t, const ComplexMatrix& m, int mode);

[[nodiscard]] ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

[[nodiscard]] double frobenius_norm(const Tensor3& t) noexcept;

}  // namespace tdmd
