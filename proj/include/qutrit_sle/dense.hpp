// dense.hpp
// Small dense complex matrices and vectors. Everything the simulator touches is
// at most 27x27, so storage is a flat row-major std::vector and all products
// are naive loops.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qutrit_sle {

using complex = std::complex<double>;
using cvector = std::vector<complex>;

inline constexpr double pi = 3.14159265358979323846;

class cmatrix {
public:
    cmatrix() = default;

    explicit cmatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

    cmatrix(std::initializer_list<std::initializer_list<complex>> rows) : dim_(rows.size()) {
        data_.reserve(dim_ * dim_);
        for (const auto& row : rows) {
            if (row.size() != dim_) {
                throw std::invalid_argument("cmatrix: rows must form a square matrix");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static cmatrix identity(std::size_t dim) {
        cmatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static cmatrix diagonal(std::span<const complex> diag) {
        cmatrix m(diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
        return m;
    }

    std::size_t dim() const { return dim_; }

    complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const complex& operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }

    std::span<const complex> row(std::size_t r) const {
        return {data_.data() + r * dim_, dim_};
    }

    cvector column(std::size_t c) const {
        cvector out(dim_);
        for (std::size_t r = 0; r < dim_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    void set_column(std::size_t c, std::span<const complex> values) {
        for (std::size_t r = 0; r < dim_; ++r) (*this)(r, c) = values[r];
    }

    cmatrix adjoint() const {
        cmatrix out(dim_);
        for (std::size_t r = 0; r < dim_; ++r)
            for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
        return out;
    }

    complex trace() const {
        complex t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    friend cmatrix operator*(const cmatrix& a, const cmatrix& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("cmatrix: dimension mismatch in product");
        const std::size_t n = a.dim_;
        cmatrix out(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const complex aik = a(i, k);
                if (aik == complex{}) continue;
                for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend cvector operator*(const cmatrix& a, std::span<const complex> v) {
        if (a.dim_ != v.size()) throw std::invalid_argument("cmatrix: dimension mismatch in product");
        cvector out(a.dim_);
        for (std::size_t i = 0; i < a.dim_; ++i) {
            complex acc = 0.0;
            for (std::size_t j = 0; j < a.dim_; ++j) acc += a(i, j) * v[j];
            out[i] = acc;
        }
        return out;
    }

    friend cmatrix operator+(cmatrix a, const cmatrix& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("cmatrix: dimension mismatch in sum");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }

    friend cmatrix operator-(cmatrix a, const cmatrix& b) {
        if (a.dim_ != b.dim_) throw std::invalid_argument("cmatrix: dimension mismatch in difference");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }

    friend cmatrix operator*(complex s, cmatrix a) {
        for (auto& x : a.data_) x *= s;
        return a;
    }

    std::span<const complex> data() const { return data_; }

private:
    std::size_t dim_ = 0;
    std::vector<complex> data_;
};

/// Largest entrywise modulus of a - b.
inline double max_abs_diff(const cmatrix& a, const cmatrix& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

/// ||U U^dagger - I||_max
inline double unitarity_defect(const cmatrix& u) {
    return max_abs_diff(u * u.adjoint(), cmatrix::identity(u.dim()));
}

/// ||M - M^dagger||_max
inline double hermiticity_defect(const cmatrix& m) { return max_abs_diff(m, m.adjoint()); }

inline double frobenius_norm(const cmatrix& m) {
    double s = 0.0;
    for (const auto& x : m.data()) s += std::norm(x);
    return std::sqrt(s);
}

/// <a|b>, conjugate-linear in the first argument.
inline complex inner(std::span<const complex> a, std::span<const complex> b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner: length mismatch");
    complex acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

inline double norm2(std::span<const complex> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

}  // namespace qutrit_sle
