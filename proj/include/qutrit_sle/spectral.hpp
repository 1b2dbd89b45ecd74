// spectral.hpp
// Classical side of the solver: Hermitian eigendecomposition (cyclic complex
// Jacobi), the direct linear solve used as the reference answer, and the
// ternary-digit bookkeeping that decides which digit the clock qutrit reads.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qutrit_sle/dense.hpp"
#include "qutrit_sle/errors.hpp"

namespace qutrit_sle {

class HermitianMatrix {
public:
    static constexpr double default_tolerance = 1e-10;

    explicit HermitianMatrix(cmatrix entries, double tolerance = default_tolerance)
        : entries_(std::move(entries)) {
        if (entries_.dim() == 0) throw invalid_input("HermitianMatrix: empty matrix");
        const double defect = hermiticity_defect(entries_);
        if (!(defect < tolerance)) throw not_hermitian(defect);
    }

    std::size_t dim() const { return entries_.dim(); }
    const cmatrix& matrix() const { return entries_; }
    complex operator()(std::size_t r, std::size_t c) const { return entries_(r, c); }

private:
    cmatrix entries_;
};

/// A x = b with A Hermitian.
class SLEProblem {
public:
    SLEProblem(HermitianMatrix a, cvector b) : a_(std::move(a)), b_(std::move(b)) {
        if (b_.size() != a_.dim()) {
            throw invalid_input("SLEProblem: b has " + std::to_string(b_.size()) +
                                " entries, matrix is " + std::to_string(a_.dim()) + "x" +
                                std::to_string(a_.dim()));
        }
        if (!(norm2(b_) > 0.0)) throw invalid_input("SLEProblem: b must be nonzero");
    }

    const HermitianMatrix& a() const { return a_; }
    std::span<const complex> b() const { return b_; }

    cvector b_normalized() const {
        cvector out = b_;
        const double n = norm2(out);
        for (auto& x : out) x /= n;
        return out;
    }

private:
    HermitianMatrix a_;
    cvector b_;
};

/// Eigen-part of a spectral decomposition: ascending eigenvalues, eigenvector j
/// in column j.
struct Eigensystem {
    std::vector<double> eigenvalues;
    cmatrix eigenvectors;

    cvector eigenvector(std::size_t j) const { return eigenvectors.column(j); }
};

struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    cmatrix eigenvectors;
    cvector coefficients;  // beta_j = <u_j|b>

    std::size_t size() const { return eigenvalues.size(); }
    cvector eigenvector(std::size_t j) const { return eigenvectors.column(j); }
};

namespace detail {

inline double off_diagonal_norm(const cmatrix& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c)
            if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
}

// Fixes the free phase of each eigenvector: the first entry of largest
// modulus becomes real and positive.
inline void canonicalize_phase(cmatrix& v) {
    for (std::size_t c = 0; c < v.dim(); ++c) {
        std::size_t best = 0;
        double best_mag = -1.0;
        for (std::size_t r = 0; r < v.dim(); ++r) {
            const double m = std::abs(v(r, c));
            if (m > best_mag + 1e-12) {
                best_mag = m;
                best = r;
            }
        }
        const complex ph = std::conj(v(best, c)) / best_mag;
        for (std::size_t r = 0; r < v.dim(); ++r) v(r, c) *= ph;
    }
}

}  // namespace detail

inline constexpr int jacobi_max_sweeps = 100;

/// Cyclic Jacobi diagonalization. Each (p,q) step first rotates the phase of
/// a_pq away, then applies the real symmetric Jacobi rotation.
inline Eigensystem eigh(const HermitianMatrix& input) {
    const std::size_t n = input.dim();
    cmatrix a = input.matrix();
    cmatrix v = cmatrix::identity(n);
    const double threshold = 1e-13 * std::max(1.0, frobenius_norm(a));

    for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

    double off = detail::off_diagonal_norm(a);
    int sweep = 0;
    for (; sweep < jacobi_max_sweeps && off >= threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;
                const complex eiphi = apq / mag;

                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p,q) plane
                const complex gpp = c;
                const complex gpq = s;
                const complex gqp = -s * std::conj(eiphi);
                const complex gqq = c * std::conj(eiphi);

                for (std::size_t k = 0; k < n; ++k) {
                    const complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * gpp + akq * gqp;
                    a(k, q) = akp * gpq + akq * gqq;
                    const complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * gpp + vkq * gqp;
                    v(k, q) = vkp * gpq + vkq * gqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
        off = detail::off_diagonal_norm(a);
    }
    if (off >= threshold) throw no_convergence(off);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    Eigensystem out{std::vector<double>(n), cmatrix(n)};
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]).real();
        out.eigenvectors.set_column(j, v.column(order[j]));
    }
    detail::canonicalize_phase(out.eigenvectors);
    return out;
}

/// beta_j = <u_j|b> for unit-norm b.
inline cvector beta_coefficients(const Eigensystem& eig, std::span<const complex> b_normalized) {
    if (std::abs(norm2(b_normalized) - 1.0) > 1e-10) {
        throw invalid_input("beta_coefficients: b must be normalized");
    }
    const std::size_t n = eig.eigenvalues.size();
    if (b_normalized.size() != n) throw invalid_input("beta_coefficients: length mismatch");
    cvector beta(n);
    for (std::size_t j = 0; j < n; ++j) beta[j] = inner(eig.eigenvector(j), b_normalized);
    return beta;
}

inline SpectralDecomposition decompose(const SLEProblem& problem) {
    Eigensystem eig = eigh(problem.a());
    const cvector b = problem.b_normalized();
    cvector beta = beta_coefficients(eig, b);
    return {std::move(eig.eigenvalues), std::move(eig.eigenvectors), std::move(beta)};
}

/// Throws unless every eigenvalue lies strictly inside (0, 1).
inline void check_admissible(std::span<const double> eigenvalues) {
    for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
        if (!(eigenvalues[j] > 0.0 && eigenvalues[j] < 1.0)) {
            throw inadmissible_spectrum("eigenvalue " + std::to_string(j) + " = " +
                                        std::to_string(eigenvalues[j]) +
                                        " lies outside (0, 1)");
        }
    }
}

inline constexpr double singular_threshold = 1e-10;

namespace detail {

// Gaussian elimination with partial pivoting. Deliberately independent of
// eigh so the reference answer does not share a code path with the circuit.
inline cvector lu_solve(cmatrix a, cvector b) {
    const std::size_t n = a.dim();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) == 0.0) throw singular_matrix(0.0);
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a(col, k), a(piv, k));
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const complex f = a(r, col) / a(col, col);
            if (f == complex{}) continue;
            for (std::size_t k = col; k < n; ++k) a(r, k) -= f * a(col, k);
            b[r] -= f * b[col];
        }
    }
    cvector x(n);
    for (std::size_t r = n; r-- > 0;) {
        complex acc = b[r];
        for (std::size_t k = r + 1; k < n; ++k) acc -= a(r, k) * x[k];
        x[r] = acc / a(r, r);
    }
    return x;
}

}  // namespace detail

/// A^{-1} b / ||A^{-1} b||.
inline cvector classical_solution(const SLEProblem& problem) {
    const Eigensystem eig = eigh(problem.a());
    double min_abs = std::abs(eig.eigenvalues.front());
    for (double l : eig.eigenvalues) min_abs = std::min(min_abs, std::abs(l));
    if (!(min_abs > singular_threshold)) throw singular_matrix(min_abs);

    cvector x = detail::lu_solve(problem.a().matrix(), problem.b_normalized());
    const double n = norm2(x);
    for (auto& v : x) v /= n;
    return x;
}

inline constexpr int max_ternary_digits = 30;

/// First `count` digits of the ternary fraction of x in [0, 1). When x lies
/// within `snap_tolerance` of a multiple of 3^-count it is snapped there
/// first, so numerically computed 0.4444... reads 0.11 and not 0.10222...
inline std::vector<int> ternary_digits(double x, int count, double snap_tolerance = 1e-12) {
    if (count < 1 || count > max_ternary_digits) {
        throw invalid_input("ternary_digits: count must be in [1, " +
                            std::to_string(max_ternary_digits) + "]");
    }
    if (!(x >= 0.0 && x < 1.0)) {
        throw invalid_input("ternary_digits: " + std::to_string(x) + " is outside [0, 1)");
    }
    std::uint64_t scale = 1;
    for (int i = 0; i < count; ++i) scale *= 3;

    const double scaled = x * static_cast<double>(scale);
    const double nearest = std::round(scaled);
    std::uint64_t numerator;
    if (std::abs(x - nearest / static_cast<double>(scale)) <= snap_tolerance &&
        nearest < static_cast<double>(scale)) {
        numerator = static_cast<std::uint64_t>(nearest);
    } else {
        numerator = std::min(static_cast<std::uint64_t>(std::floor(scaled)), scale - 1);
    }

    std::vector<int> digits(static_cast<std::size_t>(count));
    for (int i = count; i-- > 0;) {
        digits[static_cast<std::size_t>(i)] = static_cast<int>(numerator % 3);
        numerator /= 3;
    }
    return digits;
}

/// Smallest 1-based position n at which the ternary digits of all values are
/// pairwise distinct.
inline int discriminating_position(std::span<const double> values, int max_digits,
                                   double snap_tolerance = 1e-12) {
    std::vector<std::vector<int>> digits;
    digits.reserve(values.size());
    for (double v : values) digits.push_back(ternary_digits(v, max_digits, snap_tolerance));

    for (std::size_t i = 0; i < digits.size(); ++i)
        for (std::size_t j = i + 1; j < digits.size(); ++j)
            if (digits[i] == digits[j]) {
                throw digit_collision("eigenvalues " + std::to_string(i) + " and " +
                                      std::to_string(j) + " agree on all " +
                                      std::to_string(max_digits) + " ternary digits");
            }

    for (int pos = 1; pos <= max_digits; ++pos) {
        std::vector<int> seen;
        bool distinct = true;
        for (const auto& d : digits) {
            const int digit = d[static_cast<std::size_t>(pos - 1)];
            if (std::find(seen.begin(), seen.end(), digit) != seen.end()) {
                distinct = false;
                break;
            }
            seen.push_back(digit);
        }
        if (distinct) return pos;
    }
    throw digit_collision("no single ternary digit position <= " + std::to_string(max_digits) +
                          " separates all eigenvalues");
}

}  // namespace qutrit_sle
