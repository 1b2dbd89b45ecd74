// qutrit_gates.hpp
// Every unitary the three-qutrit solver circuit uses: the qutrit Hadamard
// (= the d=3 Fourier transform), rotations generated by the three imaginary
// Gell-Mann matrices, the phase-estimation unitary e^{2 pi i 3^{n-1} A}, and
// block-diagonal controlled constructions.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qutrit_sle/dense.hpp"
#include "qutrit_sle/errors.hpp"
#include "qutrit_sle/spectral.hpp"
#include "qutrit_sle/unitary_gate.hpp"

namespace qutrit_sle {

/// omega^k with omega = e^{2 pi i / 3}.
inline complex omega_power(long k) {
    const long r = ((k % 3) + 3) % 3;
    return std::polar(1.0, 2.0 * pi * static_cast<double>(r) / 3.0);
}

/// Column j is (omega^{0*j}, omega^{1*j}, omega^{2*j}) / sqrt(3).
inline UnitaryGate qutrit_hadamard() {
    cmatrix h(3);
    const double s = 1.0 / std::sqrt(3.0);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t j = 0; j < 3; ++j) h(k, j) = s * omega_power(static_cast<long>(j * k));
    return UnitaryGate(h);
}

enum class GellMannLabel { theta2, theta5, theta7 };

inline const char* to_string(GellMannLabel l) {
    switch (l) {
        case GellMannLabel::theta2: return "theta2";
        case GellMannLabel::theta5: return "theta5";
        case GellMannLabel::theta7: return "theta7";
    }
    return "?";
}

struct GellMannGenerator {
    GellMannLabel label;
    cmatrix entries;
};

/// The antisymmetric-imaginary Gell-Mann matrices; each couples one pair of
/// levels: theta2 -> {0,1}, theta5 -> {0,2}, theta7 -> {1,2}.
inline GellMannGenerator gell_mann(GellMannLabel label) {
    constexpr complex i{0.0, 1.0};
    std::size_t lo = 0, hi = 1;
    switch (label) {
        case GellMannLabel::theta2: lo = 0; hi = 1; break;
        case GellMannLabel::theta5: lo = 0; hi = 2; break;
        case GellMannLabel::theta7: lo = 1; hi = 2; break;
    }
    cmatrix m(3);
    m(lo, hi) = -i;
    m(hi, lo) = i;
    return {label, m};
}

/// e^{i * angle * H} for Hermitian H via its eigendecomposition.
inline UnitaryGate exp_hermitian(const HermitianMatrix& h, double angle) {
    const Eigensystem eig = eigh(h);
    const std::size_t n = h.dim();
    cmatrix out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const complex ph = std::polar(1.0, angle * eig.eigenvalues[j]);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                out(r, c) += ph * eig.eigenvectors(r, j) * std::conj(eig.eigenvectors(c, j));
    }
    return UnitaryGate(out);
}

/// e^{i * angle * g}
inline UnitaryGate exp_generator(const GellMannGenerator& g, double angle) {
    return exp_hermitian(HermitianMatrix(g.entries), angle);
}

enum class RotationForm { form_one, form_two };

/// Rotation angles. form_one uses generators (theta2, theta5, theta7); form_two
/// uses theta5 for all three.
struct RotationParams {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    RotationForm form = RotationForm::form_two;

    /// r_i = -2 arccos(l_i), l_i in [-1, 1].
    static RotationParams from_l(double l1, double l2, double l3, RotationForm form) {
        for (double l : {l1, l2, l3}) {
            if (!(l >= -1.0 && l <= 1.0)) {
                throw invalid_input("l-parameter " + std::to_string(l) + " outside [-1, 1]");
            }
        }
        return {-2.0 * std::acos(l1), -2.0 * std::acos(l2), -2.0 * std::acos(l3), form};
    }

    std::array<double, 3> values() const { return {r1, r2, r3}; }
};

inline std::array<GellMannLabel, 3> generators_for(RotationForm form) {
    if (form == RotationForm::form_one) {
        return {GellMannLabel::theta2, GellMannLabel::theta5, GellMannLabel::theta7};
    }
    return {GellMannLabel::theta5, GellMannLabel::theta5, GellMannLabel::theta5};
}

/// The three factors R_i = e^{i r_i g_i / 3}, in order.
inline std::array<UnitaryGate, 3> rotation_factors(const RotationParams& p) {
    const auto gens = generators_for(p.form);
    const auto r = p.values();
    return {exp_generator(gell_mann(gens[0]), r[0] / 3.0),
            exp_generator(gell_mann(gens[1]), r[1] / 3.0),
            exp_generator(gell_mann(gens[2]), r[2] / 3.0)};
}

/// R = R1 * R2 * R3
inline UnitaryGate rotation_gate(const RotationParams& p) {
    if (p.form == RotationForm::form_two) {
        // the theta5 factors commute, so the product collapses to one exponential
        return exp_generator(gell_mann(GellMannLabel::theta5), (p.r1 + p.r2 + p.r3) / 3.0);
    }
    const auto f = rotation_factors(p);
    return f[0] * f[1] * f[2];
}

/// U = e^{2 pi i 3^{n-1} A}. Eigenvector u_j of A picks up the phase
/// 2 pi frac(3^{n-1} lambda_j), so a one-qutrit phase estimation with this U
/// reads the n-th ternary digit of lambda_j.
inline UnitaryGate phase_unitary(const HermitianMatrix& a, int n) {
    if (n < 1) throw invalid_input("phase_unitary: digit position n must be >= 1");
    const Eigensystem eig = eigh(a);
    const double scale = std::pow(3.0, n - 1);
    const std::size_t dim = a.dim();
    cmatrix out(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        // reduce before multiplying by 2 pi to keep the phase accurate for large n
        double turns = std::fmod(scale * eig.eigenvalues[j], 1.0);
        const complex ph = std::polar(1.0, 2.0 * pi * turns);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c)
                out(r, c) += ph * eig.eigenvectors(r, j) * std::conj(eig.eigenvectors(c, j));
    }
    return UnitaryGate(out);
}

/// Block-diagonal gate applying blocks[c] to the target when the control
/// (the more significant wire) reads c.
inline UnitaryGate controlled_select(std::span<const UnitaryGate> blocks, std::size_t control_radix) {
    if (control_radix < 2) throw invalid_input("controlled_select: control radix must be >= 2");
    if (blocks.size() != control_radix) {
        throw invalid_input("controlled_select: " + std::to_string(blocks.size()) +
                            " blocks for control radix " + std::to_string(control_radix));
    }
    const std::size_t m = blocks.front().dim();
    for (const auto& b : blocks) {
        if (b.dim() != m) throw invalid_input("controlled_select: blocks differ in dimension");
    }
    cmatrix out(control_radix * m);
    for (std::size_t c = 0; c < control_radix; ++c)
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t k = 0; k < m; ++k) out(c * m + r, c * m + k) = blocks[c](r, k);
    return UnitaryGate(out);
}

/// |c>|t> -> |c> U^c |t>
inline UnitaryGate controlled_power(const UnitaryGate& u, std::size_t control_radix) {
    if (control_radix < 2) throw invalid_input("controlled_power: control radix must be >= 2");
    std::vector<UnitaryGate> blocks;
    blocks.reserve(control_radix);
    blocks.push_back(UnitaryGate::identity(u.dim()));
    for (std::size_t c = 1; c < control_radix; ++c) blocks.push_back(blocks.back() * u);
    return controlled_select(blocks, control_radix);
}

}  // namespace qutrit_sle
