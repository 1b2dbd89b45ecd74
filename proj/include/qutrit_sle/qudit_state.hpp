// qudit_state.hpp
// Dense state vectors over mixed-radix wires.
//
// Index convention: wire 0 is the most significant digit, so for radices
// (r0, r1, ..., r{k-1}) the digit tuple (d0, ..., d{k-1}) lives at
//   index = sum_w d_w * prod_{v > w} r_v
// and a printed amplitude list reads like counting in that mixed radix.

#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qutrit_sle/dense.hpp"
#include "qutrit_sle/errors.hpp"
#include "qutrit_sle/unitary_gate.hpp"

namespace qutrit_sle {

class WireLayout {
public:
    explicit WireLayout(std::vector<std::size_t> radices) : radices_(std::move(radices)) {
        if (radices_.empty()) throw invalid_input("WireLayout: at least one wire required");
        strides_.resize(radices_.size());
        std::size_t stride = 1;
        for (std::size_t w = radices_.size(); w-- > 0;) {
            if (radices_[w] < 2) {
                throw invalid_input("WireLayout: wire " + std::to_string(w) + " has radix " +
                                    std::to_string(radices_[w]) + " (must be >= 2)");
            }
            strides_[w] = stride;
            stride *= radices_[w];
        }
        dimension_ = stride;
    }

    WireLayout(std::initializer_list<std::size_t> radices)
        : WireLayout(std::vector<std::size_t>(radices)) {}

    std::size_t wire_count() const { return radices_.size(); }
    std::size_t dimension() const { return dimension_; }
    std::size_t radix(std::size_t wire) const { return radices_.at(wire); }
    std::size_t stride(std::size_t wire) const { return strides_.at(wire); }
    std::span<const std::size_t> radices() const { return radices_; }

    std::size_t digit(std::size_t index, std::size_t wire) const {
        return (index / strides_.at(wire)) % radices_[wire];
    }

    std::size_t index_of(std::span<const std::size_t> digits) const {
        if (digits.size() != radices_.size()) {
            throw invalid_input("WireLayout: expected " + std::to_string(radices_.size()) +
                                " digits, got " + std::to_string(digits.size()));
        }
        std::size_t index = 0;
        for (std::size_t w = 0; w < digits.size(); ++w) {
            if (digits[w] >= radices_[w]) {
                throw invalid_input("digit " + std::to_string(digits[w]) + " out of range on wire " +
                                    std::to_string(w) + " (radix " + std::to_string(radices_[w]) +
                                    ")");
            }
            index += digits[w] * strides_[w];
        }
        return index;
    }

    void check_wire(std::size_t wire) const {
        if (wire >= radices_.size()) {
            throw invalid_input("wire index " + std::to_string(wire) + " out of range (" +
                                std::to_string(radices_.size()) + " wires)");
        }
    }

    friend bool operator==(const WireLayout& a, const WireLayout& b) {
        return a.radices_ == b.radices_;
    }

private:
    std::vector<std::size_t> radices_;
    std::vector<std::size_t> strides_;
    std::size_t dimension_ = 0;
};

struct NormalizedState;
struct PostSelection;
struct Measurement;

/// Unit-norm amplitude vector. Only the factory functions below produce one.
class StateVector {
public:
    static constexpr double norm_tolerance = 1e-12;

    const WireLayout& layout() const { return layout_; }
    std::span<const complex> amplitudes() const { return amplitudes_; }
    complex amplitude(std::size_t index) const { return amplitudes_.at(index); }
    std::size_t dimension() const { return amplitudes_.size(); }

private:
    StateVector(WireLayout layout, cvector amplitudes)
        : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {}

    WireLayout layout_;
    cvector amplitudes_;

    friend StateVector basis_state(const WireLayout&, std::span<const std::size_t>);
    friend NormalizedState from_amplitudes(const WireLayout&, std::span<const complex>);
    friend StateVector apply_unitary(const StateVector&, const UnitaryGate&,
                                     std::span<const std::size_t>);
    friend PostSelection postselect(const StateVector&, std::size_t, std::size_t);
    friend StateVector with_global_phase(const StateVector&, double);
    friend Measurement sample_wire(const StateVector&, std::size_t, std::mt19937_64&);
};

struct NormalizedState {
    StateVector state;
    double input_norm;
};

/// Outcome of conditioning a state on one wire reading a given digit.
struct PostSelection {
    double probability;
    StateVector conditional_state;
};

/// Result of a seeded projective measurement of a single wire.
struct Measurement {
    std::size_t digit;
    double probability;
    StateVector collapsed_state;
};

/// Below this the outcome is treated as impossible rather than round-off.
inline constexpr double postselection_floor = 1e-15;

inline StateVector basis_state(const WireLayout& layout, std::span<const std::size_t> digits) {
    cvector amps(layout.dimension());
    amps[layout.index_of(digits)] = 1.0;
    return StateVector(layout, std::move(amps));
}

inline StateVector basis_state(const WireLayout& layout, std::initializer_list<std::size_t> digits) {
    return basis_state(layout, std::span<const std::size_t>(digits.begin(), digits.size()));
}

inline NormalizedState from_amplitudes(const WireLayout& layout, std::span<const complex> amps) {
    if (amps.size() != layout.dimension()) {
        throw invalid_input("from_amplitudes: expected " + std::to_string(layout.dimension()) +
                            " amplitudes, got " + std::to_string(amps.size()));
    }
    const double n = norm2(amps);
    if (!(n > 0.0) || !std::isfinite(n)) throw invalid_input("cannot normalize a zero vector");
    cvector out(amps.begin(), amps.end());
    for (auto& a : out) a /= n;
    return {StateVector(layout, std::move(out)), n};
}

/// Applies `gate` to the named wires; the first named wire is the most
/// significant digit of the gate's index.
inline StateVector apply_unitary(const StateVector& state, const UnitaryGate& gate,
                                 std::span<const std::size_t> wires) {
    const WireLayout& layout = state.layout();
    std::size_t sub_dim = 1;
    for (std::size_t i = 0; i < wires.size(); ++i) {
        layout.check_wire(wires[i]);
        for (std::size_t j = 0; j < i; ++j) {
            if (wires[j] == wires[i]) {
                throw invalid_input("apply_unitary: wire " + std::to_string(wires[i]) +
                                    " named twice");
            }
        }
        sub_dim *= layout.radix(wires[i]);
    }
    if (wires.empty() || sub_dim != gate.dim()) {
        throw invalid_input("apply_unitary: gate dimension " + std::to_string(gate.dim()) +
                            " does not match wire dimension " + std::to_string(sub_dim));
    }

    // offsets[g] = flat-index displacement of gate basis state g
    std::vector<std::size_t> offsets(sub_dim);
    for (std::size_t g = 0; g < sub_dim; ++g) {
        std::size_t rest = g, off = 0;
        for (std::size_t i = wires.size(); i-- > 0;) {
            const std::size_t r = layout.radix(wires[i]);
            off += (rest % r) * layout.stride(wires[i]);
            rest /= r;
        }
        offsets[g] = off;
    }

    const auto in = state.amplitudes();
    cvector out(in.size());
    cvector gathered(sub_dim);
    const cmatrix& m = gate.matrix();
    for (std::size_t base = 0; base < in.size(); ++base) {
        bool is_base = true;
        for (auto w : wires) {
            if (layout.digit(base, w) != 0) {
                is_base = false;
                break;
            }
        }
        if (!is_base) continue;
        for (std::size_t g = 0; g < sub_dim; ++g) gathered[g] = in[base + offsets[g]];
        for (std::size_t r = 0; r < sub_dim; ++r) {
            complex acc = 0.0;
            const auto row = m.row(r);
            for (std::size_t c = 0; c < sub_dim; ++c) acc += row[c] * gathered[c];
            out[base + offsets[r]] = acc;
        }
    }
    return StateVector(layout, std::move(out));
}

inline StateVector apply_unitary(const StateVector& state, const UnitaryGate& gate,
                                 std::initializer_list<std::size_t> wires) {
    return apply_unitary(state, gate, std::span<const std::size_t>(wires.begin(), wires.size()));
}

inline std::vector<double> wire_probabilities(const StateVector& state, std::size_t wire) {
    const WireLayout& layout = state.layout();
    layout.check_wire(wire);
    std::vector<double> probs(layout.radix(wire), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) probs[layout.digit(i, wire)] += std::norm(amps[i]);
    return probs;
}

inline PostSelection postselect(const StateVector& state, std::size_t wire, std::size_t digit) {
    const WireLayout& layout = state.layout();
    layout.check_wire(wire);
    if (digit >= layout.radix(wire)) {
        throw invalid_input("postselect: digit " + std::to_string(digit) + " out of range on wire " +
                            std::to_string(wire));
    }
    const auto amps = state.amplitudes();
    cvector kept(amps.size());
    double p = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (layout.digit(i, wire) == digit) {
            kept[i] = amps[i];
            p += std::norm(amps[i]);
        }
    }
    if (p < postselection_floor) throw postselection_impossible(p);
    const double scale = 1.0 / std::sqrt(p);
    for (auto& a : kept) a *= scale;
    return {p, StateVector(layout, std::move(kept))};
}

/// Seeded projective measurement of one wire (demonstration mode; the
/// pipeline itself post-selects deterministically).
inline Measurement sample_wire(const StateVector& state, std::size_t wire, std::mt19937_64& rng) {
    const auto probs = wire_probabilities(state, wire);
    std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
    const std::size_t d = pick(rng);
    auto sel = postselect(state, wire, d);
    return {d, sel.probability, std::move(sel.conditional_state)};
}

/// |<a|b>|^2
inline double fidelity(const StateVector& a, const StateVector& b) {
    if (!(a.layout() == b.layout())) throw invalid_input("fidelity: layout mismatch");
    return std::norm(inner(a.amplitudes(), b.amplitudes()));
}

inline StateVector with_global_phase(const StateVector& s, double phi) {
    const complex f = std::polar(1.0, phi);
    cvector out(s.amplitudes().begin(), s.amplitudes().end());
    for (auto& a : out) a *= f;
    return StateVector(s.layout(), std::move(out));
}

}  // namespace qutrit_sle
