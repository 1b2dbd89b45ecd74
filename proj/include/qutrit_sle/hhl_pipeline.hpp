// hhl_pipeline.hpp
// The three-qutrit linear-system circuit.
//
// Wires: 0 = clock, 1 = data, 2 = ancilla; initial state |0>|b>|0>.
//   1. H on clock
//   2. controlled U^c, clock -> data, U = e^{2 pi i 3^{n-1} A}
//   3. H^dagger on clock            (clock now holds digit n of each lambda_j)
//   4. digit-selected rotation clock -> ancilla
//   5. adjoint of 1-3
//   6. post-select ancilla on |2>
// The data wire then carries sum_j beta_j s_j u_j, with s_j the |2> amplitude
// produced for eigenvalue j's clock digit.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qutrit_sle/dense.hpp"
#include "qutrit_sle/errors.hpp"
#include "qutrit_sle/qudit_state.hpp"
#include "qutrit_sle/qutrit_gates.hpp"
#include "qutrit_sle/spectral.hpp"

namespace qutrit_sle {

inline constexpr std::size_t clock_wire = 0;
inline constexpr std::size_t data_wire = 1;
inline constexpr std::size_t ancilla_wire = 2;
inline constexpr std::size_t ancilla_target_digit = 2;

inline const WireLayout& pipeline_layout() {
    static const WireLayout layout{3, 3, 3};
    return layout;
}

inline const WireLayout& data_layout() {
    static const WireLayout layout{3};
    return layout;
}

enum class Semantics { ideal, digit_select_form_one, digit_select_form_two };

inline const char* to_string(Semantics s) {
    switch (s) {
        case Semantics::ideal: return "ideal";
        case Semantics::digit_select_form_one: return "form1";
        case Semantics::digit_select_form_two: return "form2";
    }
    return "?";
}

struct PipelineConfig {
    int n = 2;
    Semantics semantics = Semantics::digit_select_form_two;
    RotationParams params{};  // used by the digit-select semantics
    double c = 0.0;           // used by ideal semantics
    bool report_intermediate_states = false;
};

struct IntermediateStates {
    StateVector after_estimation;  // sum_j beta_j |lambda_j digit>|u_j>|0>
    StateVector after_rotation;
    StateVector after_uncompute;
};

struct RunResult {
    StateVector solution_state;  // data wire, clock digit 0 slice
    double success_probability;
    double clock_residual;       // 1 - P(clock = 0) after post-selection
    std::optional<double> oracle_fidelity;
    std::vector<int> clock_digits;  // digit phase estimation assigns to eigenvalue j
    bool digit_collision = false;
    std::optional<IntermediateStates> intermediate;
};

/// How much C may exceed the smallest eigenvalue before it is rejected.
/// Input matrices printed to a few decimals have eigenvalues that miss their
/// intended values by ~1e-5; C/lambda is clamped to 1 inside this slack.
inline constexpr double c_relative_slack = 1e-4;

/// Digit the clock reads for eigenvalue lambda: the nearest eigenphase,
/// round(3^n lambda) mod 3. Equals the n-th ternary digit when lambda has a
/// terminating n-digit expansion.
inline int estimated_clock_digit(double lambda, int n) {
    const double scaled = lambda * std::pow(3.0, n);
    const long long k = std::llround(scaled);
    return static_cast<int>(((k % 3) + 3) % 3);
}

inline std::vector<int> clock_digits(std::span<const double> eigenvalues, int n) {
    std::vector<int> out;
    out.reserve(eigenvalues.size());
    for (double l : eigenvalues) out.push_back(estimated_clock_digit(l, n));
    return out;
}

inline bool digits_collide(std::span<const int> digits) {
    for (std::size_t i = 0; i < digits.size(); ++i)
        for (std::size_t j = i + 1; j < digits.size(); ++j)
            if (digits[i] == digits[j]) return true;
    return false;
}

namespace detail {

inline double checked_ratio(double c, double lambda_min, double lambda) {
    if (!(c >= 0.0)) throw invalid_input("C must be non-negative");
    if (c > lambda_min * (1.0 + c_relative_slack)) {
        throw inadmissible_spectrum("C exceeds smallest eigenvalue (C = " + std::to_string(c) +
                                    ", min lambda = " + std::to_string(lambda_min) + ")");
    }
    return std::min(1.0, c / lambda);
}

}  // namespace detail

/// a_c = arcsin(C / lambda(c)) indexed by clock digit c, where lambda(c) is the
/// eigenvalue whose digit at position n is c. The ideal gate for digit c is
/// e^{-i a_c theta5}, which puts +C/lambda on |2>.
inline std::array<double, 3> ideal_rotation_angles(const SpectralDecomposition& d, double c, int n) {
    if (d.size() != 3) throw invalid_input("ideal_rotation_angles: need exactly 3 eigenvalues");
    const auto digits = clock_digits(d.eigenvalues, n);
    if (digits_collide(digits)) {
        throw digit_collision("two eigenvalues share ternary digit " + std::to_string(n) +
                              "; the digit-indexed rotation is ill-defined");
    }
    const double lambda_min = *std::min_element(d.eigenvalues.begin(), d.eigenvalues.end());
    std::array<double, 3> angles{};
    for (std::size_t j = 0; j < 3; ++j) {
        angles[static_cast<std::size_t>(digits[j])] =
            std::asin(detail::checked_ratio(c, lambda_min, d.eigenvalues[j]));
    }
    return angles;
}

/// sum_j |beta_j|^2 (C / lambda_j)^2, with the same clamp as the circuit.
inline double analytic_success_probability(const SpectralDecomposition& d, double c) {
    const double lambda_min = *std::min_element(d.eigenvalues.begin(), d.eigenvalues.end());
    double p = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        const double r = detail::checked_ratio(c, lambda_min, d.eigenvalues[j]);
        p += std::norm(d.coefficients[j]) * r * r;
    }
    return p;
}

/// Ancilla gates indexed by clock digit.
inline std::array<UnitaryGate, 3> digit_select_rotations(const RotationParams& p) {
    return rotation_factors(p);
}

inline std::array<UnitaryGate, 3> ideal_rotations(const std::array<double, 3>& angles) {
    const auto theta5 = gell_mann(GellMannLabel::theta5);
    return {exp_generator(theta5, -angles[0]), exp_generator(theta5, -angles[1]),
            exp_generator(theta5, -angles[2])};
}

/// Phase estimation and the reference solution prepared once for a problem;
/// evaluate() then runs the rotation, uncompute and post-selection for any
/// choice of ancilla gates. Immutable after construction.
class Pipeline {
public:
    Pipeline(const SLEProblem& problem, int n)
        : n_(n),
          decomposition_(admissible(decompose(validated(problem, n)))),
          hadamard_(qutrit_hadamard()),
          hadamard_dag_(adjoint(hadamard_)),
          controlled_u_(controlled_power(phase_unitary(problem.a(), n), 3)),
          controlled_u_dag_(adjoint(controlled_u_)),
          initial_(initial_state_for(problem)),
          estimated_(estimate(initial_)),
          oracle_(from_amplitudes(data_layout(), classical_solution(problem)).state),
          digits_(clock_digits(decomposition_.eigenvalues, n)) {}

    int n() const { return n_; }
    const SpectralDecomposition& decomposition() const { return decomposition_; }
    const StateVector& oracle() const { return oracle_; }
    const StateVector& initial_state() const { return initial_; }
    const StateVector& after_estimation() const { return estimated_; }
    std::span<const int> digits() const { return digits_; }
    bool has_digit_collision() const { return digits_collide(digits_); }

    /// Steps 1-3.
    StateVector estimate(const StateVector& s) const {
        auto out = apply_unitary(s, hadamard_, {clock_wire});
        out = apply_unitary(out, controlled_u_, {clock_wire, data_wire});
        return apply_unitary(out, hadamard_dag_, {clock_wire});
    }

    /// Exact adjoint of estimate().
    StateVector unestimate(const StateVector& s) const {
        auto out = apply_unitary(s, hadamard_, {clock_wire});
        out = apply_unitary(out, controlled_u_dag_, {clock_wire, data_wire});
        return apply_unitary(out, hadamard_dag_, {clock_wire});
    }

    std::array<UnitaryGate, 3> rotations_for(const PipelineConfig& cfg) const {
        if (cfg.semantics == Semantics::ideal) {
            return ideal_rotations(ideal_rotation_angles(decomposition_, cfg.c, n_));
        }
        RotationParams p = cfg.params;
        p.form = cfg.semantics == Semantics::digit_select_form_one ? RotationForm::form_one
                                                                   : RotationForm::form_two;
        return digit_select_rotations(p);
    }

    RunResult run(const PipelineConfig& cfg) const {
        if (cfg.n != n_) {
            throw invalid_input("pipeline prepared for n = " + std::to_string(n_) +
                                ", config asks for n = " + std::to_string(cfg.n));
        }
        return evaluate(rotations_for(cfg), cfg.report_intermediate_states);
    }

    RunResult evaluate(const std::array<UnitaryGate, 3>& ancilla_gates,
                       bool keep_intermediate = false) const {
        const UnitaryGate select = controlled_select(ancilla_gates, 3);
        StateVector rotated = apply_unitary(estimated_, select, {clock_wire, ancilla_wire});
        StateVector uncomputed = unestimate(rotated);
        PostSelection sel = postselect(uncomputed, ancilla_wire, ancilla_target_digit);

        const WireLayout& layout = pipeline_layout();
        const auto amps = sel.conditional_state.amplitudes();
        std::array<cvector, 3> slices;  // data amplitudes per clock digit
        for (std::size_t c = 0; c < 3; ++c) {
            slices[c].resize(3);
            for (std::size_t d = 0; d < 3; ++d)
                slices[c][d] = amps[layout.index_of(std::array<std::size_t, 3>{c, d, 2})];
        }

        const double clock0 = norm2(slices[0]) * norm2(slices[0]);
        if (clock0 < postselection_floor) throw postselection_impossible(sel.probability * clock0);

        double fid = 0.0;
        for (const auto& s : slices) fid += std::norm(inner(oracle_.amplitudes(), s));

        RunResult out{from_amplitudes(data_layout(), slices[0]).state,
                      sel.probability,
                      std::max(0.0, 1.0 - clock0),
                      fid,
                      digits_,
                      has_digit_collision(),
                      std::nullopt};
        if (keep_intermediate) {
            out.intermediate = IntermediateStates{estimated_, std::move(rotated), std::move(uncomputed)};
        }
        return out;
    }

private:
    static const SLEProblem& validated(const SLEProblem& problem, int n) {
        if (problem.a().dim() != 3) {
            throw invalid_input("the qutrit circuit solves 3x3 systems; got " +
                                std::to_string(problem.a().dim()) + "x" +
                                std::to_string(problem.a().dim()));
        }
        if (n < 1) throw invalid_input("digit position n must be >= 1");
        return problem;
    }

    static SpectralDecomposition admissible(SpectralDecomposition d) {
        check_admissible(d.eigenvalues);
        return d;
    }

    // |0>|b>|0>
    static StateVector initial_state_for(const SLEProblem& problem) {
        const cvector b = problem.b_normalized();
        cvector amps(pipeline_layout().dimension());
        for (std::size_t d = 0; d < 3; ++d)
            amps[pipeline_layout().index_of(std::array<std::size_t, 3>{0, d, 0})] = b[d];
        return from_amplitudes(pipeline_layout(), amps).state;
    }

    int n_;
    SpectralDecomposition decomposition_;
    UnitaryGate hadamard_;
    UnitaryGate hadamard_dag_;
    UnitaryGate controlled_u_;
    UnitaryGate controlled_u_dag_;
    StateVector initial_;
    StateVector estimated_;
    StateVector oracle_;
    std::vector<int> digits_;
};

inline RunResult run(const SLEProblem& problem, const PipelineConfig& config) {
    return Pipeline(problem, config.n).run(config);
}

enum class RotationAxis { r1, r2, r3 };

inline const char* to_string(RotationAxis a) {
    switch (a) {
        case RotationAxis::r1: return "r1";
        case RotationAxis::r2: return "r2";
        case RotationAxis::r3: return "r3";
    }
    return "?";
}

struct AxisSpec {
    RotationAxis axis;
    double min;
    double max;
    std::size_t points;
};

struct ScanSpec {
    std::array<AxisSpec, 2> axes;
    double fixed_value = 0.0;  // value of the remaining parameter
    RotationForm form = RotationForm::form_two;
    int n = 2;
    unsigned threads = 1;

    RotationAxis fixed_axis() const {
        for (auto a : {RotationAxis::r1, RotationAxis::r2, RotationAxis::r3})
            if (a != axes[0].axis && a != axes[1].axis) return a;
        return RotationAxis::r3;
    }

    void validate() const {
        if (axes[0].axis == axes[1].axis) throw invalid_input("scan: the two axes must differ");
        for (const auto& a : axes) {
            if (a.points < 2) throw invalid_input("scan: each axis needs at least 2 points");
            if (!(a.min < a.max)) throw invalid_input("scan: axis range needs min < max");
        }
        if (threads == 0) throw invalid_input("scan: threads must be >= 1");
    }
};

struct ScanGrid {
    std::array<RotationAxis, 2> axes;
    std::array<std::vector<double>, 2> values;
    std::vector<std::vector<double>> fidelity;  // [axis-0 index][axis-1 index]
    std::size_t best_row = 0;
    std::size_t best_col = 0;
    double best_fidelity = 0.0;
    std::size_t impossible_points = 0;  // post-selection failed, recorded as 0
};

inline std::vector<double> axis_values(const AxisSpec& a) {
    std::vector<double> v(a.points);
    const double step = (a.max - a.min) / static_cast<double>(a.points - 1);
    for (std::size_t i = 0; i < a.points; ++i) v[i] = a.min + step * static_cast<double>(i);
    v.back() = a.max;
    return v;
}

inline RotationParams params_at(const ScanSpec& spec, double v0, double v1) {
    std::array<double, 3> r{};
    r[static_cast<std::size_t>(spec.axes[0].axis)] = v0;
    r[static_cast<std::size_t>(spec.axes[1].axis)] = v1;
    r[static_cast<std::size_t>(spec.fixed_axis())] = spec.fixed_value;
    return {r[0], r[1], r[2], spec.form};
}

/// Oracle fidelity over a 2-D grid of rotation parameters. Rows may be split
/// across threads; every cell is written by index, so the result does not
/// depend on scheduling.
inline ScanGrid scan(const SLEProblem& problem, const ScanSpec& spec) {
    spec.validate();
    const Pipeline pipeline(problem, spec.n);

    ScanGrid grid;
    grid.axes = {spec.axes[0].axis, spec.axes[1].axis};
    grid.values = {axis_values(spec.axes[0]), axis_values(spec.axes[1])};
    const std::size_t rows = grid.values[0].size();
    const std::size_t cols = grid.values[1].size();
    grid.fidelity.assign(rows, std::vector<double>(cols, 0.0));
    std::vector<std::vector<char>> failed(rows, std::vector<char>(cols, 0));

    auto do_rows = [&](std::size_t first, std::size_t stride) {
        for (std::size_t i = first; i < rows; i += stride) {
            for (std::size_t j = 0; j < cols; ++j) {
                const auto p = params_at(spec, grid.values[0][i], grid.values[1][j]);
                try {
                    grid.fidelity[i][j] = *pipeline.evaluate(digit_select_rotations(p)).oracle_fidelity;
                } catch (const postselection_impossible&) {
                    grid.fidelity[i][j] = 0.0;
                    failed[i][j] = 1;
                }
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(spec.threads, rows);
    if (workers <= 1) {
        do_rows(0, 1);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (std::size_t t = 0; t < workers; ++t) {
                pool.emplace_back([&, t] {
                    try {
                        do_rows(t, workers);
                    } catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    grid.best_fidelity = -1.0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            grid.impossible_points += failed[i][j] ? 1 : 0;
            if (grid.fidelity[i][j] > grid.best_fidelity) {
                grid.best_fidelity = grid.fidelity[i][j];
                grid.best_row = i;
                grid.best_col = j;
            }
        }
    return grid;
}

}  // namespace qutrit_sle
