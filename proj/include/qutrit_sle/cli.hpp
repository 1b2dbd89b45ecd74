// cli.hpp
// Command-line front end: oracle, solve, scan and digits subcommands.
//
// Exit codes: 0 success, 2 usage/validation, 3 singular matrix,
// 4 post-selection impossible, 5 no discriminating digit (or a clock-digit
// collision under ideal rotations).

#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qutrit_sle/errors.hpp"
#include "qutrit_sle/grid_io.hpp"
#include "qutrit_sle/hhl_pipeline.hpp"
#include "qutrit_sle/problem_file.hpp"
#include "qutrit_sle/spectral.hpp"

namespace qutrit_sle::cli {

enum exit_code : int {
    success = 0,
    internal_error = 1,
    usage_error = 2,
    singular = 3,
    postselection_failed = 4,
    no_discriminating_digit = 5,
};

/// Default ternary snap tolerance for eigenvalues computed from a file.
inline constexpr double default_digit_tolerance = 1e-4;

class usage : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

using qutrit_sle::detail::fixed;

inline std::string format_complex(complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f %c %.6fi", z.real(), z.imag() < 0 ? '-' : '+',
                  std::abs(z.imag()));
    return buf;
}

inline std::string digit_string(double x, int count, double tol) {
    if (!(x >= 0.0 && x < 1.0)) return "n/a (outside [0,1))";
    std::string s = "0.";
    for (int d : ternary_digits(x, count, tol)) s += static_cast<char>('0' + d);
    return s;
}

inline void print_vector(std::ostream& out, const char* name, std::span<const complex> v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        out << "  " << name << '[' << i << "] = " << format_complex(v[i]) << '\n';
}

inline RotationAxis parse_axis(const std::string& s) {
    if (s == "r1") return RotationAxis::r1;
    if (s == "r2") return RotationAxis::r2;
    if (s == "r3") return RotationAxis::r3;
    throw usage("unknown rotation parameter '" + s + "' (expected r1, r2 or r3)");
}

inline double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw usage("malformed " + what + " '" + s + "'");
}

struct ScanFlags {
    std::string axes = "r1,r2";
    std::string fixed;
    std::string range = "-1:1";
    std::size_t points = 81;
};

inline ScanSpec build_scan_spec(const ScanFlags& f, RotationForm form, int n, unsigned threads) {
    const auto comma = f.axes.find(',');
    if (comma == std::string::npos || f.axes.find(',', comma + 1) != std::string::npos) {
        throw usage("--axes needs exactly two parameters, e.g. r1,r2");
    }
    const RotationAxis a0 = parse_axis(f.axes.substr(0, comma));
    const RotationAxis a1 = parse_axis(f.axes.substr(comma + 1));
    if (a0 == a1) throw usage("--axes names the same parameter twice");

    const auto colon = f.range.find(':');
    if (colon == std::string::npos) throw usage("--range must look like min:max");
    const double lo = parse_number(f.range.substr(0, colon), "range minimum");
    const double hi = parse_number(f.range.substr(colon + 1), "range maximum");
    if (!(lo < hi)) throw usage("--range needs min < max");
    if (f.points < 2) throw usage("--points must be >= 2");

    ScanSpec spec{{AxisSpec{a0, lo, hi, f.points}, AxisSpec{a1, lo, hi, f.points}}, 0.0, form, n,
                  threads};
    if (!f.fixed.empty()) {
        const auto eq = f.fixed.find('=');
        if (eq == std::string::npos) throw usage("--fixed must look like r3=0");
        const RotationAxis fa = parse_axis(f.fixed.substr(0, eq));
        if (fa != spec.fixed_axis()) {
            throw usage("--fixed names " + f.fixed.substr(0, eq) + " but the remaining parameter is " +
                        to_string(spec.fixed_axis()));
        }
        spec.fixed_value = parse_number(f.fixed.substr(eq + 1), "fixed value");
    }
    return spec;
}

inline int report(std::ostream& err, const std::exception& e, int code) {
    err << "error: " << e.what() << '\n';
    return code;
}

}  // namespace detail

inline int cmd_oracle(const std::string& path, double digit_tol, std::ostream& out) {
    const SLEProblem problem = load_problem(path);
    const Eigensystem eig = eigh(problem.a());
    const cvector x = classical_solution(problem);
    out << "solution (A^-1 b normalized):\n";
    detail::print_vector(out, "x", x);
    out << "eigenvalues:\n";
    for (std::size_t j = 0; j < eig.eigenvalues.size(); ++j) {
        out << "  lambda[" << j << "] = " << detail::fixed(eig.eigenvalues[j], 6)
            << "  ternary " << detail::digit_string(eig.eigenvalues[j], 6, digit_tol) << '\n';
    }
    return success;
}

struct SolveFlags {
    int n = 2;
    std::string semantics;
    std::optional<int> form;
    std::optional<double> r1, r2, r3;
    std::optional<double> l1, l2, l3;
    std::optional<double> c;
    bool intermediate = false;
};

inline PipelineConfig build_solve_config(const SolveFlags& f) {
    Semantics sem = Semantics::digit_select_form_two;
    if (f.semantics.empty()) {
        if (f.c) sem = Semantics::ideal;
        if (f.form) sem = *f.form == 1 ? Semantics::digit_select_form_one : Semantics::digit_select_form_two;
    } else if (f.semantics == "ideal") {
        sem = Semantics::ideal;
    } else if (f.semantics == "form1") {
        sem = Semantics::digit_select_form_one;
    } else if (f.semantics == "form2") {
        sem = Semantics::digit_select_form_two;
    } else {
        throw usage("--semantics must be ideal, form1 or form2");
    }
    if (f.form) {
        if (*f.form != 1 && *f.form != 2) throw usage("--form must be 1 or 2");
        const Semantics implied =
            *f.form == 1 ? Semantics::digit_select_form_one : Semantics::digit_select_form_two;
        if (sem != implied) throw usage("--form conflicts with --semantics");
    }

    const bool any_r = f.r1 || f.r2 || f.r3;
    const bool any_l = f.l1 || f.l2 || f.l3;
    PipelineConfig cfg;
    cfg.n = f.n;
    cfg.semantics = sem;
    cfg.report_intermediate_states = f.intermediate;
    if (sem == Semantics::ideal) {
        if (any_r || any_l) throw usage("--r*/--l* values conflict with --semantics ideal");
        if (!f.c) throw usage("--semantics ideal requires --c");
        cfg.c = *f.c;
        return cfg;
    }
    if (f.c) throw usage("--c only applies to --semantics ideal");
    if (any_r && any_l) throw usage("give either --r1/--r2/--r3 or --l1/--l2/--l3, not both");
    const RotationForm form =
        sem == Semantics::digit_select_form_one ? RotationForm::form_one : RotationForm::form_two;
    if (any_l) {
        if (!(f.l1 && f.l2 && f.l3)) throw usage("--l1, --l2 and --l3 must be given together");
        cfg.params = RotationParams::from_l(*f.l1, *f.l2, *f.l3, form);
    } else {
        cfg.params = {f.r1.value_or(0.0), f.r2.value_or(0.0), f.r3.value_or(0.0), form};
    }
    return cfg;
}

inline void print_state(std::ostream& out, const char* title, const StateVector& s) {
    out << title << ":\n";
    const auto& layout = s.layout();
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        if (std::abs(s.amplitude(i)) < 1e-12) continue;
        out << "  |";
        for (std::size_t w = 0; w < layout.wire_count(); ++w) out << layout.digit(i, w);
        out << "> " << detail::format_complex(s.amplitude(i)) << '\n';
    }
}

inline int cmd_solve(const std::string& path, const SolveFlags& flags, std::ostream& out) {
    const PipelineConfig cfg = build_solve_config(flags);
    const SLEProblem problem = load_problem(path);
    const RunResult r = run(problem, cfg);

    out << "semantics: " << to_string(cfg.semantics) << "  n: " << cfg.n << '\n';
    if (cfg.semantics == Semantics::ideal) {
        out << "C: " << detail::fixed(cfg.c, 6) << '\n';
    } else {
        out << "r: " << detail::fixed(cfg.params.r1, 6) << ' ' << detail::fixed(cfg.params.r2, 6)
            << ' ' << detail::fixed(cfg.params.r3, 6) << '\n';
    }
    out << "clock digits:";
    for (int d : r.clock_digits) out << ' ' << d;
    out << (r.digit_collision ? "  (collision)" : "") << '\n';
    out << "solution state (data wire):\n";
    detail::print_vector(out, "x", r.solution_state.amplitudes());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", r.clock_residual);
    out << "success probability: " << detail::fixed(r.success_probability, 9) << '\n'
        << "clock residual: " << buf << '\n'
        << "oracle fidelity: " << detail::fixed(*r.oracle_fidelity, 9) << '\n';
    if (r.intermediate) {
        print_state(out, "after phase estimation", r.intermediate->after_estimation);
        print_state(out, "after rotation", r.intermediate->after_rotation);
        print_state(out, "after uncompute", r.intermediate->after_uncompute);
    }
    return success;
}

inline int cmd_scan(const std::string& path, const detail::ScanFlags& flags, RotationForm form, int n,
                    unsigned threads, const std::string& csv_path, const std::string& svg_path,
                    std::ostream& out) {
    const ScanSpec spec = detail::build_scan_spec(flags, form, n, threads);
    const SLEProblem problem = load_problem(path);
    const ScanGrid grid = scan(problem, spec);

    std::ofstream csv(csv_path);
    if (!csv) throw usage("cannot write '" + csv_path + "'");
    write_grid_csv(csv, grid);
    if (!svg_path.empty()) {
        std::ofstream svg(svg_path);
        if (!svg) throw usage("cannot write '" + svg_path + "'");
        write_grid_svg(svg, grid);
    }

    out << "grid: " << grid.values[0].size() << " x " << grid.values[1].size() << " ("
        << to_string(grid.axes[0]) << ", " << to_string(grid.axes[1]) << "), "
        << to_string(spec.fixed_axis()) << " = " << detail::fixed(spec.fixed_value, 6) << '\n'
        << "best point: " << to_string(grid.axes[0]) << " = "
        << detail::fixed(grid.values[0][grid.best_row], 6) << ", " << to_string(grid.axes[1])
        << " = " << detail::fixed(grid.values[1][grid.best_col], 6) << '\n'
        << "best fidelity: " << detail::fixed(grid.best_fidelity, 9) << '\n';
    if (grid.impossible_points > 0) {
        out << "post-selection impossible at " << grid.impossible_points << " points (recorded as 0)\n";
    }
    out << "wrote " << csv_path << (svg_path.empty() ? "" : " and " + svg_path) << '\n';
    return success;
}

inline int cmd_digits(const std::string& path, int max_digits, double digit_tol, std::ostream& out) {
    const SLEProblem problem = load_problem(path);
    const Eigensystem eig = eigh(problem.a());
    for (double l : eig.eigenvalues) {
        if (!(l >= 0.0 && l < 1.0)) {
            throw invalid_input("eigenvalue " + detail::fixed(l, 6) +
                                " is outside [0, 1); ternary digit analysis needs 0 <= lambda < 1");
        }
    }
    out << "eigenvalue  ternary\n";
    for (double l : eig.eigenvalues)
        out << detail::fixed(l, 6) << "    " << detail::digit_string(l, max_digits, digit_tol) << '\n';
    const int n = discriminating_position(eig.eigenvalues, max_digits, digit_tol);
    out << "suggested n: " << n << '\n';
    return success;
}

/// Parses argv and dispatches. Never throws; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Qutrit circuit solver for 3x3 Hermitian linear systems", "qutrit_sle"};
    app.require_subcommand(1);

    double digit_tol = default_digit_tolerance;

    std::string oracle_path;
    auto* oracle = app.add_subcommand("oracle", "Classical reference solution and eigenvalues");
    oracle->add_option("problem", oracle_path, "Problem file (JSON)")->required();
    oracle->add_option("--digit-tol", digit_tol, "Ternary snap tolerance for eigenvalues");

    std::string solve_path;
    SolveFlags solve_flags;
    auto* solve = app.add_subcommand("solve", "Run the qutrit circuit once");
    solve->add_option("problem", solve_path, "Problem file (JSON)")->required();
    solve->add_option("--n", solve_flags.n, "Ternary digit position read by phase estimation")
        ->capture_default_str();
    solve->add_option("--semantics", solve_flags.semantics, "ideal | form1 | form2");
    solve->add_option("--form", solve_flags.form, "Rotation form 1 or 2 (digit-select semantics)");
    solve->add_option("--r1", solve_flags.r1, "Rotation parameter r1");
    solve->add_option("--r2", solve_flags.r2, "Rotation parameter r2");
    solve->add_option("--r3", solve_flags.r3, "Rotation parameter r3");
    solve->add_option("--l1", solve_flags.l1, "l1 in [-1,1]; r1 = -2 arccos(l1)");
    solve->add_option("--l2", solve_flags.l2, "l2 in [-1,1]; r2 = -2 arccos(l2)");
    solve->add_option("--l3", solve_flags.l3, "l3 in [-1,1]; r3 = -2 arccos(l3)");
    solve->add_option("--c", solve_flags.c, "Constant C for ideal rotations (C <= min eigenvalue)");
    solve->add_flag("--intermediate", solve_flags.intermediate, "Print the 27-amplitude states");

    std::string scan_path, csv_path, svg_path, scan_semantics;
    detail::ScanFlags scan_flags;
    int scan_n = 2;
    std::optional<int> scan_form;
    unsigned threads = 1;
    auto* scan_cmd = app.add_subcommand("scan", "Fidelity over a 2-D grid of rotation parameters");
    scan_cmd->add_option("problem", scan_path, "Problem file (JSON)")->required();
    scan_cmd->add_option("--axes", scan_flags.axes, "Two scanned parameters")->capture_default_str();
    scan_cmd->add_option("--fixed", scan_flags.fixed, "Value of the third parameter, e.g. r3=0");
    scan_cmd->add_option("--range", scan_flags.range, "Axis range min:max")->capture_default_str();
    scan_cmd->add_option("--points", scan_flags.points, "Points per axis")->capture_default_str();
    scan_cmd->add_option("--out", csv_path, "CSV output path")->required();
    scan_cmd->add_option("--svg", svg_path, "Optional SVG heatmap path");
    scan_cmd->add_option("--n", scan_n, "Ternary digit position")->capture_default_str();
    scan_cmd->add_option("--semantics", scan_semantics, "form1 | form2 (default form2)");
    scan_cmd->add_option("--form", scan_form, "Rotation form 1 or 2");
    scan_cmd->add_option("--threads", threads, "Worker threads")->capture_default_str();

    std::string digits_path;
    int max_digits = 6;
    auto* digits = app.add_subcommand("digits", "Ternary expansion of eigenvalues and suggested n");
    digits->add_option("problem", digits_path, "Problem file (JSON)")->required();
    digits->add_option("--max-digits", max_digits, "Digits to examine")->capture_default_str();
    digits->add_option("--digit-tol", digit_tol, "Ternary snap tolerance for eigenvalues");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return usage_error;
    }

    try {
        if (oracle->parsed()) return cmd_oracle(oracle_path, digit_tol, out);
        if (solve->parsed()) return cmd_solve(solve_path, solve_flags, out);
        if (scan_cmd->parsed()) {
            RotationForm form = RotationForm::form_two;
            if (!scan_semantics.empty()) {
                if (scan_semantics == "form1") form = RotationForm::form_one;
                else if (scan_semantics != "form2") throw usage("scan --semantics must be form1 or form2");
            }
            if (scan_form) {
                if (*scan_form != 1 && *scan_form != 2) throw usage("--form must be 1 or 2");
                const RotationForm implied = *scan_form == 1 ? RotationForm::form_one : RotationForm::form_two;
                if (!scan_semantics.empty() && implied != form) throw usage("--form conflicts with --semantics");
                form = implied;
            }
            if (threads == 0) throw usage("--threads must be >= 1");
            return cmd_scan(scan_path, scan_flags, form, scan_n, threads, csv_path, svg_path, out);
        }
        if (digits->parsed()) return cmd_digits(digits_path, max_digits, digit_tol, out);
    } catch (const usage& e) {
        return detail::report(err, e, usage_error);
    } catch (const singular_matrix& e) {
        return detail::report(err, e, singular);
    } catch (const postselection_impossible& e) {
        return detail::report(err, e, postselection_failed);
    } catch (const digit_collision& e) {
        return detail::report(err, e, no_discriminating_digit);
    } catch (const invalid_input& e) {
        return detail::report(err, e, usage_error);
    } catch (const std::exception& e) {
        return detail::report(err, e, internal_error);
    }
    return usage_error;
}

}  // namespace qutrit_sle::cli
