// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance            run all
//   acceptance --only N   run criterion N

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qutrit_sle/cli.hpp"
#include "qutrit_sle/qutrit_sle.hpp"
#include "../test_support.hpp"

using namespace qutrit_sle;
using namespace qutrit_sle::testing;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// best wall time of `reps` calls, in milliseconds
template <class F>
double best_ms(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

Outcome eigenvalue_reproduction() {
    const auto p = reference_problem();
    Eigensystem e;
    const double ms = best_ms(20, [&] { e = eigh(p.a()); });
    const double expect[] = {1.0 / 3.0, 4.0 / 9.0, 5.0 / 9.0};
    double worst = 0.0;
    for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(e.eigenvalues[j] - expect[j]));
    const double trace_gap =
        std::abs(e.eigenvalues[0] + e.eigenvalues[1] + e.eigenvalues[2] - p.a().matrix().trace().real());
    const bool ok = worst <= 1e-4 && trace_gap <= 1e-10 && ms < 1.0;
    return {ok, "lambda = (" + fmt("%.8f", e.eigenvalues[0]) + ", " + fmt("%.8f", e.eigenvalues[1]) + ", " +
                    fmt("%.8f", e.eigenvalues[2]) + "), max dev " + fmt("%.2e", worst) + ", trace gap " +
                    fmt("%.2e", trace_gap) + ", " + fmt("%.4f", ms) + " ms"};
}

Outcome digit_analysis() {
    const auto e = eigh(reference_problem().a());
    const double tol = cli::default_digit_tolerance;
    const std::vector<std::vector<int>> expect{{1, 0}, {1, 1}, {1, 2}};
    bool ok = true;
    std::string digits;
    for (std::size_t j = 0; j < 3; ++j) {
        const auto d = ternary_digits(e.eigenvalues[j], 2, tol);
        ok = ok && d == expect[j];
        digits += (j ? " " : "") + std::string("0.") + char('0' + d[0]) + char('0' + d[1]);
    }
    const int n = discriminating_position(e.eigenvalues, 6, tol);
    const std::vector<double> worked{25.0 / 27.0, 8.0 / 9.0, 26.0 / 27.0};
    const int n3 = discriminating_position(worked, 6);
    ok = ok && n == 2 && n3 == 3;
    return {ok, "digits " + digits + ", n = " + std::to_string(n) + ", worked example n = " + std::to_string(n3)};
}

Outcome oracle_vs_reference() {
    const double f = vector_fidelity(classical_solution(reference_problem()), reference_solution());
    return {f >= 0.98 && f <= 1.0, "fidelity " + fmt("%.14f", f)};
}

PipelineConfig ideal_config(double c) {
    PipelineConfig cfg;
    cfg.semantics = Semantics::ideal;
    cfg.c = c;
    return cfg;
}

Outcome ideal_exactness() {
    const auto p = reference_problem();
    std::optional<RunResult> res;
    const double ms = best_ms(10, [&] { res = run(p, ideal_config(1.0 / 3.0)); });
    const RunResult& r = *res;
    const double analytic = analytic_success_probability(decompose(p), 1.0 / 3.0);
    const double gap = std::abs(r.success_probability - analytic);
    const bool ok = *r.oracle_fidelity >= 0.999 && r.clock_residual < 1e-10 && gap <= 1e-10 && ms < 10.0;

    // same eigenvectors, eigenvalues exactly 1/3, 4/9, 5/9
    const auto q = exact_digit_reference_problem();
    const auto rq = run(q, ideal_config(1.0 / 3.0));
    const double gap_q = std::abs(rq.success_probability - analytic_success_probability(decompose(q), 1.0 / 3.0));

    return {ok, "fidelity " + fmt("%.12f", *r.oracle_fidelity) + ", clock residual " + fmt("%.3e", r.clock_residual) +
                    ", |P - P_analytic| " + fmt("%.3e", gap) + ", " + fmt("%.3f", ms) + " ms" +
                    " | exact-eigenvalue variant: residual " + fmt("%.3e", rq.clock_residual) + ", |P - P_analytic| " +
                    fmt("%.3e", gap_q) + ", fidelity " + fmt("%.12f", *rq.oracle_fidelity)};
}

Outcome scan_reproduction() {
    const auto p = reference_problem();
    ScanSpec spec;
    spec.axes = {AxisSpec{RotationAxis::r1, -1.0, 1.0, 81}, AxisSpec{RotationAxis::r2, -1.0, 1.0, 81}};
    spec.fixed_value = 0.0;
    spec.form = RotationForm::form_two;
    spec.threads = 1;
    ScanGrid grid;
    const double ms = best_ms(1, [&] { grid = scan(p, spec); });

    PipelineConfig cfg;
    cfg.semantics = Semantics::digit_select_form_two;
    cfg.params = {-1.0, 1.0, 0.25, RotationForm::form_two};
    const double quoted = *run(p, cfg).oracle_fidelity;

    const bool ok = grid.best_fidelity >= 0.98 && quoted >= 0.95 && quoted <= 1.0 && ms < 30000.0;

    // characterization: the other slice and a coarse cube search
    ScanSpec other = spec;
    other.axes = {AxisSpec{RotationAxis::r1, -1.0, 1.0, 81}, AxisSpec{RotationAxis::r3, -1.0, 1.0, 81}};
    other.fixed_value = -0.25;
    const ScanGrid g2 = scan(p, other);
    const Pipeline pl(p, 2);
    double cube_best = 0.0;
    std::array<double, 3> cube_at{};
    for (int i = 0; i <= 16; ++i)
        for (int j = 0; j <= 16; ++j)
            for (int k = 0; k <= 16; ++k) {
                const RotationParams rp{-1.0 + i / 8.0, -1.0 + j / 8.0, -1.0 + k / 8.0, RotationForm::form_two};
                try {
                    const double f = *pl.evaluate(digit_select_rotations(rp)).oracle_fidelity;
                    if (f > cube_best) {
                        cube_best = f;
                        cube_at = rp.values();
                    }
                } catch (const postselection_impossible&) {
                }
            }

    return {ok, "r3 = 0 grid max " + fmt("%.10f", grid.best_fidelity) + " at (r1, r2) = (" +
                    fmt("%.3f", grid.values[0][grid.best_row]) + ", " + fmt("%.3f", grid.values[1][grid.best_col]) +
                    "), fidelity at (-1, 1, 0.25) = " + fmt("%.10f", quoted) + ", " + fmt("%.0f", ms) +
                    " ms | r2 = -0.25 grid max " + fmt("%.10f", g2.best_fidelity) + " at (r1, r3) = (" +
                    fmt("%.3f", g2.values[0][g2.best_row]) + ", " + fmt("%.3f", g2.values[1][g2.best_col]) +
                    "), cube max " + fmt("%.6f", cube_best) + " at (" + fmt("%.3f", cube_at[0]) + ", " +
                    fmt("%.3f", cube_at[1]) + ", " + fmt("%.3f", cube_at[2]) + ")"};
}

Outcome randomized_exact_digits() {
    std::mt19937_64 rng(20240601);
    std::normal_distribution<double> g;
    double worst = 1.0;
    int failures = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> ks;
        while (ks.size() < 3) {
            const int k = 1 + static_cast<int>(rng() % 8);
            bool fresh = true;
            for (int o : ks) fresh = fresh && (o % 3 != k % 3);
            if (fresh) ks.push_back(k);
        }
        std::vector<double> lambdas;
        for (int k : ks) lambdas.push_back(k / 9.0);
        const cmatrix a = hermitian_with_spectrum(random_unitary(rng, 3), lambdas);
        const SLEProblem p(HermitianMatrix(a),
                           cvector{complex(g(rng), g(rng)), complex(g(rng), g(rng)), complex(g(rng), g(rng))});
        const double c = *std::min_element(lambdas.begin(), lambdas.end());
        const double f = *run(p, ideal_config(c)).oracle_fidelity;
        worst = std::min(worst, f);
        if (!(f >= 1.0 - 1e-9)) ++failures;
    }
    return {failures == 0, "200 instances, worst fidelity " + fmt("%.15f", worst) + ", failures " +
                               std::to_string(failures)};
}

Outcome unitarity_suite() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-2.0 * pi, 2.0 * pi);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double worst = unitarity_defect(qutrit_hadamard().matrix());
    double worst_group = 0.0;
    auto track = [&](const UnitaryGate& u) { worst = std::max(worst, unitarity_defect(u.matrix())); };
    const GellMannLabel labels[] = {GellMannLabel::theta2, GellMannLabel::theta5, GellMannLabel::theta7};
    for (int i = 0; i < 1000; ++i) {
        for (auto l : labels) {
            const auto gm = gell_mann(l);
            const double a = angle(rng), b = angle(rng);
            track(exp_generator(gm, a));
            const cmatrix lhs = (exp_generator(gm, a) * exp_generator(gm, b)).matrix();
            worst_group = std::max(worst_group, max_abs_diff(lhs, exp_generator(gm, a + b).matrix()));
        }
        const RotationParams p1{angle(rng), angle(rng), angle(rng), RotationForm::form_one};
        const RotationParams p2{angle(rng), angle(rng), angle(rng), RotationForm::form_two};
        track(rotation_gate(p1));
        track(rotation_gate(p2));
        for (const auto& f : rotation_factors(p1)) track(f);
        track(rotation_gate(RotationParams::from_l(unit(rng), unit(rng), unit(rng), RotationForm::form_one)));

        const HermitianMatrix h(random_hermitian(rng, 3));
        track(exp_hermitian(h, angle(rng)));
        const auto u = phase_unitary(h, 1 + static_cast<int>(rng() % 4));
        track(u);
        track(adjoint(u));
        track(controlled_power(u, 3));
        track(controlled_select(rotation_factors(p2), 3));
        track(controlled_select(ideal_rotations({std::asin(unit(rng)), std::asin(unit(rng)), std::asin(unit(rng))}), 3));
    }
    return {worst < 1e-10 && worst_group <= 1e-12,
            "max ||UU^H - I|| " + fmt("%.2e", worst) + ", group law max dev " + fmt("%.2e", worst_group)};
}

Outcome kronecker_equivalence() {
    const auto p = reference_problem();
    const auto& layout = pipeline_layout();
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g;

    const auto cu = controlled_power(phase_unitary(p.a(), 2), 3);
    const auto sel = controlled_select(rotation_factors({-1.0, 1.0, 0.25, RotationForm::form_one}), 3);
    const auto sel_ideal = controlled_select(ideal_rotations(ideal_rotation_angles(decompose(p), 1.0 / 3.0, 2)), 3);
    const Eigen::MatrixXcd i3 = eye(3);
    const Eigen::MatrixXcd p_swap = kron(i3, swap_gate(3));  // (c,d,a) <-> (c,a,d)

    double worst = 0.0;
    auto compare = [&](const UnitaryGate& gate, std::initializer_list<std::size_t> wires, const Eigen::MatrixXcd& full) {
        for (int trial = 0; trial < 20; ++trial) {
            cvector v(27);
            for (auto& x : v) x = complex(g(rng), g(rng));
            const auto s = from_amplitudes(layout, v).state;
            const auto out = apply_unitary(s, gate, wires);
            const Eigen::VectorXcd ref = full * to_eigen(s.amplitudes());
            for (std::size_t k = 0; k < 27; ++k)
                worst = std::max(worst, std::abs(out.amplitude(k) - ref(static_cast<Eigen::Index>(k))));
        }
    };

    compare(cu, {clock_wire, data_wire}, kron(to_eigen(cu.matrix()), i3));
    compare(adjoint(cu), {clock_wire, data_wire}, kron(to_eigen(adjoint(cu).matrix()), i3));
    compare(sel, {clock_wire, ancilla_wire}, p_swap * kron(to_eigen(sel.matrix()), i3) * p_swap);
    compare(sel_ideal, {clock_wire, ancilla_wire}, p_swap * kron(to_eigen(sel_ideal.matrix()), i3) * p_swap);

    // explicit sum_c |c><c| (x) I (x) R_c
    const auto factors = rotation_factors({0.3, -0.8, 1.4, RotationForm::form_two});
    Eigen::MatrixXcd explicit_sel = Eigen::MatrixXcd::Zero(27, 27);
    for (int c = 0; c < 3; ++c) {
        Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(3, 3);
        proj(c, c) = 1.0;
        explicit_sel += kron(kron(proj, i3), to_eigen(factors[static_cast<std::size_t>(c)].matrix()));
    }
    compare(controlled_select(factors, 3), {clock_wire, ancilla_wire}, explicit_sel);
    // reversed wire order: target named first
    const Eigen::MatrixXcd swap_cd = kron(swap_gate(3), i3);
    compare(cu, {data_wire, clock_wire}, swap_cd * kron(to_eigen(cu.matrix()), i3) * swap_cd);

    // whole circuit as one dense product
    const Eigen::MatrixXcd h = kron(kron(to_eigen(qutrit_hadamard().matrix()), i3), i3);
    const Eigen::MatrixXcd hd = h.adjoint();
    const Eigen::MatrixXcd cu_full = kron(to_eigen(cu.matrix()), i3);
    const Eigen::MatrixXcd sel_full = p_swap * kron(to_eigen(sel_ideal.matrix()), i3) * p_swap;
    const Eigen::MatrixXcd circuit = hd * cu_full.adjoint() * h * sel_full * hd * cu_full * h;
    const Pipeline pl(p, 2);
    PipelineConfig cfg = ideal_config(1.0 / 3.0);
    cfg.report_intermediate_states = true;
    const auto r = pl.run(cfg);
    const Eigen::VectorXcd dense = circuit * to_eigen(pl.initial_state().amplitudes());
    for (std::size_t k = 0; k < 27; ++k)
        worst = std::max(worst, std::abs(r.intermediate->after_uncompute.amplitude(k) - dense(static_cast<Eigen::Index>(k))));

    return {worst <= 1e-12, "max elementwise deviation " + fmt("%.2e", worst)};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 2;
        }
    }

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"eigenvalue reproduction", eigenvalue_reproduction},
        {"digit analysis", digit_analysis},
        {"oracle vs reference solution", oracle_vs_reference},
        {"ideal-semantics exactness", ideal_exactness},
        {"scan reproduction", scan_reproduction},
        {"randomized exact-digit suite", randomized_exact_digits},
        {"unitarity suite", unitarity_suite},
        {"brute-force Kronecker equivalence", kronecker_equivalence},
    };
    if (only < 0 || only > static_cast<int>(criteria.size())) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<int>(i) + 1 != only) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("[%s] C%zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    }
    return failed == 0 ? 0 : 1;
}
