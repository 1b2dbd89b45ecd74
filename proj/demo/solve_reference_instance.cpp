// Solves the shipped 3x3 instance with ideal rotations, then looks for good
// form-two rotation parameters with a coarse 3-D search.

#include <cstdio>

#include "qutrit_sle/qutrit_sle.hpp"

using namespace qutrit_sle;

int main(int argc, char** argv) {
    const char* path = argc > 1 ? argv[1] : "data/paper.json";
    const SLEProblem problem = load_problem(path);
    const Pipeline pipeline(problem, 2);

    const auto& d = pipeline.decomposition();
    std::printf("eigenvalues: %.6f %.6f %.6f\n", d.eigenvalues[0], d.eigenvalues[1], d.eigenvalues[2]);

    PipelineConfig ideal;
    ideal.semantics = Semantics::ideal;
    ideal.c = d.eigenvalues[0];
    const RunResult r = pipeline.run(ideal);
    std::printf("ideal rotations: fidelity %.9f, success probability %.6f\n", *r.oracle_fidelity,
                r.success_probability);

    double best = -1.0;
    RotationParams best_p{};
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j)
            for (int k = 0; k <= 20; ++k) {
                const RotationParams p{-1.0 + 0.1 * i, -1.0 + 0.1 * j, -1.0 + 0.1 * k,
                                       RotationForm::form_two};
                try {
                    const double f = *pipeline.evaluate(digit_select_rotations(p)).oracle_fidelity;
                    if (f > best) {
                        best = f;
                        best_p = p;
                    }
                } catch (const postselection_impossible&) {
                }
            }
    std::printf("best form-two point: r = (%.2f, %.2f, %.2f), fidelity %.6f\n", best_p.r1, best_p.r2,
                best_p.r3, best);
    return 0;
}
