// qutrit_sle.hpp
// Umbrella header for the library (the CLI layer lives in cli.hpp).

#pragma once

#include "qutrit_sle/dense.hpp"
#include "qutrit_sle/errors.hpp"
#include "qutrit_sle/grid_io.hpp"
#include "qutrit_sle/hhl_pipeline.hpp"
#include "qutrit_sle/problem_file.hpp"
#include "qutrit_sle/qudit_state.hpp"
#include "qutrit_sle/qutrit_gates.hpp"
#include "qutrit_sle/spectral.hpp"
#include "qutrit_sle/unitary_gate.hpp"
