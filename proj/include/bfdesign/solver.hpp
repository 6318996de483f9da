// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "bfdesign/cone.hpp"

namespace bfd {

struct SolverOptions {
    double tol = 1e-8;  // feasibility and relative-gap tolerance
    // An infeasibility claim requires a Farkas certificate at this residual;
    // problems that are feasible up to ~1e-8 noise still solve to optimality.
    double tol_infeasible = 1e-9;
    int max_iterations = 100;
    int refinement_rounds = 2;
    bool verbose = false;
};

// Primal-dual interior-point solve of the conic program on the homogeneous
// self-dual embedding, with Nesterov-Todd scaling and a Mehrotra
// predictor-corrector. Numerical trouble surfaces as a status, never as a
// silently wrong answer.
SolveOutcome solve(const ConeProgram& prog, const SolverOptions& opts);
SolveOutcome solve(const ConeProgram& prog, double tol = 1e-8);

}  // namespace bfd
