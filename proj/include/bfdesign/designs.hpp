// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "bfdesign/cone.hpp"
#include "bfdesign/geometry.hpp"
#include "bfdesign/reduced.hpp"
#include "bfdesign/sampling.hpp"
#include "bfdesign/solver.hpp"

namespace bfd {

// How coefficient-tying constraints are realized in the program.
enum class TyingImpl {
    by_default,         // symmetry: equality rows; linear phase: reduced vars
    equality_rows,      // tie with explicit equalities in the full space
    reduced_variables,  // tie by solving in the reduced parameterization
};

struct ConvexDesignSpec {
    ArrayGeometry geometry;
    BandSpec bands;
    int filter_length = 20;
    double stopband_ceiling = 0.5;   // linear
    double wng_floor = 1.0;          // linear, applied at every frequency
    double tau_d = 0.0;              // samples
    double lambda = 0.0;             // coefficient-norm regularization weight
    bool symmetry = false;           // coefficient mirror across array center
    bool linear_phase = false;       // coefficient reversal tying
    int grid_freq = 200;
    int grid_angle = 200;
    TyingImpl tying = TyingImpl::by_default;

    void validate() const;
};

struct DesignResult {
    FilterBank bank;
    double j_sol = std::numeric_limits<double>::quiet_NaN();
    SolveOutcome outcome;
    // feasibility self-check on the design grid
    double stopband_peak = std::numeric_limits<double>::quiet_NaN();
    double min_constraint_wng = std::numeric_limits<double>::quiet_NaN();
    // Smallest achievable sup-norm violation of the pinned steering-direction
    // rows (design C): zero when they are exactly representable.
    double pinned_row_residual = 0.0;
    // program size bookkeeping
    int cone_rows = 0;
    int equality_rows = 0;
};

// Desired passband response samples: exp(-j omega tau_d) for the passband
// points of `grid`, in grid order.
Eigen::VectorXcd build_desired_passband(const SampleSet& grid, double tau_d);

// Minimax passband-error design: minimize the worst passband deviation from a
// linear-phase target subject to a stopband ceiling and a WNG floor at every
// sampled frequency; optionally coefficient-symmetric or exactly linear-phase.
// A positive lambda adds a coefficient-norm term to the objective (the
// reported j_sol always excludes it).
DesignResult design_v1(const ConvexDesignSpec& spec,
                       const SolverOptions& solver = {});

// Competing design: same objective, but the robustness constraint caps
// ||A(omega) x||_2 directly and the steering-direction response is pinned to
// the target by hard equalities at every sampled frequency.
DesignResult design_c(const ConvexDesignSpec& spec,
                      const SolverOptions& solver = {});

// Program assembly without solving (conic debug dumps).
enum class DesignKind { v1, c };
ConeProgram build_design_program(const ConvexDesignSpec& spec, DesignKind kind);

}  // namespace bfd
