#pragma once

// Invariant battery behind `dshell verify`: special-function identities,
// transfer-matrix algebra, shell conditions at every found root, ODE
// residuals of the analytic solutions, and the spectral symmetries.

#include <cstdint>
#include <string>
#include <vector>

#include "dshell/dirac.hpp"

namespace dshell::verify {

struct InvariantResult {
    std::string name;
    double worst = 0.0;  // worst measured error (inf when a count mismatched)
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct Case {
    Channel channel;
    ShellParams params;
};

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    int group_law_pairs = 100;
    int ode_grid_points = 1000;
};

/// (M = 1) x r0 in {0.5, 1, 2} x a in {0.3, 0.5, 0.7, 1.1} x j in
/// {+-1/2, +-3/2, 5/2}.
std::vector<Case> default_cases();

InvariantResult check_wronskian();
InvariantResult check_recurrences();
InvariantResult check_bridge();
InvariantResult check_transfer_orthogonality();
InvariantResult check_group_law(const VerifyOptions& opt);
InvariantResult check_norm_preservation(const VerifyOptions& opt);
/// Norm continuity at r0, relative. 1e-10.
InvariantResult check_norm_continuity(const std::vector<Case>& cases);
/// theta+ - theta- = -a (mod pi) at r0. 1e-9.
InvariantResult check_phase_jump(const std::vector<Case>& cases);
/// Five-point finite-difference residual of both radial equations on
/// 1000-point inner and outer grids kept 1e-3 r0 away from the shell.
InvariantResult check_ode_residual(const std::vector<Case>& cases, const VerifyOptions& opt);
/// E(-j, a) = -E(j, a) taken literally. 1e-10.
InvariantResult check_spectral_reflection(const std::vector<Case>& cases);
/// E(-j, a) = -E(j, -a): the reflection with the shell sign flipped. 1e-10.
InvariantResult check_charge_conjugation(const std::vector<Case>& cases);
/// E(sM, r0/s, a) = s E(M, r0, a) for s in {0.5, 2, 10}. 1e-9 relative to sM.
InvariantResult check_scale_covariance(const std::vector<Case>& cases);

/// Everything above, in that order.
std::vector<InvariantResult> run_all(const VerifyOptions& opt = {});

}  // namespace dshell::verify
