#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wvres/cli/config.hpp"

namespace wvres::cli {

/// Outcome of one acceptance check. `value` is the measured quantity and
/// `threshold` the bound it must respect; `detail` is deterministic text,
/// `seconds` the wall time (reported on the console only).
struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
    double seconds = 0.0;
};

CheckResult check_free_cap(const ValidationTolerances& tol);
CheckResult check_hermitian_limit(const ValidationTolerances& tol);
CheckResult check_essential_curve(const ValidationTolerances& tol);
CheckResult check_region_identity(const ValidationTolerances& tol);
CheckResult check_symbol_disjoint(const ValidationTolerances& tol);
CheckResult check_jost_agreement(const ValidationTolerances& tol);
CheckResult check_viscosity_limit(const ValidationTolerances& tol);
CheckResult check_theta_robustness(const ValidationTolerances& tol);
CheckResult check_projector_rank(const ValidationTolerances& tol);
CheckResult check_determinism(const ValidationTolerances& tol);

/// All checks in order; `on_result` is called as each one finishes.
std::vector<CheckResult> run_acceptance(const ValidationTolerances& tol,
                                        const std::function<void(const CheckResult&)>& on_result = {});

/// One console line: "[PASS]  3 essential curve: ..." .
std::string format_check(const CheckResult& r);

}  // namespace wvres::cli
