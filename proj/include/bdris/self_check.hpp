// SPDX-License-Identifier: Apache-2.0
//
// Numerical self-test of the scattering optimizer on random instances:
// finite-difference gradient, minorizer tangency and lower bound, unitarity
// along geodesic chains, and Takagi round trips.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bdris::check {

struct GradcheckOptions {
    std::uint64_t seed = 1;
    std::vector<int> sizes{2, 4, 8};  // RIS element counts
    int instances = 50;               // per check, spread over sizes
    int lower_bound_samples = 20;
    double fd_step = 1e-6;
    bool flip_gradient_sign = false;  // fault injection
};

struct CheckResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    double max_error = 0.0;
    double tolerance = 0.0;

    bool passed() const { return failures == 0; }
};

struct GradcheckReport {
    std::vector<CheckResult> checks;

    bool passed() const;
    /// Fixed-format text, identical for identical options.
    std::string text() const;
};

GradcheckReport run_gradcheck(const GradcheckOptions& options);

}  // namespace bdris::check
