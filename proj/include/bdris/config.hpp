// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration. Files are flat INI: `key = value` lines grouped
// under [scenario], [sweep], [run] and [optimizer] headers; vectors and lists
// are comma separated. Unknown sections or keys are rejected.
#pragma once

#include "bdris/bdris_opt.hpp"
#include "bdris/channel.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bdris {

enum class Method { bdris, diag_ris, low_complexity, random_diag, no_ris };

inline constexpr Method kAllMethods[] = {Method::bdris, Method::diag_ris, Method::low_complexity,
                                         Method::random_diag, Method::no_ris};

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

/// Parses "a,b,c"; the result is deduplicated and put in canonical order
/// (bdris, diag_ris, low_complexity, random_diag, no_ris).
std::vector<Method> parse_methods(std::string_view list);

struct ExperimentConfig {
    Scenario scenario;
    std::vector<double> ris_x{10.0, 30.0, 50.0, 70.0, 90.0};
    std::vector<int> m_elements{4, 8, 16};
    std::vector<double> tx_power_dbm{4.0, 20.0, 30.0};
    int trials = 20;
    std::uint64_t base_seed = 1;
    std::vector<Method> methods{kAllMethods, kAllMethods + 5};
    opt::InitStrategy init = opt::InitStrategy::best;
    opt::OptimizerConfig optimizer;

    /// Throws ConfigError on empty sweeps, trials < 1 or an invalid scenario.
    void validate() const;
};

/// 2x2 MIMO, m = 16, 20 trials.
ExperimentConfig desk_profile();
/// 4x4 MIMO, m = 100, 100 trials, full position / element / power grids.
ExperimentConfig paper_profile();
ExperimentConfig profile_by_name(std::string_view name);

/// Overlays the keys found in an INI file onto `base`. Throws ConfigError.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = desk_profile());

}  // namespace bdris
