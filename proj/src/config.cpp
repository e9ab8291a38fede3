// SPDX-License-Identifier: Apache-2.0
#include "bdris/config.hpp"

#include "bdris/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace bdris {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string_view::npos ? s.size() : comma;
        std::string item = trim(s.substr(start, end - start));
        if (!item.empty()) {
            out.push_back(std::move(item));
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
    }
}

long long to_integer(const std::string& key, const std::string& text) {
    long long v = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("config: '" + key + "' expects an integer, got '" + text + "'");
    }
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("config: '" + key + "' expects an unsigned integer, got '" + text + "'");
    }
    return v;
}

int to_int(const std::string& key, const std::string& text) {
    const long long v = to_integer(key, text);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw ConfigError("config: '" + key + "' is out of range");
    }
    return static_cast<int>(v);
}

Eigen::Vector3d to_vec3(const std::string& key, const std::string& text) {
    const auto parts = split_list(text);
    if (parts.size() != 3) {
        throw ConfigError("config: '" + key + "' expects x, y, z");
    }
    return {to_double(key, parts[0]), to_double(key, parts[1]), to_double(key, parts[2])};
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& p : split_list(text)) {
        out.push_back(to_double(key, p));
    }
    return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& text) {
    std::vector<int> out;
    for (const auto& p : split_list(text)) {
        out.push_back(to_int(key, p));
    }
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"scenario.tx_pos", [](auto& c, auto& k, auto& v) { c.scenario.tx_pos = to_vec3(k, v); }},
        {"scenario.rx_pos", [](auto& c, auto& k, auto& v) { c.scenario.rx_pos = to_vec3(k, v); }},
        {"scenario.ris_pos", [](auto& c, auto& k, auto& v) { c.scenario.ris_pos = to_vec3(k, v); }},
        {"scenario.n_t", [](auto& c, auto& k, auto& v) { c.scenario.n_t = to_int(k, v); }},
        {"scenario.n_r", [](auto& c, auto& k, auto& v) { c.scenario.n_r = to_int(k, v); }},
        {"scenario.m", [](auto& c, auto& k, auto& v) { c.scenario.m = to_int(k, v); }},
        {"scenario.carrier_hz", [](auto& c, auto& k, auto& v) { c.scenario.carrier_hz = to_double(k, v); }},
        {"scenario.bandwidth_hz", [](auto& c, auto& k, auto& v) { c.scenario.bandwidth_hz = to_double(k, v); }},
        {"scenario.pl0_db", [](auto& c, auto& k, auto& v) { c.scenario.pl0_db = to_double(k, v); }},
        {"scenario.alpha_direct", [](auto& c, auto& k, auto& v) { c.scenario.alpha_direct = to_double(k, v); }},
        {"scenario.alpha_ris", [](auto& c, auto& k, auto& v) { c.scenario.alpha_ris = to_double(k, v); }},
        {"scenario.rice_factor", [](auto& c, auto& k, auto& v) { c.scenario.rice_factor = to_double(k, v); }},
        {"scenario.tx_power_mw", [](auto& c, auto& k, auto& v) { c.scenario.tx_power_mw = to_double(k, v); }},
        {"scenario.tx_power_dbm",
         [](auto& c, auto& k, auto& v) { c.scenario.tx_power_mw = channel::dbm_to_mw(to_double(k, v)); }},
        {"scenario.noise_psd_dbm_per_hz",
         [](auto& c, auto& k, auto& v) { c.scenario.noise_psd_dbm_per_hz = to_double(k, v); }},
        {"sweep.ris_x", [](auto& c, auto& k, auto& v) { c.ris_x = to_doubles(k, v); }},
        {"sweep.m_elements", [](auto& c, auto& k, auto& v) { c.m_elements = to_ints(k, v); }},
        {"sweep.tx_power_dbm", [](auto& c, auto& k, auto& v) { c.tx_power_dbm = to_doubles(k, v); }},
        {"run.trials", [](auto& c, auto& k, auto& v) { c.trials = to_int(k, v); }},
        {"run.base_seed", [](auto& c, auto& k, auto& v) { c.base_seed = to_u64(k, v); }},
        {"run.methods",
         [](auto& c, auto&, auto& v) {
             try {
                 c.methods = parse_methods(v);
             } catch (const ContractViolation& e) {
                 throw ConfigError(std::string("config: ") + e.what());
             }
         }},
        {"run.init",
         [](auto& c, auto&, auto& v) {
             try {
                 c.init = opt::parse_init_strategy(v);
             } catch (const ContractViolation& e) {
                 throw ConfigError(std::string("config: ") + e.what());
             }
         }},
        {"optimizer.step_init", [](auto& c, auto& k, auto& v) { c.optimizer.step_init = to_double(k, v); }},
        {"optimizer.step_grow", [](auto& c, auto& k, auto& v) { c.optimizer.step_grow = to_double(k, v); }},
        {"optimizer.step_shrink", [](auto& c, auto& k, auto& v) { c.optimizer.step_shrink = to_double(k, v); }},
        {"optimizer.max_backtracks", [](auto& c, auto& k, auto& v) { c.optimizer.max_backtracks = to_int(k, v); }},
        {"optimizer.eps_capacity", [](auto& c, auto& k, auto& v) { c.optimizer.eps_capacity = to_double(k, v); }},
        {"optimizer.eps_surrogate",
         [](auto& c, auto& k, auto& v) { c.optimizer.eps_surrogate = to_double(k, v); }},
        {"optimizer.max_outer", [](auto& c, auto& k, auto& v) { c.optimizer.max_outer = to_int(k, v); }},
        {"optimizer.max_mm", [](auto& c, auto& k, auto& v) { c.optimizer.max_mm = to_int(k, v); }},
        {"optimizer.max_inner", [](auto& c, auto& k, auto& v) { c.optimizer.max_inner = to_int(k, v); }},
        {"optimizer.reunitarize_every",
         [](auto& c, auto& k, auto& v) { c.optimizer.reunitarize_every = to_int(k, v); }},
    };
    return table;
}

}  // namespace

std::string_view to_string(Method m) {
    switch (m) {
        case Method::bdris: return "bdris";
        case Method::diag_ris: return "diag_ris";
        case Method::low_complexity: return "low_complexity";
        case Method::random_diag: return "random_diag";
        case Method::no_ris: return "no_ris";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    for (Method m : kAllMethods) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw ContractViolation("unknown method '" + std::string(name) + "'");
}

std::vector<Method> parse_methods(std::string_view list) {
    std::vector<Method> picked;
    for (const auto& name : split_list(list)) {
        picked.push_back(parse_method(name));
    }
    if (picked.empty()) {
        throw ContractViolation("method list is empty");
    }
    std::vector<Method> out;
    for (Method m : kAllMethods) {
        if (std::find(picked.begin(), picked.end(), m) != picked.end()) {
            out.push_back(m);
        }
    }
    return out;
}

void ExperimentConfig::validate() const {
    if (ris_x.empty() || m_elements.empty() || tx_power_dbm.empty()) {
        throw ConfigError("config: sweep lists must be nonempty");
    }
    if (trials < 1) {
        throw ConfigError("config: trials must be >= 1");
    }
    if (methods.empty()) {
        throw ConfigError("config: no methods selected");
    }
    for (int m : m_elements) {
        if (m < 1) {
            throw ConfigError("config: m_elements entries must be >= 1");
        }
    }
    try {
        scenario.validate();
        optimizer.validate();
    } catch (const ContractViolation& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ExperimentConfig desk_profile() {
    return ExperimentConfig{};
}

ExperimentConfig paper_profile() {
    ExperimentConfig c;
    c.scenario.n_t = 4;
    c.scenario.n_r = 4;
    c.scenario.m = 100;
    c.trials = 100;
    c.ris_x = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    c.m_elements = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    c.tx_power_dbm = {4, 8, 12, 16, 20, 24, 28, 30};
    return c;
}

ExperimentConfig profile_by_name(std::string_view name) {
    if (name == "desk") {
        return desk_profile();
    }
    if (name == "paper") {
        return paper_profile();
    }
    throw ConfigError("unknown profile '" + std::string(name) + "'");
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("config: cannot read '" + path + "': " + e.message());
    }
    const auto& table = setters();
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError("config: key '" + section + "' is outside any section");
        }
        for (const auto& [key, node] : body) {
            const std::string full = section + "." + key;
            const auto it = table.find(full);
            if (it == table.end()) {
                throw ConfigError("config: unknown key '" + full + "' in " + path);
            }
            it->second(base, full, trim(node.data()));
        }
    }
    base.validate();
    return base;
}

}  // namespace bdris
