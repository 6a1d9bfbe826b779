#include "gridflow/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gridflow {

using nlohmann::json;

PlantParams Scenario::plant_params() const {
    PlantParams p;
    p.f0 = f0;
    p.inertia = inertia;
    p.damping = damping;
    p.tau = tau;
    p.load_sigma = load_sigma;
    return p;
}

Scenario load_scenario(const std::string& json_text,
                       const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario JSON parse error: ") + e.what());
    }

    Scenario sc;
    try {
        if (doc.contains("case")) {
            sc.network = load_case(doc.at("case").dump());
        } else if (doc.contains("case_path")) {
            auto p = std::filesystem::path(base_dir) /
                     doc.at("case_path").get<std::string>();
            sc.network = load_case_file(p.string());
        } else {
            throw ConfigError("scenario needs either \"case\" or \"case_path\"");
        }

        sc.tau = doc.value("tau", sc.tau);
        sc.duration_s = doc.value("duration_s", sc.duration_s);
        sc.seed = doc.value("seed", sc.seed);
        sc.f0 = doc.value("f0", sc.f0);
        sc.inertia = doc.value("inertia", sc.inertia);
        sc.damping = doc.value("damping", sc.damping);
        sc.kp = doc.value("kp", sc.kp);
        sc.ki = doc.value("ki", sc.ki);
        sc.kfp = doc.value("kfp", sc.kfp);
        sc.kfi = doc.value("kfi", sc.kfi);
        sc.rho = doc.value("rho", sc.rho);
        sc.meter_sigma = doc.value("meter_sigma", sc.meter_sigma);
        sc.load_sigma = doc.value("load_sigma", sc.load_sigma);
        sc.ar_window = doc.value("ar_window", sc.ar_window);
        sc.ar_refit = doc.value("ar_refit", sc.ar_refit);
        sc.lambda0 = doc.value("lambda0", sc.lambda0);
        sc.constraint_enabled = doc.value("constraint_enabled", true);
        sc.penalty_enabled = doc.value("penalty_enabled", true);
        sc.drop_prob = doc.value("drop_prob", sc.drop_prob);
        sc.delay_steps = doc.value("delay_steps", sc.delay_steps);
        if (doc.contains("line_limits")) {
            for (const auto& [k, v] : doc.at("line_limits").items()) {
                sc.line_limits[std::stoi(k)] = v.get<double>();
            }
        }
        if (doc.contains("attachments")) {
            for (const auto& [k, v] : doc.at("attachments").items()) {
                sc.attachments[std::stoi(k)] = v.get<int>();
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario schema violation: ") + e.what());
    }

    if (sc.tau <= 0) throw ConfigError("tau must be positive");
    if (sc.duration_s < 0) throw ConfigError("duration_s must be nonnegative");
    if (sc.rho <= 0) throw ConfigError("rho must be positive");
    if (sc.inertia <= 0) throw ConfigError("inertia must be positive");
    if (sc.drop_prob < 0 || sc.drop_prob > 1) {
        throw ConfigError("drop_prob must be in [0, 1]");
    }
    if (sc.delay_steps < 0) throw ConfigError("delay_steps must be nonnegative");
    for (const auto& [u, lim] : sc.line_limits) {
        if (u < 1 || static_cast<std::size_t>(u) > sc.network.n_lines()) {
            throw ConfigError("line_limits: no line " + std::to_string(u));
        }
        if (lim <= 0) throw ConfigError("line_limits: limit must be positive");
        sc.network.lines[static_cast<std::size_t>(u - 1)].limit = lim;
    }
    for (const auto& [gbus, mbus] : sc.attachments) {
        sc.network.bus_index(gbus);
        sc.network.bus_index(mbus);
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str(),
                         std::filesystem::path(path).parent_path().string());
}

}  // namespace gridflow
