#include "gridflow/network.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gridflow {

using nlohmann::json;

double Load::mw_at(double t) const {
    if (schedule.empty()) return 0.0;
    if (t <= schedule.front().first) return schedule.front().second;
    if (t >= schedule.back().first) return schedule.back().second;
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        if (t <= schedule[i].first) {
            const auto& [t0, p0] = schedule[i - 1];
            const auto& [t1, p1] = schedule[i];
            if (t1 == t0) return p1;
            return p0 + (p1 - p0) * (t - t0) / (t1 - t0);
        }
    }
    return schedule.back().second;
}

int NetworkCase::bus_index(int bus_id) const {
    auto it = std::find(buses.begin(), buses.end(), bus_id);
    if (it == buses.end()) {
        throw CaseError("unknown bus id " + std::to_string(bus_id));
    }
    return static_cast<int>(it - buses.begin());
}

namespace {

// Union-find connectivity over bus ids.
bool connected(const std::vector<int>& buses,
               const std::vector<std::pair<int, int>>& edges) {
    if (buses.size() <= 1) return true;
    std::map<int, int> parent;
    for (int b : buses) parent[b] = b;
    std::function<int(int)> find = [&](int b) {
        while (parent[b] != b) b = parent[b] = parent[parent[b]];
        return b;
    };
    for (const auto& [a, b] : edges) {
        if (parent.count(a) && parent.count(b)) parent[find(a)] = find(b);
    }
    int root = find(buses.front());
    return std::all_of(buses.begin(), buses.end(),
                       [&](int b) { return find(b) == root; });
}

std::vector<std::pair<int, int>> parse_edge_list(const json& arr,
                                                 const char* name) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2) {
            throw CaseError(std::string("comm.") + name +
                            ": each edge must be a [int,int] pair");
        }
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return edges;
}

}  // namespace

NetworkCase load_case(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw CaseError(std::string("case JSON parse error: ") + e.what());
    }

    NetworkCase nc;
    try {
        nc.base_mva = doc.at("base_mva").get<double>();
        nc.buses = doc.at("buses").get<std::vector<int>>();
        for (const auto& l : doc.at("lines")) {
            Line line;
            line.from = l.at("from").get<int>();
            line.to = l.at("to").get<int>();
            line.x = l.at("x").get<double>();
            line.limit = l.at("limit").get<double>();
            nc.lines.push_back(line);
        }
        for (const auto& g : doc.at("generators")) {
            Generator gen;
            gen.bus = g.at("bus").get<int>();
            gen.alpha = g.at("alpha").get<double>();
            gen.beta = g.at("beta").get<double>();
            gen.gamma = g.at("gamma").get<double>();
            gen.pmin = g.at("pmin").get<double>();
            gen.pmax = g.at("pmax").get<double>();
            gen.lag_s = g.value("lag_s", 0.5);
            nc.generators.push_back(gen);
        }
        for (const auto& l : doc.at("loads")) {
            Load load;
            load.bus = l.at("bus").get<int>();
            for (const auto& pt : l.at("schedule")) {
                if (!pt.is_array() || pt.size() != 2) {
                    throw CaseError("load schedule entries must be [t_s, mw]");
                }
                load.schedule.emplace_back(pt[0].get<double>(),
                                           pt[1].get<double>());
            }
            nc.loads.push_back(load);
        }
        const auto& comm = doc.at("comm");
        nc.comm_controllers = parse_edge_list(comm.at("controllers"), "controllers");
        nc.comm_meters = parse_edge_list(comm.at("meters"), "meters");
    } catch (const json::exception& e) {
        throw CaseError(std::string("case schema violation: ") + e.what());
    }

    if (nc.base_mva <= 0) throw CaseError("base_mva must be positive");
    if (nc.buses.empty()) throw CaseError("case has no buses");
    {
        std::set<int> seen(nc.buses.begin(), nc.buses.end());
        if (seen.size() != nc.buses.size()) {
            throw CaseError("duplicate bus id in bus list");
        }
    }

    std::vector<std::pair<int, int>> power_edges;
    for (std::size_t u = 0; u < nc.lines.size(); ++u) {
        const Line& l = nc.lines[u];
        nc.bus_index(l.from);
        nc.bus_index(l.to);
        if (l.x <= 0) {
            throw CaseError("line " + std::to_string(u + 1) + " (" +
                            std::to_string(l.from) + "-" + std::to_string(l.to) +
                            "): reactance must be positive");
        }
        if (l.limit <= 0) {
            throw CaseError("line " + std::to_string(u + 1) + " (" +
                            std::to_string(l.from) + "-" + std::to_string(l.to) +
                            "): flow limit must be positive");
        }
        power_edges.emplace_back(l.from, l.to);
    }
    if (!connected(nc.buses, power_edges)) {
        throw CaseError("power graph is not connected");
    }

    std::set<int> gen_buses;
    for (const Generator& g : nc.generators) {
        nc.bus_index(g.bus);
        if (!gen_buses.insert(g.bus).second) {
            throw CaseError("bus " + std::to_string(g.bus) +
                            " hosts more than one generator");
        }
        if (g.gamma <= 0) {
            throw CaseError("generator at bus " + std::to_string(g.bus) +
                            ": gamma must be positive");
        }
        if (g.pmin > g.pmax) {
            throw CaseError("generator at bus " + std::to_string(g.bus) +
                            ": pmin exceeds pmax");
        }
        if (g.lag_s <= 0) {
            throw CaseError("generator at bus " + std::to_string(g.bus) +
                            ": lag_s must be positive");
        }
    }
    for (const Load& l : nc.loads) nc.bus_index(l.bus);

    std::vector<int> ctrl_buses(gen_buses.begin(), gen_buses.end());
    if (!ctrl_buses.empty() && !connected(ctrl_buses, nc.comm_controllers)) {
        throw CaseError("controller comm graph is not connected");
    }
    if (!connected(nc.buses, nc.comm_meters)) {
        throw CaseError("meter comm graph is not connected");
    }
    return nc;
}

NetworkCase load_case_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CaseError("cannot open case file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_case(buf.str());
}

}  // namespace gridflow
