#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gridflow {

struct CaseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Line {
    int from = 0;  // bus id
    int to = 0;
    double x = 0.0;        // reactance, p.u.
    double limit = 0.0;    // |flow| limit, p.u.
};

struct Generator {
    int bus = 0;
    double alpha = 0.0;    // $
    double beta = 0.0;     // $/MWh
    double gamma = 0.0;    // $/MWh^2
    double pmin = 0.0;     // MW
    double pmax = 0.0;     // MW
    double lag_s = 0.5;    // first-order response time constant
};

// Piecewise schedule of (time s, MW); linear ramps between breakpoints,
// held constant outside the first/last breakpoint.
struct Load {
    int bus = 0;
    std::vector<std::pair<double, double>> schedule;

    double mw_at(double t) const;
};

struct NetworkCase {
    double base_mva = 100.0;
    std::vector<int> buses;  // bus 1-equivalent reference is buses[0]
    std::vector<Line> lines;
    std::vector<Generator> generators;
    std::vector<Load> loads;
    std::vector<std::pair<int, int>> comm_controllers;  // generator bus ids
    std::vector<std::pair<int, int>> comm_meters;       // bus ids

    int bus_index(int bus_id) const;  // position in `buses`, throws if absent

    std::size_t n_buses() const { return buses.size(); }
    std::size_t n_lines() const { return lines.size(); }
    std::size_t n_gens() const { return generators.size(); }
};

// Parse and validate a JSON case document. Checks connectivity of the
// power graph and both comm graphs, positive reactances and limits,
// generator limit ordering, and one-generator-per-bus.
NetworkCase load_case(const std::string& json_text);
NetworkCase load_case_file(const std::string& path);

}  // namespace gridflow
