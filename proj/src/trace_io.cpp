#include "gridflow/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace gridflow {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

void write_trace_csv(const Trace& trace, std::ostream& out,
                     std::size_t downsample) {
    if (downsample == 0) downsample = 1;
    const std::size_t ng = trace.records.empty() ? 0 : trace.records[0].lambda.size();
    const std::size_t ml = trace.records.empty() ? 0 : trace.records[0].flow.size();

    out << "t,f";
    for (std::size_t g = 1; g <= ng; ++g) out << ",lambda_" << g;
    for (std::size_t g = 1; g <= ng; ++g) out << ",ref_" << g;
    for (std::size_t g = 1; g <= ng; ++g) out << ",act_" << g;
    for (std::size_t u = 1; u <= ml; ++u) out << ",flow_" << u;
    for (std::size_t u = 1; u <= ml; ++u) out << ",est_flow_" << u;
    for (std::size_t u = 1; u <= ml; ++u) out << ",of_" << u;
    out << ",mode,cost\n";

    for (std::size_t k = 0; k < trace.records.size(); k += downsample) {
        const TraceRecord& r = trace.records[k];
        out << fmt(r.t) << ',' << fmt(r.f);
        for (double v : r.lambda) out << ',' << fmt(v);
        for (double v : r.ref_mw) out << ',' << fmt(v);
        for (double v : r.act_mw) out << ',' << fmt(v);
        for (double v : r.flow) out << ',' << fmt(v);
        for (double v : r.est_flow) out << ',' << fmt(v);
        for (int v : r.of) out << ',' << v;
        out << ',' << to_string(r.mode) << ',' << fmt(r.cost) << '\n';
    }
}

void write_trace_csv_file(const Trace& trace, const std::string& path,
                          std::size_t downsample) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace file: " + path);
    write_trace_csv(trace, out, downsample);
}

std::string summarize(const Trace& trace, const Scenario& sc) {
    nlohmann::json j;
    j["steps"] = trace.records.size();
    j["mean_step_seconds"] = trace.mean_step_seconds;
    if (trace.records.empty()) return j.dump(2);

    const TraceRecord& last = trace.records.back();
    j["final_cost_per_hour"] = last.cost;

    double max_violation = 0.0;
    for (const TraceRecord& r : trace.records) {
        for (std::size_t u = 0; u < r.flow.size(); ++u) {
            max_violation = std::max(
                max_violation,
                std::abs(r.flow[u]) - sc.network.lines[u].limit);
        }
    }
    j["max_violation_pu"] = max_violation;

    const auto [lmin, lmax] =
        std::minmax_element(last.lambda.begin(), last.lambda.end());
    j["final_lambda_spread"] = *lmax - *lmin;
    j["final_frequency"] = last.f;

    double sq = 0.0;
    for (const TraceRecord& r : trace.records) {
        sq += (r.f - sc.f0) * (r.f - sc.f0);
    }
    j["frequency_rms_dev"] = std::sqrt(sq / static_cast<double>(trace.records.size()));

    std::size_t n_normal = 0, n_correct = 0, n_penalty = 0;
    for (const TraceRecord& r : trace.records) {
        switch (r.mode) {
            case ConstraintMode::Normal: ++n_normal; break;
            case ConstraintMode::Correct: ++n_correct; break;
            case ConstraintMode::Penalty: ++n_penalty; break;
        }
    }
    j["mode_steps"] = {{"normal", n_normal},
                       {"correct", n_correct},
                       {"penalty", n_penalty}};
    return j.dump(2);
}

}  // namespace gridflow
