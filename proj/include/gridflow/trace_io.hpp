#pragma once

#include <ostream>
#include <string>

#include "gridflow/engine.hpp"

namespace gridflow {

// Columns: t, f, lambda_1..n_g, ref_1..n_g, act_1..n_g, flow_1..m_l,
// est_flow_1..m_l, of_1..m_l, mode, cost. Floats printed with 9
// significant digits so equal runs diff byte-identically.
void write_trace_csv(const Trace& trace, std::ostream& out,
                     std::size_t downsample = 1);
void write_trace_csv_file(const Trace& trace, const std::string& path,
                          std::size_t downsample = 1);

// Summary statistics derived from the trace alone, as a JSON object:
// final cost, max line-flow violation, final multiplier spread, RMS
// frequency deviation, per-mode step counts, mean step wall time.
std::string summarize(const Trace& trace, const Scenario& sc);

}  // namespace gridflow
