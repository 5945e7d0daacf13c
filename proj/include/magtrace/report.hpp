#pragma once

#include <string>
#include <utility>
#include <vector>

#include "magtrace/config.hpp"

namespace mag {

struct ReportRow {
    std::string name;
    bool pass = true;
    double measured = 0.0;
    double tol = 0.0;
    std::string cmp = "<=";
    std::string note;
};

// One pipeline run: report document plus files to persist (relative path ->
// content). The orchestrator (CLI) is the only writer of output files.
struct RunReport {
    json doc;
    std::vector<std::pair<std::string, std::string>> files;
    bool all_pass = true;
};

RunReport run_gauge(const RunConfig& cfg);
RunReport run_expand(const RunConfig& cfg);
RunReport run_coeffs(const RunConfig& cfg);
RunReport run_hscheck(const RunConfig& cfg);
RunReport run_trace(const RunConfig& cfg);
RunReport run_verify(const RunConfig& cfg);
RunReport run_full(const RunConfig& cfg);

std::string format_row(const ReportRow& row);

}  // namespace mag
