#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ekwave/evolution.hpp"
#include "ekwave/moment.hpp"
#include "ekwave/profile.hpp"

namespace ekwave::io {

// %.17g: lossless round-trip for doubles, stable across runs
std::string fmt(double x);

void write_profile_csv(const std::string& path, const profile& p);
void write_moment_curve_csv(const std::string& path, const std::vector<moment_report>& rows);
void write_diagnostics_csv(const std::string& path, const std::vector<diagnostics_row>& rows);
void write_snapshot_csv(const std::string& path, const field_snapshot& s);

nlohmann::ordered_json report_to_json(const moment_report& r);
nlohmann::ordered_json model_to_json(const model& m);
nlohmann::ordered_json summary_to_json(const experiment_result& r,
                                       const experiment_config& cfg);

void write_json(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace ekwave::io
