#ifndef WIENERMC_REPORT_HPP
#define WIENERMC_REPORT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wienermc/harness.hpp"

namespace wmc {

enum class ReportFormat { Csv, Json };

ReportFormat report_format_from_string(const std::string& name);

/// Header `algorithm,iterations,error_norm,multiplications,wall_ms`, one line per row,
/// floats at 17 significant digits.
std::string report_to_csv(const ExperimentReport& report);

nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PrecheckReport& report);
PrecheckReport precheck_from_json(const nlohmann::json& j);

std::string walk_study_to_csv(const std::vector<WalkStudyRow>& rows);

/// Writes @p text to @p path; IoError names the path on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path);

} // namespace wmc

#endif // WIENERMC_REPORT_HPP
