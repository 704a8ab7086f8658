#include "wienermc/report.hpp"

#include <fstream>

#include <fmt/format.h>

namespace wmc {

using nlohmann::json;

namespace {

Verdict verdict_from_string(const std::string& s)
{
    for (Verdict v : {Verdict::Convergent, Verdict::Divergent, Verdict::Marginal}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

} // namespace

ReportFormat report_format_from_string(const std::string& name)
{
    if (name == "csv") {
        return ReportFormat::Csv;
    }
    if (name == "json") {
        return ReportFormat::Json;
    }
    throw std::invalid_argument("format must be 'csv' or 'json', got '" + name + "'");
}

std::string report_to_csv(const ExperimentReport& report)
{
    std::string out = "algorithm,iterations,error_norm,multiplications,wall_ms\n";
    for (const ReportRow& row : report.rows) {
        out += fmt::format("{},{},{:.17g},{},{:.17g}\n", row.algorithm, row.iterations,
                           row.error_norm, row.multiplications, row.wall_ms);
    }
    return out;
}

json to_json(const PrecheckReport& r)
{
    return {{"gershgorin_center", r.gershgorin_center},
            {"gershgorin_radius", r.gershgorin_radius},
            {"spectral_radius_F", r.spectral_radius_F},
            {"spectral_converged", r.spectral_converged},
            {"eigen_interval_ok", r.eigen_interval_ok},
            {"margin", r.margin},
            {"verdict", to_string(r.verdict)}};
}

PrecheckReport precheck_from_json(const json& j)
{
    PrecheckReport r;
    r.gershgorin_center = j.at("gershgorin_center").get<double>();
    r.gershgorin_radius = j.at("gershgorin_radius").get<double>();
    r.spectral_radius_F = j.at("spectral_radius_F").get<double>();
    r.spectral_converged = j.at("spectral_converged").get<bool>();
    r.eigen_interval_ok = j.at("eigen_interval_ok").get<bool>();
    r.margin = j.at("margin").get<double>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    return r;
}

json report_to_json(const ExperimentReport& report)
{
    json rows = json::array();
    for (const ReportRow& row : report.rows) {
        rows.push_back({{"algorithm", row.algorithm},
                        {"iterations", row.iterations},
                        {"error_norm", row.error_norm},
                        {"multiplications", row.multiplications},
                        {"wall_ms", row.wall_ms}});
    }
    const ReportMetadata& m = report.metadata;
    json meta{{"config", m.config},
              {"precheck", m.precheck ? to_json(*m.precheck) : json(nullptr)},
              {"tool_version", m.tool_version},
              {"forced", m.forced}};
    return {{"rows", std::move(rows)}, {"metadata", std::move(meta)}};
}

ExperimentReport report_from_json(const json& j)
{
    ExperimentReport report;
    for (const json& row : j.at("rows")) {
        report.rows.push_back({row.at("algorithm").get<std::string>(),
                               row.at("iterations").get<std::size_t>(),
                               row.at("error_norm").get<double>(),
                               row.at("multiplications").get<std::uint64_t>(),
                               row.at("wall_ms").get<double>()});
    }
    const json& meta = j.at("metadata");
    report.metadata.config = meta.at("config");
    if (!meta.at("precheck").is_null()) {
        report.metadata.precheck = precheck_from_json(meta.at("precheck"));
    }
    report.metadata.tool_version = meta.at("tool_version").get<std::string>();
    report.metadata.forced = meta.at("forced").get<bool>();
    return report;
}

std::string walk_study_to_csv(const std::vector<WalkStudyRow>& rows)
{
    std::string out = "walks,mean_abs_error,mean_stderr\n";
    for (const WalkStudyRow& row : rows) {
        out += fmt::format("{},{:.17g},{:.17g}\n", row.walks, row.mean_abs_error,
                           row.mean_stderr);
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("error while writing '" + path.string() + "'");
    }
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::filesystem::path& path)
{
    if (format == ReportFormat::Csv) {
        write_text(path, report_to_csv(report));
    } else {
        write_text(path, report_to_json(report).dump(2) + "\n");
    }
}

} // namespace wmc
