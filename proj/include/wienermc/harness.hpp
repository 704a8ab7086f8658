#ifndef WIENERMC_HARNESS_HPP
#define WIENERMC_HARNESS_HPP

/** @file
 * Experiment orchestration: system-identification runs comparing the
 * random-walk solver against the adaptive baselines over an iteration ladder,
 * and walk-count studies of the Monte Carlo error.
 *
 * For the adaptive filters an iteration is one sample update. For the
 * random-walk solver an iteration is one walk per unknown, so ladder point t
 * runs solve() with t (times walks_multiplier) walks.
 */

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wienermc/baselines.hpp"
#include "wienermc/corrmath.hpp"
#include "wienermc/mcsolve.hpp"
#include "wienermc/sigmodel.hpp"

namespace wmc {

/// Thrown for malformed or semantically invalid configuration files.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CorrelationSource { Exact, Empirical };

struct AlgorithmSpec {
    Algorithm algorithm = Algorithm::Lms;
    std::map<std::string, double> params;
};

struct McmcSettings {
    ProbabilityScheme scheme;
    std::size_t walks_multiplier = 1;
    std::size_t max_steps = kDefaultMaxSteps;
    bool force = false;
};

struct ExperimentConfig {
    RealVector plant_h;
    InputModel input_model;
    std::vector<AlgorithmSpec> algorithms;
    std::vector<std::size_t> iteration_ladder{2, 4, 8, 16, 32, 64};
    McmcSettings mcmc;
    std::uint64_t seed = 0;
    CorrelationSource correlation_source = CorrelationSource::Exact;
    /// samples used to estimate R and b in Empirical mode
    std::size_t empirical_samples = 0;
    /// length of the baseline sample stream; defaults to the last ladder point
    std::optional<std::size_t> stream_length;

    /// Throws ConfigError on an invalid combination.
    void validate() const;
};

/// Strict parse: unknown or missing required fields are ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ReportRow {
    std::string algorithm;
    std::size_t iterations = 0;
    /// ||h - w||_2
    double error_norm = 0.0;
    std::uint64_t multiplications = 0;
    double wall_ms = 0.0;

    bool operator==(const ReportRow&) const = default;
};

struct ReportMetadata {
    nlohmann::json config;
    std::optional<PrecheckReport> precheck;
    std::string tool_version;
    /// the random-walk solver ran on a DIVERGENT system under force
    bool forced = false;

    bool operator==(const ReportMetadata&) const = default;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    ReportMetadata metadata;

    bool operator==(const ExperimentReport&) const = default;
};

/**
 * Runs every configured algorithm over the ladder. Rows are ordered by the
 * algorithm's position in the config, then by iteration count.
 *
 * Throws DivergentSystemError when MCMC is requested on a DIVERGENT system
 * without mcmc.force, and ConfigError when the ladder exceeds the stream.
 */
ExperimentReport run_identification(const ExperimentConfig& config);

struct WalkStudyRow {
    std::size_t walks = 0;
    /// |w_hat - w| averaged over seeds and components
    double mean_abs_error = 0.0;
    double mean_stderr = 0.0;
};

std::vector<WalkStudyRow> run_walk_study(const CorrelationMatrix& r, std::span<const double> b,
                                         ProbabilityScheme scheme,
                                         const std::vector<std::size_t>& walk_ladder,
                                         const std::vector<std::uint64_t>& seeds,
                                         const WalkOptions& options = {});

struct WalkStudyConfig {
    std::vector<double> r;
    RealVector b;
    ProbabilityScheme scheme;
    std::vector<std::size_t> walk_ladder;
    std::vector<std::uint64_t> seeds;
    std::size_t max_steps = kDefaultMaxSteps;
};

WalkStudyConfig walk_study_config_from_json(const nlohmann::json& j);
WalkStudyConfig load_walk_study_config(const std::filesystem::path& path);

ProbabilityScheme scheme_from_string(const std::string& name, double absorb);
std::string to_string(SchemeKind kind);

} // namespace wmc

#endif // WIENERMC_HARNESS_HPP
