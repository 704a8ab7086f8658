#include "wienermc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "wienermc/report.hpp"
#include "wienermc/walk_stream.hpp"

namespace wmc {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where, const std::set<std::string>& allowed,
                    const std::set<std::string>& required)
{
    if (!j.is_object()) {
        throw ConfigError(where + ": expected a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(where + ": unknown field '" + key + "'");
        }
    }
    for (const auto& key : required) {
        if (!j.contains(key)) {
            throw ConfigError(where + ": missing field '" + key + "'");
        }
    }
}

template <class T>
T get_as(const json& j, const std::string& where)
{
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

std::size_t get_count(const json& j, const std::string& where)
{
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
        throw ConfigError(where + ": expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

bool is_seed(const json& j)
{
    return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

std::vector<std::size_t> get_counts(const json& j, const std::string& where)
{
    if (!j.is_array()) {
        throw ConfigError(where + ": expected an array");
    }
    std::vector<std::size_t> out;
    for (const auto& e : j) {
        out.push_back(get_count(e, where));
    }
    return out;
}

void require_increasing(const std::vector<std::size_t>& ladder, const std::string& where)
{
    if (ladder.empty()) {
        throw ConfigError(where + ": ladder is empty");
    }
    if (ladder.front() < 1) {
        throw ConfigError(where + ": ladder entries must be positive");
    }
    for (std::size_t k = 1; k < ladder.size(); ++k) {
        if (ladder[k] <= ladder[k - 1]) {
            throw ConfigError(where + ": ladder must be strictly increasing");
        }
    }
}

InputModel input_model_from_json(const json& j)
{
    require_object(j, "input_model", {"kind", "ar_coefficient", "variance"}, {"kind"});
    InputModel m;
    const auto kind = get_as<std::string>(j.at("kind"), "input_model.kind");
    if (kind == "IID") {
        m.kind = InputKind::Iid;
    } else if (kind == "AR1") {
        m.kind = InputKind::Ar1;
        if (!j.contains("ar_coefficient")) {
            throw ConfigError("input_model: AR1 requires 'ar_coefficient'");
        }
    } else {
        throw ConfigError("input_model.kind: expected IID or AR1, got '" + kind + "'");
    }
    if (j.contains("ar_coefficient")) {
        m.ar_coefficient = get_as<double>(j.at("ar_coefficient"), "input_model.ar_coefficient");
    }
    if (j.contains("variance")) {
        m.variance = get_as<double>(j.at("variance"), "input_model.variance");
    }
    try {
        m.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("input_model: ") + e.what());
    }
    return m;
}

json to_json(const InputModel& m)
{
    json j{{"kind", m.kind == InputKind::Iid ? "IID" : "AR1"}, {"variance", m.variance}};
    if (m.kind == InputKind::Ar1) {
        j["ar_coefficient"] = m.ar_coefficient;
    }
    return j;
}

ProbabilityScheme scheme_from_json(const json& j, const std::string& where)
{
    const auto name = get_as<std::string>(j.at("scheme"), where + ".scheme");
    const double absorb = j.contains("absorb") ? get_as<double>(j.at("absorb"), where + ".absorb")
                                               : ProbabilityScheme{}.absorb;
    try {
        return scheme_from_string(name, absorb);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoError("error while reading '" + path.string() + "'");
    }
    return ss.str();
}

json parse_json_file(const std::filesystem::path& path)
{
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

double elapsed_ms(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
        .count();
}

double estimate_error(std::span<const double> h, std::span<const double> w)
{
    RealVector diff(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        diff[k] = h[k] - w[k];
    }
    return norm2(diff);
}

void run_baseline(const AlgorithmSpec& spec, const ExperimentConfig& config, const SampleSet& samples,
                  std::vector<ReportRow>& rows)
{
    const std::size_t taps = config.plant_h.size();
    std::map<std::string, double> params = spec.params;
    if (spec.algorithm == Algorithm::Rls && !params.contains("delta")) {
        params["delta"] = kDefaultRlsDelta * config.input_model.variance;
    }
    FilterState state = init(spec.algorithm, taps, params);

    const auto start = std::chrono::steady_clock::now();
    RegressorFrame frame{RealVector(taps, 0.0), 0.0};
    std::size_t next_point = 0;
    const std::size_t last = config.iteration_ladder.back();
    for (std::size_t t = 0; t < last; ++t) {
        for (std::size_t k = 0; k < taps; ++k) {
            frame.x[k] = k <= t ? samples.x[t - k] : 0.0;
        }
        frame.d = samples.d[t];
        step(state, frame);
        if (t + 1 == config.iteration_ladder[next_point]) {
            rows.push_back({to_string(spec.algorithm), t + 1,
                            estimate_error(config.plant_h, state.w), state.mult_count,
                            elapsed_ms(start)});
            ++next_point;
        }
    }
}

} // namespace

std::string to_string(SchemeKind kind)
{
    return kind == SchemeKind::Uniform ? "uniform" : "magnitude";
}

ProbabilityScheme scheme_from_string(const std::string& name, double absorb)
{
    ProbabilityScheme s;
    if (name == "uniform") {
        s.kind = SchemeKind::Uniform;
    } else if (name == "magnitude") {
        s.kind = SchemeKind::Magnitude;
    } else {
        throw std::invalid_argument("scheme must be 'uniform' or 'magnitude', got '" + name + "'");
    }
    if (!(absorb > 0.0 && absorb < 1.0)) {
        throw std::invalid_argument("absorb must lie in (0, 1)");
    }
    s.absorb = absorb;
    return s;
}

void ExperimentConfig::validate() const
{
    try {
        Plant plant(plant_h);
        input_model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (algorithms.empty()) {
        throw ConfigError("algorithms: at least one algorithm is required");
    }
    require_increasing(iteration_ladder, "iteration_ladder");
    if (!(mcmc.scheme.absorb > 0.0 && mcmc.scheme.absorb < 1.0)) {
        throw ConfigError("mcmc.absorb must lie in (0, 1)");
    }
    if (mcmc.walks_multiplier < 1) {
        throw ConfigError("mcmc.walks_multiplier must be at least 1");
    }
    if (mcmc.max_steps < 1) {
        throw ConfigError("mcmc.max_steps must be at least 1");
    }
    if (correlation_source == CorrelationSource::Empirical
        && empirical_samples <= plant_h.size()) {
        throw ConfigError("correlation_source.n_samples must exceed the plant length");
    }
}

ExperimentConfig config_from_json(const json& j)
{
    require_object(j, "config",
                   {"plant_h", "input_model", "algorithms", "iteration_ladder", "mcmc", "seed",
                    "correlation_source", "stream_length"},
                   {"plant_h", "input_model", "algorithms", "seed"});
    ExperimentConfig c;
    c.plant_h = get_as<RealVector>(j.at("plant_h"), "plant_h");
    c.input_model = input_model_from_json(j.at("input_model"));

    const json& algos = j.at("algorithms");
    if (!algos.is_array()) {
        throw ConfigError("algorithms: expected an array");
    }
    for (const auto& a : algos) {
        require_object(a, "algorithms[]", {"algorithm", "params"}, {"algorithm"});
        AlgorithmSpec spec;
        try {
            spec.algorithm =
                algorithm_from_string(get_as<std::string>(a.at("algorithm"), "algorithm"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("algorithms[]: ") + e.what());
        }
        if (a.contains("params")) {
            spec.params = get_as<std::map<std::string, double>>(a.at("params"), "params");
        }
        c.algorithms.push_back(std::move(spec));
    }

    if (j.contains("iteration_ladder")) {
        c.iteration_ladder = get_counts(j.at("iteration_ladder"), "iteration_ladder");
    }
    if (j.contains("mcmc")) {
        const json& m = j.at("mcmc");
        require_object(m, "mcmc", {"scheme", "absorb", "walks_multiplier", "max_steps", "force"},
                       {"scheme"});
        c.mcmc.scheme = scheme_from_json(m, "mcmc");
        if (m.contains("walks_multiplier")) {
            c.mcmc.walks_multiplier = get_count(m.at("walks_multiplier"), "mcmc.walks_multiplier");
        }
        if (m.contains("max_steps")) {
            c.mcmc.max_steps = get_count(m.at("max_steps"), "mcmc.max_steps");
        }
        if (m.contains("force")) {
            c.mcmc.force = get_as<bool>(m.at("force"), "mcmc.force");
        }
    }
    if (!is_seed(j.at("seed"))) {
        throw ConfigError("seed: expected a non-negative integer");
    }
    c.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("correlation_source")) {
        const json& s = j.at("correlation_source");
        require_object(s, "correlation_source", {"kind", "n_samples"}, {"kind"});
        const auto kind = get_as<std::string>(s.at("kind"), "correlation_source.kind");
        if (kind == "EXACT") {
            c.correlation_source = CorrelationSource::Exact;
        } else if (kind == "EMPIRICAL") {
            c.correlation_source = CorrelationSource::Empirical;
            if (!s.contains("n_samples")) {
                throw ConfigError("correlation_source: EMPIRICAL requires 'n_samples'");
            }
            c.empirical_samples = get_count(s.at("n_samples"), "correlation_source.n_samples");
        } else {
            throw ConfigError("correlation_source.kind: expected EXACT or EMPIRICAL");
        }
    }
    if (j.contains("stream_length")) {
        c.stream_length = get_count(j.at("stream_length"), "stream_length");
    }
    c.validate();
    return c;
}

json to_json(const ExperimentConfig& c)
{
    json algos = json::array();
    for (const auto& a : c.algorithms) {
        json entry{{"algorithm", to_string(a.algorithm)}};
        if (!a.params.empty()) {
            entry["params"] = a.params;
        }
        algos.push_back(std::move(entry));
    }
    json j{{"plant_h", c.plant_h},
           {"input_model", to_json(c.input_model)},
           {"algorithms", std::move(algos)},
           {"iteration_ladder", c.iteration_ladder},
           {"mcmc",
            {{"scheme", to_string(c.mcmc.scheme.kind)},
             {"absorb", c.mcmc.scheme.absorb},
             {"walks_multiplier", c.mcmc.walks_multiplier},
             {"max_steps", c.mcmc.max_steps},
             {"force", c.mcmc.force}}},
           {"seed", c.seed}};
    if (c.correlation_source == CorrelationSource::Exact) {
        j["correlation_source"] = {{"kind", "EXACT"}};
    } else {
        j["correlation_source"] = {{"kind", "EMPIRICAL"}, {"n_samples", c.empirical_samples}};
    }
    if (c.stream_length) {
        j["stream_length"] = *c.stream_length;
    }
    return j;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    return config_from_json(parse_json_file(path));
}

ExperimentReport run_identification(const ExperimentConfig& config)
{
    config.validate();
    const Plant plant(config.plant_h);
    const std::size_t taps = plant.size();
    const std::size_t last = config.iteration_ladder.back();

    ExperimentReport report;
    report.metadata.config = to_json(config);
    report.metadata.tool_version = WIENERMC_VERSION;

    const bool has_baseline =
        std::any_of(config.algorithms.begin(), config.algorithms.end(),
                    [](const AlgorithmSpec& a) { return a.algorithm != Algorithm::Mcmc; });
    SampleSet stream;
    if (has_baseline) {
        const std::size_t length = config.stream_length.value_or(last);
        if (last > length) {
            throw ConfigError("iteration ladder reaches " + std::to_string(last)
                              + " but the sample stream has only " + std::to_string(length)
                              + " samples");
        }
        stream = generate_samples(plant, config.input_model, length, config.seed);
    }

    for (const AlgorithmSpec& spec : config.algorithms) {
        if (spec.algorithm != Algorithm::Mcmc) {
            run_baseline(spec, config, stream, report.rows);
            continue;
        }
        if (!spec.params.empty()) {
            throw ConfigError("MCMC takes its settings from the 'mcmc' block, not params");
        }

        std::optional<CorrelationMatrix> corr;
        RealVector b;
        if (config.correlation_source == CorrelationSource::Exact) {
            auto [r, bb] = exact_correlations(plant, config.input_model);
            corr.emplace(std::move(r));
            b = std::move(bb);
        } else {
            const SampleSet train =
                generate_samples(plant, config.input_model, config.empirical_samples,
                                 splitmix64_mix(config.seed ^ 0x5eed5eed5eed5eedULL));
            corr.emplace(estimate_autocorr(train.x, taps - 1));
            b = estimate_crosscorr(train.x, train.d, taps);
        }

        SolveOptions options;
        options.force = config.mcmc.force;
        options.max_steps = config.mcmc.max_steps;
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t point : config.iteration_ladder) {
            const SolveResult res = solve(*corr, b, config.mcmc.scheme,
                                          point * config.mcmc.walks_multiplier, config.seed,
                                          options);
            std::uint64_t steps = 0;
            for (const auto& est : res.estimates) {
                steps += est.total_length;
            }
            // two products per transient step: weight update and score term
            report.rows.push_back({"MCMC", point, estimate_error(config.plant_h, res.w), 2 * steps,
                                   elapsed_ms(start)});
            report.metadata.precheck = res.precheck;
            report.metadata.forced = res.forced;
        }
    }
    return report;
}

std::vector<WalkStudyRow> run_walk_study(const CorrelationMatrix& r, std::span<const double> b,
                                         ProbabilityScheme scheme,
                                         const std::vector<std::size_t>& walk_ladder,
                                         const std::vector<std::uint64_t>& seeds,
                                         const WalkOptions& options)
{
    if (b.size() != r.size()) {
        throw std::invalid_argument("run_walk_study: b length does not match R");
    }
    if (seeds.empty()) {
        throw std::invalid_argument("run_walk_study: at least one seed is required");
    }
    require_increasing(walk_ladder, "walk_ladder");
    const PrecheckReport pre = precheck_convergence(r);
    if (pre.verdict == Verdict::Divergent) {
        throw DivergentSystemError(pre.spectral_radius_F);
    }

    const RealVector exact = direct_solve(r, b);
    const SplitSystem sys = build_transition(split(r), b, scheme);
    const double samples = static_cast<double>(seeds.size() * r.size());

    std::vector<WalkStudyRow> rows;
    for (std::size_t walks : walk_ladder) {
        WalkStudyRow row;
        row.walks = walks;
        for (std::uint64_t seed : seeds) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                const WalkEstimate est = estimate_component(sys, i, walks, seed, options);
                row.mean_abs_error += std::abs(est.mean - exact[i]);
                row.mean_stderr += est.std_error;
            }
        }
        row.mean_abs_error /= samples;
        row.mean_stderr /= samples;
        rows.push_back(row);
    }
    return rows;
}

WalkStudyConfig walk_study_config_from_json(const json& j)
{
    require_object(j, "walk study",
                   {"r", "b", "scheme", "absorb", "walk_ladder", "seeds", "max_steps"},
                   {"r", "b", "scheme", "walk_ladder", "seeds"});
    WalkStudyConfig c;
    c.r = get_as<std::vector<double>>(j.at("r"), "r");
    c.b = get_as<RealVector>(j.at("b"), "b");
    c.scheme = scheme_from_json(j, "walk study");
    c.walk_ladder = get_counts(j.at("walk_ladder"), "walk_ladder");
    require_increasing(c.walk_ladder, "walk_ladder");
    const json& seeds = j.at("seeds");
    if (!seeds.is_array() || seeds.empty()) {
        throw ConfigError("seeds: expected a non-empty array");
    }
    for (const auto& s : seeds) {
        if (!is_seed(s)) {
            throw ConfigError("seeds: expected non-negative integers");
        }
        c.seeds.push_back(s.get<std::uint64_t>());
    }
    if (j.contains("max_steps")) {
        c.max_steps = get_count(j.at("max_steps"), "max_steps");
        if (c.max_steps < 1) {
            throw ConfigError("max_steps must be at least 1");
        }
    }
    if (c.r.size() != c.b.size()) {
        throw ConfigError("r and b must have the same length");
    }
    return c;
}

WalkStudyConfig load_walk_study_config(const std::filesystem::path& path)
{
    return walk_study_config_from_json(parse_json_file(path));
}

} // namespace wmc
