// Command-line front end: solve, precheck, identify, walks, bounds.
//
// Exit codes: 0 success, 1 usage or config error, 2 divergence refusal,
// 3 marginal convergence warning, 4 I/O error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wienermc/harness.hpp"
#include "wienermc/mcsolve.hpp"
#include "wienermc/report.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDivergent = 2,
    kMarginal = 3,
    kIo = 4,
};

std::vector<double> parse_csv_numbers(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string field = text.substr(pos, comma - pos);
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(field, &used);
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "'" + field + "' is not a number");
        }
        if (field.find_first_not_of(" \t", used) != std::string::npos) {
            throw CLI::ValidationError(what, "'" + field + "' is not a number");
        }
        out.push_back(value);
        pos = comma + 1;
    }
    return out;
}

void print_precheck(const wmc::PrecheckReport& p)
{
    fmt::print("precheck: {} spectral_radius_F={:.17g}{} gershgorin=({:.17g}, {:.17g}) "
               "eigen_interval_ok={}\n",
               wmc::to_string(p.verdict), p.spectral_radius_F,
               p.spectral_converged ? "" : " (not converged)", p.gershgorin_center,
               p.gershgorin_radius, p.eigen_interval_ok ? "true" : "false");
}

struct SolveArgs {
    std::string r;
    std::string b;
    std::string scheme = "uniform";
    double absorb = 0.2;
    std::size_t walks = 10000;
    std::uint64_t seed = 0;
    bool force = false;
    std::size_t max_steps = wmc::kDefaultMaxSteps;
    unsigned threads = 0;
};

int run_solve(const SolveArgs& a)
{
    const wmc::CorrelationMatrix r(parse_csv_numbers(a.r, "--r"));
    const std::vector<double> b = parse_csv_numbers(a.b, "--b");
    wmc::SolveOptions options;
    options.force = a.force;
    options.max_steps = a.max_steps;
    options.threads = a.threads;
    const wmc::SolveResult res =
        wmc::solve(r, b, wmc::scheme_from_string(a.scheme, a.absorb), a.walks, a.seed, options);
    print_precheck(res.precheck);
    if (res.forced) {
        fmt::print("warning: system is DIVERGENT; estimates computed under --force\n");
    }
    fmt::print("component,estimate,stderr,walks,mean_length,max_length,truncated\n");
    for (std::size_t i = 0; i < res.estimates.size(); ++i) {
        const auto& e = res.estimates[i];
        fmt::print("{},{:.17g},{:.17g},{},{:.17g},{},{}\n", i, e.mean, e.std_error, e.walks,
                   e.mean_length, e.max_length, e.truncated_walks);
    }
    return res.precheck.verdict == wmc::Verdict::Marginal ? kMarginal : kOk;
}

int run_precheck(const std::string& r_text)
{
    const wmc::CorrelationMatrix r(parse_csv_numbers(r_text, "--r"));
    const wmc::PrecheckReport p = wmc::precheck_convergence(r);
    print_precheck(p);
    switch (p.verdict) {
    case wmc::Verdict::Convergent:
        return kOk;
    case wmc::Verdict::Divergent:
        return kDivergent;
    case wmc::Verdict::Marginal:
        return kMarginal;
    }
    return kUsage;
}

int run_identify(const std::string& config, const std::string& out, const std::string& format)
{
    const wmc::ExperimentReport report = wmc::run_identification(wmc::load_config(config));
    wmc::emit_report(report, wmc::report_format_from_string(format), out);
    if (report.metadata.precheck) {
        print_precheck(*report.metadata.precheck);
    }
    fmt::print("wrote {} rows to {}\n", report.rows.size(), out);
    return kOk;
}

int run_walks(const std::string& config, const std::string& out)
{
    const wmc::WalkStudyConfig c = wmc::load_walk_study_config(config);
    const wmc::CorrelationMatrix r(c.r);
    wmc::WalkOptions options;
    options.max_steps = c.max_steps;
    const auto rows = wmc::run_walk_study(r, c.b, c.scheme, c.walk_ladder, c.seeds, options);
    wmc::write_text(out, wmc::walk_study_to_csv(rows));
    fmt::print("wrote {} rows to {}\n", rows.size(), out);
    return kOk;
}

struct BoundsArgs {
    std::string r;
    std::string b;
    std::size_t component = 0;
    std::size_t depth = 8;
    std::string scheme = "uniform";
    double absorb = 0.2;
};

int run_bounds(const BoundsArgs& a)
{
    const wmc::CorrelationMatrix r(parse_csv_numbers(a.r, "--r"));
    const std::vector<double> b = parse_csv_numbers(a.b, "--b");
    const auto bounds = wmc::error_bounds(r, b, a.component, a.depth,
                                          wmc::scheme_from_string(a.scheme, a.absorb));
    fmt::print("depth,min_walks,error_lower_bound\n");
    for (const auto& eb : bounds) {
        fmt::print("{},{},{:.17g}\n", eb.depth,
                   eb.min_walks ? std::to_string(*eb.min_walks) : std::string("-"),
                   eb.lower_bound);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Random-walk Wiener-Hopf solver and adaptive-filter benchmark"};
    app.set_version_flag("--version", std::string(WIENERMC_VERSION));
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Estimate w in R w = b by random walks");
    solve->add_option("--r", solve_args.r, "Autocorrelation r_0..r_{N-1}, comma separated")
        ->required();
    solve->add_option("--b", solve_args.b, "Cross-correlation vector, comma separated")->required();
    solve->add_option("--scheme", solve_args.scheme, "Transition probabilities")
        ->check(CLI::IsMember({"uniform", "magnitude"}));
    solve->add_option("--absorb", solve_args.absorb, "Absorption probability (floor)");
    solve->add_option("--walks", solve_args.walks, "Walks per unknown")->check(CLI::PositiveNumber);
    solve->add_option("--seed", solve_args.seed, "Random seed");
    solve->add_option("--max-steps", solve_args.max_steps, "Cap on steps per walk")
        ->check(CLI::PositiveNumber);
    solve->add_option("--threads", solve_args.threads, "Worker threads (0 = all cores)");
    solve->add_flag("--force", solve_args.force, "Solve even when the precheck is DIVERGENT");

    std::string precheck_r;
    auto* precheck = app.add_subcommand("precheck", "Check the convergence condition for R");
    precheck->add_option("--r", precheck_r, "Autocorrelation, comma separated")->required();

    std::string identify_config;
    std::string identify_out;
    std::string identify_format = "csv";
    auto* identify = app.add_subcommand("identify", "Run a system-identification experiment");
    identify->add_option("--config", identify_config, "Experiment config (JSON)")->required();
    identify->add_option("--out", identify_out, "Report path")->required();
    identify->add_option("--format", identify_format, "Report format")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string walks_config;
    std::string walks_out;
    auto* walks = app.add_subcommand("walks", "Monte Carlo error versus walk count");
    walks->add_option("--config", walks_config, "Walk study config (JSON)")->required();
    walks->add_option("--out", walks_out, "CSV output path")->required();

    BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("bounds", "Minimum walk counts and error lower bounds");
    bounds->add_option("--r", bounds_args.r, "Autocorrelation, comma separated")->required();
    bounds->add_option("--b", bounds_args.b, "Cross-correlation vector, comma separated")
        ->required();
    bounds->add_option("--component", bounds_args.component, "Unknown index");
    bounds->add_option("--depth", bounds_args.depth, "Deepest series term");
    bounds->add_option("--scheme", bounds_args.scheme, "Transition probabilities")
        ->check(CLI::IsMember({"uniform", "magnitude"}));
    bounds->add_option("--absorb", bounds_args.absorb, "Absorption probability (floor)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*solve) {
            return run_solve(solve_args);
        }
        if (*precheck) {
            return run_precheck(precheck_r);
        }
        if (*identify) {
            return run_identify(identify_config, identify_out, identify_format);
        }
        if (*walks) {
            return run_walks(walks_config, walks_out);
        }
        if (*bounds) {
            return run_bounds(bounds_args);
        }
    } catch (const wmc::DivergentSystemError& e) {
        std::cerr << "error: " << e.what() << " (use --force to override)\n";
        return kDivergent;
    } catch (const wmc::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
