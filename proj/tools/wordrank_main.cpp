// wordrank: analyze the ranked trajectory probabilities of an absorbing
// Markov chain. Subcommands: validate | classify | beta | nu | enumerate |
// fit | report | selftest.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wordrank/asymptotics.hpp"
#include "wordrank/chain.hpp"
#include "wordrank/common.hpp"
#include "wordrank/enumerate.hpp"
#include "wordrank/graph.hpp"
#include "wordrank/io.hpp"
#include "wordrank/regime.hpp"
#include "wordrank/selftest.hpp"
#include "wordrank/spectral.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_labels(const wordrank::ChainSpec& spec, const std::vector<std::size_t>& states) {
    std::string out;
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (k) out += '-';
        out += spec.label(states[k]);
    }
    return out;
}

struct Cli {
    std::string chain_path;
    std::string format = "text";
    std::string output;
    wordrank::AnalysisOptions opts;

    std::ostream& out() {
        if (output.empty()) return std::cout;
        file = std::make_unique<std::ofstream>(output);
        if (!*file) throw wordrank::IoError("cannot open output file " + output);
        return *file;
    }

private:
    std::unique_ptr<std::ofstream> file;
};

int cmd_validate(Cli& cli) {
    auto spec = wordrank::load_chain(cli.chain_path);
    auto report = wordrank::validate_chain(spec, cli.opts);
    auto& os = cli.out();
    if (cli.format == "json") {
        os << wordrank::validation_to_json(report).dump(2) << '\n';
    } else {
        os << (report.ok() ? "ok" : "invalid") << '\n';
        for (const auto& issue : report.issues)
            os << (issue.severity == wordrank::IssueSeverity::Error ? "error: " : "warning: ")
               << issue.message << '\n';
    }
    return report.ok() ? kExitOk : kExitValidation;
}

int cmd_classify(Cli& cli) {
    auto spec = wordrank::load_chain(cli.chain_path);
    auto report = wordrank::classify(spec, cli.opts);
    auto& os = cli.out();
    if (cli.format == "json") {
        os << wordrank::regime_to_json(report, spec).dump(2) << '\n';
        return kExitOk;
    }
    os << "regime: " << wordrank::regime_name(report.regime) << '\n';
    if (report.beta) os << "beta: " << fmt(*report.beta) << '\n';
    if (report.exact_order)
        os << "exact_order: " << (*report.exact_order ? "true" : "false") << '\n';
    if (report.nu) os << "nu: " << fmt(*report.nu) << '\n';
    if (report.alpha) os << "alpha: " << fmt(*report.alpha) << '\n';
    if (report.shared_cycle_vertex)
        os << "shared_cycle_vertex: " << spec.label(*report.shared_cycle_vertex) << '\n';
    for (const auto& comp : report.critical_components)
        os << "critical_component: " << join_labels(spec, comp) << '\n';
    if (!report.max_weight_cycle.empty())
        os << "max_weight_cycle: " << join_labels(spec, report.max_weight_cycle) << '\n';
    for (const auto& w : report.warnings) os << "warning: " << w << '\n';
    return kExitOk;
}

int cmd_beta(Cli& cli) {
    auto spec = wordrank::load_chain(cli.chain_path);
    auto validation = wordrank::validate_chain(spec, cli.opts);
    if (!validation.ok())
        throw wordrank::ValidationError("invalid chain: " + validation.issues.front().message);

    auto beta = wordrank::solve_beta(spec, cli.opts);
    auto cc = wordrank::critical_components(spec, beta.beta, cli.opts);
    std::optional<wordrank::PositiveEigenvector> pos;
    if (beta.beta > 0.0) pos = wordrank::positive_left_eigenvector(spec, beta.beta, cli.opts);

    auto& os = cli.out();
    if (cli.format == "json") {
        nlohmann::json j;
        j["beta"] = beta.beta;
        j["radius_at_beta"] = beta.radius_at_beta;
        j["components"] = nlohmann::json::array();
        for (std::size_t k = 0; k < cc.cond.num_components; ++k) {
            if (k == cc.absorbing_component) continue;
            nlohmann::json c;
            c["states"] = nlohmann::json::array();
            for (auto v : cc.cond.members[k]) c["states"].push_back(spec.label(v));
            c["radius_at_beta"] = cc.radius_at_beta[k];
            c["critical"] =
                std::find(cc.critical.begin(), cc.critical.end(), k) != cc.critical.end();
            j["components"].push_back(std::move(c));
        }
        if (pos) {
            j["positive_left_eigenvector_exists"] = pos->exists;
            if (pos->exists) j["positive_left_eigenvector"] = pos->vec;
        }
        os << j.dump(2) << '\n';
        return kExitOk;
    }
    os << "beta: " << fmt(beta.beta) << '\n';
    os << "radius_at_beta: " << fmt(beta.radius_at_beta) << '\n';
    for (std::size_t k = 0; k < cc.cond.num_components; ++k) {
        if (k == cc.absorbing_component) continue;
        std::vector<std::size_t> states(cc.cond.members[k].begin(), cc.cond.members[k].end());
        os << "component " << join_labels(spec, states) << ": radius "
           << fmt(cc.radius_at_beta[k])
           << (std::find(cc.critical.begin(), cc.critical.end(), k) != cc.critical.end()
                   ? " (critical)"
                   : "")
           << '\n';
    }
    if (pos)
        os << "positive_left_eigenvector: " << (pos->exists ? "exists" : "does not exist")
           << '\n';
    return kExitOk;
}

int cmd_nu(Cli& cli) {
    auto spec = wordrank::load_chain(cli.chain_path);
    auto rate = wordrank::compute_nu(spec, cli.opts);
    auto& os = cli.out();
    if (cli.format == "json") {
        os << wordrank::rate_to_json(rate, spec).dump(2) << '\n';
        return kExitOk;
    }
    os << "nu: " << fmt(rate.nu) << '\n';
    os << "inv_nu: " << fmt(rate.inv_nu) << '\n';
    os << "alpha: " << fmt(rate.alpha) << '\n';
    for (const auto& e : rate.table)
        os << "cycle " << join_labels(spec, e.states) << ": weight " << fmt(e.weight) << ", k "
           << e.k << ", contribution " << fmt(e.contribution) << '\n';
    return kExitOk;
}

int cmd_enumerate(Cli& cli, std::uint64_t top, double min_prob) {
    auto spec = wordrank::load_chain(cli.chain_path);
    auto validation = wordrank::validate_chain(spec, cli.opts);
    if (!validation.ok())
        throw wordrank::ValidationError("invalid chain: " + validation.issues.front().message);

    auto& os = cli.out();
    const bool jsonl = cli.format == "jsonl";
    if (!jsonl) os << "rank,probability,log10_probability,word\n";
    char buf[128];
    wordrank::enumerate_words(
        spec, top,
        [&](const wordrank::RankedWord& w) {
            double log10p = w.log_prob / 2.302585092994045684;
            if (jsonl) {
                nlohmann::json j;
                j["rank"] = w.rank;
                j["probability"] = w.prob;
                j["log10_probability"] = log10p;
                j["word"] = join_labels(spec, w.states);
                os << j.dump() << '\n';
            } else {
                std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,",
                              static_cast<unsigned long long>(w.rank), w.prob, log10p);
                os << buf << join_labels(spec, w.states) << '\n';
            }
            return true;
        },
        cli.opts, min_prob);
    return kExitOk;
}

int cmd_fit(Cli& cli, const std::string& series_path, const std::string& model,
            std::uint64_t top, wordrank::WindowPolicy policy,
            const std::string& emit_path) {
    std::vector<wordrank::SeriesPoint> series;
    std::optional<wordrank::RegimeReport> regime;
    wordrank::ChainSpec spec;
    if (!series_path.empty()) {
        std::ifstream f(series_path);
        if (!f) throw wordrank::IoError("cannot open " + series_path);
        series = wordrank::read_series(f);
    } else {
        spec = wordrank::load_chain(cli.chain_path);
        regime = wordrank::classify(spec, cli.opts);
        series = wordrank::enumerate_series(spec, top, cli.opts);
    }

    std::optional<wordrank::FitResult> power, exponential;
    if (model == "power" || model == "auto") power = wordrank::fit_power_exponent(series, policy);
    if (model == "exp" || model == "auto")
        exponential = wordrank::fit_exponential_rate(series, policy);

    if (!emit_path.empty()) {
        // Overlay the better-fitting law on the emitted series.
        const wordrank::FitResult* best = nullptr;
        if (power && exponential)
            best = power->residual <= exponential->residual ? &*power : &*exponential;
        else
            best = power ? &*power : &*exponential;
        std::ofstream f(emit_path);
        if (!f) throw wordrank::IoError("cannot open " + emit_path);
        wordrank::emit_series(series, f, [best](std::uint64_t t) {
            double x = best->model == wordrank::FitResult::Model::Power
                           ? std::log(static_cast<double>(t))
                           : static_cast<double>(t);
            return std::exp(best->intercept + best->slope * x);
        });
    }

    auto& os = cli.out();
    if (cli.format == "json") {
        nlohmann::json j;
        if (regime) j["regime"] = wordrank::regime_name(regime->regime);
        if (power) j["power"] = wordrank::fit_to_json(*power);
        if (exponential) j["exponential"] = wordrank::fit_to_json(*exponential);
        if (power && exponential)
            j["smaller_residual"] =
                power->residual <= exponential->residual ? "power" : "exponential";
        os << j.dump(2) << '\n';
        return kExitOk;
    }
    if (regime) os << "regime (structural): " << wordrank::regime_name(regime->regime) << '\n';
    if (power)
        os << "power fit: slope " << fmt(power->slope) << " (exponent estimate "
           << fmt(-power->slope) << "), residual " << fmt(power->residual) << ", window ["
           << power->t_min << ", " << power->t_max << "], samples " << power->samples << '\n';
    if (exponential)
        os << "exponential fit: slope " << fmt(exponential->slope) << " (rate estimate "
           << fmt(-exponential->slope) << "), residual " << fmt(exponential->residual)
           << ", window [" << exponential->t_min << ", " << exponential->t_max << "], samples "
           << exponential->samples << '\n';
    if (power && exponential)
        os << "smaller residual: "
           << (power->residual <= exponential->residual ? "power" : "exponential") << '\n';
    return kExitOk;
}

int cmd_report(Cli& cli, std::uint64_t top) {
    auto spec = wordrank::load_chain(cli.chain_path);
    nlohmann::json j;
    j["chain"] = cli.chain_path;
    auto validation = wordrank::validate_chain(spec, cli.opts);
    j["validation"] = wordrank::validation_to_json(validation);
    if (!validation.ok()) {
        cli.out() << j.dump(2) << '\n';
        return kExitValidation;
    }

    auto regime = wordrank::classify(spec, cli.opts);
    j["classification"] = wordrank::regime_to_json(regime, spec);

    auto series = wordrank::enumerate_series(spec, top, cli.opts);
    j["series"]["points"] = series.size();
    if (!series.empty()) {
        j["series"]["p_first"] = series.front().p;
        j["series"]["p_last"] = series.back().p;
        double sum = 0.0;
        for (const auto& sp : series) sum += sp.p;
        j["series"]["probability_sum"] = sum;
    }

    if (series.size() >= 100) {
        wordrank::WindowPolicy policy;
        j["fit"]["power"] = wordrank::fit_to_json(wordrank::fit_power_exponent(series, policy));
        j["fit"]["exponential"] =
            wordrank::fit_to_json(wordrank::fit_exponential_rate(series, policy));
        if (regime.regime == wordrank::Regime::Intermediate) {
            auto d = wordrank::intermediate_diagnostics(series);
            j["intermediate_diagnostics"] = {
                {"sup_log_inv_p_over_sqrt_t", d.sup_log_inv_p_over_sqrt_t},
                {"ratio_first", d.ratio_first},
                {"ratio_last", d.ratio_last},
                {"t2_eventually_decreasing", d.t2_eventually_decreasing},
                {"t5_eventually_decreasing", d.t5_eventually_decreasing},
                {"hint", d.hint}};
        }
    }
    cli.out() << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_selftest(Cli& cli, std::uint64_t seed, std::size_t chains, bool inject_fault) {
    wordrank::SelftestOptions st;
    st.seed = seed;
    st.chains = chains;
    st.inject_fault = inject_fault;
    auto report = wordrank::run_selftest(st, cli.opts);
    auto& os = cli.out();
    if (cli.format == "json") {
        nlohmann::json j;
        j["seed"] = report.seed;
        j["suites"] = nlohmann::json::array();
        for (const auto& s : report.suites)
            j["suites"].push_back({{"name", s.name}, {"passed", s.passed}, {"failed", s.failed}});
        j["failed"] = report.total_failed();
        if (report.total_failed() > 0) {
            j["first_failure"] = report.first_failure;
            j["counterexample"] = nlohmann::json::parse(report.counterexample_json);
        }
        os << j.dump(2) << '\n';
    } else {
        for (const auto& s : report.suites)
            os << s.name << ": " << s.passed << " passed, " << s.failed << " failed\n";
        if (report.total_failed() > 0) {
            os << "FAILED (seed " << report.seed << "): " << report.first_failure << '\n';
            os << "counterexample: " << report.counterexample_json << '\n';
        } else {
            os << "all properties hold (seed " << report.seed << ")\n";
        }
    }
    return report.total_failed() == 0 ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decay-regime analysis of ranked trajectory probabilities in absorbing "
                 "Markov chains"};
    app.require_subcommand(1);

    Cli cli;

    auto add_common = [&cli](CLI::App* cmd, bool needs_chain = true) {
        if (needs_chain)
            cmd->add_option("chain", cli.chain_path, "chain spec (JSON)")->required();
        cmd->add_option("--output", cli.output, "write output to a file instead of stdout");
        cmd->add_option("--row-sum-tol", cli.opts.row_sum_tol, "row stochasticity tolerance");
        cmd->add_option("--beta-tol", cli.opts.beta_tol, "|r(P(beta)) - 1| tolerance");
        cmd->add_option("--criticality-tol", cli.opts.criticality_tol,
                        "|r_H(beta) - 1| marking a component critical");
        cmd->add_option("--tie-band", cli.opts.tie_band, "log-space width of a rank tie group");
        cmd->add_option("--expansion-cap", cli.opts.expansion_cap,
                        "frontier expansion cap for enumeration");
        cmd->add_option("--cycle-cap", cli.opts.cycle_cap, "simple-cycle catalog cap");
    };
    auto add_format = [&cli](CLI::App* cmd, const std::vector<std::string>& choices) {
        cmd->add_option("--format", cli.format, "output format")
            ->check(CLI::IsMember(choices))
            ->capture_default_str();
    };

    auto* validate = app.add_subcommand("validate", "check a chain spec file");
    add_common(validate);
    add_format(validate, {"text", "json"});

    auto* classify = app.add_subcommand("classify", "decay regime and its parameters");
    add_common(classify);
    add_format(classify, {"text", "json"});

    auto* beta = app.add_subcommand("beta", "power exponent, per-component radii, criticality");
    add_common(beta);
    add_format(beta, {"text", "json"});

    auto* nu = app.add_subcommand("nu", "exponential rate from the cycle table");
    add_common(nu);
    add_format(nu, {"text", "json"});

    auto* enumerate = app.add_subcommand("enumerate", "ranked word list");
    std::uint64_t top = 100;
    double min_prob = 0.0;
    std::string enum_format = "csv";
    add_common(enumerate);
    enumerate->add_option("--top", top, "number of words to emit")->capture_default_str();
    enumerate->add_option("--min-prob", min_prob, "emit only words with probability >= q")
        ->check(CLI::Range(0.0, 1.0));
    enumerate->add_option("--format", enum_format, "output format")
        ->check(CLI::IsMember({"csv", "jsonl"}))
        ->capture_default_str();

    auto* fit = app.add_subcommand("fit", "fit power/exponential laws to the ranked series");
    std::string series_path, model = "auto";
    std::uint64_t fit_top = 100000;
    wordrank::WindowPolicy policy;
    fit->add_option("chain", cli.chain_path, "chain spec (JSON)");
    fit->add_option("--series", series_path, "fit a CSV series instead of enumerating");
    fit->add_option("--output", cli.output, "write output to a file instead of stdout");
    fit->add_option("--model", model, "model to fit")
        ->check(CLI::IsMember({"power", "exp", "auto"}))
        ->capture_default_str();
    fit->add_option("--top", fit_top, "enumeration depth when a chain is given")
        ->capture_default_str();
    fit->add_option("--trailing-fraction", policy.trailing_fraction,
                    "portion of the series used, from the tail");
    fit->add_option("--ratio", policy.ratio, "geometric sample spacing");
    fit->add_option("--min-points", policy.min_points, "minimum number of samples");
    std::string emit_path;
    fit->add_option("--emit-series", emit_path,
                    "also write the series as CSV with a fitted-law overlay column");
    fit->add_option("--tie-band", cli.opts.tie_band, "log-space width of a rank tie group");
    add_format(fit, {"text", "json"});

    auto* report = app.add_subcommand("report", "consolidated machine-readable report");
    std::uint64_t report_top = 10000;
    add_common(report);
    report->add_option("--top", report_top, "enumeration depth")->capture_default_str();

    auto* selftest = app.add_subcommand("selftest", "property suites over random chains");
    std::uint64_t seed = 1;
    std::size_t chains = 100;
    bool inject_fault = false;
    selftest->add_option("--seed", seed, "random seed")->capture_default_str();
    selftest->add_option("--chains", chains, "number of random chains")->capture_default_str();
    selftest->add_flag("--inject-fault", inject_fault, "corrupt one comparison (test hook)")
        ->group("");  // hidden
    selftest->add_option("--output", cli.output, "write output to a file instead of stdout");
    add_format(selftest, {"text", "json"});

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(validate)) return cmd_validate(cli);
        if (app.got_subcommand(classify)) return cmd_classify(cli);
        if (app.got_subcommand(beta)) return cmd_beta(cli);
        if (app.got_subcommand(nu)) return cmd_nu(cli);
        if (app.got_subcommand(enumerate)) {
            cli.format = enum_format;
            return cmd_enumerate(cli, top, min_prob);
        }
        if (app.got_subcommand(fit)) {
            if (cli.chain_path.empty() && series_path.empty())
                throw wordrank::ValidationError("fit needs a chain spec or --series");
            return cmd_fit(cli, series_path, model, fit_top, policy, emit_path);
        }
        if (app.got_subcommand(report)) return cmd_report(cli, report_top);
        if (app.got_subcommand(selftest)) return cmd_selftest(cli, seed, chains, inject_fault);
    } catch (const wordrank::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const wordrank::CapError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const wordrank::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const wordrank::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}
