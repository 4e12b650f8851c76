#include "contraction/bounds.hpp"
#include "contraction/experiment.hpp"
#include "contraction/picard.hpp"
#include "contraction/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using contraction::ConfigError;
using nlohmann::json;

struct CommonOpts {
    std::string instance;
    long seed = 42;
    long count = 10000;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool need_instance = true) {
    auto* inst = cmd->add_option("--instance", opts.instance, "gallery instance name");
    if (need_instance) inst->required();
    cmd->add_option("--seed", opts.seed, "sampling seed");
    cmd->add_option("--count", opts.count, "sample count");
    cmd->add_option("--out", opts.out, "write the report to this path instead of stdout");
    cmd->add_option("--format", opts.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

int execute(json config_doc) {
    const contraction::ExperimentConfig config = contraction::parse_config(config_doc);
    const contraction::RunReport report = contraction::run(config);

    std::string payload;
    if (config.output_format == "csv" && !report.csv.empty())
        payload = report.csv;
    else
        payload = report.document.dump(2) + "\n";

    const std::string path = config.output_path;
    if (path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot open output path '" + path + "'");
        out << payload;
        std::cerr << "report written to " << path << "\n";
    }
    return report.exit_code;
}

json base_config(const CommonOpts& opts) {
    json doc;
    doc["instance"] = opts.instance;
    doc["sampling"] = json{{"seed", opts.seed}, {"count", opts.count}};
    doc["output"] = json{{"format", opts.format}, {"path", opts.out}};
    return doc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contractions — classify self-maps by contraction type, run Picard iteration\n"
                 "with diagnostics, and compute/verify a-priori iteration bounds.\n"
                 "Expression grammar: see GRAMMAR.md."};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // ------------------------------------------------------------- list
    auto* list_cmd = app.add_subcommand("list", "list registered instances");
    std::string match;
    list_cmd->add_option("--match", match, "only names containing this substring");

    // ----------------------------------------------------------- axioms
    auto* axioms_cmd = app.add_subcommand("axioms", "empirically check the metric axioms");
    CommonOpts axioms_opts;
    add_common(axioms_cmd, axioms_opts);

    // --------------------------------------------------------- classify
    auto* classify_cmd = app.add_subcommand("classify", "run contraction-class checks and searches");
    CommonOpts classify_opts;
    add_common(classify_cmd, classify_opts);
    std::vector<double> epsilons;
    classify_cmd->add_option("--epsilon", epsilons, "epsilon grid (default: standard grid)");
    std::vector<double> ladder_factors;
    classify_cmd->add_option("--delta-ladder", ladder_factors,
                             "delta ladder as factors of epsilon (default 1,0.5,0.1,0.05,0.01,0.001)");
    long r_max = contraction::kDefaultRMax;
    classify_cmd->add_option("--r-max", r_max, "largest iterate order searched");

    // ---------------------------------------------------------- iterate
    auto* iterate_cmd = app.add_subcommand("iterate", "run Picard iteration with diagnostics");
    CommonOpts iterate_opts;
    add_common(iterate_cmd, iterate_opts);
    std::vector<double> x0;
    iterate_cmd->add_option("--x0", x0, "start point coordinates (default: region center)");
    long max_iter = contraction::kDefaultMaxIter;
    iterate_cmd->add_option("--max-iter", max_iter, "iteration cap");
    double tol = contraction::kDefaultCauchyTol;
    iterate_cmd->add_option("--tol", tol, "windowed Cauchy tolerance");

    // ---------------------------------------------------------- certify
    auto* certify_cmd = app.add_subcommand("certify", "compute and verify the retract bound");
    CommonOpts certify_opts;
    add_common(certify_cmd, certify_opts);
    double certify_eps = 0.1;
    double certify_k = 1.0;
    std::string sequence = "constant";
    long n_max = contraction::kDefaultUniformNMax;
    certify_cmd->add_option("--epsilon", certify_eps, "target ball radius")->required();
    certify_cmd->add_option("--k-radius", certify_k, "start ball radius")->required();
    certify_cmd->add_option("--sequence", sequence, "control sequence: constant or instance")
        ->check(CLI::IsMember({"constant", "instance"}));
    certify_cmd->add_option("--n-max", n_max, "uniform-convergence scan cap");

    // ---------------------------------------------------------- profile
    auto* profile_cmd = app.add_subcommand("profile", "first-entry profile over a start ball");
    CommonOpts profile_opts;
    add_common(profile_cmd, profile_opts);
    double profile_eps = 0.1;
    double profile_k = 1.0;
    long cap = 10000;
    profile_cmd->add_option("--epsilon", profile_eps, "target ball radius")->required();
    profile_cmd->add_option("--k-radius", profile_k, "start ball radius")->required();
    profile_cmd->add_option("--cap", cap, "entry index cap");

    // -------------------------------------------------------------- run
    auto* run_cmd = app.add_subcommand("run", "run a JSON experiment config");
    std::string config_path;
    run_cmd->add_option("-c,--config", config_path, "config file path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2
    }

    try {
        if (list_cmd->parsed()) {
            for (const contraction::Instance& inst : contraction::gallery_instances()) {
                if (!match.empty() && inst.name.find(match) == std::string::npos) continue;
                std::cout << inst.name << " — " << inst.summary << "\n";
            }
            return 0;
        }
        if (axioms_cmd->parsed()) {
            json doc = base_config(axioms_opts);
            doc["tasks"] = json::array({json{{"kind", "axioms"}}});
            return execute(std::move(doc));
        }
        if (classify_cmd->parsed()) {
            json task{{"kind", "classify"}, {"r_max", r_max}};
            if (!epsilons.empty()) task["epsilons"] = epsilons;
            if (!ladder_factors.empty()) task["delta_ladder"] = ladder_factors;
            json doc = base_config(classify_opts);
            doc["tasks"] = json::array({std::move(task)});
            return execute(std::move(doc));
        }
        if (iterate_cmd->parsed()) {
            json task{{"kind", "iterate"}, {"max_iter", max_iter}, {"tol", tol}};
            if (!x0.empty()) task["x0"] = x0;
            json doc = base_config(iterate_opts);
            doc["tasks"] = json::array({std::move(task)});
            return execute(std::move(doc));
        }
        if (certify_cmd->parsed()) {
            json task{{"kind", "certify"},
                      {"epsilon", certify_eps},
                      {"k_radius", certify_k},
                      {"sequence", sequence},
                      {"n_max", n_max}};
            json doc = base_config(certify_opts);
            doc["tasks"] = json::array({std::move(task)});
            return execute(std::move(doc));
        }
        if (profile_cmd->parsed()) {
            json task{{"kind", "profile"},
                      {"epsilon", profile_eps},
                      {"k_radius", profile_k},
                      {"cap", cap}};
            json doc = base_config(profile_opts);
            doc["tasks"] = json::array({std::move(task)});
            return execute(std::move(doc));
        }
        if (run_cmd->parsed()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
            json doc = json::parse(in);
            return execute(std::move(doc));
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
