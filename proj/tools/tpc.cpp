// Command-line front end: batch analysis of average-case tensor-product
// approximation problems. One subcommand produces one output artifact
// (CSV or JSON); run reports and warnings go to stderr so output files
// stay byte-stable across runs.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tpc/config.hpp"
#include "tpc/runner.hpp"
#include "tpc/version.hpp"

namespace {

struct FlagSpec {
    const char* flag;
    const char* key;
    const char* help;
};

// Every flag maps onto the same key space the config file uses; flags win
// over file entries.
const FlagSpec kFlags[] = {
    {"--family", "family", "kernel family: euler|wiener|korobov|analytic_korobov|explicit"},
    {"--r", "r", "smoothness (number or law expression)"},
    {"--r-rule", "r_rule", "smoothness law, e.g. floor_power(1,0.5)"},
    {"--g", "g", "korobov scale (number or law expression)"},
    {"--g-rule", "g_rule", "korobov scale law, e.g. geometric(1,0.5)"},
    {"--a", "a", "analytic korobov growth (number or law expression)"},
    {"--a-rule", "a_rule", "analytic korobov growth law, e.g. log(2)"},
    {"--b", "b", "analytic korobov exponent (number or law expression)"},
    {"--b-rule", "b_rule", "analytic korobov exponent law"},
    {"--omega", "omega", "analytic korobov base in (0,1)"},
    {"--values", "values", "explicit eigenvalues, semicolon-joined"},
    {"--tail-ratio", "tail_ratio", "explicit geometric tail ratio in [0,1)"},
    {"--d", "d", "dimension, or grid(start,stop,count)"},
    {"--epsilon", "epsilon", "accuracy in (0,1), or grid(start,stop,count,linear|log)"},
    {"--epsilon-grid", "epsilon", "accuracy grid start,stop,count[,spacing]"},
    {"--d-grid", "d", "dimension grid start,stop,count"},
    {"--criterion", "criterion", "error criterion: abs|nor"},
    {"--normalized", "normalized", "use unit leading eigenvalues: true|false"},
    {"--cap", "cap", "bound on the reported information complexity"},
    {"--node-cap", "node_cap", "enumeration memory budget (heap nodes)"},
    {"--tau", "tau", "exponent for the absolute-criterion upper bound"},
    {"--tau0", "tau0", "tail-sum exponent for the two-sided trace bound"},
    {"--x", "x", "free exponent for the normalized-criterion lower bound"},
    {"--s", "s", "tractability parameter s > 0"},
    {"--t", "t", "tractability parameter t > 0"},
    {"--notion", "notion", "tractability notion: spt|pt|qpt|uwt|wt|st-wt"},
    {"--K", "K", "classifier evidence horizon"},
    {"--m", "m", "number of spectrum rows"},
    {"--order", "order", "quadrature order"},
    {"--count", "count", "number of quadrature eigenvalues"},
    {"--kernel-r", "kernel_r", "kernel smoothness for the quadrature solver (0 = brownian)"},
    {"--out", "out", "output path (default stdout)"},
    {"--evidence-out", "evidence_out", "classifier evidence CSV path"},
    {"--format", "format", "output format: csv|json"},
    {"--jobs", "jobs", "worker pool size for grid sweeps (0 = hardware)"},
};

int fail_with(const std::string& subcommand, const tpc::ConfigErrors& errors) {
    tpc::ordered_json payload;
    payload["error"] = "invalid configuration";
    payload["subcommand"] = subcommand;
    for (const std::string& e : errors.list())
        payload["violations"].push_back(e);
    std::cerr << payload.dump(2) << "\n";
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"average-case tensor-product complexity toolkit"};
    app.require_subcommand(1);

    const char* subcommands[] = {"spectrum", "complexity", "curve",   "classify",
                                 "bounds",   "nystrom",    "validate"};
    const char* descriptions[] = {
        "ranked product eigenvalues of a d-variate problem",
        "information complexity n(epsilon, d) with certified bounds",
        "complexity rows over an (epsilon, d) grid",
        "tractability verdict for a parameter sequence rule",
        "closed-form lower/upper complexity bounds",
        "quadrature eigenvalues of a covariance kernel",
        "built-in oracle cross-checks",
    };

    std::map<std::string, std::map<std::string, std::string>> flag_values;
    std::map<std::string, std::string> config_paths;
    for (std::size_t i = 0; i < std::size(subcommands); ++i) {
        CLI::App* sub = app.add_subcommand(subcommands[i], descriptions[i]);
        sub->add_option("--config", config_paths[subcommands[i]],
                        "key: value configuration file");
        auto& values = flag_values[subcommands[i]];
        for (const FlagSpec& spec : kFlags)
            sub->add_option(spec.flag, values[spec.key], spec.help);
    }

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();

    auto start = std::chrono::steady_clock::now();
    tpc::ConfigErrors errors;
    std::map<std::string, std::string> kv;
    if (!config_paths[name].empty()) {
        std::ifstream f(config_paths[name]);
        if (!f) {
            errors.add("config", "cannot open file: " + config_paths[name]);
            return fail_with(name, errors);
        }
        std::stringstream buf;
        buf << f.rdbuf();
        kv = tpc::parse_key_values(buf.str(), errors);
    }
    for (const auto& [key, value] : flag_values[name])
        if (!value.empty())
            kv[key] = value;

    std::optional<tpc::ProblemConfig> cfg = tpc::parse_config(kv, errors);
    if (!errors.ok() || !cfg)
        return fail_with(name, errors);

    tpc::RunOutput out;
    try {
        out = tpc::run_subcommand(name, *cfg);
    } catch (const tpc::UnsupportedCombination& e) {
        tpc::ordered_json payload;
        payload["error"] = "unsupported combination";
        payload["subcommand"] = name;
        payload["detail"] = e.what();
        std::cerr << payload.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        tpc::ordered_json payload;
        payload["error"] = "run failed";
        payload["subcommand"] = name;
        payload["detail"] = e.what();
        std::cerr << payload.dump(2) << "\n";
        return 2;
    }

    if (cfg->out_path.empty()) {
        std::cout << out.document;
    } else {
        std::ofstream f(cfg->out_path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot write output file: " << cfg->out_path << "\n";
            return 2;
        }
        f << out.document;
    }

    // run report (stderr only; output files carry no timing)
    auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "# " << tpc::kToolName << " " << tpc::kToolVersion << " " << name << "\n";
    std::string echo;
    for (const auto& [k, v] : tpc::echo_config(*cfg))
        echo += (echo.empty() ? "" : " ") + k + "=" + v;
    std::cerr << "# config: " << echo << "\n";
    std::cerr << "# wall_seconds: " << wall << "\n";
    if (!out.warnings.empty()) {
        std::cerr << "# warnings:";
        for (const std::string& w : out.warnings)
            std::cerr << " " << w;
        std::cerr << "\n";
    }
    return out.exit_code;
}
