#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tpc/complexity.hpp"
#include "tpc/config.hpp"
#include "tpc/format.hpp"
#include "tpc/nystrom.hpp"
#include "tpc/product.hpp"
#include "tpc/tractability.hpp"
#include "tpc/univariate.hpp"
#include "tpc/version.hpp"

namespace tpc {

using ordered_json = nlohmann::ordered_json;

// One finished subcommand: the output document (already serialized), the
// warnings it raised, and the exit code the process should return.
struct RunOutput {
    std::string document;
    std::vector<std::string> warnings;
    int exit_code = 0;
};

namespace detail {

inline ordered_json json_number(double v) {
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return nullptr;
    return v > 0.0 ? "inf" : "-inf";
}

inline std::string csv_cell(const ordered_json& v) {
    if (v.is_null())
        return "";
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number_float())
        return format_double(v.get<double>());
    if (v.is_number_unsigned())
        return format_u64(v.get<std::uint64_t>());
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    if (v.is_boolean())
        return v.get<bool>() ? "true" : "false";
    return v.dump();
}

// Serialize rows either as CSV (header + one line per row, '#' comment
// lines first) or as JSON with a metadata header object.
inline std::string serialize(const ProblemConfig& cfg, const std::string& subcommand,
                             const std::vector<std::string>& columns,
                             const std::vector<ordered_json>& rows,
                             const std::vector<std::string>& comments = {}) {
    if (cfg.format == "json") {
        ordered_json doc;
        doc["metadata"]["tool"] = kToolName;
        doc["metadata"]["version"] = kToolVersion;
        doc["metadata"]["subcommand"] = subcommand;
        ordered_json echo;
        for (const auto& [k, v] : echo_config(cfg))
            echo[k] = v;
        doc["metadata"]["config"] = echo;
        doc["metadata"]["columns"] = columns;
        for (const std::string& c : comments)
            doc["metadata"]["notes"].push_back(c);
        doc["rows"] = rows;
        return doc.dump(2) + "\n";
    }
    std::string out;
    for (const std::string& c : comments)
        out += "# " + c + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out += (i ? "," : "") + columns[i];
    out += "\n";
    for (const ordered_json& row : rows) {
        std::size_t i = 0;
        for (const std::string& col : columns) {
            out += (i++ ? "," : "");
            out += csv_cell(row.at(col));
        }
        out += "\n";
    }
    return out;
}

// Fan a row job over a worker pool; results land in input order so
// concurrency never affects output bytes.
inline void parallel_rows(int jobs, std::size_t n, const std::function<void(std::size_t)>& work) {
    unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs)
                                : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n ? n : 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                work(i);
            }
        });
    for (std::thread& t : pool)
        t.join();
}

inline std::string join_warnings(const std::set<std::string>& tokens) {
    std::string out;
    for (const std::string& t : tokens)
        out += (out.empty() ? "" : ";") + t;
    return out;
}

// One complexity row; shared by the `complexity` and `curve` subcommands.
inline ordered_json complexity_row(const ProblemConfig& cfg, int d, double epsilon) {
    ordered_json row;
    row["d"] = d;
    row["epsilon"] = json_number(epsilon);
    row["criterion"] = criterion_name(cfg.criterion);
    std::set<std::string> warn;
    try {
        ProductProblem problem(cfg.rule(), d, cfg.normalized);
        ComplexityQuery query{epsilon, cfg.criterion, cfg.cap, cfg.node_cap};
        ComplexityResult r = info_complexity(problem, query);
        row["status"] = r.exact() ? "exact" : "exceeds_cap";
        if (r.exact())
            row["n"] = r.n;
        else
            row["n"] = nullptr;
        row["tail_at_n"] = json_number(r.tail_at_n);
        row["lower_bound"] = json_number(r.certified_lower);
        row["upper_bound"] = r.certified_upper ? json_number(*r.certified_upper)
                                               : ordered_json(nullptr);
        row["initial_error"] = json_number(r.initial_error);
        if (!r.exact())
            warn.insert("cap");
        if (r.resolution_warning)
            warn.insert("resolution");
        if (r.trace_relative_error > 1e-12)
            warn.insert("spectrum_tail_estimate");
    } catch (const DivergenceError& e) {
        row["status"] = "divergent";
        row["n"] = nullptr;
        row["tail_at_n"] = nullptr;
        row["lower_bound"] = nullptr;
        row["upper_bound"] = nullptr;
        row["initial_error"] = nullptr;
        warn.insert("divergence_at_coordinate_" + std::to_string(e.coordinate));
    }
    row["warnings"] = join_warnings(warn);
    return row;
}

} // namespace detail

inline RunOutput run_spectrum(const ProblemConfig& cfg) {
    RunOutput out;
    ProductProblem problem(cfg.rule(), cfg.d_values.front(), cfg.normalized);
    TopEigenvalues top = enumerate_top(problem, static_cast<std::uint64_t>(cfg.m), cfg.node_cap);
    if (top.capped)
        out.warnings.push_back("cap");
    std::vector<ordered_json> rows;
    for (const RankedEigenvalue& v : top.values) {
        ordered_json row;
        row["rank"] = v.rank;
        row["log_value"] = detail::json_number(v.log_value);
        row["value"] = detail::json_number(v.value());
        std::string idx;
        for (std::uint32_t j : v.index)
            idx += (idx.empty() ? "" : ";") + std::to_string(j);
        row["index_vector"] = idx;
        rows.push_back(std::move(row));
    }
    out.document = detail::serialize(cfg, "spectrum",
                                     {"rank", "log_value", "value", "index_vector"}, rows);
    return out;
}

inline RunOutput run_curve(const ProblemConfig& cfg, const std::string& subcommand = "curve") {
    RunOutput out;
    struct Point {
        int d;
        double epsilon;
    };
    std::vector<Point> points;
    for (int d : cfg.d_values)
        for (double eps : cfg.epsilon_values)
            points.push_back({d, eps});
    std::vector<ordered_json> rows(points.size());
    detail::parallel_rows(cfg.jobs, points.size(), [&](std::size_t i) {
        rows[i] = detail::complexity_row(cfg, points[i].d, points[i].epsilon);
    });
    std::set<std::string> warn;
    for (const ordered_json& row : rows) {
        std::string w = row.at("warnings").get<std::string>();
        if (!w.empty())
            warn.insert(w);
    }
    out.warnings.assign(warn.begin(), warn.end());
    out.document = detail::serialize(cfg, subcommand,
                                     {"d", "epsilon", "criterion", "status", "n", "tail_at_n",
                                      "lower_bound", "upper_bound", "initial_error", "warnings"},
                                     rows);
    return out;
}

inline RunOutput run_complexity(const ProblemConfig& cfg) { return run_curve(cfg, "complexity"); }

inline RunOutput run_bounds(const ProblemConfig& cfg) {
    RunOutput out;
    std::vector<ordered_json> rows;
    for (int d : cfg.d_values) {
        for (double eps : cfg.epsilon_values) {
            ordered_json row;
            row["d"] = d;
            row["epsilon"] = detail::json_number(eps);
            row["x"] = detail::json_number(cfg.x);
            row["tau"] = detail::json_number(cfg.tau);
            std::set<std::string> warn;
            ProductProblem problem(cfg.rule(), d, cfg.normalized);
            row["lower_bound_nor"] = detail::json_number(lower_bound_nor(problem, eps, cfg.x));
            if (problem.leading_is_unit()) {
                row["trace_lower_bound_nor"] =
                    detail::json_number(trace_lower_bound_nor(problem, eps));
            } else {
                row["trace_lower_bound_nor"] = nullptr;
                warn.insert("raw_mode");
            }
            BoundValue ub = upper_bound_abs(problem, eps, cfg.tau);
            if (ub.ok()) {
                row["upper_bound_abs"] = detail::json_number(ub.value);
            } else {
                row["upper_bound_abs"] = nullptr;
                warn.insert("divergence_at_coordinate_" +
                            std::to_string(ub.divergent_coordinate));
            }
            row["warnings"] = detail::join_warnings(warn);
            for (const std::string& w : warn)
                out.warnings.push_back(w);
            rows.push_back(std::move(row));
        }
    }
    out.document = detail::serialize(cfg, "bounds",
                                     {"d", "epsilon", "x", "tau", "lower_bound_nor",
                                      "trace_lower_bound_nor", "upper_bound_abs", "warnings"},
                                     rows);
    return out;
}

inline RunOutput run_classify(const ProblemConfig& cfg) {
    RunOutput out;
    TractabilityVerdict verdict =
        classify(cfg.rule(), cfg.notion, cfg.criterion, cfg.depth, cfg.s, cfg.t);
    ordered_json doc;
    doc["metadata"]["tool"] = kToolName;
    doc["metadata"]["version"] = kToolVersion;
    doc["metadata"]["subcommand"] = "classify";
    ordered_json echo;
    for (const auto& [k, v] : echo_config(cfg))
        echo[k] = v;
    doc["metadata"]["config"] = echo;
    ordered_json v;
    v["notion"] = notion_name(verdict.notion);
    if (verdict.notion == Notion::st_wt) {
        v["s"] = detail::json_number(verdict.s);
        v["t"] = detail::json_number(verdict.t);
    }
    v["criterion"] = criterion_name(cfg.criterion);
    v["criterion_used"] = verdict.criterion_used;
    v["decision"] = decision_name(verdict.decision);
    v["limit_estimate"] = detail::json_number(verdict.limit_estimate);
    if (!verdict.trend.empty())
        v["trend"] = verdict.trend;
    ordered_json evidence = ordered_json::array();
    for (const auto& [k, c] : verdict.evidence)
        evidence.push_back(ordered_json::array({k, detail::json_number(c)}));
    v["evidence"] = evidence;
    doc["verdict"] = v;
    out.document = doc.dump(2) + "\n";

    if (!cfg.evidence_out.empty()) {
        std::string csv = "k,c_k\n";
        for (const auto& [k, c] : verdict.evidence)
            csv += std::to_string(k) + "," + format_double(c) + "\n";
        std::ofstream f(cfg.evidence_out, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write evidence file: " + cfg.evidence_out);
        f << csv;
    }
    return out;
}

inline RunOutput run_nystrom(const ProblemConfig& cfg) {
    RunOutput out;
    KernelFunction kernel = cfg.kernel_r == 0 ? KernelFunction::brownian()
                                              : KernelFunction::integrated_wiener(cfg.kernel_r);
    NystromReport report = nystrom_eigenvalues(kernel, cfg.order, cfg.count);
    std::vector<ordered_json> rows;
    for (std::size_t j = 0; j < report.eigenvalues.size(); ++j) {
        ordered_json row;
        row["j"] = j + 1;
        row["eigenvalue"] = detail::json_number(report.eigenvalues[j]);
        row["asymptotic_reference"] = detail::json_number(report.reference_law[j]);
        row["relative_deviation"] = detail::json_number(report.deviations[j]);
        rows.push_back(std::move(row));
    }
    std::string header = "kernel=" + kernel.name() + " r=" + std::to_string(cfg.kernel_r) +
                         " order=" + std::to_string(cfg.order);
    out.document = detail::serialize(
        cfg, "nystrom", {"j", "eigenvalue", "asymptotic_reference", "relative_deviation"}, rows,
        {header});
    return out;
}

// Built-in oracle cross-checks: the Brownian closed law, the integrated
// kernel trace identity, and the enumeration-vs-grid-sort equivalence.
inline RunOutput run_validate(const ProblemConfig& cfg) {
    RunOutput out;
    std::vector<ordered_json> rows;
    bool all_pass = true;
    auto add = [&](const std::string& check, bool pass, const std::string& det) {
        ordered_json row;
        row["check"] = check;
        row["status"] = pass ? "pass" : "fail";
        row["detail"] = det;
        rows.push_back(std::move(row));
        all_pass = all_pass && pass;
    };

    CrossValidation brown = cross_validate(KernelFunction::brownian(), 1e-6, cfg.order);
    add("nystrom_brownian_law", brown.pass,
        "max relative deviation " + format_double(brown.max_law_deviation));
    CrossValidation iw = cross_validate(KernelFunction::integrated_wiener(1), 1e-8, cfg.order);
    add("nystrom_integrated_trace", iw.pass, "trace error " + format_double(iw.trace_error));

    // enumeration equivalence against a full-grid sort, d <= 3
    const int J = 16;
    SequenceRule rule = SequenceRule::korobov(ParamLaw::constant(1.0), ParamLaw::constant(0.5));
    bool enum_ok = true;
    for (int d = 1; d <= 3 && enum_ok; ++d) {
        std::vector<UnivariateSpectrum> coords;
        for (int k = 1; k <= d; ++k) {
            std::vector<double> head;
            for (int j = 1; j <= J; ++j)
                head.push_back(UnivariateSpectrum::from_rule(rule, k, true)
                                   .eigenvalue(static_cast<std::uint64_t>(j)));
            coords.push_back(UnivariateSpectrum::explicit_list(std::move(head)));
        }
        ProductProblem problem(coords);
        std::vector<double> grid;
        std::vector<std::uint32_t> idx(static_cast<std::size_t>(d), 1u);
        for (;;) {
            double lg = 0.0;
            for (int k = 0; k < d; ++k)
                lg += problem.coordinate(k + 1).log_eigenvalue(idx[static_cast<std::size_t>(k)]);
            grid.push_back(lg);
            int k = 0;
            while (k < d) {
                if (idx[static_cast<std::size_t>(k)] < static_cast<std::uint32_t>(J)) {
                    ++idx[static_cast<std::size_t>(k)];
                    break;
                }
                idx[static_cast<std::size_t>(k)] = 1u;
                ++k;
            }
            if (k == d)
                break;
        }
        std::sort(grid.begin(), grid.end(), std::greater<double>());
        std::uint64_t m = std::min<std::uint64_t>(200, grid.size());
        TopEigenvalues top = enumerate_top(problem, m);
        if (top.values.size() != m)
            enum_ok = false;
        for (std::uint64_t i = 0; i < m && enum_ok; ++i)
            if (std::abs(top.values[i].log_value - grid[i]) > 1e-12)
                enum_ok = false;
    }
    add("enumeration_grid_sort", enum_ok, "d <= 3; m <= 200; J = 16");

    out.document =
        detail::serialize(cfg, "validate", {"check", "status", "detail"}, rows);
    out.exit_code = all_pass ? 0 : 1;
    if (!all_pass)
        out.warnings.push_back("validation_failure");
    return out;
}

inline RunOutput run_subcommand(const std::string& name, const ProblemConfig& cfg) {
    if (name == "spectrum")
        return run_spectrum(cfg);
    if (name == "complexity")
        return run_complexity(cfg);
    if (name == "curve")
        return run_curve(cfg);
    if (name == "classify")
        return run_classify(cfg);
    if (name == "bounds")
        return run_bounds(cfg);
    if (name == "nystrom")
        return run_nystrom(cfg);
    if (name == "validate")
        return run_validate(cfg);
    throw std::invalid_argument("unknown subcommand: " + name);
}

} // namespace tpc
