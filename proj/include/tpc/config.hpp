#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpc/complexity.hpp"
#include "tpc/format.hpp"
#include "tpc/sequence_rule.hpp"
#include "tpc/tractability.hpp"

namespace tpc {

// Evenly spaced scan values, descending when stop < start; log spacing
// interpolates geometrically.
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
    bool log_spacing = false;

    std::vector<double> values() const {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(count));
        if (count == 1) {
            out.push_back(start);
            return out;
        }
        for (int i = 0; i < count; ++i) {
            double f = static_cast<double>(i) / (count - 1);
            out.push_back(log_spacing ? start * std::pow(stop / start, f)
                                      : start + (stop - start) * f);
        }
        return out;
    }
};

// Everything a subcommand run needs, parsed from a flat key-value document
// (and/or command-line flags mapped onto the same keys).
struct ProblemConfig {
    Family family = Family::korobov;
    ParamLaw r_law = ParamLaw::constant(1.0);
    ParamLaw g_law = ParamLaw::constant(0.5);
    ParamLaw a_law = ParamLaw::constant(1.0);
    ParamLaw b_law = ParamLaw::constant(1.0);
    double omega = 0.5;
    std::vector<double> explicit_values;
    double explicit_tail_ratio = 0.0;

    std::vector<int> d_values = {1};
    std::vector<double> epsilon_values = {0.5};
    std::optional<GridSpec> epsilon_grid; // kept for echo fidelity
    std::optional<GridSpec> d_grid;
    ErrorCriterion criterion = ErrorCriterion::nor;
    bool normalized = true;

    std::uint64_t cap = 10'000'000;
    std::uint64_t node_cap = 10'000'000;
    double tau = 0.25;
    double x = 1.0;
    double tau0 = 0.8;
    double s = 1.0;
    double t = 0.5;
    Notion notion = Notion::wt;
    int depth = 32;      // classifier horizon K
    int m = 100;         // spectrum rows
    int order = 256;     // nystrom quadrature order
    int count = 64;      // nystrom eigenvalue count
    int kernel_r = 0;    // nystrom smoothness (0 = brownian)

    std::string out_path;    // empty -> stdout
    std::string evidence_out;
    std::string format = "csv";
    int jobs = 0; // 0 -> hardware concurrency

    SequenceRule rule() const {
        switch (family) {
        case Family::euler: return SequenceRule::euler(r_law);
        case Family::wiener: return SequenceRule::wiener(r_law);
        case Family::korobov: return SequenceRule::korobov(r_law, g_law);
        case Family::analytic_korobov: return SequenceRule::analytic_korobov(a_law, b_law, omega);
        case Family::explicit_list:
            return SequenceRule::explicit_list(explicit_values, explicit_tail_ratio);
        }
        throw std::logic_error("rule: unknown family");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline bool parse_number(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

inline bool parse_int(const std::string& s, long long& out) {
    try {
        std::size_t pos = 0;
        out = std::stoll(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

// name(a,b,...) -> name + raw argument list
inline bool parse_call(const std::string& s, std::string& name, std::vector<std::string>& args) {
    std::size_t open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        return false;
    name = trim(s.substr(0, open));
    std::string inner = s.substr(open + 1, s.size() - open - 2);
    args = inner.empty() ? std::vector<std::string>{} : split(inner, ',');
    return true;
}

} // namespace detail

// All validation problems in one pass, each prefixed with the field path.
class ConfigErrors {
public:
    void add(const std::string& field, const std::string& message) {
        errors_.push_back(field + ": " + message);
    }
    bool ok() const { return errors_.empty(); }
    const std::vector<std::string>& list() const { return errors_; }
    std::string joined() const {
        std::string out;
        for (const std::string& e : errors_)
            out += (out.empty() ? "" : "\n") + e;
        return out;
    }

private:
    std::vector<std::string> errors_;
};

namespace detail {

inline std::optional<ParamLaw> parse_law(const std::string& field, const std::string& text,
                                         ConfigErrors& errors) {
    double v;
    if (parse_number(text, v))
        return ParamLaw::constant(v);
    std::string name;
    std::vector<std::string> args;
    if (!parse_call(text, name, args)) {
        errors.add(field, "expected a number or law(args), got '" + text + "'");
        return std::nullopt;
    }
    auto need = [&](std::size_t n) {
        if (args.size() != n) {
            errors.add(field, name + " takes " + std::to_string(n) + " argument(s)");
            return false;
        }
        return true;
    };
    auto num = [&](std::size_t i, double& out) {
        if (!parse_number(args[i], out)) {
            errors.add(field, "argument " + std::to_string(i + 1) + " of " + name +
                                  " is not a number");
            return false;
        }
        return true;
    };
    double a = 0.0, b = 0.0;
    if (name == "constant") {
        if (!need(1) || !num(0, a))
            return std::nullopt;
        return ParamLaw::constant(a);
    }
    if (name == "power" || name == "floor_power" || name == "geometric" || name == "recip_log") {
        if (!need(2) || !num(0, a) || !num(1, b))
            return std::nullopt;
        if (name == "power")
            return ParamLaw::power(a, b);
        if (name == "floor_power")
            return ParamLaw::floor_power(a, b);
        if (name == "geometric")
            return ParamLaw::geometric(a, b);
        return ParamLaw::recip_log(a, b);
    }
    if (name == "log" || name == "floor_log") {
        if (!need(1) || !num(0, a))
            return std::nullopt;
        return name == "log" ? ParamLaw::log_growth(a) : ParamLaw::floor_log(a);
    }
    if (name == "table") {
        std::vector<double> vals;
        for (std::size_t i = 0; i < args.size(); ++i) {
            for (const std::string& piece : split(args[i], ';')) {
                double t;
                if (!parse_number(piece, t)) {
                    errors.add(field, "table entry '" + piece + "' is not a number");
                    return std::nullopt;
                }
                vals.push_back(t);
            }
        }
        if (vals.empty()) {
            errors.add(field, "table needs at least one entry");
            return std::nullopt;
        }
        return ParamLaw::from_table(std::move(vals));
    }
    errors.add(field, "unknown law '" + name + "'");
    return std::nullopt;
}

inline std::optional<GridSpec> parse_grid(const std::string& field, const std::string& text,
                                          ConfigErrors& errors, bool allow_spacing) {
    std::string body = text;
    std::string name;
    std::vector<std::string> args;
    if (parse_call(text, name, args)) {
        if (name != "grid") {
            errors.add(field, "expected grid(start,stop,count[,spacing])");
            return std::nullopt;
        }
    } else {
        args = split(body, ',');
    }
    if (args.size() != 3 && args.size() != 4) {
        errors.add(field, "grid needs start,stop,count[,spacing]");
        return std::nullopt;
    }
    GridSpec grid;
    long long count;
    if (!parse_number(args[0], grid.start) || !parse_number(args[1], grid.stop) ||
        !parse_int(args[2], count)) {
        errors.add(field, "grid arguments must be numeric");
        return std::nullopt;
    }
    if (count < 1) {
        errors.add(field, "grid count must be >= 1");
        return std::nullopt;
    }
    grid.count = static_cast<int>(count);
    if (args.size() == 4) {
        if (!allow_spacing) {
            errors.add(field, "spacing is not applicable here");
            return std::nullopt;
        }
        if (args[3] == "log")
            grid.log_spacing = true;
        else if (args[3] == "linear")
            grid.log_spacing = false;
        else {
            errors.add(field, "spacing must be linear or log");
            return std::nullopt;
        }
    }
    if (grid.log_spacing && (grid.start <= 0.0 || grid.stop <= 0.0)) {
        errors.add(field, "log spacing needs positive endpoints");
        return std::nullopt;
    }
    return grid;
}

} // namespace detail

// Key-value document: one `key: value` per line, '#' comments.
inline std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                           ConfigErrors& errors) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        std::size_t colon = t.find(':');
        if (colon == std::string::npos) {
            errors.add("line " + std::to_string(lineno), "expected 'key: value'");
            continue;
        }
        std::string key = detail::trim(t.substr(0, colon));
        std::string value = detail::trim(t.substr(colon + 1));
        if (key.empty() || value.empty()) {
            errors.add("line " + std::to_string(lineno), "empty key or value");
            continue;
        }
        kv[key] = value;
    }
    return kv;
}

// Validated config from a key map; every violation is collected rather than
// stopping at the first.
inline std::optional<ProblemConfig> parse_config(const std::map<std::string, std::string>& kv,
                                                 ConfigErrors& errors) {
    ProblemConfig cfg;
    std::size_t errors_before_laws = errors.list().size();
    static const std::set<std::string> known_keys = {
        "family", "r",      "r_rule",  "g",       "g_rule",     "a",     "a_rule",
        "b",      "b_rule", "omega",   "values",  "tail_ratio", "d",     "epsilon",
        "criterion", "normalized", "cap", "node_cap", "tau",    "tau0",  "x",
        "s",      "t",      "notion",  "K",       "m",          "order", "count",
        "kernel_r", "out",  "evidence_out", "format", "jobs"};
    for (const auto& [key, value] : kv)
        if (!known_keys.count(key))
            errors.add(key, "unknown configuration key");
    auto get = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end())
            return std::nullopt;
        return it->second;
    };

    if (auto fam = get("family")) {
        if (*fam == "euler")
            cfg.family = Family::euler;
        else if (*fam == "wiener")
            cfg.family = Family::wiener;
        else if (*fam == "korobov")
            cfg.family = Family::korobov;
        else if (*fam == "analytic_korobov")
            cfg.family = Family::analytic_korobov;
        else if (*fam == "explicit")
            cfg.family = Family::explicit_list;
        else
            errors.add("family", "unknown family '" + *fam + "'");
    }

    auto law_key = [&](const char* key, ParamLaw& slot) {
        if (auto text = get(key)) {
            if (auto law = detail::parse_law(key, *text, errors))
                slot = *law;
        }
    };
    law_key("r", cfg.r_law);
    law_key("r_rule", cfg.r_law);
    law_key("g", cfg.g_law);
    law_key("g_rule", cfg.g_law);
    law_key("a", cfg.a_law);
    law_key("a_rule", cfg.a_law);
    law_key("b", cfg.b_law);
    law_key("b_rule", cfg.b_law);
    bool laws_parsed = errors.list().size() == errors_before_laws;

    auto real_key = [&](const char* key, double& slot) {
        if (auto text = get(key)) {
            double v;
            if (detail::parse_number(*text, v))
                slot = v;
            else
                errors.add(key, "not a number: '" + *text + "'");
        }
    };
    real_key("omega", cfg.omega);
    real_key("tau", cfg.tau);
    real_key("tau0", cfg.tau0);
    real_key("x", cfg.x);
    real_key("s", cfg.s);
    real_key("t", cfg.t);
    real_key("tail_ratio", cfg.explicit_tail_ratio);

    auto int_key = [&](const char* key, int& slot, long long lo, long long hi) {
        if (auto text = get(key)) {
            long long v;
            if (!detail::parse_int(*text, v) || v < lo || v > hi)
                errors.add(key, "expected an integer in [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
            else
                slot = static_cast<int>(v);
        }
    };
    int_key("K", cfg.depth, 1, 100000000);
    int_key("m", cfg.m, 1, 100000000);
    int_key("order", cfg.order, 1, 4096);
    int_key("count", cfg.count, 1, 4096);
    int_key("kernel_r", cfg.kernel_r, 0, 64);
    int_key("jobs", cfg.jobs, 0, 1024);

    auto u64_key = [&](const char* key, std::uint64_t& slot) {
        if (auto text = get(key)) {
            long long v;
            if (!detail::parse_int(*text, v) || v < 1)
                errors.add(key, "expected a positive integer");
            else
                slot = static_cast<std::uint64_t>(v);
        }
    };
    u64_key("cap", cfg.cap);
    u64_key("node_cap", cfg.node_cap);

    if (auto text = get("values")) {
        cfg.explicit_values.clear();
        for (const std::string& piece : detail::split(*text, ';')) {
            double v;
            if (!detail::parse_number(piece, v))
                errors.add("values", "entry '" + piece + "' is not a number");
            else
                cfg.explicit_values.push_back(v);
        }
    }

    if (auto text = get("d")) {
        long long v;
        if (detail::parse_int(*text, v)) {
            if (v < 1)
                errors.add("d", "dimension must be >= 1");
            else
                cfg.d_values = {static_cast<int>(v)};
        } else if (auto grid = detail::parse_grid("d", *text, errors, false)) {
            cfg.d_grid = *grid;
            cfg.d_values.clear();
            for (double dv : grid->values())
                cfg.d_values.push_back(static_cast<int>(std::llround(dv)));
            for (int dv : cfg.d_values)
                if (dv < 1)
                    errors.add("d", "grid produces dimensions below 1");
        }
    }

    if (auto text = get("epsilon")) {
        double v;
        if (detail::parse_number(*text, v)) {
            cfg.epsilon_values = {v};
        } else if (auto grid = detail::parse_grid("epsilon", *text, errors, true)) {
            cfg.epsilon_grid = *grid;
            cfg.epsilon_values = grid->values();
        }
    }
    for (double eps : cfg.epsilon_values)
        if (!(eps > 0.0 && eps < 1.0))
            errors.add("epsilon", "must lie in (0,1)");

    if (auto text = get("criterion")) {
        if (*text == "abs")
            cfg.criterion = ErrorCriterion::abs;
        else if (*text == "nor")
            cfg.criterion = ErrorCriterion::nor;
        else
            errors.add("criterion", "must be abs or nor");
    }
    if (auto text = get("normalized")) {
        if (*text == "true")
            cfg.normalized = true;
        else if (*text == "false")
            cfg.normalized = false;
        else
            errors.add("normalized", "must be true or false");
    }
    if (auto text = get("notion")) {
        if (*text == "spt")
            cfg.notion = Notion::spt;
        else if (*text == "pt")
            cfg.notion = Notion::pt;
        else if (*text == "qpt")
            cfg.notion = Notion::qpt;
        else if (*text == "uwt")
            cfg.notion = Notion::uwt;
        else if (*text == "wt")
            cfg.notion = Notion::wt;
        else if (*text == "st-wt" || *text == "st_wt")
            cfg.notion = Notion::st_wt;
        else
            errors.add("notion", "must be one of spt, pt, qpt, uwt, wt, st-wt");
    }
    if (auto text = get("format")) {
        if (*text == "csv" || *text == "json")
            cfg.format = *text;
        else
            errors.add("format", "must be csv or json");
    }
    if (auto text = get("out"))
        cfg.out_path = *text;
    if (auto text = get("evidence_out"))
        cfg.evidence_out = *text;

    // cross-field checks: the rule itself (skipped only when a law failed
    // to parse at all, so every independent violation is still reported)
    if (laws_parsed) {
        for (const std::string& e : validate([&] {
                 SequenceRule r;
                 r.family = cfg.family;
                 r.r_law = cfg.r_law;
                 r.g_law = cfg.g_law;
                 r.a_law = cfg.a_law;
                 r.b_law = cfg.b_law;
                 r.omega = cfg.omega;
                 r.explicit_values = cfg.explicit_values;
                 r.explicit_tail_ratio = cfg.explicit_tail_ratio;
                 return r;
             }()))
            errors.add("rule", e);
    }
    if (!errors.ok())
        return std::nullopt;
    return cfg;
}

// Canonical echo: parsing it back yields an equal config.
inline std::map<std::string, std::string> echo_config(const ProblemConfig& cfg) {
    std::map<std::string, std::string> kv;
    kv["family"] = family_name(cfg.family);
    switch (cfg.family) {
    case Family::euler:
    case Family::wiener:
        kv["r_rule"] = cfg.r_law.text();
        break;
    case Family::korobov:
        kv["r_rule"] = cfg.r_law.text();
        kv["g_rule"] = cfg.g_law.text();
        break;
    case Family::analytic_korobov:
        kv["a_rule"] = cfg.a_law.text();
        kv["b_rule"] = cfg.b_law.text();
        kv["omega"] = format_double(cfg.omega);
        break;
    case Family::explicit_list: {
        std::string vals;
        for (double v : cfg.explicit_values)
            vals += (vals.empty() ? "" : ";") + format_double(v);
        kv["values"] = vals;
        kv["tail_ratio"] = format_double(cfg.explicit_tail_ratio);
        break;
    }
    }
    if (cfg.d_grid) {
        kv["d"] = "grid(" + format_double(cfg.d_grid->start) + "," +
                  format_double(cfg.d_grid->stop) + "," + std::to_string(cfg.d_grid->count) + ")";
    } else {
        kv["d"] = std::to_string(cfg.d_values.front());
    }
    if (cfg.epsilon_grid) {
        kv["epsilon"] = "grid(" + format_double(cfg.epsilon_grid->start) + "," +
                        format_double(cfg.epsilon_grid->stop) + "," +
                        std::to_string(cfg.epsilon_grid->count) + "," +
                        (cfg.epsilon_grid->log_spacing ? "log" : "linear") + ")";
    } else {
        kv["epsilon"] = format_double(cfg.epsilon_values.front());
    }
    kv["criterion"] = criterion_name(cfg.criterion);
    kv["normalized"] = cfg.normalized ? "true" : "false";
    kv["cap"] = format_u64(cfg.cap);
    kv["node_cap"] = format_u64(cfg.node_cap);
    kv["tau"] = format_double(cfg.tau);
    kv["tau0"] = format_double(cfg.tau0);
    kv["x"] = format_double(cfg.x);
    kv["s"] = format_double(cfg.s);
    kv["t"] = format_double(cfg.t);
    switch (cfg.notion) {
    case Notion::spt: kv["notion"] = "spt"; break;
    case Notion::pt: kv["notion"] = "pt"; break;
    case Notion::qpt: kv["notion"] = "qpt"; break;
    case Notion::uwt: kv["notion"] = "uwt"; break;
    case Notion::wt: kv["notion"] = "wt"; break;
    case Notion::st_wt: kv["notion"] = "st-wt"; break;
    }
    kv["K"] = std::to_string(cfg.depth);
    kv["m"] = std::to_string(cfg.m);
    kv["order"] = std::to_string(cfg.order);
    kv["count"] = std::to_string(cfg.count);
    kv["kernel_r"] = std::to_string(cfg.kernel_r);
    kv["format"] = cfg.format;
    kv["jobs"] = std::to_string(cfg.jobs);
    if (!cfg.out_path.empty())
        kv["out"] = cfg.out_path;
    if (!cfg.evidence_out.empty())
        kv["evidence_out"] = cfg.evidence_out;
    return kv;
}

} // namespace tpc
