#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpc/format.hpp"

namespace tpc {

enum class Family { euler, wiener, korobov, analytic_korobov, explicit_list };

inline std::string family_name(Family f) {
    switch (f) {
    case Family::euler: return "euler";
    case Family::wiener: return "wiener";
    case Family::korobov: return "korobov";
    case Family::analytic_korobov: return "analytic_korobov";
    case Family::explicit_list: return "explicit";
    }
    return "?";
}

// One per-coordinate parameter law k -> value, k = 1, 2, ...
//
//   constant     c
//   table        explicit values, defined for k <= size
//   power        c * k^e
//   geometric    c * e^k            (e plays the ratio role)
//   log_growth   c * ln(k + 1)
//   recip_log    c / ln(k + e)      (e plays the shift role)
//   floor_power  floor(c * k^e)
//   floor_log    floor(c * ln(k + 1))
struct ParamLaw {
    enum class Kind {
        constant,
        table,
        power,
        geometric,
        log_growth,
        recip_log,
        floor_power,
        floor_log
    };

    Kind kind = Kind::constant;
    double c = 0.0;
    double e = 0.0;
    std::vector<double> table;

    static ParamLaw constant(double v) { return {Kind::constant, v, 0.0, {}}; }
    static ParamLaw from_table(std::vector<double> v) {
        return {Kind::table, 0.0, 0.0, std::move(v)};
    }
    static ParamLaw power(double c, double e) { return {Kind::power, c, e, {}}; }
    static ParamLaw geometric(double c, double q) { return {Kind::geometric, c, q, {}}; }
    static ParamLaw log_growth(double c) { return {Kind::log_growth, c, 0.0, {}}; }
    static ParamLaw recip_log(double c, double shift) { return {Kind::recip_log, c, shift, {}}; }
    static ParamLaw floor_power(double c, double e) { return {Kind::floor_power, c, e, {}}; }
    static ParamLaw floor_log(double c) { return {Kind::floor_log, c, 0.0, {}}; }

    bool closed_form() const { return kind != Kind::table; }

    double at(int k) const {
        if (k < 1)
            throw std::domain_error("ParamLaw: index must be >= 1");
        double kd = static_cast<double>(k);
        switch (kind) {
        case Kind::constant: return c;
        case Kind::table:
            if (static_cast<std::size_t>(k) > table.size())
                throw std::domain_error("ParamLaw: table has no entry for k=" + std::to_string(k));
            return table[static_cast<std::size_t>(k - 1)];
        case Kind::power: return c * std::pow(kd, e);
        case Kind::geometric: return c * std::pow(e, kd);
        case Kind::log_growth: return c * std::log(kd + 1.0);
        case Kind::recip_log: return c / std::log(kd + e);
        case Kind::floor_power: return std::floor(c * std::pow(kd, e));
        case Kind::floor_log: return std::floor(c * std::log(kd + 1.0));
        }
        return 0.0;
    }

    // Round-trippable canonical form (the config grammar parses it back).
    std::string text() const {
        switch (kind) {
        case Kind::constant: return "constant(" + format_double(c) + ")";
        case Kind::table: {
            std::string vals;
            for (double v : table)
                vals += (vals.empty() ? "" : ";") + format_double(v);
            return "table(" + vals + ")";
        }
        case Kind::power: return "power(" + format_double(c) + "," + format_double(e) + ")";
        case Kind::geometric:
            return "geometric(" + format_double(c) + "," + format_double(e) + ")";
        case Kind::log_growth: return "log(" + format_double(c) + ")";
        case Kind::recip_log:
            return "recip_log(" + format_double(c) + "," + format_double(e) + ")";
        case Kind::floor_power:
            return "floor_power(" + format_double(c) + "," + format_double(e) + ")";
        case Kind::floor_log: return "floor_log(" + format_double(c) + ")";
        }
        return "?";
    }
};

// Per-coordinate parameter assignment for a product problem. The laws are
// checked against the monotonicity assumptions each family imposes:
// non-decreasing integer smoothness for the integrated processes,
// non-increasing scales g_k <= 1 for Korobov, non-decreasing a_k and
// inf b_k > 0 for analytic Korobov.
struct SequenceRule {
    Family family = Family::korobov;

    ParamLaw r_law;           // euler / wiener / korobov smoothness
    ParamLaw g_law;           // korobov scale
    ParamLaw a_law, b_law;    // analytic korobov
    double omega = 0.5;       // analytic korobov base

    std::vector<double> explicit_values;
    double explicit_tail_ratio = 0.0;

    static SequenceRule euler(ParamLaw r);
    static SequenceRule wiener(ParamLaw r);
    static SequenceRule korobov(ParamLaw r, ParamLaw g);
    static SequenceRule analytic_korobov(ParamLaw a, ParamLaw b, double omega);
    static SequenceRule explicit_list(std::vector<double> values, double tail_ratio = 0.0);

    // smoothness for coordinate k (euler/wiener: cast to int)
    double r_at(int k) const { return r_law.at(k); }
    double g_at(int k) const { return g_law.at(k); }
    double a_at(int k) const { return a_law.at(k); }
    double b_at(int k) const { return b_law.at(k); }

    // The comparison sequence f_k each family pairs with its second-ratio
    // h_k: Euler 3^{-(2 r_k + 2)}, Wiener (1+r_k)^{-2}, Korobov g_k,
    // analytic Korobov omega^{a_k}; explicit spectra use h_k itself.
    double f_at(int k) const {
        switch (family) {
        case Family::euler: return std::pow(3.0, -(2.0 * r_at(k) + 2.0));
        case Family::wiener: {
            double r = r_at(k);
            return 1.0 / ((1.0 + r) * (1.0 + r));
        }
        case Family::korobov: return g_at(k);
        case Family::analytic_korobov: return std::pow(omega, a_at(k));
        case Family::explicit_list:
            if (explicit_values.empty() || explicit_values[0] <= 0.0)
                return 0.0;
            return (explicit_values.size() > 1 ? explicit_values[1]
                                               : explicit_values[0] * explicit_tail_ratio) /
                   explicit_values[0];
        }
        return 0.0;
    }
};

namespace detail {

inline bool nonneg_integer(double v) {
    return v >= 0.0 && v == std::floor(v) && v <= 1e9;
}

} // namespace detail

// All violations, with field paths; empty means valid.
inline std::vector<std::string> validate(const SequenceRule& rule) {
    std::vector<std::string> errors;
    auto err = [&](const std::string& m) { errors.push_back(m); };
    using Kind = ParamLaw::Kind;

    switch (rule.family) {
    case Family::euler:
    case Family::wiener: {
        const ParamLaw& law = rule.r_law;
        switch (law.kind) {
        case Kind::constant:
            if (!detail::nonneg_integer(law.c))
                err("r: constant smoothness must be a non-negative integer");
            break;
        case Kind::table:
            for (std::size_t i = 0; i < law.table.size(); ++i) {
                if (!detail::nonneg_integer(law.table[i]))
                    err("r[" + std::to_string(i + 1) + "]: must be a non-negative integer");
                if (i > 0 && law.table[i] < law.table[i - 1])
                    err("r[" + std::to_string(i + 1) + "]: smoothness must be non-decreasing");
            }
            break;
        case Kind::floor_power:
            if (law.c < 0.0 || law.e < 0.0)
                err("r: floor_power needs c >= 0 and exponent >= 0");
            break;
        case Kind::floor_log:
            if (law.c < 0.0)
                err("r: floor_log needs c >= 0");
            break;
        default:
            err("r: smoothness law must yield non-decreasing non-negative integers "
                "(constant, table, floor_power, floor_log)");
        }
        break;
    }
    case Family::korobov: {
        const ParamLaw& r = rule.r_law;
        if (r.kind == Kind::constant) {
            if (!(r.c > 0.5))
                err("r: Korobov smoothness must exceed 1/2");
        } else if (r.kind == Kind::table) {
            for (std::size_t i = 0; i < r.table.size(); ++i)
                if (!(r.table[i] > 0.5))
                    err("r[" + std::to_string(i + 1) + "]: Korobov smoothness must exceed 1/2");
        } else {
            err("r: Korobov smoothness law must be constant or table");
        }
        const ParamLaw& g = rule.g_law;
        switch (g.kind) {
        case Kind::constant:
            if (!(g.c > 0.0 && g.c <= 1.0))
                err("g: scale must lie in (0,1]");
            break;
        case Kind::table:
            for (std::size_t i = 0; i < g.table.size(); ++i) {
                if (!(g.table[i] > 0.0 && g.table[i] <= 1.0))
                    err("g[" + std::to_string(i + 1) + "]: scale must lie in (0,1]");
                if (i > 0 && g.table[i] > g.table[i - 1])
                    err("g[" + std::to_string(i + 1) + "]: scales must be non-increasing");
            }
            break;
        case Kind::power:
            if (!(g.c > 0.0 && g.c <= 1.0) || g.e > 0.0)
                err("g: power law needs c in (0,1] and exponent <= 0");
            break;
        case Kind::geometric:
            if (!(g.c > 0.0) || !(g.e > 0.0 && g.e <= 1.0) || g.c * g.e > 1.0)
                err("g: geometric law needs ratio in (0,1] and c*ratio in (0,1]");
            break;
        case Kind::recip_log:
            if (!(g.c > 0.0) || !(g.e > 0.0) || !(g.c / std::log(1.0 + g.e) <= 1.0))
                err("g: recip_log law needs c > 0, shift > 0 and first value <= 1");
            break;
        default:
            err("g: unsupported scale law for Korobov");
        }
        break;
    }
    case Family::analytic_korobov: {
        if (!(rule.omega > 0.0 && rule.omega < 1.0))
            err("omega: must lie in (0,1)");
        const ParamLaw& a = rule.a_law;
        switch (a.kind) {
        case Kind::constant:
            if (!(a.c > 0.0))
                err("a: must be positive");
            break;
        case Kind::table:
            for (std::size_t i = 0; i < a.table.size(); ++i) {
                if (!(a.table[i] > 0.0))
                    err("a[" + std::to_string(i + 1) + "]: must be positive");
                if (i > 0 && a.table[i] < a.table[i - 1])
                    err("a[" + std::to_string(i + 1) + "]: must be non-decreasing");
            }
            break;
        case Kind::power:
            if (!(a.c > 0.0) || a.e < 0.0)
                err("a: power law needs c > 0 and exponent >= 0");
            break;
        case Kind::log_growth:
            if (!(a.c > 0.0))
                err("a: log law needs c > 0");
            break;
        default:
            err("a: unsupported law for analytic Korobov");
        }
        const ParamLaw& b = rule.b_law;
        if (b.kind == Kind::constant) {
            if (!(b.c > 0.0))
                err("b: must be positive");
        } else if (b.kind == Kind::table) {
            for (std::size_t i = 0; i < b.table.size(); ++i)
                if (!(b.table[i] > 0.0))
                    err("b[" + std::to_string(i + 1) + "]: must be positive");
        } else {
            err("b: law must be constant or table");
        }
        break;
    }
    case Family::explicit_list: {
        if (rule.explicit_values.empty() || !(rule.explicit_values[0] > 0.0))
            err("values: need a non-empty list with positive leading eigenvalue");
        for (std::size_t i = 0; i < rule.explicit_values.size(); ++i) {
            if (rule.explicit_values[i] < 0.0)
                err("values[" + std::to_string(i + 1) + "]: eigenvalues must be non-negative");
            if (i > 0 && rule.explicit_values[i] > rule.explicit_values[i - 1])
                err("values[" + std::to_string(i + 1) + "]: eigenvalues must be non-increasing");
        }
        if (!(rule.explicit_tail_ratio >= 0.0 && rule.explicit_tail_ratio < 1.0))
            err("tail: geometric ratio must lie in [0,1)");
        break;
    }
    }
    return errors;
}

namespace detail {

inline SequenceRule checked(SequenceRule rule) {
    std::vector<std::string> errors = validate(rule);
    if (!errors.empty()) {
        std::string joined;
        for (const std::string& e : errors)
            joined += (joined.empty() ? "" : "; ") + e;
        throw std::invalid_argument("SequenceRule: " + joined);
    }
    return rule;
}

} // namespace detail

inline SequenceRule SequenceRule::euler(ParamLaw r) {
    SequenceRule rule;
    rule.family = Family::euler;
    rule.r_law = std::move(r);
    return detail::checked(std::move(rule));
}

inline SequenceRule SequenceRule::wiener(ParamLaw r) {
    SequenceRule rule;
    rule.family = Family::wiener;
    rule.r_law = std::move(r);
    return detail::checked(std::move(rule));
}

inline SequenceRule SequenceRule::korobov(ParamLaw r, ParamLaw g) {
    SequenceRule rule;
    rule.family = Family::korobov;
    rule.r_law = std::move(r);
    rule.g_law = std::move(g);
    return detail::checked(std::move(rule));
}

inline SequenceRule SequenceRule::analytic_korobov(ParamLaw a, ParamLaw b, double omega) {
    SequenceRule rule;
    rule.family = Family::analytic_korobov;
    rule.a_law = std::move(a);
    rule.b_law = std::move(b);
    rule.omega = omega;
    return detail::checked(std::move(rule));
}

inline SequenceRule SequenceRule::explicit_list(std::vector<double> values, double tail_ratio) {
    SequenceRule rule;
    rule.family = Family::explicit_list;
    rule.explicit_values = std::move(values);
    rule.explicit_tail_ratio = tail_ratio;
    return detail::checked(std::move(rule));
}

} // namespace tpc
