#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tpc/complexity.hpp"
#include "tpc/format.hpp"
#include "tpc/sequence_rule.hpp"

namespace tpc {

enum class Notion { spt, pt, qpt, uwt, wt, st_wt };

inline std::string notion_name(Notion n) {
    switch (n) {
    case Notion::spt: return "SPT";
    case Notion::pt: return "PT";
    case Notion::qpt: return "QPT";
    case Notion::uwt: return "UWT";
    case Notion::wt: return "WT";
    case Notion::st_wt: return "st-WT";
    }
    return "?";
}

enum class Decision { holds, fails, inconclusive };

inline std::string decision_name(Decision d) {
    switch (d) {
    case Decision::holds: return "holds";
    case Decision::fails: return "fails";
    case Decision::inconclusive: return "inconclusive";
    }
    return "?";
}

struct TractabilityVerdict {
    Notion notion = Notion::wt;
    double s = 0.0, t = 0.0; // set for st_wt
    std::string criterion_used;
    Decision decision = Decision::inconclusive;
    std::vector<std::pair<int, double>> evidence; // (k, c_k) samples
    double limit_estimate = std::numeric_limits<double>::quiet_NaN();
    std::string trend; // populated for inconclusive verdicts
};

struct UnsupportedCombination : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ln+ x = max(ln x, 1).
inline double ln_plus(double x) { return std::max(std::log(x), 1.0); }

// Generic criterion sequence c_k = k^{1-t} f_k ln+(1/f_k) with the family's
// comparison sequence f_k.
inline std::vector<std::pair<int, double>> criterion_sequence(const SequenceRule& rule, double t,
                                                              int K) {
    if (K < 1)
        throw std::domain_error("criterion_sequence: need K >= 1");
    std::vector<std::pair<int, double>> out;
    out.reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) {
        double f = rule.f_at(k);
        double c = f > 0.0 ? std::pow(static_cast<double>(k), 1.0 - t) * f * ln_plus(1.0 / f)
                           : 0.0;
        out.emplace_back(k, c);
    }
    return out;
}

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LimitVerdict {
    Decision decision = Decision::inconclusive;
    double limit = std::numeric_limits<double>::quiet_NaN();
};

inline LimitVerdict holds_with(double limit) { return {Decision::holds, limit}; }
inline LimitVerdict fails_with(double limit) { return {Decision::fails, limit}; }

// Family-specific term of the limit criterion for (s,t)-WT with t in (0,1).
inline double st_term(const SequenceRule& rule, int k, double t) {
    double kp = std::pow(static_cast<double>(k), 1.0 - t);
    switch (rule.family) {
    case Family::euler: {
        double r = rule.r_at(k);
        return kp * std::pow(3.0, -2.0 * r) * (1.0 + r);
    }
    case Family::wiener: {
        double r = rule.r_at(k);
        return kp / ((1.0 + r) * (1.0 + r)) * ln_plus(1.0 + r);
    }
    case Family::korobov: {
        double g = rule.g_at(k);
        return g > 0.0 ? kp * g * ln_plus(1.0 / g) : 0.0; // guards underflowed scales
    }
    case Family::analytic_korobov: {
        double a = rule.a_at(k);
        return kp * a * std::pow(rule.omega, a);
    }
    case Family::explicit_list: {
        double f = rule.f_at(k);
        return f > 0.0 ? kp * f * ln_plus(1.0 / f) : 0.0;
    }
    }
    return 0.0;
}

// Is the constant-parameter degenerate form of a law (power with zero
// exponent, geometric with unit ratio, floors of constants)?
inline bool effectively_constant(const ParamLaw& law) {
    using Kind = ParamLaw::Kind;
    switch (law.kind) {
    case Kind::constant: return true;
    case Kind::power:
    case Kind::floor_power: return law.e == 0.0 || law.c == 0.0;
    case Kind::geometric: return law.e == 1.0;
    case Kind::floor_log: return law.c == 0.0;
    default: return false;
    }
}

// Closed-form limit of the (s,t) criterion sequence for t in (0,1);
// inconclusive for table rules.
inline LimitVerdict st_limit(const SequenceRule& rule, double t) {
    using Kind = ParamLaw::Kind;
    switch (rule.family) {
    case Family::euler: {
        const ParamLaw& law = rule.r_law;
        if (law.kind == Kind::table)
            return {};
        if (effectively_constant(law))
            return fails_with(kInf);
        if (law.kind == Kind::floor_power)
            return holds_with(0.0);
        // floor_log: k^{1-t} 3^{-2 c ln k} grows iff 2 c ln3 <= 1-t
        return 2.0 * law.c * std::log(3.0) > 1.0 - t ? holds_with(0.0) : fails_with(kInf);
    }
    case Family::wiener: {
        const ParamLaw& law = rule.r_law;
        if (law.kind == Kind::table)
            return {};
        if (effectively_constant(law))
            return fails_with(kInf);
        if (law.kind == Kind::floor_power)
            return 2.0 * law.e > 1.0 - t ? holds_with(0.0) : fails_with(kInf);
        return fails_with(kInf); // floor_log: polynomial growth beats log decay
    }
    case Family::korobov: {
        const ParamLaw& law = rule.g_law;
        if (law.kind == Kind::table)
            return {};
        if (effectively_constant(law))
            return fails_with(kInf);
        if (law.kind == Kind::power)
            return -law.e > 1.0 - t ? holds_with(0.0) : fails_with(kInf);
        if (law.kind == Kind::geometric)
            return holds_with(0.0);
        return fails_with(kInf); // recip_log decays below any power
    }
    case Family::analytic_korobov: {
        const ParamLaw& law = rule.a_law;
        if (law.kind == Kind::table)
            return {};
        if (effectively_constant(law))
            return fails_with(kInf);
        if (law.kind == Kind::power)
            return holds_with(0.0);
        // log growth: omega^{c ln k} = k^{-c ln(1/omega)}
        return law.c * std::log(1.0 / rule.omega) > 1.0 - t ? holds_with(0.0)
                                                            : fails_with(kInf);
    }
    case Family::explicit_list: {
        double f = rule.f_at(1);
        return f > 0.0 ? fails_with(kInf) : holds_with(0.0);
    }
    }
    return {};
}

// Does f_k tend to zero? (the WT criterion shared by all families)
inline LimitVerdict wt_limit(const SequenceRule& rule) {
    using Kind = ParamLaw::Kind;
    auto from_vanishing = [](bool vanishes, double stuck_at) {
        return vanishes ? holds_with(0.0) : fails_with(stuck_at);
    };
    switch (rule.family) {
    case Family::euler:
    case Family::wiener: {
        const ParamLaw& law = rule.r_law;
        if (law.kind == Kind::table)
            return {};
        bool grows = !effectively_constant(law) &&
                     (law.kind == Kind::floor_power || law.kind == Kind::floor_log);
        return from_vanishing(grows, rule.f_at(1));
    }
    case Family::korobov: {
        const ParamLaw& law = rule.g_law;
        if (law.kind == Kind::table)
            return {};
        bool vanishes = !effectively_constant(law) &&
                        (law.kind == Kind::power || law.kind == Kind::geometric ||
                         law.kind == Kind::recip_log);
        return from_vanishing(vanishes, law.kind == Kind::constant ? law.c : rule.f_at(1));
    }
    case Family::analytic_korobov: {
        const ParamLaw& law = rule.a_law;
        if (law.kind == Kind::table)
            return {};
        bool vanishes = !effectively_constant(law) &&
                        (law.kind == Kind::power || law.kind == Kind::log_growth);
        return from_vanishing(vanishes, rule.f_at(1));
    }
    case Family::explicit_list: {
        double f = rule.f_at(1);
        return from_vanishing(f == 0.0, f);
    }
    }
    return {};
}

// liminf of the family's polynomial-tractability ratio sequence:
//   Euler   r_k / ln k          Wiener  ln r_k / ln k
//   Korobov ln(1/g_j) / ln j    AKorobov a_j / ln j
inline LimitVerdict ratio_liminf(const SequenceRule& rule) {
    using Kind = ParamLaw::Kind;
    const ParamLaw& law = rule.family == Family::korobov ? rule.g_law
                          : rule.family == Family::analytic_korobov ? rule.a_law
                                                                    : rule.r_law;
    if (law.kind == Kind::table)
        return {};
    LimitVerdict v;
    v.decision = Decision::holds; // decision filled in by the caller; limit matters here
    switch (rule.family) {
    case Family::euler:
        if (effectively_constant(law))
            v.limit = 0.0;
        else if (law.kind == Kind::floor_power)
            v.limit = kInf;
        else
            v.limit = law.c; // floor_log
        return v;
    case Family::wiener:
        if (effectively_constant(law))
            v.limit = 0.0;
        else if (law.kind == Kind::floor_power)
            v.limit = law.e;
        else
            v.limit = 0.0; // floor_log
        return v;
    case Family::korobov:
        if (effectively_constant(law))
            v.limit = 0.0;
        else if (law.kind == Kind::power)
            v.limit = -law.e;
        else if (law.kind == Kind::geometric)
            v.limit = kInf;
        else
            v.limit = 0.0; // recip_log
        return v;
    case Family::analytic_korobov:
        if (effectively_constant(law))
            v.limit = 0.0;
        else if (law.kind == Kind::power)
            v.limit = kInf;
        else
            v.limit = law.c; // log growth
        return v;
    default:
        return {};
    }
}

// Threshold the liminf must clear for SPT/PT (strict) and UWT (non-strict).
inline double ratio_threshold(const SequenceRule& rule) {
    switch (rule.family) {
    case Family::euler: return 1.0 / (2.0 * std::log(3.0));
    case Family::wiener: return 0.5;
    case Family::korobov: return 1.0;
    case Family::analytic_korobov: return 1.0 / std::log(1.0 / rule.omega);
    default: return kInf;
    }
}

// QPT term whose partial sums, normalized by ln+ d, must stay bounded.
inline double qpt_term(const SequenceRule& rule, int k) {
    switch (rule.family) {
    case Family::euler: {
        double r = rule.r_at(k);
        return (1.0 + r) * std::pow(3.0, -2.0 * r);
    }
    case Family::wiener: {
        double r = rule.r_at(k);
        return ln_plus(r) / ((1.0 + r) * (1.0 + r));
    }
    case Family::korobov: {
        double g = rule.g_at(k);
        return g > 0.0 ? g * ln_plus(1.0 / g) : 0.0;
    }
    case Family::analytic_korobov: {
        double a = rule.a_at(k);
        return a * std::pow(rule.omega, a);
    }
    default:
        return 0.0;
    }
}

// Whether the QPT partial sums stay bounded, decided from the term decay.
inline LimitVerdict qpt_limit(const SequenceRule& rule) {
    using Kind = ParamLaw::Kind;
    const ParamLaw& law = rule.family == Family::korobov ? rule.g_law
                          : rule.family == Family::analytic_korobov ? rule.a_law
                                                                    : rule.r_law;
    if (law.kind == Kind::table)
        return {};
    switch (rule.family) {
    case Family::euler:
        if (effectively_constant(law))
            return fails_with(kInf);
        if (law.kind == Kind::floor_power)
            return holds_with(0.0);
        return 2.0 * law.c * std::log(3.0) > 1.0 ? holds_with(0.0) : fails_with(kInf);
    case Family::wiener:
        if (effectively_constant(law))
            return fails_with(kInf);
        if (law.kind == Kind::floor_power)
            return 2.0 * law.e > 1.0 ? holds_with(0.0) : fails_with(kInf);
        return fails_with(kInf);
    case Family::korobov:
        if (effectively_constant(law))
            return fails_with(kInf);
        if (law.kind == Kind::power)
            return -law.e > 1.0 ? holds_with(0.0) : fails_with(kInf);
        if (law.kind == Kind::geometric)
            return holds_with(0.0);
        return fails_with(kInf);
    case Family::analytic_korobov:
        if (effectively_constant(law))
            return fails_with(kInf);
        if (law.kind == Kind::power)
            return holds_with(0.0);
        return law.c * std::log(1.0 / rule.omega) > 1.0 ? holds_with(0.0) : fails_with(kInf);
    default:
        return {};
    }
}

inline std::vector<std::pair<int, double>> sample_sequence(int K,
                                                           const std::function<double(int)>& f) {
    std::vector<std::pair<int, double>> out;
    for (int k = 1; k <= K; k *= 2) {
        out.emplace_back(k, f(k));
        if (k > K / 2)
            break;
    }
    if (out.empty() || out.back().first != K)
        out.emplace_back(K, f(K));
    return out;
}

inline std::string trend_of(const std::vector<std::pair<int, double>>& evidence) {
    if (evidence.size() < 2)
        return "insufficient";
    std::size_t start = evidence.size() - std::max<std::size_t>(2, evidence.size() / 4);
    bool down = true, up = true;
    for (std::size_t i = start + 1; i < evidence.size(); ++i) {
        if (evidence[i].second > evidence[i - 1].second)
            down = false;
        if (evidence[i].second < evidence[i - 1].second)
            up = false;
    }
    std::string shape = down && up ? "flat" : down ? "decreasing" : up ? "increasing" : "mixed";
    return "last-quartile " + shape;
}

} // namespace detail

// (s,t)-weak tractability. t > 1 holds for every rule; t = 1 reduces to the
// WT criterion lim f_k = 0; t in (0,1) is decided by the family's limit
// criterion. Closed-form laws get analytic limits; table rules only report
// numeric evidence and stay inconclusive.
inline TractabilityVerdict st_wt_classify(const SequenceRule& rule, double s, double t, int K) {
    if (!(s > 0.0) || !(t > 0.0))
        throw std::domain_error("st_wt_classify: need s > 0 and t > 0");
    if (K < 1)
        throw std::domain_error("st_wt_classify: need K >= 1");
    TractabilityVerdict verdict;
    verdict.notion = Notion::st_wt;
    verdict.s = s;
    verdict.t = t;
    verdict.evidence =
        detail::sample_sequence(K, [&](int k) { return detail::st_term(rule, k, t); });

    if (t > 1.0) {
        verdict.criterion_used = "t > 1: always holds";
        verdict.decision = Decision::holds;
        verdict.limit_estimate = 0.0;
        return verdict;
    }
    if (t == 1.0) {
        detail::LimitVerdict lv = detail::wt_limit(rule);
        verdict.criterion_used = "t = 1: equivalent to WT, lim f_k = 0";
        verdict.decision = lv.decision;
        verdict.limit_estimate = lv.limit;
        if (lv.decision == Decision::inconclusive)
            verdict.trend = detail::trend_of(verdict.evidence);
        return verdict;
    }
    switch (rule.family) {
    case Family::euler:
        verdict.criterion_used = "lim k^{1-t} 3^{-2 r_k} (1+r_k) = 0";
        break;
    case Family::wiener:
        verdict.criterion_used = "lim k^{1-t} (1+r_k)^{-2} ln+(1+r_k) = 0";
        break;
    case Family::korobov:
        verdict.criterion_used = "lim k^{1-t} g_k ln+(1/g_k) = 0";
        break;
    case Family::analytic_korobov:
        verdict.criterion_used = "lim k^{1-t} a_k omega^{a_k} = 0";
        break;
    case Family::explicit_list:
        verdict.criterion_used = "lim k^{1-t} f_k ln+(1/f_k) = 0";
        break;
    }
    detail::LimitVerdict lv = detail::st_limit(rule, t);
    verdict.decision = lv.decision;
    verdict.limit_estimate = lv.limit;
    if (lv.decision == Decision::inconclusive)
        verdict.trend = detail::trend_of(verdict.evidence);
    return verdict;
}

// Classify one tractability notion for a rule under a criterion. The
// integrated-process conditions are normalized-criterion results only, and
// QPT is normalized-only for every family; unsupported combinations throw.
inline TractabilityVerdict classify(const SequenceRule& rule, Notion notion,
                                    ErrorCriterion criterion, int K,
                                    double s = 1.0, double t = 0.5) {
    if (K < 1)
        throw std::domain_error("classify: need K >= 1");
    if ((rule.family == Family::euler || rule.family == Family::wiener) &&
        criterion == ErrorCriterion::abs)
        throw UnsupportedCombination(
            "no absolute-criterion conditions are available for the integrated processes; "
            "use the normalized criterion");
    if (notion == Notion::qpt && criterion == ErrorCriterion::abs)
        throw UnsupportedCombination(
            "the QPT condition is available under the normalized criterion only");
    if (rule.family == Family::explicit_list && notion != Notion::wt && notion != Notion::st_wt)
        throw UnsupportedCombination(
            "explicit spectra only support the WT and (s,t)-WT criteria");

    if (notion == Notion::st_wt)
        return st_wt_classify(rule, s, t, K);

    TractabilityVerdict verdict;
    verdict.notion = notion;
    switch (notion) {
    case Notion::wt: {
        detail::LimitVerdict lv = detail::wt_limit(rule);
        verdict.criterion_used = "lim f_k = 0";
        verdict.decision = lv.decision;
        verdict.limit_estimate = lv.limit;
        verdict.evidence = detail::sample_sequence(K, [&](int k) { return rule.f_at(k); });
        if (lv.decision == Decision::inconclusive)
            verdict.trend = detail::trend_of(verdict.evidence);
        return verdict;
    }
    case Notion::spt:
    case Notion::pt:
    case Notion::uwt: {
        double threshold = detail::ratio_threshold(rule);
        bool strict = notion != Notion::uwt;
        switch (rule.family) {
        case Family::euler:
            verdict.criterion_used = "liminf r_k / ln k";
            break;
        case Family::wiener:
            verdict.criterion_used = "liminf ln(r_k) / ln k";
            break;
        case Family::korobov:
            verdict.criterion_used = "liminf ln(1/g_k) / ln k";
            break;
        case Family::analytic_korobov:
            verdict.criterion_used = "liminf a_k / ln k";
            break;
        default:
            break;
        }
        verdict.criterion_used += strict ? " > " : " >= ";
        verdict.criterion_used += format_double(threshold);
        detail::LimitVerdict lv = detail::ratio_liminf(rule);
        verdict.limit_estimate = lv.limit;
        if (lv.decision == Decision::inconclusive) {
            verdict.decision = Decision::inconclusive;
        } else {
            bool ok = strict ? lv.limit > threshold : lv.limit >= threshold;
            verdict.decision = ok ? Decision::holds : Decision::fails;
        }
        verdict.evidence = detail::sample_sequence(K, [&](int k) {
            double lnk = k == 1 ? 1.0 : std::log(static_cast<double>(k));
            switch (rule.family) {
            case Family::euler: return rule.r_at(k) / lnk;
            case Family::wiener: {
                double r = rule.r_at(k);
                return r > 0.0 ? std::log(r) / lnk : 0.0;
            }
            case Family::korobov: return std::log(1.0 / rule.g_at(k)) / lnk;
            case Family::analytic_korobov: return rule.a_at(k) / lnk;
            default: return 0.0;
            }
        });
        if (verdict.decision == Decision::inconclusive)
            verdict.trend = detail::trend_of(verdict.evidence);
        return verdict;
    }
    case Notion::qpt: {
        verdict.criterion_used = "sup_d (1/ln+ d) sum_{k<=d} q_k < inf";
        detail::LimitVerdict lv = detail::qpt_limit(rule);
        verdict.decision = lv.decision;
        verdict.limit_estimate = lv.limit;
        // evidence: normalized partial sums at sampled depths
        NeumaierSum partial;
        int next = 1;
        std::vector<std::pair<int, double>> samples;
        for (int k = 1; k <= K; ++k) {
            partial.add(detail::qpt_term(rule, k));
            if (k == next || k == K) {
                samples.emplace_back(k, partial.value() / ln_plus(static_cast<double>(k)));
                next *= 2;
            }
        }
        verdict.evidence = std::move(samples);
        if (lv.decision == Decision::inconclusive)
            verdict.trend = detail::trend_of(verdict.evidence);
        return verdict;
    }
    default:
        break;
    }
    throw std::logic_error("classify: unhandled notion");
}

} // namespace tpc
