#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tpc/product.hpp"
#include "tpc/summation.hpp"

namespace tpc {

// ABS compares the n-th minimal error against epsilon itself; NOR against
// epsilon times the initial error.
enum class ErrorCriterion { abs, nor };

inline const char* criterion_name(ErrorCriterion c) {
    return c == ErrorCriterion::abs ? "abs" : "nor";
}

struct DivergenceError : std::runtime_error {
    int coordinate;
    explicit DivergenceError(int coord)
        : std::runtime_error("series diverges at coordinate " + std::to_string(coord)),
          coordinate(coord) {}
};

namespace detail {

inline TracePower checked_trace(const ProductProblem& problem, double x) {
    TracePower t = product_trace_power(problem, x);
    if (!t.ok())
        throw DivergenceError(t.divergent_coordinate);
    return t;
}

} // namespace detail

// e(0,d): the error of the zero algorithm, sqrt of the product trace.
inline double initial_error(const ProductProblem& problem) {
    return std::exp(0.5 * detail::checked_trace(problem, 1.0).log_value);
}

struct MinimalError {
    double value = 0.0;
    bool resolution_warning = false; // head within 1e-12 * trace of the trace
    bool capped = false;
};

// e(n,d) = sqrt(trace - head_sum(n)), the tail mass of the rearrangement.
// Near the cancellation floor the complement loses all digits, which is
// reported rather than hidden; a tail whose largest remaining product is an
// exact zero is an exact zero itself.
inline MinimalError minimal_error(const ProductProblem& problem, std::uint64_t n,
                                  std::uint64_t node_cap = 10'000'000) {
    TracePower trace = detail::checked_trace(problem, 1.0);
    MinimalError out;
    if (n == 0) {
        out.value = std::exp(0.5 * trace.log_value);
        return out;
    }
    ProductEnumerator it(problem, node_cap);
    NeumaierSum head;
    for (std::uint64_t i = 0; i < n; ++i) {
        std::optional<RankedEigenvalue> v = it.next();
        if (!v) {
            out.capped = it.cap_reached();
            break;
        }
        head.add(std::exp(v->log_value));
    }
    if (!out.capped) {
        std::optional<RankedEigenvalue> peek = it.next();
        if (peek && peek->log_value == -std::numeric_limits<double>::infinity()) {
            out.value = 0.0;
            out.resolution_warning = true;
            return out;
        }
    }
    double tail = trace.value - head.value();
    if (tail < 1e-12 * trace.value)
        out.resolution_warning = true;
    out.value = std::sqrt(std::max(0.0, tail));
    return out;
}

struct ComplexityQuery {
    double epsilon = 0.5;
    ErrorCriterion criterion = ErrorCriterion::nor;
    std::uint64_t cap = 10'000'000;      // bound on n itself
    std::uint64_t node_cap = 10'000'000; // enumeration memory budget
};

struct ComplexityResult {
    enum class Status { exact, exceeds_cap };
    Status status = Status::exact;
    std::uint64_t n = 0;     // valid when exact
    double tail_at_n = 0.0;  // remaining squared-error mass at n
    double certified_lower = 0.0;
    std::optional<double> certified_upper;
    bool resolution_warning = false;
    double initial_error = 0.0;
    double trace_relative_error = 0.0; // numerically materialized spectra only

    bool exact() const { return status == Status::exact; }
};

double lower_bound_nor(const ProductProblem&, double epsilon, double x);
double trace_lower_bound_nor(const ProductProblem&, double epsilon);

struct BoundValue {
    enum class Status { ok, divergent };
    Status status = Status::ok;
    double value = 0.0;
    double log_value = 0.0;
    int divergent_coordinate = 0;

    bool ok() const { return status == Status::ok; }
};

BoundValue upper_bound_abs(const ProductProblem&, double epsilon, double tau);

namespace detail {

// Certified bracket from the closed-form bounds. The NOR lower bounds hold
// for any problem; transferring them to ABS (and the ABS upper bound to
// NOR) needs n_abs >= n_nor, i.e. an initial error >= 1, which unit leading
// eigenvalues guarantee.
inline void attach_bounds(ComplexityResult& result, const ProductProblem& problem,
                          const ComplexityQuery& query, double log_trace) {
    bool unit = problem.leading_is_unit();
    bool trace_at_least_one = log_trace >= 0.0;
    if (query.criterion == ErrorCriterion::nor || trace_at_least_one) {
        double lb = lower_bound_nor(problem, query.epsilon, 1.0);
        if (unit)
            lb = std::max(lb, trace_lower_bound_nor(problem, query.epsilon));
        result.certified_lower = lb;
    }
    if (query.criterion == ErrorCriterion::abs || trace_at_least_one) {
        BoundValue ub = upper_bound_abs(problem, query.epsilon, 0.25);
        if (ub.ok())
            result.certified_upper = ub.value;
    }
}

} // namespace detail

// n^X(eps, d): the smallest n whose tail drops to eps^2 CRI_d^2, found by
// streaming the rearrangement best-first and accumulating the head.
inline ComplexityResult info_complexity(const ProductProblem& problem,
                                        const ComplexityQuery& query) {
    if (!(query.epsilon > 0.0 && query.epsilon < 1.0))
        throw std::domain_error("info_complexity: epsilon must lie in (0,1)");
    TracePower trace = detail::checked_trace(problem, 1.0);

    ComplexityResult result;
    result.initial_error = std::exp(0.5 * trace.log_value);
    result.trace_relative_error = trace.relative_error;
    double cri2 = query.criterion == ErrorCriterion::abs ? 1.0 : trace.value;
    double threshold = query.epsilon * query.epsilon * cri2;
    if (threshold < 1e-12 * trace.value)
        result.resolution_warning = true;
    detail::attach_bounds(result, problem, query, trace.log_value);

    if (trace.value <= threshold) {
        result.n = 0;
        result.tail_at_n = trace.value;
        return result;
    }

    ProductEnumerator it(problem, query.node_cap);
    NeumaierSum head;
    std::uint64_t pops = 0;
    while (pops < query.cap) {
        std::optional<RankedEigenvalue> v = it.next();
        if (!v)
            break;
        if (v->log_value == -std::numeric_limits<double>::infinity()) {
            // All remaining products are exact zeros: the tail is spent.
            result.n = pops;
            result.tail_at_n = 0.0;
            return result;
        }
        head.add(std::exp(v->log_value));
        ++pops;
        double tail = trace.value - head.value();
        if (tail <= threshold) {
            result.n = pops;
            result.tail_at_n = std::max(0.0, tail);
            return result;
        }
    }
    result.status = ComplexityResult::Status::exceeds_cap;
    result.tail_at_n = std::max(0.0, trace.value - head.value());
    return result;
}

// n^NOR(eps,d) >= (1-eps^2)^{(x+1)/x} (prod_k (1+h_k)/(1+h_k^{x+1}))^{1/x},
// valid for every x > 0.
inline double lower_bound_nor(const ProductProblem& problem, double epsilon, double x) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("lower_bound_nor: epsilon must lie in (0,1)");
    if (!(x > 0.0))
        throw std::domain_error("lower_bound_nor: x must be positive");
    NeumaierSum log_prod;
    for (int k = 1; k <= problem.dimension(); ++k) {
        double h = problem.second_ratio(k);
        log_prod.add(std::log1p(h) - std::log1p(std::pow(h, x + 1.0)));
    }
    double log_bound = (x + 1.0) / x * std::log1p(-epsilon * epsilon) + log_prod.value() / x;
    return std::exp(log_bound);
}

// n^NOR(eps,d) >= (1-eps^2) * trace, valid once lambda_{d,1} = 1.
inline double trace_lower_bound_nor(const ProductProblem& problem, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("trace_lower_bound_nor: epsilon must lie in (0,1)");
    if (!problem.leading_is_unit())
        throw std::domain_error(
            "trace_lower_bound_nor: requires unit leading eigenvalues; normalize first");
    TracePower trace = detail::checked_trace(problem, 1.0);
    return (1.0 - epsilon * epsilon) * trace.value;
}

// n^ABS(eps,d) <= eps^{-2(1-tau)/tau} (sum_j lambda_{d,j}^{1-tau})^{1/tau},
// for tau in (0,1); divergent when some coordinate power sum at 1-tau is.
inline BoundValue upper_bound_abs(const ProductProblem& problem, double epsilon, double tau) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("upper_bound_abs: epsilon must lie in (0,1)");
    if (!(tau > 0.0 && tau < 1.0))
        throw std::domain_error("upper_bound_abs: tau must lie in (0,1)");
    BoundValue out;
    TracePower trace = product_trace_power(problem, 1.0 - tau);
    if (!trace.ok()) {
        out.status = BoundValue::Status::divergent;
        out.divergent_coordinate = trace.divergent_coordinate;
        return out;
    }
    out.log_value =
        -2.0 * (1.0 - tau) / tau * std::log(epsilon) + trace.log_value / tau;
    out.value = std::exp(out.log_value);
    return out;
}

struct SandwichReport {
    enum class Status { ok, divergent };
    Status status = Status::ok;
    double lhs = 0.0;     // ln 2 * sum_k h_k^x
    double middle = 0.0;  // ln sum_j lambda_{d,j}^x = sum_k ln(1 + h_k^x H(k,x))
    double rhs = 0.0;     // M_{tau0} * sum_k h_k^x
    double m_tau0 = 0.0;
    bool left_ok = false;
    bool right_ok = false;
    int divergent_coordinate = 0;

    bool ok() const { return status == Status::ok; }
    bool pass() const { return ok() && left_ok && right_ok; }
};

// The two-sided bound ln2 sum h_k^x <= ln(sum_j lambda_{d,j}^x)
// <= M_{tau0} sum h_k^x for x >= tau0, with M_{tau0} the largest tail-ratio
// sum among the coordinates.
inline SandwichReport sandwich_check(const ProductProblem& problem, double x, double tau0) {
    if (!problem.leading_is_unit())
        throw std::domain_error("sandwich_check: requires unit leading eigenvalues");
    if (!(tau0 > 0.0 && tau0 < 1.0) || x < tau0)
        throw std::domain_error("sandwich_check: need 0 < tau0 < 1 and x >= tau0");
    SandwichReport report;
    NeumaierSum h_pow_sum;
    NeumaierSum middle;
    for (int k = 1; k <= problem.dimension(); ++k) {
        const UnivariateSpectrum& spectrum = problem.coordinate(k);
        double h = spectrum.second_ratio();
        PowerSum tail_x = spectrum.tail_ratio_sum(x);
        PowerSum tail_tau = spectrum.tail_ratio_sum(tau0);
        if (!tail_x.ok() || !tail_tau.ok()) {
            report.status = SandwichReport::Status::divergent;
            report.divergent_coordinate = k;
            return report;
        }
        h_pow_sum.add(std::pow(h, x));
        middle.add(std::log1p(std::pow(h, x) * tail_x.value));
        report.m_tau0 = std::max(report.m_tau0, tail_tau.value);
    }
    report.lhs = std::log(2.0) * h_pow_sum.value();
    report.middle = middle.value();
    report.rhs = report.m_tau0 * h_pow_sum.value();
    report.left_ok = report.lhs <= report.middle;
    report.right_ok = report.middle <= report.rhs;
    return report;
}

} // namespace tpc
