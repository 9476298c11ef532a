#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "tpc/summation.hpp"

namespace tpc {

namespace detail {

// Term count for the direct-summation stage: enough terms that the
// Euler-Maclaurin remainder p(p+1)(p+2) N^{-p-3} / 720 sits far below
// 1e-12, without ever summing more than 1e6 terms.
inline long zeta_term_count(double p) {
    double n = std::ceil(std::pow(1e12, 1.0 / (p - 1.0)));
    if (!(n < 1e6))
        n = 1e6;
    return std::max(64L, static_cast<long>(n));
}

} // namespace detail

// Hurwitz-style tail sum  sum_{j=0}^inf (a + j)^{-p}  for p > 1, a > 0:
// direct summation of the first N terms (compensated), then the
// Euler-Maclaurin correction through the B_2 term,
//
//   sum_{j>=N} (a+j)^{-p} ~ b^{1-p}/(p-1) + b^{-p}/2 + p b^{-p-1}/12,
//   b = a + N.
inline double hurwitz_zeta(double p, double a) {
    if (p <= 1.0)
        throw std::domain_error("hurwitz_zeta: exponent must exceed 1");
    if (a <= 0.0)
        throw std::domain_error("hurwitz_zeta: offset must be positive");
    const long n = detail::zeta_term_count(p);
    NeumaierSum head;
    for (long j = n - 1; j >= 0; --j)
        head.add(std::pow(a + static_cast<double>(j), -p));
    const double b = a + static_cast<double>(n);
    double tail = std::pow(b, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(b, -p) +
                  p * std::pow(b, -p - 1.0) / 12.0;
    return head.value() + tail;
}

// Riemann zeta(p) = sum j^{-p}, p > 1. Absolute accuracy <= 1e-12 for p
// bounded away from 1 (the value itself diverges like 1/(p-1)).
// Values are memoized behind a mutex; concurrent readers see identical
// results since the computation is deterministic.
inline double riemann_zeta(double p) {
    if (p <= 1.0)
        throw std::domain_error("riemann_zeta: argument must exceed 1");
    static std::mutex mutex;
    static std::map<double, double> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(p);
        if (it != cache.end())
            return it->second;
    }
    double value = hurwitz_zeta(p, 1.0);
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(p, value);
    return value;
}

} // namespace tpc
