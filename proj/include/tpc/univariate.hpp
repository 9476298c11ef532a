#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "tpc/nystrom.hpp"
#include "tpc/sequence_rule.hpp"
#include "tpc/summation.hpp"
#include "tpc/zeta.hpp"

namespace tpc {

// sum_j lambda(j)^x, or a divergence flag when the defining exponent makes
// the series harmonic or worse. `tail_error` bounds the truncation error of
// numerically materialized spectra (Wiener); it is zero for closed forms.
struct PowerSum {
    enum class Status { ok, divergent };
    Status status = Status::ok;
    double value = 0.0;
    double tail_error = 0.0;

    bool ok() const { return status == Status::ok; }
    static PowerSum divergent() { return {Status::divergent, 0.0, 0.0}; }
};

namespace detail {

struct WienerTable {
    int smoothness = 0;
    int quadrature_order = 0;
    std::vector<double> values; // monotone head, j <= truncation
    std::vector<double> logs;
    double law_mismatch = 0.0;  // |relative law deviation| at the last head index
};

// Nystrom-backed Wiener heads are memoized per (r, order, J); concurrent
// lookups return the same shared table.
inline std::shared_ptr<const WienerTable> wiener_table(int r, int order, int truncation) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int>, std::shared_ptr<const WienerTable>> cache;
    std::tuple<int, int, int> key{r, order, truncation};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
    }
    KernelFunction kernel = r == 0 ? KernelFunction::brownian()
                                   : KernelFunction::integrated_wiener(r);
    NystromReport report = nystrom_eigenvalues(kernel, order, truncation);
    auto table = std::make_shared<WienerTable>();
    table->smoothness = r;
    table->quadrature_order = order;
    table->values = report.eigenvalues;
    // Keep the head monotone across rounding at the bottom of the resolved
    // range, and remember how far off the asymptotic law the boundary is.
    for (std::size_t i = 1; i < table->values.size(); ++i)
        if (table->values[i] > table->values[i - 1])
            table->values[i] = table->values[i - 1];
    table->logs.reserve(table->values.size());
    for (double v : table->values)
        table->logs.push_back(v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity());
    table->law_mismatch = std::abs(report.deviations.back());
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, table);
    return cache[key];
}

} // namespace detail

// One coordinate's non-increasing eigenvalue sequence lambda(1) >= lambda(2)
// >= ... >= 0 with closed-form power sums. Immutable value type, safe to
// copy and share across workers.
class UnivariateSpectrum {
public:
    static UnivariateSpectrum euler(int r, bool normalized = false) {
        if (r < 0)
            throw std::invalid_argument("euler: smoothness must be >= 0");
        UnivariateSpectrum s;
        s.family_ = Family::euler;
        s.r_int_ = r;
        s.normalized_ = normalized;
        return s;
    }

    static UnivariateSpectrum wiener(int r, bool normalized = false, int quadrature_order = 256,
                                     int truncation = 64) {
        if (r < 0)
            throw std::invalid_argument("wiener: smoothness must be >= 0");
        if (truncation < 2 || truncation > quadrature_order)
            throw std::invalid_argument("wiener: need 2 <= truncation <= order");
        UnivariateSpectrum s;
        s.family_ = Family::wiener;
        s.r_int_ = r;
        s.normalized_ = normalized;
        s.wiener_ = detail::wiener_table(r, quadrature_order, truncation);
        return s;
    }

    static UnivariateSpectrum korobov(double r, double g) {
        if (!(r > 0.5))
            throw std::invalid_argument("korobov: smoothness must exceed 1/2");
        if (!(g > 0.0 && g <= 1.0))
            throw std::invalid_argument("korobov: scale must lie in (0,1]");
        UnivariateSpectrum s;
        s.family_ = Family::korobov;
        s.r_real_ = r;
        s.g_ = g;
        s.normalized_ = true; // lambda(1) = 1 by construction
        return s;
    }

    static UnivariateSpectrum analytic_korobov(double a, double b, double omega) {
        if (!(a > 0.0) || !(b > 0.0))
            throw std::invalid_argument("analytic_korobov: a and b must be positive");
        if (!(omega > 0.0 && omega < 1.0))
            throw std::invalid_argument("analytic_korobov: omega must lie in (0,1)");
        UnivariateSpectrum s;
        s.family_ = Family::analytic_korobov;
        s.a_ = a;
        s.b_ = b;
        s.omega_ = omega;
        s.normalized_ = true;
        return s;
    }

    static UnivariateSpectrum explicit_list(std::vector<double> values, double tail_ratio = 0.0) {
        if (values.empty() || !(values[0] > 0.0))
            throw std::invalid_argument("explicit: need a positive leading eigenvalue");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] > values[i - 1] || values[i] < 0.0)
                throw std::invalid_argument("explicit: values must be non-increasing and >= 0");
        if (!(tail_ratio >= 0.0 && tail_ratio < 1.0))
            throw std::invalid_argument("explicit: tail ratio must lie in [0,1)");
        UnivariateSpectrum s;
        s.family_ = Family::explicit_list;
        s.values_ = std::move(values);
        s.tail_ratio_ = tail_ratio;
        s.normalized_ = (s.values_[0] == 1.0);
        return s;
    }

    // Coordinate spectrum k of a sequence rule.
    static UnivariateSpectrum from_rule(const SequenceRule& rule, int k, bool normalized) {
        switch (rule.family) {
        case Family::euler:
            return euler(static_cast<int>(rule.r_at(k)), normalized);
        case Family::wiener:
            return wiener(static_cast<int>(rule.r_at(k)), normalized);
        case Family::korobov:
            return korobov(rule.r_at(k), rule.g_at(k));
        case Family::analytic_korobov:
            return analytic_korobov(rule.a_at(k), rule.b_at(k), rule.omega);
        case Family::explicit_list: {
            UnivariateSpectrum s = explicit_list(rule.explicit_values, rule.explicit_tail_ratio);
            return normalized ? s.normalize() : s;
        }
        }
        throw std::logic_error("from_rule: unknown family");
    }

    Family family() const { return family_; }
    bool normalized() const { return normalized_; }

    // lambda(j), j >= 1; beyond an explicit list with zero tail this is 0,
    // which is a value rather than an error.
    double eigenvalue(std::uint64_t j) const {
        if (j < 1)
            throw std::domain_error("eigenvalue: index must be >= 1");
        switch (family_) {
        case Family::euler: {
            double s = 2.0 * r_int_ + 2.0;
            if (normalized_)
                return std::pow(2.0 * static_cast<double>(j) - 1.0, -s);
            const double pi = 3.14159265358979323846;
            return std::pow(pi * (static_cast<double>(j) - 0.5), -s);
        }
        case Family::wiener: {
            double head1 = wiener_->values[0];
            double v = j <= wiener_->values.size()
                           ? wiener_->values[j - 1]
                           : std::min(wiener_->values.back(),
                                      asymptotic_eigenvalue(r_int_, j));
            return normalized_ ? v / head1 : v;
        }
        case Family::korobov:
            return j == 1 ? 1.0 : g_ * std::pow(static_cast<double>(j / 2), -2.0 * r_real_);
        case Family::analytic_korobov:
            return j == 1 ? 1.0 : std::exp(log_eigenvalue(j));
        case Family::explicit_list:
            if (j <= values_.size())
                return values_[j - 1];
            if (tail_ratio_ == 0.0)
                return 0.0;
            return values_.back() *
                   std::pow(tail_ratio_, static_cast<double>(j - values_.size()));
        }
        return 0.0;
    }

    // ln lambda(j); -inf for exact zeros. Used by the product enumerator so
    // that d-fold products neither underflow nor overflow.
    double log_eigenvalue(std::uint64_t j) const {
        if (j < 1)
            throw std::domain_error("log_eigenvalue: index must be >= 1");
        const double neg_inf = -std::numeric_limits<double>::infinity();
        switch (family_) {
        case Family::euler: {
            double s = 2.0 * r_int_ + 2.0;
            if (normalized_)
                return -s * std::log(2.0 * static_cast<double>(j) - 1.0);
            const double pi = 3.14159265358979323846;
            return -s * std::log(pi * (static_cast<double>(j) - 0.5));
        }
        case Family::wiener: {
            double base = normalized_ ? wiener_->logs[0] : 0.0;
            if (j <= wiener_->logs.size())
                return wiener_->logs[j - 1] - base;
            const double pi = 3.14159265358979323846;
            double law = -(2.0 * r_int_ + 2.0) * std::log(pi * (static_cast<double>(j) - 0.5));
            return std::min(wiener_->logs.back(), law) - base;
        }
        case Family::korobov:
            return j == 1 ? 0.0
                          : std::log(g_) - 2.0 * r_real_ * std::log(static_cast<double>(j / 2));
        case Family::analytic_korobov:
            return j == 1 ? 0.0
                          : a_ * std::pow(static_cast<double>(j / 2), b_) * std::log(omega_);
        case Family::explicit_list: {
            double v = eigenvalue(j);
            if (v > 0.0)
                return std::log(v);
            return neg_inf;
        }
        }
        return neg_inf;
    }

    // Eigenvalues divided by lambda(1); ratios are preserved exactly, and
    // normalizing twice is the identity.
    UnivariateSpectrum normalize() const {
        if (!(eigenvalue(1) > 0.0))
            throw std::domain_error("normalize: degenerate spectrum, lambda(1) must be positive");
        UnivariateSpectrum s = *this;
        if (normalized_)
            return s;
        switch (family_) {
        case Family::euler:
        case Family::wiener:
            s.normalized_ = true;
            return s;
        case Family::korobov:
        case Family::analytic_korobov:
            return s; // already lambda(1) = 1
        case Family::explicit_list: {
            double head = values_[0];
            for (double& v : s.values_)
                v /= head;
            s.values_[0] = 1.0;
            s.normalized_ = true;
            return s;
        }
        }
        return s;
    }

    // h = lambda(2) / lambda(1) in [0,1].
    double second_ratio() const {
        double head = eigenvalue(1);
        if (!(head > 0.0))
            throw std::domain_error("second_ratio: degenerate spectrum");
        return eigenvalue(2) / head;
    }

    // sum_j lambda(j)^x via the family closed form.
    PowerSum power_sum(double x) const {
        if (!(x > 0.0))
            throw std::domain_error("power_sum: exponent must be positive");
        PowerSum out;
        switch (family_) {
        case Family::euler: {
            double q = (2.0 * r_int_ + 2.0) * x;
            if (q <= 1.0)
                return PowerSum::divergent();
            // sum (2j-1)^{-q} = (1 - 2^{-q}) zeta(q)
            double odd = (1.0 - std::pow(2.0, -q)) * riemann_zeta(q);
            if (normalized_) {
                out.value = odd;
            } else {
                const double pi = 3.14159265358979323846;
                out.value = std::pow(2.0 / pi, q) * odd;
            }
            return out;
        }
        case Family::wiener: {
            double q = (2.0 * r_int_ + 2.0) * x;
            if (q <= 1.0)
                return PowerSum::divergent();
            NeumaierSum head;
            for (double lg : wiener_->logs)
                head.add(std::exp(x * lg));
            const double pi = 3.14159265358979323846;
            double n = static_cast<double>(wiener_->logs.size());
            // sum_{j>J} (pi (j-1/2))^{-q} = pi^{-q} zeta(q, J + 1/2)
            double tail = std::pow(pi, -q) * hurwitz_zeta(q, n + 0.5);
            out.value = head.value() + tail;
            out.tail_error = (std::pow(1.0 + wiener_->law_mismatch, x) - 1.0) * tail +
                             4.0 * std::numeric_limits<double>::epsilon() * out.value;
            if (normalized_) {
                double scale = std::exp(x * wiener_->logs[0]);
                out.value /= scale;
                out.tail_error /= scale;
            }
            return out;
        }
        case Family::korobov: {
            double q = 2.0 * r_real_ * x;
            if (q <= 1.0)
                return PowerSum::divergent();
            out.value = 1.0 + 2.0 * std::pow(g_, x) * riemann_zeta(q);
            return out;
        }
        case Family::analytic_korobov: {
            // 1 + 2 sum_m omega^{x a m^b}, cut when the next term is below
            // 1e-18 of the running sum.
            double log_omega = std::log(omega_);
            NeumaierSum sum;
            sum.add(1.0);
            for (std::uint64_t m = 1;; ++m) {
                double term = std::exp(x * a_ * std::pow(static_cast<double>(m), b_) * log_omega);
                sum.add(2.0 * term);
                if (term < 1e-18 * sum.value())
                    break;
                if (m > 100000000)
                    throw std::runtime_error("power_sum: analytic Korobov series stalled");
            }
            out.value = sum.value();
            return out;
        }
        case Family::explicit_list: {
            NeumaierSum sum;
            for (double v : values_)
                sum.add(std::pow(v, x));
            if (tail_ratio_ > 0.0 && values_.back() > 0.0) {
                double rx = std::pow(tail_ratio_, x);
                sum.add(std::pow(values_.back(), x) * rx / (1.0 - rx));
            }
            out.value = sum.value();
            return out;
        }
        }
        return out;
    }

    // H(x) = sum_{j>=2} (lambda(j)/lambda(2))^x = (power_sum(x) - lambda(1)^x)
    // / lambda(2)^x, always >= 1 on its convergence domain.
    PowerSum tail_ratio_sum(double x) const {
        double l1 = eigenvalue(1);
        double l2 = eigenvalue(2);
        if (!(l2 > 0.0))
            throw std::domain_error("tail_ratio_sum: lambda(2) must be positive");
        PowerSum ps = power_sum(x);
        if (!ps.ok())
            return ps;
        PowerSum out;
        double scale = std::pow(l2, x);
        out.value = (ps.value - std::pow(l1, x)) / scale;
        out.tail_error = ps.tail_error / scale;
        return out;
    }

private:
    Family family_ = Family::explicit_list;
    bool normalized_ = false;
    int r_int_ = 0;                     // euler / wiener
    double r_real_ = 1.0, g_ = 1.0;     // korobov
    double a_ = 1.0, b_ = 1.0, omega_ = 0.5;
    std::vector<double> values_;
    double tail_ratio_ = 0.0;
    std::shared_ptr<const detail::WienerTable> wiener_;
};

// Empirical Property-(P) quantities for the first K coordinates of a rule:
// unit leading eigenvalues, the sandwich constants for h_k against the
// family's f_k, and the uniform tail-sum bound M_{tau0}.
struct PropertyPReport {
    bool lambda1_is_one = true;
    std::vector<double> h_sequence;
    std::vector<double> f_sequence;
    double a1 = 1.0; // max h_k / f_k
    double a2 = 1.0; // min h_k / f_k
    double tau0 = 0.0;
    double m_tau0 = 0.0; // max_k H(k, tau0)
    bool condition1 = true;
    bool condition2 = true;
    bool condition3 = true;
    std::string diagnostic;
};

inline PropertyPReport property_p_report(const SequenceRule& rule, double tau0, int K,
                                         bool normalized = true) {
    if (!(tau0 > 0.0 && tau0 < 1.0))
        throw std::domain_error("property_p_report: tau0 must lie in (0,1)");
    if (K < 2)
        throw std::domain_error("property_p_report: need K >= 2");
    PropertyPReport report;
    report.tau0 = tau0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int k = 1; k <= K; ++k) {
        UnivariateSpectrum spectrum = UnivariateSpectrum::from_rule(rule, k, normalized);
        if (spectrum.eigenvalue(1) != 1.0) {
            report.lambda1_is_one = false;
            report.condition1 = false;
        }
        double h = spectrum.second_ratio();
        double f = rule.f_at(k);
        report.h_sequence.push_back(h);
        report.f_sequence.push_back(f);
        if (!(h > 0.0 && h <= 1.0) || !(f > 0.0)) {
            report.condition2 = false;
            report.diagnostic += "h or f out of (0,1] at k=" + std::to_string(k) + "; ";
        } else {
            lo = std::min(lo, h / f);
            hi = std::max(hi, h / f);
        }
        if (k > 1 && report.f_sequence[k - 1] > report.f_sequence[k - 2]) {
            report.condition2 = false;
            report.diagnostic += "f increases at k=" + std::to_string(k) + "; ";
        }
        PowerSum hk = spectrum.tail_ratio_sum(tau0);
        if (!hk.ok()) {
            report.condition3 = false;
            report.diagnostic += "H(k,tau0) diverges at k=" + std::to_string(k) + "; ";
        } else {
            report.m_tau0 = std::max(report.m_tau0, hk.value);
        }
    }
    if (hi > 0.0) {
        report.a1 = hi;
        report.a2 = lo;
    }
    return report;
}

} // namespace tpc
