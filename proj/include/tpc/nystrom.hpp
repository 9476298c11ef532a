#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpc/gauss_legendre.hpp"
#include "tpc/jacobi_eigen.hpp"
#include "tpc/summation.hpp"

namespace tpc {

// Covariance kernel of Brownian motion (r = 0) or its r-fold iterated
// integral on [0,1]:
//
//   r = 0:  K(x, y) = min(x, y)
//   r >= 1: K(x, y) = int_0^{min(x,y)} (x-u)^r (y-u)^r / (r!)^2 du
struct KernelFunction {
    int smoothness = 0; // r

    static KernelFunction brownian() { return KernelFunction{0}; }
    static KernelFunction integrated_wiener(int r) {
        if (r < 1)
            throw std::invalid_argument("integrated_wiener: smoothness must be >= 1");
        return KernelFunction{r};
    }

    std::string name() const {
        return smoothness == 0 ? "brownian"
                               : "integrated_wiener_r" + std::to_string(smoothness);
    }
};

inline double kernel_eval(const KernelFunction& kernel, double x, double y) {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
        throw std::domain_error("kernel_eval: coordinates must lie in [0,1]");
    double m = std::min(x, y);
    if (kernel.smoothness == 0)
        return m;
    if (m == 0.0)
        return 0.0;
    // The integrand (x-u)^r (y-u)^r is a polynomial of degree 2r in u, so a
    // Gauss-Legendre rule with r+1 nodes integrates it exactly.
    int r = kernel.smoothness;
    QuadratureRule rule = gauss_legendre(r + 1, 0.0, m);
    double rfact = 1.0;
    for (int i = 2; i <= r; ++i)
        rfact *= i;
    double acc = 0.0;
    for (std::size_t p = 0; p < rule.size(); ++p) {
        double u = rule.nodes[p];
        // one pow of the product keeps the evaluation exactly symmetric
        acc += rule.weights[p] * std::pow((x - u) * (y - u), r);
    }
    return acc / (rfact * rfact);
}

// Analytic trace of the kernel's integral operator,
// int_0^1 K(x,x) dx = 1 / ((2r+2)(2r+1) (r!)^2).
inline double kernel_trace(const KernelFunction& kernel) {
    int r = kernel.smoothness;
    double rfact = 1.0;
    for (int i = 2; i <= r; ++i)
        rfact *= i;
    return 1.0 / ((2.0 * r + 2.0) * (2.0 * r + 1.0) * rfact * rfact);
}

// Row integral int_0^1 K(x, y) dy in closed form.
//
//   r = 0:  x - x^2/2.
//   r >= 1: split at y = x.  Below the diagonal the y-integral collapses to
//           x^{2r+2} / ((r+1)(2r+2)(r!)^2); above it, it reduces to
//           int_0^x (x-u)^r (1-u)^{r+1} du, a polynomial integrand handled
//           exactly by an (r+2)-point rule.
inline double kernel_row_integral(const KernelFunction& kernel, double x) {
    if (x < 0.0 || x > 1.0)
        throw std::domain_error("kernel_row_integral: x must lie in [0,1]");
    int r = kernel.smoothness;
    if (r == 0)
        return x - 0.5 * x * x;
    if (x == 0.0)
        return 0.0;
    double rfact = 1.0;
    for (int i = 2; i <= r; ++i)
        rfact *= i;
    double below = std::pow(x, 2 * r + 2) / ((r + 1.0) * (2.0 * r + 2.0));
    QuadratureRule rule = gauss_legendre(r + 2, 0.0, x);
    double mixed = 0.0;
    for (std::size_t p = 0; p < rule.size(); ++p) {
        double u = rule.nodes[p];
        mixed += rule.weights[p] * std::pow(x - u, r) * std::pow(1.0 - u, r + 1);
    }
    double above = (mixed - std::pow(x, 2 * r + 2) / (2.0 * r + 2.0)) / (r + 1.0);
    return (below + above) / (rfact * rfact);
}

// Large-index eigenvalue law (pi (j - 1/2))^{-(2r+2)} shared by this kernel
// family; exact for r = 0.
inline double asymptotic_eigenvalue(int smoothness, std::size_t j) {
    const double pi = 3.14159265358979323846;
    return std::pow(pi * (static_cast<double>(j) - 0.5), -(2.0 * smoothness + 2.0));
}

struct NystromReport {
    int smoothness = 0;
    int quadrature_order = 0;
    std::vector<double> eigenvalues;      // top `count`, non-increasing
    double trace_quadrature = 0.0;        // trace of the order-q matrix
    std::vector<double> reference_law;    // asymptotic comparison values
    std::vector<double> deviations;       // (lambda_j - ref_j) / ref_j
    std::vector<double> error_indicator;  // |lambda_q - lambda_{q/2}|, absolute
    double resolution_floor = 0.0;        // absolute floating-point floor
};

namespace detail {

// All eigenvalues of the singularity-subtracted discretization at one order.
//
// The plain product rule M_pq = sqrt(w_p) K(x_p,x_q) sqrt(w_q) loses two
// orders of accuracy on the diagonal kink of these kernels (measured bias
// ~0.14/q^2 on every Brownian eigenvalue), so the row quadrature defect
// against the exact row integrals is folded back onto the diagonal:
//
//   M_pq = sqrt(w_p) K(x_p,x_q) sqrt(w_q)
//          + delta_pq [ int_0^1 K(x_p,y) dy - sum_q w_q K(x_p,x_q) ].
inline std::vector<double> nystrom_solve(const KernelFunction& kernel, int order) {
    QuadratureRule rule = gauss_legendre(order, 0.0, 1.0);
    std::size_t n = rule.size();
    std::vector<double> sqrt_w(n);
    for (std::size_t p = 0; p < n; ++p)
        sqrt_w[p] = std::sqrt(rule.weights[p]);

    SymmetricMatrix m(n);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p; q < n; ++q) {
            double v = sqrt_w[p] * kernel_eval(kernel, rule.nodes[p], rule.nodes[q]) * sqrt_w[q];
            m(p, q) = v;
            m(q, p) = v;
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        NeumaierSum row;
        for (std::size_t q = 0; q < n; ++q)
            row.add(rule.weights[q] * m(p, q) / (sqrt_w[p] * sqrt_w[q]));
        m(p, p) += kernel_row_integral(kernel, rule.nodes[p]) - row.value();
    }
    return jacobi_eigenvalues(std::move(m));
}

} // namespace detail

// Discretizes the integral operator on Gauss-Legendre nodes with diagonal
// singularity subtraction (see detail::nystrom_solve), at the requested
// order and, when the half order still covers `count`, at order/2 as well.
// The residual error follows a q^{-4} law, so one Richardson step
// (16 lambda_q - lambda_{q/2}) / 15 removes the leading term; the two-order
// difference doubles as a per-eigenvalue discretization error indicator.
inline NystromReport nystrom_eigenvalues(const KernelFunction& kernel,
                                         int quadrature_order,
                                         int count) {
    if (quadrature_order < 1)
        throw std::invalid_argument("nystrom_eigenvalues: order must be >= 1");
    if (count < 1 || count > quadrature_order)
        throw std::invalid_argument("nystrom_eigenvalues: need 1 <= count <= order");

    std::vector<double> eig = detail::nystrom_solve(kernel, quadrature_order);

    NystromReport report;
    report.smoothness = kernel.smoothness;
    report.quadrature_order = quadrature_order;
    NeumaierSum trace;
    for (double v : eig)
        trace.add(v);
    report.trace_quadrature = trace.value();
    // Eigenvalues of a symmetric matrix carry absolute errors on the scale
    // of eps * ||M||; deviations below this cannot be resolved in doubles.
    report.resolution_floor = 64.0 * 2.220446049250313e-16 * std::abs(eig.front());

    report.eigenvalues.assign(eig.begin(), eig.begin() + count);
    report.error_indicator.assign(static_cast<std::size_t>(count), 0.0);
    int half = quadrature_order / 2;
    if (half >= count) {
        std::vector<double> coarse = detail::nystrom_solve(kernel, half);
        for (int j = 0; j < count; ++j) {
            std::size_t i = static_cast<std::size_t>(j);
            report.error_indicator[i] = std::abs(eig[i] - coarse[i]);
            report.eigenvalues[i] = (16.0 * eig[i] - coarse[i]) / 15.0;
        }
    }

    report.reference_law.resize(static_cast<std::size_t>(count));
    report.deviations.resize(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j) {
        std::size_t i = static_cast<std::size_t>(j - 1);
        double ref = asymptotic_eigenvalue(kernel.smoothness, static_cast<std::size_t>(j));
        report.reference_law[i] = ref;
        report.deviations[i] = (report.eigenvalues[i] - ref) / ref;
    }
    return report;
}

struct CrossValidation {
    bool pass = true;
    double max_law_deviation = 0.0;   // Brownian: worst |rel dev| over the window
    double trace_error = 0.0;         // |quadrature trace - analytic trace|
    bool deviations_decreasing = true;
    std::string detail;
};

// True iff |dev| is non-increasing over the window, where an increase is
// accepted only below the method's resolution at that index (discretization
// error indicator plus the floating-point floor). The scaled deviations of
// the r >= 1 kernels decay roughly geometrically in j and drop below what
// an order-256 double-precision solve can resolve around j ~ 8; past that
// point only the resolution bound is meaningful.
inline bool deviation_trend_decreasing(const NystromReport& report, int j_lo, int j_hi) {
    for (int j = j_lo; j < j_hi; ++j) {
        std::size_t cur = static_cast<std::size_t>(j - 1);
        std::size_t nxt = cur + 1;
        double next_dev = std::abs(report.deviations[nxt]);
        double resolution =
            (report.error_indicator[nxt] + report.resolution_floor) / report.reference_law[nxt];
        if (next_dev > std::abs(report.deviations[cur]) && next_dev > resolution)
            return false;
    }
    return true;
}

// Brownian eigenvalues admit the closed law, so they are compared directly.
// For r >= 1 only the trace identity and the decay trend of the scaled
// deviations |lambda_j (pi(j-1/2))^{2r+2} - 1| are checkable.
inline CrossValidation cross_validate(const KernelFunction& kernel,
                                      double tolerance,
                                      int quadrature_order = 256) {
    CrossValidation cv;
    if (kernel.smoothness == 0) {
        NystromReport report = nystrom_eigenvalues(kernel, quadrature_order, 10);
        for (std::size_t j = 0; j < report.eigenvalues.size(); ++j)
            cv.max_law_deviation = std::max(cv.max_law_deviation,
                                            std::abs(report.deviations[j]));
        cv.trace_error = std::abs(report.trace_quadrature - kernel_trace(kernel));
        cv.pass = cv.max_law_deviation <= tolerance;
        cv.detail = "closed-law comparison, j <= 10";
        return cv;
    }

    NystromReport report = nystrom_eigenvalues(kernel, quadrature_order, 16);
    cv.trace_error = std::abs(report.trace_quadrature - kernel_trace(kernel));
    cv.deviations_decreasing = deviation_trend_decreasing(report, 3, 12);
    for (int j = 3; j <= 12; ++j)
        cv.max_law_deviation = std::max(
            cv.max_law_deviation, std::abs(report.deviations[static_cast<std::size_t>(j - 1)]));
    cv.pass = cv.trace_error <= tolerance && cv.deviations_decreasing;
    cv.detail = "trace identity and scaled-deviation trend, j in [3,12]";
    return cv;
}

} // namespace tpc
