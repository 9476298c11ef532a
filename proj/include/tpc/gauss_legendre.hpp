#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tpc {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

namespace detail {

// Legendre polynomial P_n and its derivative at x via the three-term
// recurrence (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}.
inline void legendre_pair(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < n; ++k) {
        double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace detail

// Gauss-Legendre rule on [-1, 1]. Nodes are the roots of P_n found by Newton
// iteration from the Chebyshev-like initial guess; weights from the standard
// identity w_i = 2 / ((1 - x_i^2) P_n'(x_i)^2).
inline QuadratureRule gauss_legendre(int n) {
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: order must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double pi = 3.14159265358979323846;
    int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            detail::legendre_pair(n, x, p, dp);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        detail::legendre_pair(n, x, p, dp);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

// Same rule mapped onto [a, b].
inline QuadratureRule gauss_legendre(int n, double a, double b) {
    QuadratureRule rule = gauss_legendre(n);
    double mid = 0.5 * (a + b);
    double hw = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        rule.nodes[i] = mid + hw * rule.nodes[i];
        rule.weights[i] *= hw;
    }
    return rule;
}

} // namespace tpc
