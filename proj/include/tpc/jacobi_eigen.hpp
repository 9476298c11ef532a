#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tpc {

// Dense symmetric matrix in row-major storage. Only the routines needed by
// the quadrature eigensolver live here; this is not a general linear algebra
// layer.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : a_)
            s += v * v;
        return std::sqrt(s);
    }

    double off_diagonal_norm() const {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                s += 2.0 * a_[i * n_ + j] * a_[i * n_ + j];
        return std::sqrt(s);
    }

private:
    std::size_t n_;
    std::vector<double> a_;
};

struct JacobiOptions {
    double relative_tolerance = 1e-14; // off-diagonal norm vs Frobenius norm
    int max_sweeps = 50;
};

// Cyclic-by-row Jacobi for symmetric eigenvalues. Rotations zero one
// off-diagonal entry at a time; a full sweep visits every upper-triangle
// pair. Eigenvectors are not accumulated. Returns eigenvalues sorted in
// non-increasing order.
inline std::vector<double> jacobi_eigenvalues(SymmetricMatrix a,
                                              const JacobiOptions& opt = {}) {
    const std::size_t n = a.size();
    if (n == 0)
        return {};
    const double norm = a.frobenius_norm();
    const double threshold = opt.relative_tolerance * norm;
    if (norm == 0.0) {
        return std::vector<double>(n, 0.0);
    }

    int sweep = 0;
    while (a.off_diagonal_norm() > threshold) {
        if (++sweep > opt.max_sweeps)
            throw std::runtime_error("jacobi_eigenvalues: no convergence within sweep budget");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (apq == 0.0)
                    continue;
                double app = a(p, p);
                double aqq = a(q, q);
                // Rotation angle chosen so the (p,q) entry vanishes.
                double theta = 0.5 * (aqq - app) / apq;
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                double tau = s / (1.0 + c);

                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q)
                        continue;
                    double akp = a(k, p);
                    double akq = a(k, q);
                    a(k, p) = akp - s * (akq + tau * akp);
                    a(p, k) = a(k, p);
                    a(k, q) = akq + s * (akp - tau * akq);
                    a(q, k) = a(k, q);
                }
            }
        }
    }

    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i)
        eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
}

} // namespace tpc
