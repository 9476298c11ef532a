#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tpc/summation.hpp"
#include "tpc/zeta.hpp"

using tpc::hurwitz_zeta;
using tpc::riemann_zeta;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Direct-summation oracle with an integral bracket for the tail:
//   sum_{j<=N} j^{-p} + (N+1)^{1-p}/(p-1)  <=  zeta(p)  <=
//   sum_{j<=N} j^{-p} + N^{1-p}/(p-1)
struct Bracket {
    double lo, hi;
};

Bracket zeta_bracket(double p, long n) {
    tpc::NeumaierSum s;
    for (long j = n; j >= 1; --j)
        s.add(std::pow(static_cast<double>(j), -p));
    double partial = s.value();
    return {partial + std::pow(n + 1.0, 1.0 - p) / (p - 1.0),
            partial + std::pow(static_cast<double>(n), 1.0 - p) / (p - 1.0)};
}

} // namespace

TEST_CASE("zeta at analytic points") {
    CHECK(std::abs(riemann_zeta(2.0) - kPi * kPi / 6.0) < 1e-12);
    CHECK(std::abs(riemann_zeta(4.0) - kPi * kPi * kPi * kPi / 90.0) < 1e-12);
    CHECK(std::abs(riemann_zeta(6.0) - std::pow(kPi, 6.0) / 945.0) < 1e-12);
}

TEST_CASE("zeta(1.5) against the frozen brute-force value") {
    // 1e8-term direct summation with integral tail bracket pinned
    // [2.612375348684988, 2.612375348685988]; midpoint frozen below.
    CHECK(std::abs(riemann_zeta(1.5) - 2.612375348685488) < 1.5e-12);
}

TEST_CASE("zeta stays inside the direct-summation bracket") {
    for (double p : {1.25, 1.5, 1.75, 2.5, 3.0, 5.0, 9.0}) {
        Bracket b = zeta_bracket(p, 2000000);
        double z = riemann_zeta(p);
        CHECK(z >= b.lo - 1e-12);
        CHECK(z <= b.hi + 1e-12);
    }
}

TEST_CASE("zeta domain error at and below 1") {
    CHECK_THROWS_AS(riemann_zeta(1.0), std::domain_error);
    CHECK_THROWS_AS(riemann_zeta(0.5), std::domain_error);
    CHECK_THROWS_AS(riemann_zeta(-2.0), std::domain_error);
}

TEST_CASE("hurwitz tail sums") {
    // zeta(q, 1/2) = (2^q - 1) zeta(q)
    CHECK(std::abs(hurwitz_zeta(2.0, 0.5) - 3.0 * riemann_zeta(2.0)) < 1e-11);
    CHECK(std::abs(hurwitz_zeta(3.0, 0.5) - 7.0 * riemann_zeta(3.0)) < 1e-11);
    // zeta(q, 1) = zeta(q)
    CHECK(std::abs(hurwitz_zeta(2.5, 1.0) - riemann_zeta(2.5)) < 1e-12);
    // splitting off the first term: zeta(q, a) = a^{-q} + zeta(q, a+1)
    for (double a : {0.5, 1.5, 7.25}) {
        double whole = hurwitz_zeta(2.2, a);
        double split = std::pow(a, -2.2) + hurwitz_zeta(2.2, a + 1.0);
        CHECK(std::abs(whole - split) < 1e-12);
    }
}
