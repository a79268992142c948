#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include "latflow/exponents.hpp"
#include "oracles.hpp"

using namespace latflow;

TEST_CASE("clamped height products") {
    CHECK(pi_plus_of({0, 5}) == 5);
    CHECK(pi_plus_of({2, 3}) == 6);
    CHECK(pi_plus_of({0, 0}) == 1);
    CHECK(pi_plus_of({-7, 0, 2}) == 14);
}

TEST_CASE("records of the golden ratio land on Fibonacci denominators") {
    double phi = (1 + std::sqrt(5.0)) / 2;
    auto recs = best_approximations(std::vector<std::complex<double>>{{phi, 0.0}}, 100000);
    REQUIRE(recs.size() >= 15);
    auto fib = oracles::fibonacci_upto(100000);
    std::set<long long> fib_set(fib.begin(), fib.end());
    double prev = 1e300;
    for (const auto& r : recs) {
        REQUIRE(r.q.size() == 1);
        CHECK(fib_set.count(std::abs(r.q[0])) == 1);
        CHECK(r.error < prev);  // records strictly improve
        prev = r.error;
        CHECK(r.height == std::abs(r.q[0]));
    }
    // a quadratic irrational is approximable at exponent exactly 1
    auto fit = diophantine_exponent_fit(recs);
    CHECK(fit.value == doctest::Approx(1.0).epsilon(0.1));
    auto mfit = multiplicative_exponent_fit(recs, 1);
    CHECK(mfit.value == doctest::Approx(fit.value).epsilon(1e-9));
    // errors decrease, so the Dirichlet constant for n=1 is the first error
    auto dir = dirichlet_bound_fit(recs, 1);
    CHECK(dir.c_estimate == doctest::Approx(recs[0].error));
}

TEST_CASE("exact rational points are flagged as exact hits") {
    std::vector<GaussianRational> z{GaussianRational(Rational(3, 7))};
    auto recs = best_approximations(z, 10);
    bool exact = false;
    for (const auto& r : recs)
        if (r.error == 0) {
            exact = true;
            CHECK(std::abs(r.q[0]) == 7);
        }
    REQUIRE(exact);
    auto fit = diophantine_exponent_fit(recs);
    CHECK(fit.exact_hit);
    CHECK(std::isinf(fit.value));
}

TEST_CASE("a purely imaginary unit never improves past its first record") {
    auto recs = best_approximations(std::vector<std::complex<double>>{{0.0, 1.0}}, 50);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].error == doctest::Approx(1.0));
    CHECK_THROWS_AS(diophantine_exponent_fit(recs), std::invalid_argument);
}

TEST_CASE("record enumeration is worker independent") {
    std::vector<std::complex<double>> z{{0.437281, 0.291736}, {-0.18234, 0.52219}};
    auto one = best_approximations(z, 400, 1);
    auto three = best_approximations(z, 400, 3);
    REQUIRE(one.size() == three.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].q == three[i].q);
        CHECK(one[i].p == three[i].p);
        CHECK(one[i].error == three[i].error);
    }
}

TEST_CASE("exact and floating enumeration agree on representable points") {
    std::vector<GaussianRational> ze{GaussianRational(Rational(5, 16), Rational(-3, 16))};
    std::vector<std::complex<double>> zd{{5.0 / 16, -3.0 / 16}};
    auto re = best_approximations(ze, 60);
    auto rd = best_approximations(zd, 60);
    REQUIRE(re.size() == rd.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        CHECK(re[i].q == rd[i].q);
        CHECK(re[i].error == doctest::Approx(rd[i].error).epsilon(1e-13));
    }
}

TEST_CASE("fits recover a planted exponent from synthetic records") {
    double v = 1.5;
    std::size_t n = 2;
    std::vector<ApproxRecord> recs;
    for (long long h = 2; h <= 40; ++h) {
        ApproxRecord r;
        r.q = {h, h};
        r.p = 1;
        r.height = h;
        r.error = std::pow(double(h), -v);
        r.pi_plus = Int(h) * Int(h);
        recs.push_back(r);
    }
    auto fit = diophantine_exponent_fit(recs);
    CHECK(fit.value == doctest::Approx(v).epsilon(1e-10));
    CHECK(fit.intercept == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fit.tail_count == 20);  // half of 39, rounded up
    // pi_plus = h^2 and n = 2, so the multiplicative regressor is ln h again
    auto mfit = multiplicative_exponent_fit(recs, n);
    CHECK(mfit.value == doctest::Approx(v).epsilon(1e-10));
    // full-tail fit uses every record
    auto full = diophantine_exponent_fit(recs, 1.0);
    CHECK(full.tail_count == recs.size());
    CHECK(full.value == doctest::Approx(v).epsilon(1e-10));
    // Dirichlet statistic: max error * height^{(n-1)/2} over the records
    auto dir = dirichlet_bound_fit(recs, n);
    double expect = 0;
    for (const auto& r : recs)
        expect = std::max(expect, r.error * std::sqrt(double(r.height)));
    CHECK(dir.c_estimate == doctest::Approx(expect));
    CHECK_THROWS_AS(diophantine_exponent_fit(recs, 0.0), std::invalid_argument);
}
