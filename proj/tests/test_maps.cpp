#include "doctest.h"

#include <complex>
#include <cstdio>
#include <string>

#include "latflow/maps.hpp"
#include "latflow/sampling.hpp"

using namespace latflow;

namespace {

GaussianRational gr_pow(const GaussianRational& z, int k) {
    GaussianRational acc(1);
    for (int i = 0; i < k; ++i) acc = acc * z;
    return acc;
}

}  // namespace

TEST_CASE("power curve components are exact powers") {
    auto f = mahler_curve(3);
    REQUIRE(f.n == 3);
    // z^2 = (x^2 - y^2) + 2ixy, coefficient by coefficient
    const auto& z2 = f.components[1].terms;
    REQUIRE(z2.size() == 3);
    CHECK(z2.at({2, 0}) == GaussianRational(1));
    CHECK(z2.at({0, 2}) == GaussianRational(-1));
    CHECK(z2.at({1, 1}) == GaussianRational(0, 2));
    // all components against exact complex powers at rational points
    SplitMix64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        Rational x(long(rng.next_int(-9, 9)), long(rng.next_int(1, 7)));
        Rational y(long(rng.next_int(-9, 9)), long(rng.next_int(1, 7)));
        GaussianRational z(x, y);
        auto vals = f.eval_exact(x, y);
        for (int k = 1; k <= 3; ++k) CHECK(vals[k - 1] == gr_pow(z, k));
    }
}

TEST_CASE("floating evaluation tracks the exact one") {
    SplitMix64 rng(62);
    for (const auto& name : builtin_map_names()) {
        auto f = builtin_map(name);
        for (int trial = 0; trial < 10; ++trial) {
            long xn = long(rng.next_int(-8, 8)), yn = long(rng.next_int(-8, 8));
            double x = double(xn) / 16, y = double(yn) / 16;  // exactly representable
            auto fd = f.eval(x, y);
            auto fe = f.eval_exact(Rational(xn, 16), Rational(yn, 16));
            REQUIRE(fd.size() == f.n);
            for (std::size_t i = 0; i < f.n; ++i) {
                CHECK(fd[i].real() ==
                      doctest::Approx(fe[i].re.convert_to<double>()).epsilon(1e-14));
                CHECK(fd[i].imag() ==
                      doctest::Approx(fe[i].im.convert_to<double>()).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("the coefficient-level Cauchy-Riemann test") {
    CHECK(mahler_curve(4).analytic());
    CHECK(line_iz().analytic());
    CHECK_FALSE(nonextremal_example().analytic());

    // conjugate coordinate: x - iy fails, x + iy passes
    AnalyticMap conj_map;
    conj_map.n = 1;
    conj_map.components.resize(1);
    conj_map.components[0].add(1, 0, GaussianRational(1));
    conj_map.components[0].add(0, 1, GaussianRational(0, -1));
    CHECK_FALSE(conj_map.analytic());
    AnalyticMap plain;
    plain.n = 1;
    plain.components.resize(1);
    plain.components[0].add(1, 0, GaussianRational(1));
    plain.components[0].add(0, 1, GaussianRational(0, 1));
    CHECK(plain.analytic());

    // a constant is trivially analytic
    AnalyticMap c;
    c.n = 1;
    c.components.resize(1);
    c.components[0].add(0, 0, GaussianRational(7));
    CHECK(c.analytic());
}

TEST_CASE("independence over the two fields separates the builtins") {
    auto mahler = mahler_curve(2);
    CHECK(independent_over_reals(mahler));
    CHECK(independent_over_complexes(mahler));

    // (z, iz): no real relation, but iz = i * z over C
    auto line = line_iz();
    CHECK(independent_over_reals(line));
    CHECK_FALSE(independent_over_complexes(line));

    auto bad = nonextremal_example();
    CHECK(independent_over_reals(bad));
    CHECK(independent_over_complexes(bad));

    // (z, 2z) has the real relation 2 f1 - f2 = 0
    AnalyticMap dep;
    dep.n = 2;
    dep.components.resize(2);
    dep.components[0].add(1, 0, GaussianRational(1));
    dep.components[0].add(0, 1, GaussianRational(0, 1));
    dep.components[1].add(1, 0, GaussianRational(2));
    dep.components[1].add(0, 1, GaussianRational(0, 2));
    CHECK_FALSE(independent_over_reals(dep));
    CHECK_FALSE(independent_over_complexes(dep));

    // a constant component collides with the affine term
    AnalyticMap con;
    con.n = 1;
    con.components.resize(1);
    con.components[0].add(0, 0, GaussianRational(Rational(3, 2)));
    CHECK_FALSE(independent_over_reals(con));
}

TEST_CASE("serialization round-trips bit for bit") {
    for (const auto& name : builtin_map_names()) {
        auto f = builtin_map(name);
        auto g = parse_map(serialize_map(f));
        REQUIRE(g.n == f.n);
        for (std::size_t i = 0; i < f.n; ++i) CHECK(g.components[i].terms == f.components[i].terms);
    }
    // whitespace and comment tolerance
    auto f = parse_map("n 1\n component 0 \n\n  term 2 0 -3/4 1/2 \n");
    REQUIRE(f.n == 1);
    CHECK(f.components[0].terms.at({2, 0}) ==
          GaussianRational(Rational(-3, 4), Rational(1, 2)));
}

TEST_CASE("malformed map text is rejected") {
    CHECK_THROWS(parse_map(""));
    CHECK_THROWS(parse_map("n 0\n"));
    CHECK_THROWS(parse_map("n 1\nterm 0 0 1 0\n"));        // term before any component
    CHECK_THROWS(parse_map("n 1\ncomponent 0\nterm x\n"));  // unparseable term
    CHECK_THROWS(parse_map("n 1\ncomponent 5\n"));          // component out of range
}

TEST_CASE("map files round-trip through disk") {
    std::string path = "/tmp/latflow_test_map.txt";
    auto f = nonextremal_example();
    save_map_file(f, path);
    auto g = load_map_file(path);
    REQUIRE(g.n == f.n);
    for (std::size_t i = 0; i < f.n; ++i) CHECK(g.components[i].terms == f.components[i].terms);
    std::remove(path.c_str());
    CHECK_THROWS(load_map_file("/tmp/latflow_no_such_map.txt"));
}

TEST_CASE("builtin registry is consistent") {
    for (const auto& name : builtin_map_names()) CHECK(builtin_map(name).n >= 1);
    CHECK_THROWS(builtin_map("not_a_map"));
    CHECK(builtin_map("mahler2").components[0].terms == mahler_curve(2).components[0].terms);
}
