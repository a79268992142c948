#pragma once
// Polynomial maps from a complex parameter into C^n, with exact coefficients
// so the linear-independence conditions can be decided by rational rank
// computations instead of numerics.

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "latflow/exact.hpp"

namespace latflow {

// monomial exponents (a, b) meaning x^a y^b
using Monomial = std::pair<int, int>;

struct PolyXY {
    std::map<Monomial, GaussianRational> terms;

    void add(int a, int b, GaussianRational c);
    std::complex<double> eval(double x, double y) const;
    GaussianRational eval_exact(const Rational& x, const Rational& y) const;
};

struct AnalyticMap {
    std::size_t n = 0;
    std::vector<PolyXY> components;

    // true iff every component is a polynomial in z = x + iy alone, decided
    // by the coefficient-level Cauchy-Riemann test: d/dz̄ annihilates the
    // component exactly if (a+1)c_{a+1,b} + i(b+1)c_{a,b+1} = 0 for all a,b.
    bool analytic() const;

    std::vector<std::complex<double>> eval(double x, double y) const;
    std::vector<GaussianRational> eval_exact(const Rational& x, const Rational& y) const;
};

AnalyticMap mahler_curve(std::size_t n);     // (z, z^2, ..., z^n)
AnalyticMap line_iz();                       // (z, iz)
AnalyticMap nonextremal_example();           // (z, z * (x^2 + y^2))

// 1, f_1, ..., f_n linearly independent over R: no real relation kills both
// the real and imaginary coefficient systems. Exact rational rank.
bool independent_over_reals(const AnalyticMap& f);

// same over C, rank computed in the field of Gaussian rationals
bool independent_over_complexes(const AnalyticMap& f);

// Text round-trip: a header line "n <dim>", then per component a line
// "component <index>" followed by "term <a> <b> <re> <im>" lines with exact
// rationals. Whitespace-insensitive on load; bit-exact round-trip on save.
std::string serialize_map(const AnalyticMap& f);
AnalyticMap parse_map(const std::string& text);
AnalyticMap load_map_file(const std::string& path);
void save_map_file(const AnalyticMap& f, const std::string& path);

// builtin registry used by the CLI: name -> factory
std::vector<std::string> builtin_map_names();
AnalyticMap builtin_map(const std::string& name);

}  // namespace latflow
