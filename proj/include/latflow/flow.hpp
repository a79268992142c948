#pragma once
// The one-parameter unipotent and diagonal matrices acting on R^{n+2}, the
// integer subgroup they act on, and shortest-vector values along orbits.
// Basis order is {e0, e*, e1, ..., en}: index 0 is e0, index 1 is e*, and
// index 2+i is e_{1+i}.

#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "latflow/lattice.hpp"
#include "latflow/linalg.hpp"

namespace latflow {

struct FlowTime {
    std::vector<double> components;  // all nonnegative

    FlowTime() = default;
    explicit FlowTime(std::vector<double> c) : components(std::move(c)) {
        for (double t : components)
            if (!(t >= 0)) throw std::invalid_argument("flow time components must be >= 0");
    }

    std::size_t n() const { return components.size(); }
    double total() const {
        return std::accumulate(components.begin(), components.end(), 0.0);
    }
};

struct ComplexPoint {
    std::vector<double> x, y;

    ComplexPoint() = default;
    ComplexPoint(std::vector<double> re, std::vector<double> im)
        : x(std::move(re)), y(std::move(im)) {
        if (x.size() != y.size()) throw std::invalid_argument("mismatched real/imaginary parts");
    }
    static ComplexPoint from_complex(const std::vector<std::complex<double>>& z) {
        ComplexPoint p;
        for (auto c : z) {
            p.x.push_back(c.real());
            p.y.push_back(c.imag());
        }
        return p;
    }
    std::size_t n() const { return x.size(); }
};

// Upper unitriangular matrix with x in the first row and y in the second;
// determinant 1 by construction.
MatD unipotent_matrix(const ComplexPoint& z);

// diag(e^{(n-1)t/(2n)}, e^{(n-1)t/(2n)}, e^{-t_1}, ..., e^{-t_n})
MatD flow_matrix(const FlowTime& t);

// The rank-(n+1) subgroup {(p, 0, q)} of Z^{n+2}, generated by e0, e1,...,en.
LatticeBasis approximant_lattice(std::size_t n);

struct NumericGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OrbitOptions {
    double total_cap = 200.0;       // beyond this, e^{-t_i} underflows doubles
    double highprec_above = 80.0;   // switch to 128-bit mantissa floats
};

// delta of the lattice spanned by (flow * unipotent) applied to the
// generators of approximant_lattice(n).
double orbit_shortest(const ComplexPoint& z, const FlowTime& t, Norm norm,
                      const OrbitOptions& opts = {});

struct TracePoint {
    FlowTime t;
    double delta_value;
};

std::vector<TracePoint> orbit_trace(const ComplexPoint& z, const std::vector<FlowTime>& ts,
                                    Norm norm, const OrbitOptions& opts = {});

}  // namespace latflow
