#include "latflow/flow.hpp"

#include <cmath>

#include "latflow/bigfloat.hpp"

namespace latflow {

MatD unipotent_matrix(const ComplexPoint& z) {
    std::size_t n = z.n();
    MatD u = MatD::identity(n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        u(0, 2 + i) = z.x[i];
        u(1, 2 + i) = z.y[i];
    }
    return u;
}

MatD flow_matrix(const FlowTime& t) {
    std::size_t n = t.n();
    if (n < 1) throw std::invalid_argument("flow needs n >= 1");
    MatD g(n + 2, n + 2);
    double expand = std::exp((double(n) - 1) / (2.0 * double(n)) * t.total());
    g(0, 0) = expand;
    g(1, 1) = expand;
    for (std::size_t i = 0; i < n; ++i) g(2 + i, 2 + i) = std::exp(-t.components[i]);
    return g;
}

LatticeBasis approximant_lattice(std::size_t n) {
    if (n < 1) throw std::invalid_argument("approximant lattice needs n >= 1");
    std::vector<std::vector<Int>> gens(n + 1, std::vector<Int>(n + 2, 0));
    gens[0][0] = 1;  // e0; e* (index 1) is skipped
    for (std::size_t i = 0; i < n; ++i) gens[1 + i][2 + i] = 1;
    return LatticeBasis::from_int_rows(std::move(gens));
}

namespace {

// Columns 0 and 2..n+1 of (flow * unipotent), each as a generator row.
// Column 0 is e0's image, column 2+i is e_{1+i}'s image.
template <typename F>
std::vector<std::vector<F>> transformed_generators(const ComplexPoint& z, const FlowTime& t) {
    using std::exp;
    std::size_t n = z.n();
    F a_exp = exp(F((double(n) - 1) / (2.0 * double(n))) * F(t.total()));
    std::vector<std::vector<F>> gens(n + 1, std::vector<F>(n + 2, F(0)));
    gens[0][0] = a_exp;
    for (std::size_t i = 0; i < n; ++i) {
        gens[1 + i][0] = a_exp * F(z.x[i]);
        gens[1 + i][1] = a_exp * F(z.y[i]);
        gens[1 + i][2 + i] = exp(F(-t.components[i]));
    }
    return gens;
}

}  // namespace

double orbit_shortest(const ComplexPoint& z, const FlowTime& t, Norm norm,
                      const OrbitOptions& opts) {
    if (z.n() != t.n()) throw std::invalid_argument("flow time and point dimension mismatch");
    double total = t.total();
    if (total > opts.total_cap)
        throw NumericGuard("total flow time exceeds the configured cap");
    if (total > opts.highprec_above) {
        auto gens = transformed_generators<BigFloat>(z, t);
        return shortest_vector_float<BigFloat>(gens, norm).convert_to<double>();
    }
    auto gens = transformed_generators<double>(z, t);
    return shortest_vector_float<double>(gens, norm);
}

std::vector<TracePoint> orbit_trace(const ComplexPoint& z, const std::vector<FlowTime>& ts,
                                    Norm norm, const OrbitOptions& opts) {
    std::vector<TracePoint> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back({t, orbit_shortest(z, t, norm, opts)});
    return out;
}

}  // namespace latflow
