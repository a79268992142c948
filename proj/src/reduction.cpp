#include "latflow/reduction.hpp"

#include <cmath>

#include "latflow/bigfloat.hpp"

namespace latflow {

namespace {

// left side of the approximation inequality, optionally in high precision
double approx_error(const ComplexPoint& z, long long p, const std::vector<long long>& q) {
    double re = double(p), im = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        re += z.x[i] * double(q[i]);
        im += z.y[i] * double(q[i]);
    }
    double err = std::max(std::fabs(re), std::fabs(im));
    if (err >= 1e-10) return err;
    // doubles are exact inputs here, so the wide accumulation is exact enough
    // to decide ties far below the double rounding floor
    BigFloat bre(p), bim(0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        bre += BigFloat(z.x[i]) * q[i];
        bim += BigFloat(z.y[i]) * q[i];
    }
    BigFloat bre_a = boost::multiprecision::abs(bre);
    BigFloat bim_a = boost::multiprecision::abs(bim);
    return (bre_a > bim_a ? bre_a : bim_a).convert_to<double>();
}

}  // namespace

double height_product(const std::vector<long long>& q) {
    double prod = 1;
    for (long long qi : q) prod *= std::max(std::fabs(double(qi)), 1.0);
    return prod;
}

FlowEvent to_flow_event(const ReductionParams& params, const std::vector<long long>& q) {
    if (q.size() != params.n) throw std::invalid_argument("q has wrong dimension");
    bool nonzero = false;
    for (long long qi : q) nonzero |= qi != 0;
    if (!nonzero) throw std::invalid_argument("q must be nonzero");
    double log_pi = 0;
    for (long long qi : q) log_pi += std::log(std::max(std::fabs(double(qi)), 1.0));
    double log_r = -params.beta() * log_pi;
    std::vector<double> t(params.n);
    for (std::size_t i = 0; i < params.n; ++i)
        t[i] = std::max(std::log(std::max(std::fabs(double(q[i])), 1.0)) - log_r, 0.0);
    return {std::exp(log_r), FlowTime(std::move(t))};
}

bool satisfies_approx_bound(const ComplexPoint& z, long long p, const std::vector<long long>& q,
                            const ReductionParams& params) {
    double err = approx_error(z, p, q);
    double threshold = std::pow(height_product(q), -params.v / double(params.n));
    return err <= threshold;
}

bool satisfies_flow_bounds(const ComplexPoint& z, long long p, const std::vector<long long>& q,
                           const ReductionParams& params, const FlowEvent& ev) {
    // thresholds here are exact algebraic ties with the approximation bound,
    // so allow a few ulps of slack to keep rounding from flipping verdicts
    const double slack = 1 + 1e-11;
    double err = approx_error(z, p, q);
    if (std::exp(params.a() * ev.t.total()) * err > ev.r * slack) return false;
    for (std::size_t i = 0; i < params.n; ++i)
        if (std::exp(-ev.t.components[i]) * std::fabs(double(q[i])) > ev.r * slack) return false;
    return true;
}

std::vector<FlowTime> witness_times(const ComplexPoint& z, double gamma, int T_max, Norm norm) {
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
    if (T_max < 0) throw std::invalid_argument("T_max must be >= 0");
    std::size_t n = z.n();
    std::vector<FlowTime> hits;
    std::vector<int> t(n, 0);
    auto rec = [&](auto&& self, std::size_t idx, int budget) -> void {
        if (idx == n) {
            int total = T_max - budget;
            FlowTime ft(std::vector<double>(t.begin(), t.end()));
            if (orbit_shortest(z, ft, norm) <= std::exp(-gamma * double(total)))
                hits.push_back(std::move(ft));
            return;
        }
        for (int v = 0; v <= budget; ++v) {
            t[idx] = v;
            self(self, idx + 1, budget - v);
        }
    };
    rec(rec, 0, T_max);
    return hits;
}

}  // namespace latflow
