#pragma once
// Translation between simultaneous-approximation inequalities and flow
// events: a denominator vector q determines a dilation r and a flow time t
// such that good approximations force short vectors along the orbit.

#include <cstdint>
#include <vector>

#include "latflow/flow.hpp"

namespace latflow {

struct ReductionParams {
    std::size_t n;
    double v;

    ReductionParams(std::size_t n_, double v_) : n(n_), v(v_) {
        if (n < 1) throw std::invalid_argument("n must be >= 1");
        if (!(v > (double(n) - 1) / 2))
            throw std::invalid_argument("exponent v must exceed (n-1)/2");
    }

    // both derived so the parameterization cannot drift apart
    double beta() const { return (2 * v - double(n) + 1) / (double(n) * (double(n) + 1)); }
    double gamma() const { return (2 * v - double(n) + 1) / (2 * double(n) * (v + 1)); }
    double a() const { return (double(n) - 1) / (2 * double(n)); }
};

struct FlowEvent {
    double r;  // dilation factor, equals e^{-gamma * t.total()}
    FlowTime t;
};

double height_product(const std::vector<long long>& q);  // product of max(|q_i|, 1)

// r = height_product(q)^{-beta}, t_i = ln max(|q_i|,1) - ln r.
FlowEvent to_flow_event(const ReductionParams& params, const std::vector<long long>& q);

// max(|x.q + p|, |y.q|) <= height_product(q)^{-v/n}, re-evaluated in high
// precision when the left side is below 1e-10.
bool satisfies_approx_bound(const ComplexPoint& z, long long p, const std::vector<long long>& q,
                            const ReductionParams& params);

// e^{a t} max(|x.q + p|, |y.q|) <= r and e^{-t_i} |q_i| <= r for all i,
// with a hair of multiplicative slack since the thresholds are exact ties.
bool satisfies_flow_bounds(const ComplexPoint& z, long long p, const std::vector<long long>& q,
                           const ReductionParams& params, const FlowEvent& ev);

// All integer flow times with total <= T_max whose orbit point has a vector
// of norm <= e^{-gamma * total}. t = 0 qualifies whenever delta(u_z Lambda)
// <= 1, which holds for every z in the sup norm.
std::vector<FlowTime> witness_times(const ComplexPoint& z, double gamma, int T_max,
                                    Norm norm = Norm::sup);

}  // namespace latflow
