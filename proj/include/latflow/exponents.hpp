#pragma once
// Best-approximation records for a point of C^n and regression-based
// exponent estimates over the record tail.

#include <complex>
#include <cstdint>
#include <vector>

#include "latflow/exact.hpp"

namespace latflow {

struct ApproxRecord {
    std::vector<long long> q;
    long long p;
    double error;    // |z.q + p|, complex modulus
    Int pi_plus;     // product of max(|q_i|, 1)
    long long height;  // sup norm of q
};

Int pi_plus_of(const std::vector<long long>& q);

// Enumerates q over sup-norm shells up to H_max (one representative per
// +-pair), p = -round(Re(z.q)), and keeps the strictly-improving error
// records in height order. Near-zero errors are re-evaluated exactly, so an
// exact rational hit is recorded as error 0. Worker partitioning is over
// shell ranges; the merged result is independent of the worker count.
std::vector<ApproxRecord> best_approximations(const std::vector<GaussianRational>& z,
                                              long long H_max, unsigned workers = 1);
std::vector<ApproxRecord> best_approximations(const std::vector<std::complex<double>>& z,
                                              long long H_max, unsigned workers = 1);

struct ExponentFit {
    double value = 0;        // fitted exponent, +infinity on an exact hit
    bool exact_hit = false;  // some record has error exactly 0
    std::size_t tail_count = 0;
    double intercept = 0;
};

// least-squares slope of -ln(error) against ln(height) over the record tail
ExponentFit diophantine_exponent_fit(const std::vector<ApproxRecord>& records,
                                     double tail_fraction = 0.5);

// same with regressor (1/n) ln(pi_plus)
ExponentFit multiplicative_exponent_fit(const std::vector<ApproxRecord>& records, std::size_t n,
                                        double tail_fraction = 0.5);

struct DirichletFit {
    double c_estimate;     // max over records of error * height^{(n-1)/2}
    double exponent_fit;   // the plain exponent fit, for context
};

DirichletFit dirichlet_bound_fit(const std::vector<ApproxRecord>& records, std::size_t n);

}  // namespace latflow
