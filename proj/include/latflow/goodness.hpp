#pragma once
// Empirical calculus for functions whose sublevel sets shrink polynomially:
// fitting (C, alpha) pairs from sampled sublevel ratios, checking them with
// binomial error bars, the root-sum-of-squares combination rule, and the two
// compactness floors used by the covolume estimates (the minimum over a
// coefficient sphere of a sampled sup, and the minimum over a family of
// function pairs of sup |Im(conj(p1) p2)|).

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace latflow {

struct Ball {
    double cx = 0, cy = 0, r = 1;
    bool sup_metric = false;  // square of side 2r instead of a disc

    double area() const;
    bool contains(double x, double y) const;
};

// Low-discrepancy points covering the ball: a rotated Halton sequence on the
// bounding square, filtered to the ball. `count` is the number of square
// points generated; roughly pi/4 of them survive for a disc.
std::vector<std::array<double, 2>> ball_samples(const Ball& B, std::size_t count,
                                                std::uint64_t seed);

using RealFn = std::function<double(double, double)>;
using ComplexFn = std::function<std::complex<double>(double, double)>;

struct GoodFitReport {
    double C = 0, alpha = 0;
    std::vector<double> eps_grid;
    std::vector<double> ratios;  // fraction of samples with |f| < eps * sup
    double sup_estimate = 0;
    std::size_t sample_count = 0;
    int violation_count = 0;  // grid points with ratio > C eps^alpha
    bool degenerate = false;  // f vanished on every sample, or ratios gave no signal
};

std::vector<double> default_eps_grid();

// Fit (C, alpha) from already-measured sublevel ratios: log-log slope over
// grid points with signal, C inflated so every measured point sits on or
// under C eps^alpha. good_fit and the family fits share this rule.
GoodFitReport fit_sublevel_ratios(const std::vector<double>& eps_grid,
                                  const std::vector<double>& ratios, double sup,
                                  std::size_t sample_count);

GoodFitReport good_fit(const RealFn& f, const Ball& B, std::size_t samples,
                       const std::vector<double>& eps_grid, std::uint64_t seed,
                       unsigned workers = 1);

// true iff no grid point violates ratio <= C eps^alpha beyond three binomial
// standard deviations of the sampled ratio
bool check_good(const RealFn& f, const Ball& B, double C, double alpha, std::size_t samples,
                const std::vector<double>& eps_grid, std::uint64_t seed, unsigned workers = 1);

struct CombineReport {
    bool members_ok = false;   // every input passed check_good(C, alpha)
    bool combined_ok = false;  // root-sum-of-squares passed the scaled check
    double C_combined = 0;     // k^{alpha/2} C
};

CombineReport combine_good(const std::vector<RealFn>& fs, double C, double alpha, const Ball& B,
                           std::size_t samples, const std::vector<double>& eps_grid,
                           std::uint64_t seed);

struct SphereSearchOptions {
    double angle_step = 1e-2;  // radians per angular coordinate of the grid
    bool refine = true;        // one local refinement pass around the minimum
};

// min over unit coefficient vectors c of sup over the points of
// |c_0 + c_1 f_1 + ... + c_n f_n| (complex modulus). Sampling underestimates
// sups, so the result is a usable empirical floor. Values below 1e-8 signal
// that the functions are affinely dependent over R on these points.
double combination_sup_floor(const std::vector<std::array<double, 2>>& points,
                             const std::vector<ComplexFn>& fs,
                             const SphereSearchOptions& opts = {});

// min over the pairs of sup over the points of |Im(conj(p1) p2)|; near-zero
// means some pair is a real multiple of another
double imag_pair_floor(const std::vector<std::array<double, 2>>& points,
                       const std::vector<std::pair<ComplexFn, ComplexFn>>& pairs);

}  // namespace latflow
