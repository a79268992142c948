#pragma once
// Covolume functions z -> ||g_t u_{f(z)} Gamma||, their structural
// decomposition over the span of {1, g, h, pairwise minors}, empirical
// goodness constants and sup floors over a truncated subgroup family, and
// the sublevel-measure experiments built on top.

#include <cstdint>
#include <map>
#include <vector>

#include "latflow/exterior.hpp"
#include "latflow/flow.hpp"
#include "latflow/goodness.hpp"
#include "latflow/lattice.hpp"
#include "latflow/maps.hpp"

namespace latflow {

// real polynomial in (x, y) with exact rational coefficients
struct RealPoly {
    std::map<Monomial, Rational> terms;

    void add(int a, int b, const Rational& c);
    double eval(double x, double y) const;
    friend RealPoly operator*(const RealPoly& p, const RealPoly& q);
    friend RealPoly operator-(const RealPoly& p, const RealPoly& q);
};

RealPoly real_part(const PolyXY& p);
RealPoly imag_part(const PolyXY& p);

// (g_1..g_n, h_1..h_n, g_i h_j - g_j h_i for i < j): n(n+3)/2 components.
// Together with the constant 1 these span every covolume coordinate.
std::vector<RealPoly> covolume_span_functions(const AnalyticMap& f);

struct SpanCheck {
    bool ok = false;
    std::size_t coords_checked = 0;
};

// Exact verification that each coordinate of u_{f(z)} w, expanded formally in
// the symbols g_i, h_i, is an affine combination of the span functions: only
// monomials 1, g_i, h_i, g_i h_j with i != j appear, and the quadratic part
// is antisymmetric, hence a combination of the pairwise minors.
SpanCheck verify_covolume_span(const LatticeBasis& gamma, std::size_t n);

// Euclidean norm of (the exterior power of) g_t u_{f(z)} applied to the
// representing multivector of the generators. Reference implementation for
// consistency tests; the evaluator below is the fast path.
double covolume_via_multivector(const AnalyticMap& f, const LatticeBasis& gamma,
                                const FlowTime& t, double x, double y);

// Gram-determinant covolume of the transformed generators, with the map
// values computed once per point and shared across members.
class FamilyEvaluator {
  public:
    // reusable buffers; each worker thread owns one
    struct Scratch {
        std::vector<double> rows, gram;
    };

    FamilyEvaluator(const AnalyticMap& f, const std::vector<LatticeBasis>& members,
                    const FlowTime& t);

    std::size_t size() const { return members_.size(); }
    // covolume of member m at the point (x, y)
    double value(std::size_t m, double x, double y) const;
    // all member covolumes at once; the map is evaluated a single time
    void values(double x, double y, std::vector<double>& out) const;
    // split form for callers that share map values across members
    void map_values(double x, double y, std::vector<double>& g, std::vector<double>& h) const;
    double value_at(std::size_t m, const std::vector<double>& g, const std::vector<double>& h,
                    Scratch& s) const;

  private:
    struct Member {
        std::vector<std::vector<double>> gens;  // rows in R^{n+2}
    };
    const AnalyticMap* f_;
    std::size_t n_;
    double expand_;                 // e^{(n-1)t/(2n)}
    std::vector<double> contract_;  // e^{-t_i}
    std::vector<Member> members_;
};

struct FamilyGoodness {
    double C_worst = 0;       // max fitted C over nondegenerate members
    double alpha_worst = 0;   // min fitted alpha over nondegenerate members
    std::size_t family_size = 0;
    std::size_t degenerate_count = 0;  // constant-like covolume functions
    std::size_t span_failures = 0;     // members failing the symbolic check
};

FamilyGoodness family_goodness_fit(const AnalyticMap& f, const Ball& b_tilde,
                                   const std::vector<LatticeBasis>& family,
                                   const std::vector<FlowTime>& ts, std::size_t samples,
                                   const std::vector<double>& eps_grid, std::uint64_t seed,
                                   unsigned workers = 1);

struct SupFloor {
    double rho = 0;           // min over family x ts of the sampled sup
    double rho1 = 0;          // coefficient-sphere floor of |c0 + c.Re(f)|
    double rho2 = 0;          // pair-family floor of |Im(conj(p1) p2)|
    std::size_t argmin_member = 0;
    std::size_t argmin_t = 0;
};

SupFloor family_sup_floor(const AnalyticMap& f, const Ball& b,
                          const std::vector<LatticeBasis>& family,
                          const std::vector<FlowTime>& ts, std::size_t samples,
                          std::uint64_t seed, std::size_t pair_angles = 64);

// The compact family of function pairs (u1.f, a + b u2.f) over unit a^2+b^2
// and orthonormal u1, u2, discretized over deterministic angle grids.
std::vector<std::pair<ComplexFn, ComplexFn>> pair_family(const AnalyticMap& f,
                                                         std::size_t angle_count);

struct NondivReport {
    FlowTime t;
    std::vector<double> eps_grid;
    std::vector<double> measured;  // measure of {delta < eps} in |B| units
    std::vector<double> bound;     // c * C * (eps/rho)^alpha * |B|
    double rho_used = 0, C_used = 0, alpha_used = 0, c_used = 1;
    double ball_area = 0;
    double slope_fit = 0;          // log-log slope of measure against eps
    int violations = 0;            // grid points with measured > bound
    std::size_t samples = 0;
    std::size_t family_size = 0;
    long truncation_height = 0;
};

// Monte-Carlo sublevel measures of delta(g_t u_{f(z)} Lambda) on B against
// the (eps/rho)^alpha bound. Euclidean norm. Grid entries above rho are
// rejected.
NondivReport sublevel_bound_experiment(const AnalyticMap& f, const Ball& b, const FlowTime& t,
                                       double C, double alpha, double rho, double c,
                                       const std::vector<double>& eps_grid,
                                       std::size_t samples, std::uint64_t seed,
                                       unsigned workers = 1);

struct ShellSeries {
    double gamma = 0;
    int T_max = 0;
    std::size_t samples_per_time = 0;
    std::vector<double> shell_measure;  // index s: sum over integer t with total s+1
    std::vector<double> partial_sum;
};

// Per-shell sums of measure{z in B: delta(g_t u_{f(z)} Lambda) <= e^{-gamma
// total}} over integer flow times with total 1..T_max, sup norm. The total-0
// shell is trivially |B| and omitted.
ShellSeries borel_cantelli_series(const AnalyticMap& f, const Ball& b, double gamma, int T_max,
                                  std::size_t samples, std::uint64_t seed,
                                  unsigned workers = 1);

// Orthonormal frame adapted to a subgroup: v[1..k-2] span-of-Gamma vectors
// orthogonal to e0 and to the heavy axis, v[k-1] orthogonal to e0, v[0]
// completing within span(e0, Gamma) (or orthogonal to e* and Gamma when e0
// lies in the span). heavy_axis indexes e_1..e_n; pass the axis whose flow
// component is largest.
struct OrthFrame {
    std::vector<std::vector<double>> v;  // v[0], ..., v[k-1]
    double a = 0, b = 0;                 // w = (a e0 + b v0) ^ v1 ^ ... ^ v_{k-1}
    bool e0_in_span = false;
};

OrthFrame orthonormal_frame(const std::vector<std::vector<double>>& gens, std::size_t n,
                            std::size_t heavy_axis);

// u_{f(z)} applied to the representing multivector (no flow part)
Multivector<double> unipotent_multivector(const AnalyticMap& f, const LatticeBasis& gamma,
                                          double x, double y);

// the grade-(k-2) part carried by e0 ^ e*: coordinates of subsets containing
// both index 0 and index 1, re-keyed to the remaining indices
Multivector<double> exterior_rest(const Multivector<double>& w);

}  // namespace latflow
