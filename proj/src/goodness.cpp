#include "latflow/goodness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latflow/sampling.hpp"

namespace latflow {

double Ball::area() const { return sup_metric ? 4 * r * r : 3.14159265358979323846 * r * r; }

bool Ball::contains(double x, double y) const {
    double dx = x - cx, dy = y - cy;
    if (sup_metric) return std::max(std::fabs(dx), std::fabs(dy)) <= r;
    return dx * dx + dy * dy <= r * r;
}

std::vector<std::array<double, 2>> ball_samples(const Ball& B, std::size_t count,
                                                std::uint64_t seed) {
    RotatedHalton seq(seed, 2);
    std::vector<std::array<double, 2>> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto u = seq.point(i);
        double x = B.cx + (2 * u[0] - 1) * B.r;
        double y = B.cy + (2 * u[1] - 1) * B.r;
        if (B.contains(x, y)) pts.push_back({x, y});
    }
    return pts;
}

std::vector<double> default_eps_grid() {
    // geometric from 1e-3 to 1, denser near the top where fits are anchored
    std::vector<double> g;
    for (double e = 1e-3; e < 0.999; e *= std::pow(10.0, 0.125)) g.push_back(e);
    g.push_back(1.0);
    return g;
}

namespace {

struct RatioCounts {
    std::vector<std::uint64_t> below;  // per eps grid index
    std::uint64_t total = 0;
    double sup = 0;
};

// two passes over the same deterministic point set: sup first, then
// per-epsilon counts, parallelized over disjoint index ranges
RatioCounts measure_ratios(const RealFn& f, const std::vector<std::array<double, 2>>& pts,
                           const std::vector<double>& eps_grid, unsigned workers) {
    std::vector<double> vals(pts.size());
    struct SupPart {
        double sup = 0;
    };
    auto sup_part = parallel_accumulate<SupPart>(
        pts.size(), workers,
        [&](std::uint64_t b, std::uint64_t e, SupPart& p) {
            for (std::uint64_t i = b; i < e; ++i) {
                vals[i] = std::fabs(f(pts[i][0], pts[i][1]));
                p.sup = std::max(p.sup, vals[i]);
            }
        },
        [](SupPart& a, const SupPart& b) { a.sup = std::max(a.sup, b.sup); });

    RatioCounts rc;
    rc.total = pts.size();
    rc.sup = sup_part.sup;
    rc.below.assign(eps_grid.size(), 0);
    if (rc.sup == 0) return rc;
    struct CountPart {
        std::vector<std::uint64_t> below;
    };
    auto counts = parallel_accumulate<CountPart>(
        pts.size(), workers,
        [&](std::uint64_t b, std::uint64_t e, CountPart& p) {
            p.below.assign(eps_grid.size(), 0);
            for (std::uint64_t i = b; i < e; ++i)
                for (std::size_t g = 0; g < eps_grid.size(); ++g)
                    if (vals[i] < eps_grid[g] * rc.sup) ++p.below[g];
        },
        [](CountPart& a, const CountPart& b) {
            if (a.below.empty()) a.below.assign(b.below.size(), 0);
            for (std::size_t g = 0; g < b.below.size(); ++g) a.below[g] += b.below[g];
        });
    rc.below = counts.below;
    if (rc.below.empty()) rc.below.assign(eps_grid.size(), 0);
    return rc;
}

}  // namespace

GoodFitReport fit_sublevel_ratios(const std::vector<double>& eps_grid,
                                  const std::vector<double>& ratios, double sup,
                                  std::size_t sample_count) {
    GoodFitReport rep;
    rep.eps_grid = eps_grid;
    rep.ratios = ratios;
    rep.sample_count = sample_count;
    rep.sup_estimate = sup;
    if (sup == 0) {
        rep.degenerate = true;  // the definition is vacuous for the zero function
        return rep;
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (std::size_t g = 0; g < eps_grid.size(); ++g) {
        if (ratios[g] <= 0 || ratios[g] >= 1 || eps_grid[g] >= 1) continue;
        double x = std::log(eps_grid[g]), y = std::log(ratios[g]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    if (used < 2) {
        rep.degenerate = true;  // constant-like function: ratios carry no slope
        rep.C = 1;
        rep.alpha = 1;
        return rep;
    }
    double var = sxx - sx * sx / double(used);
    double alpha = var > 0 ? (sxy - sx * sy / double(used)) / var : 0.0;
    rep.alpha = std::max(alpha, 1e-3);
    rep.C = 0;
    for (std::size_t g = 0; g < eps_grid.size(); ++g)
        if (ratios[g] > 0) rep.C = std::max(rep.C, ratios[g] / std::pow(eps_grid[g], rep.alpha));
    if (rep.C == 0) rep.C = 1;
    for (std::size_t g = 0; g < eps_grid.size(); ++g)
        if (ratios[g] > rep.C * std::pow(eps_grid[g], rep.alpha)) ++rep.violation_count;
    return rep;
}

GoodFitReport good_fit(const RealFn& f, const Ball& B, std::size_t samples,
                       const std::vector<double>& eps_grid, std::uint64_t seed,
                       unsigned workers) {
    if (samples < 1000) throw std::invalid_argument("need at least 1000 samples");
    for (double e : eps_grid)
        if (!(e > 0 && e <= 1)) throw std::invalid_argument("eps grid must lie in (0, 1]");
    auto pts = ball_samples(B, samples, seed);
    auto rc = measure_ratios(f, pts, eps_grid, workers);

    std::vector<double> ratios(eps_grid.size(), 0.0);
    for (std::size_t g = 0; g < eps_grid.size(); ++g)
        if (rc.total) ratios[g] = double(rc.below[g]) / double(rc.total);
    return fit_sublevel_ratios(eps_grid, ratios, rc.sup, rc.total);
}

bool check_good(const RealFn& f, const Ball& B, double C, double alpha, std::size_t samples,
                const std::vector<double>& eps_grid, std::uint64_t seed, unsigned workers) {
    auto pts = ball_samples(B, samples, seed);
    auto rc = measure_ratios(f, pts, eps_grid, workers);
    if (rc.sup == 0) return true;  // vacuous for the zero function
    for (std::size_t g = 0; g < eps_grid.size(); ++g) {
        double ratio = double(rc.below[g]) / double(rc.total);
        double sigma = std::sqrt(std::max(ratio * (1 - ratio), 1.0 / double(rc.total)) /
                                 double(rc.total));
        if (ratio > C * std::pow(eps_grid[g], alpha) + 3 * sigma) return false;
    }
    return true;
}

CombineReport combine_good(const std::vector<RealFn>& fs, double C, double alpha, const Ball& B,
                           std::size_t samples, const std::vector<double>& eps_grid,
                           std::uint64_t seed) {
    CombineReport rep;
    if (fs.empty()) throw std::invalid_argument("empty function list");
    rep.members_ok = true;
    for (const auto& f : fs)
        rep.members_ok = rep.members_ok && check_good(f, B, C, alpha, samples, eps_grid, seed);
    rep.C_combined = std::pow(double(fs.size()), alpha / 2) * C;
    if (!rep.members_ok) return rep;  // combination not asserted
    RealFn rss = [&fs](double x, double y) {
        double s = 0;
        for (const auto& f : fs) {
            double v = f(x, y);
            s += v * v;
        }
        return std::sqrt(s);
    };
    rep.combined_ok = check_good(rss, B, rep.C_combined, alpha, samples, eps_grid, seed);
    return rep;
}

namespace {

// unit vector from spherical angles: dims-1 angles, first dims-2 in [0, pi],
// last in [0, 2pi)
std::vector<double> sphere_point(const std::vector<double>& angles) {
    std::size_t dims = angles.size() + 1;
    std::vector<double> c(dims);
    double sin_prod = 1;
    for (std::size_t i = 0; i + 1 < dims; ++i) {
        c[i] = sin_prod * std::cos(angles[i]);
        sin_prod *= std::sin(angles[i]);
    }
    c[dims - 1] = sin_prod;
    return c;
}

}  // namespace

double combination_sup_floor(const std::vector<std::array<double, 2>>& points,
                             const std::vector<ComplexFn>& fs, const SphereSearchOptions& opts) {
    if (points.empty()) throw std::invalid_argument("no sample points");
    std::size_t dims = fs.size() + 1;

    // precompute (1, f_1(z), ..., f_n(z)) per point
    std::vector<std::vector<std::complex<double>>> F(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        F[i].resize(dims);
        F[i][0] = 1;
        for (std::size_t j = 0; j < fs.size(); ++j) F[i][j + 1] = fs[j](points[i][0], points[i][1]);
    }

    double best = -1;
    std::vector<double> best_angles(dims - 1, 0);
    auto sup_for = [&](const std::vector<double>& c, double cutoff) {
        // early abort: once the running sup exceeds the incumbent minimum,
        // this coefficient vector cannot improve it
        double sup = 0;
        for (const auto& Fi : F) {
            double re = 0, im = 0;
            for (std::size_t j = 0; j < dims; ++j) {
                re += c[j] * Fi[j].real();
                im += c[j] * Fi[j].imag();
            }
            sup = std::max(sup, re * re + im * im);
            if (cutoff > 0 && sup > cutoff) return sup;
        }
        return sup;
    };

    std::vector<double> angles(dims - 1, 0);
    auto scan = [&](auto&& self, std::size_t idx, double lo, double hi, double step) -> void {
        if (idx == angles.size()) {
            double s = sup_for(sphere_point(angles), best);
            if (best < 0 || s < best) {
                best = s;
                best_angles = angles;
            }
            return;
        }
        double top = idx + 1 == angles.size() ? hi * 2 : hi;  // last angle spans the full circle
        for (double a = lo; a < top; a += step) {
            angles[idx] = a;
            self(self, idx + 1, lo, hi, step);
        }
    };
    scan(scan, 0, 0.0, 3.14159265358979323846, opts.angle_step);

    if (opts.refine) {
        // one local pass at a tenth of the step around the coarse minimum
        std::vector<double> center = best_angles;
        double fine = opts.angle_step / 10;
        std::vector<double> cursor(angles.size());
        auto local = [&](auto&& self, std::size_t idx) -> void {
            if (idx == cursor.size()) {
                double s = sup_for(sphere_point(cursor), best);
                if (s < best) {
                    best = s;
                    best_angles = cursor;
                }
                return;
            }
            for (int k = -10; k <= 10; ++k) {
                cursor[idx] = center[idx] + double(k) * fine;
                self(self, idx + 1);
            }
        };
        local(local, 0);
    }
    return std::sqrt(std::max(best, 0.0));
}

double imag_pair_floor(const std::vector<std::array<double, 2>>& points,
                       const std::vector<std::pair<ComplexFn, ComplexFn>>& pairs) {
    if (points.empty()) throw std::invalid_argument("no sample points");
    if (pairs.empty()) throw std::invalid_argument("empty pair family");
    double best = -1;
    for (const auto& [p1, p2] : pairs) {
        double sup = 0;
        for (const auto& pt : points) {
            std::complex<double> a = p1(pt[0], pt[1]);
            std::complex<double> b = p2(pt[0], pt[1]);
            sup = std::max(sup, std::fabs(std::imag(std::conj(a) * b)));
            if (best >= 0 && sup > best) break;  // cannot lower the minimum
        }
        if (best < 0 || sup < best) best = sup;
    }
    return best;
}

}  // namespace latflow
