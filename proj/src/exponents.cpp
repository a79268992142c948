#include "latflow/exponents.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace latflow {

Int pi_plus_of(const std::vector<long long>& q) {
    Int prod = 1;
    for (long long qi : q) {
        long long a = qi < 0 ? -qi : qi;
        if (a > 1) prod *= a;
    }
    return prod;
}

namespace {

struct Candidate {
    long long height;
    double error;
    std::vector<long long> q;
    long long p;
};

// best (error, then lex q) candidate within one sup-norm shell, relative to
// the provided threshold; returns false if nothing beats it
bool scan_shell(const std::vector<double>& zr, const std::vector<double>& zi, long long h,
                double threshold2, Candidate& out) {
    std::size_t n = zr.size();
    std::vector<long long> q(n, 0);
    bool found = false;
    double best2 = threshold2;

    auto consider = [&]() {
        double re = 0, im = 0;
        for (std::size_t i = 0; i < n; ++i) {
            re += zr[i] * double(q[i]);
            im += zi[i] * double(q[i]);
        }
        long long p = -std::llround(re);
        double v = re + double(p);
        double e2 = v * v + im * im;
        if (found) {
            if (e2 > best2) return;
            if (e2 == best2 && !(q < out.q)) return;  // lexicographic tie-break
        } else if (!(e2 < best2)) {
            return;  // records must strictly improve on the incoming minimum
        }
        best2 = e2;
        found = true;
        out = {h, std::sqrt(e2), q, p};
    };

    // walk the shell: at least one coordinate has |q_i| = h, and only the
    // representative whose first nonzero coordinate is positive is kept; the
    // last coordinate is pinned to +-h unless an earlier one hit the boundary
    auto rec = [&](auto&& self, std::size_t idx, bool on_boundary, bool first_nonzero_seen)
        -> void {
        if (idx == n) {
            consider();
            return;
        }
        long long lo = first_nonzero_seen ? -h : 0;
        if (idx + 1 == n && !on_boundary) {
            for (long long v : {-h, h}) {
                if (v < lo) continue;
                q[idx] = v;
                self(self, idx + 1, true, true);
            }
        } else {
            for (long long v = lo; v <= h; ++v) {
                q[idx] = v;
                self(self, idx + 1, on_boundary || v == h || v == -h,
                     first_nonzero_seen || v != 0);
            }
        }
        q[idx] = 0;
    };
    rec(rec, 0, false, false);
    return found;
}

double exact_error(const std::vector<GaussianRational>& z, const Candidate& c, bool& hit_zero) {
    GaussianRational s{Rational(c.p), Rational(0)};
    for (std::size_t i = 0; i < z.size(); ++i)
        s = s + z[i] * GaussianRational(Rational(c.q[i]));
    Rational n2 = s.norm();
    hit_zero = n2 == 0;
    return std::sqrt(n2.convert_to<double>());
}

}  // namespace

std::vector<ApproxRecord> best_approximations(const std::vector<GaussianRational>& z,
                                              long long H_max, unsigned workers) {
    if (H_max < 1) throw std::invalid_argument("H_max must be >= 1");
    if (z.empty()) throw std::invalid_argument("empty point");
    std::vector<double> zr(z.size()), zi(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        zr[i] = z[i].re.convert_to<double>();
        zi[i] = z[i].im.convert_to<double>();
    }

    // each worker scans a contiguous shell range against its own running
    // minimum; liberal local thresholds only admit extra candidates, which
    // the merge pass below filters out again
    if (workers == 0) workers = 1;
    if ((long long)workers > H_max) workers = unsigned(H_max);
    std::vector<std::vector<Candidate>> parts(workers);
    auto scan_range = [&](long long lo, long long hi, std::vector<Candidate>& sink) {
        double local2 = std::numeric_limits<double>::infinity();
        Candidate c;
        for (long long h = lo; h <= hi; ++h)
            if (scan_shell(zr, zi, h, local2, c)) {
                local2 = c.error * c.error;
                sink.push_back(c);
            }
    };
    if (workers == 1) {
        scan_range(1, H_max, parts[0]);
    } else {
        std::vector<std::thread> pool;
        long long chunk = H_max / workers, rem = H_max % workers, begin = 1;
        for (unsigned w = 0; w < workers; ++w) {
            long long len = chunk + (static_cast<long long>(w) < rem ? 1 : 0);
            long long lo = begin, hi = begin + len - 1;
            begin = hi + 1;
            pool.emplace_back([&, w, lo, hi] { scan_range(lo, hi, parts[w]); });
        }
        for (auto& t : pool) t.join();
    }

    std::vector<ApproxRecord> records;
    double global = std::numeric_limits<double>::infinity();
    for (const auto& part : parts)
        for (const auto& c : part) {
            double err = c.error;
            long long p = c.p;
            if (err < 1e-10) {
                bool zero = false;
                err = exact_error(z, c, zero);
                if (zero) err = 0;
            }
            if (!(err < global)) continue;
            global = err;
            records.push_back({c.q, p, err, pi_plus_of(c.q), c.height});
            if (err == 0) return records;  // nothing can strictly improve on 0
        }
    return records;
}

std::vector<ApproxRecord> best_approximations(const std::vector<std::complex<double>>& z,
                                              long long H_max, unsigned workers) {
    std::vector<GaussianRational> ze(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        ze[i] = {Rational(z[i].real()), Rational(z[i].imag())};
    return best_approximations(ze, H_max, workers);
}

namespace {

ExponentFit fit_records(const std::vector<ApproxRecord>& records,
                        const std::function<double(const ApproxRecord&)>& regressor,
                        double tail_fraction) {
    for (const auto& r : records)
        if (r.error == 0) {
            ExponentFit f;
            f.value = std::numeric_limits<double>::infinity();
            f.exact_hit = true;
            return f;
        }
    if (records.size() < 3) throw std::invalid_argument("need at least 3 records to fit");
    if (!(tail_fraction > 0 && tail_fraction <= 1))
        throw std::invalid_argument("tail fraction must be in (0,1]");
    std::size_t tail = std::size_t(std::ceil(tail_fraction * double(records.size())));
    if (tail < 3) tail = 3;
    std::size_t start = records.size() - tail;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = start; i < records.size(); ++i) {
        double x = regressor(records[i]);
        double y = -std::log(records[i].error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double k = double(tail);
    double var = sxx - sx * sx / k;
    if (var <= 1e-12) throw std::domain_error("record regressor has no spread");
    ExponentFit f;
    f.value = (sxy - sx * sy / k) / var;
    f.intercept = (sy - f.value * sx) / k;
    f.tail_count = tail;
    return f;
}

}  // namespace

ExponentFit diophantine_exponent_fit(const std::vector<ApproxRecord>& records,
                                     double tail_fraction) {
    return fit_records(
        records, [](const ApproxRecord& r) { return std::log(double(r.height)); },
        tail_fraction);
}

ExponentFit multiplicative_exponent_fit(const std::vector<ApproxRecord>& records, std::size_t n,
                                        double tail_fraction) {
    return fit_records(
        records,
        [n](const ApproxRecord& r) {
            return std::log(r.pi_plus.convert_to<double>()) / double(n);
        },
        tail_fraction);
}

DirichletFit dirichlet_bound_fit(const std::vector<ApproxRecord>& records, std::size_t n) {
    if (records.empty()) throw std::invalid_argument("no records");
    double c = 0;
    for (const auto& r : records)
        c = std::max(c, r.error * std::pow(double(r.height), (double(n) - 1) / 2));
    DirichletFit d;
    d.c_estimate = c;
    bool exact = false;
    for (const auto& r : records) exact |= r.error == 0;
    d.exponent_fit = exact || records.size() < 3
                         ? std::numeric_limits<double>::infinity()
                         : diophantine_exponent_fit(records).value;
    if (records.size() < 3 && !exact) d.exponent_fit = 0;
    return d;
}

}  // namespace latflow
