#pragma once
// Deterministic sampling utilities: a seedable splitmix64 generator, Halton
// low-discrepancy sequences with Cranley-Patterson rotation, and a
// deterministic parallel map-reduce over index ranges.

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace latflow {

// splitmix64: tiny, fast, and easy to reproduce in other languages when
// cross-checking report output.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_unit() { return double(next() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // uniform in {lo, ..., hi} inclusive
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        return lo + std::int64_t(next() % std::uint64_t(hi - lo + 1));
    }
};

inline double halton(std::uint64_t index, std::uint32_t base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * double(index % base);
        index /= base;
    }
    return r;
}

// Halton (2,3,...) point shifted by a per-dimension rotation drawn from the
// seed, folded back into [0,1)^d. Deterministic given (seed, index).
struct RotatedHalton {
    std::vector<double> shift;
    static constexpr std::uint32_t primes[6] = {2, 3, 5, 7, 11, 13};

    RotatedHalton(std::uint64_t seed, std::size_t dim) {
        SplitMix64 rng(seed);
        shift.resize(dim);
        for (auto& s : shift) s = rng.next_unit();
    }

    std::vector<double> point(std::uint64_t index) const {
        std::vector<double> p(shift.size());
        for (std::size_t d = 0; d < shift.size(); ++d) {
            double v = halton(index + 1, primes[d]) + shift[d];
            p[d] = v - std::uint64_t(v);
        }
        return p;
    }
};

// Splits [0,n) into contiguous chunks, maps each chunk on its own thread, and
// merges partial results in chunk order. With associative merges this gives
// the same answer for any worker count; the reductions used in this project
// are integer counts, maxima, and running minima, which are exact regardless
// of the split.
template <typename Partial>
Partial parallel_accumulate(std::uint64_t n, unsigned workers,
                            const std::function<void(std::uint64_t, std::uint64_t, Partial&)>& body,
                            const std::function<void(Partial&, const Partial&)>& merge) {
    if (workers == 0) workers = 1;
    if (workers == 1 || n < 2 * workers) {
        Partial whole{};
        body(0, n, whole);
        return whole;
    }
    std::vector<Partial> parts(workers);
    std::vector<std::thread> pool;
    std::uint64_t chunk = n / workers, rem = n % workers, begin = 0;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t len = chunk + (w < rem ? 1 : 0);
        std::uint64_t b = begin, e = begin + len;
        begin = e;
        pool.emplace_back([&, w, b, e] { body(b, e, parts[w]); });
    }
    for (auto& t : pool) t.join();
    Partial whole = std::move(parts[0]);
    for (unsigned w = 1; w < workers; ++w) merge(whole, parts[w]);
    return whole;
}

}  // namespace latflow
