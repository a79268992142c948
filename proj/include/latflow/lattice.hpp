#pragma once
// Discrete subgroups of R^m: shortest nonzero vector, covolume, and truncated
// enumeration of primitive subgroup families. Exact integer bases are the
// primary representation; floating bases cover flow orbits, where matrix
// entries are transcendental anyway.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "latflow/exact.hpp"

namespace latflow {

enum class Norm { sup, euclidean };

// Exact bases are Int rows times a positive rational scale, which keeps
// rational input exact while the reduction machinery works over integers.
struct LatticeBasis {
    std::size_t ambient_dim = 0;
    bool exact = true;
    std::vector<std::vector<Int>> igen;
    Rational scale{1};
    std::vector<std::vector<double>> fgen;

    std::size_t rank() const { return exact ? igen.size() : fgen.size(); }

    static LatticeBasis from_int_rows(std::vector<std::vector<Int>> rows);
    static LatticeBasis from_rational_rows(const std::vector<std::vector<Rational>>& rows);
    static LatticeBasis from_double_rows(std::vector<std::vector<double>> rows);

    // generators as doubles regardless of variant
    std::vector<std::vector<double>> rows_as_double() const;
};

struct SizeGuardExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Norm of the shortest nonzero lattice vector. Basis reduction first, then
// exhaustive enumeration inside the radius certified by the reduced basis;
// integer bases get exact candidate evaluation, so the returned value is the
// exact minimum (converted to double at the end).
double delta(const LatticeBasis& L, Norm norm);

// Exact minima for integer row sets: smallest sup norm, and smallest squared
// Euclidean norm.
Int min_sup_exact(const std::vector<std::vector<Int>>& rows);
Int min_norm2_exact(const std::vector<std::vector<Int>>& rows);

double covolume(const LatticeBasis& L);
// Gram determinant of integer generators: covolume squared, exact.
Int covolume_squared_exact(const std::vector<std::vector<Int>>& rows);

struct SubgroupFamilyOptions {
    // hard cap on (deduplicated) family size plus scanned extension pairs
    std::size_t size_guard = 2'000'000;
};

// All primitive subgroups of L of rank <= max_rank generated by lattice
// vectors whose coefficient vectors (in the basis of L) have sup norm <=
// height. Output is deduplicated by canonical representing multivector and
// sorted, so it is stable across runs and worker counts. Generators of each
// subgroup are returned in Hermite normal form of the coefficient matrix.
//
// Completeness note: subgroups are grown by extending primitive lower-rank
// ones, which enumerates every primitive subgroup for rank <= 2 and for rank
// = rank(L); intermediate ranks >= 3 may miss members whose generating sets
// have no primitive sub-basis inside the height box.
std::vector<LatticeBasis> enumerate_subgroups(const LatticeBasis& L, std::size_t max_rank,
                                              long height,
                                              const SubgroupFamilyOptions& opts = {});

// Floating-point shortest vector used by flow orbits; F is double or a
// wider binary float. Returns the minimum norm over nonzero vectors.
template <typename F>
F shortest_vector_float(const std::vector<std::vector<F>>& rows, Norm norm);

}  // namespace latflow
