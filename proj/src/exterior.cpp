#include "latflow/exterior.hpp"

#include "latflow/exact.hpp"

namespace latflow {

// Explicit instantiations for the scalar types used across the project, so
// dependent translation units stay lean.
template struct Multivector<double>;
template struct Multivector<Int>;
template struct Multivector<Rational>;

template Multivector<double> wedge(const Multivector<double>&, const Multivector<double>&);
template Multivector<Int> wedge(const Multivector<Int>&, const Multivector<Int>&);
template Multivector<Rational> wedge(const Multivector<Rational>&, const Multivector<Rational>&);

template Multivector<double> represent_subgroup(const std::vector<std::vector<double>>&);
template Multivector<Int> represent_subgroup(const std::vector<std::vector<Int>>&);

template Multivector<double> apply_exterior(const Mat<double>&, const Multivector<double>&);

}  // namespace latflow
