#pragma once
// High-precision float type for long flow times, where e^{t_i} overflows the
// double exponent range or cancellation eats all the mantissa. 128 bits of
// mantissa keeps relative error far below the 1e-10 re-verification gate.

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace latflow {

using BigFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<128, boost::multiprecision::digit_base_2>>;

}  // namespace latflow
