#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace ubmot {

// Working type for sums whose monomial terms cancel badly (condition numbers
// up to ~1e35 on the supported grid).  100 decimal digits.
using Ext = boost::multiprecision::cpp_bin_float_100;

inline double to_double(const Ext& x) { return x.convert_to<double>(); }

}  // namespace ubmot
