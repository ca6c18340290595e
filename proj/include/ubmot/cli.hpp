#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ubmot::cli {

// "a..b" inclusive, "a,b,c", or a single integer.
std::vector<long> parse_int_range(const std::string& s);
// "a:b:n" (n points, endpoints included), "x,y,z", or a single value.
std::vector<double> parse_real_grid(const std::string& s);

// --threads, else UBMOT_THREADS, else hardware concurrency.
int resolve_threads(int flag);

// Exit codes: 0 ok, 1 usage, 2 domain error, 3 stability error,
// 4 validation failure.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ubmot::cli
