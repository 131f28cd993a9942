#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pfreq {

// Reals are accepted as decimals ("0.5", "1e-3") or exact rationals ("1/128").
double parse_real(std::string_view text);
// Comma-separated list of parse_real values.
std::vector<double> parse_real_list(std::string_view text, char sep = ',');
// "a:b:step", endpoints included (b is hit when it lies on the grid within 1e-9*step).
std::vector<double> parse_grid(std::string_view text);

std::string trim(std::string_view text);

}  // namespace pfreq
