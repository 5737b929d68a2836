#pragma once

#include <cstddef>
#include <vector>

namespace tlx {

// Sample Pearson coefficient. Throws std::invalid_argument for mismatched or
// too-short input and std::domain_error("zero variance") for a constant side.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Two-tailed p-value of the non-correlation t-test with n - 2 degrees of
// freedom. Throws std::invalid_argument("insufficient samples") for n < 3.
double p_value(double r, std::size_t n);

}  // namespace tlx
