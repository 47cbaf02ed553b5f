#pragma once

#include <cstddef>
#include <span>

namespace plateau {

// Pairwise (tree) summation. The split points depend only on the length, so
// the result is bit-identical however the terms were produced.
double pairwise_sum(std::span<const double> values);

}  // namespace plateau
