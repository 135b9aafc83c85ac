#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace portwar {

/// Trailing mean; element i averages the last min(i + 1, window) values.
std::vector<double> moving_average(std::span<const double> series, std::size_t window = 50);

/// Trailing fraction of true flags over the last min(i + 1, window) entries.
std::vector<double> trailing_rate(const std::vector<bool>& flags, std::size_t window = 100);

/// Mean of the last min(n, size) values; 0 for an empty series.
double tail_mean(std::span<const double> series, std::size_t n);

}  // namespace portwar
