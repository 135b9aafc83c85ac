#include "portwar/metrics.hpp"

#include <algorithm>

#include "portwar/errors.hpp"

namespace portwar {

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
    if (window == 0) throw ContractViolation("moving_average: window must be >= 1");
    std::vector<double> out;
    out.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::size_t first = i + 1 >= window ? i + 1 - window : 0;
        double sum = 0.0;
        for (std::size_t j = first; j <= i; ++j) sum += series[j];
        out.push_back(sum / static_cast<double>(i + 1 - first));
    }
    return out;
}

std::vector<double> trailing_rate(const std::vector<bool>& flags, std::size_t window) {
    if (window == 0) throw ContractViolation("trailing_rate: window must be >= 1");
    std::vector<double> out;
    out.reserve(flags.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        hits += flags[i] ? 1 : 0;
        if (i >= window && flags[i - window]) --hits;
        const std::size_t n = std::min(i + 1, window);
        out.push_back(static_cast<double>(hits) / static_cast<double>(n));
    }
    return out;
}

double tail_mean(std::span<const double> series, std::size_t n) {
    const std::size_t k = std::min(n, series.size());
    if (k == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = series.size() - k; i < series.size(); ++i) sum += series[i];
    return sum / static_cast<double>(k);
}

}  // namespace portwar
