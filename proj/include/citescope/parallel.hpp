#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace citescope {

// Sum f(i) for i in [0, n). Partial sums are taken over fixed-size blocks and
// combined in block order, so the result does not depend on the number of
// OpenMP threads.
template <typename F>
double block_sum(std::size_t n, F&& f) {
    constexpr std::size_t kBlock = 4096;
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

}  // namespace citescope
