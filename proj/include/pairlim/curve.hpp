#pragma once

#include <cstddef>
#include <vector>

namespace pairlim {

/// Vector-valued series on a time grid; values[k] is the point at grid[k].
struct LimitCurve {
    std::vector<double> grid;
    std::vector<std::vector<double>> values;

    [[nodiscard]] std::size_t size() const noexcept { return grid.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return values.empty() ? 0 : values.front().size(); }
    [[nodiscard]] double at(std::size_t k, std::size_t j = 0) const { return values[k][j]; }
    /// One coordinate as a column.
    [[nodiscard]] std::vector<double> column(std::size_t j) const {
        std::vector<double> out(values.size());
        for (std::size_t k = 0; k < values.size(); ++k) out[k] = values[k][j];
        return out;
    }
};

/// `points` equally spaced times covering [0, horizon] (points >= 2).
std::vector<double> uniform_grid(double horizon, std::size_t points);

}  // namespace pairlim
