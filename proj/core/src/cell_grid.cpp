#include "lagrmc/cell_grid.hpp"

#include <algorithm>
#include <limits>

#include "lagrmc/errors.hpp"

namespace lagrmc {

namespace {
// Above this the dense grid would cost more memory than the naive scan is
// worth; callers fall back to the O(N^2) path.
constexpr std::size_t kMaxCells = std::size_t{1} << 22;
} // namespace

CellGrid::CellGrid(std::span<const double> positions, std::size_t n, int d, double cell) {
    if (d < 1 || d > kMaxDim) throw Error("cell grid: unsupported dimension");
    if (!(cell > 0.0)) throw Error("cell grid: cell edge must be positive");
    d_ = d;
    inv_cell_ = 1.0 / cell;
    if (n == 0 || n > std::numeric_limits<std::uint32_t>::max()) return;

    double lo[kMaxDim], hi[kMaxDim];
    for (int j = 0; j < d; ++j) {
        lo[j] = positions[j];
        hi[j] = positions[j];
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double* p = positions.data() + i * d;
        for (int j = 0; j < d; ++j) {
            lo[j] = std::min(lo[j], p[j]);
            hi[j] = std::max(hi[j], p[j]);
        }
    }

    std::size_t total = 1;
    for (int j = 0; j < d; ++j) {
        origin_[j] = lo[j];
        const long nc = static_cast<long>(std::floor((hi[j] - lo[j]) * inv_cell_)) + 1;
        ncells_[j] = std::max(nc, 1L);
        if (total > kMaxCells / static_cast<std::size_t>(ncells_[j])) return; // too large
        total *= static_cast<std::size_t>(ncells_[j]);
    }
    total_cells_ = total;

    // Counting sort by cell, scattering ids in ascending order (stable).
    cell_start_.assign(total + 1, 0);
    std::vector<std::uint32_t> cell_of(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = positions.data() + i * d;
        std::size_t flat = 0;
        for (int j = 0; j < d; ++j) {
            long c = static_cast<long>(std::floor((p[j] - origin_[j]) * inv_cell_));
            c = std::clamp(c, 0L, ncells_[j] - 1);
            flat = flat * static_cast<std::size_t>(ncells_[j]) + static_cast<std::size_t>(c);
        }
        cell_of[i] = static_cast<std::uint32_t>(flat);
        ++cell_start_[flat + 1];
    }
    for (std::size_t c = 0; c < total; ++c) cell_start_[c + 1] += cell_start_[c];

    ids_.resize(n);
    std::vector<std::uint32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i)
        ids_[cursor[cell_of[i]]++] = static_cast<std::uint32_t>(i);

    usable_ = true;
}

} // namespace lagrmc
