#pragma once

// Dense uniform grid over a particle snapshot with cell edge equal to the
// mollifier width: any pair closer than one width lives in adjacent cells,
// so a query scans only its 3^d neighborhood. Particles are stored in
// ascending id order inside each cell, and neighborhoods are visited in a
// fixed cell-scan order, so the summation order — hence the floating-point
// result — is independent of thread count.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "lagrmc/vec_ops.hpp"

namespace lagrmc {

class CellGrid {
public:
    // positions: n*d flat array. cell: cell edge (> 0).
    CellGrid(std::span<const double> positions, std::size_t n, int d, double cell);

    // False when the grid would be degenerate or too large to allocate; the
    // caller then evaluates naively (the results agree either way).
    bool usable() const { return usable_; }

    std::size_t cell_count() const { return total_cells_; }

    // Calls f(id) for every particle in the 3^d cells around q, cells in
    // lexicographic offset order and ids ascending within a cell.
    template <class F>
    void for_neighbors(std::span<const double> q, F&& f) const {
        long base[kMaxDim];
        for (int j = 0; j < d_; ++j)
            base[j] = static_cast<long>(std::floor((q[j] - origin_[j]) * inv_cell_));

        int off[kMaxDim];
        for (int j = 0; j < d_; ++j) off[j] = -1;
        for (;;) {
            bool in_range = true;
            std::size_t flat = 0;
            for (int j = 0; j < d_; ++j) {
                const long c = base[j] + off[j];
                if (c < 0 || c >= ncells_[j]) {
                    in_range = false;
                    break;
                }
                flat = flat * static_cast<std::size_t>(ncells_[j]) +
                       static_cast<std::size_t>(c);
            }
            if (in_range) {
                const std::uint32_t lo = cell_start_[flat];
                const std::uint32_t hi = cell_start_[flat + 1];
                for (std::uint32_t k = lo; k < hi; ++k) f(ids_[k]);
            }
            int j = 0;
            while (j < d_ && off[j] == 1) {
                off[j] = -1;
                ++j;
            }
            if (j == d_) break;
            ++off[j];
        }
    }

private:
    int d_ = 1;
    double inv_cell_ = 1.0;
    double origin_[kMaxDim] = {};
    long ncells_[kMaxDim] = {};
    std::size_t total_cells_ = 0;
    bool usable_ = false;
    std::vector<std::uint32_t> cell_start_; // size total_cells_ + 1
    std::vector<std::uint32_t> ids_;        // size n, cell-major, id-ascending
};

} // namespace lagrmc
