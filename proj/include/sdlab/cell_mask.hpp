#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sdlab/geometry.hpp"

namespace sdlab {

// Set of (possibly virtual) cells stored as sorted, merged runs along axis 0.
// In 1D every run has row 0.
class CellMask {
public:
    struct Run {
        std::int64_t row = 0;
        std::int64_t begin = 0;
        std::int64_t end = 0;  // exclusive
        bool operator==(const Run&) const = default;
    };

    CellMask() = default;
    static CellMask from_box(const CellBox& b);
    static CellMask from_runs(std::vector<Run> runs);
    // flags has g.cells() entries; nonzero marks membership.
    static CellMask from_flags(const GridSpec& g, const std::vector<std::uint8_t>& flags);

    const std::vector<Run>& runs() const { return runs_; }
    std::int64_t size() const;
    bool empty() const { return runs_.empty(); }
    bool contains(std::int64_t i0, std::int64_t row) const;
    bool within(const CellBox& b) const;

    CellMask unite(const CellMask& o) const;
    CellMask subtract(const CellMask& o) const;
    CellMask intersect(const CellMask& o) const;
    CellMask clipped(const GridSpec& g) const;
    // The first `count` cells in (row, i0) order.
    CellMask first_cells(std::int64_t count) const;

    std::vector<std::uint8_t> to_flags(const GridSpec& g) const;
    void for_each_grid_cell(const GridSpec& g, const std::function<void(std::size_t)>& fn) const;

    bool operator==(const CellMask&) const = default;

private:
    void normalize();
    std::vector<Run> runs_;
};

// True iff no cell belongs to two of the masks.
bool pairwise_disjoint(const std::vector<const CellMask*>& masks);

}  // namespace sdlab
