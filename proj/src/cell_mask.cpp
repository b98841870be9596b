#include "sdlab/cell_mask.hpp"

#include <algorithm>
#include <tuple>

namespace sdlab {

CellMask CellMask::from_box(const CellBox& b) {
    CellMask m;
    if (b.empty()) return m;
    std::int64_t r0 = b.dim == 2 ? b.lo[1] : 0;
    std::int64_t r1 = b.dim == 2 ? b.hi[1] : 1;
    for (std::int64_t r = r0; r < r1; ++r) m.runs_.push_back({r, b.lo[0], b.hi[0]});
    return m;
}

CellMask CellMask::from_runs(std::vector<Run> runs) {
    CellMask m;
    m.runs_ = std::move(runs);
    m.normalize();
    return m;
}

CellMask CellMask::from_flags(const GridSpec& g, const std::vector<std::uint8_t>& flags) {
    CellMask m;
    const std::int64_t rows = g.dim == 2 ? g.n : 1;
    for (std::int64_t r = 0; r < rows; ++r) {
        std::int64_t i = 0;
        while (i < g.n) {
            if (!flags[static_cast<std::size_t>(r * g.n + i)]) {
                ++i;
                continue;
            }
            std::int64_t s = i;
            while (i < g.n && flags[static_cast<std::size_t>(r * g.n + i)]) ++i;
            m.runs_.push_back({r, s, i});
        }
    }
    return m;
}

void CellMask::normalize() {
    runs_.erase(std::remove_if(runs_.begin(), runs_.end(), [](const Run& r) { return r.end <= r.begin; }),
                runs_.end());
    std::sort(runs_.begin(), runs_.end(),
              [](const Run& a, const Run& b) { return std::tie(a.row, a.begin) < std::tie(b.row, b.begin); });
    std::vector<Run> out;
    for (const auto& r : runs_) {
        if (!out.empty() && out.back().row == r.row && r.begin <= out.back().end) {
            out.back().end = std::max(out.back().end, r.end);
        } else {
            out.push_back(r);
        }
    }
    runs_ = std::move(out);
}

std::int64_t CellMask::size() const {
    std::int64_t s = 0;
    for (const auto& r : runs_) s += r.end - r.begin;
    return s;
}

bool CellMask::contains(std::int64_t i0, std::int64_t row) const {
    auto it = std::upper_bound(runs_.begin(), runs_.end(), std::make_pair(row, i0),
                               [](const std::pair<std::int64_t, std::int64_t>& key, const Run& r) {
                                   return std::tie(key.first, key.second) < std::tie(r.row, r.begin);
                               });
    if (it == runs_.begin()) return false;
    --it;
    return it->row == row && i0 >= it->begin && i0 < it->end;
}

bool CellMask::within(const CellBox& b) const {
    std::int64_t r0 = b.dim == 2 ? b.lo[1] : 0;
    std::int64_t r1 = b.dim == 2 ? b.hi[1] : 1;
    for (const auto& r : runs_) {
        if (r.row < r0 || r.row >= r1 || r.begin < b.lo[0] || r.end > b.hi[0]) return false;
    }
    return true;
}

namespace {

// Merge-walk over rows, combining per-row interval lists with `op`.
template <typename RowOp>
std::vector<CellMask::Run> combine(const std::vector<CellMask::Run>& a, const std::vector<CellMask::Run>& b,
                                   RowOp op) {
    std::vector<CellMask::Run> out;
    std::size_t i = 0, j = 0;
    std::vector<CellMask::Run> ra, rb;
    while (i < a.size() || j < b.size()) {
        std::int64_t row;
        if (i < a.size() && j < b.size())
            row = std::min(a[i].row, b[j].row);
        else if (i < a.size())
            row = a[i].row;
        else
            row = b[j].row;
        ra.clear();
        rb.clear();
        while (i < a.size() && a[i].row == row) ra.push_back(a[i++]);
        while (j < b.size() && b[j].row == row) rb.push_back(b[j++]);
        op(row, ra, rb, out);
    }
    return out;
}

}  // namespace

CellMask CellMask::unite(const CellMask& o) const {
    std::vector<Run> all = runs_;
    all.insert(all.end(), o.runs_.begin(), o.runs_.end());
    return from_runs(std::move(all));
}

CellMask CellMask::subtract(const CellMask& o) const {
    auto rows = combine(runs_, o.runs_, [](std::int64_t row, const std::vector<Run>& ra, const std::vector<Run>& rb,
                                           std::vector<Run>& out) {
        std::size_t k = 0;
        for (const auto& r : ra) {
            std::int64_t cur = r.begin;
            while (k < rb.size() && rb[k].end <= cur) ++k;
            std::size_t m = k;
            while (m < rb.size() && rb[m].begin < r.end) {
                if (rb[m].begin > cur) out.push_back({row, cur, rb[m].begin});
                cur = std::max(cur, rb[m].end);
                ++m;
            }
            if (cur < r.end) out.push_back({row, cur, r.end});
        }
    });
    return from_runs(std::move(rows));
}

CellMask CellMask::intersect(const CellMask& o) const {
    auto rows = combine(runs_, o.runs_, [](std::int64_t row, const std::vector<Run>& ra, const std::vector<Run>& rb,
                                           std::vector<Run>& out) {
        std::size_t x = 0, y = 0;
        while (x < ra.size() && y < rb.size()) {
            std::int64_t s = std::max(ra[x].begin, rb[y].begin);
            std::int64_t e = std::min(ra[x].end, rb[y].end);
            if (s < e) out.push_back({row, s, e});
            if (ra[x].end < rb[y].end)
                ++x;
            else
                ++y;
        }
    });
    return from_runs(std::move(rows));
}

CellMask CellMask::clipped(const GridSpec& g) const { return intersect(from_box(whole_grid(g))); }

CellMask CellMask::first_cells(std::int64_t count) const {
    CellMask m;
    for (const auto& r : runs_) {
        if (count <= 0) break;
        std::int64_t take = std::min(count, r.end - r.begin);
        m.runs_.push_back({r.row, r.begin, r.begin + take});
        count -= take;
    }
    return m;
}

std::vector<std::uint8_t> CellMask::to_flags(const GridSpec& g) const {
    std::vector<std::uint8_t> flags(g.cells(), 0);
    for_each_grid_cell(g, [&](std::size_t c) { flags[c] = 1; });
    return flags;
}

void CellMask::for_each_grid_cell(const GridSpec& g, const std::function<void(std::size_t)>& fn) const {
    const std::int64_t rows = g.dim == 2 ? g.n : 1;
    for (const auto& r : runs_) {
        if (r.row < 0 || r.row >= rows) continue;
        std::int64_t b = std::max<std::int64_t>(r.begin, 0);
        std::int64_t e = std::min<std::int64_t>(r.end, g.n);
        for (std::int64_t i = b; i < e; ++i) fn(static_cast<std::size_t>(r.row * g.n + i));
    }
}

bool pairwise_disjoint(const std::vector<const CellMask*>& masks) {
    std::vector<CellMask::Run> all;
    for (const auto* m : masks) all.insert(all.end(), m->runs().begin(), m->runs().end());
    std::sort(all.begin(), all.end(), [](const CellMask::Run& a, const CellMask::Run& b) {
        return std::tie(a.row, a.begin) < std::tie(b.row, b.begin);
    });
    for (std::size_t i = 1; i < all.size(); ++i) {
        if (all[i].row == all[i - 1].row && all[i].begin < all[i - 1].end) return false;
    }
    return true;
}

}  // namespace sdlab
