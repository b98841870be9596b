#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdlab/cell_mask.hpp"
#include "sdlab/geometry.hpp"

namespace sdlab {

// Cubes Q with designated subsets E_Q (cell masks on `grid`, virtual cells
// allowed) and a sparseness parameter.
struct SparseFamily {
    GridSpec grid;
    double gamma = 0.5;
    std::vector<Cube> cubes;
    std::vector<CellMask> masks;

    std::size_t size() const { return cubes.size(); }
    bool empty() const { return cubes.empty(); }
    void add(const Cube& q, CellMask e) {
        cubes.push_back(q);
        masks.push_back(std::move(e));
    }
    void append(const SparseFamily& o);
};

struct SparseReport {
    bool ok = true;
    double gamma = 0.0;
    // Smallest |E_Q| / |Q| over the family (1 for an empty family).
    double min_ratio = 1.0;
    std::vector<std::string> violations;
};

// E_Q inside Q, |E_Q| >= gamma |Q| by cell count, masks pairwise disjoint.
SparseReport verify_sparse(const SparseFamily& fam);
SparseReport verify_sparse(const SparseFamily& fam, double gamma);

// |Q| in cell units (virtual cells included).
std::int64_t cell_count(const Cube& q, const GridSpec& g);

nlohmann::json to_json(const CellMask& m);
CellMask mask_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SparseFamily& fam);
SparseFamily family_from_json(const nlohmann::json& j);
// Columns: index,k,corner0,corner1,side,eq_cells,q_cells
void write_csv(std::ostream& os, const SparseFamily& fam);

}  // namespace sdlab
