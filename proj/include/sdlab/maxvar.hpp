#pragma once

#include <vector>

#include "sdlab/grid.hpp"
#include "sdlab/operators.hpp"

namespace sdlab {

// r-variation norm |a(n1)| + (sum |a(n_{v+1}) - a(n_v)|^r)^{1/r}, supremum over
// increasing index chains; r in [1, inf]. Each entry of seq is a C^M value.
double vr_norm(const std::vector<std::vector<cplx>>& seq, double r);
double vr_norm(const std::vector<double>& seq, double r);
// Variation seminorm (the same supremum without the |a(n1)| term).
double vr_seminorm(const std::vector<std::vector<cplx>>& seq, double r);
double vr_seminorm(const std::vector<double>& seq, double r);
// Endpoints and strict local extrema of a real sequence (plateaus collapsed).
std::vector<std::size_t> extrema_candidates(const std::vector<double>& seq);

// Pointwise (sum_j |T_j f|^r)^{1/r} over the family's scales.
GridFunction sr_apply(const OperatorFamily& fam, double r, const GridFunction& f);
// Pointwise V^r norm of j -> T_j f(x).
GridFunction vr_operator(const OperatorFamily& fam, double r, const GridFunction& f);

// Long/short split of t -> A_t f(x) over a finite set of times. The long part
// is the variation over the dyadic times 2^j, the short part the l^r sum of
// seminorms over the octaves [2^j, 2^{j+1}] (dyadic endpoints included).
struct LongShort {
    GridFunction full;
    GridFunction dyadic;
    GridFunction shortv;
};
LongShort long_short_split(const std::vector<double>& times, const std::vector<GridFunction>& seq, double r);
// Same with A_t f = f * sigma_t for t in E; the dyadic times covering E are added.
LongShort long_short_split(const GridFunction& sigma, const DilationSet& E, double r, const GridFunction& f);
// Constant in V^r_E <= V^r_dyad + c V^r_short.
inline constexpr double kShortVariationConstant = 2.0;

// sup over N1 <= n1 <= n2 <= N2 of |sum_{j=n1}^{n2} T_j f|.
GridFunction trunc_max(const OperatorFamily& fam, const GridFunction& f);
// V^r norm of the partial sums n -> sum_{j=N1}^{n} T_j f.
GridFunction trunc_var(const OperatorFamily& fam, double r, const GridFunction& f);
inline constexpr int kMaxTruncationRange = 64;

enum class EmbedKind { lr, vr, truncation };

// H_j with values indexed by k (lr), n (vr: H_j f(x, n) = T_j f(x) for n >= j)
// or pairs n1 <= j <= n2 (truncation). The embedded family has out_dim =
// index_count * fam.out_dim and matrix kernels.
OperatorFamily hj_embed(const OperatorFamily& fam, EmbedKind kind);
std::size_t embed_index_count(const OperatorFamily& fam, EmbedKind kind);
// Pointwise norm of an embedded output: l^r over k, V^r over n, or the sup
// over pairs. block is the original output dimension.
GridFunction embed_aggregate(const GridFunction& F, EmbedKind kind, double r, int block);

}  // namespace sdlab
