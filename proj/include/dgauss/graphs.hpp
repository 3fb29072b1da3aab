#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "dgauss/special.hpp"

namespace dgauss::graphs {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;

/// Finite simple (q+1)-regular graph with q >= 1. Immutable after construction.
class RegularGraph {
public:
    /// Validates: ids in range, no self-loops, no multi-edges, every vertex of
    /// the same degree >= 2. Throws ValidationError naming the offending vertex.
    static RegularGraph from_edges(std::size_t vertex_count, const std::vector<Edge>& edges);

    std::size_t vertex_count() const { return adjacency_.size(); }
    long degree() const { return degree_; }
    long q() const { return degree_ - 1; }
    const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }
    const std::vector<std::vector<Vertex>>& adjacency() const { return adjacency_; }

private:
    RegularGraph(std::vector<std::vector<Vertex>> adjacency, long degree)
        : adjacency_(std::move(adjacency)), degree_(degree) {}

    std::vector<std::vector<Vertex>> adjacency_;
    long degree_ = 0;
};

// Standard families.
RegularGraph cycle(std::size_t n);
RegularGraph complete(std::size_t n);
RegularGraph hypercube(int dim);
RegularGraph petersen();

/// Edge-list text: one "u v" pair per line, 0-based ids, '#' starts a
/// comment, blank lines ignored. The vertex count is 1 + the largest id.
RegularGraph parse_edge_list(std::istream& in, const std::string& source = "<stream>");
RegularGraph load_graph(const std::filesystem::path& path);

/// Non-backtracking walk counts c_0..c_M from origin to target.
struct WalkCounts {
    Vertex origin = 0;
    Vertex target = 0;
    std::vector<BigInt> counts;
};

/// c_m(x) for every vertex x, by dynamic programming over directed edges.
std::vector<WalkCounts> count_geodesics(const RegularGraph& g, Vertex origin, int max_len);

/// b_m = c_m - (q-1)(c_{m-2} + c_{m-4} + ...).
std::vector<BigInt> bm_coefficients(const std::vector<BigInt>& counts, long q);

/// Smallest M such that the certified remainder of the expansion beyond M is
/// below tol, using |b_m| <= (q+2) q^{m-1}. Throws ResourceError past 512.
int expansion_length(long q, double t, double tol);

/// e^{-(q+1)t} sum_m b_m q^{-m/2} I_m(2 sqrt(q) t) for given b_0..b_M.
double expansion_from_coefficients(const std::vector<BigInt>& b, long q, double t);

double kernel_graph(const RegularGraph& g, Vertex origin, Vertex target, double t, double tol = 1e-12);

/// kernel_graph for every target, sharing one walk-count pass.
std::vector<double> kernel_graph_column(const RegularGraph& g, Vertex origin, double t, double tol = 1e-12);

/// Column of exp(-t Laplacian) at origin. Dense symmetric eigendecomposition
/// up to 2000 vertices, scaled Taylor series beyond; ResourceError past 10^4.
std::vector<double> matrix_exp_kernel(const RegularGraph& g, Vertex origin, double t);

std::vector<double> matrix_exp_kernel_dense(const RegularGraph& g, Vertex origin, double t);
std::vector<double> matrix_exp_kernel_taylor(const RegularGraph& g, Vertex origin, double t);

/// Sparse operator M >= 0 (entrywise) with Laplacian = shift * I - M.
struct ShiftedOperator {
    std::vector<std::size_t> row_start;
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    double shift = 0.0;

    std::size_t size() const { return row_start.empty() ? 0 : row_start.size() - 1; }
};

ShiftedOperator laplacian_operator(const RegularGraph& g);

/// exp(-t (shift I - M)) v via a Taylor series of exp(hM) over steps of
/// length h <= 1/shift. All series terms are non-negative for v >= 0.
std::vector<double> heat_apply(const ShiftedOperator& op, std::vector<double> v, double t);

namespace serial {
std::vector<double> heat_apply(const ShiftedOperator& op, std::vector<double> v, double t);
} // namespace serial

/// Truncated (q+1)-regular tree of the given radius, in radial coordinates.
/// Heat started at the root stays radial, so per-vertex values at distance r
/// evolve under a (radius+1)-state operator.
struct BetheLattice {
    long q = 2;
    long radius = 30;

    ShiftedOperator radial_operator() const;

    /// Per-vertex heat at distance r = 0..radius, via heat_apply on the radial operator.
    std::vector<double> matrix_exp_kernel(double t) const;

    /// Non-backtracking walk counts from the root to one fixed vertex at
    /// distance r, via the directed-edge recursion lumped by distance.
    std::vector<BigInt> walk_counts(long r, int max_len) const;

    /// Bessel expansion at a vertex at distance r, fed by walk_counts.
    double kernel_graph(long r, double t, double tol = 1e-12) const;

    double sphere_size(long r) const;
};

} // namespace dgauss::graphs
