#include "dgauss/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "dgauss/bessel.hpp"
#include "dgauss/errors.hpp"
#include "dgauss/heat.hpp"

namespace dgauss::graphs {

namespace {

constexpr int kMaxExpansion = 512;
constexpr std::size_t kDenseLimit = 2000;
constexpr std::size_t kVertexCap = 10000;

void check_time(double t, const char* what) {
    if (!std::isfinite(t) || t < 0.0) {
        throw DomainError(std::string(what) + ": t must be finite and non-negative");
    }
}

void check_vertex(const RegularGraph& g, Vertex v, const char* what) {
    if (v >= g.vertex_count()) {
        throw DomainError(std::string(what) + ": vertex " + std::to_string(v) + " out of range (graph has " +
                          std::to_string(g.vertex_count()) + " vertices)");
    }
}

// sum_m b_m * blocks[m], blocks[m] = q^{-m/2} e^{-(q+1)t} I_m(2 sqrt(q) t).
double weighted_sum(const std::vector<BigInt>& b, const std::vector<long double>& blocks) {
    long double sum = 0.0L;
    const std::size_t n = std::min(b.size(), blocks.size());
    for (std::size_t m = 0; m < n; ++m) {
        if (b[m] == 0 || blocks[m] == 0.0L) continue;
        sum += b[m].convert_to<long double>() * blocks[m];
    }
    return static_cast<double>(sum);
}

std::vector<long double> building_blocks(long q, double t, int max_len) {
    std::vector<long double> out(static_cast<std::size_t>(max_len) + 1, 0.0L);
    if (t == 0.0) {
        out[0] = 1.0L;
        return out;
    }
    const long double root = std::sqrt(static_cast<long double>(q));
    const long double damping = (root - 1.0L) * (root - 1.0L) * t;
    const long double log_q = std::log(static_cast<long double>(q));
    const std::vector<double> k = bessel::scaled_bessel_i_sequence(static_cast<double>(root * t), max_len);
    for (int m = 0; m <= max_len; ++m) {
        const double km = k[static_cast<std::size_t>(m)];
        if (km == 0.0) continue;
        out[static_cast<std::size_t>(m)] = std::exp(std::log(static_cast<long double>(km)) - 0.5L * m * log_q - damping);
    }
    return out;
}

ShiftedOperator from_triplets(std::size_t n, const std::vector<std::map<std::size_t, double>>& rows, double shift) {
    ShiftedOperator op;
    op.shift = shift;
    op.row_start.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [c, v] : rows[i]) {
            op.cols.push_back(c);
            op.vals.push_back(v);
        }
        op.row_start[i + 1] = op.cols.size();
    }
    return op;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

void matvec_parallel(const ShiftedOperator& op, const std::vector<double>& x, std::vector<double>& y, double h) {
    const long n = static_cast<long>(op.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = op.row_start[i]; k < op.row_start[i + 1]; ++k) acc += op.vals[k] * x[op.cols[k]];
        y[static_cast<std::size_t>(i)] = h * acc;
    }
}

void matvec_serial(const ShiftedOperator& op, const std::vector<double>& x, std::vector<double>& y, double h) {
    for (std::size_t i = 0; i < op.size(); ++i) {
        double acc = 0.0;
        for (std::size_t k = op.row_start[i]; k < op.row_start[i + 1]; ++k) acc += op.vals[k] * x[op.cols[k]];
        y[i] = h * acc;
    }
}

template <class MatVec>
std::vector<double> heat_apply_impl(const ShiftedOperator& op, std::vector<double> v, double t, MatVec matvec) {
    check_time(t, "heat_apply");
    if (v.size() != op.size()) throw DomainError("heat_apply: vector size does not match operator");
    if (t == 0.0 || op.shift == 0.0) return v;
    const long steps = std::max(1L, static_cast<long>(std::ceil(t * op.shift)));
    const double h = t / static_cast<double>(steps);
    const double decay = std::exp(-op.shift * h);
    std::vector<double> term(v.size());
    std::vector<double> next(v.size());
    for (long s = 0; s < steps; ++s) {
        // exp(hM) v with ||hM|| <= 1: the terms fall at least like 1/k!.
        term = v;
        std::vector<double> sum = v;
        for (int k = 1; k < 60; ++k) {
            matvec(op, term, next, h / k);
            term.swap(next);
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
            if (max_abs(term) <= 1e-18 * max_abs(sum)) break;
        }
        for (std::size_t i = 0; i < sum.size(); ++i) v[i] = decay * sum[i];
    }
    return v;
}

} // namespace

RegularGraph RegularGraph::from_edges(std::size_t vertex_count, const std::vector<Edge>& edges) {
    if (vertex_count == 0) throw ValidationError("graph: no vertices");
    std::vector<std::set<Vertex>> adj(vertex_count);
    for (const auto& [u, v] : edges) {
        if (u >= vertex_count || v >= vertex_count) {
            throw ValidationError("graph: vertex " + std::to_string(std::max(u, v)) + " out of range");
        }
        if (u == v) throw ValidationError("graph: self-loop at vertex " + std::to_string(u));
        if (!adj[u].insert(v).second) {
            throw ValidationError("graph: duplicate edge " + std::to_string(u) + " " + std::to_string(v));
        }
        adj[v].insert(u);
    }
    for (Vertex v = 0; v < vertex_count; ++v) {
        if (adj[v].size() < 2) {
            throw ValidationError("graph: vertex " + std::to_string(v) + " has degree " +
                                  std::to_string(adj[v].size()) + ", need at least 2");
        }
    }
    std::map<std::size_t, std::size_t> tally;
    for (const auto& a : adj) ++tally[a.size()];
    std::size_t degree = 0;
    std::size_t best = 0;
    for (const auto& [d, c] : tally) {
        if (c >= best) {
            best = c;
            degree = d;
        }
    }
    for (Vertex v = 0; v < vertex_count; ++v) {
        if (adj[v].size() != degree) {
            throw ValidationError("graph: not regular, vertex " + std::to_string(v) + " has degree " +
                                  std::to_string(adj[v].size()) + " but most vertices have degree " +
                                  std::to_string(degree));
        }
    }
    std::vector<std::vector<Vertex>> lists(vertex_count);
    for (Vertex v = 0; v < vertex_count; ++v) lists[v].assign(adj[v].begin(), adj[v].end());
    return RegularGraph(std::move(lists), static_cast<long>(degree));
}

RegularGraph cycle(std::size_t n) {
    if (n < 3) throw DomainError("cycle: n must be >= 3");
    std::vector<Edge> e;
    for (Vertex i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return RegularGraph::from_edges(n, e);
}

RegularGraph complete(std::size_t n) {
    if (n < 3) throw DomainError("complete: n must be >= 3");
    std::vector<Edge> e;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return RegularGraph::from_edges(n, e);
}

RegularGraph hypercube(int dim) {
    if (dim < 2 || dim > 13) throw DomainError("hypercube: dim must lie in [2, 13]");
    const std::size_t n = std::size_t{1} << dim;
    std::vector<Edge> e;
    for (Vertex v = 0; v < n; ++v)
        for (int b = 0; b < dim; ++b) {
            const Vertex w = v ^ (Vertex{1} << b);
            if (v < w) e.emplace_back(v, w);
        }
    return RegularGraph::from_edges(n, e);
}

RegularGraph petersen() {
    std::vector<Edge> e;
    for (Vertex i = 0; i < 5; ++i) {
        e.emplace_back(i, (i + 1) % 5);          // outer cycle
        e.emplace_back(i, i + 5);                // spokes
        e.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
    }
    return RegularGraph::from_edges(10, e);
}

std::vector<WalkCounts> count_geodesics(const RegularGraph& g, Vertex origin, int max_len) {
    check_vertex(g, origin, "count_geodesics");
    if (max_len < 0) throw DomainError("count_geodesics: max_len must be >= 0");
    const std::size_t n = g.vertex_count();
    const auto& adj = g.adjacency();

    // Directed edge v -> adj[v][i] has id offset[v] + i.
    std::vector<std::size_t> offset(n + 1, 0);
    for (Vertex v = 0; v < n; ++v) offset[v + 1] = offset[v] + adj[v].size();
    const std::size_t edge_count = offset[n];
    std::vector<Vertex> head(edge_count);
    std::vector<std::size_t> reverse(edge_count);
    for (Vertex v = 0; v < n; ++v) {
        for (std::size_t i = 0; i < adj[v].size(); ++i) {
            const Vertex w = adj[v][i];
            head[offset[v] + i] = w;
            const auto it = std::lower_bound(adj[w].begin(), adj[w].end(), v);
            reverse[offset[v] + i] = offset[w] + static_cast<std::size_t>(it - adj[w].begin());
        }
    }

    std::vector<WalkCounts> out(n);
    for (Vertex x = 0; x < n; ++x) {
        out[x].origin = origin;
        out[x].target = x;
        out[x].counts.assign(static_cast<std::size_t>(max_len) + 1, 0);
    }
    out[origin].counts[0] = 1;
    if (max_len == 0) return out;

    std::vector<BigInt> walks(edge_count, 0);
    for (std::size_t i = 0; i < adj[origin].size(); ++i) walks[offset[origin] + i] = 1;
    std::vector<BigInt> arriving(n);
    std::vector<BigInt> next(edge_count);
    for (int m = 1;; ++m) {
        for (auto& a : arriving) a = 0;
        for (std::size_t e = 0; e < edge_count; ++e) arriving[head[e]] += walks[e];
        for (Vertex x = 0; x < n; ++x) out[x].counts[static_cast<std::size_t>(m)] = arriving[x];
        if (m == max_len) break;
        // Walks leaving v along v->w: all walks into v except those that came from w.
        for (Vertex v = 0; v < n; ++v)
            for (std::size_t i = 0; i < adj[v].size(); ++i) {
                const std::size_t e = offset[v] + i;
                next[e] = arriving[v] - walks[reverse[e]];
            }
        walks.swap(next);
    }
    return out;
}

std::vector<BigInt> bm_coefficients(const std::vector<BigInt>& counts, long q) {
    if (q < 1) throw DomainError("bm_coefficients: q must be >= 1");
    std::vector<BigInt> b(counts.size());
    // running[parity] = c_{m-2} + c_{m-4} + ... of matching parity
    BigInt running[2] = {0, 0};
    for (std::size_t m = 0; m < counts.size(); ++m) {
        b[m] = counts[m] - BigInt(q - 1) * running[m % 2];
        running[m % 2] += counts[m];
    }
    return b;
}

int expansion_length(long q, double t, double tol) {
    if (q < 1) throw DomainError("expansion_length: q must be >= 1");
    check_time(t, "expansion_length");
    if (!(tol > 0.0)) throw DomainError("expansion_length: tol must be positive");
    if (t == 0.0) return 0;
    // |b_m| q^{-m/2} <= (q+2)/q * q^{m/2}, and sum_{m > M} q^{m/2} e^{-(q+1)t} I_m(2 sqrt(q) t)
    // is the upper tail of the walk with rates q (right) and 1 (left).
    const heat::WalkParams walk{static_cast<double>(q), 1.0, t};
    const double target = std::log(tol) - std::log((q + 2.0) / q);
    for (int m = 0; m <= kMaxExpansion; ++m) {
        if (heat::log_upper_tail(walk, m + 1.0) <= target) return m;
    }
    throw ResourceError("expansion_length: more than " + std::to_string(kMaxExpansion) +
                        " terms needed for tol " + std::to_string(tol) + " at t = " + std::to_string(t));
}

double expansion_from_coefficients(const std::vector<BigInt>& b, long q, double t) {
    if (q < 1) throw DomainError("expansion_from_coefficients: q must be >= 1");
    check_time(t, "expansion_from_coefficients");
    if (b.empty()) return 0.0;
    return weighted_sum(b, building_blocks(q, t, static_cast<int>(b.size()) - 1));
}

std::vector<double> kernel_graph_column(const RegularGraph& g, Vertex origin, double t, double tol) {
    check_vertex(g, origin, "kernel_graph");
    check_time(t, "kernel_graph");
    const long q = g.q();
    const int len = expansion_length(q, t, tol);
    const auto counts = count_geodesics(g, origin, len);
    const auto blocks = building_blocks(q, t, len);
    std::vector<double> out(g.vertex_count());
    for (Vertex x = 0; x < g.vertex_count(); ++x) {
        out[x] = weighted_sum(bm_coefficients(counts[x].counts, q), blocks);
    }
    return out;
}

double kernel_graph(const RegularGraph& g, Vertex origin, Vertex target, double t, double tol) {
    check_vertex(g, target, "kernel_graph");
    return kernel_graph_column(g, origin, t, tol)[target];
}

ShiftedOperator laplacian_operator(const RegularGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::map<std::size_t, double>> rows(n);
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w : g.neighbors(v)) rows[v][w] += 1.0;
    return from_triplets(n, rows, static_cast<double>(g.degree()));
}

std::vector<double> heat_apply(const ShiftedOperator& op, std::vector<double> v, double t) {
    return heat_apply_impl(op, std::move(v), t, matvec_parallel);
}

namespace serial {
std::vector<double> heat_apply(const ShiftedOperator& op, std::vector<double> v, double t) {
    return heat_apply_impl(op, std::move(v), t, matvec_serial);
}
} // namespace serial

std::vector<double> matrix_exp_kernel_dense(const RegularGraph& g, Vertex origin, double t) {
    check_vertex(g, origin, "matrix_exp_kernel");
    check_time(t, "matrix_exp_kernel");
    const auto n = static_cast<Eigen::Index>(g.vertex_count());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        const auto i = static_cast<Eigen::Index>(v);
        lap(i, i) = static_cast<double>(g.degree());
        for (Vertex w : g.neighbors(v)) lap(i, static_cast<Eigen::Index>(w)) -= 1.0;
    }
    if (t == 0.0) {
        std::vector<double> unit(g.vertex_count(), 0.0);
        unit[origin] = 1.0;
        return unit;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
    const Eigen::MatrixXd& V = eig.eigenvectors();
    const Eigen::VectorXd decay = (-t * eig.eigenvalues().array()).exp();
    const Eigen::VectorXd col =
        V * (decay.array() * V.row(static_cast<Eigen::Index>(origin)).transpose().array()).matrix();
    std::vector<double> out(g.vertex_count());
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::clamp(col(i), 0.0, 1.0);
    return out;
}

std::vector<double> matrix_exp_kernel_taylor(const RegularGraph& g, Vertex origin, double t) {
    check_vertex(g, origin, "matrix_exp_kernel");
    std::vector<double> v(g.vertex_count(), 0.0);
    v[origin] = 1.0;
    return heat_apply(laplacian_operator(g), std::move(v), t);
}

std::vector<double> matrix_exp_kernel(const RegularGraph& g, Vertex origin, double t) {
    if (g.vertex_count() > kVertexCap) {
        throw ResourceError("matrix_exp_kernel: " + std::to_string(g.vertex_count()) + " vertices exceeds cap " +
                            std::to_string(kVertexCap));
    }
    if (g.vertex_count() <= kDenseLimit) return matrix_exp_kernel_dense(g, origin, t);
    return matrix_exp_kernel_taylor(g, origin, t);
}

ShiftedOperator BetheLattice::radial_operator() const {
    if (q < 1 || radius < 1) throw DomainError("BetheLattice: need q >= 1 and radius >= 1");
    const auto n = static_cast<std::size_t>(radius) + 1;
    const double d = static_cast<double>(q + 1);
    // Laplacian on radial functions is d I - M; M collects neighbor values.
    std::vector<std::map<std::size_t, double>> rows(n);
    rows[0][1] = d;
    for (std::size_t r = 1; r + 1 < n; ++r) {
        rows[r][r - 1] = 1.0;
        rows[r][r + 1] = static_cast<double>(q);
    }
    // A leaf has a single neighbor; d I - M keeps its degree 1 via the diagonal.
    rows[n - 1][n - 2] = 1.0;
    rows[n - 1][n - 1] = d - 1.0;
    return from_triplets(n, rows, d);
}

std::vector<double> BetheLattice::matrix_exp_kernel(double t) const {
    const ShiftedOperator op = radial_operator();
    std::vector<double> v(op.size(), 0.0);
    v[0] = 1.0;
    return heat_apply(op, std::move(v), t);
}

std::vector<BigInt> BetheLattice::walk_counts(long r, int max_len) const {
    if (r < 0 || r > radius) throw DomainError("BetheLattice: distance out of range");
    if (max_len < 0) throw DomainError("BetheLattice: max_len must be >= 0");
    const auto n = static_cast<std::size_t>(radius) + 1;
    // out[k]: walks whose last step went from depth k-1 to k; in[k]: from k+1 to k.
    // Totals are summed over all vertices at that depth.
    std::vector<BigInt> out(n, 0), in(n, 0), out_next(n), in_next(n);
    std::vector<BigInt> c(static_cast<std::size_t>(max_len) + 1, 0);
    if (r == 0) c[0] = 1;
    if (max_len == 0) return c;
    out[1] = q + 1;
    const BigInt sphere = BigInt(q + 1) * boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(r == 0 ? 0 : r - 1));
    for (int m = 1;; ++m) {
        const BigInt total = out[static_cast<std::size_t>(r)] + in[static_cast<std::size_t>(r)];
        c[static_cast<std::size_t>(m)] = r == 0 ? total : total / sphere;
        if (m == max_len) break;
        std::fill(out_next.begin(), out_next.end(), BigInt(0));
        std::fill(in_next.begin(), in_next.end(), BigInt(0));
        for (std::size_t k = 0; k < n; ++k) {
            const long children = (k == 0) ? q + 1 : q;
            if (k + 1 < n) {
                out_next[k + 1] += out[k] * children;                          // keep going out
                out_next[k + 1] += in[k] * (children - 1);                     // turn to a sibling branch
            }
            if (k >= 1) in_next[k - 1] += in[k];                               // keep going in
        }
        out.swap(out_next);
        in.swap(in_next);
    }
    return c;
}

double BetheLattice::kernel_graph(long r, double t, double tol) const {
    check_time(t, "BetheLattice::kernel_graph");
    const int len = expansion_length(q, t, tol);
    return weighted_sum(bm_coefficients(walk_counts(r, len), q), building_blocks(q, t, len));
}

double BetheLattice::sphere_size(long r) const { return heat::tree_sphere_size(q, r); }

} // namespace dgauss::graphs
