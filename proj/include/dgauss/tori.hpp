#pragma once

#include <vector>

#include "dgauss/special.hpp"

namespace dgauss::tori {

/// Rectangular discrete torus Z/n_1 x ... x Z/n_d.
struct TorusSpec {
    std::vector<long> dims;

    /// 1 <= d <= 4 and every n_i >= 1 (DomainError); product <= 10^7 (ResourceError).
    static TorusSpec make(std::vector<long> dims);
    static TorusSpec cube(int d, long n);

    int d() const { return static_cast<int>(dims.size()); }
    long volume() const;
};

/// Sum of log(sum_i 4 sin^2(pi k_i / n_i)) over k != 0, with compensated summation.
/// DegenerateError when every n_i = 1.
double log_det_prime(const TorusSpec& spec);

namespace serial {
double log_det_prime(const TorusSpec& spec);
} // namespace serial

/// Per-site constant (2 pi)^{-d} int log(sum_i (2 - 2 cos theta_i)) over [0, 2 pi]^d.
/// One angle is integrated in closed form, the rest by nested tanh-sinh quadrature.
double lattice_density(int d);

/// log_det_prime(n, ..., n) - n^d lattice_density(d) - 2 log n.
double asymptotic_remainder(int d, long n);

/// Number of spanning trees of the torus graph (n_i = 2 gives a double edge,
/// n_i = 1 a loop, which is ignored). Exact, by fraction-free elimination on
/// the reduced Laplacian. DomainError above 400 vertices.
BigInt spanning_tree_count(const TorusSpec& spec);

} // namespace dgauss::tori
