#pragma once

#include <vector>

#include "fmvol/rational.hpp"
#include "fmvol/vertex_set.hpp"

namespace fmvol {

/// H-representation { x in R^dim : A x <= b }.
struct HPolytope {
    int dim = 0;
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;

    void add_row(std::vector<Rat> a, Rat rhs) {
        A.push_back(std::move(a));
        b.push_back(std::move(rhs));
    }
};

struct VolumeLimits {
    int dim_cap = 16;
    long basis_cap = 2000000; // max number of candidate constraint bases
};

/// All vertices of P, each exactly once, in lexicographic order.
/// Throws ResourceError when a cap is exceeded.
std::vector<std::vector<Rat>> enumerate_vertices(const HPolytope& p,
                                                 const VolumeLimits& limits = {});

/// Exact Lebesgue measure of P. Lower-dimensional and empty polytopes have
/// volume 0; a 0-dimensional feasible system has volume 1. Throws
/// GeometryError when P is unbounded (or when its constraint matrix is
/// rank-deficient, in which case P cannot be bounded and full-dimensional).
Rat volume(const HPolytope& p, const VolumeLimits& limits = {});

} // namespace fmvol
