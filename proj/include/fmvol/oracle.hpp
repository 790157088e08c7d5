#pragma once

#include <cstdint>

#include "fmvol/geometry.hpp"
#include "fmvol/hypergraph.hpp"
#include "fmvol/rational.hpp"

namespace fmvol {

/// Exact partition function Xi by inclusion-exclusion over all subsets of
/// active vertices, factored over Flat-connected components with memoized
/// component weights. Requires at most 20 active vertices.
Rat xi_bruteforce(const Hypergraph& h, const Rat& delta,
                  const VolumeLimits& limits = {});

/// Exact Vol(P_{H,delta}) from one volume call on the full constraint system
/// {0 <= x_e <= (1+delta)/Delta, sum_{e~v} x_e <= 1}. Requires |E| within the
/// dimension cap.
Rat volume_bruteforce(const Hypergraph& h, const Rat& delta,
                      const VolumeLimits& limits = {});

struct McEstimate {
    Real estimate;
    long samples = 0;
    Real std_error;
    uint64_t seed = 0;
};

/// Hit-or-miss volume estimate with a counter-based deterministic generator:
/// identical (instance, samples, seed) always reproduces the same estimate.
McEstimate volume_montecarlo(const Hypergraph& h, const Rat& delta,
                             long samples, uint64_t seed);

} // namespace fmvol
