#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fmvol/geometry.hpp"
#include "generators.hpp"

using namespace fmvol;

namespace {

HPolytope box(int d, const Rat& lo, const Rat& hi) {
    HPolytope p;
    p.dim = d;
    for (int j = 0; j < d; ++j) {
        std::vector<Rat> a(d, Rat(0)), b(d, Rat(0));
        a[j] = -1;
        b[j] = 1;
        p.add_row(std::move(a), -lo);
        p.add_row(std::move(b), hi);
    }
    return p;
}

HPolytope simplex(int d, const Rat& side) {
    HPolytope p;
    p.dim = d;
    for (int j = 0; j < d; ++j) {
        std::vector<Rat> a(d, Rat(0));
        a[j] = -1;
        p.add_row(std::move(a), Rat(0));
    }
    p.add_row(std::vector<Rat>(d, Rat(1)), side);
    return p;
}

} // namespace

TEST_CASE("volume golden values") {
    CHECK(volume(box(2, Rat(0), Rat(1))) == 1);
    CHECK(volume(simplex(3, rat(1, 2))) == rat(1, 48)); // (1/2)^3 / 3!
    // {0<=x,y<=1, x+y>=1} is half the unit square
    HPolytope half = box(2, Rat(0), Rat(1));
    half.add_row({Rat(-1), Rat(-1)}, Rat(-1));
    CHECK(volume(half) == rat(1, 2));
    HPolytope point;
    point.dim = 0;
    CHECK(volume(point) == 1);
}

TEST_CASE("simplex family 1/d! scaling") {
    for (int d = 1; d <= 6; ++d) {
        mpz_class fact;
        mpz_fac_ui(fact.get_mpz_t(), d);
        CHECK(volume(simplex(d, Rat(1))) == Rat(1) / Rat(fact));
    }
}

TEST_CASE("degenerate and infeasible regions") {
    HPolytope flat = box(2, Rat(0), Rat(1));
    flat.add_row({Rat(1), Rat(0)}, Rat(0)); // x <= 0 forces a segment
    CHECK(volume(flat) == 0);
    HPolytope empty = box(2, Rat(0), Rat(1));
    empty.add_row({Rat(1), Rat(1)}, Rat(-1));
    CHECK(volume(empty) == 0);
}

TEST_CASE("unbounded polytope is a contract violation") {
    HPolytope p;
    p.dim = 2;
    p.add_row({Rat(-1), Rat(0)}, Rat(0));
    p.add_row({Rat(0), Rat(-1)}, Rat(0));
    CHECK_THROWS_AS(volume(p), GeometryError);
    HPolytope slab;
    slab.dim = 2;
    slab.add_row({Rat(1), Rat(0)}, Rat(1));
    slab.add_row({Rat(-1), Rat(0)}, Rat(0));
    CHECK_THROWS_AS(volume(slab), GeometryError);
}

TEST_CASE("dimension cap") {
    VolumeLimits limits;
    limits.dim_cap = 3;
    CHECK_THROWS_AS(volume(box(4, Rat(0), Rat(1)), limits), ResourceError);
}

TEST_CASE("vertex enumeration golden values") {
    auto square = enumerate_vertices(box(2, Rat(0), Rat(1)));
    CHECK(square.size() == 4);
    auto tetra = enumerate_vertices(simplex(3, Rat(1)));
    CHECK(tetra.size() == 4);
    HPolytope half = box(2, Rat(0), Rat(1));
    half.add_row({Rat(-1), Rat(-1)}, Rat(-1));
    auto verts = enumerate_vertices(half);
    REQUIRE(verts.size() == 3);
    std::vector<std::vector<Rat>> want = {
        {Rat(0), Rat(1)}, {Rat(1), Rat(0)}, {Rat(1), Rat(1)}};
    CHECK(std::is_permutation(verts.begin(), verts.end(), want.begin()));
}

namespace {

// random polytope: box [0,1]^d with a few random cuts
HPolytope random_cut_box(testgen::Rng& rng, int d, int cuts) {
    HPolytope p = box(d, Rat(0), Rat(1));
    for (int c = 0; c < cuts; ++c) {
        std::vector<Rat> a(d);
        Rat b(0);
        for (int j = 0; j < d; ++j) {
            a[j] = rat(rng.below(7) - 3);
            if (a[j] > 0)
                b += a[j]; // keep the box center-ish feasible sometimes
        }
        p.add_row(std::move(a), b - rat(rng.below(3), 2));
    }
    return p;
}

HPolytope scaled(const HPolytope& p, const Rat& s) {
    HPolytope out = p;
    for (auto& b : out.b)
        b *= s;
    return out;
}

} // namespace

TEST_CASE("scaling law on random polytopes") {
    for (uint64_t seed = 1; seed <= 15; ++seed) {
        testgen::Rng rng(seed);
        int d = 2 + rng.below(3);
        HPolytope p = random_cut_box(rng, d, 2);
        Rat s = rat(1 + rng.below(5), 1 + rng.below(3));
        CHECK(volume(scaled(p, s)) == rat_pow(s, d) * volume(p));
    }
}

TEST_CASE("additivity under hyperplane splits") {
    for (uint64_t seed = 1; seed <= 15; ++seed) {
        testgen::Rng rng(seed * 31);
        int d = 2 + rng.below(3);
        HPolytope p = random_cut_box(rng, d, 1);
        std::vector<Rat> a(d);
        for (int j = 0; j < d; ++j)
            a[j] = rat(rng.below(5) - 2);
        Rat c = rat(rng.below(5) - 2, 2);
        HPolytope below = p, above = p;
        below.add_row(a, c);
        std::vector<Rat> neg(d);
        for (int j = 0; j < d; ++j)
            neg[j] = -a[j];
        above.add_row(neg, -c);
        CHECK(volume(below) + volume(above) == volume(p));
    }
}

TEST_CASE("invariance under constraint and coordinate permutation") {
    testgen::Rng rng(7);
    HPolytope p = random_cut_box(rng, 3, 2);
    Rat ref = volume(p);
    HPolytope rev;
    rev.dim = p.dim;
    for (size_t i = p.A.size(); i-- > 0;)
        rev.add_row(p.A[i], p.b[i]);
    CHECK(volume(rev) == ref);
    HPolytope perm;
    perm.dim = p.dim;
    int shuffle[3] = {2, 0, 1};
    for (size_t i = 0; i < p.A.size(); ++i) {
        std::vector<Rat> a(p.dim);
        for (int j = 0; j < p.dim; ++j)
            a[shuffle[j]] = p.A[i][j];
        perm.add_row(std::move(a), p.b[i]);
    }
    CHECK(volume(perm) == ref);
}
