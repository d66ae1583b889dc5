#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ltl/convolve.hpp"

using namespace ltl;

namespace {

BinaryConfig random_config(int dim, double eps, std::vector<long> extent, bool periodic,
                           double density, std::uint64_t seed) {
    Domain dom = periodic ? Domain::periodic(dim, eps, extent)
                          : Domain::growable(dim, eps, std::move(extent));
    BinaryConfig a;
    a.domain = dom;
    a.origin.assign(static_cast<std::size_t>(dim), 0);
    a.cells.assign(a.box().cell_count(), 0);
    std::mt19937_64 rng(seed);
    for (auto& c : a.cells)
        c = ((rng() >> 11) * 0x1.0p-53 < density) ? 1 : 0;
    return a;
}

double max_abs_diff(const ScalarField& x, const ScalarField& y) {
    REQUIRE(x.origin == y.origin);
    REQUIRE(x.domain.extent == y.domain.extent);
    double m = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i)
        m = std::max(m, std::abs(x.values[i] - y.values[i]));
    return m;
}

}  // namespace

TEST_CASE("backend names round-trip") {
    CHECK(parse_backend("naive") == Backend::Naive);
    CHECK(parse_backend("sat") == Backend::SummedArea);
    CHECK(parse_backend("fft") == Backend::Fft);
    CHECK(parse_backend("auto") == Backend::Auto);
    CHECK(backend_name(Backend::SummedArea) == "sat");
    CHECK_THROWS_AS(parse_backend("simd"), InvalidArgumentError);
}

TEST_CASE("naive backend reproduces a hand-computed 1-D window sum") {
    BinaryConfig a;
    a.domain = Domain::growable(1, 0.5, {4});
    a.origin = {-1};  // cells -1..2
    a.cells = {0, 1, 0, 1};  // live at 0 and 2

    DiscreteKernel k;
    k.dim = 1;
    k.epsilon = 0.5;
    k.radius = {1};
    k.weights = {0.75, 0.125, 0.125};  // w(-1), w(0), w(+1)

    ScalarField out = convolve(a, k, Backend::Naive);
    CHECK(out.origin == std::vector<long>{-2});
    CHECK(out.domain.extent == std::vector<long>{6});
    CHECK(out.domain.epsilon == 0.5);
    // out(z) = sum_w k(w) a(z-w), all exact dyadic values
    CHECK(out.at({-2}) == 0.0);
    CHECK(out.at({-1}) == 0.75);
    CHECK(out.at({0}) == 0.125);
    CHECK(out.at({1}) == 0.875);
    CHECK(out.at({2}) == 0.125);
    CHECK(out.at({3}) == 0.125);
}

TEST_CASE("delta input reproduces the kernel unmirrored (convolution, not correlation)") {
    BinaryConfig delta;
    delta.domain = Domain::growable(2, 1.0, {1, 1});
    delta.origin = {0, 0};
    delta.cells = {1};

    DiscreteKernel k;
    k.dim = 2;
    k.epsilon = 1.0;
    k.radius = {1, 1};
    k.weights.assign(9, 0.0);
    k.weights[1] = 1.0;  // window box origin (-1,-1), so flat 1 is dz = (-1, 0)

    ScalarField out = convolve(delta, k, Backend::Naive);
    CHECK(out.at({-1, 0}) == 1.0);
    CHECK(out.at({1, 0}) == 0.0);
}

TEST_CASE("summed-area matches naive for uniform kernels") {
    for (long n : {1L, 3L}) {
        CAPTURE(n);
        DiscreteKernel k = uniform_kernel(2, n);
        BinaryConfig a = random_config(2, k.epsilon, {24, 24}, false, 0.4, 77 + n);
        ScalarField nv = convolve(a, k, Backend::Naive);
        ScalarField st = convolve(a, k, Backend::SummedArea);
        CHECK(max_abs_diff(nv, st) <= 1e-12);
    }
    SUBCASE("periodic with the window wrapping several times") {
        DiscreteKernel k = uniform_kernel(2, 10);  // window 21 > both extents
        BinaryConfig a = random_config(2, k.epsilon, {12, 7}, true, 0.5, 5);
        ScalarField nv = convolve(a, k, Backend::Naive);
        ScalarField st = convolve(a, k, Backend::SummedArea);
        CHECK(nv.origin == a.origin);
        CHECK(nv.domain.extent == a.domain.extent);
        CHECK(max_abs_diff(nv, st) <= 1e-12);
    }
    SUBCASE("non-uniform kernel is rejected") {
        DiscreteKernel k = discretize_kernel(KernelSpec::ball_l2(1.0), 2, 0.25);
        BinaryConfig a = random_config(2, 0.25, {8, 8}, false, 0.5, 1);
        CHECK_THROWS_AS(convolve(a, k, Backend::SummedArea), UnsupportedError);
    }
}

TEST_CASE("fft matches naive for ball kernels") {
    DiscreteKernel k = discretize_kernel(KernelSpec::ball_l2(1.0), 2, 1.0 / 8.0);
    SUBCASE("growable") {
        BinaryConfig a = random_config(2, 1.0 / 8.0, {32, 32}, false, 0.35, 11);
        CHECK(max_abs_diff(convolve(a, k, Backend::Naive),
                           convolve(a, k, Backend::Fft)) <= 1e-9);
    }
    SUBCASE("periodic") {
        BinaryConfig a = random_config(2, 1.0 / 8.0, {32, 24}, true, 0.35, 12);
        CHECK(max_abs_diff(convolve(a, k, Backend::Naive),
                           convolve(a, k, Backend::Fft)) <= 1e-9);
    }
    SUBCASE("periodic smaller than the kernel window") {
        BinaryConfig a = random_config(2, 1.0 / 8.0, {10, 6}, true, 0.5, 13);
        CHECK(max_abs_diff(convolve(a, k, Backend::Naive),
                           convolve(a, k, Backend::Fft)) <= 1e-9);
    }
}

TEST_CASE("scalar-field inputs convolve like their binary counterparts") {
    DiscreteKernel k = discretize_kernel(KernelSpec::ball_l2(1.0), 2, 0.25);
    BinaryConfig a = random_config(2, 0.25, {16, 16}, false, 0.4, 21);
    ScalarField fa = to_field(a);
    ScalarField vb = convolve(a, k, Backend::Naive);
    ScalarField vf = convolve(fa, k, Backend::Naive);
    CHECK(vb.values == vf.values);  // identical arithmetic on {0,1} values

    SUBCASE("fractional values against fft") {
        ScalarField frac = fa;
        for (std::size_t i = 0; i < frac.values.size(); ++i)
            if (frac.values[i] == 0.0 && (i % 3) == 0) frac.values[i] = 0.25;
        CHECK(max_abs_diff(convolve(frac, k, Backend::Naive),
                           convolve(frac, k, Backend::Fft)) <= 1e-9);
    }
}

TEST_CASE("every backend is bit-deterministic across thread counts") {
    DiscreteKernel ball = discretize_kernel(KernelSpec::ball_l2(1.0), 2, 1.0 / 8.0);
    DiscreteKernel uni = uniform_kernel(2, 3);
    BinaryConfig a = random_config(2, 1.0 / 8.0, {40, 40}, false, 0.4, 31);
    BinaryConfig u = random_config(2, uni.epsilon, {40, 40}, false, 0.4, 32);
    for (int threads : {2, 4, 0}) {
        CAPTURE(threads);
        CHECK(convolve(a, ball, Backend::Naive, threads).values ==
              convolve(a, ball, Backend::Naive, 1).values);
        CHECK(convolve(a, ball, Backend::Fft, threads).values ==
              convolve(a, ball, Backend::Fft, 1).values);
        CHECK(convolve(u, uni, Backend::SummedArea, threads).values ==
              convolve(u, uni, Backend::SummedArea, 1).values);
    }
}

TEST_CASE("auto picks summed-area for uniform boxes and fft otherwise") {
    DiscreteKernel uni = uniform_kernel(2, 2);
    BinaryConfig u = random_config(2, uni.epsilon, {20, 20}, false, 0.4, 41);
    CHECK(convolve(u, uni, Backend::Auto).values ==
          convolve(u, uni, Backend::SummedArea).values);

    DiscreteKernel ball = discretize_kernel(KernelSpec::ball_l2(1.0), 2, 0.25);
    BinaryConfig a = random_config(2, 0.25, {20, 20}, false, 0.4, 42);
    CHECK(convolve(a, ball, Backend::Auto).values ==
          convolve(a, ball, Backend::Fft).values);
}

TEST_CASE("kernel and input must share dim and epsilon") {
    DiscreteKernel k1 = uniform_kernel(1, 1);
    BinaryConfig a = random_config(2, 1.0, {8, 8}, false, 0.5, 51);
    CHECK_THROWS_AS(convolve(a, k1), DimensionMismatchError);

    DiscreteKernel k2 = discretize_kernel(KernelSpec::ball_l2(1.0), 2, 0.25);
    BinaryConfig b = random_config(2, 0.5, {8, 8}, false, 0.5, 52);
    CHECK_THROWS_AS(convolve(b, k2), DimensionMismatchError);
}

TEST_CASE("window sums obey the sup-norm bound from the l1 input distance") {
    DiscreteKernel k = discretize_kernel(KernelSpec::ball_l2(1.0), 2, 0.25);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        CAPTURE(trial);
        BinaryConfig a = random_config(2, 0.25, {16, 16}, false, 0.4, rng());
        BinaryConfig b = a;
        // flip a random handful of cells
        std::uniform_int_distribution<std::size_t> pick(0, b.cells.size() - 1);
        for (int f = 0; f < 12; ++f) {
            std::size_t i = pick(rng);
            b.cells[i] = static_cast<std::uint8_t>(1 - b.cells[i]);
        }
        YoungBoundReport r = young_bound_check(a, b, k);
        CHECK(r.holds);
        CHECK(r.rhs == doctest::Approx(k.max_weight() / (0.25 * 0.25) *
                                       l1_distance(a, b)).epsilon(1e-12));
        CHECK(r.lhs <= r.rhs * (1.0 + 1e-12));
    }
    SUBCASE("identical inputs give a zero-zero bound that holds") {
        BinaryConfig a = random_config(2, 0.25, {8, 8}, false, 0.5, 99);
        YoungBoundReport r = young_bound_check(a, a, k);
        CHECK(r.lhs == 0.0);
        CHECK(r.rhs == 0.0);
        CHECK(r.holds);
    }
}
