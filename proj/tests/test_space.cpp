#include <doctest.h>

#include <random>

#include "supershift/sampler.hpp"
#include "supershift/sparse_vec.hpp"
#include "supershift/weights.hpp"

using namespace supershift;

using RVec = SparseVec<Rational>;
using DVec = SparseVec<double>;

TEST_SUITE_BEGIN("space");

TEST_CASE("scalar field closure in exact mode") {
    Rational a(3, 7), b(-2, 5);
    CHECK(a + b == Rational(1, 35));
    CHECK(a * b == Rational(-6, 35));
    CHECK(a / b == Rational(-15, 14));

    GaussRational z(Rational(1, 2), Rational(-1, 3));
    GaussRational w(Rational(2), Rational(1, 5));
    GaussRational q = z / w;
    CHECK(q * w == z);  // division is exact
    CHECK((z * w - w * z).isZero());
}

TEST_CASE("log magnitude of a product is the sum of logs") {
    LogMagnitude a = LogMagnitude::of(-0.125);
    LogMagnitude b = LogMagnitude::of(3.0);
    LogMagnitude p = a * b;
    CHECK(p.sign == -1);
    CHECK(p.logAbs == doctest::Approx(std::log(0.375)).epsilon(1e-14));
    CHECK((a * LogMagnitude::zero()).sign == 0);
}

TEST_CASE("coeff reads coordinates through the biorthogonal system") {
    CHECK(RVec::basis(3).coeff(3) == 1);
    CHECK(RVec::basis(3).coeff(2) == 0);
    RVec v = RVec::fromEntries({{1, Rational(2)}, {4, Rational(5)}});
    CHECK(v.coeff(4) == 5);
}

TEST_CASE("coeff(e_n, m) = delta_mn for all m, n <= 64") {
    for (Index n = 1; n <= 64; ++n) {
        RVec en = RVec::basis(n);
        for (Index m = 1; m <= 64; ++m) {
            CHECK(en.coeff(m) == (m == n ? 1 : 0));
        }
    }
}

TEST_CASE("support extrema") {
    RVec v = RVec::fromEntries({{2, Rational(3)}, {5, Rational(1)}});
    CHECK(v.minSupport() == 2);
    CHECK(v.maxSupport() == 5);
    CHECK(RVec::basis(7).minSupport() == 7);
    CHECK(RVec::basis(7).maxSupport() == 7);
    CHECK_THROWS_AS(RVec().minSupport(), ZeroVectorError);
    CHECK_THROWS_AS(RVec().maxSupport(), ZeroVectorError);
}

TEST_CASE("entry normalization drops zeros and merges duplicates") {
    RVec v = RVec::fromEntries({{3, Rational(1)}, {3, Rational(-1)}, {1, Rational(0)}});
    CHECK(v.isZero());
    RVec w = RVec::fromEntries({{5, Rational(1, 2)}, {2, Rational(1)}, {5, Rational(1, 2)}});
    CHECK(w.coeff(5) == 1);
    CHECK(w.minSupport() == 2);
    CHECK_THROWS_AS(RVec::fromEntries({{0, Rational(1)}}), std::invalid_argument);
}

TEST_CASE("norm1 basics") {
    CHECK(RVec().norm1() == 0);
    CHECK((RVec::basis(1) - RVec::basis(2)).norm1() == 2);
    RVec v = RVec::fromEntries({{2, Rational(3)}, {5, Rational(1)}});
    CHECK(v.norm1() == 4);
}

TEST_CASE("norm1 triangle inequality, equality on disjoint supports") {
    std::mt19937_64 rng(20260810);
    SampleProfile profile{12, 5, 9};
    for (int rep = 0; rep < 60; ++rep) {
        RVec x = sampleSparseVec<Rational>(rng, profile);
        RVec y = sampleSparseVec<Rational>(rng, profile);
        Rational t = sampleScalar<Rational>(rng, 9);
        Rational lhs = axpy(t, x, y).norm1();
        Rational rhs = abs(t) * x.norm1() + y.norm1();
        CHECK(lhs <= rhs);

        // shift y's support past x's to force disjointness
        std::vector<RVec::Entry> moved;
        for (const auto& e : y.entries()) moved.push_back({e.index + x.maxSupport(), e.coeff});
        RVec yDisjoint = RVec::fromEntries(moved);
        CHECK(axpy(t, x, yDisjoint).norm1() == abs(t) * x.norm1() + yDisjoint.norm1());
    }
}

TEST_CASE("geometric weights: values, monotonicity, summability") {
    auto w = WeightSeq<Rational>::geometric(Rational(1, 2), Rational(1, 2));
    CHECK(w.at(1) == Rational(1, 4));
    CHECK(w.at(2) == Rational(1, 8));
    CHECK(w.totalSum() == Rational(1, 2));
    for (Index n = 1; n <= 50; ++n) CHECK(w.at(n + 1) < w.at(n));
    for (Index n = 1; n <= 100; ++n) {
        Rational partial(0);
        for (Index i = 1; i <= n; ++i) partial += w.at(i);
        CHECK(partial + w.tailSum(n) == w.totalSum());
    }
}

TEST_CASE("inadmissible geometric weights are rejected") {
    CHECK_THROWS_AS(WeightSeq<Rational>::geometric(Rational(3), Rational(1, 2)),
                    std::invalid_argument);  // sum = 3 > 1
    CHECK_THROWS_AS(WeightSeq<Rational>::geometric(Rational(1, 2), Rational(2)),
                    std::invalid_argument);  // ratio >= 1
    CHECK_THROWS_AS(WeightSeq<Rational>::geometric(Rational(-1), Rational(1, 2)),
                    std::invalid_argument);
    // admissibility tightens with cx > 1
    CHECK_NOTHROW(WeightSeq<Rational>::geometric(Rational(1, 2), Rational(1, 2), 2.0));
    CHECK_THROWS_AS(WeightSeq<Rational>::geometric(Rational(9, 10), Rational(1, 2), 2.0),
                    std::invalid_argument);
}

TEST_CASE("constant-one weights are exempt from summability") {
    auto w = WeightSeq<Rational>::constantOne();
    CHECK(w.at(17) == 1);
    CHECK(!w.summable());
    CHECK_THROWS_AS(w.totalSum(), std::domain_error);
}

TEST_CASE("weightProd values") {
    auto ones = WeightSeq<Rational>::constantOne();
    CHECK(ones.prod(3, 9) == 1);
    auto geo = WeightSeq<Rational>::geometric(Rational(1, 2), Rational(1, 2));
    CHECK(geo.prod(1, 2) == Rational(1, 32));  // (1/4)(1/8)
    CHECK(geo.prod(5, 4) == 1);                // empty product
}

TEST_CASE("log companion of weightProd matches the sum of logs") {
    auto geo = WeightSeq<Rational>::geometric(Rational(1, 3), Rational(2, 3));
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 40; ++rep) {
        Index a = randRange(rng, 1, 60);
        Index b = a + randRange(rng, 0, 60);
        auto [p, lm] = weightProd(geo, a, b);
        double direct = 0.0;
        for (Index i = a; i <= b; ++i) direct += geo.logAt(i);
        CHECK(lm.logAbs == doctest::Approx(direct).epsilon(1e-12));
        CHECK(lm.logAbs ==
              doctest::Approx(logAbsRational(p)).epsilon(1e-12));
    }
}

TEST_CASE("float mode mirrors the exact weight values") {
    auto geo = WeightSeq<double>::geometric(0.5, 0.5);
    CHECK(geo.at(3) == doctest::Approx(1.0 / 16));
    CHECK(geo.prod(1, 2) == doctest::Approx(1.0 / 32));
    CHECK(geo.totalSum() == doctest::Approx(0.5));
}

TEST_CASE("biorthogonal system carries the functional bound") {
    CHECK(BiorthSystem::canonicalL1().cx == 1.0);
    CHECK(BiorthSystem::withFunctionalBound(2.5).cx == 2.5);
    CHECK_THROWS_AS(BiorthSystem::withFunctionalBound(0.5), std::invalid_argument);
    // basis vectors are normalized
    for (Index n : {1, 2, 17, 64}) CHECK(RVec::basis(n).norm1() == 1);
}

TEST_SUITE_END();
