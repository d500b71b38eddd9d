#include <doctest.h>

#include <random>

#include "supershift/sampler.hpp"
#include "supershift/serialize.hpp"

using namespace supershift;

using RVec = SparseVec<Rational>;

TEST_SUITE_BEGIN("serialize");

TEST_CASE("sparse vector wire format, exact mode") {
    RVec v = RVec::fromEntries({{3, Rational(1, 2)}, {7, Rational(-4)}});
    json j = toJson(v);
    CHECK(j.dump() == R"([[3,"1","2"],[7,"-4","1"]])");
    CHECK(sparseVecFromJson<Rational>(j) == v);
    // numeric entries parse too
    CHECK(sparseVecFromJson<Rational>(json::parse("[[2, 1, 4]]")) ==
          RVec::basis(2).scaled(Rational(1, 4)));
}

TEST_CASE("sparse vector wire format, float mode") {
    SparseVec<double> v = SparseVec<double>::fromEntries({{1, 0.5}, {4, -2.25}});
    json j = toJson(v);
    CHECK(j.dump() == "[[1,0.5],[4,-2.25]]");
    CHECK(sparseVecFromJson<double>(j) == v);
}

TEST_CASE("round trip is the identity on random vectors") {
    std::mt19937_64 rng(1);
    SampleProfile profile{20, 6, 50};
    for (int rep = 0; rep < 50; ++rep) {
        RVec v = sampleSparseVec<Rational>(rng, profile);
        CHECK(sparseVecFromJson<Rational>(toJson(v)) == v);
        SparseVec<double> d = sampleSparseVec<double>(rng, profile);
        CHECK(sparseVecFromJson<double>(toJson(d)) == d);
    }
}

TEST_CASE("huge exact coefficients survive the round trip") {
    RVec v = RVec::fromEntries({{1, ratPow(Rational(1, 2), 5050)},
                                {2, ratPow(Rational(3), 2000)}});
    CHECK(sparseVecFromJson<Rational>(toJson(v)) == v);
}

TEST_CASE("operator series wire format") {
    OperatorSeries<Rational> t{
        RVec::fromEntries({{1, Rational(1)}, {3, Rational(2, 7)}}),
        WeightSeq<Rational>::geometric(Rational(1, 2), Rational(1, 3)),
        TailDescriptor<Rational>{Rational(1, 4), 9}};
    json j = toJson(t);
    CHECK(j["weights"]["variant"] == "geometric");
    CHECK(j["weights"]["c"] == "1/2");
    CHECK(j["tail"]["start"] == 9);
    auto back = operatorSeriesFromJson<Rational>(j);
    CHECK(back.lambda == t.lambda);
    CHECK(back.weights == t.weights);
    REQUIRE(back.tail.has_value());
    CHECK(*back.tail == *t.tail);

    OperatorSeries<Rational> plain{RVec::basis(1), WeightSeq<Rational>::constantOne(),
                                   std::nullopt};
    auto backPlain = operatorSeriesFromJson<Rational>(toJson(plain));
    CHECK(backPlain.weights == plain.weights);
    CHECK(!backPlain.tail.has_value());
}

TEST_CASE("triangular system dump uses num/den strings, dense row-major") {
    RVec lambda = RVec::fromEntries({{1, Rational(1)}, {2, Rational(1, 2)}});
    auto w = WeightSeq<Rational>::geometric(Rational(1, 2), Rational(1, 2));
    json j = triMatrixDump(buildM(lambda, w, 2));
    CHECK(j["d"] == 2);
    CHECK(j["rows"][0][0] == "1/4");
    CHECK(j["rows"][0][1] == "1/64");
    CHECK(j["rows"][1][0] == "0");
    CHECK(j["rows"][1][1] == "1/8");
}

TEST_CASE("witness plan serialization") {
    auto [x, plan] = buildWitness(WeightSeq<Rational>::constantOne(),
                                  {RVec::basis(1), RVec::basis(2)}, 0.125);
    json j = toJson(plan);
    CHECK(j["epsilon"] == 0.125);
    REQUIRE(j["blocks"].size() == 2);
    CHECK(j["blocks"][0]["target_id"] == 1);
    CHECK(j["blocks"][0]["power"] == 0);
    CHECK(j["blocks"][1]["start_index"] == 1);
}

TEST_CASE("criterion CSV layout") {
    CriterionReport rep;
    rep.rows.push_back({1, 1, 1.0, 1.0, 1.0, 0.0, false, true});
    rep.rows.push_back({2, 2, 0.0, 2.0, 0.0, 0.0, true, true});
    std::string csv = criterionCsv(rep);
    CHECK(csv == "k,n_k,normUk,normSk,product,residual\n"
                 "1,1,1,1,1,0\n"
                 "2,2,0,2,0,0\n");
}

TEST_CASE("orbit CSV layout") {
    OrbitTraceReport rep;
    rep.rows.push_back({0, 1, "1/2", 0.5, 0.0});
    rep.rows.push_back({1, 1, "0", 0.0, 1.0});
    std::string csv = orbitCsv(rep);
    CHECK(csv == "k,target_id,best_scale,proj_dist\n"
                 "0,1,1/2,0\n"
                 "1,1,0,1\n");
}

TEST_CASE("deterministic double rendering") {
    CHECK(formatDouble(0.0) == "0");
    CHECK(formatDouble(1.5) == "1.5");
    CHECK(formatDouble(0.1) == "0.10000000000000001");
    CHECK(formatDouble(1e300) == "1.0000000000000001e+300");
}

TEST_CASE("config hash is stable") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("supershift") == fnv1a64("supershift"));
    CHECK(fnv1a64("a") != fnv1a64("b"));
    CHECK(hashHex("").size() == 16);
}

TEST_SUITE_END();
