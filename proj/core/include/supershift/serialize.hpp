#ifndef SUPERSHIFT_SERIALIZE_HPP
#define SUPERSHIFT_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "supershift/limits.hpp"
#include "supershift/orbit.hpp"
#include "supershift/right_inverse.hpp"

namespace supershift {

using nlohmann::json;

/// Deterministic shortest-stable rendering for report files ("%.17g").
std::string formatDouble(double v);

/// FNV-1a over the canonical config dump; embedded in every report.
std::uint64_t fnv1a64(std::string_view s);
std::string hashHex(std::string_view s);

namespace detail {

inline Rational rationalFromJson(const json& j) {
    if (j.is_string()) return Rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_float()) return Rational(j.get<double>());
    throw std::invalid_argument("expected a rational as string or number");
}

}  // namespace detail

/// SparseVec wire format: ascending [index, "num", "den"] triples in exact
/// mode, [index, value] pairs in float mode.
template <ScalarField K>
json toJson(const SparseVec<K>& v) {
    using T = ScalarTraits<K>;
    static_assert(!T::isComplex, "published schema covers the real scalar kinds");
    json arr = json::array();
    for (const auto& e : v.entries()) {
        if constexpr (T::isExact) {
            arr.push_back({e.index, numerator(e.coeff).str(), denominator(e.coeff).str()});
        } else {
            arr.push_back({e.index, e.coeff});
        }
    }
    return arr;
}

template <ScalarField K>
SparseVec<K> sparseVecFromJson(const json& j) {
    using T = ScalarTraits<K>;
    static_assert(!T::isComplex, "published schema covers the real scalar kinds");
    if (!j.is_array()) throw std::invalid_argument("sparse vector must be a JSON array");
    std::vector<typename SparseVec<K>::Entry> entries;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() < 2)
            throw std::invalid_argument("sparse vector entries are [index, ...] arrays");
        Index idx = item[0].get<Index>();
        Rational num = detail::rationalFromJson(item[1]);
        Rational den = item.size() > 2 ? detail::rationalFromJson(item[2]) : Rational(1);
        if constexpr (T::isExact) {
            entries.push_back({idx, num / den});
        } else {
            entries.push_back({idx, (num / den).convert_to<double>()});
        }
    }
    return SparseVec<K>::fromEntries(std::move(entries));
}

template <ScalarField K>
json toJson(const WeightSeq<K>& w) {
    using T = ScalarTraits<K>;
    if (w.variant() == WeightSeq<K>::Variant::ConstantOne) return {{"variant", "constant_one"}};
    json j{{"variant", "geometric"}};
    if constexpr (T::isExact) {
        j["c"] = T::str(w.geoScale());
        j["r"] = T::str(w.geoRatio());
    } else {
        j["c"] = w.geoScale();
        j["r"] = w.geoRatio();
    }
    return j;
}

template <ScalarField K>
WeightSeq<K> weightSeqFromJson(const json& j, double cx = 1.0) {
    using T = ScalarTraits<K>;
    const std::string variant = j.value("variant", "constant_one");
    if (variant == "constant_one") return WeightSeq<K>::constantOne();
    if (variant != "geometric") throw std::invalid_argument("unknown weight variant: " + variant);
    Rational c = detail::rationalFromJson(j.at("c"));
    Rational r = detail::rationalFromJson(j.at("r"));
    if constexpr (T::isExact) {
        return WeightSeq<K>::geometric(std::move(c), std::move(r), cx);
    } else {
        return WeightSeq<K>::geometric(c.convert_to<double>(), r.convert_to<double>(), cx);
    }
}

template <ScalarField K>
json toJson(const OperatorSeries<K>& t) {
    using T = ScalarTraits<K>;
    json j{{"lambda", toJson(t.lambda)}, {"weights", toJson(t.weights)}};
    if (t.tail) {
        json tail;
        if constexpr (T::isExact) {
            tail["ratio"] = T::str(t.tail->ratio);
        } else {
            tail["ratio"] = t.tail->ratio;
        }
        tail["start"] = t.tail->start;
        j["tail"] = tail;
    }
    return j;
}

template <ScalarField K>
OperatorSeries<K> operatorSeriesFromJson(const json& j, double cx = 1.0) {
    using T = ScalarTraits<K>;
    OperatorSeries<K> t{sparseVecFromJson<K>(j.at("lambda")),
                        weightSeqFromJson<K>(j.at("weights"), cx), std::nullopt};
    if (j.contains("tail") && !j["tail"].is_null()) {
        Rational ratio = detail::rationalFromJson(j["tail"].at("ratio"));
        if constexpr (T::isExact) {
            t.tail = TailDescriptor<K>{ratio, j["tail"].at("start").get<Index>()};
        } else {
            t.tail =
                TailDescriptor<K>{ratio.convert_to<double>(), j["tail"].at("start").get<Index>()};
        }
    }
    return t;
}

/// Debug dump of the system matrix: dense row-major, exact entries as
/// "num/den" strings.
template <ScalarField K>
json triMatrixDump(const TriMatrix<K>& m) {
    using T = ScalarTraits<K>;
    json rows = json::array();
    for (long n = 1; n <= m.dim(); ++n) {
        json row = json::array();
        for (long k = 1; k <= m.dim(); ++k) {
            if constexpr (T::isExact) {
                row.push_back(T::str(m.at(n, k)));
            } else {
                row.push_back(m.at(n, k));
            }
        }
        rows.push_back(row);
    }
    return {{"d", m.dim()}, {"p_lambda", m.pLambda()}, {"rows", rows}};
}

template <ScalarField K>
json toJson(const WitnessPlan<K>& plan) {
    using T = ScalarTraits<K>;
    json blocks = json::array();
    for (const auto& b : plan.blocks) {
        blocks.push_back({{"target_id", b.targetId},
                          {"start_index", b.start},
                          {"power", b.power},
                          {"coefficient", T::str(b.coefficient)}});
    }
    return {{"epsilon", plan.epsilon}, {"weights", toJson(plan.weights)}, {"blocks", blocks}};
}

json toJson(const LimitColumn& col);
json toJson(const MkSchedule& s);
json toJson(const CriterionRow& row);
json toJson(const CriterionReport& rep);
json toJson(const VerdictReport& rep);
json toJson(const OrbitRow& row);
json toJson(const OrbitTraceReport& rep);
json toJson(const ConfinementReport& rep);

/// CSV with columns k,n_k,normUk,normSk,product,residual.
std::string criterionCsv(const CriterionReport& rep);

/// CSV with columns k,target_id,best_scale,proj_dist.
std::string orbitCsv(const OrbitTraceReport& rep);

}  // namespace supershift

#endif  // SUPERSHIFT_SERIALIZE_HPP
