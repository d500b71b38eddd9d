#include "supershift/serialize.hpp"

#include <cstdio>
#include <sstream>

namespace supershift {

std::string formatDouble(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hashHex(std::string_view s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
    return buf;
}

json toJson(const LimitColumn& col) {
    return {{"k", col.k},
            {"estimate", col.estimate},
            {"convergent", col.convergent},
            {"exactly_stable", col.exactlyStable}};
}

json toJson(const MkSchedule& s) {
    return {{"mk", s.mk}, {"k0", s.k0}, {"delta", s.delta}};
}

json toJson(const CriterionRow& row) {
    return {{"k", row.k},
            {"n_k", row.nk},
            {"normUk", row.normUk},
            {"normSk", row.normSk},
            {"product", row.product},
            {"residual", row.residual},
            {"exact_zero_product", row.exactZeroProduct},
            {"exact_zero_residual", row.exactZeroResidual}};
}

json toJson(const CriterionReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) rows.push_back(toJson(r));
    return {{"rows", rows},     {"k0", rep.k0},     {"delta", rep.delta}, {"mk", rep.mk},
            {"cond1", rep.cond1}, {"cond2", rep.cond2}, {"note", rep.note}};
}

json toJson(const VerdictReport& rep) {
    json j{{"k0", rep.k0},
           {"delta", rep.delta},
           {"m0", rep.m0},
           {"commutator_max", rep.commutatorMax},
           {"satisfied", rep.satisfied},
           {"verdict", rep.verdict},
           {"generator", rep.generator}};
    if (rep.schedule) j["schedule"] = toJson(*rep.schedule);
    if (rep.depthFailK) j["depth_fail_k"] = *rep.depthFailK;
    if (rep.depthFailGap) j["depth_fail_log_gap"] = *rep.depthFailGap;
    json samples = json::array();
    for (const auto& s : rep.samples) samples.push_back(toJson(s));
    j["samples"] = samples;
    return j;
}

json toJson(const OrbitRow& row) {
    return {{"k", row.k},
            {"target_id", row.targetId},
            {"best_scale", row.scaleStr},
            {"proj_dist", row.dist}};
}

json toJson(const OrbitTraceReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) rows.push_back(toJson(r));
    return {{"rows", rows},
            {"argmin_k", rep.argminK},
            {"min_dist", rep.minDist},
            {"operator", rep.operatorDesc}};
}

json toJson(const ConfinementReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"k", r.k}, {"confined", r.confined}, {"proj_dist", r.projDist}});
    return {{"variant", rep.variant == ConfinementVariant::A ? "A" : "B"},
            {"rows", rows},
            {"pass", rep.pass}};
}

std::string criterionCsv(const CriterionReport& rep) {
    std::ostringstream os;
    os << "k,n_k,normUk,normSk,product,residual\n";
    for (const auto& r : rep.rows) {
        os << r.k << ',' << r.nk << ',' << formatDouble(r.normUk) << ',' << formatDouble(r.normSk)
           << ',' << formatDouble(r.product) << ',' << formatDouble(r.residual) << '\n';
    }
    return os.str();
}

std::string orbitCsv(const OrbitTraceReport& rep) {
    std::ostringstream os;
    os << "k,target_id,best_scale,proj_dist\n";
    for (const auto& r : rep.rows) {
        os << r.k << ',' << r.targetId << ',' << r.scaleStr << ',' << formatDouble(r.dist) << '\n';
    }
    return os.str();
}

}  // namespace supershift
