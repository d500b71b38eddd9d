#ifndef SUPERSHIFT_LIMITS_HPP
#define SUPERSHIFT_LIMITS_HPP

#include <optional>
#include <string>
#include <vector>

#include "supershift/right_inverse.hpp"
#include "supershift/sampler.hpp"

namespace supershift {

namespace detail {

template <ScalarField K>
K powK(K base, long long e) {
    using T = ScalarTraits<K>;
    K r = T::one();
    for (; e > 0; e >>= 1, base *= base)
        if (e & 1) r *= base;
    return r;
}

}  // namespace detail

/// A family (lambda^m)_{m=1..M} of coefficient sequences, the finite
/// surrogate for a sequence of operators T_{lambda^m} converging to U.
template <ScalarField K>
struct SeqFamily {
    std::vector<SparseVec<K>> members;
    std::optional<SparseVec<K>> closedFormLimit;
    std::string generator;  // how the family was produced, for reports

    long size() const { return static_cast<long>(members.size()); }
};

template <ScalarField K>
SeqFamily<K> constantFamily(SparseVec<K> lambda, long count) {
    SeqFamily<K> f;
    f.members.assign(static_cast<std::size_t>(count), lambda);
    f.closedFormLimit = std::move(lambda);
    f.generator = "constant";
    return f;
}

/// Members equal `limit` from stabilizeAt on; earlier members carry the
/// perturbation vector scaled by 1/m.
template <ScalarField K>
SeqFamily<K> eventuallyConstantFamily(SparseVec<K> limit, long count, long stabilizeAt,
                                      const SparseVec<K>& perturbation) {
    using T = ScalarTraits<K>;
    SeqFamily<K> f;
    for (long m = 1; m <= count; ++m) {
        if (m >= stabilizeAt) {
            f.members.push_back(limit);
        } else {
            f.members.push_back(limit + perturbation.scaled(T::one() / T::fromInt(m)));
        }
    }
    f.closedFormLimit = std::move(limit);
    f.generator = "eventually_constant";
    return f;
}

enum class PerturbDecay { InverseM, Geometric };

/// lambda^m = limit + decay(m) * perturbation with decay 1/m or 2^-m.
template <ScalarField K>
SeqFamily<K> perturbedFamily(SparseVec<K> limit, long count, const SparseVec<K>& perturbation,
                             PerturbDecay decay) {
    using T = ScalarTraits<K>;
    SeqFamily<K> f;
    for (long m = 1; m <= count; ++m) {
        K scale = decay == PerturbDecay::InverseM ? T::one() / T::fromInt(m)
                                                  : detail::powK(T::fromRatio(1, 2), m);
        f.members.push_back(limit + perturbation.scaled(scale));
    }
    f.closedFormLimit = std::move(limit);
    f.generator = decay == PerturbDecay::InverseM ? "inverse_m_perturbed" : "geometric_perturbed";
    return f;
}

/// Per-coordinate limit estimate. The estimate is the average over the
/// last quarter of the family; the flag is a finite-data Cauchy test:
/// the last-quarter oscillation is zero (exact stabilization), below the
/// absolute tolerance, or decays against the previous quarter.
struct LimitColumn {
    Index k = 0;
    double estimate = 0.0;
    bool convergent = false;
    bool exactlyStable = false;
};

template <ScalarField K>
std::vector<LimitColumn> detectLimits(const SeqFamily<K>& fam, Index kmax, double tol = 1e-8) {
    using T = ScalarTraits<K>;
    static_assert(!T::isComplex, "limit detection operates on real coefficient families");
    const long m = fam.size();
    if (m < 3) throw std::invalid_argument("limit detection needs at least 3 family members");

    const long q4Begin = 3 * m / 4;  // 0-based start of the last quarter
    const long q3Begin = m / 2;

    std::vector<LimitColumn> cols;
    cols.reserve(static_cast<std::size_t>(kmax));
    for (Index k = 1; k <= kmax; ++k) {
        LimitColumn col;
        col.k = k;

        K avg = T::zero();
        K lo = fam.members[static_cast<std::size_t>(q4Begin)].coeff(k);
        K hi = lo;
        for (long i = q4Begin; i < m; ++i) {
            K v = fam.members[static_cast<std::size_t>(i)].coeff(k);
            avg += v;
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        avg = avg / T::fromInt(m - q4Begin);
        col.estimate = T::toDouble(avg);

        K lo3 = fam.members[static_cast<std::size_t>(q3Begin)].coeff(k);
        K hi3 = lo3;
        for (long i = q3Begin; i < q4Begin; ++i) {
            K v = fam.members[static_cast<std::size_t>(i)].coeff(k);
            if (v < lo3) lo3 = v;
            if (v > hi3) hi3 = v;
        }

        col.exactlyStable = T::isZero(hi - lo);
        const double osc4 = T::toDouble(hi - lo);
        const double osc3 = T::toDouble(hi3 - lo3);
        col.convergent = col.exactlyStable || osc4 <= tol || osc4 <= 0.75 * osc3;
        cols.push_back(col);
    }
    return cols;
}

/// k0 (first coordinate with a nonzero limit) and delta = inf over the
/// tail m >= m0 of |lambda_{k0}^m|, where m0 drops leading members with a
/// vanishing k0 coordinate ("without loss of generality" trimming).
template <ScalarField K>
struct K0DeltaResult {
    Index k0 = 0;
    typename ScalarTraits<K>::Real delta{};
    long m0 = 1;  // 1-based first member of the trusted tail
    std::vector<LimitColumn> columns;

    double deltaD() const { return realToDouble(delta); }
};

template <ScalarField K>
K0DeltaResult<K> detectK0Delta(const SeqFamily<K>& fam, double nullTol = 1e-2,
                               double cauchyTol = 1e-8) {
    using T = ScalarTraits<K>;
    if (fam.closedFormLimit && fam.closedFormLimit->isZero())
        throw NullLimitError("limit operator is null; supercyclicity claim excludes U = 0");
    Index kupper = 0;
    for (const auto& mem : fam.members)
        if (!mem.isZero()) kupper = std::max(kupper, mem.maxSupport());
    if (kupper == 0)
        throw NullLimitError("limit operator is null; supercyclicity claim excludes U = 0");

    K0DeltaResult<K> res;
    res.columns = detectLimits(fam, kupper, cauchyTol);

    Index k0 = 0;
    for (const auto& col : res.columns) {
        if (col.convergent && std::fabs(col.estimate) > nullTol) {
            k0 = col.k;
            break;
        }
    }
    if (k0 == 0)
        throw NullLimitError("limit operator is null; supercyclicity claim excludes U = 0");
    res.k0 = k0;

    long m0 = 1;
    for (long m = 0; m < fam.size(); ++m) {
        if (T::isZero(fam.members[static_cast<std::size_t>(m)].coeff(k0))) m0 = m + 2;
    }
    if (m0 > fam.size()) throw NullLimitError("k0 coordinate vanishes at the end of the family");
    res.m0 = m0;

    using Real = typename T::Real;
    Real delta = T::abs1(fam.members[static_cast<std::size_t>(m0 - 1)].coeff(k0));
    for (long m = m0 - 1; m < fam.size(); ++m) {
        Real v = T::abs1(fam.members[static_cast<std::size_t>(m)].coeff(k0));
        if (v < delta) delta = v;
    }
    res.delta = delta;
    return res;
}

/// R_m construction: zero all coordinates below k0, keep the weights.
template <ScalarField K>
OperatorSeries<K> tailOperator(const SparseVec<K>& lambda, Index k0, const WeightSeq<K>& w) {
    std::vector<typename SparseVec<K>::Entry> kept;
    for (const auto& e : lambda.entries())
        if (e.index >= k0) kept.push_back(e);
    return OperatorSeries<K>{SparseVec<K>::fromEntries(std::move(kept)), w, std::nullopt};
}

/// max over probes of ||R1(R2 x) - R2(R1 x)||. Polynomials in B_w over a
/// common weight sequence commute, so this is exactly zero in rational mode.
template <ScalarField K>
typename ScalarTraits<K>::Real commutatorResidual(const OperatorSeries<K>& r1,
                                                  const OperatorSeries<K>& r2,
                                                  const std::vector<SparseVec<K>>& probes) {
    using Real = typename ScalarTraits<K>::Real;
    if (!(r1.weights == r2.weights))
        throw WeightMismatchError("commutator requires a common weight sequence");
    Real worst = ScalarTraits<Real>::zero();
    for (const auto& x : probes) {
        Real r =
            (applySeries(r1, applySeries(r2, x)) - applySeries(r2, applySeries(r1, x))).norm1();
        if (r > worst) worst = r;
    }
    return worst;
}

/// Coefficient-sequence distance ||lambda - lambda'||_1, an upper bound
/// for ||R - U|| since ||B_w^k|| <= 1. Equal tail descriptors cancel;
/// distinct ones contribute their combined mass.
template <ScalarField K>
typename ScalarTraits<K>::Real seriesDistanceBound(const OperatorSeries<K>& a,
                                                   const OperatorSeries<K>& b) {
    using Real = typename ScalarTraits<K>::Real;
    Real dist = (a.lambda - b.lambda).norm1();
    if (a.tail != b.tail) {
        if (a.tail) dist += a.tail->mass();
        if (b.tail) dist += b.tail->mass();
    }
    return dist;
}

/// ||R_m^k - U^k|| <= ||R_m - U|| * sum_{i<k} ||R_m||^(k-1-i) ||U||^i for
/// commuting series; the norms enter as caller-supplied upper bounds.
template <ScalarField K>
double powerDiffBound(const OperatorSeries<K>& rm, const OperatorSeries<K>& u, long k,
                      double normBoundRm, double normBoundU) {
    if (k < 1) throw std::invalid_argument("power must be >= 1");
    double sum = 0.0;
    for (long i = 0; i < k; ++i)
        sum += std::pow(normBoundRm, static_cast<double>(k - 1 - i)) *
               std::pow(normBoundU, static_cast<double>(i));
    return realToDouble(seriesDistanceBound(rm, u)) * sum;
}

/// log of powerDiffBound; -inf when the coefficient distance is exactly 0.
template <ScalarField K>
double logPowerDiffBound(const OperatorSeries<K>& rm, const OperatorSeries<K>& u, long k,
                         double normBoundRm, double normBoundU) {
    using Real = typename ScalarTraits<K>::Real;
    Real dist = seriesDistanceBound(rm, u);
    if (ScalarTraits<Real>::isZero(dist)) return -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (long i = 0; i < k; ++i)
        sum += std::pow(normBoundRm, static_cast<double>(k - 1 - i)) *
               std::pow(normBoundU, static_cast<double>(i));
    return std::log(realToDouble(dist)) + std::log(sum);
}

/// sup_j |lambda^j_{k0+i}| per offset i over the family.
template <ScalarField K>
std::vector<double> familyMaxAbsByOffset(const std::vector<SparseVec<K>>& members, Index k0) {
    using T = ScalarTraits<K>;
    Index kupper = k0;
    for (const auto& mem : members)
        if (!mem.isZero()) kupper = std::max(kupper, mem.maxSupport());
    std::vector<double> sup(static_cast<std::size_t>(kupper - k0 + 1), 0.0);
    for (const auto& mem : members)
        for (const auto& e : mem.entries())
            if (e.index >= k0) {
                auto& slot = sup[static_cast<std::size_t>(e.index - k0)];
                slot = std::max(slot, realToDouble(T::abs1(e.coeff)));
            }
    return sup;
}

/// The coefficient sequence of the family's limit operator: the declared
/// closed form if present, otherwise eventual constancy is required.
template <ScalarField K>
SparseVec<K> familyLimitSequence(const SeqFamily<K>& fam) {
    if (fam.closedFormLimit) return *fam.closedFormLimit;
    const long m = fam.size();
    if (m < 2) throw std::invalid_argument("family too small to determine its limit");
    long stable = m + 1;  // 1-based first index of the constant tail
    for (long i = m; i >= 1; --i) {
        if (fam.members[static_cast<std::size_t>(i - 1)] ==
            fam.members[static_cast<std::size_t>(m - 1)])
            stable = i;
        else
            break;
    }
    if (stable >= m)
        throw std::invalid_argument(
            "family has no closed-form limit and does not stabilize; cannot certify U");
    return fam.members.back();
}

struct MkSchedule {
    std::vector<long> mk;  // 1-based member indices, strictly increasing
    Index k0 = 0;
    double delta = 0.0;
};

/// Chooses m_1 < m_2 < ... with ||R_{m_k}^k - U^k|| <= 2^-k [G_{k0,delta}(k^2)]^-k,
/// compared in log-domain. G grows super-factorially, so for families that
/// are not eventually exact the threshold becomes unreachable past small k;
/// in that case the failing k and the smallest log-gap are reported instead
/// of faking satisfaction.
template <ScalarField K>
MkSchedule selectMk(const SeqFamily<K>& fam, const WeightSeq<K>& w, long kmax, double cx = 1.0) {
    const auto kd = detectK0Delta(fam);
    const SparseVec<K> limitSeq = familyLimitSequence(fam);
    const OperatorSeries<K> u = tailOperator(limitSeq, kd.k0, w);

    std::vector<SparseVec<K>> tails;
    tails.reserve(fam.members.size());
    for (const auto& mem : fam.members) tails.push_back(tailOperator(mem, kd.k0, w).lambda);
    const std::vector<double> sup = familyMaxAbsByOffset(tails, kd.k0);

    const double normU = realToDouble(u.l1Norm());
    std::vector<double> normR(tails.size());
    for (std::size_t i = 0; i < tails.size(); ++i) normR[i] = realToDouble(tails[i].norm1());

    MkSchedule sched;
    sched.k0 = kd.k0;
    sched.delta = kd.deltaD();
    long prev = 0;
    for (long k = 1; k <= kmax; ++k) {
        const BoundEval g = evalG(sup, kd.k0, sched.delta, w, cx, k * k);
        const double logThreshold =
            -static_cast<double>(k) * std::log(2.0) - static_cast<double>(k) * g.logValue.logAbs;
        long chosen = 0;
        double bestGap = std::numeric_limits<double>::infinity();
        for (long m = prev + 1; m <= fam.size(); ++m) {
            OperatorSeries<K> rm{tails[static_cast<std::size_t>(m - 1)], w, std::nullopt};
            const double logLhs =
                logPowerDiffBound(rm, u, k, normR[static_cast<std::size_t>(m - 1)], normU);
            if (logLhs <= logThreshold) {
                chosen = m;
                break;
            }
            bestGap = std::min(bestGap, logLhs - logThreshold);
        }
        if (chosen == 0) {
            throw ConvergenceDepthError(
                k, bestGap,
                "insufficient convergence depth: no admissible member at k = " +
                    std::to_string(k) + " (log-gap " + std::to_string(bestGap) + ")");
        }
        sched.mk.push_back(chosen);
        prev = chosen;
    }
    return sched;
}

/// One row of the criterion table, reported at double precision with
/// exactness witnesses carried alongside. product is the literal product
/// of the two recorded norm columns.
struct CriterionRow {
    long k = 0;
    long nk = 0;
    double normUk = 0.0;
    double normSk = 0.0;
    double product = 0.0;
    double residual = 0.0;
    bool exactZeroProduct = false;
    bool exactZeroResidual = false;
};

struct CriterionReport {
    std::vector<CriterionRow> rows;
    Index k0 = 0;
    double delta = 0.0;
    std::vector<long> mk;
    bool cond1 = false;  // ||U^k x0|| ||S_k y0|| -> 0
    bool cond2 = false;  // U^k S_k y0 -> y0
    std::string note;
};

namespace detail {

/// Shared row filler: S_k is built from the k-th tail sequence.
template <ScalarField K>
CriterionReport criterionRows(const OperatorSeries<K>& u,
                              const std::vector<SparseVec<K>>& tailLambdaByK,
                              const SparseVec<K>& x0, const SparseVec<K>& y0, long kmax) {
    using Real = typename ScalarTraits<K>::Real;
    if (kmax < 1) throw std::invalid_argument("kmax must be >= 1");
    if (u.lambda.isZero()) throw NullLimitError("U = 0 is excluded from the criterion");
    if (x0.isZero() || y0.isZero()) throw std::invalid_argument("zero probes are excluded");

    CriterionReport rep;
    SparseVec<K> uk = x0;
    for (long k = 1; k <= kmax; ++k) {
        uk = applySeries(u, uk);
        const SparseVec<K>& lam = tailLambdaByK[static_cast<std::size_t>(k - 1)];
        SparseVec<K> sk = applySLambdaPow(lam, u.weights, y0, k);
        SparseVec<K> res = applySeriesPow(u, sk, k) - y0;

        CriterionRow row;
        row.k = k;
        row.nk = k;  // the criterion is run with n_k = k
        Real nu = uk.norm1();
        Real ns = sk.norm1();
        row.normUk = realToDouble(nu);
        row.normSk = realToDouble(ns);
        row.product = row.normUk * row.normSk;
        row.residual = realToDouble(res.norm1());
        row.exactZeroProduct = uk.isZero() || sk.isZero();
        row.exactZeroResidual = res.isZero();
        rep.rows.push_back(row);
    }

    const CriterionRow& last = rep.rows.back();
    bool productsTrend = true;
    double maxResidual = 0.0;
    bool allResidualZero = true;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        if (i > 0 && rep.rows[i].product > rep.rows[i - 1].product) productsTrend = false;
        maxResidual = std::max(maxResidual, rep.rows[i].residual);
        allResidualZero = allResidualZero && rep.rows[i].exactZeroResidual;
    }
    rep.cond1 = last.exactZeroProduct || (productsTrend && last.product < 1e-9);
    // float mode leaves rounding noise in residuals that are identically
    // zero in exact arithmetic; measure it against ||y0||
    const double y0Scale = std::max(1.0, realToDouble(y0.norm1()));
    rep.cond2 = allResidualZero || maxResidual <= 1e-9 * y0Scale;
    return rep;
}

}  // namespace detail

/// Criterion check for an operator that is exactly a tail series: S_k is
/// built from U's own coefficient sequence, so the residual column
/// vanishes identically and the product column is annihilated once
/// k * p_lambda >= maxSupport(x0).
template <ScalarField K>
CriterionReport criterionCheck(const OperatorSeries<K>& u, const SparseVec<K>& x0,
                               const SparseVec<K>& y0, long kmax) {
    using T = ScalarTraits<K>;
    if (u.lambda.isZero()) throw NullLimitError("U = 0 is excluded from the criterion");
    std::vector<SparseVec<K>> tails(static_cast<std::size_t>(kmax), u.lambda);
    CriterionReport rep = detail::criterionRows(u, tails, x0, y0, kmax);
    rep.k0 = u.lambda.minSupport();
    rep.delta = realToDouble(T::abs1(u.lambda.coeff(rep.k0)));
    for (long k = 1; k <= kmax; ++k) rep.mk.push_back(k);
    rep.note = "exact tail series";
    return rep;
}

/// Criterion check through a family: k0, delta and the m_k schedule come
/// from the family pipeline, S_k from the scheduled members' tails.
template <ScalarField K>
CriterionReport criterionCheck(const OperatorSeries<K>& u, const SeqFamily<K>& fam,
                               const SparseVec<K>& x0, const SparseVec<K>& y0, long kmax,
                               double cx = 1.0) {
    MkSchedule sched = selectMk(fam, u.weights, kmax, cx);
    std::vector<SparseVec<K>> tails;
    tails.reserve(static_cast<std::size_t>(kmax));
    for (long k = 1; k <= kmax; ++k) {
        const auto& mem = fam.members[static_cast<std::size_t>(sched.mk[k - 1] - 1)];
        tails.push_back(tailOperator(mem, sched.k0, u.weights).lambda);
    }
    CriterionReport rep = detail::criterionRows(u, tails, x0, y0, kmax);
    rep.k0 = sched.k0;
    rep.delta = sched.delta;
    rep.mk = sched.mk;
    rep.note = "family schedule";
    return rep;
}

/// End-to-end verdict over one family: detect (k0, delta), build tails,
/// spot-check commutativity, choose the m_k schedule, then run the
/// criterion on random probe pairs.
struct VerdictReport {
    Index k0 = 0;
    double delta = 0.0;
    long m0 = 1;
    double commutatorMax = 0.0;
    std::optional<MkSchedule> schedule;
    std::optional<long> depthFailK;
    std::optional<double> depthFailGap;
    std::vector<CriterionReport> samples;
    bool satisfied = false;
    std::string verdict;
    std::string generator;
};

template <ScalarField K>
VerdictReport closureSupercyclicVerdict(const SeqFamily<K>& fam, const WeightSeq<K>& w,
                                        long sampleCount, long kmax, std::uint64_t seed,
                                        double cx = 1.0) {
    using T = ScalarTraits<K>;
    using Real = typename T::Real;
    VerdictReport rep;
    rep.generator = fam.generator;

    const auto kd = detectK0Delta(fam);  // NullLimitError propagates (U = 0 excluded)
    rep.k0 = kd.k0;
    rep.delta = kd.deltaD();
    rep.m0 = kd.m0;

    std::vector<OperatorSeries<K>> tails;
    tails.reserve(fam.members.size());
    for (const auto& mem : fam.members) tails.push_back(tailOperator(mem, kd.k0, w));

    // commutation spot checks on basis probes plus a few random vectors
    std::mt19937_64 rng(seed);
    std::vector<SparseVec<K>> probes;
    for (Index n = 1; n <= 20; ++n) probes.push_back(SparseVec<K>::basis(n));
    SampleProfile probeProfile{12, 4, 6};
    for (int i = 0; i < 3; ++i) probes.push_back(sampleSparseVec<K>(rng, probeProfile));
    const long m = fam.size();
    const std::vector<std::pair<long, long>> pairs = {{1, m}, {1, (m + 1) / 2}, {(m + 1) / 2, m}};
    Real worst = ScalarTraits<Real>::zero();
    for (auto [i, j] : pairs) {
        Real r = commutatorResidual(tails[static_cast<std::size_t>(i - 1)],
                                    tails[static_cast<std::size_t>(j - 1)], probes);
        if (r > worst) worst = r;
    }
    rep.commutatorMax = realToDouble(worst);

    try {
        rep.schedule = selectMk(fam, w, kmax, cx);
    } catch (const ConvergenceDepthError& e) {
        rep.depthFailK = e.failingK();
        rep.depthFailGap = e.logGap();
        rep.satisfied = false;
        rep.verdict = std::string("criterion not certified: ") + e.what();
        return rep;
    }

    const SparseVec<K> limitSeq = familyLimitSequence(fam);
    const OperatorSeries<K> u = tailOperator(limitSeq, kd.k0, w);
    const Index p = u.lambda.minSupport();

    // probe supports stay within reach of annihilation at depth kmax
    SampleProfile x0Profile{std::max<Index>(Index{1}, p * kmax), 4, 6};
    SampleProfile y0Profile{8, 4, 6};

    bool allOk = rep.commutatorMax == 0.0 || rep.commutatorMax < 1e-12;
    std::vector<SparseVec<K>> tailByK;
    for (long k = 1; k <= kmax; ++k)
        tailByK.push_back(
            tails[static_cast<std::size_t>(rep.schedule->mk[static_cast<std::size_t>(k - 1)] - 1)]
                .lambda);
    for (long s = 0; s < sampleCount; ++s) {
        SparseVec<K> x0 = sampleSparseVec<K>(rng, x0Profile);
        SparseVec<K> y0 = sampleSparseVec<K>(rng, y0Profile);
        CriterionReport cr = detail::criterionRows(u, tailByK, x0, y0, kmax);
        cr.k0 = kd.k0;
        cr.delta = kd.deltaD();
        cr.mk = rep.schedule->mk;
        allOk = allOk && cr.cond1 && cr.cond2;
        rep.samples.push_back(std::move(cr));
    }

    rep.satisfied = allOk;
    rep.verdict = allOk ? "criterion satisfied up to kmax" : "criterion checks failed";
    return rep;
}

}  // namespace supershift

#endif  // SUPERSHIFT_LIMITS_HPP
