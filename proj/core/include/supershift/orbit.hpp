#ifndef SUPERSHIFT_ORBIT_HPP
#define SUPERSHIFT_ORBIT_HPP

#include <string>
#include <utility>
#include <vector>

#include "supershift/limits.hpp"
#include "supershift/shift_ops.hpp"

namespace supershift {

/// min over scalars t of ||t x - y|| / ||y||, with the achieving scale.
template <ScalarField K>
struct ProjDist {
    typename ScalarTraits<K>::Real dist;
    K scale;
};

namespace detail {

template <ScalarField K>
typename ScalarTraits<K>::Real projObjective(const SparseVec<K>& x, const SparseVec<K>& y,
                                             const K& t) {
    return (x.scaled(t) - y).norm1();
}

/// Real scalar field: the objective is piecewise linear and convex in t
/// with breakpoints y_i/x_i, so a bracketing ternary search plus
/// evaluation of the breakpoints left in the final bracket lands on the
/// exact minimum whenever one of them is a minimizer.
template <ScalarField K>
ProjDist<K> projDistanceReal(const SparseVec<K>& x, const SparseVec<K>& y, double tol) {
    using T = ScalarTraits<K>;
    using Real = typename T::Real;

    const Real normY = y.norm1();
    const Real normX = x.norm1();

    std::vector<K> bps;
    bps.reserve(x.entries().size());
    for (const auto& e : x.entries()) bps.push_back(y.coeff(e.index) / e.coeff);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    K lo = bps.front();
    K hi = bps.back();
    const K three = T::fromInt(3);
    const K width = T::fromDouble(tol) * normY / normX;
    for (int iter = 0; iter < 500 && hi - lo > width; ++iter) {
        K m1 = lo + (hi - lo) / three;
        K m2 = hi - (hi - lo) / three;
        Real f1 = projObjective(x, y, m1);
        Real f2 = projObjective(x, y, m2);
        if (f1 < f2) {
            hi = m2;
        } else if (f2 < f1) {
            lo = m1;
        } else {
            lo = m1;
            hi = m2;
        }
    }

    std::vector<K> candidates;
    candidates.push_back(T::zero());  // guarantees dist <= 1
    candidates.push_back(lo);
    candidates.push_back(hi);
    candidates.push_back((lo + hi) / T::fromInt(2));
    for (const auto& b : bps)
        if (lo <= b && b <= hi) candidates.push_back(b);

    K best = candidates.front();
    Real fbest = projObjective(x, y, best);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        Real f = projObjective(x, y, candidates[i]);
        if (f < fbest) {
            fbest = f;
            best = candidates[i];
        }
    }
    return {fbest / normY, best};
}

/// Complex scalar field: modulus-phase grid with Lipschitz-certified
/// spacing tol * ||y|| / ||x||, then a shrinking neighborhood refinement.
template <ScalarField K>
ProjDist<K> projDistanceComplex(const SparseVec<K>& x, const SparseVec<K>& y, double tol) {
    using T = ScalarTraits<K>;
    const double normY = realToDouble(y.norm1());
    const double normX = realToDouble(x.norm1());
    const double step = tol * normY / normX;     // |f(t)-f(s)| <= |t-s| ||x||_1
    const double rmax = 2.0 * normY / normX;     // beyond this f(t) > f(0)

    auto make = [](double re, double im) {
        if constexpr (std::is_same_v<K, GaussRational>) {
            return GaussRational(Rational(re), Rational(im));
        } else {
            return K(re, im);
        }
    };

    constexpr double kTwoPi = 6.283185307179586;
    K best = T::zero();
    double fbest = realToDouble(projObjective(x, y, best));
    for (double rho = step; rho <= rmax + step; rho += step) {
        const long phases = std::max<long>(4, static_cast<long>(std::ceil(kTwoPi * rho / step)));
        for (long i = 0; i < phases; ++i) {
            const double phi = kTwoPi * static_cast<double>(i) / static_cast<double>(phases);
            K t = make(rho * std::cos(phi), rho * std::sin(phi));
            double f = realToDouble(projObjective(x, y, t));
            if (f < fbest) {
                fbest = f;
                best = t;
            }
        }
    }

    double h = step;
    for (int round = 0; round < 24; ++round) {
        h *= 0.5;
        bool moved = true;
        while (moved) {
            moved = false;
            for (int dre = -1; dre <= 1; ++dre) {
                for (int dim = -1; dim <= 1; ++dim) {
                    if (dre == 0 && dim == 0) continue;
                    K t = best + make(h * dre, h * dim);
                    double f = realToDouble(projObjective(x, y, t));
                    if (f < fbest) {
                        fbest = f;
                        best = t;
                        moved = true;
                    }
                }
            }
        }
    }
    return {fbest / normY, best};
}

}  // namespace detail

template <ScalarField K>
ProjDist<K> projDistance(const SparseVec<K>& x, const SparseVec<K>& y, double tol) {
    using T = ScalarTraits<K>;
    using Real = typename T::Real;
    if (y.isZero()) throw std::invalid_argument("projective distance needs a nonzero target");
    if (!(tol > 0.0)) throw std::invalid_argument("strictly positive tolerance required");
    if (x.isZero()) return {ScalarTraits<Real>::one(), T::zero()};
    if constexpr (T::isComplex) {
        return detail::projDistanceComplex(x, y, tol);
    } else {
        return detail::projDistanceReal(x, y, tol);
    }
}

/// One block of a witness vector: target y_j is encoded at fresh indices
/// s_j+1..s_j+L_j, pre-divided by the weight products so the s_j-th shift
/// power restores c_j * y_j on the leading coordinates.
template <ScalarField K>
struct WitnessBlock {
    int targetId = 0;  // 1-based position in the target list
    Index start = 0;   // s_j; also the orbit power k_j
    long power = 0;
    K coefficient{};
};

template <ScalarField K>
struct WitnessPlan {
    std::vector<WitnessBlock<K>> blocks;
    double epsilon = 0.0;
    WeightSeq<K> weights = WeightSeq<K>::constantOne();
};

/// Greedy construction of a single vector whose scaled shift orbit passes
/// within eps of every target. Coefficients decay fast enough that each
/// block dominates everything placed after it:
///   sum_{i>j} c_i * storedMass_i <= eps 2^-j * c_j * ||y_j||.
/// Weighted construction divides by weight products, which grow without
/// bound, so it demands exact arithmetic.
template <ScalarField K>
std::pair<SparseVec<K>, WitnessPlan<K>> buildWitness(const WeightSeq<K>& w,
                                                     const std::vector<SparseVec<K>>& targets,
                                                     double eps) {
    using T = ScalarTraits<K>;
    static_assert(!T::isComplex, "witness construction targets real sequence spaces");
    if (!(eps > 0.0)) throw std::invalid_argument("strictly positive tolerance required");
    if (targets.empty()) throw std::invalid_argument("witness construction needs targets");
    for (const auto& t : targets)
        if (t.isZero()) throw std::invalid_argument("witness targets must be nonzero");
    if (w.variant() == WeightSeq<K>::Variant::Geometric && !T::isExact)
        throw ExactModeRequiredError(
            "weighted witness blocks underflow float arithmetic; run in exact mode");

    const K epsK = T::fromDouble(eps);
    WitnessPlan<K> plan;
    plan.epsilon = eps;
    plan.weights = w;

    std::vector<typename SparseVec<K>::Entry> entries;
    Index start = 0;
    K c = T::one();
    K minBudget = T::zero();  // min over placed blocks of c_j * ||y_j||
    for (std::size_t j = 0; j < targets.size(); ++j) {
        const SparseVec<K>& y = targets[j];
        // stored mass per unit coefficient at this placement
        K stored = T::zero();
        for (const auto& e : y.entries()) stored += T::abs1(e.coeff) / w.prod(e.index, start + e.index - 1);
        if (j > 0) {
            K cap = epsK * detail::powK(T::fromRatio(1, 2), static_cast<long long>(j + 1)) *
                    minBudget / stored;
            if (cap < c) c = cap;
        }
        for (const auto& e : y.entries())
            entries.push_back({start + e.index, c * e.coeff / w.prod(e.index, start + e.index - 1)});
        plan.blocks.push_back(
            {static_cast<int>(j + 1), start, static_cast<long>(start), c});
        K budget = c * y.norm1();
        if (j == 0 || budget < minBudget) minBudget = budget;
        start += y.maxSupport();
    }
    return {SparseVec<K>::fromEntries(std::move(entries)), std::move(plan)};
}

struct OrbitRow {
    long k = 0;
    int targetId = 0;
    std::string scaleStr;
    double scaleVal = 0.0;
    double dist = 0.0;
};

struct OrbitTraceReport {
    std::vector<OrbitRow> rows;    // sorted by (targetId, k)
    std::vector<long> argminK;     // per target, the power with smallest dist
    std::vector<double> minDist;   // per target
    std::string operatorDesc;
};

/// Scaled-orbit trace: for every power k <= min(kmax, maxSupport(x)) and
/// every target, the projective distance of the k-th orbit point. A zero
/// orbit point is recorded with distance 1 and scale 0.
template <ScalarField K>
OrbitTraceReport orbitTrace(const OperatorSeries<K>& t, const SparseVec<K>& x,
                            const std::vector<SparseVec<K>>& targets, long kmax,
                            double tol = 1e-4) {
    using T = ScalarTraits<K>;
    if (x.isZero()) throw std::invalid_argument("orbit trace needs a nonzero start vector");
    const long kend = std::min<long>(kmax, x.maxSupport());

    std::vector<SparseVec<K>> orbit;
    orbit.reserve(static_cast<std::size_t>(kend) + 1);
    orbit.push_back(x);
    for (long k = 1; k <= kend; ++k) orbit.push_back(applySeries(t, orbit.back()));

    OrbitTraceReport rep;
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        long bestK = 0;
        double bestDist = std::numeric_limits<double>::infinity();
        for (long k = 0; k <= kend; ++k) {
            ProjDist<K> pd = projDistance(orbit[static_cast<std::size_t>(k)], targets[ti], tol);
            OrbitRow row;
            row.k = k;
            row.targetId = static_cast<int>(ti + 1);
            row.scaleStr = T::str(pd.scale);
            row.scaleVal = T::toDouble(pd.scale);
            row.dist = realToDouble(pd.dist);
            if (row.dist < bestDist) {
                bestDist = row.dist;
                bestK = k;
            }
            rep.rows.push_back(std::move(row));
        }
        rep.argminK.push_back(bestK);
        rep.minDist.push_back(bestDist);
    }
    return rep;
}

/// Orbit trace under the bare weighted shift B_w (= T_{e_1 slot}).
template <ScalarField K>
OrbitTraceReport orbitTraceShift(const WeightSeq<K>& w, const SparseVec<K>& x,
                                 const std::vector<SparseVec<K>>& targets, long kmax,
                                 double tol = 1e-4) {
    OperatorSeries<K> shift{SparseVec<K>::basis(1), w, std::nullopt};
    OrbitTraceReport rep = orbitTrace(shift, x, targets, kmax, tol);
    rep.operatorDesc = "B_w";
    return rep;
}

enum class ConfinementVariant { A, B };

struct ConfinementRow {
    long k = 0;
    bool confined = false;
    double projDist = 0.0;
};

struct ConfinementReport {
    ConfinementVariant variant = ConfinementVariant::A;
    std::vector<ConfinementRow> rows;
    bool pass = false;
};

/// Certifies why the two coordinate-map counterexamples fail density:
/// variant A never regains a first coordinate (so every scaled orbit point
/// stays at distance >= 1 from e_1), variant B's orbit collapses into
/// span{e_1} (distance 1 from e_2).
template <ScalarField K>
ConfinementReport confinementCheck(ConfinementVariant variant, const SparseVec<K>& x, long kmax,
                                   double tol = 1e-6) {
    using T = ScalarTraits<K>;
    if (x.isZero()) throw std::invalid_argument("confinement check needs a nonzero start vector");
    const SparseVec<K> probe =
        variant == ConfinementVariant::A ? SparseVec<K>::basis(1) : SparseVec<K>::basis(2);

    ConfinementReport rep;
    rep.variant = variant;
    rep.pass = true;
    SparseVec<K> v = x;
    for (long k = 1; k <= kmax; ++k) {
        v = variant == ConfinementVariant::A ? counterexampleA(v) : counterexampleB(v);
        ConfinementRow row;
        row.k = k;
        if (variant == ConfinementVariant::A) {
            row.confined = T::isZero(v.coeff(1));
        } else {
            row.confined = v.isZero() || v.maxSupport() == 1;
        }
        ProjDist<K> pd = projDistance(v, probe, tol);
        row.projDist = realToDouble(pd.dist);
        // the first coordinate of t*v - probe is -1 for every t, so >= 1 exactly
        rep.pass = rep.pass && row.confined && row.projDist >= 1.0;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace supershift

#endif  // SUPERSHIFT_ORBIT_HPP
