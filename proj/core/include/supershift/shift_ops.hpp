#ifndef SUPERSHIFT_SHIFT_OPS_HPP
#define SUPERSHIFT_SHIFT_OPS_HPP

#include <optional>
#include <utility>

#include "supershift/sparse_vec.hpp"
#include "supershift/weights.hpp"

namespace supershift {

/// B_w(x) = sum_n x_{n+1}^*(x) w_n x_n: coordinate n+1 moves to n with
/// multiplier w_n; coordinate 1 is annihilated.
template <ScalarField K>
SparseVec<K> applyShift(const WeightSeq<K>& w, const SparseVec<K>& x) {
    std::vector<typename SparseVec<K>::Entry> out;
    for (const auto& e : x.entries()) {
        if (e.index < 2) continue;
        out.push_back({e.index - 1, e.coeff * w.at(e.index - 1)});
    }
    return SparseVec<K>::fromEntries(std::move(out));
}

/// B_w^k(x). Zero whenever k >= maxSupport(x); k = 0 is the identity.
template <ScalarField K>
SparseVec<K> applyShiftPow(const WeightSeq<K>& w, const SparseVec<K>& x, long k) {
    if (k < 0) throw std::invalid_argument("shift power must be >= 0");
    if (k == 0) return x;
    std::vector<typename SparseVec<K>::Entry> out;
    for (const auto& e : x.entries()) {
        if (e.index <= k) continue;
        out.push_back({e.index - k, e.coeff * w.prod(e.index - k, e.index - 1)});
    }
    return SparseVec<K>::fromEntries(std::move(out));
}

/// Declares a geometric analytic tail |lambda_k| = ratio^k for k >= start.
/// Tails contribute only to norm upper bounds: the action on finitely
/// supported vectors is untouched because high shift powers annihilate them.
template <ScalarField K>
struct TailDescriptor {
    K ratio;
    Index start;

    /// sum_{k >= start} ratio^k = ratio^start / (1 - ratio).
    typename ScalarTraits<K>::Real mass() const {
        using T = ScalarTraits<K>;
        K m = ratPowK(ratio, start) / (T::one() - ratio);
        return T::abs1(m);
    }

    friend bool operator==(const TailDescriptor& a, const TailDescriptor& b) {
        return a.ratio == b.ratio && a.start == b.start;
    }

private:
    static K ratPowK(K base, long long e) {
        if constexpr (ScalarTraits<K>::isExact) {
            return ratPow(base, e);
        } else {
            K r = ScalarTraits<K>::one();
            for (; e > 0; e >>= 1, base *= base)
                if (e & 1) r *= base;
            return r;
        }
    }
};

/// T_lambda = sum_k lambda_k B_w^k: the operator series attached to a
/// coefficient sequence lambda (indices are shift powers) and a weight
/// sequence.
template <ScalarField K>
struct OperatorSeries {
    using Real = typename ScalarTraits<K>::Real;

    SparseVec<K> lambda;
    WeightSeq<K> weights;
    std::optional<TailDescriptor<K>> tail;

    /// ||lambda||_1 including the declared analytic tail mass; an upper
    /// bound for the operator norm since ||B_w|| <= 1.
    Real l1Norm() const {
        Real n = lambda.norm1();
        if (tail) n += tail->mass();
        return n;
    }
};

/// T_lambda(x), exact: only powers k < maxSupport(x) contribute.
template <ScalarField K>
SparseVec<K> applySeries(const OperatorSeries<K>& t, const SparseVec<K>& x) {
    SparseVec<K> acc;
    if (x.isZero()) return acc;
    const Index q = x.maxSupport();
    for (const auto& le : t.lambda.entries()) {
        if (le.index >= q) break;  // B^k annihilates X_q for k >= q
        acc += applyShiftPow(t.weights, x, le.index).scaled(le.coeff);
    }
    return acc;
}

/// T_lambda^k(x) with early exit once the iterate hits zero.
template <ScalarField K>
SparseVec<K> applySeriesPow(const OperatorSeries<K>& t, const SparseVec<K>& x, long k) {
    if (k < 0) throw std::invalid_argument("series power must be >= 0");
    SparseVec<K> v = x;
    for (long i = 0; i < k && !v.isZero(); ++i) v = applySeries(t, v);
    return v;
}

/// T_lambda(x_{N+1}) in closed form: sum_{n=1}^{N} lambda_{N+1-n}
/// (prod_{i=n}^{N} w_i) x_n. Must agree with applySeries on e_{N+1}.
template <ScalarField K>
SparseVec<K> applyToBasisClosedForm(const OperatorSeries<K>& t, Index n) {
    if (n < 1) throw std::invalid_argument("closed form requires N >= 1");
    std::vector<typename SparseVec<K>::Entry> out;
    for (Index j = 1; j <= n; ++j) {
        K lam = t.lambda.coeff(n + 1 - j);
        if (ScalarTraits<K>::isZero(lam)) continue;
        out.push_back({j, lam * t.weights.prod(j, n)});
    }
    return SparseVec<K>::fromEntries(std::move(out));
}

/// Operator-norm bracket: the lower bound probes the basis vectors
/// e_2..e_{N+1} (extreme points of the l1 ball), the upper bound is
/// ||lambda||_1. On unweighted l1 the bracket collapses at N =
/// maxSupport(lambda), which witnesses the isometry.
template <ScalarField K>
std::pair<typename ScalarTraits<K>::Real, typename ScalarTraits<K>::Real>
seriesNormBracket(const OperatorSeries<K>& t, Index n) {
    using Real = typename ScalarTraits<K>::Real;
    if (n < 1) throw std::invalid_argument("probe depth must be >= 1");
    Real lower = ScalarTraits<Real>::zero();
    for (Index j = 1; j <= n; ++j) {
        Real cand = applySeries(t, SparseVec<K>::basis(j + 1)).norm1();
        if (cand > lower) lower = cand;
    }
    return {lower, t.l1Norm()};
}

/// (x_k) -> (0, x_3, x_4, ...): annihilates the first coordinate forever.
template <ScalarField K>
SparseVec<K> counterexampleA(const SparseVec<K>& x) {
    std::vector<typename SparseVec<K>::Entry> out;
    for (const auto& e : x.entries()) {
        if (e.index < 3) continue;
        out.push_back({e.index - 1, e.coeff});
    }
    return SparseVec<K>::fromEntries(std::move(out));
}

/// (x_k) -> (x_2, 0, 0, ...): rank one, range confined to span{x_1}.
template <ScalarField K>
SparseVec<K> counterexampleB(const SparseVec<K>& x) {
    K c = x.coeff(2);
    if (ScalarTraits<K>::isZero(c)) return {};
    return SparseVec<K>::basis(1).scaled(c);
}

}  // namespace supershift

#endif  // SUPERSHIFT_SHIFT_OPS_HPP
