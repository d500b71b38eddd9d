#ifndef SUPERSHIFT_WEIGHTS_HPP
#define SUPERSHIFT_WEIGHTS_HPP

#include <cmath>
#include <stdexcept>

#include "supershift/scalar.hpp"

namespace supershift {

/// The biorthogonal system (x_n, x_n^*). Only the canonical sequence-space
/// system is instantiated (unit basis vectors with coordinate functionals,
/// so x_m^*(x_n) = delta_mn and cx = sup ||x_n^*|| = 1). A configurable
/// cx >= 1 is carried for bound evaluation on general-space parameters.
struct BiorthSystem {
    double cx = 1.0;

    static BiorthSystem canonicalL1() { return {1.0}; }
    static BiorthSystem withFunctionalBound(double cx) {
        if (cx < 1.0) throw std::invalid_argument("cx must be >= 1");
        return {cx};
    }
};

/// Admissible weight sequence w. Two rule-based families:
///   ConstantOne  w_n = 1        (the unweighted l1 specialization)
///   Geometric    w_n = c * r^n  (0 < r < 1, c > 0)
/// Geometric sequences are strictly decreasing with
/// sum w = c*r/(1-r) <= 1/cx <= 1, enforced at construction. ConstantOne
/// is exempt from summability.
template <ScalarField K>
class WeightSeq {
public:
    using Traits = ScalarTraits<K>;
    enum class Variant { ConstantOne, Geometric };

    static WeightSeq constantOne() { return WeightSeq(); }

    static WeightSeq geometric(K c, K r, double cx = 1.0) {
        static_assert(!Traits::isComplex, "weights are positive reals");
        WeightSeq w;
        w.variant_ = Variant::Geometric;
        w.c_ = std::move(c);
        w.r_ = std::move(r);
        if (!(w.c_ > Traits::zero())) throw std::invalid_argument("geometric weight scale must be positive");
        if (!(w.r_ > Traits::zero() && w.r_ < Traits::one()))
            throw std::invalid_argument("geometric weight ratio must lie in (0,1)");
        w.totalSum_ = w.c_ * w.r_ / (Traits::one() - w.r_);
        if (cx < 1.0) throw std::invalid_argument("cx must be >= 1");
        if (!(w.totalSum_ <= Traits::one() / Traits::fromDouble(cx)))
            throw std::invalid_argument("weight sum exceeds 1/cx: sequence not admissible");
        return w;
    }

    Variant variant() const { return variant_; }
    const K& geoScale() const { return c_; }
    const K& geoRatio() const { return r_; }

    /// w_n.
    K at(Index n) const {
        if (variant_ == Variant::ConstantOne) return Traits::one();
        return c_ * powK(r_, n);
    }

    /// prod_{i=a}^{b} w_i; the empty product (a > b) is 1.
    K prod(Index a, Index b) const {
        if (a > b) return Traits::one();
        if (variant_ == Variant::ConstantOne) return Traits::one();
        K wi = at(a);
        K acc = wi;
        for (Index i = a + 1; i <= b; ++i) {
            wi *= r_;
            acc *= wi;
        }
        return acc;
    }

    double logAt(Index n) const {
        if (variant_ == Variant::ConstantOne) return 0.0;
        return Traits::logAbs(c_) + static_cast<double>(n) * Traits::logAbs(r_);
    }

    /// Closed-form log of prod(a,b); matches the termwise sum of logs.
    double logProd(Index a, Index b) const {
        if (a > b || variant_ == Variant::ConstantOne) return 0.0;
        double n = static_cast<double>(b - a + 1);
        double idxSum = 0.5 * static_cast<double>(a + b) * n;
        return n * Traits::logAbs(c_) + idxSum * Traits::logAbs(r_);
    }

    bool summable() const { return variant_ == Variant::Geometric; }

    /// sum_{n>=1} w_n (geometric only).
    K totalSum() const {
        requireSummable();
        return totalSum_;
    }

    /// sum_{n>N} w_n = c * r^(N+1) / (1-r) (geometric only).
    K tailSum(Index n) const {
        requireSummable();
        return c_ * powK(r_, n + 1) / (Traits::one() - r_);
    }

    friend bool operator==(const WeightSeq& a, const WeightSeq& b) {
        if (a.variant_ != b.variant_) return false;
        if (a.variant_ == Variant::ConstantOne) return true;
        return a.c_ == b.c_ && a.r_ == b.r_;
    }

private:
    WeightSeq() = default;

    void requireSummable() const {
        if (!summable()) throw std::domain_error("constant-one weights are not summable");
    }

    static K powK(const K& base, long long e) {
        if constexpr (Traits::isExact) {
            return ratPow(base, e);
        } else {
            return std::pow(base, static_cast<double>(e));
        }
    }

    Variant variant_ = Variant::ConstantOne;
    K c_ = Traits::one();
    K r_ = Traits::one();
    K totalSum_ = Traits::zero();
};

/// prod_{i=a}^{b} w_i together with its log-domain companion.
template <ScalarField K>
std::pair<K, LogMagnitude> weightProd(const WeightSeq<K>& w, Index a, Index b) {
    K p = w.prod(a, b);
    return {p, LogMagnitude::fromLog(1, w.logProd(a, b))};
}

}  // namespace supershift

#endif  // SUPERSHIFT_WEIGHTS_HPP
