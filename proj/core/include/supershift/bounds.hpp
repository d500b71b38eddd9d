#ifndef SUPERSHIFT_BOUNDS_HPP
#define SUPERSHIFT_BOUNDS_HPP

#include <vector>

#include "supershift/sparse_vec.hpp"
#include "supershift/weights.hpp"

namespace supershift {

/// Log-domain evaluation of one of the factorial-growth bound functions.
/// Raw evaluation overflows doubles near d ~ 20, and thresholds like
/// [G(k^2)]^(-k) live far below the denormal range, so every comparison
/// against these values is done on logValue.
struct BoundEval {
    enum class Kind { FLambda, GK0Delta };

    Kind kind = Kind::FLambda;
    long d = 0;
    LogMagnitude logValue;
    double cx = 1.0;
    Index anchor = 1;    // p_lambda for F, k0 for G
    double delta = 0.0;  // G only
};

/// log of  cx (d+1)! maxAbs^(d-1) / (|lambda_p|^d w_{p+d}^(d p)).
BoundEval boundF(double logCx, long d, Index p, double logMaxAbs, double logAbsLambdaP,
                 double logWpd);

/// log of  cx (d+1)! sup^(d-1) / (delta^d w_{k0+d}^(d k0)).
BoundEval boundG(double logCx, long d, Index k0, double logSup, double logDelta, double logWk0d);

/// F_lambda(d): increasing in d; controls ||S_{lambda,d}(y)|| <= F(d) ||y||.
template <ScalarField K>
BoundEval evalF(const SparseVec<K>& lambda, const WeightSeq<K>& w, double cx, long d) {
    using T = ScalarTraits<K>;
    if (d < 1) throw std::invalid_argument("F is defined for d >= 1");
    const Index p = lambda.minSupport();
    double logMaxAbs = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < d; ++i) {
        double la = T::logAbs(lambda.coeff(p + i));
        if (la > logMaxAbs) logMaxAbs = la;
    }
    return boundF(std::log(cx), d, p, logMaxAbs, T::logAbs(lambda.coeff(p)), w.logAt(p + d));
}

/// G_{k0,delta}(d) from per-offset family suprema: maxAbsByOffset[i] holds
/// sup_j |lambda^j_{k0+i}|; offsets past the list are zero columns.
template <ScalarField K>
BoundEval evalG(const std::vector<double>& maxAbsByOffset, Index k0, double delta,
                const WeightSeq<K>& w, double cx, long d) {
    if (d < 1) throw std::invalid_argument("G is defined for d >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    double sup = 0.0;
    for (std::size_t i = 0; i < maxAbsByOffset.size() && i < static_cast<std::size_t>(d); ++i)
        sup = std::max(sup, maxAbsByOffset[i]);
    double logSup =
        sup > 0.0 ? std::log(sup) : -std::numeric_limits<double>::infinity();
    return boundG(std::log(cx), d, k0, logSup, std::log(delta), w.logAt(k0 + d));
}

}  // namespace supershift

#endif  // SUPERSHIFT_BOUNDS_HPP
