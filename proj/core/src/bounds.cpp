#include "supershift/bounds.hpp"

#include <cmath>

namespace supershift {

namespace {

// log((d+1)!) via lgamma; exact to double rounding.
double logFactorial(long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

BoundEval boundF(double logCx, long d, Index p, double logMaxAbs, double logAbsLambdaP,
                 double logWpd) {
    BoundEval b;
    b.kind = BoundEval::Kind::FLambda;
    b.d = d;
    b.cx = std::exp(logCx);
    b.anchor = p;
    double v = logCx + logFactorial(d + 1) + static_cast<double>(d - 1) * logMaxAbs -
               static_cast<double>(d) * logAbsLambdaP -
               static_cast<double>(d) * static_cast<double>(p) * logWpd;
    b.logValue = LogMagnitude::fromLog(1, v);
    return b;
}

BoundEval boundG(double logCx, long d, Index k0, double logSup, double logDelta,
                 double logWk0d) {
    BoundEval b;
    b.kind = BoundEval::Kind::GK0Delta;
    b.d = d;
    b.cx = std::exp(logCx);
    b.anchor = k0;
    b.delta = std::exp(logDelta);
    double v = logCx + logFactorial(d + 1) + static_cast<double>(d - 1) * logSup -
               static_cast<double>(d) * logDelta -
               static_cast<double>(d) * static_cast<double>(k0) * logWk0d;
    b.logValue = LogMagnitude::fromLog(1, v);
    return b;
}

}  // namespace supershift
