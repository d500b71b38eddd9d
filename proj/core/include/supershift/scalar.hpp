#ifndef SUPERSHIFT_SCALAR_HPP
#define SUPERSHIFT_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>

namespace supershift {

/// 1-based coordinate / power index.
using Index = std::int64_t;

/// Exact scalar: arbitrary-precision rational (GMP-backed).
using Rational = boost::multiprecision::mpq_rational;

/// b^e for integer e >= 0 by binary exponentiation (exact).
inline Rational ratPow(Rational base, long long e) {
    Rational r(1);
    for (; e > 0; e >>= 1, base *= base) {
        if (e & 1) r *= base;
    }
    return r;
}

/// log|x| for a rational, computed through a 50-digit float so that
/// numerators far outside double range still give a finite log.
inline double logAbsRational(const Rational& x) {
    if (x == 0) return -std::numeric_limits<double>::infinity();
    boost::multiprecision::mpf_float_50 f(abs(x));
    return log(f).convert_to<double>();
}

/// Exact complex scalar: a pair of rationals (real and imaginary part).
/// Division goes through the conjugate, so the field operations stay exact.
struct GaussRational {
    Rational re{0};
    Rational im{0};

    GaussRational() = default;
    GaussRational(Rational r) : re(std::move(r)) {}  // NOLINT: implicit from Rational
    GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool isZero() const { return re == 0 && im == 0; }
    Rational normSq() const { return re * re + im * im; }

    friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
    friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussRational operator/(const GaussRational& a, const GaussRational& b) {
        Rational n = b.normSq();
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    GaussRational& operator+=(const GaussRational& o) { return *this = *this + o; }
    GaussRational& operator-=(const GaussRational& o) { return *this = *this - o; }
    GaussRational& operator*=(const GaussRational& o) { return *this = *this * o; }
    GaussRational& operator/=(const GaussRational& o) { return *this = *this / o; }
    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re == b.re && a.im == b.im;
    }
};

/// Sign plus natural log of the absolute value. The product of two
/// magnitudes is the sum of their logs, which keeps quantities like
/// (d+1)!/w^(d*p) representable far beyond double range.
struct LogMagnitude {
    int sign = 0;
    double logAbs = -std::numeric_limits<double>::infinity();

    static LogMagnitude zero() { return {}; }
    static LogMagnitude fromLog(int sign, double logAbs) {
        if (sign == 0) return {};
        return {sign < 0 ? -1 : 1, logAbs};
    }
    static LogMagnitude of(double v) {
        if (v == 0.0) return {};
        return {v < 0 ? -1 : 1, std::log(std::fabs(v))};
    }

    friend LogMagnitude operator*(const LogMagnitude& a, const LogMagnitude& b) {
        if (a.sign == 0 || b.sign == 0) return {};
        return {a.sign * b.sign, a.logAbs + b.logAbs};
    }

    /// |this| <= |o| with an additive log-domain slack.
    bool magLeq(const LogMagnitude& o, double slack = 0.0) const {
        if (sign == 0) return true;
        if (o.sign == 0) return false;
        return logAbs <= o.logAbs + slack;
    }

    double toDouble() const { return sign == 0 ? 0.0 : sign * std::exp(logAbs); }
};

template <class T>
struct IsComplexScalar : std::false_type {};
template <>
struct IsComplexScalar<GaussRational> : std::true_type {};
template <>
struct IsComplexScalar<std::complex<double>> : std::true_type {};

/// Uniform access to the four scalar kinds: exact real (Rational),
/// float real (double), exact complex (GaussRational), float complex.
/// `Real` is the type carrying norms: exact only where absolute values
/// stay inside the field.
template <class K>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool isExact = true;
    static constexpr bool isComplex = false;
    using Real = Rational;

    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational fromInt(long long n) { return Rational(n); }
    static Rational fromRatio(long long num, long long den) { return Rational(num, den); }
    static Rational fromDouble(double v) { return Rational(v); }  // exact
    static bool isZero(const Rational& x) { return x == 0; }
    static Real abs1(const Rational& x) { return abs(x); }
    static double toDouble(const Rational& x) { return x.convert_to<double>(); }
    static double logAbs(const Rational& x) { return logAbsRational(x); }
    static LogMagnitude logMag(const Rational& x) {
        if (x == 0) return LogMagnitude::zero();
        return LogMagnitude::fromLog(x < 0 ? -1 : 1, logAbsRational(x));
    }
    static std::string str(const Rational& x) {
        std::ostringstream os;
        os << x;
        return os.str();
    }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool isExact = false;
    static constexpr bool isComplex = false;
    using Real = double;

    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double fromInt(long long n) { return static_cast<double>(n); }
    static double fromRatio(long long num, long long den) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static double fromDouble(double v) { return v; }
    static bool isZero(double x) { return x == 0.0; }
    static Real abs1(double x) { return std::fabs(x); }
    static double toDouble(double x) { return x; }
    static double logAbs(double x) {
        if (x == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(std::fabs(x));
    }
    static LogMagnitude logMag(double x) { return LogMagnitude::of(x); }
    static std::string str(double x) {
        std::ostringstream os;
        os.precision(17);
        os << x;
        return os.str();
    }
};

template <>
struct ScalarTraits<GaussRational> {
    static constexpr bool isExact = true;
    static constexpr bool isComplex = true;
    using Real = double;  // |a+bi| is a square root, not a rational

    static GaussRational zero() { return {}; }
    static GaussRational one() { return {Rational(1)}; }
    static GaussRational fromInt(long long n) { return {Rational(n)}; }
    static GaussRational fromRatio(long long num, long long den) { return {Rational(num, den)}; }
    static GaussRational fromDouble(double v) { return {Rational(v)}; }
    static bool isZero(const GaussRational& x) { return x.isZero(); }
    static Real abs1(const GaussRational& x) {
        return std::sqrt(x.normSq().convert_to<double>());
    }
    static double toDouble(const GaussRational& x) { return x.re.convert_to<double>(); }
    static double logAbs(const GaussRational& x) {
        if (x.isZero()) return -std::numeric_limits<double>::infinity();
        return 0.5 * logAbsRational(x.normSq());
    }
    static LogMagnitude logMag(const GaussRational& x) {
        if (x.isZero()) return LogMagnitude::zero();
        return LogMagnitude::fromLog(1, logAbs(x));
    }
    static std::string str(const GaussRational& x) {
        std::ostringstream os;
        os << x.re << "+" << x.im << "i";
        return os.str();
    }
};

template <>
struct ScalarTraits<std::complex<double>> {
    static constexpr bool isExact = false;
    static constexpr bool isComplex = true;
    using Real = double;

    static std::complex<double> zero() { return {0.0, 0.0}; }
    static std::complex<double> one() { return {1.0, 0.0}; }
    static std::complex<double> fromInt(long long n) { return {static_cast<double>(n), 0.0}; }
    static std::complex<double> fromRatio(long long num, long long den) {
        return {static_cast<double>(num) / static_cast<double>(den), 0.0};
    }
    static std::complex<double> fromDouble(double v) { return {v, 0.0}; }
    static bool isZero(const std::complex<double>& x) { return x.real() == 0.0 && x.imag() == 0.0; }
    static Real abs1(const std::complex<double>& x) { return std::abs(x); }
    static double toDouble(const std::complex<double>& x) { return x.real(); }
    static double logAbs(const std::complex<double>& x) {
        if (isZero(x)) return -std::numeric_limits<double>::infinity();
        return std::log(std::abs(x));
    }
    static LogMagnitude logMag(const std::complex<double>& x) {
        if (isZero(x)) return LogMagnitude::zero();
        return LogMagnitude::fromLog(1, logAbs(x));
    }
    static std::string str(const std::complex<double>& x) {
        std::ostringstream os;
        os.precision(17);
        os << x.real() << "+" << x.imag() << "i";
        return os.str();
    }
};

template <class K>
concept ScalarField = requires { ScalarTraits<K>::isExact; };

template <class K>
using RealOf = typename ScalarTraits<K>::Real;

template <class R>
double realToDouble(const R& r) {
    return ScalarTraits<R>::toDouble(r);
}

}  // namespace supershift

#endif  // SUPERSHIFT_SCALAR_HPP
