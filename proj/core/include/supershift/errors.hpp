#ifndef SUPERSHIFT_ERRORS_HPP
#define SUPERSHIFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace supershift {

/// Support extrema (min/max support index) requested on the zero vector.
class ZeroVectorError : public std::domain_error {
public:
    explicit ZeroVectorError(const std::string& what) : std::domain_error(what) {}
};

/// The cofactor/permutation inverse oracle is capped at dimension 8.
class OracleSizeError : public std::domain_error {
public:
    explicit OracleSizeError(const std::string& what) : std::domain_error(what) {}
};

/// Two operator series over different weight sequences were combined.
class WeightMismatchError : public std::invalid_argument {
public:
    explicit WeightMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

/// Every coefficient column of a family converges to zero: the limit
/// operator is null and excluded from the supercyclicity claim.
class NullLimitError : public std::domain_error {
public:
    explicit NullLimitError(const std::string& what) : std::domain_error(what) {}
};

/// A finite family cannot meet the power-difference threshold at some k.
/// Carries the failing k and the smallest log-domain gap observed.
class ConvergenceDepthError : public std::runtime_error {
public:
    ConvergenceDepthError(long failingK, double logGap, const std::string& what)
        : std::runtime_error(what), failingK_(failingK), logGap_(logGap) {}
    long failingK() const noexcept { return failingK_; }
    double logGap() const noexcept { return logGap_; }

private:
    long failingK_;
    double logGap_;
};

/// An operation that only makes sense in exact arithmetic was requested
/// in float mode (e.g. weighted witness construction).
class ExactModeRequiredError : public std::runtime_error {
public:
    explicit ExactModeRequiredError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace supershift

#endif  // SUPERSHIFT_ERRORS_HPP
