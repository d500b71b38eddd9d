#ifndef SUPERSHIFT_RIGHT_INVERSE_HPP
#define SUPERSHIFT_RIGHT_INVERSE_HPP

#include <numeric>
#include <vector>

#include "supershift/bounds.hpp"
#include "supershift/shift_ops.hpp"

namespace supershift {

/// Upper-triangular coefficient matrix of the right-inverse system:
/// M[n,k] = lambda_{p+k-n} prod_{i=n}^{p+k-1} w_i for n <= k, with
/// p = minSupport(lambda). Every diagonal entry equals
/// lambda_p prod_{i=n}^{p+n-1} w_i and is nonzero by construction.
template <ScalarField K>
class TriMatrix {
public:
    TriMatrix(long d, Index p, std::vector<K> upper)
        : d_(d), p_(p), upper_(std::move(upper)) {}

    long dim() const { return d_; }
    Index pLambda() const { return p_; }

    /// 1-based; zero below the diagonal.
    K at(long n, long k) const {
        if (n < 1 || k < 1 || n > d_ || k > d_) throw std::out_of_range("TriMatrix::at");
        if (n > k) return ScalarTraits<K>::zero();
        return upper_[offset(n, k)];
    }

    /// Product of the diagonal (the closed-form determinant).
    K det() const {
        K p = ScalarTraits<K>::one();
        for (long i = 1; i <= d_; ++i) p *= upper_[offset(i, i)];
        return p;
    }

private:
    std::size_t offset(long n, long k) const {
        // row n stores columns n..d
        long before = (n - 1) * d_ - (n - 1) * (n - 2) / 2;
        return static_cast<std::size_t>(before + (k - n));
    }

    long d_;
    Index p_;
    std::vector<K> upper_;
};

template <ScalarField K>
TriMatrix<K> buildM(const SparseVec<K>& lambda, const WeightSeq<K>& w, long d) {
    if (lambda.isZero()) throw ZeroVectorError("p_lambda undefined for the zero sequence");
    if (d < 1) throw std::invalid_argument("system dimension must be >= 1");
    const Index p = lambda.minSupport();
    std::vector<K> upper;
    upper.reserve(static_cast<std::size_t>(d) * (d + 1) / 2);
    for (long n = 1; n <= d; ++n) {
        // running product prod_{i=n}^{p+k-1} w_i, extended one factor per column
        K prod = w.prod(n, p + n - 1);
        for (long k = n; k <= d; ++k) {
            if (k > n) prod *= w.at(p + k - 1);
            upper.push_back(lambda.coeff(p + k - n) * prod);
        }
    }
    return TriMatrix<K>(d, p, std::move(upper));
}

/// S_{lambda,d}(y): solves the triangular system by back-substitution and
/// places the solution on coordinates p+1..p+d. Satisfies
/// T_lambda(S_{lambda,d}(y)) = y on X_d, with maxSupport(S(y)) = p + maxSupport(y).
template <ScalarField K>
SparseVec<K> solveRightInverse(const SparseVec<K>& lambda, const WeightSeq<K>& w, long d,
                               const SparseVec<K>& y) {
    using T = ScalarTraits<K>;
    if (lambda.isZero()) throw ZeroVectorError("p_lambda undefined for the zero sequence");
    if (d < 1) throw std::invalid_argument("system dimension must be >= 1");
    if (!y.isZero() && y.maxSupport() > d)
        throw std::invalid_argument("y lies outside X_d for the requested dimension");
    if (y.isZero()) return {};

    const TriMatrix<K> m = buildM(lambda, w, d);
    const Index p = m.pLambda();
    std::vector<K> b(static_cast<std::size_t>(d) + 1, T::zero());
    for (long n = d; n >= 1; --n) {
        K s = y.coeff(n);
        for (long k = n + 1; k <= d; ++k) {
            if (!T::isZero(b[k])) s -= m.at(n, k) * b[k];
        }
        b[n] = s / m.at(n, n);
    }
    std::vector<typename SparseVec<K>::Entry> out;
    for (long n = 1; n <= d; ++n) {
        if (!T::isZero(b[n])) out.push_back({p + n, b[n]});
    }
    return SparseVec<K>::fromEntries(std::move(out));
}

/// Small dense matrix used only by the verification oracle.
template <ScalarField K>
class DenseMatrix {
public:
    DenseMatrix(long rows, long cols)
        : rows_(rows), cols_(cols),
          a_(static_cast<std::size_t>(rows) * cols, ScalarTraits<K>::zero()) {}

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    K& at(long i, long j) { return a_[static_cast<std::size_t>(i - 1) * cols_ + (j - 1)]; }
    const K& at(long i, long j) const {
        return a_[static_cast<std::size_t>(i - 1) * cols_ + (j - 1)];
    }

    /// Matrix with row i and column j removed.
    DenseMatrix minor(long i, long j) const {
        DenseMatrix m(rows_ - 1, cols_ - 1);
        for (long r = 1, mr = 1; r <= rows_; ++r) {
            if (r == i) continue;
            for (long c = 1, mc = 1; c <= cols_; ++c) {
                if (c == j) continue;
                m.at(mr, mc) = at(r, c);
                ++mc;
            }
            ++mr;
        }
        return m;
    }

private:
    long rows_, cols_;
    std::vector<K> a_;
};

template <ScalarField K>
DenseMatrix<K> denseFromTri(const TriMatrix<K>& m) {
    DenseMatrix<K> d(m.dim(), m.dim());
    for (long n = 1; n <= m.dim(); ++n)
        for (long k = n; k <= m.dim(); ++k) d.at(n, k) = m.at(n, k);
    return d;
}

/// Determinant by full expansion over the symmetric group:
/// sum_sigma sgn(sigma) prod_l a[sigma(l), l]. Exponential cost; oracle only.
template <ScalarField K>
K detPermutationExpansion(const DenseMatrix<K>& a) {
    using T = ScalarTraits<K>;
    const long n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("determinant requires a square matrix");
    if (n == 0) return T::one();
    std::vector<long> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1L);
    K det = T::zero();
    do {
        // parity by inversion count
        long inv = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                if (perm[i] > perm[j]) ++inv;
        K term = (inv % 2 == 0) ? T::one() : -T::one();
        for (long col = 1; col <= n; ++col) {
            term *= a.at(perm[static_cast<std::size_t>(col - 1)], col);
            if (T::isZero(term)) break;
        }
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

inline constexpr long kOracleMaxDim = 8;

/// Entrywise inverse via the cofactor formula,
/// inv[n,k] = (-1)^(n+k) det(M with row k, column n removed) / det(M),
/// with all determinants expanded over permutations. Deliberately
/// independent of the back-substitution path; capped at d = 8.
template <ScalarField K>
DenseMatrix<K> invMatrixOracle(const TriMatrix<K>& m) {
    const long d = m.dim();
    if (d > kOracleMaxDim) throw OracleSizeError("oracle size limit: d must be <= 8");
    DenseMatrix<K> dense = denseFromTri(m);
    K det = detPermutationExpansion(dense);
    DenseMatrix<K> inv(d, d);
    for (long n = 1; n <= d; ++n) {
        for (long k = 1; k <= d; ++k) {
            K minorDet = detPermutationExpansion(dense.minor(k, n));
            if ((n + k) % 2 != 0) minorDet = -minorDet;
            inv.at(n, k) = minorDet / det;
        }
    }
    return inv;
}

/// S_lambda^k(y) via the tower S_{lambda,d_k} o ... o S_{lambda,d_1} with
/// d_l = (l-1) p + q_y; each stage lands exactly in the next stage's X_d.
template <ScalarField K>
SparseVec<K> applySLambdaPow(const SparseVec<K>& lambda, const WeightSeq<K>& w,
                             const SparseVec<K>& y, long k) {
    if (lambda.isZero()) throw ZeroVectorError("p_lambda undefined for the zero sequence");
    if (k < 1) throw std::invalid_argument("iterate count must be >= 1");
    if (y.isZero()) return {};
    const Index p = lambda.minSupport();
    const Index q = y.maxSupport();
    SparseVec<K> z = y;
    for (long l = 1; l <= k; ++l) {
        z = solveRightInverse(lambda, w, (l - 1) * p + q, z);
    }
    return z;
}

/// Dimension of the l-th stage of the S_lambda tower.
inline long iterateDim(Index p, Index q, long l) { return static_cast<long>((l - 1) * p + q); }

}  // namespace supershift

#endif  // SUPERSHIFT_RIGHT_INVERSE_HPP
