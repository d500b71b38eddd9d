#ifndef SUPERSHIFT_SPARSE_VEC_HPP
#define SUPERSHIFT_SPARSE_VEC_HPP

#include <algorithm>
#include <initializer_list>
#include <utility>
#include <vector>

#include "supershift/errors.hpp"
#include "supershift/scalar.hpp"

namespace supershift {

/// Finitely supported sequence-space vector: coordinates with respect to
/// the canonical basis (x_n), stored as (index, coefficient) pairs with
/// strictly increasing 1-based indices and no explicit zeros. The empty
/// entry list is the zero vector.
template <ScalarField K>
class SparseVec {
public:
    using Traits = ScalarTraits<K>;
    using Real = typename Traits::Real;

    struct Entry {
        Index index;
        K coeff;
        friend bool operator==(const Entry& a, const Entry& b) {
            return a.index == b.index && a.coeff == b.coeff;
        }
    };

    SparseVec() = default;

    /// e_n.
    static SparseVec basis(Index n) {
        if (n < 1) throw std::invalid_argument("basis index must be >= 1");
        SparseVec v;
        v.entries_.push_back({n, Traits::one()});
        return v;
    }

    /// Normalizes arbitrary (index, coeff) pairs: sorts, merges duplicate
    /// indices, drops zeros, rejects indices < 1.
    static SparseVec fromEntries(std::vector<Entry> raw) {
        std::stable_sort(raw.begin(), raw.end(),
                         [](const Entry& a, const Entry& b) { return a.index < b.index; });
        SparseVec v;
        for (auto& e : raw) {
            if (e.index < 1) throw std::invalid_argument("vector index must be >= 1");
            if (!v.entries_.empty() && v.entries_.back().index == e.index) {
                v.entries_.back().coeff += e.coeff;
                if (Traits::isZero(v.entries_.back().coeff)) v.entries_.pop_back();
            } else if (!Traits::isZero(e.coeff)) {
                v.entries_.push_back(std::move(e));
            }
        }
        return v;
    }

    static SparseVec fromEntries(std::initializer_list<Entry> raw) {
        return fromEntries(std::vector<Entry>(raw));
    }

    const std::vector<Entry>& entries() const { return entries_; }
    bool isZero() const { return entries_.empty(); }
    std::size_t termCount() const { return entries_.size(); }

    /// Coordinate read x_n^*(x); zero if n is not in the support.
    K coeff(Index n) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                                   [](const Entry& e, Index i) { return e.index < i; });
        if (it != entries_.end() && it->index == n) return it->coeff;
        return Traits::zero();
    }

    /// Smallest support index (p for coefficient sequences).
    Index minSupport() const {
        if (entries_.empty()) throw ZeroVectorError("undefined support extremum: zero vector");
        return entries_.front().index;
    }

    /// Largest support index (q for X_inf vectors).
    Index maxSupport() const {
        if (entries_.empty()) throw ZeroVectorError("undefined support extremum: zero vector");
        return entries_.back().index;
    }

    /// l1 norm; exact in rational mode.
    Real norm1() const {
        Real s = ScalarTraits<Real>::zero();
        for (const auto& e : entries_) s += Traits::abs1(e.coeff);
        return s;
    }

    SparseVec scaled(const K& t) const {
        SparseVec v;
        if (Traits::isZero(t)) return v;
        v.entries_.reserve(entries_.size());
        for (const auto& e : entries_) {
            K c = e.coeff * t;
            if (!Traits::isZero(c)) v.entries_.push_back({e.index, std::move(c)});
        }
        return v;
    }

    friend SparseVec operator+(const SparseVec& a, const SparseVec& b) {
        SparseVec v;
        v.entries_.reserve(a.entries_.size() + b.entries_.size());
        auto ia = a.entries_.begin(), ib = b.entries_.begin();
        while (ia != a.entries_.end() || ib != b.entries_.end()) {
            if (ib == b.entries_.end() || (ia != a.entries_.end() && ia->index < ib->index)) {
                v.entries_.push_back(*ia++);
            } else if (ia == a.entries_.end() || ib->index < ia->index) {
                v.entries_.push_back(*ib++);
            } else {
                K c = ia->coeff + ib->coeff;
                if (!Traits::isZero(c)) v.entries_.push_back({ia->index, std::move(c)});
                ++ia;
                ++ib;
            }
        }
        return v;
    }

    friend SparseVec operator-(const SparseVec& a, const SparseVec& b) {
        return a + b.scaled(-Traits::one());
    }

    SparseVec& operator+=(const SparseVec& o) { return *this = *this + o; }
    SparseVec& operator-=(const SparseVec& o) { return *this = *this - o; }

    friend bool operator==(const SparseVec& a, const SparseVec& b) {
        return a.entries_ == b.entries_;
    }

private:
    std::vector<Entry> entries_;
};

/// a*x + y without an intermediate scaled copy.
template <ScalarField K>
SparseVec<K> axpy(const K& a, const SparseVec<K>& x, const SparseVec<K>& y) {
    return x.scaled(a) + y;
}

}  // namespace supershift

#endif  // SUPERSHIFT_SPARSE_VEC_HPP
