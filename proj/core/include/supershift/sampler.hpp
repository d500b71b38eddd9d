#ifndef SUPERSHIFT_SAMPLER_HPP
#define SUPERSHIFT_SAMPLER_HPP

#include <random>

#include "supershift/sparse_vec.hpp"

namespace supershift {

/// Uniform integer in [lo, hi] drawn from the raw engine stream.
/// std::uniform_int_distribution is implementation-defined, which would
/// break byte-identical reports across toolchains.
inline std::int64_t randRange(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(rng() % span);
}

/// Sampling profile for finitely supported vectors: the realization of
/// the dense sets D1 = D2 = X_inf at desk scale (bounded support index,
/// bounded coefficient height, exact rational coordinates).
struct SampleProfile {
    Index maxIndex = 10;      // support lives in [1, maxIndex]
    int maxTerms = 4;         // at most this many nonzero coordinates
    long long coeffHeight = 8;  // |num| <= height, 1 <= den <= height
};

/// Nonzero sample from X_inf under the profile.
template <ScalarField K>
SparseVec<K> sampleSparseVec(std::mt19937_64& rng, const SampleProfile& profile) {
    using T = ScalarTraits<K>;
    std::vector<typename SparseVec<K>::Entry> entries;
    const int terms =
        static_cast<int>(randRange(rng, 1, std::min<Index>(profile.maxTerms, profile.maxIndex)));
    for (int i = 0; i < terms; ++i) {
        Index idx = randRange(rng, 1, profile.maxIndex);
        long long num = randRange(rng, 1, profile.coeffHeight);
        if (randRange(rng, 0, 1) == 1) num = -num;
        long long den = randRange(rng, 1, profile.coeffHeight);
        entries.push_back({idx, T::fromRatio(num, den)});
    }
    SparseVec<K> v = SparseVec<K>::fromEntries(std::move(entries));
    if (v.isZero()) return SparseVec<K>::basis(randRange(rng, 1, profile.maxIndex));
    return v;
}

/// Nonzero scalar with bounded height.
template <ScalarField K>
K sampleScalar(std::mt19937_64& rng, long long height) {
    using T = ScalarTraits<K>;
    long long num = randRange(rng, 1, height);
    if (randRange(rng, 0, 1) == 1) num = -num;
    return T::fromRatio(num, randRange(rng, 1, height));
}

}  // namespace supershift

#endif  // SUPERSHIFT_SAMPLER_HPP
