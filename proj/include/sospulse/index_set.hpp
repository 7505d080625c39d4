#ifndef SOSPULSE_INDEX_SET_HPP
#define SOSPULSE_INDEX_SET_HPP

#include <stdexcept>

#include "sospulse/types.hpp"

namespace sospulse {

/// Consecutive Fourier index set K = {k_min, ..., k_max}.
class IndexSet {
public:
    IndexSet(Index k_min, Index k_max) : k_min_(k_min), k_max_(k_max) {
        if (k_max < k_min) throw std::invalid_argument("IndexSet: k_max < k_min");
    }

    /// Symmetric set {-p, ..., p}.
    static IndexSet symmetric(Index p) {
        if (p < 0) throw std::invalid_argument("IndexSet: p must be >= 0");
        return IndexSet(-p, p);
    }

    Index k_min() const { return k_min_; }
    Index k_max() const { return k_max_; }
    Index size() const { return k_max_ - k_min_ + 1; }

    bool contains(Index k) const { return k >= k_min_ && k <= k_max_; }
    bool is_symmetric() const { return k_min_ == -k_max_; }

    /// k value of the i-th element, i = 0..size()-1.
    Index at(Index i) const { return k_min_ + i; }
    /// Position of index k within the set.
    Index position(Index k) const {
        if (!contains(k)) throw std::out_of_range("IndexSet: index not in set");
        return k - k_min_;
    }

    friend bool operator==(const IndexSet& a, const IndexSet& b) {
        return a.k_min_ == b.k_min_ && a.k_max_ == b.k_max_;
    }

private:
    Index k_min_;
    Index k_max_;
};

}  // namespace sospulse

#endif  // SOSPULSE_INDEX_SET_HPP
