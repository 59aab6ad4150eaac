#pragma once

#include <cstdint>
#include <vector>

namespace tuffley {

/// Fixed-size bitset sized at runtime. Used for poset down-sets, where the
/// bit universe is the element table of one poset.
class DynBitset {
public:
    DynBitset() = default;
    explicit DynBitset(int nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

    int size() const { return nbits_; }

    void set(int i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
    void reset(int i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

    DynBitset& operator|=(const DynBitset& o) {
        for (size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
        return *this;
    }
    DynBitset& operator&=(const DynBitset& o) {
        for (size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
        return *this;
    }

    /// true iff every bit of *this is also set in o.
    bool subset_of(const DynBitset& o) const {
        for (size_t k = 0; k < w_.size(); ++k) {
            if (w_[k] & ~o.w_[k]) return false;
        }
        return true;
    }

    bool intersects(const DynBitset& o) const {
        for (size_t k = 0; k < w_.size(); ++k) {
            if (w_[k] & o.w_[k]) return true;
        }
        return false;
    }

    bool any() const {
        for (uint64_t x : w_) {
            if (x) return true;
        }
        return false;
    }

    int count() const {
        int c = 0;
        for (uint64_t x : w_) c += __builtin_popcountll(x);
        return c;
    }

    bool operator==(const DynBitset& o) const {
        return nbits_ == o.nbits_ && w_ == o.w_;
    }

    /// Indices of set bits, ascending.
    std::vector<int> to_indices() const {
        std::vector<int> out;
        for (int i = 0; i < nbits_; ++i) {
            if (test(i)) out.push_back(i);
        }
        return out;
    }

private:
    int nbits_ = 0;
    std::vector<uint64_t> w_;
};

}  // namespace tuffley
