#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace curate::dedup {

// Disjoint-set forest with union by rank and path compression.
class UnionFind {
  public:
    explicit UnionFind(size_t n) : parent_(n), rank_(n, 0) {
        for (size_t i = 0; i < n; ++i) parent_[i] = i;
    }

    size_t find(size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Returns true when a and b were in different sets.
    bool unite(size_t a, size_t b) {
        size_t ra = find(a);
        size_t rb = find(b);
        if (ra == rb) return false;
        if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
        parent_[rb] = ra;
        if (rank_[ra] == rank_[rb]) ++rank_[ra];
        return true;
    }

    bool same(size_t a, size_t b) { return find(a) == find(b); }

    size_t size() const { return parent_.size(); }

  private:
    std::vector<size_t> parent_;
    std::vector<uint8_t> rank_;
};

}  // namespace curate::dedup
