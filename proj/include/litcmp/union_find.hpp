#pragma once
#include <cstddef>
#include <numeric>
#include <vector>

namespace litcmp {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return;
        if (rank_[x] < rank_[y]) std::swap(x, y);
        parent_[y] = x;
        if (rank_[x] == rank_[y]) ++rank_[x];
    }

    bool connected(std::size_t x, std::size_t y) { return find(x) == find(y); }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

}  // namespace litcmp
