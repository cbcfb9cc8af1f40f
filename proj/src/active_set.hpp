#pragma once

#include <algorithm>
#include <cmath>

#include "mmf/matcore.hpp"
#include "mmf/random.hpp"

namespace mmf::detail {

// Indices still eligible for rotation. Removal is O(1); positional order is
// an implementation detail but deterministic.
class ActiveSet
{
public:
    explicit ActiveSet(index_t n) : flag_(static_cast<std::size_t>(n), 1), list_(static_cast<std::size_t>(n))
    {
        for (index_t k = 0; k < n; ++k)
            list_[static_cast<std::size_t>(k)] = k;
        pos_ = list_;
    }

    index_t size() const { return static_cast<index_t>(list_.size()); }
    bool    contains(index_t k) const { return flag_[static_cast<std::size_t>(k)] != 0; }

    const std::vector<index_t> &members() const { return list_; }

    index_t pick(Rng &rng) const { return list_[rng.uniform_index(list_.size())]; }

    void remove(index_t k)
    {
        const auto p    = static_cast<std::size_t>(pos_[static_cast<std::size_t>(k)]);
        const auto last = list_.back();
        list_[p]        = last;
        pos_[static_cast<std::size_t>(last)] = static_cast<index_t>(p);
        list_.pop_back();
        flag_[static_cast<std::size_t>(k)] = 0;
    }

    IndexSet sorted(index_t n) const
    {
        auto v = list_;
        std::sort(v.begin(), v.end());
        return {n, std::move(v)};
    }

private:
    std::vector<char>    flag_;
    std::vector<index_t> list_;
    std::vector<index_t> pos_;
};

// j maximizing |g| over candidates other than i; ties go to the smallest index
inline index_t argmax_partner(const std::vector<index_t> &candidates, const std::vector<double> &g, index_t i)
{
    index_t best = -1;
    double  gb   = 0.0;
    for (auto k : candidates)
    {
        if (k == i)
            continue;
        const double v = std::abs(g[static_cast<std::size_t>(k)]);
        if (best < 0 || v > gb || (v == gb && k < best))
            best = k, gb = v;
    }
    return best;
}

}// namespace mmf::detail
