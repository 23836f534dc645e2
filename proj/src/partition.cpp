#include "epi/partition.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <stdexcept>

namespace epi {

namespace {

constexpr std::uint32_t kUnset = ~std::uint32_t{0};

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void merge(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

Partition Partition::discrete(std::size_t n)
{
    std::vector<std::uint32_t> labels(n);
    std::iota(labels.begin(), labels.end(), std::uint32_t{0});
    return Partition(std::move(labels), n);
}

Partition Partition::total(std::size_t n)
{
    return Partition(std::vector<std::uint32_t>(n, 0), n == 0 ? 0 : 1);
}

Partition Partition::from_labels(std::span<const std::uint32_t> labels)
{
    std::vector<std::uint32_t> out(labels.size());
    std::uint32_t next = 0;
    std::uint32_t max_raw = 0;
    for (auto l : labels)
        max_raw = std::max(max_raw, l);
    if (max_raw <= 4 * labels.size() + 64) {
        std::vector<std::uint32_t> canon(std::size_t{max_raw} + 1, kUnset);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            auto& c = canon[labels[i]];
            if (c == kUnset)
                c = next++;
            out[i] = c;
        }
    } else {
        std::unordered_map<std::uint32_t, std::uint32_t> canon;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            auto [it, fresh] = canon.try_emplace(labels[i], next);
            if (fresh)
                ++next;
            out[i] = it->second;
        }
    }
    return Partition(std::move(out), next);
}

Partition Partition::from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks)
{
    std::vector<std::uint32_t> raw(n, kUnset);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (auto s : blocks[b]) {
            if (s >= n || raw[s] != kUnset)
                throw std::invalid_argument("blocks are not a partition");
            raw[s] = static_cast<std::uint32_t>(b);
        }
    for (auto r : raw)
        if (r == kUnset)
            throw std::invalid_argument("blocks do not cover every state");
    return from_labels(raw);
}

std::vector<std::vector<std::size_t>> Partition::blocks() const
{
    std::vector<std::vector<std::size_t>> out(block_count_);
    for (std::size_t s = 0; s < labels_.size(); ++s)
        out[labels_[s]].push_back(s);
    return out;
}

std::vector<std::size_t> Partition::block_members(std::size_t s) const
{
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < labels_.size(); ++t)
        if (labels_[t] == labels_[s])
            out.push_back(t);
    return out;
}

bool Partition::refines(const Partition& coarser) const
{
    if (coarser.size() != size())
        throw std::invalid_argument("partitions over different state counts");
    std::vector<std::uint32_t> image(block_count_, kUnset);
    for (std::size_t s = 0; s < labels_.size(); ++s) {
        auto& img = image[labels_[s]];
        if (img == kUnset)
            img = coarser.labels_[s];
        else if (img != coarser.labels_[s])
            return false;
    }
    return true;
}

Partition meet(const Partition& a, const Partition& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("partitions over different state counts");
    // Pair labels fit in 32 bits for any realistic state count; from_labels
    // falls back to hashing when they are sparse.
    std::vector<std::uint32_t> raw(a.size());
    auto width = static_cast<std::uint32_t>(b.block_count());
    for (std::size_t s = 0; s < a.size(); ++s)
        raw[s] = a.block_of(s) * width + b.block_of(s);
    return Partition::from_labels(raw);
}

Partition join(const Partition& a, const Partition& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("partitions over different state counts");
    DisjointSets sets(a.size());
    std::vector<std::size_t> first_a(a.block_count(), a.size()), first_b(b.block_count(), b.size());
    for (std::size_t s = 0; s < a.size(); ++s) {
        auto& fa = first_a[a.block_of(s)];
        if (fa == a.size())
            fa = s;
        else
            sets.merge(fa, s);
        auto& fb = first_b[b.block_of(s)];
        if (fb == b.size())
            fb = s;
        else
            sets.merge(fb, s);
    }
    std::vector<std::uint32_t> raw(a.size());
    for (std::size_t s = 0; s < a.size(); ++s)
        raw[s] = static_cast<std::uint32_t>(sets.find(s));
    return Partition::from_labels(raw);
}

Partition restrict(const Partition& p, std::span<const std::size_t> keep)
{
    std::vector<std::uint32_t> raw;
    raw.reserve(keep.size());
    for (auto s : keep)
        raw.push_back(p.block_of(s));
    return Partition::from_labels(raw);
}

Partition with_duplicate(const Partition& p, std::size_t twin)
{
    std::vector<std::uint32_t> raw = p.labels();
    raw.push_back(p.block_of(twin));
    return Partition::from_labels(raw);
}

StateSet box(const Partition& p, const StateSet& set)
{
    std::vector<bool> block_ok(p.block_count(), true);
    for (std::size_t s = 0; s < p.size(); ++s)
        if (!set[s])
            block_ok[p.block_of(s)] = false;
    StateSet out(p.size());
    for (std::size_t s = 0; s < p.size(); ++s)
        out[s] = block_ok[p.block_of(s)];
    return out;
}

std::vector<Partition> all_partitions(std::size_t n)
{
    std::vector<Partition> out;
    if (n == 0) {
        out.push_back(Partition::discrete(0));
        return out;
    }
    // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
    std::vector<std::uint32_t> a(n, 0), maxes(n, 0);
    while (true) {
        out.push_back(Partition::from_labels(a));
        std::size_t i = n - 1;
        while (i > 0 && a[i] == maxes[i - 1] + 1)
            --i;
        if (i == 0)
            break;
        ++a[i];
        maxes[i] = std::max(maxes[i - 1], a[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            a[j] = 0;
            maxes[j] = maxes[i];
        }
    }
    return out;
}

std::uint64_t bell_number(std::size_t n)
{
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (auto v : row)
            next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

}  // namespace epi
