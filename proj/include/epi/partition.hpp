#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace epi {

/// Set of state indices over a fixed universe 0..n-1.
using StateSet = std::vector<bool>;

/// An equivalence relation on states 0..n-1, stored as one block label per
/// state. Labels are canonical (numbered by first occurrence), so two
/// partitions are equal iff their label vectors are equal.
class Partition {
public:
    Partition() = default;

    static Partition discrete(std::size_t n);
    static Partition total(std::size_t n);
    /// Canonicalizes arbitrary labels.
    static Partition from_labels(std::span<const std::uint32_t> labels);
    /// Blocks must be disjoint and cover 0..n-1.
    static Partition from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks);

    std::size_t size() const { return labels_.size(); }
    std::size_t block_count() const { return block_count_; }
    std::uint32_t block_of(std::size_t s) const { return labels_[s]; }
    bool related(std::size_t a, std::size_t b) const { return labels_[a] == labels_[b]; }
    const std::vector<std::uint32_t>& labels() const { return labels_; }

    /// Blocks in label order; each block sorted ascending.
    std::vector<std::vector<std::size_t>> blocks() const;
    std::vector<std::size_t> block_members(std::size_t s) const;

    /// True when every block of *this lies inside a block of `coarser`,
    /// i.e. this relation is a subset of `coarser`.
    bool refines(const Partition& coarser) const;

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition& a, const Partition& b) { return a.labels_ <=> b.labels_; }

private:
    explicit Partition(std::vector<std::uint32_t> canonical, std::size_t blocks)
        : labels_(std::move(canonical)), block_count_(blocks)
    {}

    std::vector<std::uint32_t> labels_;
    std::size_t block_count_ = 0;
};

/// Intersection of two equivalence relations (common refinement).
Partition meet(const Partition& a, const Partition& b);

/// Transitive closure of the union of two equivalence relations.
Partition join(const Partition& a, const Partition& b);

/// Relation restricted to the states in `keep` (ascending), renumbered 0..k-1.
Partition restrict(const Partition& p, std::span<const std::size_t> keep);

/// Partition of 0..n-1 extended with a state n that joins the block of `twin`.
Partition with_duplicate(const Partition& p, std::size_t twin);

/// States whose whole block lies inside `set` ("box" over the relation).
StateSet box(const Partition& p, const StateSet& set);

/// Every partition of 0..n-1, in restricted-growth-string order.
std::vector<Partition> all_partitions(std::size_t n);

/// Number of partitions of an n-set.
std::uint64_t bell_number(std::size_t n);

}  // namespace epi
