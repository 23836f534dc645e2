#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "epi/model.hpp"

namespace epi {

/// A relation between the states of two structures, as sorted index pairs.
struct Relation {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    bool contains(std::size_t left, std::size_t right) const;
    std::size_t size() const { return pairs.size(); }
    friend bool operator==(const Relation&, const Relation&) = default;
};

/// Pairs as [left name, right name] arrays.
nlohmann::json to_json(const Relation& z, const Vocabulary& left, const Vocabulary& right);

/// Largest pre-model bisimulation between a and b over the labels AG ∪ GR,
/// returned when it links (s, t). Requires identical agent lists; atoms are
/// compared by name, absent atoms being false.
std::optional<Relation> bisimilar_pre(const PreModel& a, std::size_t s, const PreModel& b, std::size_t t);

/// Clause failures of `z` as a pre-model bisimulation; empty when it is one.
std::vector<std::string> bisimulation_violations(const PreModel& a, const PreModel& b, const Relation& z);

/// Largest trans-bisimulation between model m and pre-model n, returned when
/// it links (s, t). Path conditions use the transitive closure of the unions
/// named by the zig clauses.
std::optional<Relation> trans_bisimilar(const Model& m, std::size_t s, const PreModel& n, std::size_t t);

/// Clause failures of `z` as a trans-bisimulation; empty when it is one.
std::vector<std::string> trans_bisimulation_violations(const Model& m, const PreModel& n, const Relation& z);

/// Adds a copy x' of state x to every block containing x (agent and group
/// relations alike). The new state is last and named x followed by primes
/// until fresh. Throws std::out_of_range for an unknown state.
PreModel duplicate_state(const PreModel& p, std::size_t x);
PreModel duplicate_state(const PreModel& p, std::string_view x);

}  // namespace epi
