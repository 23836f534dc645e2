#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epi/checker.hpp"
#include "epi/formula.hpp"
#include "epi/model.hpp"

namespace epi {

struct SearchBounds {
    std::size_t max_states = 4;
    /// Empty means: the query formula's agents (or agent "1" if it has none).
    std::vector<std::string> agents;
    /// Empty means: the query formula's atoms.
    std::vector<std::string> atoms;
    std::uint64_t seed = 0;
    std::size_t instance_count = 200;
    /// Depth cap for generated schema instances.
    std::size_t depth = 2;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned threads = 0;
};

/// Every model with 1..max_states states named "0".."n-1", every agent
/// relation ranging over all partitions and every valuation, addressed by a
/// dense index. Order: by state count, then agent relations (first agent
/// most significant, partitions in restricted-growth order), then valuation
/// (bit state*|atoms|+atom of the low digits).
class ModelSpace {
public:
    ModelSpace(std::vector<std::string> agents, std::vector<std::string> atoms, std::size_t max_states);

    std::uint64_t size() const { return total_; }
    Model at(std::uint64_t index) const;

    const std::vector<std::string>& agents() const { return agents_; }
    const std::vector<std::string>& atoms() const { return atoms_; }
    std::size_t max_states() const { return max_states_; }

    /// Calls f on every model in order.
    void for_each(const std::function<void(const Model&)>& f) const;

private:
    struct Layer {
        std::uint64_t first;
        std::uint64_t count;
        std::uint64_t valuations;
        std::shared_ptr<const Vocabulary> vocab;
        std::vector<Partition> partitions;
    };

    std::vector<std::string> agents_;
    std::vector<std::string> atoms_;
    std::size_t max_states_;
    std::vector<Layer> layers_;
    std::uint64_t total_ = 0;
};

/// The enumeration for explicit bounds (agents and atoms as given).
ModelSpace enumerate_models(const SearchBounds& bounds);

/// Agents and atoms a query uses once bounds defaults are filled in.
std::vector<std::string> search_agents(const Formula& f, const SearchBounds& bounds);
std::vector<std::string> search_atoms(const Formula& f, const SearchBounds& bounds);

struct SearchOutcome {
    /// Set when a pointed model was found; otherwise the space up to
    /// max_states was exhausted (not a proof of anything beyond that bound).
    std::optional<PointedModel> witness;
    std::size_t max_states = 0;
    std::uint64_t models_examined = 0;

    bool found() const { return witness.has_value(); }
};

nlohmann::json to_json(const SearchOutcome& o);

/// First pointed model (lowest model index, then lowest state) satisfying f.
SearchOutcome find_model(const Formula& f, const SearchBounds& bounds);
/// First pointed model falsifying f.
SearchOutcome find_countermodel(const Formula& f, const SearchBounds& bounds);

/// Lowest index in [0, count) where pred holds, scanning in parallel;
/// the result does not depend on the thread count.
std::optional<std::uint64_t> parallel_find_first(std::uint64_t count, unsigned threads,
                                                 const std::function<bool(std::uint64_t)>& pred);

/// Runs body(i) for every i in [0, count) across worker threads.
void parallel_for(std::uint64_t count, unsigned threads, const std::function<void(std::uint64_t)>& body);

/// Every pseudo model over the given agents and atoms with 1..max_states
/// states: each base model of ModelSpace together with every choice of
/// relations for groups of two or more agents meeting the pseudo conditions.
void for_each_pseudo_model(const std::vector<std::string>& agents, const std::vector<std::string>& atoms,
                           std::size_t max_states, const std::function<void(const PreModel&)>& f);

}  // namespace epi
