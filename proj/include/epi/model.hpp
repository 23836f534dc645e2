#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "epi/formula.hpp"
#include "epi/partition.hpp"

namespace epi {

/// Bitmask over a model's agents (bit i = i-th agent in canonical order).
using GroupMask = std::uint32_t;

/// Names shared by a model and every update derived from it.
struct Vocabulary {
    std::vector<std::string> states;
    std::vector<std::string> agents;  // canonical agent order
    std::vector<std::string> atoms;   // sorted

    std::optional<std::size_t> state_index(std::string_view name) const;
    std::optional<std::size_t> agent_index(std::string_view name) const;
    std::optional<std::size_t> atom_index(std::string_view name) const;
};

/// Name-based model as read from or written to files. Blocks are lists of
/// state names; `group_relations` is keyed by comma-joined group keys and
/// its presence makes the description a pre-model.
struct ModelDescription {
    std::vector<std::string> agents;
    std::vector<std::string> props;
    std::vector<std::string> states;
    std::map<std::string, std::vector<std::vector<std::string>>> relations;
    std::map<std::string, std::vector<std::string>> valuation;
    std::optional<std::map<std::string, std::vector<std::vector<std::string>>>> group_relations;
};

/// Structural problems in a description; an empty list means it is a
/// well-formed model (or pre-model). For pre-models, failed pseudo-model
/// conditions are appended with a "pseudo: " prefix.
std::vector<std::string> validate(const ModelDescription& d);

class ModelError : public std::runtime_error {
public:
    explicit ModelError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Finite S5 Kripke model: one partition per agent plus a valuation.
class Model {
public:
    Model(std::shared_ptr<const Vocabulary> vocab, std::vector<StateSet> valuation,
          std::vector<Partition> relations);

    /// Throws ModelError listing every structural violation.
    static Model from_description(const ModelDescription& d);

    const Vocabulary& vocabulary() const { return *vocab_; }
    const std::shared_ptr<const Vocabulary>& shared_vocabulary() const { return vocab_; }
    std::size_t num_states() const { return vocab_->states.size(); }
    std::size_t num_agents() const { return vocab_->agents.size(); }
    const std::vector<std::string>& states() const { return vocab_->states; }
    const std::vector<std::string>& agents() const { return vocab_->agents; }
    const std::vector<std::string>& atoms() const { return vocab_->atoms; }

    std::size_t state(std::string_view name) const;
    const Partition& relation(std::size_t agent) const { return relations_[agent]; }
    const Partition& relation(std::string_view agent) const;
    const std::vector<Partition>& relations() const { return relations_; }
    const StateSet& valuation(std::size_t atom) const { return valuation_[atom]; }
    const std::vector<StateSet>& valuations() const { return valuation_; }
    /// Truth of a named atom; atoms outside the vocabulary are false everywhere.
    bool holds(std::string_view atom, std::size_t state) const;

    /// Throws std::invalid_argument for agents the model does not declare.
    GroupMask mask(const Group& g) const;
    GroupMask all_agents_mask() const;
    Group group(GroupMask mask) const;

    ModelDescription describe() const;

    friend bool operator==(const Model& a, const Model& b);

private:
    std::shared_ptr<const Vocabulary> vocab_;
    std::vector<StateSet> valuation_;
    std::vector<Partition> relations_;
};

/// Kripke structure with independent relations for every non-empty group.
class PreModel {
public:
    /// `group_relations` is indexed by mask; entry 0 is unused.
    PreModel(Model base, std::vector<Partition> group_relations);

    /// Groups missing from the description default to the intersection of
    /// their members' relations.
    static PreModel from_description(const ModelDescription& d);

    const Model& base() const { return base_; }
    const Vocabulary& vocabulary() const { return base_.vocabulary(); }
    std::size_t num_states() const { return base_.num_states(); }
    std::size_t num_agents() const { return base_.num_agents(); }
    const Partition& relation(std::size_t agent) const { return base_.relation(agent); }
    const Partition& group_relation(GroupMask g) const { return groups_.at(g); }
    const Partition& group_relation(const Group& g) const { return groups_.at(base_.mask(g)); }
    const std::vector<Partition>& group_relations() const { return groups_; }
    GroupMask mask(const Group& g) const { return base_.mask(g); }

    ModelDescription describe() const;

    friend bool operator==(const PreModel&, const PreModel&) = default;

private:
    Model base_;
    std::vector<Partition> groups_;
};

/// ∼_G: intersection of the members' relations.
Partition group_relation(const Model& m, const Group& g);
Partition group_relation(const Model& m, GroupMask g);

/// Closure of the union of the members' relations (agent-indexed relations
/// for pre-models).
Partition common_relation(const Model& m, const Group& g);
Partition common_relation(const Model& m, GroupMask g);
Partition common_relation(const PreModel& m, const Group& g);
Partition common_relation(const PreModel& m, GroupMask g);

/// Global G-resolved update: members of g get the group relation.
Model resolve(const Model& m, const Group& g);
Model resolve(const Model& m, GroupMask g);

/// Pseudo-model update: agents in g get ∽_g; a group H meeting g gets ∽_{H∪g}.
PreModel resolve_pre(const PreModel& p, const Group& g);
PreModel resolve_pre(const PreModel& p, GroupMask g);

/// Canonical embedding: every group relation is the intersection.
PreModel as_premodel(const Model& m);

/// Relation of `target` after resolving by gs in sequence, computed directly
/// as the relation of delta(target, gs).
Partition iterated_relation(const Model& m, const std::vector<Group>& gs, const Group& target);
Partition iterated_relation(const PreModel& p, const std::vector<Group>& gs, const Group& target);

/// Submodel on `keep`. Throws std::invalid_argument for an empty or unknown set.
Model restrict(const Model& m, const StateSet& keep);

/// Failed pseudo-model conditions, e.g. "pseudo: monotonicity violated for {1}⊆{1,2}".
std::vector<std::string> pseudo_violations(const PreModel& p);
inline bool is_pseudo(const PreModel& p) { return pseudo_violations(p).empty(); }

}  // namespace epi
