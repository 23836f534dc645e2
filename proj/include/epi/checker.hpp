#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epi/formula.hpp"
#include "epi/model.hpp"

namespace epi {

struct PointedModel {
    Model model;
    std::size_t state;

    const std::string& state_name() const { return model.states()[state]; }
};

/// A formula bound to a fixed agent and atom ordering, ready to be evaluated
/// over many structures sharing that vocabulary.
class CompiledFormula {
public:
    /// Throws std::invalid_argument when f mentions an agent not in `agents`.
    /// Atoms missing from `atoms` evaluate to false.
    CompiledFormula(const Formula& f, std::vector<std::string> agents, std::vector<std::string> atoms);

    /// The model's agents and atoms must match the compiled ones.
    StateSet extension(const Model& m) const;
    /// Pseudo semantics; throws std::invalid_argument on announcements.
    StateSet extension(const PreModel& p) const;

    struct Node {
        Op op;
        std::uint32_t index;  // atom index, agent index, or none
        GroupMask group;
        std::int32_t left;
        std::int32_t right;
    };

private:
    void check_vocabulary(const Vocabulary& v) const;

    std::vector<Node> nodes_;
    std::int32_t root_;
    std::vector<std::string> agents_;
    std::vector<std::string> atoms_;
    bool has_announcement_ = false;
};

StateSet extension(const Model& m, const Formula& f);
StateSet extension_pseudo(const PreModel& p, const Formula& f);

/// State names of a set, in model order.
std::vector<std::string> state_names(const Model& m, const StateSet& s);

bool satisfies(const Model& m, std::size_t state, const Formula& f);
bool satisfies(const Model& m, std::string_view state, const Formula& f);
bool satisfies_pseudo(const PreModel& p, std::size_t state, const Formula& f);
bool satisfies_pseudo(const PreModel& p, std::string_view state, const Formula& f);

/// First point where f and g disagree, or nullopt when they agree everywhere.
std::optional<PointedModel> equivalent_on(std::span<const PointedModel> points, const Formula& f,
                                          const Formula& g);

/// Every point of each model.
std::vector<PointedModel> all_points(std::span<const Model> models);

}  // namespace epi
