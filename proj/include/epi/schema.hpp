#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "epi/checker.hpp"
#include "epi/search.hpp"

namespace epi {

enum class ProofSystem { RD, RCD };

/// Deliberately unsound variants of one schema, used to show the checker
/// can fail.
enum class Mutation {
    None,
    RD1Intersection,  // RD1 with D_{G∩H} in place of D_{G∪H}
    TDConverse,       // T_D replaced by its converse phi -> D_G phi
    C1Weakened,       // C1 with E_G phi in place of C_G phi on the left
};

std::string_view to_string(ProofSystem s);
std::string_view to_string(Mutation m);
std::optional<ProofSystem> parse_system(std::string_view text);
std::optional<Mutation> parse_mutation(std::string_view text);

struct SchemaViolation {
    /// The failing instance; for rules, the premises and conclusion.
    std::string instance;
    PointedModel point;
};

struct SchemaResult {
    std::string name;
    bool rule = false;
    std::size_t instances = 0;
    /// Rules only: (instance, model class or model) cases whose premises held.
    std::size_t premises_held = 0;
    std::size_t violations = 0;
    /// First violation in instance order.
    std::optional<SchemaViolation> first_violation;
};

struct SchemaReport {
    std::string title;
    std::vector<std::string> agents;
    std::vector<std::string> atoms;
    std::size_t max_states = 0;
    std::uint64_t models = 0;
    std::uint64_t seed = 0;
    std::vector<SchemaResult> results;

    std::size_t total_violations() const;
};

/// Instantiates every axiom schema of the system `instance_count` times
/// (seeded; side conditions respected) and checks each instance at every
/// point of every model within the bounds. Rules MP, N, N_R (and N_C, RR_C
/// for RCD) are checked for validity preservation over the same class.
/// Empty agents/atoms in the bounds default to {1,2} and {p}.
SchemaReport check_schema(ProofSystem system, const SearchBounds& bounds, Mutation mutation = Mutation::None);

/// Model-local RR_C: for every model M and seeded instance (phi, psi, H,
/// G_1..G_n with n <= 2), if phi -> (E_H phi & R_G1..R_Gn psi) holds at
/// every state of M, then so does phi -> R_G1..R_Gn C_H psi.
SchemaReport check_rule_rrc(const SearchBounds& bounds);

nlohmann::json to_json(const SchemaReport& r);
std::string to_text(const SchemaReport& r);

}  // namespace epi
