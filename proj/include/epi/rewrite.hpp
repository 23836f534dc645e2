#pragma once

#include <set>
#include <vector>

#include "epi/formula.hpp"

namespace epi {

/// Group index obtained when the relation of `core` is pushed through the
/// resolution sequence `prefix` (applied left to right, G_1 first).
/// The prefix is consumed right to left: starting from `core`, each G_k that
/// meets the accumulated group is merged into it.
Group delta(const Group& core, const std::vector<Group>& prefix);

/// One reduction step for R_{G_1}...R_{G_n} applied to K_i phi or D_H phi:
/// returns D_{delta(core, prefix)} R_{G_1}...R_{G_n} phi.
/// Throws std::invalid_argument for any other shape of `inner`.
Formula push_modal(const std::vector<Group>& prefix, const Formula& inner);

/// Innermost-first reduction to normal form. Removes every R operator from
/// formulas without common knowledge; R_G C_H blocks with overlapping groups
/// that are neither G-covered nor disjoint stay in place.
Formula reduce(const Formula& f);

/// Finite closure set used for filtration. Rejects announcements.
/// Sugar (Or, Implies, Iff, false) is expanded before closing.
std::set<Formula> closure(const Formula& f);

}  // namespace epi
