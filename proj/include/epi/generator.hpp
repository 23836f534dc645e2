#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "epi/formula.hpp"

namespace epi {

struct GeneratorOptions {
    std::vector<std::string> agents{"1", "2"};
    std::vector<std::string> atoms{"p"};
    /// Maximum nesting depth of connectives above the leaves.
    std::size_t max_depth = 2;
    /// K_i; turn off together with the group operators for propositional formulas.
    bool knowledge = true;
    bool distributed = true;
    bool common = false;
    bool resolution = true;
    bool announcement = false;
    /// Or, Implies and Iff in addition to Not and And.
    bool sugar = true;
};

/// Seeded random formulas. The same options and seed always give the same
/// sequence.
class FormulaGenerator {
public:
    FormulaGenerator(GeneratorOptions options, std::uint64_t seed);

    Formula next();
    Formula next(std::size_t depth);

    /// Uniform non-empty subset of the agents.
    Group group();
    /// Group containing every member of `base`.
    Group supergroup(const Group& base);
    const std::string& agent();
    std::uint64_t below(std::uint64_t n);

    const GeneratorOptions& options() const { return options_; }

private:
    Formula leaf();

    GeneratorOptions options_;
    std::mt19937_64 rng_;
    std::vector<Op> ops_;
};

}  // namespace epi
