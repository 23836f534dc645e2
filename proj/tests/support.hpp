#pragma once

// Fixtures and brute-force oracles shared by the test binaries. The oracles
// work on explicit pair sets and never call the partition algorithms they
// are used to check.

#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "epi/bisim.hpp"
#include "epi/checker.hpp"
#include "epi/formula.hpp"
#include "epi/generator.hpp"
#include "epi/model.hpp"
#include "epi/model_io.hpp"
#include "epi/parser.hpp"
#include "epi/rewrite.hpp"
#include "epi/search.hpp"

namespace epi::test {

inline std::filesystem::path data_path(const std::string& name)
{
    return std::filesystem::path(EPI_DATA_DIR) / name;
}

inline ModelDescription fig1_description()
{
    ModelDescription d;
    d.agents = {"1", "2"};
    d.props = {"p"};
    d.states = {"s", "t", "u", "v", "w"};
    d.relations["1"] = {{"s", "t", "v", "w"}, {"u"}};
    d.relations["2"] = {{"t", "u", "v"}, {"s"}, {"w"}};
    d.valuation["p"] = {"t", "v", "w"};
    return d;
}

inline Model fig1() { return Model::from_description(fig1_description()); }

inline Model core()
{
    ModelDescription d = fig1_description();
    d.relations["1"] = {{"t", "v"}, {"s"}, {"u"}, {"w"}};
    d.relations["2"] = {{"t", "v"}, {"s"}, {"u"}, {"w"}};
    return Model::from_description(d);
}

inline Formula f(const std::string& text, std::vector<std::string> agents = {"1", "2", "3"})
{
    return parse(text, AgentSet(agents.begin(), agents.end()));
}

inline Group g(const std::string& key) { return parse_group(key); }

// ---------------------------------------------------------------------------
// Pair-set oracles

using Pairs = std::set<std::pair<std::size_t, std::size_t>>;

inline Pairs pairs_of(const Partition& p)
{
    Pairs out;
    for (std::size_t a = 0; a < p.size(); ++a)
        for (std::size_t b = 0; b < p.size(); ++b)
            if (p.related(a, b))
                out.emplace(a, b);
    return out;
}

inline Pairs intersect_pairs(const Pairs& a, const Pairs& b)
{
    Pairs out;
    for (const auto& e : a)
        if (b.contains(e))
            out.insert(e);
    return out;
}

/// Reflexive-transitive closure by iterated relational composition.
inline Pairs closure_pairs(Pairs r, std::size_t n)
{
    for (std::size_t s = 0; s < n; ++s)
        r.emplace(s, s);
    for (bool changed = true; changed;) {
        changed = false;
        Pairs next = r;
        for (const auto& [a, b] : r)
            for (const auto& [c, d] : r)
                if (b == c && next.emplace(a, d).second)
                    changed = true;
        r = std::move(next);
    }
    return r;
}

inline Pairs oracle_group_relation(const Model& m, const Group& grp)
{
    Pairs out;
    bool first = true;
    for (const auto& a : grp.members()) {
        Pairs r = pairs_of(m.relation(a));
        out = first ? r : intersect_pairs(out, r);
        first = false;
    }
    return out;
}

inline Pairs oracle_common_relation(const Model& m, const Group& grp)
{
    Pairs u;
    for (const auto& a : grp.members())
        for (const auto& e : pairs_of(m.relation(a)))
            u.insert(e);
    return closure_pairs(u, m.num_states());
}

/// Resolves a pre-model by each group in turn.
inline PreModel sequential(PreModel p, const std::vector<Group>& gs)
{
    for (const auto& grp : gs)
        p = resolve_pre(p, grp);
    return p;
}

/// Every non-empty group over `agents`.
inline std::vector<Group> all_groups(const std::vector<std::string>& agents)
{
    std::vector<Group> out;
    for (std::size_t mask = 1; mask < (std::size_t{1} << agents.size()); ++mask) {
        std::vector<std::string> members;
        for (std::size_t i = 0; i < agents.size(); ++i)
            if (mask & (std::size_t{1} << i))
                members.push_back(agents[i]);
        out.emplace_back(std::move(members));
    }
    return out;
}

/// Every sequence of at most `max_len` groups drawn from `groups`.
inline std::vector<std::vector<Group>> all_sequences(const std::vector<Group>& groups, std::size_t max_len)
{
    std::vector<std::vector<Group>> out{{}};
    std::vector<std::vector<Group>> frontier{{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::vector<Group>> next;
        for (const auto& seq : frontier)
            for (const auto& grp : groups) {
                auto s = seq;
                s.push_back(grp);
                next.push_back(s);
            }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

inline std::vector<Model> models(std::vector<std::string> agents, std::vector<std::string> atoms,
                                 std::size_t max_states)
{
    ModelSpace space(std::move(agents), std::move(atoms), max_states);
    std::vector<Model> out;
    out.reserve(space.size());
    space.for_each([&](const Model& m) { out.push_back(m); });
    return out;
}

/// Generator for formulas in a named fragment.
inline FormulaGenerator generator(std::vector<std::string> agents, std::size_t depth, bool common,
                                  std::uint64_t seed, bool announcement = false)
{
    GeneratorOptions o;
    o.agents = std::move(agents);
    o.atoms = {"p"};
    o.max_depth = depth;
    o.common = common;
    o.announcement = announcement;
    return FormulaGenerator(o, seed);
}

/// First (model, state) where f and g differ, as "model index/state", or "".
inline std::string first_difference(const std::vector<Model>& ms, const Formula& a, const Formula& b)
{
    if (ms.empty())
        return "";
    CompiledFormula ca(a, ms.front().agents(), ms.front().atoms());
    CompiledFormula cb(b, ms.front().agents(), ms.front().atoms());
    for (std::size_t i = 0; i < ms.size(); ++i) {
        StateSet x = ca.extension(ms[i]);
        StateSet y = cb.extension(ms[i]);
        for (std::size_t s = 0; s < x.size(); ++s)
            if (x[s] != y[s])
                return "model " + std::to_string(i) + " state " + std::to_string(s);
    }
    return "";
}

/// True when f holds at every point of every model.
inline bool valid_on(const std::vector<Model>& ms, const Formula& a)
{
    return first_difference(ms, a, top()).empty();
}

}  // namespace epi::test
