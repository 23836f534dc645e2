#include "epi/bisim.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace epi {

namespace {

// One back-and-forth condition: `left` steps on the first structure are
// matched by `right` steps on the second (forth) and/or vice versa (back).
struct Clause {
    std::string label;
    Partition left;
    Partition right;
    bool forth;
    bool back;
};

class PairMatrix {
public:
    PairMatrix(std::size_t rows, std::size_t cols) : cols_(cols), bits_(rows * cols, false) {}
    bool get(std::size_t a, std::size_t b) const { return bits_[a * cols_ + b]; }
    void set(std::size_t a, std::size_t b, bool v) { bits_[a * cols_ + b] = v; }

private:
    std::size_t cols_;
    std::vector<bool> bits_;
};

std::string mask_label(const Vocabulary& v, GroupMask g)
{
    std::string out = "{";
    for (std::size_t i = 0; i < v.agents.size(); ++i)
        if (g & (GroupMask{1} << i)) {
            if (out.size() > 1)
                out += ',';
            out += v.agents[i];
        }
    return out + "}";
}

bool agree_on_atoms(const Model& a, std::size_t s, const Model& b, std::size_t t)
{
    std::set<std::string> names(a.atoms().begin(), a.atoms().end());
    names.insert(b.atoms().begin(), b.atoms().end());
    for (const auto& p : names)
        if (a.holds(p, s) != b.holds(p, t))
            return false;
    return true;
}

void require_same_agents(const Vocabulary& a, const Vocabulary& b)
{
    if (a.agents != b.agents)
        throw std::invalid_argument("structures have different agent sets");
}

std::vector<Clause> pre_clauses(const PreModel& a, const PreModel& b)
{
    require_same_agents(a.vocabulary(), b.vocabulary());
    std::vector<Clause> out;
    for (std::size_t i = 0; i < a.num_agents(); ++i)
        out.push_back({"agent " + a.vocabulary().agents[i], a.relation(i), b.relation(i), true, true});
    for (GroupMask g = 1; g < a.group_relations().size(); ++g)
        out.push_back({"group " + mask_label(a.vocabulary(), g), a.group_relation(g), b.group_relation(g), true, true});
    return out;
}

Partition join_all(const std::vector<const Partition*>& parts, std::size_t n)
{
    Partition out = Partition::discrete(n);
    for (const auto* p : parts)
        out = join(out, *p);
    return out;
}

std::vector<Clause> trans_clauses(const Model& m, const PreModel& n)
{
    require_same_agents(m.vocabulary(), n.vocabulary());
    std::vector<Clause> out;
    const std::size_t k = m.num_agents();
    const GroupMask groups = static_cast<GroupMask>(n.group_relations().size());
    for (std::size_t i = 0; i < k; ++i) {
        const GroupMask bit = GroupMask{1} << i;
        std::vector<const Partition*> parts{&n.relation(i)};
        for (GroupMask g = 1; g < groups; ++g)
            if (g & bit)
                parts.push_back(&n.group_relation(g));
        const std::string& name = m.agents()[i];
        out.push_back({"zig agent " + name, m.relation(i), join_all(parts, n.num_states()), true, false});
        out.push_back({"zag agent " + name, m.relation(i), n.relation(i), false, true});
    }
    for (GroupMask g = 1; g < groups; ++g) {
        const std::string label = mask_label(m.vocabulary(), g);
        if (std::popcount(g) >= 2) {
            std::vector<const Partition*> parts;
            for (GroupMask h = 1; h < groups; ++h)
                if ((h & g) == g)
                    parts.push_back(&n.group_relation(h));
            out.push_back({"zig group " + label, group_relation(m, g), join_all(parts, n.num_states()), true, false});
        }
        out.push_back({"zag group " + label, group_relation(m, g), n.group_relation(g), false, true});
    }
    return out;
}

// reach[x * blocks + B]: some state of block B of `p` is related to x by z.
std::vector<bool> forth_reach(const PairMatrix& z, std::size_t rows, const Partition& p)
{
    std::vector<bool> reach(rows * p.block_count(), false);
    for (std::size_t x = 0; x < rows; ++x)
        for (std::size_t y = 0; y < p.size(); ++y)
            if (z.get(x, y))
                reach[x * p.block_count() + p.block_of(y)] = true;
    return reach;
}

std::vector<bool> back_reach(const PairMatrix& z, std::size_t cols, const Partition& p)
{
    std::vector<bool> reach(cols * p.block_count(), false);
    for (std::size_t x = 0; x < p.size(); ++x)
        for (std::size_t y = 0; y < cols; ++y)
            if (z.get(x, y))
                reach[y * p.block_count() + p.block_of(x)] = true;
    return reach;
}

// First failing condition of pair (x, y), or nullopt.
std::optional<std::string> failing(const std::vector<Clause>& clauses, const std::vector<std::vector<bool>>& forth,
                                   const std::vector<std::vector<bool>>& back, std::size_t x, std::size_t y)
{
    for (std::size_t c = 0; c < clauses.size(); ++c) {
        const auto& cl = clauses[c];
        if (cl.forth) {
            const std::size_t blocks = cl.right.block_count();
            for (auto x2 : cl.left.block_members(x))
                if (!forth[c][x2 * blocks + cl.right.block_of(y)])
                    return "forth " + cl.label;
        }
        if (cl.back) {
            const std::size_t blocks = cl.left.block_count();
            for (auto y2 : cl.right.block_members(y))
                if (!back[c][y2 * blocks + cl.left.block_of(x)])
                    return "back " + cl.label;
        }
    }
    return std::nullopt;
}

void compute_reach(const std::vector<Clause>& clauses, const PairMatrix& z, std::size_t rows, std::size_t cols,
                   std::vector<std::vector<bool>>& forth, std::vector<std::vector<bool>>& back)
{
    forth.assign(clauses.size(), {});
    back.assign(clauses.size(), {});
    for (std::size_t c = 0; c < clauses.size(); ++c) {
        if (clauses[c].forth)
            forth[c] = forth_reach(z, rows, clauses[c].right);
        if (clauses[c].back)
            back[c] = back_reach(z, cols, clauses[c].left);
    }
}

Relation to_relation(const PairMatrix& z, std::size_t rows, std::size_t cols)
{
    Relation r;
    for (std::size_t x = 0; x < rows; ++x)
        for (std::size_t y = 0; y < cols; ++y)
            if (z.get(x, y))
                r.pairs.emplace_back(x, y);
    return r;
}

// Greatest fixpoint below atom agreement; pairs are revisited in sorted
// order and the reachability tables rebuilt after every sweep.
Relation largest(const Model& a, const Model& b, const std::vector<Clause>& clauses)
{
    const std::size_t rows = a.num_states();
    const std::size_t cols = b.num_states();
    PairMatrix z(rows, cols);
    for (std::size_t x = 0; x < rows; ++x)
        for (std::size_t y = 0; y < cols; ++y)
            z.set(x, y, agree_on_atoms(a, x, b, y));

    std::vector<std::vector<bool>> forth, back;
    for (bool changed = true; changed;) {
        changed = false;
        compute_reach(clauses, z, rows, cols, forth, back);
        for (std::size_t x = 0; x < rows; ++x)
            for (std::size_t y = 0; y < cols; ++y)
                if (z.get(x, y) && failing(clauses, forth, back, x, y)) {
                    z.set(x, y, false);
                    changed = true;
                }
    }
    return to_relation(z, rows, cols);
}

std::vector<std::string> violations(const Model& a, const Model& b, const std::vector<Clause>& clauses,
                                    const Relation& r)
{
    const std::size_t rows = a.num_states();
    const std::size_t cols = b.num_states();
    std::vector<std::string> out;
    PairMatrix z(rows, cols);
    for (auto [x, y] : r.pairs) {
        if (x >= rows || y >= cols) {
            out.push_back("pair out of range");
            return out;
        }
        z.set(x, y, true);
    }
    std::vector<std::vector<bool>> forth, back;
    compute_reach(clauses, z, rows, cols, forth, back);
    for (auto [x, y] : r.pairs) {
        const std::string at = " at (" + a.states()[x] + "," + b.states()[y] + ")";
        if (!agree_on_atoms(a, x, b, y))
            out.push_back("atoms disagree" + at);
        else if (auto f = failing(clauses, forth, back, x, y))
            out.push_back(*f + " fails" + at);
    }
    return out;
}

}  // namespace

bool Relation::contains(std::size_t left, std::size_t right) const
{
    return std::binary_search(pairs.begin(), pairs.end(), std::pair{left, right});
}

nlohmann::json to_json(const Relation& z, const Vocabulary& left, const Vocabulary& right)
{
    auto out = nlohmann::json::array();
    for (auto [x, y] : z.pairs)
        out.push_back({left.states.at(x), right.states.at(y)});
    return out;
}

std::optional<Relation> bisimilar_pre(const PreModel& a, std::size_t s, const PreModel& b, std::size_t t)
{
    Relation z = largest(a.base(), b.base(), pre_clauses(a, b));
    if (!z.contains(s, t))
        return std::nullopt;
    return z;
}

std::vector<std::string> bisimulation_violations(const PreModel& a, const PreModel& b, const Relation& z)
{
    return violations(a.base(), b.base(), pre_clauses(a, b), z);
}

std::optional<Relation> trans_bisimilar(const Model& m, std::size_t s, const PreModel& n, std::size_t t)
{
    Relation z = largest(m, n.base(), trans_clauses(m, n));
    if (!z.contains(s, t))
        return std::nullopt;
    return z;
}

std::vector<std::string> trans_bisimulation_violations(const Model& m, const PreModel& n, const Relation& z)
{
    return violations(m, n.base(), trans_clauses(m, n), z);
}

PreModel duplicate_state(const PreModel& p, std::size_t x)
{
    const Vocabulary& v = p.vocabulary();
    if (x >= v.states.size())
        throw std::out_of_range("unknown state");
    auto vocab = std::make_shared<Vocabulary>(v);
    std::string name = v.states[x] + "'";
    while (vocab->state_index(name))
        name += "'";
    vocab->states.push_back(name);

    std::vector<StateSet> valuation = p.base().valuations();
    for (auto& ext : valuation)
        ext.push_back(ext[x]);
    std::vector<Partition> relations;
    for (const auto& r : p.base().relations())
        relations.push_back(with_duplicate(r, x));
    std::vector<Partition> groups(p.group_relations().size());
    for (std::size_t g = 1; g < groups.size(); ++g)
        groups[g] = with_duplicate(p.group_relations()[g], x);
    return PreModel(Model(std::move(vocab), std::move(valuation), std::move(relations)), std::move(groups));
}

PreModel duplicate_state(const PreModel& p, std::string_view x)
{
    auto i = p.vocabulary().state_index(x);
    if (!i)
        throw std::out_of_range("unknown state " + std::string(x));
    return duplicate_state(p, *i);
}

}  // namespace epi
