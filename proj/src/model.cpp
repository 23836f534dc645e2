#include "epi/model.hpp"

#include <algorithm>
#include <set>

#include "epi/rewrite.hpp"

namespace epi {

namespace {

constexpr std::size_t kMaxModelAgents = 32;
constexpr std::size_t kMaxPreModelAgents = 16;

template <class Names>
std::optional<std::size_t> index_in(const Names& names, std::string_view name)
{
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

std::string join_names(const std::vector<std::string>& names)
{
    std::string out;
    for (const auto& n : names) {
        if (!out.empty())
            out += ',';
        out += n;
    }
    return out;
}

// Checks one relation given as blocks of names; `what` names it in messages.
void check_blocks(const std::string& what, const std::vector<std::vector<std::string>>& blocks,
                  const std::vector<std::string>& states, std::vector<std::string>& out)
{
    std::set<std::string> seen;
    std::set<std::string> declared(states.begin(), states.end());
    std::vector<std::string> overlaps;
    for (const auto& block : blocks) {
        if (block.empty())
            out.push_back(what + " partition has an empty block");
        for (const auto& s : block) {
            if (!declared.contains(s))
                out.push_back(what + " partition mentions unknown state " + s);
            else if (!seen.insert(s).second)
                overlaps.push_back(s);
        }
    }
    if (!overlaps.empty())
        out.push_back(what + " partition has overlapping blocks at " + join_names(overlaps));
    std::vector<std::string> missing;
    for (const auto& s : states)
        if (!seen.contains(s))
            missing.push_back(s);
    if (!missing.empty())
        out.push_back(what + " partition does not cover " + join_names(missing));
}

std::vector<std::string> structural_violations(const ModelDescription& d)
{
    std::vector<std::string> out;
    if (d.agents.empty())
        out.push_back("no agents declared");
    if (d.states.empty())
        out.push_back("no states declared");
    auto duplicates = [&](const std::vector<std::string>& names, const std::string& kind) {
        std::set<std::string> seen;
        for (const auto& n : names)
            if (!seen.insert(n).second)
                out.push_back("duplicate " + kind + " " + n);
    };
    duplicates(d.agents, "agent");
    duplicates(d.states, "state");
    duplicates(d.props, "proposition");
    if (d.agents.size() > kMaxModelAgents)
        out.push_back("too many agents");

    for (const auto& a : d.agents) {
        auto it = d.relations.find(a);
        if (it == d.relations.end())
            out.push_back("agent " + a + " has no relation");
        else
            check_blocks("agent " + a, it->second, d.states, out);
    }
    for (const auto& [a, blocks] : d.relations)
        if (std::find(d.agents.begin(), d.agents.end(), a) == d.agents.end())
            out.push_back("relation given for undeclared agent " + a);

    std::set<std::string> states(d.states.begin(), d.states.end());
    for (const auto& [p, ext] : d.valuation) {
        if (std::find(d.props.begin(), d.props.end(), p) == d.props.end())
            out.push_back("valuation given for undeclared proposition " + p);
        for (const auto& s : ext)
            if (!states.contains(s))
                out.push_back("valuation of " + p + " mentions unknown state " + s);
    }

    if (d.group_relations) {
        if (d.agents.size() > kMaxPreModelAgents)
            out.push_back("too many agents for a pre-model");
        std::set<std::string> keys;
        for (const auto& [key, blocks] : *d.group_relations) {
            std::optional<Group> g;
            try {
                g = parse_group(key);
            } catch (const std::exception&) {
                out.push_back("malformed group key '" + key + "'");
                continue;
            }
            bool known = true;
            for (const auto& a : g->members())
                if (std::find(d.agents.begin(), d.agents.end(), a) == d.agents.end()) {
                    out.push_back("group " + key + " mentions undeclared agent " + a);
                    known = false;
                }
            if (!known)
                continue;
            if (!keys.insert(g->key()).second)
                out.push_back("group " + g->key() + " given twice");
            check_blocks("group " + g->key(), blocks, d.states, out);
        }
    }
    return out;
}

std::vector<std::vector<std::size_t>> block_indices(const std::vector<std::vector<std::string>>& blocks,
                                                    const Vocabulary& v)
{
    std::vector<std::vector<std::size_t>> out;
    for (const auto& block : blocks) {
        auto& b = out.emplace_back();
        for (const auto& s : block)
            b.push_back(*v.state_index(s));
    }
    return out;
}

std::vector<std::vector<std::string>> block_names(const Partition& p, const Vocabulary& v)
{
    std::vector<std::vector<std::string>> out;
    for (const auto& block : p.blocks()) {
        auto& b = out.emplace_back();
        for (auto s : block)
            b.push_back(v.states[s]);
    }
    return out;
}

std::string braced(const Group& g) { return "{" + g.key() + "}"; }

}  // namespace

std::optional<std::size_t> Vocabulary::state_index(std::string_view name) const { return index_in(states, name); }
std::optional<std::size_t> Vocabulary::agent_index(std::string_view name) const { return index_in(agents, name); }
std::optional<std::size_t> Vocabulary::atom_index(std::string_view name) const { return index_in(atoms, name); }

std::vector<std::string> validate(const ModelDescription& d)
{
    auto out = structural_violations(d);
    if (out.empty() && d.group_relations) {
        auto pseudo = pseudo_violations(PreModel::from_description(d));
        out.insert(out.end(), pseudo.begin(), pseudo.end());
    }
    return out;
}

namespace {
std::string first_lines(const std::vector<std::string>& v)
{
    std::string out = "invalid model";
    for (const auto& s : v)
        out += "; " + s;
    return out;
}
}  // namespace

ModelError::ModelError(std::vector<std::string> violations)
    : std::runtime_error(first_lines(violations)), violations_(std::move(violations))
{}

// ---------------------------------------------------------------------------
// Model

Model::Model(std::shared_ptr<const Vocabulary> vocab, std::vector<StateSet> valuation,
             std::vector<Partition> relations)
    : vocab_(std::move(vocab)), valuation_(std::move(valuation)), relations_(std::move(relations))
{
    if (!vocab_ || vocab_->states.empty())
        throw std::invalid_argument("model needs at least one state");
    if (relations_.size() != vocab_->agents.size() || valuation_.size() != vocab_->atoms.size())
        throw std::invalid_argument("model components do not match its vocabulary");
    if (vocab_->agents.size() > kMaxModelAgents)
        throw std::invalid_argument("too many agents");
    for (const auto& r : relations_)
        if (r.size() != vocab_->states.size())
            throw std::invalid_argument("relation size does not match state count");
    for (const auto& v : valuation_)
        if (v.size() != vocab_->states.size())
            throw std::invalid_argument("valuation size does not match state count");
}

Model Model::from_description(const ModelDescription& d)
{
    auto violations = structural_violations(d);
    if (!violations.empty())
        throw ModelError(std::move(violations));

    auto vocab = std::make_shared<Vocabulary>();
    vocab->states = d.states;
    vocab->agents = d.agents;
    std::sort(vocab->agents.begin(), vocab->agents.end(), AgentLess{});
    vocab->atoms = d.props;
    std::sort(vocab->atoms.begin(), vocab->atoms.end());

    std::vector<Partition> relations;
    for (const auto& a : vocab->agents)
        relations.push_back(Partition::from_blocks(vocab->states.size(), block_indices(d.relations.at(a), *vocab)));

    std::vector<StateSet> valuation;
    for (const auto& p : vocab->atoms) {
        StateSet ext(vocab->states.size());
        if (auto it = d.valuation.find(p); it != d.valuation.end())
            for (const auto& s : it->second)
                ext[*vocab->state_index(s)] = true;
        valuation.push_back(std::move(ext));
    }
    return Model(std::move(vocab), std::move(valuation), std::move(relations));
}

std::size_t Model::state(std::string_view name) const
{
    auto i = vocab_->state_index(name);
    if (!i)
        throw std::invalid_argument("unknown state '" + std::string(name) + "'");
    return *i;
}

const Partition& Model::relation(std::string_view agent) const
{
    auto i = vocab_->agent_index(agent);
    if (!i)
        throw std::invalid_argument("undeclared agent '" + std::string(agent) + "'");
    return relations_[*i];
}

bool Model::holds(std::string_view atom, std::size_t state) const
{
    auto i = vocab_->atom_index(atom);
    return i && valuation_[*i][state];
}

GroupMask Model::mask(const Group& g) const
{
    GroupMask m = 0;
    for (const auto& a : g.members()) {
        auto i = vocab_->agent_index(a);
        if (!i)
            throw std::invalid_argument("undeclared agent '" + a + "'");
        m |= GroupMask{1} << *i;
    }
    return m;
}

GroupMask Model::all_agents_mask() const
{
    return num_agents() == 32 ? ~GroupMask{0} : (GroupMask{1} << num_agents()) - 1;
}

Group Model::group(GroupMask mask) const
{
    std::vector<std::string> members;
    for (std::size_t i = 0; i < num_agents(); ++i)
        if (mask & (GroupMask{1} << i))
            members.push_back(vocab_->agents[i]);
    return Group(std::move(members));
}

ModelDescription Model::describe() const
{
    ModelDescription d;
    d.agents = agents();
    d.props = atoms();
    d.states = states();
    for (std::size_t i = 0; i < num_agents(); ++i)
        d.relations[agents()[i]] = block_names(relations_[i], *vocab_);
    for (std::size_t p = 0; p < atoms().size(); ++p) {
        auto& ext = d.valuation[atoms()[p]];
        for (std::size_t s = 0; s < num_states(); ++s)
            if (valuation_[p][s])
                ext.push_back(states()[s]);
    }
    return d;
}

bool operator==(const Model& a, const Model& b)
{
    const auto& va = a.vocabulary();
    const auto& vb = b.vocabulary();
    return va.states == vb.states && va.agents == vb.agents && va.atoms == vb.atoms &&
           a.valuation_ == b.valuation_ && a.relations_ == b.relations_;
}

// ---------------------------------------------------------------------------
// PreModel

PreModel::PreModel(Model base, std::vector<Partition> group_relations)
    : base_(std::move(base)), groups_(std::move(group_relations))
{
    if (base_.num_agents() > kMaxPreModelAgents)
        throw std::invalid_argument("too many agents for a pre-model");
    if (groups_.size() != (std::size_t{1} << base_.num_agents()))
        throw std::invalid_argument("pre-model needs one relation per group");
    for (std::size_t g = 1; g < groups_.size(); ++g)
        if (groups_[g].size() != base_.num_states())
            throw std::invalid_argument("group relation size does not match state count");
    groups_[0] = Partition{};
}

PreModel PreModel::from_description(const ModelDescription& d)
{
    ModelDescription plain = d;
    plain.group_relations.reset();
    auto violations = structural_violations(d);
    if (!violations.empty())
        throw ModelError(std::move(violations));
    Model base = Model::from_description(plain);
    std::vector<Partition> groups(std::size_t{1} << base.num_agents());
    for (GroupMask g = 1; g < groups.size(); ++g)
        groups[g] = epi::group_relation(base, g);
    if (d.group_relations)
        for (const auto& [key, blocks] : *d.group_relations)
            groups[base.mask(parse_group(key))] =
                Partition::from_blocks(base.num_states(), block_indices(blocks, base.vocabulary()));
    return PreModel(std::move(base), std::move(groups));
}

ModelDescription PreModel::describe() const
{
    ModelDescription d = base_.describe();
    auto& gr = d.group_relations.emplace();
    for (GroupMask g = 1; g < groups_.size(); ++g)
        gr[base_.group(g).key()] = block_names(groups_[g], base_.vocabulary());
    return d;
}

// ---------------------------------------------------------------------------
// Derived relations and updates

Partition group_relation(const Model& m, GroupMask g)
{
    std::optional<Partition> out;
    for (std::size_t i = 0; i < m.num_agents(); ++i)
        if (g & (GroupMask{1} << i))
            out = out ? meet(*out, m.relation(i)) : m.relation(i);
    if (!out)
        throw std::invalid_argument("empty group");
    return *out;
}

Partition group_relation(const Model& m, const Group& g) { return group_relation(m, m.mask(g)); }

Partition common_relation(const Model& m, GroupMask g)
{
    std::optional<Partition> out;
    for (std::size_t i = 0; i < m.num_agents(); ++i)
        if (g & (GroupMask{1} << i))
            out = out ? join(*out, m.relation(i)) : m.relation(i);
    if (!out)
        throw std::invalid_argument("empty group");
    return *out;
}

Partition common_relation(const Model& m, const Group& g) { return common_relation(m, m.mask(g)); }
Partition common_relation(const PreModel& p, GroupMask g) { return common_relation(p.base(), g); }
Partition common_relation(const PreModel& p, const Group& g) { return common_relation(p.base(), p.mask(g)); }

Model resolve(const Model& m, GroupMask g)
{
    Partition core = group_relation(m, g);
    std::vector<Partition> relations = m.relations();
    for (std::size_t i = 0; i < relations.size(); ++i)
        if (g & (GroupMask{1} << i))
            relations[i] = core;
    return Model(m.shared_vocabulary(), m.valuations(), std::move(relations));
}

Model resolve(const Model& m, const Group& g) { return resolve(m, m.mask(g)); }

PreModel resolve_pre(const PreModel& p, GroupMask g)
{
    if (g == 0 || g >= p.group_relations().size())
        throw std::invalid_argument("group outside the pre-model's agents");
    const Model& base = p.base();
    std::vector<Partition> relations = base.relations();
    for (std::size_t i = 0; i < relations.size(); ++i)
        if (g & (GroupMask{1} << i))
            relations[i] = p.group_relation(g);
    std::vector<Partition> groups = p.group_relations();
    for (GroupMask h = 1; h < groups.size(); ++h)
        if (h & g)
            groups[h] = p.group_relation(h | g);
    return PreModel(Model(base.shared_vocabulary(), base.valuations(), std::move(relations)), std::move(groups));
}

PreModel resolve_pre(const PreModel& p, const Group& g) { return resolve_pre(p, p.mask(g)); }

PreModel as_premodel(const Model& m)
{
    std::vector<Partition> groups(std::size_t{1} << m.num_agents());
    for (GroupMask g = 1; g < groups.size(); ++g)
        groups[g] = group_relation(m, g);
    return PreModel(m, std::move(groups));
}

Partition iterated_relation(const Model& m, const std::vector<Group>& gs, const Group& target)
{
    return group_relation(m, delta(target, gs));
}

Partition iterated_relation(const PreModel& p, const std::vector<Group>& gs, const Group& target)
{
    return p.group_relation(delta(target, gs));
}

Model restrict(const Model& m, const StateSet& keep)
{
    if (keep.size() != m.num_states())
        throw std::invalid_argument("state set does not match the model");
    std::vector<std::size_t> kept;
    for (std::size_t s = 0; s < keep.size(); ++s)
        if (keep[s])
            kept.push_back(s);
    if (kept.empty())
        throw std::invalid_argument("cannot restrict to an empty set of states");

    auto vocab = std::make_shared<Vocabulary>();
    vocab->agents = m.agents();
    vocab->atoms = m.atoms();
    for (auto s : kept)
        vocab->states.push_back(m.states()[s]);

    std::vector<Partition> relations;
    for (const auto& r : m.relations())
        relations.push_back(restrict(r, kept));
    std::vector<StateSet> valuation;
    for (const auto& v : m.valuations()) {
        StateSet ext(kept.size());
        for (std::size_t i = 0; i < kept.size(); ++i)
            ext[i] = v[kept[i]];
        valuation.push_back(std::move(ext));
    }
    return Model(std::move(vocab), std::move(valuation), std::move(relations));
}

std::vector<std::string> pseudo_violations(const PreModel& p)
{
    std::vector<std::string> out;
    const Model& base = p.base();
    for (std::size_t i = 0; i < base.num_agents(); ++i)
        if (p.group_relation(GroupMask{1} << i) != base.relation(i))
            out.push_back("pseudo: relation of {" + base.agents()[i] + "} differs from agent " + base.agents()[i]);
    auto n = static_cast<GroupMask>(p.group_relations().size());
    for (GroupMask small = 1; small < n; ++small)
        for (GroupMask large = 1; large < n; ++large)
            if (small != large && (small & large) == small &&
                !p.group_relation(large).refines(p.group_relation(small)))
                out.push_back("pseudo: monotonicity violated for " + braced(base.group(small)) + "⊆" +
                              braced(base.group(large)));
    return out;
}

}  // namespace epi
