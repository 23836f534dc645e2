#include "epi/checker.hpp"

#include <algorithm>
#include <bit>
#include <memory>
#include <type_traits>
#include <stdexcept>
#include <utility>

namespace epi {

namespace {

constexpr std::uint32_t kNone = ~std::uint32_t{0};

std::int32_t compile_into(const Formula& f, const std::vector<std::string>& agents,
                          const std::vector<std::string>& atoms, std::vector<CompiledFormula::Node>& out)
{
    auto agent_mask = [&](const Group& g) {
        GroupMask m = 0;
        for (const auto& a : g.members()) {
            auto it = std::find(agents.begin(), agents.end(), a);
            if (it == agents.end())
                throw std::invalid_argument("undeclared agent '" + a + "'");
            m |= GroupMask{1} << (it - agents.begin());
        }
        return m;
    };

    CompiledFormula::Node node{f.op(), kNone, 0, -1, -1};
    switch (f.op()) {
    case Op::Top:
    case Op::Bottom: break;
    case Op::Atom: {
        auto it = std::find(atoms.begin(), atoms.end(), f.name());
        if (it != atoms.end())
            node.index = static_cast<std::uint32_t>(it - atoms.begin());
        break;
    }
    case Op::Know: {
        GroupMask m = agent_mask(Group::singleton(f.name()));
        node.group = m;
        node.index = static_cast<std::uint32_t>(std::countr_zero(m));
        node.left = compile_into(f.body(), agents, atoms, out);
        break;
    }
    case Op::Not: node.left = compile_into(f.body(), agents, atoms, out); break;
    case Op::Dist:
    case Op::Common:
    case Op::Resolve:
        node.group = agent_mask(f.group());
        node.left = compile_into(f.body(), agents, atoms, out);
        break;
    default:
        node.left = compile_into(f.left(), agents, atoms, out);
        node.right = compile_into(f.right(), agents, atoms, out);
        break;
    }
    out.push_back(node);
    return static_cast<std::int32_t>(out.size() - 1);
}

// Structure-specific relation access for the shared evaluator.
struct ModelOps {
    using Structure = Model;
    static const Partition& agent(const Model& m, std::size_t i) { return m.relation(i); }
    static Partition dist(const Model& m, GroupMask g) { return group_relation(m, g); }
    static Partition common(const Model& m, GroupMask g) { return common_relation(m, g); }
    static Model resolved(const Model& m, GroupMask g) { return resolve(m, g); }
    static const Model& base(const Model& m) { return m; }
};

struct PreModelOps {
    using Structure = PreModel;
    static const Partition& agent(const PreModel& p, std::size_t i) { return p.relation(i); }
    static Partition dist(const PreModel& p, GroupMask g) { return p.group_relation(g); }
    static Partition common(const PreModel& p, GroupMask g) { return common_relation(p, g); }
    static PreModel resolved(const PreModel& p, GroupMask g) { return resolve_pre(p, g); }
    static const Model& base(const PreModel& p) { return p.base(); }
};

// One structure reached from the query's root by a sequence of resolutions.
// Resolved children and derived relations are memoized for the query only.
template <class Ops>
class Context {
public:
    using S = typename Ops::Structure;

    // The root borrows the caller's structure; derived contexts own theirs.
    explicit Context(const S& s) : structure_(&s) {}
    explicit Context(S&& s) : owned_(std::move(s)), structure_(&*owned_) {}
    Context(const Context&) = delete;
    Context& operator=(const Context&) = delete;

    const S& structure() const { return *structure_; }

    Context& child(GroupMask g)
    {
        for (auto& [mask, c] : children_)
            if (mask == g)
                return *c;
        children_.emplace_back(g, std::make_unique<Context>(Ops::resolved(*structure_, g)));
        return *children_.back().second;
    }

    const Partition& dist(GroupMask g) { return cached(dist_, g, [&] { return Ops::dist(*structure_, g); }); }
    const Partition& common(GroupMask g) { return cached(common_, g, [&] { return Ops::common(*structure_, g); }); }

private:
    template <class Make>
    static const Partition& cached(std::vector<std::pair<GroupMask, Partition>>& cache, GroupMask g, Make make)
    {
        for (auto& [mask, p] : cache)
            if (mask == g)
                return p;
        cache.emplace_back(g, make());
        return cache.back().second;
    }

    std::optional<S> owned_;
    const S* structure_;
    std::vector<std::pair<GroupMask, std::unique_ptr<Context>>> children_;
    std::vector<std::pair<GroupMask, Partition>> dist_;
    std::vector<std::pair<GroupMask, Partition>> common_;
};

template <class Ops>
StateSet evaluate(const std::vector<CompiledFormula::Node>& nodes, std::int32_t at, Context<Ops>& ctx)
{
    const auto& node = nodes[static_cast<std::size_t>(at)];
    const Model& base = Ops::base(ctx.structure());
    const std::size_t n = base.num_states();
    switch (node.op) {
    case Op::Top: return StateSet(n, true);
    case Op::Bottom: return StateSet(n, false);
    case Op::Atom: return node.index == kNone ? StateSet(n, false) : base.valuation(node.index);
    case Op::Not: {
        StateSet s = evaluate(nodes, node.left, ctx);
        s.flip();
        return s;
    }
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff: {
        StateSet a = evaluate(nodes, node.left, ctx);
        StateSet b = evaluate(nodes, node.right, ctx);
        for (std::size_t s = 0; s < n; ++s) {
            switch (node.op) {
            case Op::And: a[s] = a[s] && b[s]; break;
            case Op::Or: a[s] = a[s] || b[s]; break;
            case Op::Implies: a[s] = !a[s] || b[s]; break;
            default: a[s] = a[s] == b[s]; break;
            }
        }
        return a;
    }
    case Op::Know: return box(Ops::agent(ctx.structure(), node.index), evaluate(nodes, node.left, ctx));
    case Op::Dist: {
        StateSet body = evaluate(nodes, node.left, ctx);
        return box(ctx.dist(node.group), body);
    }
    case Op::Common: {
        StateSet body = evaluate(nodes, node.left, ctx);
        return box(ctx.common(node.group), body);
    }
    case Op::Resolve: return evaluate(nodes, node.left, ctx.child(node.group));
    case Op::Announce: {
        if constexpr (std::is_same_v<typename Ops::Structure, Model>) {
            StateSet keep = evaluate(nodes, node.left, ctx);
            StateSet out(n, true);
            bool any = false;
            for (std::size_t s = 0; s < n; ++s)
                any = any || keep[s];
            if (!any)
                return out;
            Context<Ops> sub(restrict(ctx.structure(), keep));
            StateSet inner = evaluate(nodes, node.right, sub);
            std::size_t k = 0;
            for (std::size_t s = 0; s < n; ++s)
                if (keep[s])
                    out[s] = inner[k++];
            return out;
        } else {
            throw std::invalid_argument("announcements have no pseudo semantics");
        }
    }
    }
    throw std::logic_error("unknown operator");
}

}  // namespace

CompiledFormula::CompiledFormula(const Formula& f, std::vector<std::string> agents, std::vector<std::string> atoms)
    : agents_(std::move(agents)), atoms_(std::move(atoms))
{
    root_ = compile_into(f, agents_, atoms_, nodes_);
    has_announcement_ = contains_op(f, Op::Announce);
}

void CompiledFormula::check_vocabulary(const Vocabulary& v) const
{
    if (v.agents != agents_ || v.atoms != atoms_)
        throw std::invalid_argument("structure vocabulary differs from the compiled formula's");
}

StateSet CompiledFormula::extension(const Model& m) const
{
    check_vocabulary(m.vocabulary());
    Context<ModelOps> ctx(m);
    return evaluate(nodes_, root_, ctx);
}

StateSet CompiledFormula::extension(const PreModel& p) const
{
    check_vocabulary(p.vocabulary());
    if (has_announcement_)
        throw std::invalid_argument("announcements have no pseudo semantics");
    Context<PreModelOps> ctx(p);
    return evaluate(nodes_, root_, ctx);
}

StateSet extension(const Model& m, const Formula& f)
{
    return CompiledFormula(f, m.agents(), m.atoms()).extension(m);
}

StateSet extension_pseudo(const PreModel& p, const Formula& f)
{
    return CompiledFormula(f, p.vocabulary().agents, p.vocabulary().atoms).extension(p);
}

std::vector<std::string> state_names(const Model& m, const StateSet& s)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i])
            out.push_back(m.states()[i]);
    return out;
}

bool satisfies(const Model& m, std::size_t state, const Formula& f)
{
    return extension(m, f).at(state);
}

bool satisfies(const Model& m, std::string_view state, const Formula& f)
{
    return satisfies(m, m.state(state), f);
}

bool satisfies_pseudo(const PreModel& p, std::size_t state, const Formula& f)
{
    return extension_pseudo(p, f).at(state);
}

bool satisfies_pseudo(const PreModel& p, std::string_view state, const Formula& f)
{
    return satisfies_pseudo(p, p.base().state(state), f);
}

std::optional<PointedModel> equivalent_on(std::span<const PointedModel> points, const Formula& f, const Formula& g)
{
    for (const auto& pt : points)
        if (satisfies(pt.model, pt.state, f) != satisfies(pt.model, pt.state, g))
            return pt;
    return std::nullopt;
}

std::vector<PointedModel> all_points(std::span<const Model> models)
{
    std::vector<PointedModel> out;
    for (const auto& m : models)
        for (std::size_t s = 0; s < m.num_states(); ++s)
            out.push_back({m, s});
    return out;
}

}  // namespace epi
