#include "epi/rewrite.hpp"

#include <deque>
#include <stdexcept>

namespace epi {

Group delta(const Group& core, const std::vector<Group>& prefix)
{
    Group acc = core;
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
        if (it->intersects(acc))
            acc = it->unite(acc);
    return acc;
}

Formula push_modal(const std::vector<Group>& prefix, const Formula& inner)
{
    switch (inner.op()) {
    case Op::Know:
        return dist(delta(Group::singleton(inner.name()), prefix), resolve_prefix(prefix, inner.body()));
    case Op::Dist:
        return dist(delta(inner.group(), prefix), resolve_prefix(prefix, inner.body()));
    default:
        throw std::invalid_argument("push_modal expects K_i or D_H, got " + render(inner));
    }
}

namespace {

// Pushes R_G into an already reduced formula.
Formula push(const Group& g, const Formula& f)
{
    if (g.size() == 1)
        return f;
    switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom: return f;
    case Op::Not: return neg(push(g, f.body()));
    case Op::And: return conj(push(g, f.left()), push(g, f.right()));
    case Op::Or: return disj(push(g, f.left()), push(g, f.right()));
    case Op::Implies: return implies(push(g, f.left()), push(g, f.right()));
    case Op::Iff: return iff(push(g, f.left()), push(g, f.right()));
    case Op::Know:
        if (g.contains(f.name()))
            return dist(g, push(g, f.body()));
        return know(f.name(), push(g, f.body()));
    case Op::Dist:
        if (g.intersects(f.group()))
            return dist(g.unite(f.group()), push(g, f.body()));
        return dist(f.group(), push(g, f.body()));
    case Op::Common:
        if (!g.intersects(f.group()))
            return common(f.group(), push(g, f.body()));
        if (f.group().subset_of(g))
            return dist(g, push(g, f.body()));
        return resolve(g, f);
    case Op::Resolve:
        if (f.group() == g)
            return f;
        return resolve(g, f);
    case Op::Announce: return resolve(g, f);
    }
    return resolve(g, f);
}

}  // namespace

Formula reduce(const Formula& f)
{
    switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom: return f;
    case Op::Not: return neg(reduce(f.body()));
    case Op::And: return conj(reduce(f.left()), reduce(f.right()));
    case Op::Or: return disj(reduce(f.left()), reduce(f.right()));
    case Op::Implies: return implies(reduce(f.left()), reduce(f.right()));
    case Op::Iff: return iff(reduce(f.left()), reduce(f.right()));
    case Op::Know: return know(f.name(), reduce(f.body()));
    case Op::Dist: return dist(f.group(), reduce(f.body()));
    case Op::Common: return common(f.group(), reduce(f.body()));
    case Op::Resolve: return push(f.group(), reduce(f.body()));
    case Op::Announce: return announce(reduce(f.left()), reduce(f.right()));
    }
    return f;
}

std::set<Formula> closure(const Formula& f)
{
    if (contains_op(f, Op::Announce))
        throw std::invalid_argument("closure is defined for formulas without announcements");

    std::set<Formula> out;
    std::deque<Formula> work;
    auto add = [&](Formula x) {
        if (out.insert(x).second)
            work.push_back(std::move(x));
    };
    add(desugar(f));

    while (!work.empty()) {
        Formula x = work.front();
        work.pop_front();

        switch (x.op()) {
        case Op::Top:
        case Op::Atom: break;
        case Op::And:
            add(x.left());
            add(x.right());
            break;
        default: add(x.body()); break;
        }

        if (x.op() != Op::Not)
            add(neg(x));

        if (x.op() == Op::Know)
            add(dist(Group::singleton(x.name()), x.body()));
        if (x.op() == Op::Dist && x.group().size() == 1)
            add(know(x.group().members().front(), x.body()));

        if (x.op() == Op::Common)
            for (const auto& i : x.group().members())
                add(know(i, x));

        auto [prefix, core] = split_resolve_prefix(x);
        switch (core.op()) {
        case Op::Not:
            add(resolve_prefix(prefix, core.body()));
            break;
        case Op::And:
            add(resolve_prefix(prefix, core.left()));
            add(resolve_prefix(prefix, core.right()));
            break;
        case Op::Know:
        case Op::Dist: add(push_modal(prefix, core)); break;
        case Op::Common:
            add(dist(delta(core.group(), prefix), x));
            for (const auto& i : core.group().members())
                add(dist(delta(Group::singleton(i), prefix), x));
            add(resolve_prefix(prefix, core.body()));
            break;
        default: break;
        }
    }
    return out;
}

}  // namespace epi
