#include "epi/generator.hpp"

#include <stdexcept>

namespace epi {

FormulaGenerator::FormulaGenerator(GeneratorOptions options, std::uint64_t seed)
    : options_(std::move(options)), rng_(seed)
{
    if (options_.agents.empty())
        throw std::invalid_argument("generator needs at least one agent");
    ops_ = {Op::Not, Op::And};
    if (options_.knowledge)
        ops_.push_back(Op::Know);
    if (options_.sugar)
        ops_.insert(ops_.end(), {Op::Or, Op::Implies, Op::Iff});
    if (options_.distributed)
        ops_.push_back(Op::Dist);
    if (options_.common)
        ops_.push_back(Op::Common);
    if (options_.resolution)
        ops_.push_back(Op::Resolve);
    if (options_.announcement)
        ops_.push_back(Op::Announce);
}

std::uint64_t FormulaGenerator::below(std::uint64_t n)
{
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_);
}

const std::string& FormulaGenerator::agent() { return options_.agents[below(options_.agents.size())]; }

Group FormulaGenerator::group()
{
    const std::size_t k = options_.agents.size();
    const std::uint64_t mask = 1 + below((std::uint64_t{1} << k) - 1);
    std::vector<std::string> members;
    for (std::size_t i = 0; i < k; ++i)
        if (mask & (std::uint64_t{1} << i))
            members.push_back(options_.agents[i]);
    return Group(std::move(members));
}

Group FormulaGenerator::supergroup(const Group& base)
{
    std::vector<std::string> members = base.members();
    for (const auto& a : options_.agents)
        if (!base.contains(a) && below(2) == 1)
            members.push_back(a);
    return Group(std::move(members));
}

Formula FormulaGenerator::leaf()
{
    // Constants are rarer than atoms so most leaves carry information.
    const std::uint64_t k = options_.atoms.size();
    const std::uint64_t r = below(k == 0 ? 2 : 4 * k + 2);
    if (r < 4 * k)
        return atom(options_.atoms[r % k]);
    return r % 2 == 0 ? top() : bottom();
}

Formula FormulaGenerator::next() { return next(options_.max_depth); }

Formula FormulaGenerator::next(std::size_t depth)
{
    if (depth == 0 || below(4) == 0)
        return leaf();
    switch (ops_[below(ops_.size())]) {
    case Op::Not: return neg(next(depth - 1));
    case Op::And: {
        auto a = next(depth - 1);
        return conj(std::move(a), next(depth - 1));
    }
    case Op::Or: {
        auto a = next(depth - 1);
        return disj(std::move(a), next(depth - 1));
    }
    case Op::Implies: {
        auto a = next(depth - 1);
        return implies(std::move(a), next(depth - 1));
    }
    case Op::Iff: {
        auto a = next(depth - 1);
        return iff(std::move(a), next(depth - 1));
    }
    case Op::Know: {
        const std::string& i = agent();
        return know(i, next(depth - 1));
    }
    case Op::Dist: {
        auto g = group();
        return dist(std::move(g), next(depth - 1));
    }
    case Op::Common: {
        auto g = group();
        return common(std::move(g), next(depth - 1));
    }
    case Op::Resolve: {
        auto g = group();
        return resolve(std::move(g), next(depth - 1));
    }
    case Op::Announce: {
        auto a = next(depth - 1);
        return announce(std::move(a), next(depth - 1));
    }
    default: break;
    }
    return leaf();
}

}  // namespace epi
