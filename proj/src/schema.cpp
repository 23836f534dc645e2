#include "epi/schema.hpp"

#include <functional>
#include <sstream>

#include "epi/generator.hpp"
#include "epi/model_io.hpp"

namespace epi {

namespace {

// Validity is checked against one materialized model class.
struct Universe {
    std::vector<std::string> agents;
    std::vector<std::string> atoms;
    std::vector<Model> models;
};

Universe make_universe(const SearchBounds& bounds)
{
    std::vector<std::string> agents = bounds.agents.empty() ? std::vector<std::string>{"1", "2"} : bounds.agents;
    std::vector<std::string> atoms = bounds.atoms.empty() ? std::vector<std::string>{"p"} : bounds.atoms;
    ModelSpace space(std::move(agents), std::move(atoms), bounds.max_states);
    Universe u{space.agents(), space.atoms(), {}};
    u.models.reserve(space.size());
    space.for_each([&](const Model& m) { u.models.push_back(m); });
    return u;
}

std::optional<PointedModel> countermodel(const Universe& u, const Formula& f)
{
    CompiledFormula compiled(f, u.agents, u.atoms);
    for (const auto& m : u.models) {
        StateSet ext = compiled.extension(m);
        for (std::size_t s = 0; s < ext.size(); ++s)
            if (!ext[s])
                return PointedModel{m, s};
    }
    return std::nullopt;
}

// Stable per-name seed offsets, so adding a schema leaves the others' instances alone.
std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Propositional tautologies for PC: skeletons over placeholder atoms "#0",
// "#1", filtered by truth table, then instantiated with generated formulas.

bool propositional_value(const Formula& f, unsigned assignment)
{
    switch (f.op()) {
    case Op::Top: return true;
    case Op::Bottom: return false;
    case Op::Atom: return (assignment >> (f.name()[1] - '0')) & 1;
    case Op::Not: return !propositional_value(f.body(), assignment);
    case Op::And: return propositional_value(f.left(), assignment) && propositional_value(f.right(), assignment);
    case Op::Or: return propositional_value(f.left(), assignment) || propositional_value(f.right(), assignment);
    case Op::Implies: return !propositional_value(f.left(), assignment) || propositional_value(f.right(), assignment);
    case Op::Iff: return propositional_value(f.left(), assignment) == propositional_value(f.right(), assignment);
    default: throw std::logic_error("skeleton is not propositional");
    }
}

Formula substitute(const Formula& f, const std::vector<Formula>& subs)
{
    switch (f.op()) {
    case Op::Atom: return subs[static_cast<std::size_t>(f.name()[1] - '0')];
    case Op::Not: return neg(substitute(f.body(), subs));
    case Op::And: return conj(substitute(f.left(), subs), substitute(f.right(), subs));
    case Op::Or: return disj(substitute(f.left(), subs), substitute(f.right(), subs));
    case Op::Implies: return implies(substitute(f.left(), subs), substitute(f.right(), subs));
    case Op::Iff: return iff(substitute(f.left(), subs), substitute(f.right(), subs));
    default: return f;
    }
}

struct Generators {
    FormulaGenerator formulas;
    FormulaGenerator skeletons;
};

Generators make_generators(const Universe& u, const SearchBounds& bounds, bool with_common, std::uint64_t salt)
{
    GeneratorOptions opts;
    opts.agents = u.agents;
    opts.atoms = u.atoms;
    opts.max_depth = bounds.depth;
    opts.common = with_common;
    GeneratorOptions skel;
    skel.agents = u.agents;
    skel.atoms = {"#0", "#1"};
    skel.max_depth = 3;
    skel.knowledge = skel.distributed = skel.common = skel.resolution = false;
    return {FormulaGenerator(opts, bounds.seed ^ salt), FormulaGenerator(skel, (bounds.seed ^ salt) + 1)};
}

Formula tautology(Generators& g)
{
    for (int attempt = 0; attempt < 256; ++attempt) {
        Formula s = g.skeletons.next();
        bool valid = true;
        for (unsigned a = 0; a < 4 && valid; ++a)
            valid = propositional_value(s, a);
        if (valid && contains_op(s, Op::Atom)) {
            auto x = g.formulas.next();
            return substitute(s, {x, g.formulas.next()});
        }
    }
    auto x = g.formulas.next();
    return disj(x, neg(x));
}

Formula everybody_of(const Group& g, const Formula& f) { return everybody(g, f); }

// Random group sharing a member with g, and one disjoint from g.
Group overlapping(FormulaGenerator& gen, const Group& g)
{
    const auto& m = g.members();
    return gen.supergroup(Group::singleton(m[gen.below(m.size())]));
}

std::optional<Group> disjoint(FormulaGenerator& gen, const Group& g)
{
    std::vector<std::string> rest;
    for (const auto& a : gen.options().agents)
        if (!g.contains(a))
            rest.push_back(a);
    if (rest.empty())
        return std::nullopt;
    std::vector<std::string> pick;
    while (pick.empty())
        for (const auto& a : rest)
            if (gen.below(2) == 1)
                pick.push_back(a);
    return Group(std::move(pick));
}

using Maker = std::function<std::optional<Formula>(Generators&)>;

struct Schema {
    std::string name;
    Maker make;
};

std::vector<Schema> axioms(bool with_common, Mutation mutation)
{
    std::vector<Schema> out;
    auto add = [&](std::string name, Maker make) { out.push_back({std::move(name), std::move(make)}); };

    add("PC", [](Generators& g) { return tautology(g); });
    add("K", [](Generators& g) {
        auto& r = g.formulas;
        std::string i = r.agent();
        auto a = r.next();
        auto b = r.next();
        return implies(know(i, implies(a, b)), implies(know(i, a), know(i, b)));
    });
    add("T", [](Generators& g) {
        std::string i = g.formulas.agent();
        auto a = g.formulas.next();
        return implies(know(i, a), a);
    });
    add("4", [](Generators& g) {
        std::string i = g.formulas.agent();
        auto a = g.formulas.next();
        return implies(know(i, a), know(i, know(i, a)));
    });
    add("5", [](Generators& g) {
        std::string i = g.formulas.agent();
        auto a = g.formulas.next();
        return implies(neg(know(i, a)), know(i, neg(know(i, a))));
    });
    add("K_D", [](Generators& g) {
        auto& r = g.formulas;
        Group G = r.group();
        auto a = r.next();
        auto b = r.next();
        return implies(dist(G, implies(a, b)), implies(dist(G, a), dist(G, b)));
    });
    if (mutation == Mutation::TDConverse)
        add("T_D (td-converse)", [](Generators& g) {
            Group G = g.formulas.group();
            auto a = g.formulas.next();
            return implies(a, dist(G, a));
        });
    else
        add("T_D", [](Generators& g) {
            Group G = g.formulas.group();
            auto a = g.formulas.next();
            return implies(dist(G, a), a);
        });
    add("5_D", [](Generators& g) {
        Group G = g.formulas.group();
        auto a = g.formulas.next();
        return implies(neg(dist(G, a)), dist(G, neg(dist(G, a))));
    });
    add("D1", [](Generators& g) {
        std::string i = g.formulas.agent();
        auto a = g.formulas.next();
        return iff(know(i, a), dist(Group::singleton(i), a));
    });
    add("D2", [](Generators& g) {
        Group G = g.formulas.group();
        Group H = g.formulas.supergroup(G);
        auto a = g.formulas.next();
        return implies(dist(G, a), dist(H, a));
    });
    if (with_common) {
        add("K_C", [](Generators& g) {
            auto& r = g.formulas;
            Group G = r.group();
            auto a = r.next();
            auto b = r.next();
            return implies(common(G, implies(a, b)), implies(common(G, a), common(G, b)));
        });
        add("T_C", [](Generators& g) {
            Group G = g.formulas.group();
            auto a = g.formulas.next();
            return implies(common(G, a), a);
        });
        if (mutation == Mutation::C1Weakened)
            add("C1 (c1-weakened)", [](Generators& g) {
                Group G = g.formulas.group();
                auto a = g.formulas.next();
                return implies(everybody_of(G, a), everybody_of(G, common(G, a)));
            });
        else
            add("C1", [](Generators& g) {
                Group G = g.formulas.group();
                auto a = g.formulas.next();
                return implies(common(G, a), everybody_of(G, common(G, a)));
            });
        add("C2", [](Generators& g) {
            Group G = g.formulas.group();
            auto a = g.formulas.next();
            return implies(common(G, implies(a, everybody_of(G, a))), implies(a, common(G, a)));
        });
    }
    add("RA", [](Generators& g) -> std::optional<Formula> {
        const auto& atoms = g.formulas.options().atoms;
        if (atoms.empty())
            return std::nullopt;
        Group G = g.formulas.group();
        auto p = atom(atoms[g.formulas.below(atoms.size())]);
        return iff(resolve(G, p), p);
    });
    add("RC", [](Generators& g) {
        Group G = g.formulas.group();
        auto a = g.formulas.next();
        auto b = g.formulas.next();
        return iff(resolve(G, conj(a, b)), conj(resolve(G, a), resolve(G, b)));
    });
    add("RN", [](Generators& g) {
        Group G = g.formulas.group();
        auto a = g.formulas.next();
        return iff(resolve(G, neg(a)), neg(resolve(G, a)));
    });
    if (mutation == Mutation::RD1Intersection)
        add("RD1 (rd1-intersection)", [](Generators& g) {
            Group G = g.formulas.group();
            Group H = overlapping(g.formulas, G);
            auto a = g.formulas.next();
            return iff(resolve(G, dist(H, a)), dist(*G.intersect(H), resolve(G, a)));
        });
    else
        add("RD1", [](Generators& g) {
            Group G = g.formulas.group();
            Group H = overlapping(g.formulas, G);
            auto a = g.formulas.next();
            return iff(resolve(G, dist(H, a)), dist(G.unite(H), resolve(G, a)));
        });
    add("RD2", [](Generators& g) -> std::optional<Formula> {
        // Redraw G until something is left outside it; one agent never fits.
        std::optional<Group> H;
        Group G = g.formulas.group();
        for (int attempt = 0; attempt < 64 && !H; ++attempt) {
            G = g.formulas.group();
            H = disjoint(g.formulas, G);
        }
        if (!H)
            return std::nullopt;
        auto a = g.formulas.next();
        return iff(resolve(G, dist(*H, a)), dist(*H, resolve(G, a)));
    });
    return out;
}

// Premise candidates for the rules: half valid axiom instances, half
// arbitrary formulas.
Formula premise(Generators& g, const std::vector<Schema>& pool)
{
    if (g.formulas.below(2) == 0) {
        for (int attempt = 0; attempt < 8; ++attempt)
            if (auto f = pool[g.formulas.below(pool.size())].make(g))
                return *f;
    }
    return g.formulas.next();
}

struct RuleInstance {
    std::vector<Formula> premises;
    Formula conclusion;
};

using RuleMaker = std::function<RuleInstance(Generators&, const std::vector<Schema>&)>;

std::vector<std::pair<std::string, RuleMaker>> rules(bool with_common)
{
    std::vector<std::pair<std::string, RuleMaker>> out;
    out.emplace_back("MP", [](Generators& g, const std::vector<Schema>& pool) {
        Formula a = premise(g, pool);
        Formula b = g.formulas.below(3) == 0 ? disj(a, g.formulas.next()) : premise(g, pool);
        return RuleInstance{{a, implies(a, b)}, b};
    });
    out.emplace_back("N", [](Generators& g, const std::vector<Schema>& pool) {
        Formula a = premise(g, pool);
        return RuleInstance{{a}, know(g.formulas.agent(), a)};
    });
    if (with_common)
        out.emplace_back("N_C", [](Generators& g, const std::vector<Schema>& pool) {
            Formula a = premise(g, pool);
            return RuleInstance{{a}, common(g.formulas.group(), a)};
        });
    out.emplace_back("N_R", [](Generators& g, const std::vector<Schema>& pool) {
        Formula a = premise(g, pool);
        return RuleInstance{{a}, resolve(g.formulas.group(), a)};
    });
    return out;
}

std::string rule_text(const RuleInstance& r)
{
    std::string out = "from ";
    for (std::size_t i = 0; i < r.premises.size(); ++i)
        out += (i ? " and " : "") + render(r.premises[i]);
    return out + " infer " + render(r.conclusion);
}

SchemaResult run_axiom(const Universe& u, const SearchBounds& bounds, const Schema& schema, bool with_common,
                       unsigned threads)
{
    Generators g = make_generators(u, bounds, with_common, fnv1a(schema.name));
    std::vector<Formula> instances;
    for (std::size_t k = 0; k < bounds.instance_count; ++k)
        if (auto f = schema.make(g))
            instances.push_back(*f);
    std::vector<std::optional<PointedModel>> found(instances.size());
    parallel_for(instances.size(), threads, [&](std::uint64_t k) { found[k] = countermodel(u, instances[k]); });

    SchemaResult r{schema.name, false, instances.size(), 0, 0, std::nullopt};
    for (std::size_t k = 0; k < instances.size(); ++k)
        if (found[k]) {
            if (!r.first_violation)
                r.first_violation = SchemaViolation{render(instances[k]), *found[k]};
            ++r.violations;
        }
    return r;
}

SchemaResult run_rule(const Universe& u, const SearchBounds& bounds, const std::string& name, const RuleMaker& make,
                      const std::vector<Schema>& pool, bool with_common, unsigned threads)
{
    Generators g = make_generators(u, bounds, with_common, fnv1a(name));
    std::vector<RuleInstance> instances;
    for (std::size_t k = 0; k < bounds.instance_count; ++k)
        instances.push_back(make(g, pool));
    std::vector<char> held(instances.size(), 0);
    std::vector<std::optional<PointedModel>> found(instances.size());
    parallel_for(instances.size(), threads, [&](std::uint64_t k) {
        for (const auto& p : instances[k].premises)
            if (countermodel(u, p))
                return;
        held[k] = 1;
        found[k] = countermodel(u, instances[k].conclusion);
    });

    SchemaResult r{name, true, instances.size(), 0, 0, std::nullopt};
    for (std::size_t k = 0; k < instances.size(); ++k) {
        r.premises_held += held[k];
        if (found[k]) {
            if (!r.first_violation)
                r.first_violation = SchemaViolation{rule_text(instances[k]), *found[k]};
            ++r.violations;
        }
    }
    return r;
}

SchemaResult run_rrc(const Universe& u, const SearchBounds& bounds, unsigned threads)
{
    Generators g = make_generators(u, bounds, true, fnv1a("RR_C"));
    struct Instance {
        Formula premise;
        Formula conclusion;
    };
    std::vector<Instance> instances;
    for (std::size_t k = 0; k < bounds.instance_count; ++k) {
        auto& r = g.formulas;
        Group H = r.group();
        // Half the antecedents are common-knowledge formulas, which satisfy
        // phi -> E_H phi everywhere and so make the premise non-vacuous more often.
        Formula phi = r.below(2) == 0 ? common(H, r.next()) : r.next();
        Formula psi = r.next();
        std::vector<Group> prefix;
        for (std::uint64_t n = r.below(3); n > 0; --n)
            prefix.push_back(r.group());
        instances.push_back({implies(phi, conj(everybody(H, phi), resolve_prefix(prefix, psi))),
                             implies(phi, resolve_prefix(prefix, common(H, psi)))});
    }

    std::vector<std::size_t> held(instances.size(), 0);
    std::vector<std::optional<PointedModel>> found(instances.size());
    auto everywhere = [](const StateSet& s) { return std::find(s.begin(), s.end(), false) == s.end(); };
    parallel_for(instances.size(), threads, [&](std::uint64_t k) {
        CompiledFormula premise(instances[k].premise, u.agents, u.atoms);
        CompiledFormula conclusion(instances[k].conclusion, u.agents, u.atoms);
        for (const auto& m : u.models) {
            if (!everywhere(premise.extension(m)))
                continue;
            ++held[k];
            StateSet ext = conclusion.extension(m);
            for (std::size_t s = 0; s < ext.size(); ++s)
                if (!ext[s]) {
                    found[k] = PointedModel{m, s};
                    return;
                }
        }
    });

    SchemaResult r{"RR_C", true, instances.size(), 0, 0, std::nullopt};
    for (std::size_t k = 0; k < instances.size(); ++k) {
        r.premises_held += held[k];
        if (found[k]) {
            if (!r.first_violation)
                r.first_violation = SchemaViolation{
                    "from " + render(instances[k].premise) + " infer " + render(instances[k].conclusion), *found[k]};
            ++r.violations;
        }
    }
    return r;
}

SchemaReport empty_report(std::string title, const Universe& u, const SearchBounds& bounds)
{
    SchemaReport rep;
    rep.title = std::move(title);
    rep.agents = u.agents;
    rep.atoms = u.atoms;
    rep.max_states = bounds.max_states;
    rep.models = u.models.size();
    rep.seed = bounds.seed;
    return rep;
}

}  // namespace

std::string_view to_string(ProofSystem s) { return s == ProofSystem::RD ? "RD" : "RCD"; }

std::string_view to_string(Mutation m)
{
    switch (m) {
    case Mutation::None: return "none";
    case Mutation::RD1Intersection: return "rd1-intersection";
    case Mutation::TDConverse: return "td-converse";
    case Mutation::C1Weakened: return "c1-weakened";
    }
    return "none";
}

std::optional<ProofSystem> parse_system(std::string_view text)
{
    if (text == "RD" || text == "rd")
        return ProofSystem::RD;
    if (text == "RCD" || text == "rcd")
        return ProofSystem::RCD;
    return std::nullopt;
}

std::optional<Mutation> parse_mutation(std::string_view text)
{
    for (auto m : {Mutation::None, Mutation::RD1Intersection, Mutation::TDConverse, Mutation::C1Weakened})
        if (to_string(m) == text)
            return m;
    return std::nullopt;
}

std::size_t SchemaReport::total_violations() const
{
    std::size_t n = 0;
    for (const auto& r : results)
        n += r.violations;
    return n;
}

SchemaReport check_schema(ProofSystem system, const SearchBounds& bounds, Mutation mutation)
{
    const bool with_common = system == ProofSystem::RCD;
    Universe u = make_universe(bounds);
    std::string title(to_string(system));
    if (mutation != Mutation::None)
        title += " with mutation " + std::string(to_string(mutation));
    SchemaReport rep = empty_report(std::move(title), u, bounds);

    for (const auto& schema : axioms(with_common, mutation))
        rep.results.push_back(run_axiom(u, bounds, schema, with_common, bounds.threads));
    const auto pool = axioms(with_common, Mutation::None);
    for (const auto& [name, make] : rules(with_common))
        rep.results.push_back(run_rule(u, bounds, name, make, pool, with_common, bounds.threads));
    if (with_common)
        rep.results.push_back(run_rrc(u, bounds, bounds.threads));
    return rep;
}

SchemaReport check_rule_rrc(const SearchBounds& bounds)
{
    Universe u = make_universe(bounds);
    SchemaReport rep = empty_report("RR_C (model-local)", u, bounds);
    rep.results.push_back(run_rrc(u, bounds, bounds.threads));
    return rep;
}

nlohmann::json to_json(const SchemaReport& r)
{
    nlohmann::json j;
    j["system"] = r.title;
    j["agents"] = r.agents;
    j["atoms"] = r.atoms;
    j["max_states"] = r.max_states;
    j["models"] = r.models;
    j["seed"] = r.seed;
    j["violations"] = r.total_violations();
    auto results = nlohmann::json::array();
    for (const auto& s : r.results) {
        nlohmann::json e;
        e["schema"] = s.name;
        e["kind"] = s.rule ? "rule" : "axiom";
        e["instances"] = s.instances;
        if (s.rule)
            e["premises_held"] = s.premises_held;
        e["violations"] = s.violations;
        e["verdict"] = s.violations == 0 ? "ok" : "violated";
        if (s.first_violation) {
            e["instance"] = s.first_violation->instance;
            e["model"] = to_json(s.first_violation->point.model);
            e["state"] = s.first_violation->point.state_name();
        }
        results.push_back(std::move(e));
    }
    j["results"] = std::move(results);
    return j;
}

std::string to_text(const SchemaReport& r)
{
    std::ostringstream out;
    out << r.title << ": " << r.models << " models up to " << r.max_states << " states, agents ";
    for (std::size_t i = 0; i < r.agents.size(); ++i)
        out << (i ? "," : "") << r.agents[i];
    out << ", atoms ";
    for (std::size_t i = 0; i < r.atoms.size(); ++i)
        out << (i ? "," : "") << r.atoms[i];
    out << ", seed " << r.seed << "\n";
    for (const auto& s : r.results) {
        out << "  " << s.name << ": " << s.instances << " instances";
        if (s.rule)
            out << ", premises held in " << s.premises_held;
        if (s.violations == 0) {
            out << ", ok\n";
            continue;
        }
        out << ", " << s.violations << " violated\n";
        const auto& v = *s.first_violation;
        out << "    instance: " << v.instance << "\n";
        out << "    fails at state " << v.point.state_name() << " of " << to_json(v.point.model).dump() << "\n";
    }
    out << "total violations: " << r.total_violations() << "\n";
    return out.str();
}

}  // namespace epi
