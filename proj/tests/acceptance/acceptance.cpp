// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Bounds are the documented full-scale ones.

#include <chrono>
#include <iomanip>
#include <iostream>

#include "../suites.hpp"

using namespace epi;
using namespace epi::test;

namespace {

const std::vector<std::string> kTwo{"1", "2"};
const std::vector<std::string> kThree{"1", "2", "3"};

Verdict fig1_golden()
{
    Verdict v;
    Model m = fig1();
    if (!(resolve(m, g("1,2")) == core()))
        v.fail("resolve(FIG1, {1,2}) differs from CORE");
    if (!satisfies(m, "t", f("R{1,2} (p & K1 p)")))
        v.fail("R{1,2}(p & K1 p) fails at t");
    if (!satisfies(m, "t", f("D{1,2} (p & ~K1 p)")))
        v.fail("D{1,2}(p & ~K1 p) fails at t");
    if (!(load_model(data_path("core.json")) == core()))
        v.fail("data/core.json differs from CORE");
    if (v.pass)
        v.detail = "CORE matches; both formulas hold at t";
    return v;
}

Verdict both(Verdict a, const Verdict& b)
{
    if (!b.pass)
        a.fail(b.detail);
    else if (a.pass)
        a.detail += "; " + b.detail;
    return a;
}

std::string describe(const PointedModel& pt) { return to_json(pt.model).dump() + " at " + pt.state_name(); }

Verdict non_reducibility()
{
    Verdict v;
    const auto groups = all_groups(kThree);
    SearchBounds b;
    b.agents = kThree;
    b.atoms = {"p"};
    auto r = generator(kThree, 2, false, 6);
    std::vector<Formula> phis{atom("p")};
    for (int i = 0; i < 20; ++i)
        phis.push_back(r.next());
    // Smallest bound first, so the reported witness is as small as possible.
    for (std::size_t k = 1; k <= 5; ++k) {
        b.max_states = k;
        for (const auto& phi : phis)
            for (const auto& gg : groups)
                for (const auto& h : groups) {
                    if (!gg.intersects(h) || h.subset_of(gg))
                        continue;
                    Formula x = iff(resolve(gg, common(h, phi)), common(h, resolve(gg, phi)));
                    auto out = find_countermodel(x, b);
                    ++v.checked;
                    if (!out.found())
                        continue;
                    if (satisfies(out.witness->model, out.witness->state, x)) {
                        v.fail("reported countermodel satisfies " + render(x));
                        return v;
                    }
                    v.detail = render(x) + " fails on " + describe(*out.witness) + " (" +
                               std::to_string(out.models_examined) + " models examined)";
                    return v;
                }
    }
    v.fail("no countermodel up to 5 states for any overlapping G, H");
    return v;
}

Verdict axiom_soundness()
{
    Verdict v;
    SearchBounds b;
    std::string summary;
    for (auto sys : {ProofSystem::RD, ProofSystem::RCD}) {
        auto rep = check_schema(sys, b);
        if (rep.total_violations() != 0)
            v.fail(std::string(to_string(sys)) + ": " + std::to_string(rep.total_violations()) + " violations");
        summary += std::string(to_string(sys)) + " sound over " + std::to_string(rep.models) + " models; ";
    }
    for (auto mut : {Mutation::RD1Intersection, Mutation::TDConverse, Mutation::C1Weakened}) {
        auto rep = check_schema(mut == Mutation::C1Weakened ? ProofSystem::RCD : ProofSystem::RD, b, mut);
        const SchemaResult* hit = nullptr;
        for (const auto& res : rep.results)
            if (res.violations > 0 && res.name.find('(') != std::string::npos)
                hit = &res;
        if (!hit || !hit->first_violation || hit->first_violation->point.model.num_states() > 4) {
            v.fail(std::string(to_string(mut)) + " not caught with a countermodel of at most 4 states");
            continue;
        }
        summary += std::string(to_string(mut)) + " caught (" + std::to_string(hit->violations) + " violations, " +
                   std::to_string(hit->first_violation->point.model.num_states()) + "-state countermodel); ";
    }
    if (v.pass)
        v.detail = summary;
    return v;
}

Verdict rrc()
{
    Verdict v;
    auto rep = check_rule_rrc(SearchBounds{});
    const auto& res = rep.results.at(0);
    if (rep.total_violations() != 0)
        v.fail(std::to_string(rep.total_violations()) + " violations: " + res.first_violation->instance);
    else
        v.detail = std::to_string(res.instances) + " instances, " + std::to_string(res.premises_held) +
                   " (instance, model) pairs with premises held, over " + std::to_string(rep.models) + " models";
    return v;
}

Verdict discrepancy()
{
    Verdict v;
    Formula x = f("R{1,2} (p & ~K1 p)");
    Formula y = reduce(x);
    SearchBounds b;
    b.agents = kTwo;
    b.atoms = {"p"};
    std::string record;
    for (std::size_t k = 1; k <= 5; ++k) {
        b.max_states = k;
        auto a = find_model(x, b);
        auto c = find_model(y, b);
        ++v.checked;
        if (a.found() != c.found())
            v.fail("verdicts differ at bound " + std::to_string(k));
        record += "bound " + std::to_string(k) + ": " + (a.found() ? "satisfiable" : "no model") + "; ";
        if (a.found() && !satisfies(a.witness->model, a.witness->state, x))
            v.fail("witness at bound " + std::to_string(k) + " does not satisfy the formula");
        if (k == 5 && a.found())
            record += "witness " + describe(*a.witness);
    }
    if (v.pass)
        v.detail = render(x) + " reduces to " + render(y) + "; " + record;
    return v;
}

}  // namespace

int main()
{
    struct Criterion {
        int number;
        std::string name;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "running example golden", fig1_golden},
        {2, "reduction schemata (2 agents, <=4 states, 200 instances)",
         [] { return check_valid_schemata(reduction_principles(), models(kTwo, {"p"}, 4), kTwo, 200, 2, 1); }},
        {3, "common knowledge schemata (3 agents, <=3 states)",
         [] {
             return check_valid_schemata(common_knowledge_principles(), models(kThree, {"p"}, 3), kThree, 200, 2, 2);
         }},
        {4, "iterated relation vs sequential updates (3 agents, <=4 states, <=3 groups)",
         [] { return check_delta_oracle(kThree, 4, 3); }},
        {5, "reducer (500 RD formulas, depth 3)",
         [] {
             return both(check_reducer(models(kTwo, {"p"}, 4), kTwo, 500, 3, false, 5),
                         check_reducer(models(kThree, {"p"}, 3), kThree, 500, 3, false, 55));
         }},
        {6, "non-reducibility witness", non_reducibility},
        {7, "pseudo embedding (500 RCD formulas)",
         [] { return check_embedding(models(kTwo, {"p"}, 4), kTwo, 500, 3, 7); }},
        {8, "resolution preserves pseudo models", [] { return check_prop8(3); }},
        {9, "bisimulation survival and invariance", [] { return check_bisimulation_suite(3, 500, 9); }},
        {10, "axiom soundness and mutation detection", axiom_soundness},
        {11, "RR_C model-local check", rrc},
        {12, "documented discrepancy", discrepancy},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (v.pass ? "PASS" : "FAIL") << " " << c.number << " " << c.name << " (" << std::fixed
                  << std::setprecision(1) << secs << " s): " << v.detail << std::endl;
        if (!v.pass)
            ++failures;
    }
    return failures == 0 ? 0 : 1;
}
