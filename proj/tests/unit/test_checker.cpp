#include <doctest.h>

#include "support.hpp"

using namespace epi;
using namespace epi::test;

TEST_CASE("satisfaction on the running example")
{
    Model m = fig1();
    CHECK(satisfies(m, "t", f("R{1,2}(p & K1 p)")));
    CHECK(satisfies(m, "t", f("D{1,2}(p & ~K1 p)")));
    CHECK(satisfies(m, "s", top()));
    CHECK_FALSE(satisfies(m, "s", bottom()));
    CHECK(state_names(m, extension(m, f("p"))) == std::vector<std::string>{"t", "v", "w"});
    CHECK(state_names(m, extension(m, f("K1 p"))).empty());
    CHECK(extension(m, top()) == StateSet(5, true));
    CHECK(state_names(m, extension(m, f("C{1,2} ~K1 p"))) == std::vector<std::string>{"s", "t", "u", "v", "w"});
    CHECK(state_names(m, extension(m, f("K2 ~p"))) == std::vector<std::string>{"s"});
    // Atoms outside the model's vocabulary are false everywhere.
    CHECK(state_names(m, extension(m, f("q | ~q"))).size() == 5);
    CHECK(state_names(m, extension(m, f("q"))).empty());
}

TEST_CASE("announcements")
{
    Model m = fig1();
    // After announcing p, agent 1 at t only considers t, v, w.
    CHECK(satisfies(m, "t", f("[p] K1 p")));
    CHECK_FALSE(satisfies(m, "t", f("K1 p")));
    // A false announcement is vacuously true.
    CHECK(satisfies(m, "s", f("[p] false")));
    CHECK(satisfies(m, "t", f("[false] false")));
    CHECK(satisfies(m, "t", f("[p] [K1 p] p")));
}

TEST_CASE("pseudo satisfaction")
{
    PreModel p = as_premodel(fig1());
    CHECK(satisfies_pseudo(p, "t", f("D{1,2}(p & ~K1 p)")));
    CHECK(satisfies_pseudo(as_premodel(core()), "t", f("C{1,2} p")));
    CHECK_THROWS_AS(satisfies_pseudo(p, "t", f("[p] p")), std::invalid_argument);

    // A group relation strictly finer than the intersection.
    ModelDescription d = fig1_description();
    d.group_relations.emplace();
    (*d.group_relations)["1,2"] = {{"s"}, {"t"}, {"u"}, {"v"}, {"w"}};
    PreModel q = PreModel::from_description(d);
    CHECK(satisfies_pseudo(q, "w", f("D{1,2} p")));
    CHECK_FALSE(satisfies_pseudo(q, "s", f("D{1,2} p")));
    for (std::size_t s = 0; s < 5; ++s)
        CHECK(satisfies_pseudo(q, s, f("K1 p")) == satisfies_pseudo(q, s, f("D{1} p")));
    // C uses agent relations only, so the finer group relation is invisible to it.
    for (std::size_t s = 0; s < 5; ++s)
        CHECK(satisfies_pseudo(q, s, f("C{1,2} (p | K2 ~p)")) == satisfies(fig1(), s, f("C{1,2} (p | K2 ~p)")));
}

TEST_CASE("equivalent_on")
{
    std::vector<Model> ms{fig1()};
    auto points = all_points(ms);
    CHECK(points.size() == 5);
    CHECK_FALSE(equivalent_on(points, f("R{1} (p & K2 p)"), f("p & K2 p")));
    CHECK_FALSE(equivalent_on(points, f("R{1,2} ~p"), f("~R{1,2} p")));
    CHECK_FALSE(equivalent_on(points, f("R{1,2} C{1,2} p"), f("R{1,2} D{1,2} p")));
    auto diff = equivalent_on(points, f("K1 p"), f("p"));
    REQUIRE(diff);
    CHECK(diff->state_name() == "t");
}

TEST_CASE("compiled formulas check their vocabulary")
{
    CHECK_THROWS_AS(CompiledFormula(f("K3 p"), {"1", "2"}, {"p"}), std::invalid_argument);
    CompiledFormula c(f("K1 p"), {"1", "2"}, {"q"});
    CHECK_THROWS_AS(c.extension(fig1()), std::invalid_argument);
    CHECK_THROWS_AS(satisfies(fig1(), "t", f("K3 p")), std::invalid_argument);
}
