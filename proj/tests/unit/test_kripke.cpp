#include <doctest.h>

#include "support.hpp"

using namespace epi;
using namespace epi::test;

namespace {

Partition blocks(const Model& m, const std::vector<std::vector<std::string>>& names)
{
    std::vector<std::vector<std::size_t>> idx;
    for (const auto& b : names) {
        auto& out = idx.emplace_back();
        for (const auto& s : b)
            out.push_back(m.state(s));
    }
    return Partition::from_blocks(m.num_states(), idx);
}

}  // namespace

TEST_CASE("partitions")
{
    const std::uint32_t raw[] = {7, 3, 7, 9};
    Partition p = Partition::from_labels(raw);
    CHECK(p.labels() == std::vector<std::uint32_t>{0, 1, 0, 2});
    CHECK(p.block_count() == 3);
    CHECK(p.blocks() == std::vector<std::vector<std::size_t>>{{0, 2}, {1}, {3}});
    CHECK(Partition::discrete(4).refines(p));
    CHECK(p.refines(Partition::total(4)));
    CHECK_FALSE(Partition::total(3).refines(Partition::discrete(3)));
    CHECK_THROWS(Partition::from_blocks(3, {{0, 1}, {1, 2}}));
    CHECK_THROWS(Partition::from_blocks(3, {{0, 1}}));

    Partition a = Partition::from_blocks(4, {{0, 1}, {2, 3}});
    Partition b = Partition::from_blocks(4, {{0, 2}, {1}, {3}});
    CHECK(meet(a, b) == Partition::discrete(4));
    CHECK(join(a, b) == Partition::from_blocks(4, {{0, 1, 2, 3}}));
    CHECK(box(a, {true, true, true, false}) == StateSet{true, true, false, false});
    const std::size_t keep[] = {1, 2, 3};
    CHECK(restrict(a, keep) == Partition::from_blocks(3, {{0}, {1, 2}}));
    CHECK(with_duplicate(a, 2) == Partition::from_blocks(5, {{0, 1}, {2, 3, 4}}));

    for (std::size_t n = 0; n <= 6; ++n) {
        auto all = all_partitions(n);
        CHECK(all.size() == bell_number(n));
        CHECK(std::set<Partition>(all.begin(), all.end()).size() == all.size());
    }
    CHECK(bell_number(5) == 52);
}

TEST_CASE("validate")
{
    CHECK(validate(fig1_description()).empty());

    ModelDescription gap = fig1_description();
    gap.relations["1"] = {{"v", "w"}, {"u"}};
    CHECK(validate(gap) == std::vector<std::string>{"agent 1 partition does not cover s,t"});

    ModelDescription overlap = fig1_description();
    overlap.relations["2"] = {{"t", "u", "v"}, {"s", "t"}, {"w"}};
    CHECK(validate(overlap) == std::vector<std::string>{"agent 2 partition has overlapping blocks at t"});

    ModelDescription unknown = fig1_description();
    unknown.valuation["p"].push_back("z");
    unknown.valuation["q"] = {};
    auto v = validate(unknown);
    CHECK(v.size() == 2);

    ModelDescription pre = fig1_description();
    pre.group_relations.emplace();
    (*pre.group_relations)["1,2"] = {{"s", "t", "u", "v", "w"}};
    CHECK(validate(pre) == std::vector<std::string>{"pseudo: monotonicity violated for {1}⊆{1,2}",
                                                    "pseudo: monotonicity violated for {2}⊆{1,2}"});
    (*pre.group_relations)["1"] = {{"s", "t"}, {"u"}, {"v"}, {"w"}};
    (*pre.group_relations)["1,2"] = {{"s"}, {"t"}, {"u"}, {"v"}, {"w"}};
    CHECK(validate(pre) == std::vector<std::string>{"pseudo: relation of {1} differs from agent 1"});

    CHECK_THROWS_AS(Model::from_description(gap), ModelError);
}

TEST_CASE("group and common relations on the running example")
{
    Model m = fig1();
    CHECK(group_relation(m, g("1,2")) == blocks(m, {{"t", "v"}, {"s"}, {"u"}, {"w"}}));
    CHECK(group_relation(m, g("1")) == blocks(m, {{"s", "t", "v", "w"}, {"u"}}));
    CHECK(common_relation(m, g("1,2")) == Partition::total(5));
    CHECK(common_relation(core(), g("1,2")) == blocks(m, {{"t", "v"}, {"s"}, {"u"}, {"w"}}));
    CHECK(common_relation(m, g("2")) == m.relation("2"));
    CHECK_THROWS_AS(m.mask(g("3")), std::invalid_argument);
}

TEST_CASE("derived relations agree with the pair-set oracles")
{
    for (const auto& m : models({"1", "2", "3"}, {}, 3))
        for (const auto& grp : all_groups({"1", "2", "3"})) {
            REQUIRE(pairs_of(group_relation(m, grp)) == oracle_group_relation(m, grp));
            REQUIRE(pairs_of(common_relation(m, grp)) == oracle_common_relation(m, grp));
        }
}

TEST_CASE("resolve")
{
    Model m = fig1();
    CHECK(resolve(m, g("1,2")) == core());
    CHECK(resolve(m, g("1")) == m);
    CHECK(resolve(resolve(m, g("1,2")), g("1,2")) == core());
    CHECK(resolve_pre(as_premodel(m), g("1,2")) == as_premodel(core()));
}

TEST_CASE("pre-models")
{
    Model m = fig1();
    PreModel p = as_premodel(m);
    CHECK(p.group_relation(g("1,2")) == blocks(m, {{"t", "v"}, {"s"}, {"u"}, {"w"}}));
    CHECK(p.group_relation(g("1")) == m.relation("1"));
    CHECK(is_pseudo(p));
    CHECK(resolve_pre(p, g("2")) == p);

    // A genuine pseudo model whose group relation is strictly finer than
    // the intersection.
    ModelDescription d = fig1_description();
    d.group_relations.emplace();
    (*d.group_relations)["1,2"] = {{"s"}, {"t"}, {"u"}, {"v"}, {"w"}};
    PreModel q = PreModel::from_description(d);
    CHECK(q.group_relation(g("1,2")) == Partition::discrete(5));
    CHECK(is_pseudo(q));
    PreModel r = resolve_pre(q, g("1,2"));
    CHECK(r.relation(0) == Partition::discrete(5));
    CHECK(is_pseudo(r));
    CHECK(to_json(q)["group_relations"]["1,2"].size() == 5);
}

TEST_CASE("iterated_relation")
{
    Model m = fig1();
    CHECK(iterated_relation(m, {g("1,2")}, g("1")) == blocks(m, {{"t", "v"}, {"s"}, {"u"}, {"w"}}));
    CHECK(iterated_relation(m, {}, g("2")) == m.relation("2"));
    for (const auto& x : models({"1", "2", "3"}, {}, 3)) {
        PreModel seq = sequential(as_premodel(x), {g("1,2"), g("1,3")});
        REQUIRE(iterated_relation(x, {g("1,2"), g("1,3")}, g("2")) == seq.group_relation(g("2")));
    }
}

TEST_CASE("restrict")
{
    Model m = fig1();
    Model tv = restrict(m, StateSet{false, true, false, true, false});
    CHECK(tv.states() == std::vector<std::string>{"t", "v"});
    CHECK(tv.relation("1") == Partition::total(2));
    CHECK(tv.relation("2") == Partition::total(2));
    CHECK(restrict(m, StateSet(5, true)) == m);
    Model s = restrict(m, StateSet{true, false, false, false, false});
    CHECK(s.num_states() == 1);
    CHECK_FALSE(s.holds("p", 0));
    CHECK_THROWS_AS(restrict(m, StateSet(5, false)), std::invalid_argument);
}

TEST_CASE("JSON model files")
{
    Model m = load_model(data_path("fig1.json"));
    CHECK(m == fig1());
    CHECK(load_model(data_path("core.json")) == core());
    CHECK(std::get<Model>(structure_from_json(to_json(m))) == m);

    auto j = to_json(m);
    j["relations"]["1"] = nlohmann::json::array({nlohmann::json::array({"s", "t"})});
    CHECK(Model::from_description(description_from_json(j)).relation("1").block_count() == 4);
    CHECK_THROWS_AS(description_from_json(nlohmann::json{{"agents", {"1"}}}), ModelError);
    CHECK_THROWS_AS(description_from_json(nlohmann::json{{"agents", 1}, {"states", {"s"}}, {"relations", {}}}),
                    ModelError);
}
