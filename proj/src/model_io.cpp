#include "epi/model_io.hpp"

#include <fstream>
#include <set>

namespace epi {

using nlohmann::json;

namespace {

std::vector<std::string> string_list(const json& j, const std::string& where)
{
    if (!j.is_array())
        throw ModelError({where + " must be an array of strings"});
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string())
            throw ModelError({where + " must be an array of strings"});
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::vector<std::vector<std::string>> blocks_with_singletons(const json& j, const std::string& where,
                                                            const std::vector<std::string>& states)
{
    if (!j.is_array())
        throw ModelError({where + " must be an array of blocks"});
    std::vector<std::vector<std::string>> out;
    std::set<std::string> mentioned;
    for (const auto& b : j) {
        out.push_back(string_list(b, where));
        mentioned.insert(out.back().begin(), out.back().end());
    }
    for (const auto& s : states)
        if (!mentioned.contains(s))
            out.push_back({s});
    return out;
}

json blocks_json(const std::vector<std::vector<std::string>>& blocks)
{
    json out = json::array();
    for (const auto& b : blocks)
        out.push_back(b);
    return out;
}

}  // namespace

ModelDescription description_from_json(const json& j)
{
    if (!j.is_object())
        throw ModelError({"model must be a JSON object"});
    for (const char* key : {"agents", "states", "relations"})
        if (!j.contains(key))
            throw ModelError({std::string("missing \"") + key + "\""});

    ModelDescription d;
    d.agents = string_list(j.at("agents"), "agents");
    d.states = string_list(j.at("states"), "states");
    if (j.contains("props"))
        d.props = string_list(j.at("props"), "props");

    const auto& rel = j.at("relations");
    if (!rel.is_object())
        throw ModelError({"relations must be an object keyed by agent"});
    for (const auto& [agent, blocks] : rel.items())
        d.relations[agent] = blocks_with_singletons(blocks, "relations." + agent, d.states);

    if (j.contains("valuation")) {
        const auto& val = j.at("valuation");
        if (!val.is_object())
            throw ModelError({"valuation must be an object keyed by proposition"});
        for (const auto& [prop, states] : val.items())
            d.valuation[prop] = string_list(states, "valuation." + prop);
    }

    if (j.contains("group_relations")) {
        const auto& gr = j.at("group_relations");
        if (!gr.is_object())
            throw ModelError({"group_relations must be an object keyed by group"});
        auto& out = d.group_relations.emplace();
        for (const auto& [key, blocks] : gr.items())
            out[key] = blocks_with_singletons(blocks, "group_relations." + key, d.states);
    }
    return d;
}

json to_json(const ModelDescription& d)
{
    json j;
    j["agents"] = d.agents;
    j["props"] = d.props;
    j["states"] = d.states;
    json rel = json::object();
    for (const auto& a : d.agents)
        if (auto it = d.relations.find(a); it != d.relations.end())
            rel[a] = blocks_json(it->second);
    j["relations"] = rel;
    json val = json::object();
    for (const auto& [p, ext] : d.valuation)
        val[p] = ext;
    j["valuation"] = val;
    if (d.group_relations) {
        json gr = json::object();
        for (const auto& [key, blocks] : *d.group_relations)
            gr[key] = blocks_json(blocks);
        j["group_relations"] = gr;
    }
    return j;
}

json to_json(const Model& m) { return to_json(m.describe()); }
json to_json(const PreModel& p) { return to_json(p.describe()); }

Structure structure_from_json(const json& j)
{
    auto d = description_from_json(j);
    if (d.group_relations)
        return PreModel::from_description(d);
    return Model::from_description(d);
}

Structure load_structure(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ModelError({path.string() + ": " + e.what()});
    }
    return structure_from_json(j);
}

Model load_model(const std::filesystem::path& path)
{
    auto s = load_structure(path);
    if (auto* m = std::get_if<Model>(&s))
        return *m;
    throw ModelError({path.string() + ": expected a model, found a pre-model"});
}

}  // namespace epi
