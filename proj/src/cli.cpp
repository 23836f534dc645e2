#include "epi/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "epi/bisim.hpp"
#include "epi/checker.hpp"
#include "epi/model_io.hpp"
#include "epi/parser.hpp"
#include "epi/rewrite.hpp"
#include "epi/schema.hpp"
#include "epi/search.hpp"

namespace epi::cli {

namespace {

using nlohmann::json;

// Raised for bad input that CLI11 cannot see (formulas, states, files).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr const char* kDefaultAgents = "1,2,3,4,5,6,7,8,9";

const Model& base_of(const Structure& s)
{
    return std::visit([](const auto& x) -> const Model& {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Model>)
            return x;
        else
            return x.base();
    }, s);
}

PreModel pre_of(const Structure& s)
{
    if (auto* m = std::get_if<Model>(&s))
        return as_premodel(*m);
    return std::get<PreModel>(s);
}

Structure load(const std::string& path)
{
    try {
        return load_structure(path);
    } catch (const ModelError& e) {
        throw InputError(path + ": " + e.what());
    }
}

AgentSet agent_set(const std::vector<std::string>& agents) { return AgentSet(agents.begin(), agents.end()); }

std::vector<std::string> agent_list(const std::string& text, const char* flag)
{
    try {
        return parse_group(text).members();
    } catch (const std::exception& e) {
        throw InputError(std::string(flag) + ": " + e.what());
    }
}

Formula formula_arg(const std::string& text, const AgentSet& agents)
{
    try {
        return parse(text, agents);
    } catch (const ParseError& e) {
        throw InputError(std::string("--formula: ") + e.what());
    }
}

Group group_arg(const std::string& text, const char* flag)
{
    try {
        return parse_group(text);
    } catch (const std::exception& e) {
        throw InputError(std::string(flag) + ": " + e.what());
    }
}

std::size_t state_arg(const Model& m, const std::string& name, const char* flag)
{
    auto i = m.vocabulary().state_index(name);
    if (!i)
        throw InputError(std::string(flag) + ": unknown state '" + name + "'");
    return *i;
}

std::string joined(const std::vector<std::string>& v, const char* sep = ",")
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? sep : "") + v[i];
    return out;
}

void write_json(const json& j, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << j.dump(2) << "\n";
        return;
    }
    std::ofstream file(path);
    if (!file)
        throw InputError("cannot write " + path);
    file << j.dump(2) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Workbench for epistemic logic with resolution operators", "epi"};
    app.require_subcommand(1);
    // The chosen subcommand stores its work here; it runs after parsing succeeds.
    std::function<int()> action;
    bool as_json = false;

    // check
    std::string model_path, state, formula_text, group_text, out_path;
    auto* check = app.add_subcommand("check", "Evaluate a formula on a model (pseudo semantics for pre-models)");
    check->add_option("--model", model_path, "Model or pre-model JSON file")->required()->check(CLI::ExistingFile);
    check->add_option("--state", state, "State to evaluate at; omitted prints the extension");
    check->add_option("--formula", formula_text, "Formula")->required();
    check->add_flag("--json", as_json, "Machine-readable output");
    check->callback([&] {
        action = [&] {
            Structure s = load(model_path);
            const Model& base = base_of(s);
            Formula f = formula_arg(formula_text, agent_set(base.agents()));
            StateSet ext;
            try {
                ext = std::holds_alternative<Model>(s) ? extension(std::get<Model>(s), f)
                                                        : extension_pseudo(std::get<PreModel>(s), f);
            } catch (const std::invalid_argument& e) {
                throw InputError(std::string("--formula: ") + e.what());
            }
            if (!state.empty()) {
                const bool value = ext[state_arg(base, state, "--state")];
                if (as_json)
                    out << json{{"formula", render(f)}, {"state", state}, {"value", value}}.dump() << "\n";
                else
                    out << (value ? "true" : "false") << "\n";
                return value ? kTrue : kFalse;
            }
            auto names = state_names(base, ext);
            const bool everywhere = names.size() == base.num_states();
            if (as_json)
                out << json{{"formula", render(f)}, {"extension", names}, {"valid", everywhere}}.dump() << "\n";
            else
                out << "{" << joined(names) << "}\n";
            return everywhere ? kTrue : kFalse;
        };
    });

    // resolve
    auto* res = app.add_subcommand("resolve", "Apply the resolution update for a group");
    res->add_option("--model", model_path, "Model or pre-model JSON file")->required()->check(CLI::ExistingFile);
    res->add_option("--group", group_text, "Group, e.g. 1,2")->required();
    res->add_option("--out", out_path, "Write the updated model here instead of stdout");
    res->callback([&] {
        action = [&] {
            Structure s = load(model_path);
            Group g = group_arg(group_text, "--group");
            try {
                if (auto* m = std::get_if<Model>(&s))
                    write_json(to_json(resolve(*m, g)), out_path, out);
                else
                    write_json(to_json(resolve_pre(std::get<PreModel>(s), g)), out_path, out);
            } catch (const std::invalid_argument& e) {
                throw InputError(std::string("--group: ") + e.what());
            }
            return kTrue;
        };
    });

    // reduce / closure share the agent declaration
    std::string agents_text = kDefaultAgents;
    auto* red = app.add_subcommand("reduce", "Rewrite a formula to reduction normal form");
    red->add_option("--formula", formula_text, "Formula")->required();
    red->add_option("--agents", agents_text, "Declared agents")->capture_default_str();
    red->add_flag("--json", as_json, "Machine-readable output");
    red->callback([&] {
        action = [&] {
            Formula f = formula_arg(formula_text, agent_set(agent_list(agents_text, "--agents")));
            Formula r = reduce(f);
            if (as_json)
                out << json{{"input", render(f)}, {"output", render(r)}, {"r_free", !contains_op(r, Op::Resolve)}}.dump()
                    << "\n";
            else
                out << render(r) << "\n";
            return kTrue;
        };
    });

    auto* clo = app.add_subcommand("closure", "List the closure set of a formula");
    clo->add_option("--formula", formula_text, "Formula without announcements")->required();
    clo->add_option("--agents", agents_text, "Declared agents")->capture_default_str();
    clo->add_flag("--json", as_json, "Machine-readable output");
    clo->callback([&] {
        action = [&] {
            Formula f = formula_arg(formula_text, agent_set(agent_list(agents_text, "--agents")));
            std::set<Formula> cl;
            try {
                cl = closure(f);
            } catch (const std::invalid_argument& e) {
                throw InputError(std::string("--formula: ") + e.what());
            }
            std::vector<std::string> rendered;
            for (const auto& g : cl)
                rendered.push_back(render(g));
            if (as_json)
                out << json{{"formula", render(f)}, {"closure", rendered}}.dump() << "\n";
            else
                for (const auto& r : rendered)
                    out << r << "\n";
            return kTrue;
        };
    });

    // delta
    std::string target_text, sequence_text;
    auto* del = app.add_subcommand("delta", "Group index after pushing a relation through a resolution sequence");
    del->add_option("--target", target_text, "Agent or group, e.g. 2 or 1,3")->required();
    del->add_option("--sequence", sequence_text, "Groups separated by ';', first applied first");
    del->add_flag("--json", as_json, "Machine-readable output");
    del->callback([&] {
        action = [&] {
            Group target = group_arg(target_text, "--target");
            std::vector<Group> seq;
            try {
                seq = parse_group_sequence(sequence_text);
            } catch (const std::exception& e) {
                throw InputError(std::string("--sequence: ") + e.what());
            }
            Group d = delta(target, seq);
            if (as_json)
                out << json{{"delta", d.key()}}.dump() << "\n";
            else
                out << d.key() << "\n";
            return kTrue;
        };
    });

    // bisim
    std::string left_path, right_path, left_state, right_state;
    bool trans = false;
    auto* bis = app.add_subcommand("bisim", "Decide (trans-)bisimilarity of two pointed structures");
    bis->add_option("--left", left_path, "Left model file")->required()->check(CLI::ExistingFile);
    bis->add_option("--left-state", left_state, "Left state")->required();
    bis->add_option("--right", right_path, "Right model or pre-model file")->required()->check(CLI::ExistingFile);
    bis->add_option("--right-state", right_state, "Right state")->required();
    bis->add_flag("--trans", trans, "Trans-bisimulation from a model (left) to a pre-model (right)");
    bis->add_flag("--json", as_json, "Machine-readable output");
    bis->callback([&] {
        action = [&] {
            Structure l = load(left_path);
            Structure r = load(right_path);
            PreModel right = pre_of(r);
            const std::size_t s = state_arg(base_of(l), left_state, "--left-state");
            const std::size_t t = state_arg(right.base(), right_state, "--right-state");
            std::optional<Relation> z;
            try {
                if (trans) {
                    if (!std::holds_alternative<Model>(l))
                        throw InputError("--left: trans-bisimulation needs a model, not a pre-model");
                    z = trans_bisimilar(std::get<Model>(l), s, right, t);
                } else {
                    z = bisimilar_pre(pre_of(l), s, right, t);
                }
            } catch (const std::invalid_argument& e) {
                throw InputError(e.what());
            }
            if (as_json) {
                json j{{"bisimilar", z.has_value()}};
                if (z)
                    j["relation"] = to_json(*z, base_of(l).vocabulary(), right.vocabulary());
                out << j.dump() << "\n";
            } else if (z) {
                out << "bisimilar: " << to_json(*z, base_of(l).vocabulary(), right.vocabulary()).dump() << "\n";
            } else {
                out << "not bisimilar\n";
            }
            return z ? kTrue : kFalse;
        };
    });

    // search
    std::string mode = "sat", atoms_text;
    std::string search_agents_text;
    SearchBounds bounds;
    auto* sea = app.add_subcommand("search", "Bounded search for a model or countermodel");
    sea->add_option("--formula", formula_text, "Formula")->required();
    sea->add_option("--mode", mode, "sat: satisfying model; counter: countermodel")
        ->check(CLI::IsMember({"sat", "counter"}))
        ->capture_default_str();
    sea->add_option("--max-states", bounds.max_states, "Largest state count")
        ->check(CLI::Range(1, 8))
        ->capture_default_str();
    sea->add_option("--agents", search_agents_text, "Agents (default: those in the formula)");
    sea->add_option("--atoms", atoms_text, "Atoms (default: those in the formula)");
    sea->add_option("--threads", bounds.threads, "Worker threads (0: all cores)")->capture_default_str();
    sea->add_option("--out", out_path, "Write the witness model here");
    sea->add_flag("--json", as_json, "Machine-readable output");
    sea->callback([&] {
        action = [&] {
            AgentSet declared = search_agents_text.empty() ? agent_set(agent_list(kDefaultAgents, "--agents"))
                                                           : agent_set(agent_list(search_agents_text, "--agents"));
            Formula f = formula_arg(formula_text, declared);
            if (!search_agents_text.empty())
                bounds.agents.assign(declared.begin(), declared.end());
            if (!atoms_text.empty())
                bounds.atoms = agent_list(atoms_text, "--atoms");
            SearchOutcome o;
            try {
                o = mode == "sat" ? find_model(f, bounds) : find_countermodel(f, bounds);
            } catch (const std::overflow_error& e) {
                throw InputError(e.what());
            }
            if (o.witness && !out_path.empty())
                write_json(to_json(o.witness->model), out_path, out);
            if (as_json) {
                json j = to_json(o);
                j["formula"] = render(f);
                j["mode"] = mode;
                out << j.dump() << "\n";
            } else if (o.witness) {
                out << (mode == "sat" ? "model" : "countermodel") << " at state " << o.witness->state_name() << " ("
                    << o.models_examined << " models examined)\n";
                if (out_path.empty())
                    out << to_json(o.witness->model).dump() << "\n";
            } else {
                out << "no " << (mode == "sat" ? "model" : "countermodel") << " up to " << o.max_states
                    << " states (" << o.models_examined << " models examined)\n";
            }
            return o.found() ? kTrue : kFalse;
        };
    });

    // axioms
    std::string system_text = "RD", mutation_text = "none";
    std::string schema_agents = "1,2", schema_atoms = "p";
    bool rrc_only = false;
    SearchBounds schema_bounds;
    auto* axi = app.add_subcommand("axioms", "Check axiom schemata and rules on all small models");
    axi->add_option("--system", system_text, "RD or RCD")
        ->check(CLI::IsMember({"RD", "RCD", "rd", "rcd"}))
        ->capture_default_str();
    axi->add_option("--mutation", mutation_text, "none, rd1-intersection, td-converse or c1-weakened")
        ->check(CLI::IsMember({"none", "rd1-intersection", "td-converse", "c1-weakened"}))
        ->capture_default_str();
    axi->add_flag("--rrc", rrc_only, "Only the model-local RR_C rule check");
    axi->add_option("--max-states", schema_bounds.max_states, "Largest state count")
        ->check(CLI::Range(1, 6))
        ->capture_default_str();
    axi->add_option("--agents", schema_agents, "Agents")->capture_default_str();
    axi->add_option("--atoms", schema_atoms, "Atoms")->capture_default_str();
    axi->add_option("--instances", schema_bounds.instance_count, "Instances per schema")->capture_default_str();
    axi->add_option("--seed", schema_bounds.seed, "Generator seed")->capture_default_str();
    axi->add_option("--depth", schema_bounds.depth, "Depth of generated subformulas")->capture_default_str();
    axi->add_option("--threads", schema_bounds.threads, "Worker threads (0: all cores)")->capture_default_str();
    axi->add_flag("--json", as_json, "Machine-readable output");
    axi->callback([&] {
        action = [&] {
            schema_bounds.agents = agent_list(schema_agents, "--agents");
            schema_bounds.atoms = agent_list(schema_atoms, "--atoms");
            SchemaReport rep;
            try {
                rep = rrc_only ? check_rule_rrc(schema_bounds)
                               : check_schema(*parse_system(system_text), schema_bounds, *parse_mutation(mutation_text));
            } catch (const std::overflow_error& e) {
                throw InputError(e.what());
            }
            if (as_json)
                out << to_json(rep).dump(2) << "\n";
            else
                out << to_text(rep);
            return rep.total_violations() == 0 ? kTrue : kFalse;
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        // Help and version requests exit 0; everything else is a usage error.
        if (e.get_exit_code() == 0)
            return app.exit(e, out, err);
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        return action();
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace epi::cli
