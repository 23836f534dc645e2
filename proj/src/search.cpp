#include "epi/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "epi/model_io.hpp"

namespace epi {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    if (a != 0 && b > UINT64_MAX / a)
        throw std::overflow_error("model space too large to enumerate");
    return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b)
{
    if (b > UINT64_MAX - a)
        throw std::overflow_error("model space too large to enumerate");
    return a + b;
}

unsigned worker_count(unsigned requested)
{
    if (requested != 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

template <class T>
std::vector<std::string> sorted_unique(std::vector<std::string> v, T less)
{
    std::sort(v.begin(), v.end(), less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

SearchOutcome search(const Formula& f, const SearchBounds& bounds, bool want)
{
    ModelSpace space(search_agents(f, bounds), search_atoms(f, bounds), bounds.max_states);
    CompiledFormula compiled(f, space.agents(), space.atoms());
    auto point = [&](const Model& m) -> std::optional<std::size_t> {
        StateSet ext = compiled.extension(m);
        for (std::size_t s = 0; s < ext.size(); ++s)
            if (ext[s] == want)
                return s;
        return std::nullopt;
    };
    auto hit = parallel_find_first(space.size(), bounds.threads,
                                   [&](std::uint64_t i) { return point(space.at(i)).has_value(); });
    SearchOutcome out;
    out.max_states = bounds.max_states;
    if (!hit) {
        out.models_examined = space.size();
        return out;
    }
    Model m = space.at(*hit);
    std::size_t s = *point(m);
    out.witness = PointedModel{std::move(m), s};
    out.models_examined = *hit + 1;
    return out;
}

}  // namespace

ModelSpace::ModelSpace(std::vector<std::string> agents, std::vector<std::string> atoms, std::size_t max_states)
    : agents_(sorted_unique(std::move(agents), AgentLess{})),
      atoms_(sorted_unique(std::move(atoms), std::less<>{})),
      max_states_(max_states)
{
    if (max_states_ == 0)
        throw std::invalid_argument("max states must be at least 1");
    for (std::size_t n = 1; n <= max_states_; ++n) {
        if (n * atoms_.size() >= 64)
            throw std::overflow_error("model space too large to enumerate");
        Layer layer;
        layer.first = total_;
        layer.valuations = std::uint64_t{1} << (n * atoms_.size());
        layer.partitions = all_partitions(n);
        layer.count = layer.valuations;
        for (std::size_t a = 0; a < agents_.size(); ++a)
            layer.count = checked_mul(layer.count, layer.partitions.size());
        auto vocab = std::make_shared<Vocabulary>();
        for (std::size_t s = 0; s < n; ++s)
            vocab->states.push_back(std::to_string(s));
        vocab->agents = agents_;
        vocab->atoms = atoms_;
        layer.vocab = std::move(vocab);
        total_ = checked_add(total_, layer.count);
        layers_.push_back(std::move(layer));
    }
}

Model ModelSpace::at(std::uint64_t index) const
{
    if (index >= total_)
        throw std::out_of_range("model index out of range");
    auto it = std::find_if(layers_.begin(), layers_.end(),
                           [&](const Layer& l) { return index < l.first + l.count; });
    const Layer& layer = *it;
    const std::size_t n = layer.vocab->states.size();
    std::uint64_t local = index - layer.first;
    const std::uint64_t bits = local % layer.valuations;
    local /= layer.valuations;

    std::vector<Partition> relations(agents_.size());
    for (std::size_t a = agents_.size(); a-- > 0;) {
        relations[a] = layer.partitions[local % layer.partitions.size()];
        local /= layer.partitions.size();
    }
    std::vector<StateSet> valuation(atoms_.size(), StateSet(n, false));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t j = 0; j < atoms_.size(); ++j)
            valuation[j][s] = (bits >> (s * atoms_.size() + j)) & 1;
    return Model(layer.vocab, std::move(valuation), std::move(relations));
}

void ModelSpace::for_each(const std::function<void(const Model&)>& f) const
{
    for (std::uint64_t i = 0; i < total_; ++i)
        f(at(i));
}

ModelSpace enumerate_models(const SearchBounds& bounds)
{
    return ModelSpace(bounds.agents, bounds.atoms, bounds.max_states);
}

std::vector<std::string> search_agents(const Formula& f, const SearchBounds& bounds)
{
    if (!bounds.agents.empty())
        return bounds.agents;
    auto used = agents_of(f);
    if (used.empty())
        return {"1"};
    return {used.begin(), used.end()};
}

std::vector<std::string> search_atoms(const Formula& f, const SearchBounds& bounds)
{
    if (!bounds.atoms.empty())
        return bounds.atoms;
    auto used = atoms_of(f);
    return {used.begin(), used.end()};
}

nlohmann::json to_json(const SearchOutcome& o)
{
    nlohmann::json j;
    j["verdict"] = o.found() ? "witness" : "exhausted";
    j["max_states"] = o.max_states;
    j["models_examined"] = o.models_examined;
    if (o.witness) {
        j["model"] = to_json(o.witness->model);
        j["state"] = o.witness->state_name();
    }
    return j;
}

SearchOutcome find_model(const Formula& f, const SearchBounds& bounds) { return search(f, bounds, true); }

SearchOutcome find_countermodel(const Formula& f, const SearchBounds& bounds) { return search(f, bounds, false); }

std::optional<std::uint64_t> parallel_find_first(std::uint64_t count, unsigned threads,
                                                 const std::function<bool(std::uint64_t)>& pred)
{
    constexpr std::uint64_t kChunk = 64;
    const unsigned workers = worker_count(threads);
    if (workers <= 1 || count <= kChunk) {
        for (std::uint64_t i = 0; i < count; ++i)
            if (pred(i))
                return i;
        return std::nullopt;
    }

    // Chunks are claimed in increasing order, so once some index is found
    // every smaller index lies in a chunk that is already being scanned.
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> best{count};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        try {
            for (;;) {
                const std::uint64_t start = next.fetch_add(kChunk);
                if (start >= count || start >= best.load())
                    return;
                const std::uint64_t stop = std::min(count, start + kChunk);
                for (std::uint64_t i = start; i < stop && i < best.load(); ++i) {
                    if (pred(i)) {
                        std::uint64_t cur = best.load();
                        while (i < cur && !best.compare_exchange_weak(cur, i)) {}
                        return;
                    }
                }
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error)
                error = std::current_exception();
            best.store(0);
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back(work);
    pool.clear();
    if (error)
        std::rethrow_exception(error);
    if (best.load() == count)
        return std::nullopt;
    return best.load();
}

void parallel_for(std::uint64_t count, unsigned threads, const std::function<void(std::uint64_t)>& body)
{
    const unsigned workers = worker_count(threads);
    if (workers <= 1 || count <= 1) {
        for (std::uint64_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        try {
            for (std::uint64_t i; (i = next.fetch_add(1)) < count;)
                body(i);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error)
                error = std::current_exception();
            next.store(count);
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back(work);
    pool.clear();
    if (error)
        std::rethrow_exception(error);
}

void for_each_pseudo_model(const std::vector<std::string>& agents, const std::vector<std::string>& atoms,
                           std::size_t max_states, const std::function<void(const PreModel&)>& f)
{
    ModelSpace space(agents, atoms, max_states);
    const std::size_t k = space.agents().size();
    const GroupMask full = static_cast<GroupMask>((std::size_t{1} << k) - 1);

    // Groups of two or more agents, smaller groups first, so every proper
    // subgroup is assigned before the group itself.
    std::vector<GroupMask> order;
    for (GroupMask g = 1; g <= full; ++g)
        if (std::popcount(g) >= 2)
            order.push_back(g);
    std::stable_sort(order.begin(), order.end(),
                     [](GroupMask a, GroupMask b) { return std::popcount(a) < std::popcount(b); });

    std::vector<std::vector<Partition>> partitions(max_states + 1);
    for (std::size_t n = 1; n <= max_states; ++n)
        partitions[n] = all_partitions(n);

    space.for_each([&](const Model& m) {
        std::vector<Partition> groups(std::size_t{full} + 1);
        for (std::size_t i = 0; i < k; ++i)
            groups[GroupMask{1} << i] = m.relation(i);
        const auto& candidates = partitions[m.num_states()];
        std::function<void(std::size_t)> assign = [&](std::size_t pos) {
            if (pos == order.size()) {
                f(PreModel(m, groups));
                return;
            }
            const GroupMask g = order[pos];
            // Monotonicity only needs the maximal proper subgroups.
            std::optional<Partition> bound;
            for (std::size_t i = 0; i < k; ++i)
                if (g & (GroupMask{1} << i)) {
                    const Partition& sub = groups[g & ~(GroupMask{1} << i)];
                    bound = bound ? meet(*bound, sub) : sub;
                }
            for (const auto& p : candidates)
                if (p.refines(*bound)) {
                    groups[g] = p;
                    assign(pos + 1);
                }
        };
        assign(0);
    });
}

}  // namespace epi
