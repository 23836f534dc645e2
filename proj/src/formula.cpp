#include "epi/formula.hpp"

#include <algorithm>
#include <stdexcept>

namespace epi {

namespace {

bool all_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string trim(std::string_view s)
{
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

bool agent_less(std::string_view a, std::string_view b)
{
    bool da = all_digits(a), db = all_digits(b);
    if (da && db) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    }
    if (da != db)
        return da;
    return a < b;
}

// ---------------------------------------------------------------------------
// Group

Group::Group(std::initializer_list<std::string> members) : Group(std::vector<std::string>(members)) {}

Group::Group(std::vector<std::string> members) : members_(std::move(members))
{
    if (members_.empty())
        throw std::invalid_argument("empty group");
    std::sort(members_.begin(), members_.end(), AgentLess{});
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

Group Group::singleton(std::string agent)
{
    return Group(std::vector<std::string>{std::move(agent)});
}

bool Group::contains(std::string_view agent) const
{
    return std::binary_search(members_.begin(), members_.end(), agent, AgentLess{});
}

bool Group::intersects(const Group& other) const
{
    return std::any_of(members_.begin(), members_.end(),
                       [&](const std::string& a) { return other.contains(a); });
}

bool Group::subset_of(const Group& other) const
{
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end(),
                         AgentLess{});
}

Group Group::unite(const Group& other) const
{
    std::vector<std::string> out;
    std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                   std::back_inserter(out), AgentLess{});
    return Group(std::move(out));
}

std::optional<Group> Group::intersect(const Group& other) const
{
    std::vector<std::string> out;
    std::set_intersection(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                          std::back_inserter(out), AgentLess{});
    if (out.empty())
        return std::nullopt;
    return Group(std::move(out));
}

std::string Group::key() const
{
    std::string out;
    for (const auto& m : members_) {
        if (!out.empty())
            out += ',';
        out += m;
    }
    return out;
}

std::strong_ordering operator<=>(const Group& a, const Group& b)
{
    const auto& x = a.members_;
    const auto& y = b.members_;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (agent_less(x[i], y[i]))
            return std::strong_ordering::less;
        if (agent_less(y[i], x[i]))
            return std::strong_ordering::greater;
    }
    return x.size() <=> y.size();
}

Group parse_group(std::string_view text)
{
    std::vector<std::string> members;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto piece = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!piece.empty())
            members.push_back(std::move(piece));
        else if (comma != std::string_view::npos || !members.empty())
            throw std::invalid_argument("malformed group '" + std::string(text) + "'");
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    if (members.empty())
        throw std::invalid_argument("empty group");
    return Group(std::move(members));
}

std::vector<Group> parse_group_sequence(std::string_view text)
{
    std::vector<Group> out;
    if (trim(text).empty())
        return out;
    std::size_t start = 0;
    while (true) {
        auto semi = text.find(';', start);
        out.push_back(parse_group(text.substr(start, semi == std::string_view::npos ? std::string_view::npos : semi - start)));
        if (semi == std::string_view::npos)
            break;
        start = semi + 1;
    }
    return out;
}

std::string_view to_string(LanguageTag tag)
{
    switch (tag) {
    case LanguageTag::ELD: return "ELD";
    case LanguageTag::ELCD: return "ELCD";
    case LanguageTag::PACD: return "PACD";
    case LanguageTag::RD: return "RD";
    case LanguageTag::RCD: return "RCD";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
    Op op;
    std::string name;
    std::optional<Group> group;
    std::optional<Formula> left;
    std::optional<Formula> right;
    std::size_t size;
    std::size_t depth;
};

Formula make_node(Op op, std::string name, std::optional<Group> group, std::optional<Formula> left,
                  std::optional<Formula> right)
{
    std::size_t size = 1 + (left ? left->size() : 0) + (right ? right->size() : 0);
    std::size_t child_depth = std::max(left ? left->depth() : 0, right ? right->depth() : 0);
    bool modal = op == Op::Know || op == Op::Dist || op == Op::Common || op == Op::Resolve || op == Op::Announce;
    std::size_t depth = child_depth + (modal ? 1 : 0);
    auto node = std::make_shared<const Formula::Node>(Formula::Node{
        op, std::move(name), std::move(group), std::move(left), std::move(right), size, depth});
    return Formula(std::move(node));
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }

const Group& Formula::group() const
{
    if (!node_->group)
        throw std::logic_error("formula has no group");
    return *node_->group;
}

const Formula& Formula::left() const
{
    if (!node_->left)
        throw std::logic_error("formula has no operand");
    return *node_->left;
}

const Formula& Formula::right() const
{
    if (!node_->right)
        throw std::logic_error("formula has no right operand");
    return *node_->right;
}

const Formula& Formula::body() const
{
    return op() == Op::Announce ? right() : left();
}

bool Formula::is_modal() const
{
    switch (op()) {
    case Op::Know:
    case Op::Dist:
    case Op::Common:
    case Op::Resolve: return true;
    default: return false;
    }
}

bool Formula::is_binary() const
{
    switch (op()) {
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff: return true;
    default: return false;
    }
}

std::size_t Formula::size() const { return node_->size; }

/// Modal depth: nesting of K/D/C/R/announcement operators.
std::size_t Formula::depth() const { return node_->depth; }

std::strong_ordering operator<=>(const Formula& a, const Formula& b)
{
    if (a.node_ == b.node_)
        return std::strong_ordering::equal;
    if (auto c = a.op() <=> b.op(); c != 0)
        return c;
    if (auto c = a.name() <=> b.name(); c != 0)
        return c;
    if (a.node_->group && b.node_->group)
        if (auto c = *a.node_->group <=> *b.node_->group; c != 0)
            return c;
    if (a.node_->left)
        if (auto c = *a.node_->left <=> *b.node_->left; c != 0)
            return c;
    if (a.node_->right)
        if (auto c = *a.node_->right <=> *b.node_->right; c != 0)
            return c;
    return std::strong_ordering::equal;
}

bool operator==(const Formula& a, const Formula& b)
{
    return (a <=> b) == 0;
}

Formula top() { return make_node(Op::Top, {}, std::nullopt, std::nullopt, std::nullopt); }
Formula bottom() { return make_node(Op::Bottom, {}, std::nullopt, std::nullopt, std::nullopt); }

Formula atom(std::string name)
{
    if (name.empty())
        throw std::invalid_argument("empty atom name");
    return make_node(Op::Atom, std::move(name), std::nullopt, std::nullopt, std::nullopt);
}

Formula neg(Formula f) { return make_node(Op::Not, {}, std::nullopt, std::move(f), std::nullopt); }
Formula conj(Formula a, Formula b) { return make_node(Op::And, {}, std::nullopt, std::move(a), std::move(b)); }
Formula disj(Formula a, Formula b) { return make_node(Op::Or, {}, std::nullopt, std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) { return make_node(Op::Implies, {}, std::nullopt, std::move(a), std::move(b)); }
Formula iff(Formula a, Formula b) { return make_node(Op::Iff, {}, std::nullopt, std::move(a), std::move(b)); }

Formula know(std::string agent, Formula f)
{
    if (agent.empty())
        throw std::invalid_argument("empty agent id");
    return make_node(Op::Know, std::move(agent), std::nullopt, std::move(f), std::nullopt);
}

Formula dist(Group g, Formula f) { return make_node(Op::Dist, {}, std::move(g), std::move(f), std::nullopt); }
Formula common(Group g, Formula f) { return make_node(Op::Common, {}, std::move(g), std::move(f), std::nullopt); }
Formula resolve(Group g, Formula f) { return make_node(Op::Resolve, {}, std::move(g), std::move(f), std::nullopt); }

Formula announce(Formula announced, Formula body)
{
    return make_node(Op::Announce, {}, std::nullopt, std::move(announced), std::move(body));
}

Formula everybody(const Group& g, const Formula& f)
{
    const auto& m = g.members();
    Formula out = know(m.front(), f);
    for (std::size_t i = 1; i < m.size(); ++i)
        out = conj(out, know(m[i], f));
    return out;
}

Formula resolve_prefix(const std::vector<Group>& prefix, Formula f)
{
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
        f = resolve(*it, std::move(f));
    return f;
}

std::pair<std::vector<Group>, Formula> split_resolve_prefix(const Formula& f)
{
    std::vector<Group> prefix;
    Formula cur = f;
    while (cur.op() == Op::Resolve) {
        prefix.push_back(cur.group());
        Formula next = cur.body();
        cur = next;
    }
    return {std::move(prefix), cur};
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength; higher binds tighter.
int level(Op op)
{
    switch (op) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    default: return 5;
    }
}

std::string_view symbol(Op op)
{
    switch (op) {
    case Op::And: return " & ";
    case Op::Or: return " | ";
    case Op::Implies: return " -> ";
    case Op::Iff: return " <-> ";
    default: return "";
    }
}

bool numeric_agent(std::string_view a) { return all_digits(a); }

void render_into(const Formula& f, std::string& out);

void render_operand(const Formula& f, int min_level, std::string& out)
{
    if (level(f.op()) < min_level) {
        out += '(';
        render_into(f, out);
        out += ')';
    } else {
        render_into(f, out);
    }
}

void render_modal_body(const Formula& body, std::string& out)
{
    out += ' ';
    render_operand(body, 5, out);
}

void render_into(const Formula& f, std::string& out)
{
    switch (f.op()) {
    case Op::Top: out += "true"; return;
    case Op::Bottom: out += "false"; return;
    case Op::Atom: out += f.name(); return;
    case Op::Not:
        out += '~';
        render_operand(f.body(), 5, out);
        return;
    case Op::And:
    case Op::Or:
    case Op::Iff: {
        // left-associative
        int l = level(f.op());
        render_operand(f.left(), l, out);
        out += symbol(f.op());
        render_operand(f.right(), l + 1, out);
        return;
    }
    case Op::Implies: {
        // right-associative
        int l = level(f.op());
        render_operand(f.left(), l + 1, out);
        out += symbol(f.op());
        render_operand(f.right(), l, out);
        return;
    }
    case Op::Know:
        out += 'K';
        if (!numeric_agent(f.name()))
            out += ' ';
        out += f.name();
        render_modal_body(f.body(), out);
        return;
    case Op::Dist:
    case Op::Common:
    case Op::Resolve:
        out += f.op() == Op::Dist ? 'D' : f.op() == Op::Common ? 'C' : 'R';
        out += '{';
        out += f.group().key();
        out += '}';
        render_modal_body(f.body(), out);
        return;
    case Op::Announce:
        out += '[';
        render_into(f.left(), out);
        out += ']';
        render_modal_body(f.right(), out);
        return;
    }
}

template <class Visit>
void walk(const Formula& f, Visit&& visit)
{
    visit(f);
    switch (f.op()) {
    case Op::Top:
    case Op::Bottom:
    case Op::Atom: return;
    case Op::Not:
    case Op::Know:
    case Op::Dist:
    case Op::Common:
    case Op::Resolve: walk(f.left(), visit); return;
    default:
        walk(f.left(), visit);
        walk(f.right(), visit);
        return;
    }
}

}  // namespace

std::string render(const Formula& f)
{
    std::string out;
    render_into(f, out);
    return out;
}

std::set<Formula> subformulas(const Formula& f)
{
    std::set<Formula> out;
    walk(f, [&](const Formula& g) { out.insert(g); });
    return out;
}

AgentSet agents_of(const Formula& f)
{
    AgentSet out;
    walk(f, [&](const Formula& g) {
        if (g.op() == Op::Know)
            out.insert(g.name());
        else if (g.op() == Op::Dist || g.op() == Op::Common || g.op() == Op::Resolve)
            out.insert(g.group().members().begin(), g.group().members().end());
    });
    return out;
}

std::set<std::string> atoms_of(const Formula& f)
{
    std::set<std::string> out;
    walk(f, [&](const Formula& g) {
        if (g.op() == Op::Atom)
            out.insert(g.name());
    });
    return out;
}

bool contains_op(const Formula& f, Op op)
{
    bool found = false;
    walk(f, [&](const Formula& g) { found = found || g.op() == op; });
    return found;
}

std::optional<LanguageTag> language_of(const Formula& f)
{
    bool c = contains_op(f, Op::Common);
    bool r = contains_op(f, Op::Resolve);
    bool a = contains_op(f, Op::Announce);
    if (a && r)
        return std::nullopt;
    if (a)
        return LanguageTag::PACD;
    if (r)
        return c ? LanguageTag::RCD : LanguageTag::RD;
    return c ? LanguageTag::ELCD : LanguageTag::ELD;
}

Formula desugar(const Formula& f)
{
    switch (f.op()) {
    case Op::Top:
    case Op::Atom: return f;
    case Op::Bottom: return neg(top());
    case Op::Not: return neg(desugar(f.body()));
    case Op::And: return conj(desugar(f.left()), desugar(f.right()));
    case Op::Or: return neg(conj(neg(desugar(f.left())), neg(desugar(f.right()))));
    case Op::Implies: return neg(conj(desugar(f.left()), neg(desugar(f.right()))));
    case Op::Iff: {
        auto a = desugar(f.left());
        auto b = desugar(f.right());
        return conj(neg(conj(a, neg(b))), neg(conj(b, neg(a))));
    }
    case Op::Know: return know(f.name(), desugar(f.body()));
    case Op::Dist: return dist(f.group(), desugar(f.body()));
    case Op::Common: return common(f.group(), desugar(f.body()));
    case Op::Resolve: return resolve(f.group(), desugar(f.body()));
    case Op::Announce: return announce(desugar(f.left()), desugar(f.right()));
    }
    return f;
}

}  // namespace epi
