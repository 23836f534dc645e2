#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace epi {

/// Ordering used for agent ids everywhere: all-digit ids compare numerically
/// and sort before symbolic ids, which compare lexicographically.
bool agent_less(std::string_view a, std::string_view b);

struct AgentLess {
    bool operator()(std::string_view a, std::string_view b) const { return agent_less(a, b); }
};

using AgentSet = std::set<std::string, AgentLess>;

/// A non-empty set of agents, stored in canonical order.
class Group {
public:
    Group(std::initializer_list<std::string> members);
    explicit Group(std::vector<std::string> members);

    static Group singleton(std::string agent);

    const std::vector<std::string>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }

    bool contains(std::string_view agent) const;
    bool intersects(const Group& other) const;
    bool subset_of(const Group& other) const;
    Group unite(const Group& other) const;
    /// Empty result is reported as nullopt since groups are never empty.
    std::optional<Group> intersect(const Group& other) const;

    /// Comma-joined members, e.g. "1,2".
    std::string key() const;

    friend bool operator==(const Group&, const Group&) = default;
    friend std::strong_ordering operator<=>(const Group& a, const Group& b);

private:
    std::vector<std::string> members_;
};

/// Parses the comma-joined spelling used by files and the command line.
Group parse_group(std::string_view text);

/// Parses semicolon-separated groups; an empty or blank string is the empty sequence.
std::vector<Group> parse_group_sequence(std::string_view text);

enum class Op : unsigned char {
    Top,
    Bottom,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Know,     // K_i
    Dist,     // D_G
    Common,   // C_G
    Resolve,  // R_G
    Announce  // [psi] phi
};

enum class LanguageTag { ELD, ELCD, PACD, RD, RCD };

std::string_view to_string(LanguageTag tag);

/// Immutable formula tree with structural equality and ordering.
class Formula {
public:
    Op op() const;
    /// Atom name for Op::Atom, agent id for Op::Know.
    const std::string& name() const;
    /// Group of D/C/R.
    const Group& group() const;
    /// Only operand of unary and modal nodes; left operand of binary nodes;
    /// the announced formula of Op::Announce.
    const Formula& left() const;
    /// Right operand of binary nodes; the body of Op::Announce.
    const Formula& right() const;

    /// Operand of Not/Know/Dist/Common/Resolve and the body of Announce.
    const Formula& body() const;

    bool is_modal() const;
    bool is_binary() const;

    std::size_t size() const;
    std::size_t depth() const;

    friend bool operator==(const Formula& a, const Formula& b);
    friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

    struct Node;

private:
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;

    friend Formula make_node(Op, std::string, std::optional<Group>, std::optional<Formula>,
                             std::optional<Formula>);
};

Formula top();
Formula bottom();
Formula atom(std::string name);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula know(std::string agent, Formula f);
Formula dist(Group g, Formula f);
Formula common(Group g, Formula f);
Formula resolve(Group g, Formula f);
Formula announce(Formula announced, Formula body);

/// E_G f, expanded to the conjunction of K_i f over i in G (left-nested).
Formula everybody(const Group& g, const Formula& f);

/// R_{G_1} ... R_{G_n} f; the empty prefix returns f.
Formula resolve_prefix(const std::vector<Group>& prefix, Formula f);

/// Splits a formula into its maximal leading R-prefix and the remainder.
std::pair<std::vector<Group>, Formula> split_resolve_prefix(const Formula& f);

std::string render(const Formula& f);

std::set<Formula> subformulas(const Formula& f);
AgentSet agents_of(const Formula& f);
std::set<std::string> atoms_of(const Formula& f);

/// Minimal language containing every connective of f; nullopt when f mixes
/// announcements with resolution (no listed language has both).
std::optional<LanguageTag> language_of(const Formula& f);

bool contains_op(const Formula& f, Op op);

/// Rewrites Bottom, Or, Implies and Iff into Top, Not and And.
Formula desugar(const Formula& f);

}  // namespace epi
