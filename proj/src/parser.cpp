#include "epi/parser.hpp"

#include <cctype>
#include <vector>

namespace epi {

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error("at " + std::to_string(position) + ": " + message), position_(position)
{}

namespace {

enum class Tok { Ident, Number, LParen, RParen, LBrace, RBrace, LBracket, RBracket, Comma, Tilde, Amp, Bar, Arrow, DArrow, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view s)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (ident_start(c)) {
            while (i < s.size() && ident_char(s[i]))
                ++i;
            out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                ++i;
            out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
            continue;
        }
        auto single = [&](Tok t) {
            out.push_back({t, std::string(1, c), start});
            ++i;
        };
        switch (c) {
        case '(': single(Tok::LParen); break;
        case ')': single(Tok::RParen); break;
        case '{': single(Tok::LBrace); break;
        case '}': single(Tok::RBrace); break;
        case '[': single(Tok::LBracket); break;
        case ']': single(Tok::RBracket); break;
        case ',': single(Tok::Comma); break;
        case '~': single(Tok::Tilde); break;
        case '&': single(Tok::Amp); break;
        case '|': single(Tok::Bar); break;
        case '-':
            if (s.substr(i, 2) == "->") {
                out.push_back({Tok::Arrow, "->", start});
                i += 2;
                break;
            }
            throw ParseError(start, "unexpected '-'");
        case '<':
            if (s.substr(i, 3) == "<->") {
                out.push_back({Tok::DArrow, "<->", start});
                i += 3;
                break;
            }
            throw ParseError(start, "unexpected '<'");
        default: throw ParseError(start, std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    Parser(std::string_view text, const AgentSet& agents) : tokens_(lex(text)), agents_(agents) {}

    Formula parse_all()
    {
        Formula f = parse_iff();
        if (peek().kind != Tok::End)
            throw ParseError(peek().pos, "unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Token& peek(std::size_t ahead = 0) const
    {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }

    Token take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    Token expect(Tok kind, const char* what)
    {
        if (peek().kind != kind)
            throw ParseError(peek().pos, std::string("expected ") + what);
        return take();
    }

    Formula parse_iff()
    {
        Formula f = parse_implies();
        while (peek().kind == Tok::DArrow) {
            take();
            f = iff(f, parse_implies());
        }
        return f;
    }

    Formula parse_implies()
    {
        Formula f = parse_or();
        if (peek().kind == Tok::Arrow) {
            take();
            return implies(f, parse_implies());
        }
        return f;
    }

    Formula parse_or()
    {
        Formula f = parse_and();
        while (peek().kind == Tok::Bar) {
            take();
            f = disj(f, parse_and());
        }
        return f;
    }

    Formula parse_and()
    {
        Formula f = parse_unary();
        while (peek().kind == Tok::Amp) {
            take();
            f = conj(f, parse_unary());
        }
        return f;
    }

    std::string agent_at(const Token& t)
    {
        if (t.kind != Tok::Ident && t.kind != Tok::Number)
            throw ParseError(t.pos, "expected agent");
        if (!agents_.contains(t.text))
            throw ParseError(t.pos, "undeclared agent '" + t.text + "'");
        return t.text;
    }

    Group parse_group_literal()
    {
        auto open = expect(Tok::LBrace, "'{'");
        std::vector<std::string> members;
        if (peek().kind == Tok::RBrace)
            throw ParseError(open.pos, "empty group");
        members.push_back(agent_at(take()));
        while (peek().kind == Tok::Comma) {
            take();
            members.push_back(agent_at(take()));
        }
        expect(Tok::RBrace, "'}'");
        return Group(std::move(members));
    }

    Formula parse_unary()
    {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Tilde:
            take();
            return neg(parse_unary());
        case Tok::LParen: {
            take();
            Formula f = parse_iff();
            expect(Tok::RParen, "')'");
            return f;
        }
        case Tok::LBracket: {
            take();
            Formula announced = parse_iff();
            expect(Tok::RBracket, "']'");
            return announce(announced, parse_unary());
        }
        case Tok::Ident: return parse_word();
        case Tok::End: throw ParseError(t.pos, "unexpected end of formula");
        default: throw ParseError(t.pos, "unexpected '" + t.text + "'");
        }
    }

    static bool starts_formula(Tok k)
    {
        return k == Tok::Ident || k == Tok::Tilde || k == Tok::LParen || k == Tok::LBracket;
    }

    Formula parse_word()
    {
        Token t = take();
        const std::string& w = t.text;
        if (w == "true")
            return top();
        if (w == "false")
            return bottom();
        if ((w == "D" || w == "C" || w == "E" || w == "R") && peek().kind == Tok::LBrace) {
            Group g = parse_group_literal();
            Formula body = parse_unary();
            switch (w[0]) {
            case 'D': return dist(std::move(g), std::move(body));
            case 'C': return common(std::move(g), std::move(body));
            case 'E': return everybody(g, body);
            default: return resolve(std::move(g), std::move(body));
            }
        }
        if (w == "K") {
            std::string agent = agent_at(take());
            return know(std::move(agent), parse_unary());
        }
        if (w.size() > 1 && w[0] == 'K' && agents_.contains(w.substr(1)))
            return know(w.substr(1), parse_unary());
        // An atom cannot be followed by a formula, so "K3 p" with agent 3
        // undeclared is reported as such rather than as a stray token.
        if (w.size() > 1 && w[0] == 'K' && starts_formula(peek().kind))
            throw ParseError(t.pos + 1, "undeclared agent '" + w.substr(1) + "'");
        return atom(w);
    }

    std::vector<Token> tokens_;
    const AgentSet& agents_;
    std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text, const AgentSet& agents)
{
    return Parser(text, agents).parse_all();
}

}  // namespace epi
