#pragma once

#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "nosqint/errors.hpp"
#include "nosqint/value.hpp"

namespace nosqint {

// Terms keep the surface lexical form so printing reproduces the input
// token for token; literal terms additionally carry the decoded value.
struct SparqlTerm {
    enum class Kind { Var, Iri, Literal };

    Kind kind = Kind::Iri;
    std::string text;  // variable name without '?', IRI text, or literal lexical form
    Value value;       // Literal terms only: Text or Number

    static SparqlTerm var(std::string name) { return {Kind::Var, std::move(name), Value()}; }
    static SparqlTerm iri(std::string name) { return {Kind::Iri, std::move(name), Value()}; }
    static SparqlTerm text_literal(std::string s) {
        SparqlTerm t{Kind::Literal, s, Value(s)};
        return t;
    }
    static SparqlTerm number_literal(const std::string& lexical) {
        return {Kind::Literal, lexical, Value(std::stod(lexical))};
    }

    bool is_var() const { return kind == Kind::Var; }

    friend bool operator==(const SparqlTerm& a, const SparqlTerm& b) { return a.kind == b.kind && a.text == b.text; }
    friend bool operator!=(const SparqlTerm& a, const SparqlTerm& b) { return !(a == b); }
};

inline constexpr const char* kTypePredicate = "rdf:type";

struct TriplePattern {
    SparqlTerm subject;   // Var or Iri
    std::string predicate;
    SparqlTerm object;    // Var, Iri, or Literal

    friend bool operator==(const TriplePattern& a, const TriplePattern& b) {
        return a.subject == b.subject && a.predicate == b.predicate && a.object == b.object;
    }
};

struct SparqlQuery {
    std::vector<std::string> selectVars;  // without '?', in select order
    std::vector<TriplePattern> patterns;

    friend bool operator==(const SparqlQuery& a, const SparqlQuery& b) {
        return a.selectVars == b.selectVars && a.patterns == b.patterns;
    }
};

namespace detail {

struct Token {
    enum class Kind { Name, Var, String, Number, LBrace, RBrace, Dot, Path, Punct, End };
    Kind kind = Kind::End;
    std::string text;  // Name/Var/String/Number payload; Var without '?', String without quotes
    size_t offset = 0;
};

inline std::string upper_copy(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] inline void syntax_error(const std::string& what, size_t offset) {
    throw Error("queryfront", "SyntaxError", what + " at offset " + std::to_string(offset));
}

inline bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

inline std::vector<Token> tokenize_sparql(const std::string& text) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const size_t start = i;
        if (c == '{') {
            out.push_back({Token::Kind::LBrace, "{", start});
            ++i;
        } else if (c == '}') {
            out.push_back({Token::Kind::RBrace, "}", start});
            ++i;
        } else if (c == '.') {
            out.push_back({Token::Kind::Dot, ".", start});
            ++i;
        } else if (c == '/' || c == '|' || c == '^' || c == '*' || c == '+') {
            out.push_back({Token::Kind::Path, std::string(1, c), start});
            ++i;
        } else if (c == '(' || c == ')' || c == ',' || c == ';' || c == '<' || c == '>' || c == '=' || c == '!' ||
                   c == '"') {
            // Tokenized but never valid in the subset; kept so that keyword
            // rejection (FILTER, PREFIX, ...) fires before these are reached.
            out.push_back({Token::Kind::Punct, std::string(1, c), start});
            ++i;
        } else if (c == '?' || c == '$') {
            ++i;
            std::string name;
            while (i < text.size() && name_char(text[i]) && text[i] != ':') name += text[i++];
            if (name.empty()) syntax_error("expected variable name after '" + std::string(1, c) + "'", start);
            out.push_back({Token::Kind::Var, std::move(name), start});
        } else if (c == '\'') {
            ++i;
            std::string body;
            while (i < text.size() && text[i] != '\'') body += text[i++];
            if (i == text.size()) syntax_error("unterminated string literal", start);
            ++i;
            out.push_back({Token::Kind::String, std::move(body), start});
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::string num(1, c);
            ++i;
            bool dotSeen = false;
            while (i < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[i])) || (text[i] == '.' && !dotSeen))) {
                // A '.' not followed by a digit terminates the number: it is the triple separator.
                if (text[i] == '.') {
                    if (i + 1 >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i + 1]))) break;
                    dotSeen = true;
                }
                num += text[i++];
            }
            out.push_back({Token::Kind::Number, std::move(num), start});
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (i < text.size() && name_char(text[i])) name += text[i++];
            out.push_back({Token::Kind::Name, std::move(name), start});
        } else {
            syntax_error("unexpected character '" + std::string(1, c) + "'", start);
        }
    }
    out.push_back({Token::Kind::End, "", text.size()});
    return out;
}

// The frozen subset has no clause keywords beyond SELECT/WHERE; these SPARQL
// constructs are recognized only to be rejected by name.
inline bool unsupported_keyword(const std::string& name) {
    const std::string u = upper_copy(name);
    return u == "OPTIONAL" || u == "FILTER" || u == "UNION" || u == "PREFIX" || u == "MINUS" || u == "GRAPH" ||
           u == "SERVICE" || u == "BIND" || u == "VALUES" || u == "LIMIT" || u == "ORDER" || u == "GROUP" ||
           u == "DISTINCT";
}

inline void reject_unsupported(const Token& t) {
    if (t.kind == Token::Kind::Path) {
        throw Error("queryfront", "UnsupportedFeature",
                    "property path operator '" + t.text + "' at offset " + std::to_string(t.offset));
    }
    if (t.kind == Token::Kind::Name && unsupported_keyword(t.text)) {
        throw Error("queryfront", "UnsupportedFeature",
                    upper_copy(t.text) + " at offset " + std::to_string(t.offset));
    }
}

inline std::string validated_iri(const Token& t) {
    const size_t colon = t.text.find(':');
    if (colon != std::string::npos) {
        const std::string prefix = t.text.substr(0, colon);
        if (prefix != "rdf" && prefix != "rdfs") syntax_error("unknown prefix '" + prefix + "'", t.offset);
        if (colon + 1 >= t.text.size() || t.text.find(':', colon + 1) != std::string::npos) {
            syntax_error("malformed prefixed name '" + t.text + "'", t.offset);
        }
    }
    return t.text;
}

}  // namespace detail

inline SparqlQuery parse_sparql(const std::string& text) {
    using detail::Token;
    const std::vector<Token> tokens = detail::tokenize_sparql(text);
    size_t pos = 0;
    auto peek = [&]() -> const Token& { return tokens[pos]; };
    auto next = [&]() -> const Token& { return tokens[pos++]; };
    auto expect_keyword = [&](const char* kw) {
        const Token& t = next();
        if (t.kind != Token::Kind::Name || detail::upper_copy(t.text) != kw) {
            detail::reject_unsupported(t);
            detail::syntax_error(std::string("expected ") + kw, t.offset);
        }
    };

    SparqlQuery q;
    expect_keyword("SELECT");
    std::set<std::string> seenVars;
    while (peek().kind == Token::Kind::Var) {
        const Token& t = next();
        if (!seenVars.insert(t.text).second) {
            detail::syntax_error("duplicate select variable '?" + t.text + "'", t.offset);
        }
        q.selectVars.push_back(t.text);
    }
    if (q.selectVars.empty()) {
        detail::reject_unsupported(peek());
        detail::syntax_error("expected at least one select variable", peek().offset);
    }
    expect_keyword("WHERE");
    if (peek().kind != Token::Kind::LBrace) detail::syntax_error("expected '{'", peek().offset);
    next();

    auto parse_term = [&](const char* role) -> SparqlTerm {
        const Token& t = next();
        detail::reject_unsupported(t);
        switch (t.kind) {
            case Token::Kind::Var: return SparqlTerm::var(t.text);
            case Token::Kind::Name: return SparqlTerm::iri(detail::validated_iri(t));
            case Token::Kind::String: return SparqlTerm::text_literal(t.text);
            case Token::Kind::Number: return SparqlTerm::number_literal(t.text);
            default: detail::syntax_error(std::string("expected ") + role, t.offset);
        }
    };

    while (true) {
        detail::reject_unsupported(peek());
        if (peek().kind == Token::Kind::LBrace) {
            throw Error("queryfront", "UnsupportedFeature",
                        "group pattern at offset " + std::to_string(peek().offset));
        }
        if (peek().kind == Token::Kind::RBrace) {
            if (q.patterns.empty()) detail::syntax_error("expected at least one triple pattern", peek().offset);
            next();
            break;
        }
        TriplePattern tp;
        const size_t subjectOffset = peek().offset;
        tp.subject = parse_term("subject");
        if (tp.subject.kind == SparqlTerm::Kind::Literal) {
            detail::syntax_error("literal cannot be a subject", subjectOffset);
        }
        const Token& predTok = peek();
        detail::reject_unsupported(predTok);
        if (predTok.kind == Token::Kind::Var) {
            throw Error("queryfront", "UnsupportedFeature",
                        "variable predicate at offset " + std::to_string(predTok.offset));
        }
        if (predTok.kind != Token::Kind::Name) detail::syntax_error("expected predicate", predTok.offset);
        tp.predicate = detail::validated_iri(next());
        tp.object = parse_term("object");
        q.patterns.push_back(std::move(tp));
        detail::reject_unsupported(peek());
        if (peek().kind != Token::Kind::Dot) detail::syntax_error("expected '.' after triple", peek().offset);
        next();
    }
    if (peek().kind != Token::Kind::End) {
        detail::reject_unsupported(peek());
        detail::syntax_error("unexpected trailing input", peek().offset);
    }

    std::set<std::string> bound;
    for (const auto& p : q.patterns) {
        if (p.subject.is_var()) bound.insert(p.subject.text);
        if (p.object.is_var()) bound.insert(p.object.text);
    }
    for (const auto& v : q.selectVars) {
        if (!bound.count(v)) {
            throw Error("queryfront", "UnboundSelectVar", "select variable '?" + v + "' never occurs in a pattern");
        }
    }
    return q;
}

inline std::string print_term(const SparqlTerm& t) {
    switch (t.kind) {
        case SparqlTerm::Kind::Var: return "?" + t.text;
        case SparqlTerm::Kind::Iri: return t.text;
        case SparqlTerm::Kind::Literal: return t.value.is_number() ? t.text : "'" + t.text + "'";
    }
    return t.text;
}

inline std::string print_sparql(const SparqlQuery& q) {
    std::string out = "SELECT";
    for (const auto& v : q.selectVars) out += " ?" + v;
    out += " WHERE {";
    for (const auto& p : q.patterns) {
        out += " " + print_term(p.subject) + " " + p.predicate + " " + print_term(p.object) + " .";
    }
    out += " }";
    return out;
}

}  // namespace nosqint
