#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "nosqint/errors.hpp"
#include "nosqint/value.hpp"

namespace nosqint {

// EL concept expression with unqualified min-cardinality. Instances are
// immutable and always canonical: conjunctions are flattened, deduplicated
// and sorted, Top conjuncts dropped, and MinCard(1, r, C) stored as
// Exists(r, C). Equality is therefore syntactic equality of canonical forms.
class ConceptExpr {
public:
    enum class Kind { Top, Atomic, Exists, MinCard, And };

    ConceptExpr() : node_(top_node()) {}

    static ConceptExpr top() { return ConceptExpr(); }

    static ConceptExpr atomic(std::string name) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Atomic;
        n->symbol = std::move(name);
        return ConceptExpr(std::move(n));
    }

    static ConceptExpr exists(std::string role, ConceptExpr filler) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Exists;
        n->symbol = std::move(role);
        n->bound = 1;
        n->children.push_back(std::move(filler));
        return ConceptExpr(std::move(n));
    }

    static ConceptExpr min_card(int bound, std::string role, ConceptExpr filler) {
        if (bound < 1) throw Error("dlcore", "InvalidArgument", "min-cardinality bound must be >= 1");
        if (bound == 1) return exists(std::move(role), std::move(filler));
        auto n = std::make_shared<Node>();
        n->kind = Kind::MinCard;
        n->symbol = std::move(role);
        n->bound = bound;
        n->children.push_back(std::move(filler));
        return ConceptExpr(std::move(n));
    }

    static ConceptExpr conj(std::vector<ConceptExpr> parts) {
        std::vector<ConceptExpr> flat;
        for (auto& p : parts) {
            if (p.kind() == Kind::Top) continue;
            if (p.kind() == Kind::And) {
                for (const auto& c : p.parts()) flat.push_back(c);
            } else {
                flat.push_back(std::move(p));
            }
        }
        std::sort(flat.begin(), flat.end());
        flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
        if (flat.empty()) return top();
        if (flat.size() == 1) return flat[0];
        auto n = std::make_shared<Node>();
        n->kind = Kind::And;
        n->children = std::move(flat);
        return ConceptExpr(std::move(n));
    }

    Kind kind() const { return node_->kind; }
    const std::string& name() const { return node_->symbol; }
    const std::string& role() const { return node_->symbol; }
    // Exists counts as bound 1, so MinCard comparisons need no special case.
    int bound() const { return node_->bound; }
    const ConceptExpr& filler() const { return node_->children[0]; }
    const std::vector<ConceptExpr>& parts() const { return node_->children; }

    // Top-level conjuncts: the And parts, or the expression itself.
    std::vector<ConceptExpr> conjuncts() const {
        if (kind() == Kind::And) return node_->children;
        return {*this};
    }

    friend bool operator==(const ConceptExpr& a, const ConceptExpr& b) { return compare(a, b) == 0; }
    friend bool operator!=(const ConceptExpr& a, const ConceptExpr& b) { return compare(a, b) != 0; }
    friend bool operator<(const ConceptExpr& a, const ConceptExpr& b) { return compare(a, b) < 0; }

    nlohmann::json to_json() const {
        switch (kind()) {
            case Kind::Top: return "top";
            case Kind::Atomic: return nlohmann::json{{"atomic", name()}};
            case Kind::Exists: return nlohmann::json{{"exists", {{"role", role()}, {"filler", filler().to_json()}}}};
            case Kind::MinCard:
                return nlohmann::json{
                    {"minCard", {{"n", bound()}, {"role", role()}, {"filler", filler().to_json()}}}};
            case Kind::And: {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& p : parts()) arr.push_back(p.to_json());
                return nlohmann::json{{"and", std::move(arr)}};
            }
        }
        throw Error("dlcore", "InvalidArgument", "unreachable expression kind");
    }

    static ConceptExpr from_json(const nlohmann::json& j) {
        if (j.is_string() && j.get<std::string>() == "top") return top();
        if (!j.is_object() || j.size() != 1) {
            throw Error("dlcore", "ParseError", "malformed concept expression: " + j.dump());
        }
        if (j.contains("atomic")) return atomic(j.at("atomic").get<std::string>());
        if (j.contains("exists")) {
            const auto& e = j.at("exists");
            return exists(e.at("role").get<std::string>(), from_json(e.at("filler")));
        }
        if (j.contains("minCard")) {
            const auto& m = j.at("minCard");
            return min_card(m.at("n").get<int>(), m.at("role").get<std::string>(), from_json(m.at("filler")));
        }
        if (j.contains("and")) {
            std::vector<ConceptExpr> parts;
            for (const auto& p : j.at("and")) parts.push_back(from_json(p));
            return conj(std::move(parts));
        }
        throw Error("dlcore", "ParseError", "malformed concept expression: " + j.dump());
    }

    std::string to_string() const {
        switch (kind()) {
            case Kind::Top: return "Top";
            case Kind::Atomic: return name();
            case Kind::Exists: return "exists " + role() + "." + filler().wrapped();
            case Kind::MinCard: return ">=" + std::to_string(bound()) + " " + role() + "." + filler().wrapped();
            case Kind::And: {
                std::string out;
                for (const auto& p : parts()) {
                    if (!out.empty()) out += " and ";
                    out += p.wrapped();
                }
                return out;
            }
        }
        return "?";
    }

private:
    struct Node {
        Kind kind = Kind::Top;
        std::string symbol;
        int bound = 1;
        std::vector<ConceptExpr> children;
    };

    explicit ConceptExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static const std::shared_ptr<const Node>& top_node() {
        static const std::shared_ptr<const Node> n = std::make_shared<Node>();
        return n;
    }

    std::string wrapped() const {
        if (kind() == Kind::And) return "(" + to_string() + ")";
        return to_string();
    }

    static int compare(const ConceptExpr& a, const ConceptExpr& b) {
        if (a.node_ == b.node_) return 0;
        if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
        switch (a.kind()) {
            case Kind::Top: return 0;
            case Kind::Atomic: return a.name().compare(b.name());
            case Kind::Exists:
            case Kind::MinCard: {
                if (int c = a.role().compare(b.role())) return c;
                if (a.bound() != b.bound()) return a.bound() < b.bound() ? -1 : 1;
                return compare(a.filler(), b.filler());
            }
            case Kind::And: {
                const auto& pa = a.parts();
                const auto& pb = b.parts();
                for (size_t i = 0; i < std::min(pa.size(), pb.size()); ++i) {
                    if (int c = compare(pa[i], pb[i])) return c;
                }
                if (pa.size() != pb.size()) return pa.size() < pb.size() ? -1 : 1;
                return 0;
            }
        }
        return 0;
    }

    std::shared_ptr<const Node> node_;
};

struct Role {
    enum class Kind { Datatype, Object };

    std::string name;
    Kind kind = Kind::Datatype;
    std::string domain;
    std::string range;  // concept name for object roles, else "Text"/"Number"/"Bool"

    friend bool operator==(const Role& a, const Role& b) {
        return a.name == b.name && a.kind == b.kind && a.domain == b.domain && a.range == b.range;
    }
    friend bool operator<(const Role& a, const Role& b) {
        return std::tie(a.name, a.domain, a.range, a.kind) < std::tie(b.name, b.domain, b.range, b.kind);
    }
};

struct Axiom {
    enum class Type { SubClassOf, EquivalentTo, DisjointWith };

    Type type = Type::SubClassOf;
    ConceptExpr sub;
    ConceptExpr sup;

    static Axiom sub_class_of(ConceptExpr sub, ConceptExpr sup) {
        return Axiom{Type::SubClassOf, std::move(sub), std::move(sup)};
    }
    static Axiom equivalent_to(ConceptExpr a, ConceptExpr b) {
        return Axiom{Type::EquivalentTo, std::move(a), std::move(b)};
    }
    static Axiom disjoint_with(const std::string& a, const std::string& b) {
        return Axiom{Type::DisjointWith, ConceptExpr::atomic(a), ConceptExpr::atomic(b)};
    }

    friend bool operator==(const Axiom& a, const Axiom& b) {
        return a.type == b.type && a.sub == b.sub && a.sup == b.sup;
    }
};

class Ontology {
public:
    std::string id;

    const std::set<std::string>& concepts() const { return concepts_; }
    const std::set<Role>& roles() const { return roles_; }
    const std::vector<Axiom>& axioms() const { return axioms_; }
    const std::map<std::string, std::vector<std::string>>& annotations() const { return annotations_; }

    void add_concept(const std::string& name) {
        if (name.empty()) throw Error("dlcore", "InvalidArgument", "empty concept name");
        concepts_.insert(name);
    }

    bool has_concept(const std::string& name) const { return concepts_.count(name) > 0; }

    void add_role(Role r) {
        if (!has_concept(r.domain)) throw Error("dlcore", "UnknownName", "role domain '" + r.domain + "' not declared");
        if (r.kind == Role::Kind::Object) {
            if (!has_concept(r.range)) {
                throw Error("dlcore", "UnknownName", "object role range '" + r.range + "' not declared");
            }
        } else if (r.range != "Text" && r.range != "Number" && r.range != "Bool") {
            throw Error("dlcore", "UnknownName", "datatype role range tag '" + r.range + "' unknown");
        }
        role_names_.insert(r.name);
        roles_.insert(std::move(r));
    }

    bool has_role_name(const std::string& name) const { return role_names_.count(name) > 0; }

    const Role* find_role(const std::string& name, const std::string& domain) const {
        for (const auto& r : roles_) {
            if (r.name == name && r.domain == domain) return &r;
        }
        return nullptr;
    }

    std::vector<const Role*> roles_named(const std::string& name) const {
        std::vector<const Role*> out;
        for (const auto& r : roles_) {
            if (r.name == name) out.push_back(&r);
        }
        return out;
    }

    // EquivalentTo is materialized as both SubClassOf directions plus the
    // equivalence marker itself; duplicates are skipped so re-adding is a
    // no-op and serialization stays stable.
    void add_axiom(const Axiom& ax) {
        validate_expr(ax.sub);
        validate_expr(ax.sup);
        if (ax.type == Axiom::Type::DisjointWith) {
            if (ax.sub.kind() != ConceptExpr::Kind::Atomic || ax.sup.kind() != ConceptExpr::Kind::Atomic) {
                throw Error("dlcore", "InvalidArgument", "disjointness takes two concept names");
            }
            push_unique(ax);
            return;
        }
        if (ax.type == Axiom::Type::EquivalentTo) {
            push_unique(Axiom::sub_class_of(ax.sub, ax.sup));
            push_unique(Axiom::sub_class_of(ax.sup, ax.sub));
            push_unique(ax);
            if (ax.sub.kind() == ConceptExpr::Kind::Atomic && ax.sup.kind() == ConceptExpr::Kind::Atomic) {
                equivalence_markers_.insert(ordered_pair(ax.sub.name(), ax.sup.name()));
            }
            return;
        }
        push_unique(ax);
    }

    void annotate(const std::string& entity, const std::string& text) { annotations_[entity].push_back(text); }

    // Atomic-atomic pairs asserted equivalent, closed under the markers'
    // own transitivity (union-find at query time keeps this simple).
    bool marked_equivalent(const std::string& a, const std::string& b) const {
        if (a == b) return true;
        std::map<std::string, std::string> parent;
        auto find = [&](std::string x) {
            while (parent.count(x) && parent[x] != x) x = parent[x];
            return x;
        };
        for (const auto& [p, q] : equivalence_markers_) {
            parent.try_emplace(p, p);
            parent.try_emplace(q, q);
            std::string rp = find(p), rq = find(q);
            if (rp != rq) parent[std::max(rp, rq)] = std::min(rp, rq);
        }
        if (!parent.count(a) || !parent.count(b)) return false;
        return find(a) == find(b);
    }

    void validate_expr(const ConceptExpr& e) const {
        switch (e.kind()) {
            case ConceptExpr::Kind::Top: return;
            case ConceptExpr::Kind::Atomic:
                if (!has_concept(e.name())) throw Error("dlcore", "UnknownName", "unknown concept '" + e.name() + "'");
                return;
            case ConceptExpr::Kind::Exists:
            case ConceptExpr::Kind::MinCard:
                if (!has_role_name(e.role())) throw Error("dlcore", "UnknownName", "unknown role '" + e.role() + "'");
                validate_expr(e.filler());
                return;
            case ConceptExpr::Kind::And:
                for (const auto& p : e.parts()) validate_expr(p);
                return;
        }
    }

private:
    static std::pair<std::string, std::string> ordered_pair(const std::string& a, const std::string& b) {
        return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    }

    void push_unique(const Axiom& ax) {
        if (std::find(axioms_.begin(), axioms_.end(), ax) == axioms_.end()) axioms_.push_back(ax);
    }

    std::set<std::string> concepts_;
    std::set<Role> roles_;
    std::set<std::string> role_names_;
    std::vector<Axiom> axioms_;
    std::map<std::string, std::vector<std::string>> annotations_;
    std::set<std::pair<std::string, std::string>> equivalence_markers_;
};

struct RoleAssertion {
    std::string role;
    std::optional<std::string> individual;  // set for object assertions
    Value literal;                          // used when individual is absent
};

struct ABox {
    std::map<std::string, std::set<std::string>> typeAssertions;
    std::map<std::string, std::vector<RoleAssertion>> roleAssertions;

    bool has_individual(const std::string& id) const {
        return typeAssertions.count(id) > 0 || roleAssertions.count(id) > 0;
    }
};

// Reflexive-transitive closure of the name-level told hierarchy. A
// SubClassOf whose left side is a concept name contributes one edge per
// atomic top-level conjunct of its right side; everything else is opaque
// to name classification.
class TaxonomyView {
public:
    explicit TaxonomyView(const Ontology& onto) {
        for (const auto& c : onto.concepts()) supers_[c].insert(c);
        std::map<std::string, std::set<std::string>> direct;
        for (const auto& ax : onto.axioms()) {
            if (ax.type != Axiom::Type::SubClassOf) continue;
            if (ax.sub.kind() != ConceptExpr::Kind::Atomic) continue;
            for (const auto& conjunct : ax.sup.conjuncts()) {
                if (conjunct.kind() == ConceptExpr::Kind::Atomic) direct[ax.sub.name()].insert(conjunct.name());
            }
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto& [name, sup] : supers_) {
                const size_t before = sup.size();
                std::set<std::string> frontier = sup;
                for (const auto& s : frontier) {
                    auto it = direct.find(s);
                    if (it != direct.end()) sup.insert(it->second.begin(), it->second.end());
                }
                if (sup.size() != before) changed = true;
            }
        }
    }

    bool has(const std::string& name) const { return supers_.count(name) > 0; }

    const std::set<std::string>& supers(const std::string& name) const {
        auto it = supers_.find(name);
        if (it == supers_.end()) throw Error("dlcore", "UnknownName", "unknown concept '" + name + "'");
        return it->second;
    }

    bool name_subsumes(const std::string& sup, const std::string& sub) const { return supers(sub).count(sup) > 0; }

    const std::map<std::string, std::set<std::string>>& all() const { return supers_; }

private:
    std::map<std::string, std::set<std::string>> supers_;
};

inline std::map<std::string, std::set<std::string>> classify(const Ontology& onto) {
    return TaxonomyView(onto).all();
}

// Structural told subsumption for the fragment. An atomic subsumer needs
// some top-level conjunct of the candidate to reach it through the told
// closure; existential and min-cardinality subsumers need a matching-role
// conjunct with a subsumed filler and a bound at least as strong.
inline bool subsumes(const TaxonomyView& tax, const ConceptExpr& sup, const ConceptExpr& sub) {
    switch (sup.kind()) {
        case ConceptExpr::Kind::Top: return true;
        case ConceptExpr::Kind::And: {
            const auto& parts = sup.parts();
            return std::all_of(parts.begin(), parts.end(),
                               [&](const ConceptExpr& p) { return subsumes(tax, p, sub); });
        }
        case ConceptExpr::Kind::Atomic: {
            for (const auto& c : sub.conjuncts()) {
                if (c.kind() == ConceptExpr::Kind::Atomic && tax.has(c.name()) &&
                    tax.name_subsumes(sup.name(), c.name())) {
                    return true;
                }
                if (c.kind() == ConceptExpr::Kind::Atomic && !tax.has(c.name()) && c.name() == sup.name()) {
                    return true;
                }
            }
            return false;
        }
        case ConceptExpr::Kind::Exists:
        case ConceptExpr::Kind::MinCard: {
            for (const auto& c : sub.conjuncts()) {
                if (c.kind() != ConceptExpr::Kind::Exists && c.kind() != ConceptExpr::Kind::MinCard) continue;
                if (c.role() != sup.role()) continue;
                if (c.bound() < sup.bound()) continue;
                if (subsumes(tax, sup.filler(), c.filler())) return true;
            }
            return false;
        }
    }
    return false;
}

inline bool subsumes(const Ontology& onto, const ConceptExpr& sup, const ConceptExpr& sub) {
    onto.validate_expr(sup);
    onto.validate_expr(sub);
    return subsumes(TaxonomyView(onto), sup, sub);
}

// Depth-bounded most specific concept. At depth 0 only asserted names
// survive; below that, object assertions recurse and literal assertions
// contribute exists(role, Top).
inline ConceptExpr msc(const Ontology& onto, const ABox& abox, const std::string& individual, int k) {
    (void)onto;
    if (!abox.has_individual(individual)) {
        throw Error("dlcore", "UnknownIndividual", "no assertions for individual '" + individual + "'");
    }
    struct Walk {
        const ABox& abox;
        ConceptExpr run(const std::string& id, int depth) const {
            std::vector<ConceptExpr> parts;
            auto t = abox.typeAssertions.find(id);
            if (t != abox.typeAssertions.end()) {
                for (const auto& c : t->second) parts.push_back(ConceptExpr::atomic(c));
            }
            auto r = abox.roleAssertions.find(id);
            if (depth > 0 && r != abox.roleAssertions.end()) {
                for (const auto& assertion : r->second) {
                    if (assertion.individual) {
                        ConceptExpr filler = abox.has_individual(*assertion.individual)
                                                 ? run(*assertion.individual, depth - 1)
                                                 : ConceptExpr::top();
                        parts.push_back(ConceptExpr::exists(assertion.role, std::move(filler)));
                    } else {
                        parts.push_back(ConceptExpr::exists(assertion.role, ConceptExpr::top()));
                    }
                }
            }
            return ConceptExpr::conj(std::move(parts));
        }
    };
    return Walk{abox}.run(individual, k);
}

namespace detail {

// Names subsuming the whole expression: supers of its atomic conjuncts.
inline std::set<std::string> atomic_supers(const TaxonomyView& tax, const ConceptExpr& e) {
    std::set<std::string> out;
    for (const auto& c : e.conjuncts()) {
        if (c.kind() != ConceptExpr::Kind::Atomic) continue;
        if (tax.has(c.name())) {
            const auto& s = tax.supers(c.name());
            out.insert(s.begin(), s.end());
        } else {
            out.insert(c.name());
        }
    }
    return out;
}

// Drops conjuncts strictly subsuming another conjunct (ties broken toward
// the syntactically least), so products stay irredundant and lcs([C, C])
// returns C itself.
inline ConceptExpr prune_redundant(const TaxonomyView& tax, std::vector<ConceptExpr> parts) {
    std::sort(parts.begin(), parts.end());
    parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
    std::vector<ConceptExpr> kept;
    for (size_t i = 0; i < parts.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < parts.size() && !redundant; ++j) {
            if (i == j) continue;
            if (!subsumes(tax, parts[i], parts[j])) continue;
            if (!subsumes(tax, parts[j], parts[i]) || j < i) redundant = true;
        }
        if (!redundant) kept.push_back(parts[i]);
    }
    return ConceptExpr::conj(std::move(kept));
}

inline ConceptExpr lcs_pair(const TaxonomyView& tax, const ConceptExpr& a, const ConceptExpr& b) {
    if (a.kind() == ConceptExpr::Kind::Top || b.kind() == ConceptExpr::Kind::Top) return ConceptExpr::top();
    std::vector<ConceptExpr> parts;
    std::set<std::string> common = atomic_supers(tax, a);
    const std::set<std::string> right = atomic_supers(tax, b);
    for (const auto& name : common) {
        if (right.count(name)) parts.push_back(ConceptExpr::atomic(name));
    }
    for (const auto& ca : a.conjuncts()) {
        if (ca.kind() != ConceptExpr::Kind::Exists && ca.kind() != ConceptExpr::Kind::MinCard) continue;
        for (const auto& cb : b.conjuncts()) {
            if (cb.kind() != ConceptExpr::Kind::Exists && cb.kind() != ConceptExpr::Kind::MinCard) continue;
            if (ca.role() != cb.role()) continue;
            parts.push_back(ConceptExpr::min_card(std::min(ca.bound(), cb.bound()), ca.role(),
                                                  lcs_pair(tax, ca.filler(), cb.filler())));
        }
    }
    return prune_redundant(tax, std::move(parts));
}

inline void require_acyclic(const Ontology& onto, const TaxonomyView& tax) {
    for (const auto& [name, supers] : tax.all()) {
        for (const auto& s : supers) {
            if (s == name) continue;
            if (tax.supers(s).count(name) && !onto.marked_equivalent(name, s)) {
                throw Error("dlcore", "CyclicDefinitions",
                            "concepts '" + name + "' and '" + s + "' subsume each other without an equivalence");
            }
        }
    }
}

}  // namespace detail

inline ConceptExpr lcs(const Ontology& onto, const std::vector<ConceptExpr>& exprs) {
    if (exprs.empty()) throw Error("dlcore", "EmptyInput", "lcs needs at least one expression");
    TaxonomyView tax(onto);
    detail::require_acyclic(onto, tax);
    for (const auto& e : exprs) onto.validate_expr(e);
    ConceptExpr acc = exprs[0];
    for (size_t i = 1; i < exprs.size(); ++i) acc = detail::lcs_pair(tax, acc, exprs[i]);
    return acc;
}

/// Good common subsumer: conjunction of the minimal concept names whose told
// closure covers every input's top-level names. Top when nothing is shared.
inline ConceptExpr gcs(const Ontology& onto, const std::vector<ConceptExpr>& exprs) {
    if (exprs.empty()) throw Error("dlcore", "EmptyInput", "gcs needs at least one expression");
    TaxonomyView tax(onto);
    for (const auto& e : exprs) onto.validate_expr(e);
    std::set<std::string> common = detail::atomic_supers(tax, exprs[0]);
    for (size_t i = 1; i < exprs.size() && !common.empty(); ++i) {
        const std::set<std::string> next = detail::atomic_supers(tax, exprs[i]);
        std::set<std::string> merged;
        std::set_intersection(common.begin(), common.end(), next.begin(), next.end(),
                              std::inserter(merged, merged.begin()));
        common = std::move(merged);
    }
    std::vector<ConceptExpr> minimal;
    for (const auto& name : common) {
        bool dominated = false;
        for (const auto& other : common) {
            if (other == name || !tax.has(other)) continue;
            if (!tax.name_subsumes(name, other)) continue;
            if (!tax.has(name) || !tax.name_subsumes(other, name) || other < name) {
                dominated = true;
                break;
            }
        }
        if (!dominated) minimal.push_back(ConceptExpr::atomic(name));
    }
    return ConceptExpr::conj(std::move(minimal));
}

// --- serialization -------------------------------------------------------

inline nlohmann::json role_to_json(const Role& r) {
    return nlohmann::json{{"name", r.name},
                          {"kind", r.kind == Role::Kind::Object ? "object" : "datatype"},
                          {"domain", r.domain},
                          {"range", r.range}};
}

inline Role role_from_json(const nlohmann::json& j) {
    Role r;
    r.name = j.at("name").get<std::string>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "object") {
        r.kind = Role::Kind::Object;
    } else if (kind == "datatype") {
        r.kind = Role::Kind::Datatype;
    } else {
        throw Error("dlcore", "ParseError", "unknown role kind '" + kind + "'");
    }
    r.domain = j.at("domain").get<std::string>();
    r.range = j.at("range").get<std::string>();
    return r;
}

inline nlohmann::json axiom_to_json(const Axiom& ax) {
    const char* type = ax.type == Axiom::Type::SubClassOf       ? "subClassOf"
                       : ax.type == Axiom::Type::EquivalentTo   ? "equivalentTo"
                                                                : "disjointWith";
    return nlohmann::json{{"type", type}, {"sub", ax.sub.to_json()}, {"sup", ax.sup.to_json()}};
}

inline Axiom axiom_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    Axiom ax;
    if (type == "subClassOf") {
        ax.type = Axiom::Type::SubClassOf;
    } else if (type == "equivalentTo") {
        ax.type = Axiom::Type::EquivalentTo;
    } else if (type == "disjointWith") {
        ax.type = Axiom::Type::DisjointWith;
    } else {
        throw Error("dlcore", "ParseError", "unknown axiom type '" + type + "'");
    }
    ax.sub = ConceptExpr::from_json(j.at("sub"));
    ax.sup = ConceptExpr::from_json(j.at("sup"));
    return ax;
}

inline nlohmann::json ontology_to_json(const Ontology& onto) {
    nlohmann::json j;
    j["id"] = onto.id;
    j["concepts"] = onto.concepts();
    nlohmann::json roles = nlohmann::json::array();
    for (const auto& r : onto.roles()) roles.push_back(role_to_json(r));
    j["roles"] = std::move(roles);
    nlohmann::json axioms = nlohmann::json::array();
    for (const auto& ax : onto.axioms()) axioms.push_back(axiom_to_json(ax));
    j["axioms"] = std::move(axioms);
    if (!onto.annotations().empty()) {
        nlohmann::json ann = nlohmann::json::object();
        for (const auto& [entity, texts] : onto.annotations()) ann[entity] = texts;
        j["annotations"] = std::move(ann);
    }
    return j;
}

inline Ontology ontology_from_json(const nlohmann::json& j) {
    try {
        Ontology onto;
        onto.id = j.at("id").get<std::string>();
        for (const auto& c : j.at("concepts")) onto.add_concept(c.get<std::string>());
        for (const auto& r : j.at("roles")) onto.add_role(role_from_json(r));
        for (const auto& ax : j.at("axioms")) onto.add_axiom(axiom_from_json(ax));
        if (j.contains("annotations")) {
            for (auto it = j.at("annotations").begin(); it != j.at("annotations").end(); ++it) {
                for (const auto& text : it.value()) onto.annotate(it.key(), text.get<std::string>());
            }
        }
        return onto;
    } catch (const nlohmann::json::exception& e) {
        throw Error("dlcore", "ParseError", e.what());
    }
}

inline std::string serialize_ontology(const Ontology& onto) { return ontology_to_json(onto).dump(2) + "\n"; }

inline Ontology parse_ontology(const std::string& text) {
    try {
        return ontology_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw Error("dlcore", "ParseError", e.what());
    }
}

}  // namespace nosqint
