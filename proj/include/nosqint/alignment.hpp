#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "nosqint/dlcore.hpp"
#include "nosqint/errors.hpp"
#include "nosqint/io.hpp"

namespace nosqint {

struct MatcherConfig {
    std::map<std::string, std::set<std::string>> synonymTable;  // normalized term -> linked terms
    double simThreshold = 0.85;
    double lexicalWeight = 0.5;
    double structuralWeight = 0.3;
    double annotationWeight = 0.2;

    void validate() const {
        auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
        if (!in_unit(simThreshold) || !in_unit(lexicalWeight) || !in_unit(structuralWeight) ||
            !in_unit(annotationWeight)) {
            throw Error("alignment", "InvalidArgument", "threshold and weights must lie in [0,1]");
        }
        if (std::abs(lexicalWeight + structuralWeight + annotationWeight - 1.0) > 1e-9) {
            throw Error("alignment", "InvalidArgument", "matcher weights must sum to 1");
        }
    }
};

namespace detail {

// Case, camelCase, and punctuation normalization: "WriteReview" and
// "writeReview" both tokenize to [write, review].
inline std::vector<std::string> normalize_tokens(const std::string& s) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    };
    for (size_t i = 0; i < s.size(); ++i) {
        const unsigned char ch = static_cast<unsigned char>(s[i]);
        if (!std::isalnum(ch)) {
            flush();
            continue;
        }
        if (std::isupper(ch) && !cur.empty()) {
            const unsigned char prev = static_cast<unsigned char>(s[i - 1]);
            const bool nextLower = i + 1 < s.size() && std::islower(static_cast<unsigned char>(s[i + 1]));
            if (std::islower(prev) || (std::isupper(prev) && nextLower)) flush();
        }
        cur.push_back(static_cast<char>(std::tolower(ch)));
    }
    flush();
    return tokens;
}

inline std::string normalized_join(const std::string& s) {
    std::string out;
    for (const auto& t : normalize_tokens(s)) out += t;
    return out;
}

inline size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

}  // namespace detail

// Synonym table: TSV with one `term<TAB>synonym` pair per line; the symmetric
// closure is applied on load and terms are stored normalized.
inline std::map<std::string, std::set<std::string>> load_synonyms(const std::string& path) {
    const std::string text = read_text_file(path);
    std::map<std::string, std::set<std::string>> table;
    size_t lineNo = 0;
    std::string line;
    auto take = [&](const std::string& l) {
        ++lineNo;
        if (l.empty()) return;
        const size_t tab = l.find('\t');
        if (tab == std::string::npos || l.find('\t', tab + 1) != std::string::npos) {
            throw Error("alignment", "ParseError", "synonym line " + std::to_string(lineNo) + " is not term<TAB>synonym");
        }
        const std::string a = detail::normalized_join(l.substr(0, tab));
        const std::string b = detail::normalized_join(l.substr(tab + 1));
        if (a.empty() || b.empty()) {
            throw Error("alignment", "ParseError", "empty term on synonym line " + std::to_string(lineNo));
        }
        table[a].insert(b);
        table[b].insert(a);
    };
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            take(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) take(cur);
    return table;
}

inline double name_similarity(const std::string& a, const std::string& b, const MatcherConfig& cfg) {
    const std::string na = detail::normalized_join(a);
    const std::string nb = detail::normalized_join(b);
    if (na == nb) return 1.0;
    auto it = cfg.synonymTable.find(na);
    if (it != cfg.synonymTable.end() && it->second.count(nb)) return 1.0;
    if (na.empty() || nb.empty()) return 0.0;
    const size_t dist = detail::levenshtein(na, nb);
    return 1.0 - static_cast<double>(dist) / static_cast<double>(std::max(na.size(), nb.size()));
}

struct Correspondence {
    enum class Relation { Equiv, SubsumedBy, Subsumes, Disjoint };
    enum class Provenance { Lexical, Structural, Annotation, Prop1, Prop2 };

    bool roleCell = false;
    ConceptExpr left, right;           // concept or formula sides (names unqualified)
    std::string leftRole, rightRole;   // used when roleCell
    Relation relation = Relation::Equiv;
    double confidence = 1.0;
    Provenance provenance = Provenance::Lexical;

    friend bool operator==(const Correspondence& a, const Correspondence& b) {
        return a.roleCell == b.roleCell && a.left == b.left && a.right == b.right && a.leftRole == b.leftRole &&
               a.rightRole == b.rightRole && a.relation == b.relation;
    }
};

struct Alignment {
    std::string leftOntology;
    std::string rightOntology;
    std::vector<Correspondence> cells;

    // Duplicate (left, right, relation) triples are dropped.
    void add_cell(Correspondence c) {
        for (const auto& existing : cells) {
            if (existing == c) return;
        }
        cells.push_back(std::move(c));
    }
};

// Materializes the implicit name-level subsumptions: transitive closure of
// the told hierarchy plus domain placement for centers defined through a
// role restriction (only when the role name is unambiguous). Idempotent.
inline Ontology saturate(const Ontology& onto) {
    Ontology out = onto;
    bool changed = true;
    while (changed) {
        const size_t before = out.axioms().size();
        for (const auto& ax : std::vector<Axiom>(out.axioms())) {
            if (ax.type != Axiom::Type::SubClassOf || ax.sub.kind() != ConceptExpr::Kind::Atomic) continue;
            for (const auto& part : ax.sup.conjuncts()) {
                if (part.kind() != ConceptExpr::Kind::Exists && part.kind() != ConceptExpr::Kind::MinCard) continue;
                const auto decls = out.roles_named(part.role());
                if (decls.size() == 1 && decls[0]->domain != ax.sub.name()) {
                    out.add_axiom(Axiom::sub_class_of(ax.sub, ConceptExpr::atomic(decls[0]->domain)));
                }
            }
        }
        for (const auto& [name, sups] : classify(out)) {
            for (const auto& s : sups) {
                if (s != name) out.add_axiom(Axiom::sub_class_of(ConceptExpr::atomic(name), ConceptExpr::atomic(s)));
            }
        }
        changed = out.axioms().size() != before;
    }
    return out;
}

struct SubGraphProperty {
    std::string role;
    int lowerBound = 0;
    std::string domain;
    std::string range;
    bool objectRole = false;

    friend bool operator<(const SubGraphProperty& a, const SubGraphProperty& b) {
        return std::tie(a.role, a.domain, a.range) < std::tie(b.role, b.domain, b.range);
    }
};

struct SubGraph {
    std::string ontologyId;
    std::string center;
    std::set<std::string> directSubs;
    std::set<std::string> disjoints;
    std::set<std::string> directSupers;
    std::vector<SubGraphProperty> properties;
    // Strict ancestors of every concept the subgraph mentions, so subsumption
    // checks need no further ontology access.
    std::map<std::string, std::set<std::string>> generalizations;
};

namespace detail {

struct Hierarchy {
    std::map<std::string, std::set<std::string>> supers;     // reflexive-transitive
    std::map<std::string, std::set<std::string>> coverUp;    // direct supers
    std::map<std::string, std::set<std::string>> coverDown;  // direct subs

    std::set<std::string> strict_up(const std::string& a) const {
        std::set<std::string> out;
        auto it = supers.find(a);
        if (it == supers.end()) return out;
        for (const auto& s : it->second) {
            if (s != a && !supers.at(s).count(a)) out.insert(s);
        }
        return out;
    }
};

inline Hierarchy build_hierarchy(const Ontology& onto) {
    Hierarchy h;
    h.supers = classify(onto);
    for (const auto& [name, sups] : h.supers) {
        const std::set<std::string> up = h.strict_up(name);
        for (const auto& s : up) {
            bool direct = true;
            for (const auto& t : up) {
                if (t != s && h.strict_up(t).count(s)) {
                    direct = false;
                    break;
                }
            }
            if (direct) {
                h.coverUp[name].insert(s);
                h.coverDown[s].insert(name);
            }
        }
    }
    return h;
}

// Told lower bound of a role as used from its domain concept: the strongest
// restriction among the domain's definitions, Exists counting as 1.
inline int role_lower_bound(const Ontology& onto, const std::string& roleName, const std::string& domain) {
    int bound = 0;
    for (const auto& ax : onto.axioms()) {
        if (ax.type != Axiom::Type::SubClassOf || ax.sub.kind() != ConceptExpr::Kind::Atomic) continue;
        if (ax.sub.name() != domain) continue;
        for (const auto& part : ax.sup.conjuncts()) {
            if ((part.kind() == ConceptExpr::Kind::Exists || part.kind() == ConceptExpr::Kind::MinCard) &&
                part.role() == roleName) {
                bound = std::max(bound, part.bound());
            }
        }
    }
    return bound;
}

}  // namespace detail

inline SubGraph extract_subgraph(const Ontology& onto, const std::string& c) {
    if (!onto.has_concept(c)) throw Error("alignment", "UnknownName", "unknown concept '" + c + "'");
    const detail::Hierarchy h = detail::build_hierarchy(onto);
    SubGraph sg;
    sg.ontologyId = onto.id;
    sg.center = c;
    if (auto it = h.coverUp.find(c); it != h.coverUp.end()) sg.directSupers = it->second;
    if (auto it = h.coverDown.find(c); it != h.coverDown.end()) sg.directSubs = it->second;
    for (const auto& ax : onto.axioms()) {
        if (ax.type != Axiom::Type::DisjointWith) continue;
        if (ax.sub.name() == c) sg.disjoints.insert(ax.sup.name());
        if (ax.sup.name() == c) sg.disjoints.insert(ax.sub.name());
    }
    sg.directSupers.erase(c);
    sg.directSubs.erase(c);
    sg.disjoints.erase(c);

    std::set<std::string> mentioned = {c};
    for (const auto& role : onto.roles()) {
        const bool objectRole = role.kind == Role::Kind::Object;
        if (role.domain != c && !(objectRole && role.range == c)) continue;
        SubGraphProperty p;
        p.role = role.name;
        p.domain = role.domain;
        p.range = role.range;
        p.objectRole = objectRole;
        p.lowerBound = detail::role_lower_bound(onto, role.name, role.domain);
        sg.properties.push_back(p);
        mentioned.insert(role.domain);
        if (objectRole) mentioned.insert(role.range);
    }
    std::sort(sg.properties.begin(), sg.properties.end());
    sg.properties.erase(std::unique(sg.properties.begin(), sg.properties.end(),
                                    [](const SubGraphProperty& a, const SubGraphProperty& b) {
                                        return !(a < b) && !(b < a);
                                    }),
                        sg.properties.end());

    mentioned.insert(sg.directSubs.begin(), sg.directSubs.end());
    mentioned.insert(sg.directSupers.begin(), sg.directSupers.end());
    mentioned.insert(sg.disjoints.begin(), sg.disjoints.end());
    for (const auto& name : mentioned) {
        std::set<std::string> gen;
        if (auto it = h.supers.find(name); it != h.supers.end()) {
            gen = it->second;
            gen.erase(name);
        }
        sg.generalizations[name] = gen;
    }
    return sg;
}

namespace detail {

// Simple Equiv cells of a computed alignment, indexed for orientation-aware
// lookups from subgraph checks.
struct SimpleIndex {
    std::string leftId, rightId;
    std::set<std::pair<std::string, std::string>> conceptPairs;
    std::set<std::pair<std::string, std::string>> rolePairs;

    explicit SimpleIndex(const Alignment& a) : leftId(a.leftOntology), rightId(a.rightOntology) {
        for (const auto& cell : a.cells) {
            if (cell.relation != Correspondence::Relation::Equiv) continue;
            if (cell.roleCell) {
                rolePairs.insert({cell.leftRole, cell.rightRole});
            } else if (cell.left.kind() == ConceptExpr::Kind::Atomic &&
                       cell.right.kind() == ConceptExpr::Kind::Atomic) {
                conceptPairs.insert({cell.left.name(), cell.right.name()});
            }
        }
    }

    bool linked(const std::set<std::pair<std::string, std::string>>& pairs, const std::string& idA,
                const std::string& a, const std::string& idB, const std::string& b) const {
        if (idA == leftId && idB == rightId) return pairs.count({a, b}) > 0;
        if (idA == rightId && idB == leftId) return pairs.count({b, a}) > 0;
        return false;
    }
};

struct SimilarityOracle {
    const SimpleIndex* index = nullptr;
    const MatcherConfig* cfg = nullptr;

    bool concepts(const std::string& idA, const std::string& a, const std::string& idB, const std::string& b) const {
        if (index && index->linked(index->conceptPairs, idA, a, idB, b)) return true;
        return name_similarity(a, b, *cfg) >= cfg->simThreshold;
    }
    bool roles(const std::string& idA, const std::string& a, const std::string& idB, const std::string& b) const {
        if (index && index->linked(index->rolePairs, idA, a, idB, b)) return true;
        return name_similarity(a, b, *cfg) >= cfg->simThreshold;
    }
};

inline const std::set<std::string>& gens_of(const SubGraph& sg, const std::string& name) {
    static const std::set<std::string> empty;
    auto it = sg.generalizations.find(name);
    return it == sg.generalizations.end() ? empty : it->second;
}

// Similar directly or through any pair of ancestors.
inline bool similar_or_general(const SimilarityOracle& sim, const SubGraph& sg1, const std::string& a,
                               const SubGraph& sg2, const std::string& b) {
    std::set<std::string> as = {a}, bs = {b};
    const auto& ga = gens_of(sg1, a);
    const auto& gb = gens_of(sg2, b);
    as.insert(ga.begin(), ga.end());
    bs.insert(gb.begin(), gb.end());
    for (const auto& x : as) {
        for (const auto& y : bs) {
            if (sim.concepts(sg1.ontologyId, x, sg2.ontologyId, y)) return true;
        }
    }
    return false;
}

}  // namespace detail

// Proposition-1 conditions, applied as written: true means SG1 subsumes SG2.
// Universal quantifications over empty neighbor sets hold vacuously.
inline bool subgraph_subsumes(const SubGraph& sg1, const SubGraph& sg2, const Alignment& simple,
                              const MatcherConfig& cfg) {
    const detail::SimpleIndex index(simple);
    detail::SimilarityOracle sim{&index, &cfg};
    const std::string& id1 = sg1.ontologyId;
    const std::string& id2 = sg2.ontologyId;

    for (const auto& s : sg1.directSubs) {  // (1)
        bool found = false;
        for (const auto& t : sg2.directSubs) {
            if (sim.concepts(id1, s, id2, t)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    for (const auto& d : sg1.disjoints) {  // (2)
        bool found = false;
        for (const auto& e : sg2.disjoints) {
            if (sim.concepts(id1, d, id2, e)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    for (const auto& s : sg1.directSupers) {  // (3)
        bool found = false;
        for (const auto& t : sg2.directSupers) {
            if (detail::similar_or_general(sim, sg1, s, sg2, t)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    for (const auto& p1 : sg1.properties) {  // (4) + (5) + (6)
        bool found = false;
        for (const auto& p2 : sg2.properties) {
            if (!sim.roles(id1, p1.role, id2, p2.role)) continue;
            if (p1.lowerBound < p2.lowerBound) continue;
            if (!detail::similar_or_general(sim, sg1, p1.domain, sg2, p2.domain)) continue;
            if (p1.objectRole != p2.objectRole) continue;
            if (p1.objectRole) {
                if (!detail::similar_or_general(sim, sg1, p1.range, sg2, p2.range)) continue;
            } else if (name_similarity(p1.range, p2.range, cfg) < cfg.simThreshold) {
                continue;
            }
            found = true;
            break;
        }
        if (!found) return false;
    }
    return true;
}

namespace detail {

// Per-entity structural neighborhoods: cover supers/subs and touching role
// names for concepts; domain/range concepts for role names.
struct EntityInfo {
    std::vector<std::string> concepts;
    std::vector<std::string> roleNames;
    std::map<std::string, std::set<std::string>> conceptNeighbors;  // tagged "c:"/"r:"
    std::map<std::string, std::set<std::string>> roleNeighbors;     // concept names
    const std::map<std::string, std::vector<std::string>>* annotations = nullptr;
};

inline EntityInfo build_entity_info(const Ontology& onto, const Hierarchy& h) {
    EntityInfo info;
    info.annotations = &onto.annotations();
    for (const auto& c : onto.concepts()) {
        info.concepts.push_back(c);
        std::set<std::string>& n = info.conceptNeighbors[c];
        if (auto it = h.coverUp.find(c); it != h.coverUp.end()) {
            for (const auto& s : it->second) n.insert("c:" + s);
        }
        if (auto it = h.coverDown.find(c); it != h.coverDown.end()) {
            for (const auto& s : it->second) n.insert("c:" + s);
        }
    }
    std::set<std::string> seen;
    for (const auto& role : onto.roles()) {
        if (seen.insert(role.name).second) info.roleNames.push_back(role.name);
        info.roleNeighbors[role.name].insert(role.domain);
        info.conceptNeighbors[role.domain].insert("r:" + role.name);
        if (role.kind == Role::Kind::Object) {
            info.roleNeighbors[role.name].insert(role.range);
            info.conceptNeighbors[role.range].insert("r:" + role.name);
        }
    }
    std::sort(info.roleNames.begin(), info.roleNames.end());
    return info;
}

inline double annotation_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b,
                                    const MatcherConfig& cfg) {
    double best = 0.0;
    for (const auto& x : a) {
        for (const auto& y : b) best = std::max(best, name_similarity(x, y, cfg));
    }
    return best;
}

struct MatchState {
    std::map<std::string, std::string> conceptMatch;  // left -> right
    std::map<std::string, std::string> roleMatch;

    bool operator==(const MatchState& o) const {
        return conceptMatch == o.conceptMatch && roleMatch == o.roleMatch;
    }
};

// Jaccard over the already-matched neighbors only: entities without any match
// yet carry no structural evidence and stay out of both sets. Returns nullopt
// (matcher abstains) when neither side has a matched neighbor.
inline std::optional<double> jaccard_matched(const std::set<std::string>& n1, const std::set<std::string>& n2,
                                             const MatchState& state) {
    std::set<std::string> rightConcepts, rightRoles;
    for (const auto& [l, r] : state.conceptMatch) rightConcepts.insert(r);
    for (const auto& [l, r] : state.roleMatch) rightRoles.insert(r);
    size_t m = 0, left = 0, right = 0;
    for (const auto& tagged : n1) {
        const bool roleTag = tagged.rfind("r:", 0) == 0;
        const std::string name = tagged.substr(2);
        const auto& table = roleTag ? state.roleMatch : state.conceptMatch;
        auto it = table.find(name);
        if (it == table.end()) continue;
        ++left;
        if (n2.count((roleTag ? "r:" : "c:") + it->second)) ++m;
    }
    for (const auto& tagged : n2) {
        const bool roleTag = tagged.rfind("r:", 0) == 0;
        if ((roleTag ? rightRoles : rightConcepts).count(tagged.substr(2))) ++right;
    }
    const size_t uni = left + right - m;
    if (left + right == 0) return std::nullopt;
    return static_cast<double>(m) / static_cast<double>(uni);
}

struct PairScore {
    double score = 0.0;
    Correspondence::Provenance provenance = Correspondence::Provenance::Lexical;
};

// Weighted combination over the matchers that produced evidence.
inline PairScore combine(const MatcherConfig& cfg, double lexical, std::optional<double> structural,
                         std::optional<double> annotation) {
    double num = cfg.lexicalWeight * lexical;
    double den = cfg.lexicalWeight;
    if (structural) {
        num += cfg.structuralWeight * *structural;
        den += cfg.structuralWeight;
    }
    if (annotation) {
        num += cfg.annotationWeight * *annotation;
        den += cfg.annotationWeight;
    }
    PairScore out;
    out.score = den == 0.0 ? 0.0 : num / den;
    out.provenance = Correspondence::Provenance::Lexical;
    double best = lexical;
    if (structural && *structural > best) {
        best = *structural;
        out.provenance = Correspondence::Provenance::Structural;
    }
    if (annotation && *annotation > best) {
        out.provenance = Correspondence::Provenance::Annotation;
    }
    return out;
}

// Mutual-best injective pairing at or above the threshold; score ties break
// toward the lexicographically least counterpart.
inline std::map<std::string, std::string> mutual_best(
    const std::map<std::pair<std::string, std::string>, double>& scores, double threshold) {
    std::map<std::string, std::pair<double, std::string>> bestRight, bestLeft;
    for (const auto& [pair, score] : scores) {
        const auto& [l, r] = pair;
        auto consider = [&](std::map<std::string, std::pair<double, std::string>>& table, const std::string& key,
                            const std::string& other) {
            auto it = table.find(key);
            if (it == table.end() || score > it->second.first ||
                (score == it->second.first && other < it->second.second)) {
                table[key] = {score, other};
            }
        };
        consider(bestRight, l, r);
        consider(bestLeft, r, l);
    }
    std::map<std::string, std::string> out;
    for (const auto& [l, best] : bestRight) {
        if (best.first < threshold) continue;
        const auto back = bestLeft.find(best.second);
        if (back != bestLeft.end() && back->second.second == l) out[l] = best.second;
    }
    return out;
}

}  // namespace detail

// Three-matcher simple alignment. The structural matcher abstains in the
// first round (nothing is matched yet) and afterwards scores neighborhoods
// against the previous round's pairing, iterating to a fixpoint.
inline Alignment align_simple(const Ontology& o1, const Ontology& o2, const MatcherConfig& cfg) {
    cfg.validate();
    if (o1.id == o2.id) throw Error("alignment", "SameOntology", "cannot align '" + o1.id + "' with itself");
    const detail::Hierarchy h1 = detail::build_hierarchy(o1);
    const detail::Hierarchy h2 = detail::build_hierarchy(o2);
    const detail::EntityInfo i1 = detail::build_entity_info(o1, h1);
    const detail::EntityInfo i2 = detail::build_entity_info(o2, h2);

    auto annotations_of = [](const detail::EntityInfo& info, const std::string& entity)
        -> const std::vector<std::string>* {
        auto it = info.annotations->find(entity);
        return it == info.annotations->end() || it->second.empty() ? nullptr : &it->second;
    };

    detail::MatchState state;
    std::map<std::pair<std::string, std::string>, detail::PairScore> conceptScores, roleScores;
    for (int round = 1; round <= 10; ++round) {
        conceptScores.clear();
        roleScores.clear();
        auto score_pair = [&](const std::string& a, const std::string& b, const std::set<std::string>* n1,
                              const std::set<std::string>* n2, const std::vector<std::string>* ann1,
                              const std::vector<std::string>* ann2) {
            const double lexical = name_similarity(a, b, cfg);
            std::optional<double> structural;
            if (round > 1 && n1 && n2) structural = detail::jaccard_matched(*n1, *n2, state);
            std::optional<double> annotation;
            if (ann1 && ann2) annotation = detail::annotation_similarity(*ann1, *ann2, cfg);
            return detail::combine(cfg, lexical, structural, annotation);
        };
        for (const auto& c1 : i1.concepts) {
            for (const auto& c2 : i2.concepts) {
                conceptScores[{c1, c2}] = score_pair(c1, c2, &i1.conceptNeighbors.at(c1), &i2.conceptNeighbors.at(c2),
                                                     annotations_of(i1, c1), annotations_of(i2, c2));
            }
        }
        for (const auto& r1 : i1.roleNames) {
            for (const auto& r2 : i2.roleNames) {
                std::set<std::string> n1, n2;
                for (const auto& d : i1.roleNeighbors.at(r1)) n1.insert("c:" + d);
                for (const auto& d : i2.roleNeighbors.at(r2)) n2.insert("c:" + d);
                roleScores[{r1, r2}] = score_pair(r1, r2, &n1, &n2, annotations_of(i1, r1), annotations_of(i2, r2));
            }
        }
        std::map<std::pair<std::string, std::string>, double> cs, rs;
        for (const auto& [k, v] : conceptScores) cs[k] = v.score;
        for (const auto& [k, v] : roleScores) rs[k] = v.score;
        detail::MatchState next;
        next.conceptMatch = detail::mutual_best(cs, cfg.simThreshold);
        next.roleMatch = detail::mutual_best(rs, cfg.simThreshold);
        if (round > 1 && next == state) break;
        state = next;
    }

    Alignment out;
    out.leftOntology = o1.id;
    out.rightOntology = o2.id;
    for (const auto& [l, r] : state.conceptMatch) {
        const detail::PairScore& s = conceptScores.at({l, r});
        Correspondence cell;
        cell.left = ConceptExpr::atomic(l);
        cell.right = ConceptExpr::atomic(r);
        cell.relation = Correspondence::Relation::Equiv;
        cell.confidence = s.score;
        cell.provenance = s.provenance;
        out.add_cell(std::move(cell));
    }
    for (const auto& [l, r] : state.roleMatch) {
        const detail::PairScore& s = roleScores.at({l, r});
        Correspondence cell;
        cell.roleCell = true;
        cell.leftRole = l;
        cell.rightRole = r;
        cell.relation = Correspondence::Relation::Equiv;
        cell.confidence = s.score;
        cell.provenance = s.provenance;
        out.add_cell(std::move(cell));
    }
    return out;
}

namespace detail {

// Formula rendering of a subgraph: the center conjoined with its domain-side
// object-property restrictions that carry a told bound.
inline ConceptExpr subgraph_formula(const SubGraph& sg) {
    std::vector<ConceptExpr> parts = {ConceptExpr::atomic(sg.center)};
    for (const auto& p : sg.properties) {
        if (p.domain != sg.center || !p.objectRole || p.lowerBound < 1) continue;
        parts.push_back(ConceptExpr::min_card(p.lowerBound, p.role, ConceptExpr::atomic(p.range)));
    }
    return ConceptExpr::conj(std::move(parts));
}

}  // namespace detail

// Complex correspondences: Proposition 1 subgraph subsumption over all
// concept pairs, then Proposition 2 concept-to-role formula cells.
inline Alignment align_complex(const Ontology& o1, const Ontology& o2, const Alignment& simple,
                               const MatcherConfig& cfg) {
    cfg.validate();
    if (o1.id == o2.id) throw Error("alignment", "SameOntology", "cannot align '" + o1.id + "' with itself");
    Alignment out;
    out.leftOntology = o1.id;
    out.rightOntology = o2.id;

    std::map<std::string, SubGraph> sg1, sg2;
    for (const auto& c : o1.concepts()) sg1.emplace(c, extract_subgraph(o1, c));
    for (const auto& c : o2.concepts()) sg2.emplace(c, extract_subgraph(o2, c));

    for (const auto& [c1, g1] : sg1) {
        for (const auto& [c2, g2] : sg2) {
            const bool fwd = subgraph_subsumes(g1, g2, simple, cfg);  // SG1 subsumes SG2
            const bool bwd = subgraph_subsumes(g2, g1, simple, cfg);
            if (!fwd && !bwd) continue;
            Correspondence cell;
            cell.left = detail::subgraph_formula(g1);
            cell.right = detail::subgraph_formula(g2);
            cell.relation = fwd && bwd ? Correspondence::Relation::Equiv
                            : fwd      ? Correspondence::Relation::Subsumes
                                       : Correspondence::Relation::SubsumedBy;
            cell.confidence = 1.0;
            cell.provenance = Correspondence::Provenance::Prop1;
            out.add_cell(std::move(cell));
        }
    }

    // Proposition 2: concept c against role r of the other ontology, anchored
    // through a simple cell on r's domain or range (or a super of either).
    const detail::SimpleIndex index(simple);
    const auto supers1 = classify(o1);
    const auto supers2 = classify(o2);
    auto anchored = [&](const std::string& conceptName, const std::map<std::string, std::set<std::string>>& cSupers,
                        const Role& role, const std::map<std::string, std::set<std::string>>& rSupers,
                        bool conceptOnLeft) {
        std::set<std::string> roleSide = rSupers.at(role.domain);
        if (role.kind == Role::Kind::Object) {
            const auto& rs = rSupers.at(role.range);
            roleSide.insert(rs.begin(), rs.end());
        }
        for (const auto& dc : cSupers.at(conceptName)) {
            for (const auto& dr : roleSide) {
                const bool linked = conceptOnLeft ? index.linked(index.conceptPairs, index.leftId, dc, index.rightId, dr)
                                                  : index.linked(index.conceptPairs, index.rightId, dc, index.leftId, dr);
                if (linked) return true;
            }
        }
        return false;
    };
    for (const auto& c1 : o1.concepts()) {
        for (const auto& role : o2.roles()) {
            if (role.kind != Role::Kind::Object) continue;
            const double sim = name_similarity(c1, role.name, cfg);
            if (sim < cfg.simThreshold) continue;
            if (!anchored(c1, supers1, role, supers2, true)) continue;
            Correspondence cell;
            cell.left = ConceptExpr::atomic(c1);
            cell.right = ConceptExpr::exists(role.name, ConceptExpr::atomic(role.range));
            cell.relation = Correspondence::Relation::SubsumedBy;
            cell.confidence = sim;
            cell.provenance = Correspondence::Provenance::Prop2;
            out.add_cell(std::move(cell));
        }
    }
    for (const auto& c2 : o2.concepts()) {
        for (const auto& role : o1.roles()) {
            if (role.kind != Role::Kind::Object) continue;
            const double sim = name_similarity(c2, role.name, cfg);
            if (sim < cfg.simThreshold) continue;
            if (!anchored(c2, supers2, role, supers1, false)) continue;
            Correspondence cell;
            cell.left = ConceptExpr::exists(role.name, ConceptExpr::atomic(role.range));
            cell.right = ConceptExpr::atomic(c2);
            cell.relation = Correspondence::Relation::Subsumes;
            cell.confidence = sim;
            cell.provenance = Correspondence::Provenance::Prop2;
            out.add_cell(std::move(cell));
        }
    }
    return out;
}

// --- EDOAL-style serialization ---------------------------------------------

namespace detail {

inline ConceptExpr map_expr_names(const ConceptExpr& e, const std::function<std::string(const std::string&)>& fc,
                                  const std::function<std::string(const std::string&)>& fr) {
    switch (e.kind()) {
        case ConceptExpr::Kind::Top: return ConceptExpr::top();
        case ConceptExpr::Kind::Atomic: return ConceptExpr::atomic(fc(e.name()));
        case ConceptExpr::Kind::Exists: return ConceptExpr::exists(fr(e.role()), map_expr_names(e.filler(), fc, fr));
        case ConceptExpr::Kind::MinCard:
            return ConceptExpr::min_card(e.bound(), fr(e.role()), map_expr_names(e.filler(), fc, fr));
        case ConceptExpr::Kind::And: {
            std::vector<ConceptExpr> parts;
            for (const auto& p : e.parts()) parts.push_back(map_expr_names(p, fc, fr));
            return ConceptExpr::conj(std::move(parts));
        }
    }
    return ConceptExpr::top();
}

inline std::string qualify_name(const std::string& id, const std::string& name) { return id + "#" + name; }

inline std::string unqualify_name(const std::string& id, const std::string& qualified) {
    const std::string prefix = id + "#";
    if (qualified.rfind(prefix, 0) != 0) {
        throw Error("alignment", "ParseError", "name '" + qualified + "' is not qualified by '" + id + "'");
    }
    return qualified.substr(prefix.size());
}

inline const char* relation_tag(Correspondence::Relation r) {
    switch (r) {
        case Correspondence::Relation::Equiv: return "=";
        case Correspondence::Relation::SubsumedBy: return "<";
        case Correspondence::Relation::Subsumes: return ">";
        case Correspondence::Relation::Disjoint: return "%";
    }
    return "?";
}

inline Correspondence::Relation relation_from_tag(const std::string& tag) {
    if (tag == "=") return Correspondence::Relation::Equiv;
    if (tag == "<") return Correspondence::Relation::SubsumedBy;
    if (tag == ">") return Correspondence::Relation::Subsumes;
    if (tag == "%") return Correspondence::Relation::Disjoint;
    throw Error("alignment", "ParseError", "unknown relation tag '" + tag + "'");
}

inline nlohmann::json entity_to_json(const Correspondence& cell, bool leftSide, const std::string& id) {
    if (cell.roleCell) {
        return nlohmann::json{{"role", qualify_name(id, leftSide ? cell.leftRole : cell.rightRole)}};
    }
    auto qualify = [&](const std::string& n) { return qualify_name(id, n); };
    return map_expr_names(leftSide ? cell.left : cell.right, qualify, qualify).to_json();
}

}  // namespace detail

inline nlohmann::json alignment_to_json(const Alignment& a) {
    nlohmann::json j;
    j["onto1"] = a.leftOntology;
    j["onto2"] = a.rightOntology;
    j["cells"] = nlohmann::json::array();
    for (const auto& cell : a.cells) {
        nlohmann::json c;
        c["entity1"] = detail::entity_to_json(cell, true, a.leftOntology);
        c["entity2"] = detail::entity_to_json(cell, false, a.rightOntology);
        c["relation"] = detail::relation_tag(cell.relation);
        c["measure"] = cell.confidence;
        j["cells"].push_back(std::move(c));
    }
    return j;
}

inline std::string serialize_alignment(const Alignment& a) { return alignment_to_json(a).dump(2) + "\n"; }

inline Alignment alignment_from_json(const nlohmann::json& j) {
    try {
        Alignment a;
        a.leftOntology = j.at("onto1").get<std::string>();
        a.rightOntology = j.at("onto2").get<std::string>();
        for (const auto& c : j.at("cells")) {
            // Provenance is an in-memory computation trace; the interchange
            // format carries only the relation and its measure.
            Correspondence cell;
            cell.relation = detail::relation_from_tag(c.at("relation").get<std::string>());
            cell.confidence = c.at("measure").get<double>();
            const nlohmann::json& e1 = c.at("entity1");
            const nlohmann::json& e2 = c.at("entity2");
            if (e1.is_object() && e1.contains("role")) {
                if (!e2.is_object() || !e2.contains("role")) {
                    throw Error("alignment", "ParseError", "role cell must qualify both sides");
                }
                cell.roleCell = true;
                cell.leftRole = detail::unqualify_name(a.leftOntology, e1.at("role").get<std::string>());
                cell.rightRole = detail::unqualify_name(a.rightOntology, e2.at("role").get<std::string>());
            } else {
                auto unq1 = [&](const std::string& n) { return detail::unqualify_name(a.leftOntology, n); };
                auto unq2 = [&](const std::string& n) { return detail::unqualify_name(a.rightOntology, n); };
                cell.left = detail::map_expr_names(ConceptExpr::from_json(e1), unq1, unq1);
                cell.right = detail::map_expr_names(ConceptExpr::from_json(e2), unq2, unq2);
            }
            a.cells.push_back(std::move(cell));
        }
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw Error("alignment", "ParseError", std::string("bad alignment json: ") + e.what());
    }
}

inline Alignment parse_alignment(const std::string& text) {
    try {
        return alignment_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
        throw Error("alignment", "ParseError", std::string("bad alignment json: ") + e.what());
    }
}

}  // namespace nosqint
