#pragma once
// Reference evaluator for the supported BGP fragment. Each database's data is
// viewed as (entity, key, scalar value) triples through the global ontology's
// mappings, and patterns are joined by exhaustive enumeration with no staging
// or planning. bql tests compare translate + execute_union against this.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nosqint/bql.hpp"
#include "nosqint/globalont.hpp"
#include "nosqint/queryfront.hpp"
#include "nosqint/store.hpp"

namespace testsupport {

inline bool value_eq(const nosqint::Value& a, const nosqint::Value& b) {
    return nosqint::compare_scalar(nosqint::Comparator::Eq, a, b);
}

inline const nosqint::EntityClass* class_named(const std::vector<nosqint::EntityClass>& classes,
                                               const std::string& name) {
    const size_t hash = name.find('#');
    if (hash != std::string::npos) {
        const std::pair<std::string, std::string> node{name.substr(0, hash), name.substr(hash + 1)};
        for (const auto& c : classes) {
            for (const auto& m : c.members) {
                if (m == node) return &c;
            }
        }
        return nullptr;
    }
    for (const auto& c : classes) {
        if (c.globalName == name) return &c;
    }
    return nullptr;
}

inline std::optional<std::string> representative_member(const nosqint::EntityClass& cls, const std::string& db) {
    std::optional<std::string> least;
    for (const auto& [id, name] : cls.members) {
        if (id == db && (!least || name < *least)) least = name;
    }
    return least;
}

// Entity keys instantiating the concept in db: a container concept covers
// every entry of its container, a type-value concept the entries whose type
// key carries the representative member's name. Other mappings denote nodes
// no store row materializes.
inline std::set<std::string> instance_keys(const nosqint::GlobalOntology& go, const nosqint::SourceCatalog& catalog,
                                           const std::string& db, const nosqint::EntityClass& cls) {
    const auto member = representative_member(cls, db);
    if (!member) return {};
    const auto m = nosqint::detail::binding_mapping(go, db, *member, true);
    if (!m) return {};
    std::set<std::string> keys;
    if (m->kind == nosqint::MappingKind::ConceptToContainer) {
        for (const auto& [key, entry] : catalog.entries(m->source)) keys.insert(key);
    } else if (m->kind == nosqint::MappingKind::ConceptToTypeValue && m->keyPath.size() == 1) {
        for (const auto& [key, entry] : catalog.entries(m->source)) {
            auto it = entry.find(m->keyPath.front());
            if (it != entry.end() &&
                nosqint::matches_filter(nosqint::Comparator::Eq, it->second, nosqint::Value(*member))) {
                keys.insert(key);
            }
        }
    }
    return keys;
}

// (subject key, scalar object) pairs the role's key carries in db. Lists
// contribute one pair per scalar element; nested values contribute nothing.
inline std::vector<std::pair<std::string, nosqint::Value>> role_pairs(const nosqint::GlobalOntology& go,
                                                                      const nosqint::SourceCatalog& catalog,
                                                                      const std::string& db,
                                                                      const nosqint::EntityClass& cls) {
    std::vector<std::pair<std::string, nosqint::Value>> out;
    const auto member = representative_member(cls, db);
    if (!member) return out;
    const auto m = nosqint::detail::binding_mapping(go, db, *member, false);
    if (!m || m->keyPath.size() != 1) return out;
    if (m->kind != nosqint::MappingKind::DatatypeRoleToKey && m->kind != nosqint::MappingKind::ObjectRoleToKey) {
        return out;
    }
    for (const auto& [key, entry] : catalog.entries(m->source)) {
        auto it = entry.find(m->keyPath.front());
        if (it == entry.end()) continue;
        if (it->second.is_scalar()) {
            out.push_back({key, it->second});
        } else if (it->second.is_list()) {
            for (const auto& e : it->second.as_list()) {
                if (e.is_scalar()) out.push_back({key, e});
            }
        }
    }
    return out;
}

inline std::set<std::vector<nosqint::Value>> oracle_rows(const nosqint::SparqlQuery& q,
                                                         const nosqint::GlobalOntology& go,
                                                         const nosqint::SourceCatalog& catalog,
                                                         const std::string& db) {
    using nosqint::SparqlTerm;
    using nosqint::Value;
    using Binding = std::map<std::string, Value>;

    std::set<Binding> partial{Binding{}};
    for (const auto& p : q.patterns) {
        std::set<Binding> next;
        if (p.predicate == nosqint::kTypePredicate) {
            const auto* cls = class_named(go.conceptClasses, p.object.text);
            const std::set<std::string> keys =
                cls ? instance_keys(go, catalog, db, *cls) : std::set<std::string>{};
            for (const Binding& b : partial) {
                if (!p.subject.is_var()) {
                    if (keys.count(p.subject.text)) next.insert(b);
                    continue;
                }
                auto it = b.find(p.subject.text);
                if (it != b.end()) {
                    if (it->second.is_text() && keys.count(it->second.as_text())) next.insert(b);
                    continue;
                }
                for (const std::string& k : keys) {
                    Binding nb = b;
                    nb[p.subject.text] = Value(k);
                    next.insert(std::move(nb));
                }
            }
        } else {
            const auto* cls = class_named(go.roleClasses, p.predicate);
            const auto pairs = cls ? role_pairs(go, catalog, db, *cls)
                                   : std::vector<std::pair<std::string, Value>>{};
            for (const Binding& b : partial) {
                for (const auto& [k, v] : pairs) {
                    if (p.subject.is_var()) {
                        auto it = b.find(p.subject.text);
                        if (it != b.end() && !value_eq(it->second, Value(k))) continue;
                    } else if (p.subject.text != k) {
                        continue;
                    }
                    Binding nb = b;
                    if (p.object.kind == SparqlTerm::Kind::Var) {
                        auto it = nb.find(p.object.text);
                        if (it != nb.end()) {
                            if (!value_eq(it->second, v)) continue;
                        } else {
                            nb[p.object.text] = v;
                        }
                    } else if (p.object.kind == SparqlTerm::Kind::Literal) {
                        if (!value_eq(v, p.object.value)) continue;
                    } else {
                        if (!value_eq(v, Value(p.object.text))) continue;
                    }
                    if (p.subject.is_var() && !nb.count(p.subject.text)) nb[p.subject.text] = Value(k);
                    next.insert(std::move(nb));
                }
            }
        }
        partial = std::move(next);
    }

    std::set<std::vector<Value>> rows;
    for (const Binding& b : partial) {
        std::vector<Value> tuple;
        bool complete = true;
        for (const std::string& sv : q.selectVars) {
            auto it = b.find(sv);
            if (it == b.end()) {
                complete = false;
                break;
            }
            tuple.push_back(it->second);
        }
        if (complete) rows.insert(std::move(tuple));
    }
    return rows;
}

inline nosqint::ResultTable oracle_answers(const nosqint::SparqlQuery& q, const nosqint::GlobalOntology& go,
                                           const nosqint::SourceCatalog& catalog) {
    std::set<std::vector<nosqint::Value>> uniq;
    for (const auto& [db, unused] : go.mappings) {
        for (auto& row : oracle_rows(q, go, catalog, db)) uniq.insert(row);
    }
    nosqint::ResultTable out;
    out.schema = q.selectVars;
    out.rows.assign(uniq.begin(), uniq.end());
    return out;
}

}  // namespace testsupport
