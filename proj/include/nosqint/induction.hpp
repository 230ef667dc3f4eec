#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "nosqint/dlcore.hpp"
#include "nosqint/errors.hpp"
#include "nosqint/fca.hpp"
#include "nosqint/io.hpp"
#include "nosqint/store.hpp"

namespace nosqint {

enum class MappingKind {
    ConceptToContainer,
    ConceptToTypeValue,
    DatatypeRoleToKey,
    ObjectRoleToKey,
    ConceptToNestedPath,
};

inline const char* mapping_kind_name(MappingKind k) {
    switch (k) {
        case MappingKind::ConceptToContainer: return "ConceptToContainer";
        case MappingKind::ConceptToTypeValue: return "ConceptToTypeValue";
        case MappingKind::DatatypeRoleToKey: return "DatatypeRoleToKey";
        case MappingKind::ObjectRoleToKey: return "ObjectRoleToKey";
        case MappingKind::ConceptToNestedPath: return "ConceptToNestedPath";
    }
    return "?";
}

inline MappingKind mapping_kind_from_name(const std::string& s) {
    for (MappingKind k : {MappingKind::ConceptToContainer, MappingKind::ConceptToTypeValue,
                          MappingKind::DatatypeRoleToKey, MappingKind::ObjectRoleToKey,
                          MappingKind::ConceptToNestedPath}) {
        if (s == mapping_kind_name(k)) return k;
    }
    throw Error("induction", "ParseError", "unknown mapping kind '" + s + "'");
}

struct Mapping {
    std::string entity;
    MappingKind kind = MappingKind::ConceptToContainer;
    ContainerRef source;
    std::vector<std::string> keyPath;
    std::optional<ContainerRef> target;

    friend bool operator==(const Mapping& a, const Mapping& b) {
        return a.entity == b.entity && a.kind == b.kind && a.source == b.source && a.keyPath == b.keyPath &&
               a.target == b.target;
    }
    friend bool operator<(const Mapping& a, const Mapping& b) {
        return std::tie(a.entity, a.kind, a.source, a.keyPath) < std::tie(b.entity, b.kind, b.source, b.keyPath);
    }
};

struct MappingSet {
    std::vector<Mapping> entries;

    const Mapping* find(const std::string& entity, MappingKind kind) const {
        for (const auto& m : entries) {
            if (m.entity == entity && m.kind == kind) return &m;
        }
        return nullptr;
    }
};

struct SamplingStrategy {
    enum class Kind { Full, FrequencyLog, IncrementalHook };

    Kind kind = Kind::Full;
    std::string logPath;
    size_t topN = 0;

    static SamplingStrategy full() { return {}; }
    static SamplingStrategy frequency_log(std::string path, size_t topN) {
        if (topN < 1) throw Error("induction", "InvalidArgument", "frequency log topN must be at least 1");
        SamplingStrategy s;
        s.kind = Kind::FrequencyLog;
        s.logPath = std::move(path);
        s.topN = topN;
        return s;
    }
    static SamplingStrategy incremental_hook() {
        SamplingStrategy s;
        s.kind = Kind::IncrementalHook;
        return s;
    }
};

enum class ValueKindObs { Scalar, List, NestedMap };

struct KeyProfile {
    std::string key;
    std::set<ValueKindObs> observedKinds;
    size_t distinctValues = 0;
    size_t totalOccurrences = 0;
    std::vector<Value> valueSample;
    std::optional<ContainerRef> refTarget;
};

namespace detail {

// Splits a frequency log into accessed entry keys, one per line; a single
// trailing newline is tolerated, anything with embedded whitespace is not.
inline std::vector<std::string> parse_frequency_log(const std::string& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        throw Error("induction", "LogParseError", std::string("cannot read frequency log: ") + e.what());
    }
    std::vector<std::string> lines;
    std::string cur;
    auto flush = [&](size_t lineNo) {
        if (!cur.empty() && cur.back() == '\r') cur.pop_back();
        if (cur.empty()) {
            throw Error("induction", "LogParseError", "empty key on line " + std::to_string(lineNo));
        }
        if (cur.find_first_of(" \t") != std::string::npos) {
            throw Error("induction", "LogParseError", "line " + std::to_string(lineNo) + " is not a single key");
        }
        lines.push_back(cur);
        cur.clear();
    };
    size_t lineNo = 1;
    for (char ch : text) {
        if (ch == '\n') {
            flush(lineNo);
            ++lineNo;
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) flush(lineNo);
    return lines;
}

inline std::vector<std::pair<std::string, Value::Map>> sample_entries(const SourceCatalog& catalog,
                                                                      const ContainerRef& ref,
                                                                      const SamplingStrategy& strategy) {
    const Entries& all = catalog.entries(ref);
    std::vector<std::pair<std::string, Value::Map>> out;
    if (strategy.kind != SamplingStrategy::Kind::FrequencyLog) {
        for (const auto& [key, attrs] : all) out.emplace_back(key, attrs);
        return out;
    }
    std::map<std::string, size_t> freq;
    for (const auto& key : parse_frequency_log(strategy.logPath)) {
        if (all.count(key)) ++freq[key];
    }
    // Top-N by descending frequency, breaking ties by ascending key.
    std::vector<std::pair<std::string, size_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > strategy.topN) ranked.resize(strategy.topN);
    std::set<std::string> picked;
    for (const auto& [key, count] : ranked) picked.insert(key);
    for (const auto& key : picked) out.emplace_back(key, all.at(key));
    return out;
}

inline std::vector<KeyProfile> profile_maps(const std::vector<const Value::Map*>& maps) {
    std::map<std::string, KeyProfile> byKey;
    std::map<std::string, std::set<Value>> distinct;
    auto observe_scalar = [&](KeyProfile& p, const std::string& key, const Value& v) {
        p.observedKinds.insert(ValueKindObs::Scalar);
        p.totalOccurrences += 1;
        p.valueSample.push_back(v);
        distinct[key].insert(v);
    };
    for (const Value::Map* m : maps) {
        for (const auto& [key, value] : *m) {
            KeyProfile& p = byKey[key];
            p.key = key;
            if (value.is_map()) {
                p.observedKinds.insert(ValueKindObs::NestedMap);
                p.totalOccurrences += 1;
            } else if (value.is_list()) {
                p.observedKinds.insert(ValueKindObs::List);
                for (const Value& el : value.as_list()) {
                    if (el.is_map()) {
                        p.observedKinds.insert(ValueKindObs::NestedMap);
                        p.totalOccurrences += 1;
                    } else if (el.is_scalar()) {
                        p.totalOccurrences += 1;
                        p.valueSample.push_back(el);
                        distinct[key].insert(el);
                    }
                }
            } else {
                observe_scalar(p, key, value);
            }
        }
    }
    std::vector<KeyProfile> out;
    for (auto& [key, p] : byKey) {
        p.distinctValues = distinct[key].size();
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace detail

inline std::vector<KeyProfile> profile_container(const SourceCatalog& catalog, const ContainerRef& ref,
                                                 const SamplingStrategy& strategy) {
    auto entries = detail::sample_entries(catalog, ref, strategy);
    std::vector<const Value::Map*> maps;
    maps.reserve(entries.size());
    for (const auto& [key, attrs] : entries) maps.push_back(&attrs);
    return detail::profile_maps(maps);
}

// Marks refTarget on keys whose sampled values are entry keys of exactly one
// container at coverage >= theta. Zero-sample keys stay unmarked.
inline std::vector<KeyProfile> detect_foreign_keys(std::vector<KeyProfile> profiles, const SourceCatalog& catalog,
                                                   double theta = 0.8) {
    for (auto& p : profiles) {
        p.refTarget.reset();
        if (p.valueSample.empty()) continue;
        std::vector<ContainerRef> hits;
        for (const auto& db : catalog.databases()) {
            for (const auto& [name, unused] : db->containers()) {
                const ContainerRef ref{db->database_name(), name, db->container_kind()};
                const Entries& keys = catalog.entries(ref);
                size_t matched = 0;
                for (const Value& v : p.valueSample) {
                    if (v.is_text() && keys.count(v.as_text())) ++matched;
                }
                if (static_cast<double>(matched) + 1e-12 >= theta * static_cast<double>(p.valueSample.size())) {
                    hits.push_back(ref);
                }
            }
        }
        if (hits.size() == 1) p.refTarget = hits[0];
    }
    return profiles;
}

// Type-definition pattern: non-reference Text keys whose value range is
// finite. Finiteness needs both the absolute/ratio cap and actual repetition;
// a key that is distinct on every observation carries no type evidence.
inline std::vector<std::string> detect_type_keys(const std::vector<KeyProfile>& profiles, size_t tauAbs = 12,
                                                 double tauRatio = 0.05) {
    std::vector<std::string> out;
    for (const auto& p : profiles) {
        if (p.refTarget) continue;
        if (p.observedKinds.count(ValueKindObs::NestedMap)) continue;
        if (p.valueSample.empty()) continue;
        bool allText = std::all_of(p.valueSample.begin(), p.valueSample.end(),
                                   [](const Value& v) { return v.is_text(); });
        if (!allText) continue;
        const double cap = std::max(static_cast<double>(tauAbs),
                                    tauRatio * static_cast<double>(p.totalOccurrences));
        if (static_cast<double>(p.distinctValues) > cap) continue;
        if (p.distinctValues >= p.totalOccurrences) continue;
        out.push_back(p.key);
    }
    return out;
}

struct InductionResult {
    Ontology ontology;
    MappingSet mappings;
};

namespace detail {

struct Scope {
    std::string owner;  // concept the scope induces into
    ContainerRef source;
    std::vector<std::string> prefix;
    std::vector<std::pair<std::string, const Value::Map*>> entries;  // individual id -> attributes
};

inline std::vector<std::string> append_path(std::vector<std::string> prefix, const std::string& key) {
    prefix.push_back(key);
    return prefix;
}

// Majority vote over sampled scalar kinds; mixtures without a strict winner
// degrade to Text.
inline std::string dominant_datatype(const std::vector<Value>& sample) {
    size_t text = 0, number = 0, boolean = 0;
    for (const Value& v : sample) {
        if (v.is_text()) ++text;
        else if (v.is_number()) ++number;
        else if (v.is_bool()) ++boolean;
    }
    if (number > text && number > boolean) return "Number";
    if (boolean > text && boolean > number) return "Bool";
    return "Text";
}

inline std::vector<std::string> type_values_of(const Value& v) {
    std::vector<std::string> out;
    if (v.is_text()) {
        out.push_back(v.as_text());
    } else if (v.is_list()) {
        for (const Value& el : v.as_list()) {
            if (el.is_text()) out.push_back(el.as_text());
        }
    }
    return out;
}

struct InductionBuild {
    SourceCatalog local;  // FK candidates are scoped to the induced database
    Ontology onto;
    MappingSet maps;
    ABox abox;
    std::map<std::string, std::set<std::string>> typeInstances;  // type concept -> individual ids
    std::map<std::string, std::vector<KeyProfile>> containerProfiles;

    std::string fresh_concept(const std::string& base) {
        if (!onto.has_concept(base)) return base;
        for (int i = 2;; ++i) {
            std::string cand = base + "_" + std::to_string(i);
            if (!onto.has_concept(cand)) return cand;
        }
    }

    void add_concept(const std::string& name, MappingKind kind, const ContainerRef& source,
                     std::vector<std::string> keyPath) {
        onto.add_concept(name);
        maps.entries.push_back(Mapping{name, kind, source, std::move(keyPath), std::nullopt});
    }

    void process_scope(const Scope& scope) {
        std::vector<const Value::Map*> raw;
        raw.reserve(scope.entries.size());
        for (const auto& [id, m] : scope.entries) raw.push_back(m);
        std::vector<KeyProfile> profiles = detect_foreign_keys(profile_maps(raw), local);
        if (scope.prefix.empty()) containerProfiles[scope.source.container] = profiles;

        for (const auto& [id, m] : scope.entries) abox.typeAssertions[id].insert(scope.owner);

        std::vector<Scope> nested;
        for (const auto& p : profiles) {
            const std::vector<std::string> keyPath = append_path(scope.prefix, p.key);
            if (p.refTarget) {
                onto.add_role(Role{p.key, Role::Kind::Object, scope.owner, p.refTarget->container});
                maps.entries.push_back(Mapping{p.key, MappingKind::ObjectRoleToKey, scope.source, keyPath, p.refTarget});
                for (const auto& [id, m] : scope.entries) {
                    auto it = m->find(p.key);
                    if (it == m->end()) continue;
                    for (const std::string& v : type_values_of(it->second)) {
                        abox.roleAssertions[id].push_back(RoleAssertion{p.key, v, Value()});
                    }
                }
            } else if (p.observedKinds.count(ValueKindObs::NestedMap)) {
                const std::string child = fresh_concept(scope.owner + "_" + p.key);
                add_concept(child, MappingKind::ConceptToNestedPath, scope.source, keyPath);
                onto.add_role(Role{p.key, Role::Kind::Object, scope.owner, child});
                maps.entries.push_back(
                    Mapping{p.key, MappingKind::ObjectRoleToKey, scope.source, keyPath, scope.source});
                Scope sub;
                sub.owner = child;
                sub.source = scope.source;
                sub.prefix = keyPath;
                for (const auto& [id, m] : scope.entries) {
                    auto it = m->find(p.key);
                    if (it == m->end()) continue;
                    auto link = [&](const Value::Map& inner, size_t ordinal) {
                        std::string childId = id + "#" + p.key;
                        if (ordinal > 0) childId += "[" + std::to_string(ordinal) + "]";
                        sub.entries.emplace_back(childId, &inner);
                        abox.roleAssertions[id].push_back(RoleAssertion{p.key, childId, Value()});
                    };
                    if (it->second.is_map()) {
                        link(it->second.as_map(), 0);
                    } else if (it->second.is_list()) {
                        size_t ordinal = 0;
                        for (const Value& el : it->second.as_list()) {
                            if (el.is_map()) link(el.as_map(), ordinal++);
                        }
                    }
                }
                nested.push_back(std::move(sub));
            } else {
                onto.add_role(Role{p.key, Role::Kind::Datatype, scope.owner, dominant_datatype(p.valueSample)});
                maps.entries.push_back(
                    Mapping{p.key, MappingKind::DatatypeRoleToKey, scope.source, keyPath, std::nullopt});
                for (const auto& [id, m] : scope.entries) {
                    auto it = m->find(p.key);
                    if (it == m->end()) continue;
                    if (it->second.is_scalar()) {
                        abox.roleAssertions[id].push_back(RoleAssertion{p.key, std::nullopt, it->second});
                    } else if (it->second.is_list()) {
                        for (const Value& el : it->second.as_list()) {
                            if (el.is_scalar()) {
                                abox.roleAssertions[id].push_back(RoleAssertion{p.key, std::nullopt, el});
                            }
                        }
                    }
                }
            }
        }

        for (const std::string& typeKey : detect_type_keys(profiles)) {
            induce_type_pattern(scope, typeKey);
        }
        for (const Scope& sub : nested) process_scope(sub);
    }

    void induce_type_pattern(const Scope& scope, const std::string& typeKey) {
        std::vector<std::string> objects;                 // individual ids carrying the key
        std::vector<std::vector<std::string>> heldValues; // per object
        std::set<std::string> valueSet;
        for (const auto& [id, m] : scope.entries) {
            auto it = m->find(typeKey);
            if (it == m->end()) continue;
            std::vector<std::string> vals = type_values_of(it->second);
            if (vals.empty()) continue;
            objects.push_back(id);
            heldValues.push_back(vals);
            valueSet.insert(vals.begin(), vals.end());
        }
        if (valueSet.empty()) return;

        const std::vector<std::string> attrs(valueSet.begin(), valueSet.end());
        std::map<std::string, size_t> attrIndex;
        for (size_t j = 0; j < attrs.size(); ++j) attrIndex[attrs[j]] = j;

        // Value strings become concept names, suffixed on collision.
        std::map<std::string, std::string> conceptOf;
        for (const auto& v : attrs) {
            const std::string name = fresh_concept(v);
            conceptOf[v] = name;
            add_concept(name, MappingKind::ConceptToTypeValue, scope.source, append_path(scope.prefix, typeKey));
            typeInstances[name];
        }
        std::set<std::pair<size_t, size_t>> incidence;
        for (size_t i = 0; i < objects.size(); ++i) {
            for (const auto& v : heldValues[i]) {
                incidence.insert({i, attrIndex[v]});
                abox.typeAssertions[objects[i]].insert(conceptOf[v]);
                typeInstances[conceptOf[v]].insert(objects[i]);
            }
        }

        FormalContext ctx(objects, attrs, incidence);
        ConceptLattice lat = build_lattice(ctx);
        const auto names = lattice_node_names(lat, ctx);
        const auto introduced = introduced_attributes(lat);

        // Attributes introduced together have equal extents; the least one
        // represents the class and the others are asserted equivalent to it.
        // Raw node names map onto the declared (possibly suffixed) concepts.
        std::vector<Axiom> equivalences;
        std::map<std::string, std::string> declared;
        for (const auto& [idx, name] : names) {
            std::vector<std::string> members;
            for (size_t attr : introduced[idx]) members.push_back(attrs[attr]);
            std::sort(members.begin(), members.end());
            declared[name] = conceptOf[members.front()];
            for (size_t i = 1; i < members.size(); ++i) {
                equivalences.push_back(Axiom::equivalent_to(ConceptExpr::atomic(conceptOf[members[i]]),
                                                            ConceptExpr::atomic(conceptOf[members.front()])));
            }
        }

        // Every type concept sits under the container concept.
        for (const auto& [v, c] : conceptOf) {
            onto.add_axiom(Axiom::sub_class_of(ConceptExpr::atomic(c), ConceptExpr::atomic(scope.owner)));
        }
        for (const auto& ax : equivalences) onto.add_axiom(ax);
        for (const auto& ax : lattice_to_axioms(lat, ctx)) {
            onto.add_axiom(Axiom::sub_class_of(ConceptExpr::atomic(declared.at(ax.sub.name())),
                                               ConceptExpr::atomic(declared.at(ax.sup.name()))));
        }
    }

    void enrich() {
        TaxonomyView tax(onto);
        for (const auto& [typeConcept, ids] : typeInstances) {
            if (ids.empty()) continue;
            std::vector<ConceptExpr> mscs;
            for (const auto& id : ids) mscs.push_back(msc(onto, abox, id, 2));
            ConceptExpr common = gcs(onto, mscs);
            std::vector<ConceptExpr> kept;
            for (const ConceptExpr& part : common.conjuncts()) {
                if (part.kind() == ConceptExpr::Kind::Top) continue;
                if (subsumes(tax, part, ConceptExpr::atomic(typeConcept))) continue;  // already told
                kept.push_back(part);
            }
            if (kept.empty()) continue;
            onto.add_axiom(Axiom::sub_class_of(ConceptExpr::atomic(typeConcept), ConceptExpr::conj(std::move(kept))));
        }
    }
};

}  // namespace detail

inline InductionResult induce_local(const SourceCatalog& catalog, const std::string& database,
                                    const SamplingStrategy& strategy) {
    std::shared_ptr<const StoreBackend> db;
    for (const auto& b : catalog.databases()) {
        if (b->database_name() == database) db = b;
    }
    if (!db) throw Error("induction", "UnknownDatabase", "no database named '" + database + "'");

    detail::InductionBuild build;
    build.local.add(db);
    build.onto.id = database;

    std::vector<detail::Scope> scopes;
    std::vector<std::vector<std::pair<std::string, Value::Map>>> sampled;  // keeps maps alive
    for (const auto& [name, entries] : db->containers()) {
        const ContainerRef ref = build.local.resolve(database, name);
        sampled.push_back(detail::sample_entries(catalog, ref, strategy));
        build.add_concept(name, MappingKind::ConceptToContainer, ref, {});
    }
    size_t i = 0;
    for (const auto& [name, entries] : db->containers()) {
        detail::Scope scope;
        scope.owner = name;
        scope.source = build.local.resolve(database, name);
        for (const auto& [key, attrs] : sampled[i]) scope.entries.emplace_back(key, &attrs);
        scopes.push_back(std::move(scope));
        ++i;
    }
    for (const auto& scope : scopes) build.process_scope(scope);
    build.enrich();
    return InductionResult{std::move(build.onto), std::move(build.maps)};
}

// Retained sampling state for the incremental hook: enough of the snapshot to
// re-derive the ontology when entries arrive.
struct InductionState {
    std::string database;
    ContainerKind kindOfStore = ContainerKind::Collection;
    std::map<std::string, Entries> sampled;  // container -> entries
    InductionResult result;
    std::map<std::string, std::vector<KeyProfile>> profiles;
};

struct ChangeReport {
    std::vector<std::string> addedConcepts;
    std::vector<std::string> addedRoles;
    std::vector<std::string> addedAxioms;
    std::vector<std::string> removedAxioms;

    bool empty() const {
        return addedConcepts.empty() && addedRoles.empty() && addedAxioms.empty() && removedAxioms.empty();
    }
};

namespace detail {

inline SourceCatalog catalog_from_state(const InductionState& state) {
    SourceCatalog cat;
    if (state.kindOfStore == ContainerKind::Collection) {
        auto db = std::make_shared<DocumentDatabase>();
        db->name = state.database;
        db->collections = state.sampled;
        cat.add(db);
    } else {
        auto db = std::make_shared<ColumnStore>();
        db->keyspace = state.database;
        db->families = state.sampled;
        cat.add(db);
    }
    return cat;
}

inline std::string axiom_text(const Axiom& ax) {
    const char* rel = ax.type == Axiom::Type::SubClassOf     ? " subClassOf "
                      : ax.type == Axiom::Type::EquivalentTo ? " equivalentTo "
                                                             : " disjointWith ";
    return ax.sub.to_string() + rel + ax.sup.to_string();
}

}  // namespace detail

inline InductionState induce_state(const SourceCatalog& catalog, const std::string& database) {
    const StoreBackend* db = catalog.find_database(database);
    if (!db) throw Error("induction", "UnknownDatabase", "no database named '" + database + "'");
    InductionState state;
    state.database = database;
    state.kindOfStore = db->container_kind();
    for (const auto& [name, entries] : db->containers()) {
        state.sampled[name] = entries;
        state.profiles[name] =
            profile_container(catalog, catalog.resolve(database, name), SamplingStrategy::incremental_hook());
    }
    state.result = induce_local(catalog, database, SamplingStrategy::incremental_hook());
    return state;
}

// Replays induction over the retained sample plus the new entry and reports
// the delta, which the derived example pins to full re-induction.
inline ChangeReport incremental_update(InductionState& state, const ContainerRef& ref, const std::string& key,
                                       const Value::Map& doc) {
    if (ref.database != state.database || !state.sampled.count(ref.container)) {
        throw Error("induction", "UnknownContainer", "no container '" + ref.qualified() + "' in induction state");
    }
    state.sampled[ref.container][key] = doc;
    SourceCatalog cat = detail::catalog_from_state(state);
    InductionResult next = induce_local(cat, state.database, SamplingStrategy::incremental_hook());

    ChangeReport report;
    const Ontology& before = state.result.ontology;
    const Ontology& after = next.ontology;
    for (const auto& c : after.concepts()) {
        if (!before.has_concept(c)) report.addedConcepts.push_back(c);
    }
    for (const auto& r : after.roles()) {
        const auto& olds = before.roles();
        if (std::find(olds.begin(), olds.end(), r) == olds.end()) {
            report.addedRoles.push_back(r.name + "@" + r.domain);
        }
    }
    auto has_axiom = [](const Ontology& o, const Axiom& ax) {
        for (const auto& other : o.axioms()) {
            if (other == ax) return true;
        }
        return false;
    };
    for (const auto& ax : after.axioms()) {
        if (!has_axiom(before, ax)) report.addedAxioms.push_back(detail::axiom_text(ax));
    }
    for (const auto& ax : before.axioms()) {
        if (!has_axiom(after, ax)) report.removedAxioms.push_back(detail::axiom_text(ax));
    }
    std::sort(report.addedAxioms.begin(), report.addedAxioms.end());
    std::sort(report.removedAxioms.begin(), report.removedAxioms.end());

    state.result = std::move(next);
    for (const auto& [name, entries] : state.sampled) {
        state.profiles[name] = profile_container(cat, cat.resolve(state.database, name),
                                                 SamplingStrategy::incremental_hook());
    }
    return report;
}

// --- mapping serialization ------------------------------------------------

inline nlohmann::json mapping_to_json(const Mapping& m) {
    nlohmann::json j;
    j["entity"] = m.entity;
    j["kind"] = mapping_kind_name(m.kind);
    j["database"] = m.source.database;
    j["container"] = m.source.container;
    j["keyPath"] = m.keyPath;
    if (m.target) {
        j["target"] = {{"database", m.target->database}, {"container", m.target->container}};
    }
    return j;
}

inline Mapping mapping_from_json(const nlohmann::json& j) {
    try {
        Mapping m;
        m.entity = j.at("entity").get<std::string>();
        m.kind = mapping_kind_from_name(j.at("kind").get<std::string>());
        m.source.database = j.at("database").get<std::string>();
        m.source.container = j.at("container").get<std::string>();
        for (const auto& part : j.at("keyPath")) m.keyPath.push_back(part.get<std::string>());
        if (j.contains("target")) {
            ContainerRef t;
            t.database = j.at("target").at("database").get<std::string>();
            t.container = j.at("target").at("container").get<std::string>();
            m.target = t;
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error("induction", "ParseError", std::string("bad mapping entry: ") + e.what());
    }
}

inline nlohmann::json mappings_to_json(const MappingSet& maps) {
    std::vector<Mapping> sorted = maps.entries;
    std::sort(sorted.begin(), sorted.end());
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : sorted) arr.push_back(mapping_to_json(m));
    return arr;
}

inline std::string serialize_mappings(const MappingSet& maps) { return mappings_to_json(maps).dump(2) + "\n"; }

inline MappingSet parse_mappings(const std::string& text) {
    MappingSet out;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("induction", "ParseError", std::string("bad mapping json: ") + e.what());
    }
    if (!j.is_array()) throw Error("induction", "ParseError", "mapping json must be an array");
    for (const auto& el : j) out.entries.push_back(mapping_from_json(el));
    return out;
}

}  // namespace nosqint
