#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nosqint/alignment.hpp"
#include "nosqint/dlcore.hpp"
#include "nosqint/errors.hpp"
#include "nosqint/induction.hpp"
#include "nosqint/io.hpp"

namespace nosqint {

// One global entity: an equivalence class of per-ontology entities.
struct EntityClass {
    std::string globalName;
    std::vector<std::pair<std::string, std::string>> members;  // (ontologyId, localName), sorted
};

// GO stays a view over (O, A) plus cached class tables and cross edges.
struct GlobalOntology {
    std::vector<Ontology> ontologies;  // sorted by id
    std::vector<Alignment> alignments;
    std::map<std::string, MappingSet> mappings;
    std::vector<EntityClass> conceptClasses;  // sorted by globalName
    std::vector<EntityClass> roleClasses;
    std::vector<std::pair<std::string, std::string>> conceptCrossEdges;  // (subGlobal, supGlobal)
    std::vector<std::pair<std::string, std::string>> roleCrossEdges;

    const Ontology* find_ontology(const std::string& id) const {
        for (const auto& o : ontologies) {
            if (o.id == id) return &o;
        }
        return nullptr;
    }

    const EntityClass* concept_class_of(const std::string& ontologyId, const std::string& name) const {
        for (const auto& c : conceptClasses) {
            if (std::find(c.members.begin(), c.members.end(), std::make_pair(ontologyId, name)) != c.members.end()) {
                return &c;
            }
        }
        return nullptr;
    }

    const EntityClass* role_class_of(const std::string& ontologyId, const std::string& name) const {
        for (const auto& c : roleClasses) {
            if (std::find(c.members.begin(), c.members.end(), std::make_pair(ontologyId, name)) != c.members.end()) {
                return &c;
            }
        }
        return nullptr;
    }
};

struct EntityBinding {
    struct Binding {
        std::string ontologyId;
        std::string localEntity;
        std::optional<Mapping> mapping;  // absent for view-only ontologies without a mapping entry
    };
    std::string globalName;
    std::vector<Binding> bindings;
};

namespace detail {

// Union-find over (ontologyId, localName) within one entity kind.
struct EntityDsu {
    using Node = std::pair<std::string, std::string>;
    std::map<Node, Node> parent;

    void ensure(const Node& x) { parent.emplace(x, x); }
    Node find(const Node& x) {
        Node r = x;
        while (parent.at(r) != r) r = parent.at(r);
        Node c = x;
        while (parent.at(c) != c) {
            Node next = parent.at(c);
            parent[c] = r;
            c = next;
        }
        return r;
    }
    void unite(const Node& a, const Node& b) { parent[find(a)] = find(b); }
    bool has(const Node& x) const { return parent.count(x) > 0; }
};

// Group, conflict-check, and canonically name the classes of one kind.
// Same-ontology members may share a class only when locallyOk admits them.
template <typename LocallyOk>
inline std::vector<EntityClass> name_classes(EntityDsu& dsu, const LocallyOk& locallyOk, const char* kindWord) {
    std::map<EntityDsu::Node, std::vector<EntityDsu::Node>> groups;
    for (const auto& [node, unused] : dsu.parent) groups[dsu.find(node)].push_back(node);
    std::vector<EntityClass> classes;
    for (auto& [root, members] : groups) {
        std::sort(members.begin(), members.end());
        for (size_t i = 0; i < members.size(); ++i) {
            for (size_t j = i + 1; j < members.size(); ++j) {
                if (members[i].first != members[j].first) continue;
                if (!locallyOk(members[i].first, members[i].second, members[j].second)) {
                    throw Error("globalont", "ConflictError",
                                std::string(kindWord) + "s '" + members[i].second + "' and '" + members[j].second +
                                    "' of ontology '" + members[i].first + "' are merged but not locally equivalent");
                }
            }
        }
        EntityClass c;
        c.members = members;
        classes.push_back(std::move(c));
    }
    std::sort(classes.begin(), classes.end(), [](const EntityClass& a, const EntityClass& b) {
        auto least = [](const EntityClass& c) {
            std::string m = c.members.front().second;
            for (const auto& [id, name] : c.members) m = std::min(m, name);
            return m;
        };
        return std::make_tuple(least(a), a.members) < std::make_tuple(least(b), b.members);
    });
    std::set<std::string> used;
    for (auto& c : classes) {
        std::string base = c.members.front().second;
        for (const auto& [id, name] : c.members) base = std::min(base, name);
        std::string candidate = base;
        for (int n = 2; used.count(candidate); ++n) candidate = base + "_" + std::to_string(n);
        used.insert(candidate);
        c.globalName = candidate;
    }
    std::sort(classes.begin(), classes.end(),
              [](const EntityClass& a, const EntityClass& b) { return a.globalName < b.globalName; });
    return classes;
}

inline void require_acyclic(const std::set<std::pair<std::string, std::string>>& edges, const char* what) {
    std::map<std::string, std::set<std::string>> adj;
    std::map<std::string, int> indeg;
    for (const auto& [sub, sup] : edges) {
        if (adj[sub].insert(sup).second) ++indeg[sup];
        indeg.emplace(sub, indeg[sub]);
    }
    std::vector<std::string> queue;
    for (const auto& [n, d] : indeg) {
        if (d == 0) queue.push_back(n);
    }
    size_t processed = 0;
    while (!queue.empty()) {
        const std::string n = queue.back();
        queue.pop_back();
        ++processed;
        for (const auto& m : adj[n]) {
            if (--indeg.at(m) == 0) queue.push_back(m);
        }
    }
    if (processed != indeg.size()) {
        throw Error("globalont", "ConflictError",
                    std::string("merged ") + what + " subsumption relation is cyclic");
    }
}

}  // namespace detail

inline GlobalOntology build_global(std::vector<Ontology> ontologies, std::vector<Alignment> alignments,
                                   std::map<std::string, MappingSet> mappings) {
    GlobalOntology go;
    std::sort(ontologies.begin(), ontologies.end(), [](const Ontology& a, const Ontology& b) { return a.id < b.id; });
    std::sort(alignments.begin(), alignments.end(), [](const Alignment& a, const Alignment& b) {
        return std::tie(a.leftOntology, a.rightOntology) < std::tie(b.leftOntology, b.rightOntology);
    });
    go.ontologies = std::move(ontologies);
    go.alignments = std::move(alignments);
    go.mappings = std::move(mappings);

    std::set<std::string> ids;
    for (const auto& o : go.ontologies) {
        if (!ids.insert(o.id).second) {
            throw Error("globalont", "ConflictError", "duplicate ontology id '" + o.id + "'");
        }
        if (!go.mappings.count(o.id)) {
            throw Error("globalont", "UnknownOntologyId", "no mapping set for ontology '" + o.id + "'");
        }
    }
    for (const auto& [id, unused] : go.mappings) {
        if (!ids.count(id)) {
            throw Error("globalont", "UnknownOntologyId", "mapping set for unlisted ontology '" + id + "'");
        }
    }
    for (const auto& a : go.alignments) {
        for (const auto& id : {a.leftOntology, a.rightOntology}) {
            if (!ids.count(id)) {
                throw Error("globalont", "UnknownOntologyId", "alignment references unlisted ontology '" + id + "'");
            }
        }
    }

    detail::EntityDsu conceptDsu, roleDsu;
    for (const auto& o : go.ontologies) {
        for (const auto& c : o.concepts()) conceptDsu.ensure({o.id, c});
        for (const auto& r : o.roles()) roleDsu.ensure({o.id, r.name});
    }
    // Locally declared equivalences keep their names in one global class.
    for (const auto& o : go.ontologies) {
        std::vector<std::string> names(o.concepts().begin(), o.concepts().end());
        for (size_t i = 0; i < names.size(); ++i) {
            for (size_t j = i + 1; j < names.size(); ++j) {
                if (o.marked_equivalent(names[i], names[j])) conceptDsu.unite({o.id, names[i]}, {o.id, names[j]});
            }
        }
    }

    auto cell_nodes = [&](const Alignment& a, const Correspondence& cell)
        -> std::optional<std::pair<detail::EntityDsu::Node, detail::EntityDsu::Node>> {
        if (cell.roleCell) {
            return std::make_pair(detail::EntityDsu::Node{a.leftOntology, cell.leftRole},
                                  detail::EntityDsu::Node{a.rightOntology, cell.rightRole});
        }
        if (cell.left.kind() == ConceptExpr::Kind::Atomic && cell.right.kind() == ConceptExpr::Kind::Atomic) {
            return std::make_pair(detail::EntityDsu::Node{a.leftOntology, cell.left.name()},
                                  detail::EntityDsu::Node{a.rightOntology, cell.right.name()});
        }
        return std::nullopt;  // formula cells never create or merge named entities
    };
    for (const auto& a : go.alignments) {
        for (const auto& cell : a.cells) {
            const auto nodes = cell_nodes(a, cell);
            if (!nodes) continue;
            detail::EntityDsu& dsu = cell.roleCell ? roleDsu : conceptDsu;
            if (!dsu.has(nodes->first) || !dsu.has(nodes->second)) {
                throw Error("globalont", "UnknownEntity",
                            "alignment cell names an entity missing from its ontology");
            }
            if (cell.relation == Correspondence::Relation::Equiv) dsu.unite(nodes->first, nodes->second);
        }
    }

    const auto conceptOk = [&](const std::string& id, const std::string& a, const std::string& b) {
        return go.find_ontology(id)->marked_equivalent(a, b);
    };
    const auto roleOk = [](const std::string&, const std::string&, const std::string&) { return false; };
    go.conceptClasses = detail::name_classes(conceptDsu, conceptOk, "concept");
    go.roleClasses = detail::name_classes(roleDsu, roleOk, "role");

    auto global_of = [](const std::vector<EntityClass>& classes, const detail::EntityDsu::Node& n) {
        for (const auto& c : classes) {
            if (std::find(c.members.begin(), c.members.end(), n) != c.members.end()) return c.globalName;
        }
        throw Error("globalont", "UnknownEntity", "entity '" + n.first + "#" + n.second + "' has no class");
    };
    std::set<std::pair<std::string, std::string>> conceptEdges, roleEdges;
    for (const auto& a : go.alignments) {
        for (const auto& cell : a.cells) {
            if (cell.relation != Correspondence::Relation::SubsumedBy &&
                cell.relation != Correspondence::Relation::Subsumes) {
                continue;
            }
            const auto nodes = cell_nodes(a, cell);
            if (!nodes) continue;
            const auto& classes = cell.roleCell ? go.roleClasses : go.conceptClasses;
            std::string sub = global_of(classes, nodes->first);
            std::string sup = global_of(classes, nodes->second);
            if (cell.relation == Correspondence::Relation::Subsumes) std::swap(sub, sup);
            if (sub == sup) continue;
            (cell.roleCell ? roleEdges : conceptEdges).insert({sub, sup});
        }
    }
    go.conceptCrossEdges.assign(conceptEdges.begin(), conceptEdges.end());
    go.roleCrossEdges.assign(roleEdges.begin(), roleEdges.end());

    // The merged hierarchy (local strict subsumptions lifted to classes plus
    // the cross edges) must stay a partial order.
    std::set<std::pair<std::string, std::string>> merged = conceptEdges;
    for (const auto& o : go.ontologies) {
        for (const auto& [name, sups] : classify(o)) {
            for (const auto& s : sups) {
                if (s == name) continue;
                const std::string sub = global_of(go.conceptClasses, {o.id, name});
                const std::string sup = global_of(go.conceptClasses, {o.id, s});
                if (sub != sup) merged.insert({sub, sup});
            }
        }
    }
    detail::require_acyclic(merged, "concept");
    detail::require_acyclic(roleEdges, "role");
    return go;
}

namespace detail {

inline bool mapping_kind_is_concept(MappingKind k) {
    return k == MappingKind::ConceptToContainer || k == MappingKind::ConceptToTypeValue ||
           k == MappingKind::ConceptToNestedPath;
}

inline std::optional<Mapping> binding_mapping(const GlobalOntology& go, const std::string& ontologyId,
                                              const std::string& entity, bool conceptKind) {
    const MappingSet& set = go.mappings.at(ontologyId);
    std::vector<Mapping> candidates;
    for (const auto& m : set.entries) {
        if (m.entity == entity && mapping_kind_is_concept(m.kind) == conceptKind) candidates.push_back(m);
    }
    if (candidates.empty()) return std::nullopt;
    return *std::min_element(candidates.begin(), candidates.end());
}

inline void append_class_bindings(const GlobalOntology& go, const EntityClass& cls, bool conceptKind,
                                  EntityBinding& out) {
    // One binding per ontology: the lexicographically least member represents
    // locally equivalent names.
    std::map<std::string, std::string> perOntology;
    for (const auto& [id, name] : cls.members) {
        auto it = perOntology.find(id);
        if (it == perOntology.end() || name < it->second) perOntology[id] = name;
    }
    for (const auto& [id, name] : perOntology) {
        out.bindings.push_back({id, name, binding_mapping(go, id, name, conceptKind)});
    }
}

}  // namespace detail

inline EntityBinding resolve_entity(const GlobalOntology& go, const std::string& name,
                                    bool includeSpecializations = false) {
    const EntityClass* cls = nullptr;
    bool conceptKind = true;
    auto search = [&](const std::vector<EntityClass>& classes) -> const EntityClass* {
        const size_t hash = name.find('#');
        if (hash != std::string::npos) {
            const std::pair<std::string, std::string> node{name.substr(0, hash), name.substr(hash + 1)};
            for (const auto& c : classes) {
                if (std::find(c.members.begin(), c.members.end(), node) != c.members.end()) return &c;
            }
            return nullptr;
        }
        for (const auto& c : classes) {
            if (c.globalName == name) return &c;
        }
        return nullptr;
    };
    cls = search(go.conceptClasses);
    if (!cls) {
        cls = search(go.roleClasses);
        conceptKind = false;
    }
    if (!cls) throw Error("globalont", "UnknownEntity", "unknown global entity '" + name + "'");

    EntityBinding out;
    out.globalName = cls->globalName;
    detail::append_class_bindings(go, *cls, conceptKind, out);
    if (includeSpecializations) {
        const auto& edges = conceptKind ? go.conceptCrossEdges : go.roleCrossEdges;
        std::set<std::string> reached = {cls->globalName};
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& [sub, sup] : edges) {
                if (reached.count(sup) && reached.insert(sub).second) grew = true;
            }
        }
        reached.erase(cls->globalName);
        const auto& classes = conceptKind ? go.conceptClasses : go.roleClasses;
        for (const auto& c : classes) {  // already sorted by global name
            if (reached.count(c.globalName)) detail::append_class_bindings(go, c, conceptKind, out);
        }
    }
    return out;
}

// --- serialization ----------------------------------------------------------

inline nlohmann::json global_to_json(const GlobalOntology& go) {
    auto classes_json = [](const std::vector<EntityClass>& classes) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : classes) {
            nlohmann::json members = nlohmann::json::array();
            for (const auto& [id, name] : c.members) members.push_back(id + "#" + name);
            arr.push_back({{"members", std::move(members)}, {"name", c.globalName}});
        }
        return arr;
    };
    auto edges_json = [](const std::vector<std::pair<std::string, std::string>>& edges) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [sub, sup] : edges) arr.push_back(nlohmann::json::array({sub, sup}));
        return arr;
    };
    nlohmann::json j;
    j["classes"] = {{"concepts", classes_json(go.conceptClasses)}, {"roles", classes_json(go.roleClasses)}};
    j["crossEdges"] = {{"concepts", edges_json(go.conceptCrossEdges)}, {"roles", edges_json(go.roleCrossEdges)}};
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& o : go.ontologies) ids.push_back(o.id);
    j["ontologies"] = std::move(ids);
    return j;
}

// The bundle references its inputs by path (relative paths resolve against
// the bundle's directory) and embeds the derived tables as a cache that the
// loader revalidates.
inline std::string serialize_global_bundle(const GlobalOntology& go, const std::vector<std::string>& ontologyFiles,
                                           const std::vector<std::string>& alignmentFiles,
                                           const std::map<std::string, std::string>& mappingFiles) {
    nlohmann::json j;
    j["alignmentFiles"] = alignmentFiles;
    j["global"] = global_to_json(go);
    j["mappingFiles"] = mappingFiles;
    j["ontologyFiles"] = ontologyFiles;
    return j.dump(2) + "\n";
}

inline GlobalOntology load_global_bundle(const std::string& bundlePath) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(bundlePath));
    } catch (const nlohmann::json::exception& e) {
        throw Error("globalont", "ParseError", std::string("bad global bundle: ") + e.what());
    }
    const std::filesystem::path base = std::filesystem::path(bundlePath).parent_path();
    auto resolve = [&](const std::string& p) {
        const std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).string();
    };
    try {
        std::vector<Ontology> ontologies;
        for (const auto& f : j.at("ontologyFiles")) {
            ontologies.push_back(parse_ontology(read_text_file(resolve(f.get<std::string>()))));
        }
        std::vector<Alignment> alignments;
        for (const auto& f : j.at("alignmentFiles")) {
            alignments.push_back(parse_alignment(read_text_file(resolve(f.get<std::string>()))));
        }
        std::map<std::string, MappingSet> mappings;
        for (auto it = j.at("mappingFiles").begin(); it != j.at("mappingFiles").end(); ++it) {
            mappings[it.key()] = parse_mappings(read_text_file(resolve(it.value().get<std::string>())));
        }
        GlobalOntology go = build_global(std::move(ontologies), std::move(alignments), std::move(mappings));
        if (global_to_json(go) != j.at("global")) {
            throw Error("globalont", "ConflictError",
                        "global bundle tables are stale: rebuild does not match the cached view");
        }
        return go;
    } catch (const nlohmann::json::exception& e) {
        throw Error("globalont", "ParseError", std::string("bad global bundle: ") + e.what());
    }
}

}  // namespace nosqint
