#pragma once
// Bridge Query Language. translate() compiles a SPARQL basic graph pattern
// against the global ontology into one staged get/foreach program per source
// database that can serve every typed variable; execute() runs a program over
// the catalog; explain_text/emit_plan render programs textually. Answers from
// the per-source programs are unioned by execute_union.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nosqint/errors.hpp"
#include "nosqint/globalont.hpp"
#include "nosqint/queryfront.hpp"
#include "nosqint/store.hpp"
#include "nosqint/value.hpp"

namespace nosqint {

// Filter whose right-hand side is either a constant or, inside a foreach
// body, the current loop binding (loopVar nonempty; operand then unused).
struct BqlFilter {
    std::string attribute;
    Comparator comparator = Comparator::Eq;
    Value operand;
    std::string loopVar;
};

struct BqlGet {
    ContainerRef container;
    std::vector<BqlFilter> filters;
    std::set<std::string> projections;
};

struct BqlForEach {
    std::string loopVar;
    std::string inputRelation;
    std::string inputAttribute;
};

// One relation definition. The schema names the relation's output columns;
// sources maps each column onto the row field it reads: "Key", a projected
// attribute, or the loop variable (whose binding tags every foreach row).
struct BqlStep {
    std::string name;
    std::vector<std::string> schema;
    std::map<std::string, std::string> sources;
    std::optional<BqlForEach> loop;
    BqlGet get;
};

struct BqlProgram {
    std::string source;
    std::vector<BqlStep> steps;
    std::string answerRelation = "ans";
};

// Deduplicated answer rows in ascending tuple order.
struct ResultTable {
    std::vector<std::string> schema;
    std::vector<std::vector<Value>> rows;

    friend bool operator==(const ResultTable& a, const ResultTable& b) {
        return a.schema == b.schema && a.rows == b.rows;
    }
};

namespace detail {

// The scalar observations inside a value: a scalar is itself, a list yields
// its scalar elements, anything nested yields nothing. Filters, foreach
// iteration, and the final projection all range over exactly these.
inline std::vector<Value> scalar_choices(const Value& v) {
    if (v.is_scalar()) return {v};
    std::vector<Value> out;
    if (v.is_list()) {
        for (const Value& e : v.as_list()) {
            if (e.is_scalar()) out.push_back(e);
        }
    }
    return out;
}

inline std::string render_number(double d) {
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e15) {
        return std::to_string(static_cast<long long>(d));
    }
    return nlohmann::json(d).dump();
}

inline std::string render_value(const Value& v) {
    if (v.is_text()) {
        std::string out = "'";
        for (char c : v.as_text()) {
            if (c == '\'') out += "\\'";
            else out += c;
        }
        return out + "'";
    }
    if (v.is_number()) return render_number(v.as_number());
    if (v.is_bool()) return v.as_bool() ? "true" : "false";
    if (v.is_null()) return "null";
    return v.dump();
}

inline std::string filter_rhs(const BqlFilter& f) {
    return f.loopVar.empty() ? render_value(f.operand) : f.loopVar;
}

template <typename Seq>
inline std::string comma_join(const Seq& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += ", ";
        out += s;
    }
    return out;
}

// Class lookup by global name or qualified "ontologyId#localName".
inline const EntityClass* find_class(const std::vector<EntityClass>& classes, const std::string& name) {
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
}

inline std::optional<std::string> least_member(const EntityClass& cls, const std::string& ontologyId) {
    std::optional<std::string> least;
    for (const auto& [id, name] : cls.members) {
        if (id != ontologyId) continue;
        if (!least || name < *least) least = name;
    }
    return least;
}

// A concept is answerable in a database when its representative member maps
// onto a whole container or a top-level type key; nested-path concepts have
// synthesized instances that no store row carries, so they never qualify.
struct ConceptUse {
    ContainerRef container;
    std::optional<BqlFilter> filter;
};

inline std::optional<ConceptUse> concept_use(const GlobalOntology& go, const EntityClass& cls,
                                             const std::string& db) {
    const auto member = least_member(cls, db);
    if (!member) return std::nullopt;
    const auto m = binding_mapping(go, db, *member, true);
    if (!m) return std::nullopt;
    if (m->kind == MappingKind::ConceptToContainer) return ConceptUse{m->source, std::nullopt};
    if (m->kind == MappingKind::ConceptToTypeValue && m->keyPath.size() == 1) {
        return ConceptUse{m->source, BqlFilter{m->keyPath.front(), Comparator::Eq, Value(*member), ""}};
    }
    return std::nullopt;
}

// A role is answerable when it maps onto a single top-level key; reified
// multi-segment key paths have no flat get equivalent.
inline std::optional<Mapping> role_use(const GlobalOntology& go, const EntityClass& cls, const std::string& db) {
    const auto member = least_member(cls, db);
    if (!member) return std::nullopt;
    const auto m = binding_mapping(go, db, *member, false);
    if (!m) return std::nullopt;
    if (m->keyPath.size() != 1) return std::nullopt;
    if (m->kind != MappingKind::DatatypeRoleToKey && m->kind != MappingKind::ObjectRoleToKey) return std::nullopt;
    return m;
}

struct RolePattern {
    const TriplePattern* pat = nullptr;
    const EntityClass* role = nullptr;
};

struct PatternGroup {
    SparqlTerm subject;
    std::vector<const EntityClass*> types;
    std::vector<RolePattern> roles;
};

// A join between two subject groups. Directed edges carry an entity-valued
// link (the variable is b's subject; a's rows emit the references); shared
// object links are symmetric and may be staged in either direction.
struct GroupEdge {
    size_t a = 0;
    size_t b = 0;
    bool directed = false;
    std::string var;
    const RolePattern* aSide = nullptr;
    const RolePattern* bSide = nullptr;
};

inline std::string subject_label(const SparqlTerm& t) {
    return t.is_var() ? "?" + t.text : t.text;
}

struct TranslationBuild {
    const SparqlQuery& q;
    const GlobalOntology& go;

    std::vector<PatternGroup> groups;
    std::map<std::pair<int, std::string>, size_t> groupIndex;
    std::vector<GroupEdge> edges;
    std::vector<size_t> order;               // staged group order
    std::vector<const GroupEdge*> intoStep;  // edge feeding each staged group; null for the root

    PatternGroup& group_for(const SparqlTerm& subject) {
        const std::pair<int, std::string> key{static_cast<int>(subject.kind), subject.text};
        auto it = groupIndex.find(key);
        if (it != groupIndex.end()) return groups[it->second];
        groupIndex.emplace(key, groups.size());
        groups.push_back(PatternGroup{subject, {}, {}});
        return groups.back();
    }

    const size_t* subject_group(const std::string& varName) const {
        auto it = groupIndex.find({static_cast<int>(SparqlTerm::Kind::Var), varName});
        return it == groupIndex.end() ? nullptr : &it->second;
    }

    void resolve() {
        for (const TriplePattern& p : q.patterns) {
            if (p.predicate == kTypePredicate) {
                if (p.object.kind != SparqlTerm::Kind::Iri) {
                    throw Error("bql", "UnresolvableType",
                                "rdf:type object for subject " + subject_label(p.subject) +
                                    " must name a concept");
                }
                const EntityClass* c = find_class(go.conceptClasses, p.object.text);
                if (!c) throw Error("bql", "UnresolvableType", "unknown concept '" + p.object.text + "'");
                group_for(p.subject).types.push_back(c);
            } else {
                const EntityClass* r = find_class(go.roleClasses, p.predicate);
                if (!r) {
                    throw Error("bql", "UnmappedPredicate",
                                "predicate '" + p.predicate + "' names no role of the global ontology");
                }
                group_for(p.subject).roles.push_back({&p, r});
            }
        }
    }

    // Rejects pattern shapes a staged chain cannot express: a variable read
    // through two keys of one subject, two variables on one key, self joins.
    void check_groups() const {
        for (const PatternGroup& g : groups) {
            std::map<std::string, const EntityClass*> varRole;
            for (const RolePattern& rp : g.roles) {
                if (rp.pat->object.kind != SparqlTerm::Kind::Var) continue;
                const std::string& v = rp.pat->object.text;
                if (g.subject.is_var() && g.subject.text == v) {
                    throw Error("bql", "UnresolvableType",
                                "self join on variable '?" + v + "' is not supported");
                }
                auto it = varRole.find(v);
                if (it != varRole.end() && it->second != rp.role) {
                    throw Error("bql", "UnresolvableType",
                                "variable '?" + v + "' is bound by multiple predicates of subject " +
                                    subject_label(g.subject));
                }
                varRole.emplace(v, rp.role);
                for (const RolePattern& other : g.roles) {
                    if (other.pat == rp.pat || other.role != rp.role) continue;
                    if (other.pat->object.kind == SparqlTerm::Kind::Var && other.pat->object.text != v) {
                        throw Error("bql", "UnresolvableType",
                                    "variables '?" + v + "' and '?" + other.pat->object.text +
                                        "' both bind predicate '" + rp.pat->predicate + "' of subject " +
                                        subject_label(g.subject));
                    }
                }
            }
        }
    }

    void build_edges() {
        std::map<std::pair<size_t, size_t>, std::vector<GroupEdge>> candidates;
        for (size_t gi = 0; gi < groups.size(); ++gi) {
            for (const RolePattern& rp : groups[gi].roles) {
                if (rp.pat->object.kind != SparqlTerm::Kind::Var) continue;
                const std::string& v = rp.pat->object.text;
                if (const size_t* owner = subject_group(v); owner && *owner != gi) {
                    const auto key = std::minmax(gi, *owner);
                    candidates[{key.first, key.second}].push_back(GroupEdge{gi, *owner, true, v, &rp, nullptr});
                    continue;
                }
                for (size_t gj = gi + 1; gj < groups.size(); ++gj) {
                    for (const RolePattern& rp2 : groups[gj].roles) {
                        if (rp2.pat->object.kind == SparqlTerm::Kind::Var && rp2.pat->object.text == v) {
                            candidates[{gi, gj}].push_back(GroupEdge{gi, gj, false, v, &rp, &rp2});
                            break;
                        }
                    }
                }
            }
        }
        for (const auto& [key, found] : candidates) {
            if (found.size() > 1) {
                throw Error("bql", "UnresolvableType",
                            "multiple join variables between subjects " +
                                subject_label(groups[key.first].subject) + " and " +
                                subject_label(groups[key.second].subject));
            }
            edges.push_back(found.front());
        }
    }

    // The join graph must be a single chain; directed edges fix which end
    // starts. Ties break toward the group whose subject appears first.
    void orient() {
        const size_t n = groups.size();
        intoStep.assign(n, nullptr);
        if (n == 1) {
            order = {0};
            return;
        }
        std::vector<std::vector<const GroupEdge*>> adj(n);
        for (const GroupEdge& e : edges) {
            adj[e.a].push_back(&e);
            adj[e.b].push_back(&e);
        }
        if (edges.size() != n - 1) throw Error("bql", "UnresolvableType", "pattern join graph is not a chain");
        for (const auto& a : adj) {
            if (a.empty()) throw Error("bql", "UnresolvableType", "pattern groups are not connected");
            if (a.size() > 2) throw Error("bql", "UnresolvableType", "pattern join graph is not a chain");
        }
        std::vector<size_t> ends;
        for (size_t i = 0; i < n; ++i) {
            if (adj[i].size() == 1) ends.push_back(i);
        }
        if (ends.size() != 2) throw Error("bql", "UnresolvableType", "pattern join graph is not a chain");

        auto try_from = [&](size_t start) -> bool {
            std::vector<size_t> seq{start};
            std::vector<const GroupEdge*> in{nullptr};
            const GroupEdge* last = nullptr;
            size_t cur = start;
            while (seq.size() < n) {
                const GroupEdge* next = nullptr;
                for (const GroupEdge* e : adj[cur]) {
                    if (e != last) next = e;
                }
                if (!next) return false;
                const size_t to = next->a == cur ? next->b : next->a;
                if (next->directed && next->a != cur) return false;
                seq.push_back(to);
                in.push_back(next);
                last = next;
                cur = to;
            }
            order = seq;
            intoStep = in;
            return true;
        };
        if (ends[1] < ends[0]) std::swap(ends[0], ends[1]);
        if (!try_from(ends[0]) && !try_from(ends[1])) {
            throw Error("bql", "UnresolvableType", "pattern joins cannot be staged in one direction");
        }
    }

    // Only columns of the final relation survive; anything selected from an
    // earlier stage is lost when the chain moves on.
    void check_select() const {
        const PatternGroup& fin = groups[order.back()];
        std::set<std::string> allowed;
        if (fin.subject.is_var()) allowed.insert(fin.subject.text);
        for (const RolePattern& rp : fin.roles) {
            if (rp.pat->object.kind == SparqlTerm::Kind::Var) allowed.insert(rp.pat->object.text);
        }
        for (const std::string& sv : q.selectVars) {
            if (!allowed.count(sv)) {
                throw Error("bql", "UnresolvableType",
                            "select variable '?" + sv + "' is not available in the final step");
            }
        }
    }

    std::vector<std::string> databases() const {
        std::vector<std::string> out;
        for (const auto& [id, unused] : go.mappings) out.push_back(id);
        return out;
    }

    // Source-level feasibility: every typed subject must bind somewhere, all
    // typed subjects must share at least one source, and every predicate must
    // map somewhere. Databases failing only locally are skipped silently; the
    // union over the remaining programs still equals the global answer.
    void check_sources() const {
        const std::vector<std::string> dbs = databases();
        bool anyTyped = false;
        std::set<std::string> common(dbs.begin(), dbs.end());
        for (const PatternGroup& g : groups) {
            if (g.types.empty()) continue;
            anyTyped = true;
            std::set<std::string> mine;
            for (const std::string& db : dbs) {
                bool all = true;
                for (const EntityClass* c : g.types) {
                    if (!concept_use(go, *c, db)) all = false;
                }
                if (all) mine.insert(db);
            }
            if (mine.empty()) {
                throw Error("bql", "UnresolvableType",
                            "no source binds typed subject " + subject_label(g.subject));
            }
            std::set<std::string> next;
            std::set_intersection(common.begin(), common.end(), mine.begin(), mine.end(),
                                  std::inserter(next, next.begin()));
            common = std::move(next);
        }
        if (anyTyped && common.empty()) {
            throw Error("bql", "CrossSourceJoin", "typed subjects span sources; cross-source joins are unsupported");
        }
        for (const PatternGroup& g : groups) {
            for (const RolePattern& rp : g.roles) {
                bool mapped = false;
                for (const std::string& db : dbs) {
                    if (role_use(go, *rp.role, db)) mapped = true;
                }
                if (!mapped) {
                    throw Error("bql", "UnmappedPredicate",
                                "no source maps predicate '" + rp.pat->predicate + "'");
                }
            }
        }
    }

    static std::string step_name(size_t pos, size_t total) {
        if (pos + 1 == total) return "ans";
        if (pos == 0) return "temp";
        return "temp" + std::to_string(pos + 1);
    }

    std::optional<BqlProgram> build_for(const std::string& db) const {
        std::map<const TriplePattern*, Mapping> roleMap;
        for (const PatternGroup& g : groups) {
            for (const RolePattern& rp : g.roles) {
                auto m = role_use(go, *rp.role, db);
                if (!m) return std::nullopt;
                roleMap.emplace(rp.pat, *m);
            }
        }

        // Containers implied by types, role keys, and the incoming link role
        // must coincide; a source that scatters the group is skipped.
        std::vector<ContainerRef> containerOf(groups.size());
        std::vector<std::vector<BqlFilter>> typeFiltersOf(groups.size());
        for (size_t pos = 0; pos < order.size(); ++pos) {
            const size_t gi = order[pos];
            const PatternGroup& g = groups[gi];
            std::vector<ContainerRef> cands;
            for (const EntityClass* c : g.types) {
                auto use = concept_use(go, *c, db);
                if (!use) return std::nullopt;
                cands.push_back(use->container);
                if (use->filter) typeFiltersOf[gi].push_back(*use->filter);
            }
            for (const RolePattern& rp : g.roles) cands.push_back(roleMap.at(rp.pat).source);
            if (const GroupEdge* in = intoStep[pos]; in && in->directed) {
                const Mapping& lm = roleMap.at(in->aSide->pat);
                if (lm.kind == MappingKind::ObjectRoleToKey && lm.target) cands.push_back(*lm.target);
            }
            if (cands.empty()) return std::nullopt;
            for (const ContainerRef& c : cands) {
                if (!(c == cands.front())) return std::nullopt;
            }
            containerOf[gi] = cands.front();
        }

        BqlProgram prog;
        prog.source = db;
        for (size_t pos = 0; pos < order.size(); ++pos) {
            const size_t gi = order[pos];
            const PatternGroup& g = groups[gi];
            const GroupEdge* in = intoStep[pos];
            const GroupEdge* out = pos + 1 < order.size() ? intoStep[pos + 1] : nullptr;

            BqlStep step;
            step.name = step_name(pos, order.size());
            step.get.container = containerOf[gi];

            // Every variable-object key is projected: its presence carries
            // the pattern's existence requirement into execution.
            for (const RolePattern& rp : g.roles) {
                if (rp.pat->object.kind == SparqlTerm::Kind::Var) {
                    step.get.projections.insert(roleMap.at(rp.pat).keyPath.front());
                }
            }
            if (out) {
                const RolePattern* emit = out->a == gi ? out->aSide : out->bSide;
                step.get.projections.insert(roleMap.at(emit->pat).keyPath.front());
            }

            // Final step: one output column per select variable.
            std::vector<std::pair<std::string, std::optional<std::string>>> cols;  // empty source = loop tag
            if (pos + 1 == order.size()) {
                for (const std::string& sv : q.selectVars) {
                    if (in && sv == in->var) {
                        cols.push_back({sv, std::nullopt});
                    } else if (g.subject.is_var() && sv == g.subject.text) {
                        cols.push_back({sv, "Key"});
                        step.get.projections.insert("Key");
                    } else {
                        for (const RolePattern& rp : g.roles) {
                            if (rp.pat->object.kind == SparqlTerm::Kind::Var && rp.pat->object.text == sv) {
                                cols.push_back({sv, roleMap.at(rp.pat).keyPath.front()});
                                break;
                            }
                        }
                    }
                }
            } else {
                const RolePattern* emit = out->a == gi ? out->aSide : out->bSide;
                const std::string attr = roleMap.at(emit->pat).keyPath.front();
                cols.push_back({attr, attr});
            }

            if (in) {
                std::string lv = in->var;
                while (step.get.projections.count(lv)) lv += "_";
                step.loop = BqlForEach{lv, prog.steps.back().name,
                                       prog.steps.back().schema.empty() ? std::string("Key")
                                                                        : prog.steps.back().schema.front()};
                if (in->directed) {
                    step.get.filters.push_back(BqlFilter{"Key", Comparator::Eq, Value(), lv});
                } else {
                    const RolePattern* mine = in->a == gi ? in->aSide : in->bSide;
                    step.get.filters.push_back(
                        BqlFilter{roleMap.at(mine->pat).keyPath.front(), Comparator::Eq, Value(), lv});
                }
            }
            for (auto& [col, src] : cols) {
                step.schema.push_back(col);
                step.sources[col] = src ? *src : step.loop->loopVar;
            }

            if (g.subject.kind == SparqlTerm::Kind::Iri) {
                step.get.filters.push_back(BqlFilter{"Key", Comparator::Eq, Value(g.subject.text), ""});
            }
            for (const BqlFilter& f : typeFiltersOf[gi]) step.get.filters.push_back(f);
            for (const RolePattern& rp : g.roles) {
                const SparqlTerm& obj = rp.pat->object;
                if (obj.kind == SparqlTerm::Kind::Var) continue;
                const Value operand = obj.kind == SparqlTerm::Kind::Literal ? obj.value : Value(obj.text);
                step.get.filters.push_back(
                    BqlFilter{roleMap.at(rp.pat).keyPath.front(), Comparator::Eq, operand, ""});
            }
            prog.steps.push_back(std::move(step));
        }
        return prog;
    }

    std::vector<BqlProgram> run() {
        resolve();
        check_groups();
        build_edges();
        orient();
        check_select();
        check_sources();
        std::vector<BqlProgram> out;
        for (const std::string& db : databases()) {
            if (auto p = build_for(db)) out.push_back(std::move(*p));
        }
        return out;
    }
};

}  // namespace detail

inline std::vector<BqlProgram> translate(const SparqlQuery& q, const GlobalOntology& go) {
    detail::TranslationBuild build{q, go, {}, {}, {}, {}, {}};
    return build.run();
}

namespace detail {

inline void validate_step(const BqlStep& s, const std::map<std::string, const BqlStep*>& defined) {
    if (defined.count(s.name)) throw Error("bql", "SchemaMismatch", "duplicate step name '" + s.name + "'");
    if (s.loop) {
        auto it = defined.find(s.loop->inputRelation);
        if (it == defined.end()) {
            throw Error("bql", "SchemaMismatch",
                        "step '" + s.name + "' references undefined relation '" + s.loop->inputRelation + "'");
        }
        const auto& inSchema = it->second->schema;
        if (std::find(inSchema.begin(), inSchema.end(), s.loop->inputAttribute) == inSchema.end()) {
            throw Error("bql", "SchemaMismatch", "attribute '" + s.loop->inputAttribute +
                                                     "' is not in the schema of relation '" +
                                                     s.loop->inputRelation + "'");
        }
    }
    for (const BqlFilter& f : s.get.filters) {
        if (f.loopVar.empty()) continue;
        if (!s.loop || f.loopVar != s.loop->loopVar) {
            throw Error("bql", "SchemaMismatch",
                        "filter on '" + f.attribute + "' references unknown loop variable '" + f.loopVar + "'");
        }
    }
    for (const std::string& col : s.schema) {
        auto it = s.sources.find(col);
        if (it == s.sources.end()) {
            throw Error("bql", "SchemaMismatch", "schema column '" + col + "' has no source");
        }
        const std::string& src = it->second;
        const bool tag = s.loop && src == s.loop->loopVar;
        if (src != "Key" && !tag && !s.get.projections.count(src)) {
            throw Error("bql", "SchemaMismatch",
                        "schema column '" + col + "' reads unprojected attribute '" + src + "'");
        }
    }
}

// Rows that satisfy the filters but hold no scalar observation under some
// projected key are dropped: the corresponding pattern has no binding there.
inline std::vector<Value::Map> run_get(const BqlGet& g, const SourceCatalog& catalog, const Value* loopValue) {
    std::vector<Filter> fs;
    for (const BqlFilter& f : g.filters) {
        fs.push_back(Filter{f.attribute, f.comparator, f.loopVar.empty() ? f.operand : *loopValue});
    }
    RowSet rs = get(catalog, g.container, fs, g.projections);
    std::vector<Value::Map> rows;
    for (auto& row : rs.rows) {
        bool keep = true;
        for (const std::string& a : g.projections) {
            auto it = row.find(a);
            if (it == row.end() || scalar_choices(it->second).empty()) {
                keep = false;
                break;
            }
        }
        if (keep) rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

inline ResultTable execute(const BqlProgram& p, const SourceCatalog& catalog) {
    if (p.steps.empty()) throw Error("bql", "SchemaMismatch", "program has no steps");
    if (p.steps.back().name != p.answerRelation) {
        throw Error("bql", "SchemaMismatch",
                    "answer relation '" + p.answerRelation + "' must be the final step");
    }
    std::map<std::string, const BqlStep*> defined;
    std::map<std::string, std::vector<Value::Map>> relations;
    for (const BqlStep& s : p.steps) {
        detail::validate_step(s, defined);
        std::vector<Value::Map> rows;
        if (s.loop) {
            for (const Value::Map& inRow : relations.at(s.loop->inputRelation)) {
                auto it = inRow.find(s.loop->inputAttribute);
                if (it == inRow.end()) continue;
                for (const Value& e : detail::scalar_choices(it->second)) {
                    for (Value::Map& row : detail::run_get(s.get, catalog, &e)) {
                        row[s.loop->loopVar] = e;
                        rows.push_back(std::move(row));
                    }
                }
            }
        } else {
            rows = detail::run_get(s.get, catalog, nullptr);
        }
        relations[s.name] = std::move(rows);
        defined[s.name] = &s;
    }

    // Set semantics only here: intermediate relations stay bags, the answer
    // deduplicates after flattening list observations into scalar rows.
    const BqlStep& ans = p.steps.back();
    std::set<std::vector<Value>> uniq;
    for (const Value::Map& row : relations.at(ans.name)) {
        std::vector<std::vector<Value>> choices;
        bool ok = true;
        for (const std::string& col : ans.schema) {
            auto it = row.find(ans.sources.at(col));
            std::vector<Value> ch;
            if (it != row.end()) ch = detail::scalar_choices(it->second);
            if (ch.empty()) {
                ok = false;
                break;
            }
            choices.push_back(std::move(ch));
        }
        if (!ok) continue;
        std::vector<size_t> idx(choices.size(), 0);
        bool done = false;
        while (!done) {
            std::vector<Value> tuple;
            for (size_t i = 0; i < choices.size(); ++i) tuple.push_back(choices[i][idx[i]]);
            uniq.insert(std::move(tuple));
            done = true;
            for (size_t i = choices.size(); i-- > 0;) {
                if (++idx[i] < choices[i].size()) {
                    done = false;
                    break;
                }
                idx[i] = 0;
            }
        }
    }
    ResultTable out;
    out.schema = ans.schema;
    out.rows.assign(uniq.begin(), uniq.end());
    return out;
}

inline ResultTable execute_union(const std::vector<BqlProgram>& programs, const SourceCatalog& catalog) {
    ResultTable out;
    std::set<std::vector<Value>> uniq;
    for (size_t i = 0; i < programs.size(); ++i) {
        ResultTable t = execute(programs[i], catalog);
        if (i == 0) {
            out.schema = t.schema;
        } else if (t.schema != out.schema) {
            throw Error("bql", "SchemaMismatch", "programs disagree on the answer schema");
        }
        for (auto& r : t.rows) uniq.insert(std::move(r));
    }
    out.rows.assign(uniq.begin(), uniq.end());
    return out;
}

inline std::string explain_text(const BqlProgram& p) {
    std::ostringstream out;
    for (const BqlStep& s : p.steps) {
        out << s.name << "(" << detail::comma_join(s.schema) << ") = ";
        if (s.loop) {
            out << "foreach " << s.loop->loopVar << " in " << s.loop->inputRelation << "."
                << s.loop->inputAttribute << " : ";
        }
        std::vector<std::string> fs;
        for (const BqlFilter& f : s.get.filters) {
            fs.push_back(f.attribute + comparator_symbol(f.comparator) + detail::filter_rhs(f));
        }
        out << s.get.container.qualified() << ".get({" << detail::comma_join(fs) << "},{"
            << detail::comma_join(s.get.projections) << "})\n";
    }
    return out.str();
}

enum class PlanDialect { DocApi, ColumnApi };

inline std::string emit_plan(const BqlProgram& p, PlanDialect dialect) {
    const bool doc = dialect == PlanDialect::DocApi;
    std::ostringstream out;
    out << "-- bql plan: " << p.source << " via " << (doc ? "document api" : "column api") << "\n";
    size_t n = 0;
    for (const BqlStep& s : p.steps) {
        out << ++n << ". " << s.name << " = ";
        if (s.loop) {
            out << "foreach " << s.loop->loopVar << " in " << s.loop->inputRelation << "."
                << s.loop->inputAttribute << ": ";
        }
        if (doc) {
            std::vector<std::string> fs;
            for (const BqlFilter& f : s.get.filters) {
                if (f.comparator == Comparator::Eq) {
                    fs.push_back(f.attribute + ": " + detail::filter_rhs(f));
                } else {
                    fs.push_back(f.attribute + ": {'" + comparator_symbol(f.comparator) + "': " +
                                 detail::filter_rhs(f) + "}");
                }
            }
            std::vector<std::string> ps;
            for (const std::string& a : s.get.projections) ps.push_back(a + ": 1");
            out << "find(" << s.get.container.container << ", {" << detail::comma_join(fs) << "}, {"
                << detail::comma_join(ps) << "})";
        } else {
            std::string rowKey = "*";
            std::vector<std::string> rest;
            for (const BqlFilter& f : s.get.filters) {
                if (rowKey == "*" && f.attribute == "Key" && f.comparator == Comparator::Eq) {
                    rowKey = detail::filter_rhs(f);
                } else {
                    rest.push_back(f.attribute + " " + comparator_symbol(f.comparator) + " " +
                                   detail::filter_rhs(f));
                }
            }
            out << "getSlice(" << s.get.container.container << ", rowKey: " << rowKey << ", columns: ["
                << detail::comma_join(s.get.projections) << "])";
            if (!rest.empty()) {
                std::string w;
                for (const auto& r : rest) {
                    if (!w.empty()) w += " and ";
                    w += r;
                }
                out << " where " << w;
            }
        }
        out << "\n";
    }
    return out.str();
}

inline nlohmann::json result_to_json(const ResultTable& t) {
    nlohmann::json j;
    j["schema"] = t.schema;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const Value& v : row) r.push_back(v.to_json());
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

inline ResultTable result_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("schema") || !j.contains("rows") || !j.at("schema").is_array() ||
        !j.at("rows").is_array()) {
        throw Error("bql", "ParseError", "result table must be an object with schema and rows arrays");
    }
    ResultTable t;
    for (const auto& s : j.at("schema")) {
        if (!s.is_string()) throw Error("bql", "ParseError", "schema entries must be strings");
        t.schema.push_back(s.get<std::string>());
    }
    for (const auto& row : j.at("rows")) {
        if (!row.is_array() || row.size() != t.schema.size()) {
            throw Error("bql", "ParseError", "rows must be arrays matching the schema arity");
        }
        std::vector<Value> r;
        for (const auto& v : row) r.push_back(Value::from_json(v));
        t.rows.push_back(std::move(r));
    }
    return t;
}

}  // namespace nosqint
