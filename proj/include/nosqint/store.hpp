#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "nosqint/errors.hpp"
#include "nosqint/io.hpp"
#include "nosqint/value.hpp"

namespace nosqint {

enum class ContainerKind { Collection, ColumnFamily };

// (database, container) identifies a container uniquely: database names are
// unique across a catalog and each database is one store kind, so the kind
// field is derivable metadata and stays out of equality.
struct ContainerRef {
    std::string database;
    std::string container;
    ContainerKind kind = ContainerKind::Collection;

    std::string qualified() const { return database + "." + container; }

    friend bool operator==(const ContainerRef& a, const ContainerRef& b) {
        return a.database == b.database && a.container == b.container;
    }
    friend bool operator!=(const ContainerRef& a, const ContainerRef& b) { return !(a == b); }
    friend bool operator<(const ContainerRef& a, const ContainerRef& b) {
        return std::tie(a.database, a.container) < std::tie(b.database, b.container);
    }
};

// One container's entries: entry key -> attribute map. Ordered maps keep
// every enumeration and serialization deterministic.
using Entries = std::map<std::string, Value::Map>;

// Uniform read-only view over one loaded database, regardless of store kind.
// Everything downstream of loading (profiling, induction, BQL execution)
// goes through this interface, so tests can wrap it (e.g. to log accesses).
class StoreBackend {
public:
    virtual ~StoreBackend() = default;
    virtual const std::string& database_name() const = 0;
    virtual ContainerKind container_kind() const = 0;
    virtual const std::map<std::string, Entries>& containers() const = 0;

    virtual const Entries* find_container(const std::string& name) const {
        auto it = containers().find(name);
        return it == containers().end() ? nullptr : &it->second;
    }
};

class DocumentDatabase final : public StoreBackend {
public:
    std::string name;
    std::map<std::string, Entries> collections;

    const std::string& database_name() const override { return name; }
    ContainerKind container_kind() const override { return ContainerKind::Collection; }
    const std::map<std::string, Entries>& containers() const override { return collections; }
};

class ColumnStore final : public StoreBackend {
public:
    std::string keyspace;
    std::map<std::string, Entries> families;

    const std::string& database_name() const override { return keyspace; }
    ContainerKind container_kind() const override { return ContainerKind::ColumnFamily; }
    const std::map<std::string, Entries>& containers() const override { return families; }
};

class SourceCatalog {
public:
    void add(std::shared_ptr<const StoreBackend> backend) {
        if (find_database(backend->database_name())) {
            throw Error("store", "DuplicateKey",
                        "duplicate database name '" + backend->database_name() + "' in catalog");
        }
        backends_.push_back(std::move(backend));
    }
    void add_document_db(DocumentDatabase db) { add(std::make_shared<DocumentDatabase>(std::move(db))); }
    void add_column_store(ColumnStore cs) { add(std::make_shared<ColumnStore>(std::move(cs))); }

    const std::vector<std::shared_ptr<const StoreBackend>>& databases() const { return backends_; }

    const StoreBackend* find_database(const std::string& name) const {
        for (const auto& b : backends_) {
            if (b->database_name() == name) return b.get();
        }
        return nullptr;
    }

    // Resolves (database, container) to a full ref with the store kind filled in.
    ContainerRef resolve(const std::string& database, const std::string& container) const {
        const StoreBackend* b = find_database(database);
        if (b && b->find_container(container)) return ContainerRef{database, container, b->container_kind()};
        throw Error("store", "UnknownContainer", "no container '" + database + "." + container + "' in catalog");
    }

    const Entries& entries(const ContainerRef& ref) const {
        const StoreBackend* b = find_database(ref.database);
        const Entries* e = b ? b->find_container(ref.container) : nullptr;
        if (!e) throw Error("store", "UnknownContainer", "no container '" + ref.qualified() + "' in catalog");
        return *e;
    }

private:
    std::vector<std::shared_ptr<const StoreBackend>> backends_;
};

struct Filter {
    std::string attribute;
    Comparator comparator = Comparator::Eq;
    Value operand;
};

// Rows are attribute -> Value maps; the entry key always appears under the
// reserved attribute name "Key" and shadows any stored attribute of that name.
struct RowSet {
    std::vector<Value::Map> rows;
};

inline Value::Map make_row(const std::string& key, const Value::Map& entry) {
    Value::Map row = entry;
    row["Key"] = Value(key);
    return row;
}

inline bool row_satisfies(const Value::Map& row, const std::vector<Filter>& filters) {
    for (const auto& f : filters) {
        auto it = row.find(f.attribute);
        if (it == row.end()) return false;
        if (!matches_filter(f.comparator, it->second, f.operand)) return false;
    }
    return true;
}

inline RowSet get(const SourceCatalog& catalog, const ContainerRef& ref, const std::vector<Filter>& filters,
                  const std::set<std::string>& projections) {
    const Entries& entries = catalog.entries(ref);
    RowSet out;
    for (const auto& [key, entry] : entries) {
        Value::Map row = make_row(key, entry);
        if (!row_satisfies(row, filters)) continue;
        if (projections.empty()) {
            out.rows.push_back(std::move(row));
            continue;
        }
        Value::Map projected;
        projected["Key"] = row.at("Key");
        for (const auto& attr : projections) {
            auto it = row.find(attr);
            if (it != row.end()) projected[attr] = it->second;
        }
        out.rows.push_back(std::move(projected));
    }
    return out;
}

inline std::vector<ContainerRef> container_names(const SourceCatalog& catalog) {
    std::vector<ContainerRef> refs;
    for (const auto& b : catalog.databases()) {
        for (const auto& [name, entries] : b->containers()) {
            refs.push_back(ContainerRef{b->database_name(), name, b->container_kind()});
        }
    }
    std::sort(refs.begin(), refs.end());
    return refs;
}

namespace detail {

// Parses JSON while rejecting duplicate object keys, which nlohmann would
// otherwise silently collapse. The callback tracks one seen-key set per
// open object; the first duplicate is reported after the parse finishes.
inline nlohmann::json parse_json_strict(const std::string& text) {
    std::vector<std::set<std::string>> open_objects;
    std::string duplicate;
    auto cb = [&](int, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
        switch (event) {
            case nlohmann::json::parse_event_t::object_start: open_objects.emplace_back(); break;
            case nlohmann::json::parse_event_t::object_end: open_objects.pop_back(); break;
            case nlohmann::json::parse_event_t::key: {
                const std::string k = parsed.get<std::string>();
                if (!open_objects.back().insert(k).second && duplicate.empty()) duplicate = k;
                break;
            }
            default: break;
        }
        return true;
    };
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text, cb);
    } catch (const nlohmann::json::exception& e) {
        throw Error("store", "ParseError", e.what());
    }
    if (!duplicate.empty()) throw Error("store", "DuplicateKey", "duplicate key '" + duplicate + "'");
    return j;
}

inline const nlohmann::json& require_object(const nlohmann::json& j, const std::string& what) {
    if (!j.is_object()) throw Error("store", "ParseError", what + " must be a JSON object");
    return j;
}

inline std::string require_string_field(const nlohmann::json& j, const std::string& field,
                                        const std::string& what) {
    if (!j.contains(field) || !j.at(field).is_string()) {
        throw Error("store", "ParseError", what + " needs a string field \"" + field + "\"");
    }
    return j.at(field).get<std::string>();
}

inline bool column_value_ok(const nlohmann::json& v) {
    if (v.is_object()) return false;
    if (v.is_array()) {
        for (const auto& e : v) {
            if (e.is_object() || e.is_array()) return false;
        }
    }
    return true;
}

}  // namespace detail

inline DocumentDatabase parse_document_db(const std::string& text) {
    nlohmann::json j = detail::parse_json_strict(text);
    detail::require_object(j, "document snapshot");
    DocumentDatabase db;
    db.name = detail::require_string_field(j, "name", "document snapshot");
    if (!j.contains("collections")) throw Error("store", "ParseError", "document snapshot needs \"collections\"");
    detail::require_object(j.at("collections"), "\"collections\"");
    for (auto it = j.at("collections").begin(); it != j.at("collections").end(); ++it) {
        detail::require_object(it.value(), "collection '" + it.key() + "'");
        Entries entries;
        for (auto doc = it.value().begin(); doc != it.value().end(); ++doc) {
            if (!doc.value().is_object()) {
                throw Error("store", "ParseError",
                            "document '" + doc.key() + "' in collection '" + it.key() + "' is not an object");
            }
            entries.emplace(doc.key(), Value::from_json(doc.value()).as_map());
        }
        db.collections.emplace(it.key(), std::move(entries));
    }
    return db;
}

inline ColumnStore parse_column_store(const std::string& text) {
    nlohmann::json j = detail::parse_json_strict(text);
    detail::require_object(j, "column snapshot");
    ColumnStore cs;
    cs.keyspace = detail::require_string_field(j, "keyspace", "column snapshot");
    if (!j.contains("columnFamilies")) throw Error("store", "ParseError", "column snapshot needs \"columnFamilies\"");
    detail::require_object(j.at("columnFamilies"), "\"columnFamilies\"");
    for (auto fam = j.at("columnFamilies").begin(); fam != j.at("columnFamilies").end(); ++fam) {
        detail::require_object(fam.value(), "column family '" + fam.key() + "'");
        Entries entries;
        for (auto row = fam.value().begin(); row != fam.value().end(); ++row) {
            detail::require_object(row.value(), "row '" + row.key() + "'");
            for (auto col = row.value().begin(); col != row.value().end(); ++col) {
                if (!detail::column_value_ok(col.value())) {
                    throw Error("store", "NestedColumnValue",
                                "column '" + col.key() + "' of row '" + row.key() + "' in family '" + fam.key() +
                                    "' holds a nested structure");
                }
            }
            entries.emplace(row.key(), Value::from_json(row.value()).as_map());
        }
        cs.families.emplace(fam.key(), std::move(entries));
    }
    return cs;
}

inline DocumentDatabase load_document_db(const std::string& path) {
    return parse_document_db(read_text_file(path));
}

inline ColumnStore load_column_store(const std::string& path) {
    return parse_column_store(read_text_file(path));
}

// Catalog file: {"documentDatabases": [<path>...], "columnStores": [<path>...]},
// paths resolved relative to the catalog file's directory.
inline SourceCatalog load_catalog(const std::string& path) {
    nlohmann::json j = detail::parse_json_strict(read_text_file(path));
    detail::require_object(j, "catalog");
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).string();
    };
    SourceCatalog catalog;
    for (const char* field : {"documentDatabases", "columnStores"}) {
        if (!j.contains(field)) continue;
        if (!j.at(field).is_array()) throw Error("store", "ParseError", std::string("\"") + field + "\" must be an array");
        for (const auto& entry : j.at(field)) {
            if (!entry.is_string()) throw Error("store", "ParseError", std::string("\"") + field + "\" entries must be paths");
            if (std::string(field) == "documentDatabases") {
                catalog.add_document_db(load_document_db(resolve(entry.get<std::string>())));
            } else {
                catalog.add_column_store(load_column_store(resolve(entry.get<std::string>())));
            }
        }
    }
    return catalog;
}

inline nlohmann::json snapshot_to_json(const StoreBackend& backend) {
    nlohmann::json containers = nlohmann::json::object();
    for (const auto& [name, entries] : backend.containers()) {
        nlohmann::json c = nlohmann::json::object();
        for (const auto& [key, attrs] : entries) c[key] = Value(attrs).to_json();
        containers[name] = std::move(c);
    }
    nlohmann::json j = nlohmann::json::object();
    if (backend.container_kind() == ContainerKind::Collection) {
        j["name"] = backend.database_name();
        j["collections"] = std::move(containers);
    } else {
        j["keyspace"] = backend.database_name();
        j["columnFamilies"] = std::move(containers);
    }
    return j;
}

inline std::string serialize_snapshot(const StoreBackend& backend) { return snapshot_to_json(backend).dump(2) + "\n"; }

inline void save_snapshot(const StoreBackend& backend, const std::string& path) {
    write_text_file(path, serialize_snapshot(backend));
}

}  // namespace nosqint
