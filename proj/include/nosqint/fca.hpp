#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nosqint/dlcore.hpp"
#include "nosqint/errors.hpp"

namespace nosqint {

class Bitset {
public:
    explicit Bitset(size_t universe) : n_(universe), words_((universe + 63) / 64, 0) {}

    static Bitset full(size_t universe) {
        Bitset b(universe);
        for (size_t i = 0; i < universe; ++i) b.set(i);
        return b;
    }

    size_t universe() const { return n_; }
    void set(size_t i) { words_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(size_t i) { words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
    bool test(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    size_t count() const {
        size_t c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    Bitset& intersect(const Bitset& o) {
        for (size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
        return *this;
    }

    bool is_subset_of(const Bitset& o) const {
        for (size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] & ~o.words_[w]) return false;
        }
        return true;
    }

    // Keeps only elements strictly below i.
    Bitset& truncate_at(size_t i) {
        for (size_t w = 0; w < words_.size(); ++w) {
            const size_t lo = w * 64;
            if (lo >= i) {
                words_[w] = 0;
            } else if (lo + 64 > i) {
                words_[w] &= (std::uint64_t(1) << (i - lo)) - 1;
            }
        }
        return *this;
    }

    std::set<size_t> to_set() const {
        std::set<size_t> out;
        for (size_t i = 0; i < n_; ++i) {
            if (test(i)) out.insert(i);
        }
        return out;
    }

    friend bool operator==(const Bitset& a, const Bitset& b) { return a.n_ == b.n_ && a.words_ == b.words_; }
    friend bool operator!=(const Bitset& a, const Bitset& b) { return !(a == b); }

private:
    size_t n_;
    std::vector<std::uint64_t> words_;
};

class FormalContext {
public:
    FormalContext(std::vector<std::string> objects, std::vector<std::string> attributes,
                  const std::set<std::pair<size_t, size_t>>& incidence)
        : objects_(std::move(objects)),
          attributes_(std::move(attributes)),
          rows_(objects_.size(), Bitset(attributes_.size())),
          cols_(attributes_.size(), Bitset(objects_.size())) {
        for (const auto& [o, a] : incidence) {
            if (o >= objects_.size() || a >= attributes_.size()) {
                throw Error("fca", "IndexOutOfRange", "incidence pair out of range");
            }
            rows_[o].set(a);
            cols_[a].set(o);
        }
    }

    size_t object_count() const { return objects_.size(); }
    size_t attribute_count() const { return attributes_.size(); }
    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<std::string>& attributes() const { return attributes_; }
    bool incidence(size_t o, size_t a) const { return rows_[o].test(a); }

    Bitset extent_of(const Bitset& attrs) const {
        Bitset objs = Bitset::full(object_count());
        for (size_t a = 0; a < attribute_count(); ++a) {
            if (attrs.test(a)) objs.intersect(cols_[a]);
        }
        return objs;
    }

    Bitset intent_of(const Bitset& objs) const {
        Bitset attrs = Bitset::full(attribute_count());
        for (size_t o = 0; o < object_count(); ++o) {
            if (objs.test(o)) attrs.intersect(rows_[o]);
        }
        return attrs;
    }

    Bitset close_attrs(const Bitset& attrs) const { return intent_of(extent_of(attrs)); }

private:
    std::vector<std::string> objects_;
    std::vector<std::string> attributes_;
    std::vector<Bitset> rows_;
    std::vector<Bitset> cols_;
};

struct FormalConcept {
    std::set<size_t> extent;
    std::set<size_t> intent;

    friend bool operator==(const FormalConcept& a, const FormalConcept& b) {
        return a.extent == b.extent && a.intent == b.intent;
    }
};

// Nodes in lectic order of intents; edges are the transitive reduction of
// the extent-inclusion order, stored as (lowerNodeIdx, upperNodeIdx).
struct ConceptLattice {
    std::vector<FormalConcept> nodes;
    std::set<std::pair<size_t, size_t>> coverEdges;
};

inline std::set<size_t> close(const FormalContext& ctx, const std::set<size_t>& attrs) {
    Bitset b(ctx.attribute_count());
    for (size_t a : attrs) {
        if (a >= ctx.attribute_count()) throw Error("fca", "IndexOutOfRange", "attribute index out of range");
        b.set(a);
    }
    return ctx.close_attrs(b).to_set();
}

namespace detail {

// Ganter's Next-Closure step: the lectically next closed attribute set
// after a, or false when a is already the last one (the full set).
inline bool next_closed(const FormalContext& ctx, const Bitset& a, Bitset& out) {
    const size_t m = ctx.attribute_count();
    for (size_t step = 0; step < m; ++step) {
        const size_t i = m - 1 - step;
        if (a.test(i)) continue;
        Bitset seed = a;
        seed.truncate_at(i);
        seed.set(i);
        Bitset closed = ctx.close_attrs(seed);
        Bitset below = closed;
        below.truncate_at(i);
        Bitset a_below = a;
        a_below.truncate_at(i);
        if (below == a_below) {
            out = closed;
            return true;
        }
    }
    return false;
}

}  // namespace detail

inline ConceptLattice build_lattice(const FormalContext& ctx) {
    ConceptLattice lat;
    std::vector<Bitset> intents;
    Bitset a = ctx.close_attrs(Bitset(ctx.attribute_count()));
    intents.push_back(a);
    Bitset next(ctx.attribute_count());
    while (detail::next_closed(ctx, a, next)) {
        intents.push_back(next);
        a = next;
    }

    std::vector<Bitset> extents;
    extents.reserve(intents.size());
    for (const auto& intent : intents) {
        extents.push_back(ctx.extent_of(intent));
        lat.nodes.push_back(FormalConcept{extents.back().to_set(), intent.to_set()});
    }

    const size_t n = intents.size();
    std::vector<std::vector<bool>> less(n, std::vector<bool>(n, false));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (i != j && extents[i].is_subset_of(extents[j])) less[i][j] = true;
        }
    }
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (!less[i][j]) continue;
            bool covered = true;
            for (size_t k = 0; k < n && covered; ++k) {
                if (k != i && k != j && less[i][k] && less[k][j]) covered = false;
            }
            if (covered) lat.coverEdges.emplace(i, j);
        }
    }
    return lat;
}

namespace detail {

// A node introduces the attributes that appear in no node above it; those
// are exactly the attributes whose attribute concept it is.
inline std::vector<std::set<size_t>> introduced_attributes(const ConceptLattice& lat) {
    std::vector<std::set<size_t>> introduced(lat.nodes.size());
    for (size_t i = 0; i < lat.nodes.size(); ++i) {
        std::set<size_t> inherited;
        for (const auto& [lower, upper] : lat.coverEdges) {
            if (lower != i) continue;
            inherited.insert(lat.nodes[upper].intent.begin(), lat.nodes[upper].intent.end());
        }
        for (size_t attr : lat.nodes[i].intent) {
            if (!inherited.count(attr)) introduced[i].insert(attr);
        }
    }
    return introduced;
}

}  // namespace detail

// Name of the concept a lattice node stands for: the introduced attribute's
// name, or the sorted "A_B" join when several attributes arrive together.
inline std::map<size_t, std::string> lattice_node_names(const ConceptLattice& lat, const FormalContext& ctx) {
    std::map<size_t, std::string> names;
    const auto introduced = detail::introduced_attributes(lat);
    for (size_t i = 0; i < lat.nodes.size(); ++i) {
        if (introduced[i].empty()) continue;
        std::vector<std::string> parts;
        for (size_t attr : introduced[i]) parts.push_back(ctx.attributes()[attr]);
        std::sort(parts.begin(), parts.end());
        std::string joined;
        for (const auto& p : parts) {
            if (!joined.empty()) joined += "_";
            joined += p;
        }
        names[i] = joined;
    }
    return names;
}

// Subsumptions between named nodes: covers of the extent-inclusion order
// restricted to attribute-introducing nodes. Nodes introducing nothing are
// pruned, so chains through them contract.
inline std::vector<Axiom> lattice_to_axioms(const ConceptLattice& lat, const FormalContext& ctx) {
    const std::map<size_t, std::string> names = lattice_node_names(lat, ctx);
    std::vector<size_t> named;
    for (const auto& [node, name] : names) named.push_back(node);

    auto extent_less = [&](size_t i, size_t j) {
        if (i == j) return false;
        return std::includes(lat.nodes[j].extent.begin(), lat.nodes[j].extent.end(), lat.nodes[i].extent.begin(),
                             lat.nodes[i].extent.end());
    };

    std::vector<std::pair<std::string, std::string>> edges;
    for (size_t i : named) {
        for (size_t j : named) {
            if (!extent_less(i, j)) continue;
            bool covered = true;
            for (size_t k : named) {
                if (k != i && k != j && extent_less(i, k) && extent_less(k, j)) {
                    covered = false;
                    break;
                }
            }
            if (covered) edges.emplace_back(names.at(i), names.at(j));
        }
    }
    std::sort(edges.begin(), edges.end());
    std::vector<Axiom> axioms;
    for (const auto& [sub, sup] : edges) {
        axioms.push_back(Axiom::sub_class_of(ConceptExpr::atomic(sub), ConceptExpr::atomic(sup)));
    }
    return axioms;
}

}  // namespace nosqint
