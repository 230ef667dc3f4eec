#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nosqint/fca.hpp"
#include "support/testutil.hpp"

using namespace nosqint;

namespace {

// Type-profile context from the conference fixture: five accounts against
// the four membership attributes.
FormalContext conference_context() {
    std::vector<std::string> objects = {"joe", "ann", "bob", "carol", "miles"};
    std::vector<std::string> attrs = {"User", "Author", "Reviewer", "ConfMember"};
    std::set<std::pair<size_t, size_t>> inc;
    auto mark = [&](size_t o, std::initializer_list<size_t> as) {
        for (size_t a : as) inc.insert({o, a});
    };
    mark(0, {0, 1, 2, 3});
    mark(1, {0, 1});
    mark(2, {0, 2});
    mark(3, {0, 3});
    mark(4, {0});
    return FormalContext(objects, attrs, inc);
}

FormalContext random_context(std::mt19937_64& rng, size_t objects, size_t attrs) {
    std::vector<std::string> os, as;
    for (size_t i = 0; i < objects; ++i) os.push_back("o" + std::to_string(i));
    for (size_t j = 0; j < attrs; ++j) as.push_back("a" + std::to_string(j));
    std::set<std::pair<size_t, size_t>> inc;
    for (size_t i = 0; i < objects; ++i) {
        for (size_t j = 0; j < attrs; ++j) {
            if (rng() % 2 == 0) inc.insert({i, j});
        }
    }
    return FormalContext(os, as, inc);
}

// Independent enumeration of all closed attribute sets: walk every subset.
std::set<std::set<size_t>> closed_sets_brute(const FormalContext& ctx) {
    std::set<std::set<size_t>> out;
    const size_t m = ctx.attributes().size();
    for (size_t mask = 0; mask < (size_t(1) << m); ++mask) {
        std::set<size_t> s;
        for (size_t j = 0; j < m; ++j) {
            if (mask >> j & 1) s.insert(j);
        }
        if (close(ctx, s) == s) out.insert(s);
    }
    return out;
}

std::set<size_t> extent_brute(const FormalContext& ctx, const std::set<size_t>& intent) {
    std::set<size_t> out;
    for (size_t i = 0; i < ctx.objects().size(); ++i) {
        bool all = std::all_of(intent.begin(), intent.end(),
                               [&](size_t a) { return ctx.incidence(i, a); });
        if (all) out.insert(i);
    }
    return out;
}

}  // namespace

TEST_CASE("attribute closure behaves like a closure operator") {
    FormalContext ctx = conference_context();
    SUBCASE("closing the empty set yields the attributes common to all objects") {
        CHECK(close(ctx, {}) == std::set<size_t>{0});
    }
    SUBCASE("worked example: Author pulls in User") {
        CHECK(close(ctx, {1}) == std::set<size_t>{0, 1});
    }
    SUBCASE("idempotent, extensive, monotone on random contexts") {
        auto rng = testutil::make_rng(31);
        for (int trial = 0; trial < 40; ++trial) {
            FormalContext rc = random_context(rng, 2 + rng() % 5, 2 + rng() % 4);
            const size_t m = rc.attributes().size();
            std::set<size_t> a, b;
            for (size_t j = 0; j < m; ++j) {
                if (rng() % 2 == 0) a.insert(j);
                if (rng() % 2 == 0) b.insert(j);
            }
            std::set<size_t> both = a;
            both.insert(b.begin(), b.end());
            auto ca = close(rc, a);
            CHECK(std::includes(ca.begin(), ca.end(), a.begin(), a.end()));
            CHECK(close(rc, ca) == ca);
            auto cboth = close(rc, both);
            CHECK(std::includes(cboth.begin(), cboth.end(), ca.begin(), ca.end()));
        }
    }
    SUBCASE("out-of-range attribute index is rejected") {
        CHECK(testutil::error_kind([&] { close(ctx, {9}); }) == "IndexOutOfRange");
    }
}

TEST_CASE("context construction validates incidence") {
    CHECK(testutil::error_kind([] {
              FormalContext({"o"}, {"a"}, {{1, 0}});
          }) == "IndexOutOfRange");
    CHECK(testutil::error_kind([] {
              FormalContext({"o"}, {"a"}, {{0, 2}});
          }) == "IndexOutOfRange");
}

TEST_CASE("lattice construction enumerates exactly the closed sets") {
    SUBCASE("one-by-one context with full incidence is a single node") {
        FormalContext ctx({"o"}, {"a"}, {{0, 0}});
        ConceptLattice lat = build_lattice(ctx);
        REQUIRE(lat.nodes.size() == 1);
        CHECK(lat.nodes[0].extent == std::set<size_t>{0});
        CHECK(lat.nodes[0].intent == std::set<size_t>{0});
        CHECK(lat.coverEdges.empty());
    }
    SUBCASE("two-account chain") {
        // joe has all four marks, miles only User: two nodes, one cover edge.
        FormalContext ctx({"joe", "miles"}, {"User", "Author", "Reviewer", "ConfMember"},
                          {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 0}});
        ConceptLattice lat = build_lattice(ctx);
        REQUIRE(lat.nodes.size() == 2);
        CHECK(lat.nodes[0].intent == std::set<size_t>{0});
        CHECK(lat.nodes[0].extent == std::set<size_t>{0, 1});
        CHECK(lat.nodes[1].intent == std::set<size_t>{0, 1, 2, 3});
        CHECK(lat.nodes[1].extent == std::set<size_t>{0});
        CHECK(lat.coverEdges == std::set<std::pair<size_t, size_t>>{{1, 0}});
    }
    SUBCASE("conference context has the five closed intents") {
        ConceptLattice lat = build_lattice(conference_context());
        std::set<std::set<size_t>> intents;
        for (const auto& n : lat.nodes) intents.insert(n.intent);
        CHECK(intents == std::set<std::set<size_t>>{
                             {0}, {0, 1}, {0, 2}, {0, 3}, {0, 1, 2, 3}});
    }
    SUBCASE("matches brute-force closed-set enumeration on random contexts") {
        auto rng = testutil::make_rng(32);
        for (int trial = 0; trial < 40; ++trial) {
            FormalContext ctx = random_context(rng, 1 + rng() % 6, 1 + rng() % 5);
            ConceptLattice lat = build_lattice(ctx);
            std::set<std::set<size_t>> intents;
            for (const auto& n : lat.nodes) {
                intents.insert(n.intent);
                CHECK(n.extent == extent_brute(ctx, n.intent));
            }
            CHECK(intents.size() == lat.nodes.size());
            CHECK(intents == closed_sets_brute(ctx));
            // Lectic enumeration: node order is strictly increasing.
            for (size_t i = 1; i < lat.nodes.size(); ++i) {
                CHECK(lat.nodes[i - 1].intent != lat.nodes[i].intent);
            }
        }
    }
    SUBCASE("cover edges are the transitive reduction of extent inclusion") {
        auto rng = testutil::make_rng(33);
        for (int trial = 0; trial < 30; ++trial) {
            FormalContext ctx = random_context(rng, 2 + rng() % 5, 2 + rng() % 4);
            ConceptLattice lat = build_lattice(ctx);
            const size_t n = lat.nodes.size();
            std::vector<std::vector<bool>> less(n, std::vector<bool>(n, false));
            for (size_t i = 0; i < n; ++i) {
                for (size_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    const auto& ei = lat.nodes[i].extent;
                    const auto& ej = lat.nodes[j].extent;
                    less[i][j] = ei != ej && std::includes(ej.begin(), ej.end(), ei.begin(), ei.end());
                }
            }
            std::set<std::pair<size_t, size_t>> expected;
            for (size_t i = 0; i < n; ++i) {
                for (size_t j = 0; j < n; ++j) {
                    if (!less[i][j]) continue;
                    bool direct = true;
                    for (size_t k = 0; k < n && direct; ++k) {
                        if (less[i][k] && less[k][j]) direct = false;
                    }
                    if (direct) expected.insert({i, j});
                }
            }
            CHECK(lat.coverEdges == expected);
        }
    }
    SUBCASE("every pair of nodes has a meet and a join") {
        auto rng = testutil::make_rng(34);
        for (int trial = 0; trial < 25; ++trial) {
            FormalContext ctx = random_context(rng, 1 + rng() % 6, 1 + rng() % 6);
            ConceptLattice lat = build_lattice(ctx);
            std::set<std::set<size_t>> intents;
            for (const auto& n : lat.nodes) intents.insert(n.intent);
            for (const auto& a : lat.nodes) {
                for (const auto& b : lat.nodes) {
                    std::set<size_t> meet_intent;
                    std::set_union(a.intent.begin(), a.intent.end(), b.intent.begin(), b.intent.end(),
                                   std::inserter(meet_intent, meet_intent.begin()));
                    CHECK(intents.count(close(ctx, meet_intent)) == 1);
                    std::set<size_t> join_intent;
                    std::set_intersection(a.intent.begin(), a.intent.end(), b.intent.begin(), b.intent.end(),
                                          std::inserter(join_intent, join_intent.begin()));
                    CHECK(intents.count(close(ctx, join_intent)) == 1);
                }
            }
        }
    }
}

TEST_CASE("node naming uses introduced attributes") {
    SUBCASE("conference context names four nodes and prunes the bottom") {
        FormalContext ctx = conference_context();
        ConceptLattice lat = build_lattice(ctx);
        auto names = lattice_node_names(lat, ctx);
        std::set<std::string> named;
        for (const auto& [idx, name] : names) named.insert(name);
        CHECK(named == std::set<std::string>{"User", "Author", "Reviewer", "ConfMember"});
        CHECK(names.size() == 4);  // the {joe} bottom introduces nothing
    }
    SUBCASE("co-introduced attributes join with underscores") {
        // Every object with A also has B, so one node introduces both.
        FormalContext ctx({"o1", "o2"}, {"A", "B", "C"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 2}});
        ConceptLattice lat = build_lattice(ctx);
        auto names = lattice_node_names(lat, ctx);
        std::set<std::string> named;
        for (const auto& [idx, name] : names) named.insert(name);
        CHECK(named == std::set<std::string>{"A_B", "C"});
    }
}

TEST_CASE("axiom extraction follows named covers") {
    SUBCASE("conference context yields exactly the three memberships") {
        FormalContext ctx = conference_context();
        ConceptLattice lat = build_lattice(ctx);
        auto axioms = lattice_to_axioms(lat, ctx);
        std::vector<std::pair<std::string, std::string>> got;
        for (const auto& ax : axioms) {
            REQUIRE(ax.type == Axiom::Type::SubClassOf);
            got.push_back({ax.sub.name(), ax.sup.name()});
        }
        CHECK(got == std::vector<std::pair<std::string, std::string>>{
                         {"Author", "User"}, {"ConfMember", "User"}, {"Reviewer", "User"}});
    }
    SUBCASE("single-attribute context yields nothing") {
        FormalContext ctx({"o1", "o2"}, {"A"}, {{0, 0}, {1, 0}});
        CHECK(lattice_to_axioms(build_lattice(ctx), ctx).empty());
    }
    SUBCASE("joined node appears as subsumer") {
        FormalContext ctx({"o1", "o2"}, {"A", "B", "C"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 2}});
        auto axioms = lattice_to_axioms(build_lattice(ctx), ctx);
        REQUIRE(axioms.size() == 1);
        CHECK(axioms[0].sub.name() == "C");
        CHECK(axioms[0].sup.name() == "A_B");
    }
    SUBCASE("axiom closure equals strict order among named nodes") {
        auto rng = testutil::make_rng(35);
        for (int trial = 0; trial < 30; ++trial) {
            FormalContext ctx = random_context(rng, 2 + rng() % 4, 2 + rng() % 3);
            ConceptLattice lat = build_lattice(ctx);
            auto names = lattice_node_names(lat, ctx);
            auto axioms = lattice_to_axioms(lat, ctx);

            // Oracle: named node i is under named node j iff extent(i) is a
            // proper subset of extent(j). Close the emitted edges and compare.
            std::map<std::string, std::set<size_t>> extent_of;
            for (const auto& [idx, name] : names) extent_of[name] = lat.nodes[idx].extent;
            std::set<std::pair<std::string, std::string>> expected;
            for (const auto& [na, ea] : extent_of) {
                for (const auto& [nb, eb] : extent_of) {
                    if (na != nb && ea != eb &&
                        std::includes(eb.begin(), eb.end(), ea.begin(), ea.end())) {
                        expected.insert({na, nb});
                    }
                }
            }
            std::map<std::string, std::set<std::string>> up;
            for (const auto& ax : axioms) up[ax.sub.name()].insert(ax.sup.name());
            std::set<std::pair<std::string, std::string>> reached;
            for (const auto& [idx, name] : names) {
                std::vector<std::string> stack = {name};
                std::set<std::string> seen;
                while (!stack.empty()) {
                    std::string cur = stack.back();
                    stack.pop_back();
                    for (const auto& next : up[cur]) {
                        if (seen.insert(next).second) {
                            reached.insert({name, next});
                            stack.push_back(next);
                        }
                    }
                }
            }
            CHECK(reached == expected);
            // Emitted list is sorted and duplicate-free.
            for (size_t i = 1; i < axioms.size(); ++i) {
                auto key = [](const Axiom& ax) { return std::make_pair(ax.sub.name(), ax.sup.name()); };
                CHECK(key(axioms[i - 1]) < key(axioms[i]));
            }
        }
    }
}
