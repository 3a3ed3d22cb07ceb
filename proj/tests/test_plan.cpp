#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "support.hpp"
#include "tnsketch/classify.hpp"
#include "tnsketch/contraction_tree.hpp"
#include "tnsketch/cuts.hpp"
#include "tnsketch/embedding.hpp"
#include "tnsketch/experiments.hpp"

using namespace tnsketch;

namespace {

// Brute-force E(A): enumerate edges, check adjacency and openness directly.
BigInt brute_cut_size(const TensorNetwork& net, const std::set<std::string>& skip,
                      const VSet& a) {
    BigInt p = 1;
    for (const auto& e : net.edges()) {
        if (skip.count(e.id)) continue;
        bool touch = false, leave = e.dangling;
        for (const auto& ep : e.endpoints) {
            if (vset_contains(a, net.vertex_index(ep))) touch = true;
            else leave = true;
        }
        if (touch && leave) p *= e.size;
    }
    return p;
}

VSet random_subset(int n, CounterRng& rng, const VSet& avoid = {}) {
    VSet out;
    for (int v = 0; v < n; ++v)
        if (!vset_contains(avoid, v) && rng.next_u64() % 2 == 0) out.push_back(v);
    return out;
}

}  // namespace

TEST_CASE("cut: labeled example and empty set") {
    // Two subsets with explicitly labeled crossing and open edges.
    TensorNetwork net;
    for (int i = 1; i <= 4; ++i) net.add_vertex("v" + std::to_string(i));
    net.add_edge({"ab1", {"v1", "v3"}, false, 3});   // crosses A={v1,v2}, B={v3,v4}
    net.add_edge({"ab2", {"v2", "v3", "v4"}, false, 5});
    net.add_edge({"ao", {"v1"}, true, 7});           // open at A
    net.add_edge({"in", {"v1", "v2"}, false, 11});   // interior to A
    net.add_edge({"bo", {"v4"}, true, 13});
    SystemView g{&net, {}, {}};
    const VSet a{0, 1}, b{2, 3};
    CHECK(cut_size(g, Scope::G, a, b) == BigInt(3) * 5);
    CHECK(cut_size(g, Scope::G, a) == BigInt(3) * 5 * 7);
    CHECK(cut_log(g, Scope::G, a) ==
          doctest::Approx(std::log(3.0) + std::log(5.0) + std::log(7.0)));
    CHECK(cut_size(g, Scope::G, VSet{}) == 1);  // empty cut has weight 0
    CHECK_THROWS_WITH_AS(cut_size(g, Scope::G, a, VSet{0}),
                         doctest::Contains("invalid cut query"), std::invalid_argument);
}

TEST_CASE("cut agrees with brute-force edge enumeration on random graphs") {
    for (int trial = 0; trial < 20; ++trial) {
        testing::InstanceOptions opt;
        opt.m = 4;
        auto inst = testing::random_instance(opt, {101u + static_cast<unsigned>(trial), 0});
        SystemView g{&inst.net, {}, {}};
        CounterRng rng({55u, static_cast<std::uint64_t>(trial)});
        const VSet a = random_subset(inst.net.num_vertices(), rng);
        CHECK(cut_size(g, Scope::G, a) == brute_cut_size(inst.net, {}, a));
    }
}

TEST_CASE("cost_pair: disjoint vertices and G = L + R decomposition") {
    TensorNetwork net;
    net.add_vertex("a");
    net.add_vertex("b");
    net.add_edge({"i", {"a"}, true, 4});
    net.add_edge({"j", {"b"}, true, 6});
    SystemView g{&net, {}, {}};
    CHECK(cost_pair_size(g, Scope::G, {0}, {1}) == 24);
    CHECK(cost_pair_log(g, Scope::G, {0}, {1}) ==
          doctest::Approx(std::log(4.0) + std::log(6.0)));

    // cost_G = cost_L + cost_R in the log domain on random systems: attach an
    // embedding and mark some edges as embedding scope.
    for (int trial = 0; trial < 20; ++trial) {
        testing::InstanceOptions opt;
        opt.m = 4;
        auto inst = testing::random_instance(opt, {311u + static_cast<unsigned>(trial), 0});
        SystemView g2{&inst.net, std::set<std::string>(inst.sketch.begin(), inst.sketch.end()), {}};
        CounterRng rng({56u, static_cast<std::uint64_t>(trial)});
        const VSet a = random_subset(inst.net.num_vertices(), rng);
        VSet b = random_subset(inst.net.num_vertices(), rng, a);
        if (a.empty() || b.empty()) continue;
        const double cg = cost_pair_log(g2, Scope::G, a, b);
        const double cl = cost_pair_log(g2, Scope::L, a, b);
        const double cr = cost_pair_log(g2, Scope::R, a, b);
        CHECK(cg == doctest::Approx(cl + cr).epsilon(1e-12));
    }
}

namespace {

// System with an attached embedding chain so the linearization DAG is
// nontrivial: every sketch edge gains an embedding endpoint.
struct LinearizedSystem {
    TensorNetwork net;
    SystemView view;
    std::vector<int> rank;
    int nd = 0;
};

LinearizedSystem attach_chain(const testing::RandomInstance& inst) {
    LinearizedSystem sys;
    sys.net = inst.net;
    sys.nd = inst.net.num_vertices();
    std::string prev_open;
    int k = 0;
    for (const auto& id : inst.sketch) {
        const std::string name = "@E:" + std::to_string(++k);
        sys.net.add_vertex(name);
        sys.net.attach_endpoint(id, name);
        sys.net.set_dangling(id, false);
        if (!prev_open.empty()) {
            sys.net.attach_endpoint(prev_open, name);
            sys.net.set_dangling(prev_open, false);
        }
        prev_open = "@o:" + std::to_string(k);
        sys.net.add_edge({prev_open, {name}, true, 8});
    }
    sys.view.net = &sys.net;
    sys.view.sketch_edges.insert(inst.sketch.begin(), inst.sketch.end());
    for (const auto& e : sys.net.edges())
        if (e.id.rfind("@o:", 0) == 0) sys.view.embed_edges.insert(e.id);
    sys.rank.assign(sys.net.num_vertices(), 0);
    for (int v = sys.nd; v < sys.net.num_vertices(); ++v) sys.rank[v] = v - sys.nd + 1;
    return sys;
}

}  // namespace

TEST_CASE("linearization identities hold exactly in integer products") {
    for (int trial = 0; trial < 30; ++trial) {
        testing::InstanceOptions opt;
        opt.m = 4;
        auto inst = testing::random_instance(opt, {411u + static_cast<unsigned>(trial), 0});
        LinearizedSystem sys = attach_chain(inst);
        CounterRng rng({57u, static_cast<std::uint64_t>(trial)});
        const int n = sys.net.num_vertices();
        const VSet a = random_subset(n, rng);
        const VSet b = random_subset(n, rng, a);
        const VSet all = sys.net.all_vertices();
        VSet rest_a;
        for (int v : all)
            if (!vset_contains(a, v)) rest_a.push_back(v);

        // cut_L(A) = cut_GS(A) + cut_GS(V\A, A)
        CHECK(cut_size(sys.view, Scope::L, a) ==
              dcut_size(sys.view, sys.rank, a) * dcut_size(sys.view, sys.rank, rest_a, a));
        // cut_L(A,B) = cut_GS(A,B) + cut_GS(B,A)
        if (!a.empty() && !b.empty()) {
            CHECK(cut_size(sys.view, Scope::L, a, b) ==
                  dcut_size(sys.view, sys.rank, a, b) * dcut_size(sys.view, sys.rank, b, a));
            // cut_GS(A∪B) = cut_GS(A)·cut_GS(B)/cut_L(A,B)
            CHECK(dcut_size(sys.view, sys.rank, vset_union(a, b)) *
                      cut_size(sys.view, Scope::L, a, b) ==
                  dcut_size(sys.view, sys.rank, a) * dcut_size(sys.view, sys.rank, b));
        }

        // Lemma-style cost identity: cost_L(A,B) = cut_GS(A) + cut_GS(B)
        //                            + cut_GS(V\(A∪B), A∪B)
        if (!a.empty() && !b.empty()) {
            const VSet ab = vset_union(a, b);
            VSet rest;
            for (int v : all)
                if (!vset_contains(ab, v)) rest.push_back(v);
            const BigInt lhs = cut_size(sys.view, Scope::L, a) * cut_size(sys.view, Scope::L, b);
            const BigInt rhs = dcut_size(sys.view, sys.rank, a) *
                               dcut_size(sys.view, sys.rank, b) *
                               dcut_size(sys.view, sys.rank, rest, ab) *
                               cut_size(sys.view, Scope::L, a, b);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("monotonicity: a vertex above the sketch threshold lifts its set") {
    // On systems whose embedding chain keeps every effective row size >= m,
    // any set containing a vertex with cut_GS(v) >= m also satisfies
    // cut_GS(U) >= m (checked over all subsets of small systems).
    for (int trial = 0; trial < 5; ++trial) {
        testing::InstanceOptions opt;
        opt.min_vertices = 3;
        opt.max_vertices = 4;
        opt.m = 8;
        opt.sketch_lo_factor = 1;
        opt.sketch_hi_factor = 2;
        auto inst = testing::random_instance(opt, {611u + static_cast<unsigned>(trial), 0});
        LinearizedSystem sys = attach_chain(inst);
        // every embedding vertex's effective row = 8 = m; data rows >= m
        const std::int64_t m = 8;
        const int n = sys.net.num_vertices();
        REQUIRE(n <= 10);
        for (int mask = 1; mask < (1 << n); ++mask) {
            VSet u;
            for (int v = 0; v < n; ++v)
                if (mask & (1 << v)) u.push_back(v);
            bool has_big = false;
            for (int v : u)
                if (dcut_size(sys.view, sys.rank, {v}) >= m) has_big = true;
            if (has_big) CHECK(dcut_size(sys.view, sys.rank, u) >= m);
        }
    }
}

TEST_CASE("contraction tree: json round trip and canonical path") {
    TensorNetwork net;
    for (int i = 1; i <= 4; ++i) net.add_vertex("v" + std::to_string(i));
    const nlohmann::json j = nlohmann::json::parse(R"([[["v1","v2"],"v3"],"v4"])");
    const ContractionTree t = ContractionTree::from_json(j, net);
    CHECK(t.num_leaves() == 4);
    CHECK(t.path().size() == 3);
    CHECK(t.path()[0] == std::make_pair(VSet{0}, VSet{1}));
    CHECK(t.path()[1] == std::make_pair(VSet{0, 1}, VSet{2}));
    CHECK(t.path()[2] == std::make_pair(VSet{0, 1, 2}, VSet{3}));
    CHECK(t.to_json(net) == j);
}

TEST_CASE("classify: Kronecker data is all-S with empty D") {
    auto net = kronecker_network(4, 8, 1);
    const auto sketch = default_sketch_edges(net);
    const auto t0 = default_tree(net);
    const auto clf = classify_contractions(net, sketch, t0, 4);
    CHECK(clf.s_set.size() == 3);
    CHECK(clf.i_set.empty());
    for (const auto& d : clf.d) CHECK(d.empty());
    for (std::size_t j = 0; j < clf.x.size(); ++j)
        CHECK(clf.x[j] == VSet{static_cast<int>(j)});
}

TEST_CASE("classify: CP Khatri-Rao chain tree puts all contractions in S") {
    // L_1 network for N = 5 has 4 vertices and 3 contractions.
    TensorNetwork net;
    std::vector<std::string> names;
    for (int j = 2; j <= 5; ++j) {
        names.push_back("v" + std::to_string(j));
        net.add_vertex(names.back());
    }
    for (int j = 2; j <= 5; ++j)
        net.add_edge({"x" + std::to_string(j), {"v" + std::to_string(j)}, true, 9});
    net.add_edge({"r", names, true, 3});
    std::vector<std::string> sketch{"x2", "x3", "x4", "x5"};
    const auto t0 = ContractionTree::chain({3, 2, 1, 0});
    const auto clf = classify_contractions(net, sketch, t0, 4);
    CHECK(clf.s_set.size() == 3);
    CHECK(clf.i_set.empty());
}

TEST_CASE("classify: middle contractions of a sparse-sketch chain fall in I") {
    TensorNetwork net;
    for (int i = 1; i <= 5; ++i) net.add_vertex("v" + std::to_string(i));
    for (int i = 1; i <= 4; ++i)
        net.add_edge({"c" + std::to_string(i),
                      {"v" + std::to_string(i), "v" + std::to_string(i + 1)},
                      false,
                      3});
    net.add_edge({"x1", {"v1"}, true, 16});
    net.add_edge({"x5", {"v5"}, true, 16});
    const std::vector<std::string> sketch{"x1", "x5"};
    // ((v1,v2),((v3,v4),v5)): (v3,v4) touches no sketch edge and lands in I;
    // (v1,v2) and ((v3,v4),v5) grow the two D-chains; the root is in S.
    const ContractionTree t0 = ContractionTree::join(
        ContractionTree::chain({0, 1}), ContractionTree::chain({2, 3, 4}));
    const auto clf = classify_contractions(net, sketch, t0, 8);
    CHECK(clf.d[0].size() == 1);
    CHECK(clf.d[1].size() == 1);
    CHECK(clf.i_set.size() == 1);
    CHECK(clf.s_set.size() == 1);
    CHECK(clf.x[0] == VSet{0, 1});
    CHECK(clf.x[1] == VSet{2, 3, 4});
}

TEST_CASE("classification partitions all contractions") {
    for (int trial = 0; trial < 25; ++trial) {
        testing::InstanceOptions opt;
        opt.uniform_sketch = trial % 2 == 0;
        opt.m = 8;
        auto inst = testing::random_instance(opt, {811u + static_cast<unsigned>(trial), 0});
        const auto clf = classify_contractions(inst.net, inst.sketch, inst.t0, 8);
        std::size_t total = clf.s_set.size() + clf.i_set.size();
        for (const auto& d : clf.d) total += d.size();
        CHECK(total == inst.t0.path().size());
    }
}

TEST_CASE("classify error paths") {
    TensorNetwork net;
    net.add_vertex("a");
    net.add_vertex("b");
    net.add_edge({"x", {"a", "b"}, true, 16});
    const ContractionTree t0 = ContractionTree::chain({0, 1});
    CHECK_THROWS_WITH_AS(classify_contractions(net, {"x"}, t0, 8),
                         doctest::Contains("unsupported sketch dimension"),
                         std::invalid_argument);
    TensorNetwork net2;
    net2.add_vertex("a");
    net2.add_edge({"x", {"a"}, true, 4});
    CHECK_THROWS_WITH_AS(classify_contractions(net2, {"x"}, ContractionTree::leaf(0), 8),
                         doctest::Contains("sketch dimension smaller than sketch size"),
                         std::invalid_argument);
}

TEST_CASE("validate_constrained: identity, swaps, and builder output") {
    auto net = kronecker_network(3, 8, 2);
    const auto t0 = default_tree(net);
    CHECK(validate_constrained(t0, t0, 3));

    // swapped association ((v1,v3),v2) is not constrained on ((v1,v2),v3)
    const ContractionTree swapped = ContractionTree::join(
        ContractionTree::join(ContractionTree::leaf(0), ContractionTree::leaf(2)),
        ContractionTree::leaf(1));
    CHECK_FALSE(validate_constrained(swapped, t0, 3));

    for (int trial = 0; trial < 20; ++trial) {
        testing::InstanceOptions opt;
        opt.uniform_sketch = trial % 2 == 0;
        opt.m = 8;
        auto inst = testing::random_instance(opt, {911u + static_cast<unsigned>(trial), 0});
        auto spec = testing::make_spec(inst, 8);
        auto [emb, plan] = build_alg1_embedding(spec, inst.t0);
        CHECK(validate_constrained(plan.resulting_tree, inst.t0, plan.num_data_vertices));
    }
}

TEST_CASE("dimension tree: 3-vertex example, single edge, CP chain") {
    // leaves {e1},{e2} merge first, then with {e3}
    auto net = kronecker_network(3, 8, 3);
    const auto sketch = default_sketch_edges(net);
    const auto t0 = default_tree(net);
    const auto dt = dimension_tree(net, sketch, t0);
    REQUIRE(dt.root >= 0);
    const auto& root = dt.nodes[dt.root];
    CHECK(root.edges == std::vector<int>{0, 1, 2});
    CHECK(dt.nodes[root.left].edges == std::vector<int>{0, 1});
    CHECK(dt.nodes[root.right].edges == std::vector<int>{2});

    TensorNetwork single;
    single.add_vertex("v");
    single.add_edge({"x1", {"v"}, true, 9});
    const auto dts = dimension_tree(single, {"x1"}, ContractionTree::leaf(0));
    CHECK(dts.nodes[dts.root].is_leaf());

    // CP chain: left-deep dimension tree
    auto net5 = kronecker_network(5, 8, 4);
    const auto dt5 = dimension_tree(net5, default_sketch_edges(net5), default_tree(net5));
    int depth = 0;
    int node = dt5.root;
    while (!dt5.nodes[node].is_leaf()) {
        CHECK(dt5.nodes[dt5.nodes[node].right].is_leaf());
        node = dt5.nodes[node].left;
        ++depth;
    }
    CHECK(depth == 4);
}
