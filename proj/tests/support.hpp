#ifndef TNSKETCH_TESTS_SUPPORT_HPP
#define TNSKETCH_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "tnsketch/contraction_tree.hpp"
#include "tnsketch/embedding.hpp"
#include "tnsketch/rng.hpp"
#include "tnsketch/tensor_network.hpp"

namespace tnsketch::testing {

inline std::int64_t pick(CounterRng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Random binary contraction tree over vertices 0..n-1.
inline ContractionTree random_tree(int n, CounterRng& rng) {
    std::vector<ContractionTree> frags;
    for (int v = 0; v < n; ++v) frags.push_back(ContractionTree::leaf(v));
    while (frags.size() > 1) {
        const std::size_t i = static_cast<std::size_t>(pick(rng, 0, static_cast<std::int64_t>(frags.size()) - 1));
        std::size_t j = static_cast<std::size_t>(pick(rng, 0, static_cast<std::int64_t>(frags.size()) - 2));
        if (j >= i) ++j;
        ContractionTree joined = ContractionTree::join(frags[i], frags[j]);
        frags.erase(frags.begin() + static_cast<std::ptrdiff_t>(std::max(i, j)));
        frags.erase(frags.begin() + static_cast<std::ptrdiff_t>(std::min(i, j)));
        frags.push_back(std::move(joined));
    }
    return frags.front();
}

struct InstanceOptions {
    int min_vertices = 3;
    int max_vertices = 8;
    bool uniform_sketch = true;   // every vertex carries a sketch edge
    bool graph_only = false;      // no hyperedges, no shared dangling edges
    std::int64_t m = 64;
    std::int64_t edge_lo = 2, edge_hi = 6;
    std::int64_t sketch_lo_factor = 1, sketch_hi_factor = 4;  // sizes in m*[lo,hi]
    bool bind_tensors = false;
    std::int64_t max_dense = 1000000;  // resample until the dense size fits (bound case)
};

struct RandomInstance {
    TensorNetwork net;
    std::vector<std::string> sketch;
    ContractionTree t0;
};

inline RandomInstance random_instance_once(const InstanceOptions& opt, CounterRng& rng) {
    RandomInstance inst;
    const int n = static_cast<int>(pick(rng, opt.min_vertices, opt.max_vertices));
    for (int v = 0; v < n; ++v) inst.net.add_vertex("v" + std::to_string(v + 1));

    int edge_id = 0;
    auto next_id = [&]() { return "d" + std::to_string(++edge_id); };

    // Connect the vertices with a random spanning sequence of contracted
    // edges, then a few extras.
    for (int v = 1; v < n; ++v) {
        const int u = static_cast<int>(pick(rng, 0, v - 1));
        inst.net.add_edge({next_id(),
                           {"v" + std::to_string(u + 1), "v" + std::to_string(v + 1)},
                           false,
                           pick(rng, opt.edge_lo, opt.edge_hi)});
    }
    const int extras = static_cast<int>(pick(rng, 0, 2));
    for (int e = 0; e < extras && n >= 2; ++e) {
        const int u = static_cast<int>(pick(rng, 0, n - 1));
        int v = static_cast<int>(pick(rng, 0, n - 2));
        if (v >= u) ++v;
        std::vector<std::string> eps{"v" + std::to_string(u + 1), "v" + std::to_string(v + 1)};
        if (!opt.graph_only && n >= 3 && pick(rng, 0, 1) == 1) {
            int w = static_cast<int>(pick(rng, 0, n - 1));
            if (w != u && w != v) eps.push_back("v" + std::to_string(w + 1));
        }
        inst.net.add_edge({next_id(), eps, false, pick(rng, opt.edge_lo, opt.edge_hi)});
    }
    // Occasionally a shared dangling hyperedge (a batch output mode).
    if (!opt.graph_only && n >= 2 && pick(rng, 0, 2) == 0) {
        const int u = static_cast<int>(pick(rng, 0, n - 1));
        int v = static_cast<int>(pick(rng, 0, n - 2));
        if (v >= u) ++v;
        inst.net.add_edge({next_id(),
                           {"v" + std::to_string(u + 1), "v" + std::to_string(v + 1)},
                           true,
                           pick(rng, opt.edge_lo, opt.edge_hi)});
    }

    // Sketch edges.
    for (int v = 0; v < n; ++v) {
        const bool take = opt.uniform_sketch || pick(rng, 0, 9) < 6;
        if (!take) continue;
        const std::string id = "x" + std::to_string(v + 1);
        inst.net.add_edge({id,
                           {"v" + std::to_string(v + 1)},
                           true,
                           opt.m * pick(rng, opt.sketch_lo_factor, opt.sketch_hi_factor)});
        inst.sketch.push_back(id);
    }
    if (inst.sketch.empty()) {
        inst.net.add_edge({"x1", {"v1"}, true, opt.m * opt.sketch_lo_factor});
        inst.sketch.push_back("x1");
    }
    inst.t0 = random_tree(n, rng);
    return inst;
}

inline RandomInstance random_instance(const InstanceOptions& opt, RandomSource src) {
    CounterRng rng(src);
    for (int attempt = 0; attempt < 64; ++attempt) {
        RandomInstance inst = random_instance_once(opt, rng);
        if (opt.bind_tensors) {
            if (inst.net.dense_size() > opt.max_dense) continue;
            BigInt biggest = 1;
            for (int v = 0; v < inst.net.num_vertices(); ++v) {
                BigInt sz = 1;
                for (auto s : inst.net.shape_of(v)) sz *= s;
                if (sz > biggest) biggest = sz;
            }
            if (biggest > opt.max_dense) continue;
            inst.net.bind_random_uniform(src.seed * 77 + src.stream);
        }
        return inst;
    }
    throw std::runtime_error("could not generate an instance within the size budget");
}

/// Independent loop-count oracle: counts multiply-adds of a pairwise
/// contraction by explicit iteration over all index tuples.
inline std::int64_t loop_count_madds(const std::vector<std::int64_t>& batch,
                                     const std::vector<std::int64_t>& a_only,
                                     const std::vector<std::int64_t>& b_only,
                                     const std::vector<std::int64_t>& summed) {
    std::vector<std::int64_t> all;
    all.insert(all.end(), batch.begin(), batch.end());
    all.insert(all.end(), a_only.begin(), a_only.end());
    all.insert(all.end(), b_only.begin(), b_only.end());
    all.insert(all.end(), summed.begin(), summed.end());
    std::int64_t count = 0;
    std::vector<std::int64_t> idx(all.size(), 0);
    for (;;) {
        ++count;
        int d = static_cast<int>(all.size()) - 1;
        for (; d >= 0; --d) {
            if (++idx[static_cast<std::size_t>(d)] < all[static_cast<std::size_t>(d)]) break;
            idx[static_cast<std::size_t>(d)] = 0;
        }
        if (d < 0) break;
    }
    return count;
}

inline SketchSpec make_spec(const RandomInstance& inst, std::int64_t m) {
    SketchSpec spec;
    spec.data = inst.net;
    spec.sketch_edges = inst.sketch;
    spec.sketch_size = m;
    return spec;
}

}  // namespace tnsketch::testing

#endif  // TNSKETCH_TESTS_SUPPORT_HPP
