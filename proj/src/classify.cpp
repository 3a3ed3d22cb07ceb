#include "tnsketch/classify.hpp"

#include <algorithm>
#include <stdexcept>

namespace tnsketch {

namespace {

// Sketch-edge positions adjacent to a vertex set.
std::vector<int> adjacent_sketch(const TensorNetwork& data,
                                 const std::vector<std::string>& sketch_edges, const VSet& w) {
    std::vector<int> out;
    for (std::size_t j = 0; j < sketch_edges.size(); ++j) {
        const Hyperedge& e = data.edge(sketch_edges[j]);
        for (const auto& p : e.endpoints) {
            if (vset_contains(w, data.vertex_index(p))) {
                out.push_back(static_cast<int>(j));
                break;
            }
        }
    }
    return out;
}

}  // namespace

Classification classify_contractions(const TensorNetwork& data,
                                     const std::vector<std::string>& sketch_edges,
                                     const ContractionTree& t0, std::int64_t m) {
    for (const auto& id : sketch_edges) {
        const Hyperedge& e = data.edge(id);
        if (!e.dangling)
            throw std::invalid_argument("unsupported sketch dimension: " + id + " is not dangling");
        if (data.edge_vertices(e).size() != 1)
            throw std::invalid_argument("unsupported sketch dimension: " + id +
                                        " is shared by several vertices");
        if (e.size < m)
            throw std::invalid_argument("sketch dimension smaller than sketch size: " + id);
    }

    Classification clf;
    clf.d.assign(sketch_edges.size(), {});
    clf.x.assign(sketch_edges.size(), {});

    const auto& path = t0.path();
    for (std::size_t i = 0; i < path.size(); ++i) {
        const auto& [u, v] = path[i];
        const auto su = adjacent_sketch(data, sketch_edges, u);
        const auto sv = adjacent_sketch(data, sketch_edges, v);
        if (!su.empty() && !sv.empty()) {
            clf.s_set.push_back(static_cast<int>(i));
            continue;
        }
        const auto& merged = su.empty() ? sv : su;
        if (merged.size() == 1) {
            clf.d[merged[0]].push_back(static_cast<int>(i));
            clf.x[merged[0]] = vset_union(u, v);
        } else {
            clf.i_set.push_back(static_cast<int>(i));
        }
    }
    for (std::size_t j = 0; j < sketch_edges.size(); ++j) {
        if (clf.d[j].empty()) {
            const Hyperedge& e = data.edge(sketch_edges[j]);
            clf.x[j] = data.edge_vertices(e);
        }
    }
    return clf;
}

namespace {

struct DimBuilder {
    const TensorNetwork& data;
    const std::vector<std::string>& sketch_edges;
    DimensionTree tree;

    int add_node(std::vector<int> edges, int l, int r) {
        tree.nodes.push_back({std::move(edges), l, r});
        return static_cast<int>(tree.nodes.size()) - 1;
    }

    // Returns the dimension-tree node for a contraction-tree node, or -1 when
    // the subset touches no sketch edge.
    int build(const ContractionTree& t0, int idx) {
        const auto& n = t0.node(idx);
        const auto adj = adjacent_sketch(data, sketch_edges, n.verts);
        if (adj.empty()) return -1;
        if (n.is_leaf()) return add_node(adj, -1, -1);
        const int l = build(t0, n.left);
        const int r = build(t0, n.right);
        if (l >= 0 && r >= 0) {
            std::vector<int> merged = tree.nodes[l].edges;
            merged.insert(merged.end(), tree.nodes[r].edges.begin(), tree.nodes[r].edges.end());
            std::sort(merged.begin(), merged.end());
            return add_node(std::move(merged), l, r);
        }
        return l >= 0 ? l : r;
    }
};

}  // namespace

DimensionTree dimension_tree(const TensorNetwork& data,
                             const std::vector<std::string>& sketch_edges,
                             const ContractionTree& t0) {
    DimBuilder b{data, sketch_edges, {}};
    b.tree.root = b.build(t0, t0.root());
    return b.tree;
}

}  // namespace tnsketch
