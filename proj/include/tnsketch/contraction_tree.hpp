#ifndef TNSKETCH_CONTRACTION_TREE_HPP
#define TNSKETCH_CONTRACTION_TREE_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tnsketch/tensor_network.hpp"

namespace tnsketch {

/// Rooted binary tree over vertex subsets. Leaves are singletons, the root
/// covers all participating vertices, and sibling subsets partition their
/// parent. The canonical contraction path is the left-first post-order of the
/// internal nodes.
class ContractionTree {
public:
    struct Node {
        VSet verts;
        int left = -1;
        int right = -1;
        bool is_leaf() const { return left < 0; }
    };

    ContractionTree() = default;

    static ContractionTree leaf(int v);
    /// Joins two trees under a new root.
    static ContractionTree join(const ContractionTree& a, const ContractionTree& b);
    /// Left-deep chain in the given vertex order.
    static ContractionTree chain(const std::vector<int>& order);
    /// Nested-array serialization over vertex names, e.g. [[["v1","v2"],"v3"],"v4"].
    static ContractionTree from_json(const nlohmann::json& j, const TensorNetwork& net);

    int root() const { return root_; }
    const Node& node(int i) const { return nodes_.at(i); }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    const VSet& vertices() const { return nodes_.at(root_).verts; }
    int num_leaves() const;

    /// Contractions (U_i, V_i) in canonical topological order.
    const std::vector<std::pair<VSet, VSet>>& path() const { return path_; }

    nlohmann::json to_json(const TensorNetwork& net) const;

private:
    std::vector<Node> nodes_;
    int root_ = -1;
    std::vector<std::pair<VSet, VSet>> path_;

    int clone_into(const ContractionTree& src, int node);
    void rebuild_path();
    void validate() const;
};

/// Definition check for constrained contraction trees: every contraction
/// (A, B) of t0 must have a contraction (A', B') in tb whose restrictions to
/// the data vertices equal {A, B}. Data vertices are the indices below
/// num_data_vertices.
bool validate_constrained(const ContractionTree& tb, const ContractionTree& t0,
                          int num_data_vertices);

}  // namespace tnsketch

#endif  // TNSKETCH_CONTRACTION_TREE_HPP
