#include "tnsketch/contraction_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace tnsketch {

ContractionTree ContractionTree::leaf(int v) {
    ContractionTree t;
    t.nodes_.push_back({{v}, -1, -1});
    t.root_ = 0;
    return t;
}

int ContractionTree::clone_into(const ContractionTree& src, int node) {
    const Node& n = src.nodes_[node];
    if (n.is_leaf()) {
        nodes_.push_back(n);
        return static_cast<int>(nodes_.size()) - 1;
    }
    const int l = clone_into(src, n.left);
    const int r = clone_into(src, n.right);
    nodes_.push_back({n.verts, l, r});
    return static_cast<int>(nodes_.size()) - 1;
}

ContractionTree ContractionTree::join(const ContractionTree& a, const ContractionTree& b) {
    ContractionTree t;
    const int l = t.clone_into(a, a.root_);
    const int r = t.clone_into(b, b.root_);
    if (!vset_disjoint(t.nodes_[l].verts, t.nodes_[r].verts))
        throw std::invalid_argument("contraction tree children overlap");
    t.nodes_.push_back({vset_union(t.nodes_[l].verts, t.nodes_[r].verts), l, r});
    t.root_ = static_cast<int>(t.nodes_.size()) - 1;
    t.rebuild_path();
    return t;
}

ContractionTree ContractionTree::chain(const std::vector<int>& order) {
    if (order.empty()) throw std::invalid_argument("empty contraction chain");
    ContractionTree t = leaf(order[0]);
    for (std::size_t i = 1; i < order.size(); ++i) t = join(t, leaf(order[i]));
    t.rebuild_path();
    return t;
}

namespace {

nlohmann::json node_to_json(const ContractionTree& t, int idx, const TensorNetwork& net) {
    const auto& n = t.node(idx);
    if (n.is_leaf()) return net.vertex_name(n.verts[0]);
    return nlohmann::json::array({node_to_json(t, n.left, net), node_to_json(t, n.right, net)});
}

}  // namespace

ContractionTree ContractionTree::from_json(const nlohmann::json& j, const TensorNetwork& net) {
    if (j.is_string()) {
        const int v = net.vertex_index(j.get<std::string>());
        if (v < 0) throw std::invalid_argument("tree references unknown vertex " + j.get<std::string>());
        return leaf(v);
    }
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("tree nodes must be vertex names or 2-element arrays");
    return join(from_json(j[0], net), from_json(j[1], net));
}

nlohmann::json ContractionTree::to_json(const TensorNetwork& net) const {
    return node_to_json(*this, root_, net);
}

int ContractionTree::num_leaves() const {
    int n = 0;
    for (const auto& node : nodes_)
        if (node.is_leaf()) ++n;
    return n;
}

void ContractionTree::rebuild_path() {
    path_.clear();
    // Left-first post-order over internal nodes.
    std::vector<std::pair<int, bool>> stack{{root_, false}};
    std::vector<int> order;
    while (!stack.empty()) {
        auto [idx, expanded] = stack.back();
        stack.pop_back();
        const Node& n = nodes_[idx];
        if (n.is_leaf()) continue;
        if (expanded) {
            order.push_back(idx);
        } else {
            stack.push_back({idx, true});
            stack.push_back({n.right, false});
            stack.push_back({n.left, false});
        }
    }
    for (int idx : order) path_.push_back({nodes_[nodes_[idx].left].verts, nodes_[nodes_[idx].right].verts});
    validate();
}

void ContractionTree::validate() const {
    for (const auto& n : nodes_) {
        if (n.is_leaf()) {
            if (n.verts.size() != 1) throw std::invalid_argument("tree leaf must be a singleton");
        } else {
            if (!vset_disjoint(nodes_[n.left].verts, nodes_[n.right].verts))
                throw std::invalid_argument("tree children overlap");
            if (vset_union(nodes_[n.left].verts, nodes_[n.right].verts) != n.verts)
                throw std::invalid_argument("tree children do not cover parent");
        }
    }
}

bool validate_constrained(const ContractionTree& tb, const ContractionTree& t0,
                          int num_data_vertices) {
    auto restrict_data = [num_data_vertices](const VSet& s) {
        VSet out;
        for (int v : s)
            if (v < num_data_vertices) out.push_back(v);
        return out;
    };
    for (const auto& [a, b] : t0.path()) {
        bool found = false;
        for (const auto& [ta, tbb] : tb.path()) {
            const VSet ra = restrict_data(ta);
            const VSet rb = restrict_data(tbb);
            if ((ra == a && rb == b) || (ra == b && rb == a)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace tnsketch
