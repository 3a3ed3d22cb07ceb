#ifndef TNSKETCH_CLASSIFY_HPP
#define TNSKETCH_CLASSIFY_HPP

#include <string>
#include <vector>

#include "tnsketch/contraction_tree.hpp"
#include "tnsketch/tensor_network.hpp"

namespace tnsketch {

/// Partition of a data contraction tree's contractions relative to the
/// sketch edges. Indices refer to positions in t0.path().
///   - s_set: both sides adjacent to sketch edges.
///   - d[j]:  contractions whose output is adjacent to exactly sketch edge j,
///            ascending (they form a prefix of the ancestor chain of the
///            vertex carrying edge j).
///   - i_set: everything else.
struct Classification {
    std::vector<std::vector<int>> d;
    std::vector<int> s_set;
    std::vector<int> i_set;
    /// Per sketch edge: the sub network contracted by d[j]; the singleton
    /// holding the edge when d[j] is empty.
    std::vector<VSet> x;
};

/// Throws "unsupported sketch dimension" when a sketch edge touches more than
/// one vertex and "sketch dimension smaller than sketch size" when an edge
/// size is below m.
Classification classify_contractions(const TensorNetwork& data,
                                     const std::vector<std::string>& sketch_edges,
                                     const ContractionTree& t0, std::int64_t m);

/// Directed binary tree over subsets of the sketch edges showing how they
/// merge onto common tensors along t0. Leaves are single sketch edges.
struct DimensionTree {
    struct Node {
        std::vector<int> edges;  // sketch-edge positions, sorted
        int left = -1;
        int right = -1;
        bool is_leaf() const { return left < 0; }
    };
    std::vector<Node> nodes;
    int root = -1;
};

DimensionTree dimension_tree(const TensorNetwork& data,
                             const std::vector<std::string>& sketch_edges,
                             const ContractionTree& t0);

}  // namespace tnsketch

#endif  // TNSKETCH_CLASSIFY_HPP
