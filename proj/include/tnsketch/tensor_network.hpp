#ifndef TNSKETCH_TENSOR_NETWORK_HPP
#define TNSKETCH_TENSOR_NETWORK_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tnsketch/dense_tensor.hpp"
#include "tnsketch/flops.hpp"
#include "tnsketch/rng.hpp"

namespace tnsketch {

/// Sorted set of vertex indices.
using VSet = std::vector<int>;

VSet vset_union(const VSet& a, const VSet& b);
bool vset_contains(const VSet& a, int v);
bool vset_intersects(const VSet& a, const VSet& b);
bool vset_disjoint(const VSet& a, const VSet& b);

/// Weighted hyperedge. A dangling edge has one free end contributing an
/// output mode; it may still have one or more vertex endpoints (e.g. a rank
/// index shared by several tensors plus a free end).
struct Hyperedge {
    std::string id;
    std::vector<std::string> endpoints;
    bool dangling = false;
    std::int64_t size = 1;

    double log_weight() const;
};

/// Undirected weighted hypergraph with optional dense tensors bound to
/// vertices. A vertex's mode order is the order its incident edges were
/// declared, which fixes the expected tensor layout.
class TensorNetwork {
public:
    int add_vertex(const std::string& name);
    void add_edge(Hyperedge e);
    /// Adds `vertex` as a further endpoint of an existing edge (used when an
    /// embedding attaches to a dangling data edge).
    void attach_endpoint(const std::string& edge_id, const std::string& vertex);
    void set_dangling(const std::string& edge_id, bool dangling);
    void set_edge_size(const std::string& edge_id, std::int64_t size);

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int vertex_index(const std::string& name) const;  // -1 when absent
    const std::string& vertex_name(int v) const { return vertices_.at(v); }
    const std::vector<std::string>& vertex_names() const { return vertices_; }
    VSet all_vertices() const;

    bool has_edge(const std::string& id) const;
    const Hyperedge& edge(const std::string& id) const;
    const std::vector<Hyperedge>& edges() const { return edges_; }
    /// Incident edge ids of vertex v in declared mode order.
    const std::vector<std::string>& modes_of(int v) const { return incidence_.at(v); }
    std::vector<std::int64_t> shape_of(int v) const;
    /// Endpoint indices of an edge.
    VSet edge_vertices(const Hyperedge& e) const;

    void bind_tensor(const std::string& vertex, DenseTensor t);
    bool has_tensor(int v) const;
    const DenseTensor& tensor(int v) const;
    /// Binds uniform [0,1) tensors to every vertex, stream = vertex index.
    void bind_random_uniform(std::uint64_t seed);

    /// Total dense size of the represented tensor (product over dangling
    /// edges).
    BigInt dense_size() const;

    static TensorNetwork from_json(const nlohmann::json& j);
    nlohmann::json to_json(bool include_tensors = false) const;

private:
    std::vector<std::string> vertices_;
    std::map<std::string, int> vertex_index_;
    std::vector<Hyperedge> edges_;
    std::map<std::string, int> edge_index_;
    std::vector<std::vector<std::string>> incidence_;
    std::map<int, DenseTensor> tensors_;
};

/// Splits the modes shared by two component tensors into summed and batch
/// modes: an edge is summed out only when, after fusing the merged set, it
/// has no remaining endpoints and no free end; otherwise it persists as a
/// batch mode counted once.
void split_shared_modes(const TensorNetwork& net, const DenseTensor& ta, const DenseTensor& tb,
                        const VSet& merged, std::vector<std::string>* sum_modes,
                        std::vector<std::string>* batch_modes);

/// Contraction of the tensors at vertex sets A and B (disjoint). Edges fully
/// interior to A∪B with no free end are summed; shared edges that stay open
/// are kept once as batch modes. Returns the contracted tensor and the exact
/// multiply-add count (flops are 2x this).
struct PairContraction {
    DenseTensor tensor;
    BigInt madds;
};
PairContraction contract_pair(const TensorNetwork& net,
                              const std::map<VSet, DenseTensor>& bound, const VSet& a,
                              const VSet& b);

/// Convenience overload on a network with per-vertex tensors bound.
PairContraction contract_pair(const TensorNetwork& net, const VSet& a, const VSet& b);

/// Euclidean norm of the tensor represented by the network, computed by
/// contracting the network against a copy of itself over all dangling modes.
/// The pair order is chosen greedily by modeled cost, so the dense tensor is
/// never materialized when the network admits a cheaper schedule.
double tn_norm(const TensorNetwork& net);

/// Fully contracts a network with bound tensors, greedy pair order. Exposed
/// for norm checks and small experiment drivers.
PairContraction contract_all_greedy(const TensorNetwork& net);

}  // namespace tnsketch

#endif  // TNSKETCH_TENSOR_NETWORK_HPP
