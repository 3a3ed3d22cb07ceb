#ifndef TNSKETCH_EMBEDDING_HPP
#define TNSKETCH_EMBEDDING_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tnsketch/bounds.hpp"
#include "tnsketch/classify.hpp"
#include "tnsketch/contraction_tree.hpp"
#include "tnsketch/tensor_network.hpp"

namespace tnsketch {

/// What to sketch: a data network, the ordered dangling edges to reduce, and
/// the target sketch size.
struct SketchSpec {
    TensorNetwork data;
    std::vector<std::string> sketch_edges;
    std::int64_t sketch_size = 0;
    double epsilon = 0.0;  // advisory only
    double delta = 0.0;    // advisory only
    bool strict_accuracy = false;

    void validate() const;
    /// Reads the shared network-file schema ("vertices"/"edges"/"sketch_edges").
    static SketchSpec from_json(const nlohmann::json& j, std::int64_t m);
    /// epsilon implied by m at fixed delta, sqrt(N_E ln(1/delta) / m);
    /// reported for reference only since the underlying bound has no constant.
    double implied_epsilon(int num_embedding_vertices) const;
};

/// A Gaussian tensor-network embedding: its graph, where it attaches to the
/// data, its output sketch dimensions, a vertex ordering (application order),
/// and the per-tensor variance making each linearized factor norm-unbiased.
struct Embedding {
    TensorNetwork network;  // embedding vertices only; attach/output edges dangle
    std::vector<std::string> attach_edges;
    std::vector<std::string> output_edges;
    std::vector<std::string> linearization;
    std::map<std::string, double> variances;

    nlohmann::json to_json() const;
};

enum class PlanStage { Kron, S, I, Other };

/// One schedule entry. Contract covers plain data contractions; ContractSketch
/// covers steps that apply embedding tensors. The primitive pairwise
/// contractions realizing the step carry exact modeled size products.
struct PlanStep {
    enum class Kind { Contract, ContractSketch };
    struct Prim {
        VSet a, b;
        BigInt product;
    };

    Kind kind = Kind::Contract;
    PlanStage stage = PlanStage::Other;
    VSet a, b;
    std::vector<std::string> embedding_vertices;
    std::vector<Prim> prims;

    BigInt madds() const;
};

/// Interleaved contraction/sketch schedule over the merged data+embedding
/// system. Data vertices occupy indices [0, num_data_vertices).
struct SketchPlan {
    TensorNetwork system;
    int num_data_vertices = 0;
    std::vector<PlanStep> steps;
    BigInt total_flops = 0;  // 2 flops per scalar multiply-add
    BigInt flops_kron = 0, flops_s = 0, flops_i = 0, flops_other = 0;
    ContractionTree resulting_tree;

    std::vector<BigInt> per_step_flops() const;
};

/// Internal-edge size of the two-tensor small network sketching an
/// S-contraction: clamp(round(sqrt(max(a,c)·m/b)), 1, m). Balances the two
/// dominant step costs; every step then stays within a constant of y_cost.
std::int64_t zi_internal_edge(const BigInt& a, const BigInt& b, const BigInt& c,
                              const BigInt& d, std::int64_t m);

std::pair<Embedding, SketchPlan> build_alg1_embedding(const SketchSpec& spec,
                                                      const ContractionTree& t0);
std::pair<Embedding, SketchPlan> build_tree_embedding(const SketchSpec& spec,
                                                      const ContractionTree& t0);
/// Chain of Gaussian tensors with all internal ranks m and the output at the
/// last core.
Embedding build_tt_embedding(const SketchSpec& spec);
SketchPlan tt_sketch_plan(const SketchSpec& spec, const ContractionTree& t0,
                          const Embedding& emb);
/// Experimental baseline: per-edge matrices joined by one shared m-sized
/// hyperedge with a free end; applied via Hadamard products. Not a graph
/// embedding, so the accuracy condition does not apply; variances are set to
/// m^(-1/N) per tensor to keep E|Sx|^2 = |x|^2.
Embedding build_khatri_rao_embedding(const SketchSpec& spec);
SketchPlan khatri_rao_sketch_plan(const SketchSpec& spec, const ContractionTree& t0,
                                  const Embedding& emb);

enum class EmbeddingKind { Tn, Tree, Tt, KhatriRao };
EmbeddingKind embedding_kind_from_string(const std::string& s);
std::string to_string(EmbeddingKind kind);
std::pair<Embedding, SketchPlan> build_embedding(EmbeddingKind kind, const SketchSpec& spec,
                                                 const ContractionTree& t0);

/// Sufficient-condition check: searches for a linearization in which every
/// embedding tensor's effective sketch row size is at least m (the embedding
/// application order first, then reverse BFS from the output, then all
/// permutations when the embedding has at most 8 vertices).
struct ConditionReport {
    bool ok = false;
    std::vector<std::string> ordering;
    std::vector<std::string> failing;
};
ConditionReport check_sufficient_condition(const Embedding& emb, std::int64_t m);

/// Deterministic embedding tensors; stream id is the linearization position.
std::map<std::string, DenseTensor> embedding_tensors(const Embedding& emb, RandomSource rng);

struct ExecutionResult {
    DenseTensor tensor;  // output sketch mode first, then remaining dangling modes
    BigInt total_flops = 0;
    std::vector<BigInt> step_flops;
};
ExecutionResult execute_plan(const SketchPlan& plan, const SketchSpec& spec,
                             const Embedding& emb, RandomSource rng);

/// Explicit tensor of a network with bound tensors (modes: dangling edges),
/// via the reference contraction path. Throws "oracle too large" past the
/// entry limit.
DenseTensor materialize_dense(const TensorNetwork& net,
                              std::int64_t max_entries = 10000000);
/// Explicit matrix of an embedding (modes: output edges, then attach edges).
DenseTensor materialize_dense(const Embedding& emb, RandomSource rng,
                              std::int64_t max_entries = 10000000);

/// Cost report for a built plan (bounds, formula terms, achieved buckets).
CostReport plan_cost_report(const SketchPlan& plan, const SketchSpec& spec,
                            const ContractionTree& t0);

}  // namespace tnsketch

#endif  // TNSKETCH_EMBEDDING_HPP
