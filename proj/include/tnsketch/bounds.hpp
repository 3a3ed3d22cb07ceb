#ifndef TNSKETCH_BOUNDS_HPP
#define TNSKETCH_BOUNDS_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "tnsketch/classify.hpp"
#include "tnsketch/contraction_tree.hpp"
#include "tnsketch/cuts.hpp"
#include "tnsketch/tensor_network.hpp"

namespace tnsketch {

/// Per-contraction size labels on the data remainder graph R (data edges
/// minus sketch edges): a and c are the two sides' exclusive open dims, b the
/// contracted dims between them, d the open dims shared by both sides.
struct ContractionLabels {
    BigInt a = 1, b = 1, c = 1, d = 1;
    bool u_sketch_adjacent = false;
    bool v_sketch_adjacent = false;

    BigInt abcd() const { return a * b * c * d; }
};

ContractionLabels labels(const TensorNetwork& data,
                         const std::vector<std::string>& sketch_edges,
                         const ContractionTree& t0, int i);

/// Modeled cost of sketching an S-contraction with the two-tensor small
/// network: abcd·m^2 + m^2·d·ceil(sqrt(abc·m·min(a,c))).
BigInt y_cost(const ContractionLabels& l, std::int64_t m);

/// Modeled cost of executing an I-contraction: abcd, times m when sketch
/// edges touch the contraction (their dims have been reduced to m by then).
BigInt z_cost(const ContractionLabels& l, bool has_adjacent_sketch_edges, std::int64_t m);

/// Optimal Kronecker-stage cost for sketch edge j: minimum over placements k
/// of f(k), where k = 0 sketches the edge's vertex directly and k = l applies
/// the matrix right before the l-th contraction of the edge's D-chain.
struct SttResult {
    BigInt cost = 0;
    int k_opt = 0;
    std::vector<BigInt> f;  // f[k] for k = 0..|D(e_j)|
};

SttResult stt_cost(const TensorNetwork& data, const std::vector<std::string>& sketch_edges,
                   const ContractionTree& t0, const Classification& clf, int j,
                   std::int64_t m);

/// Lower bound for data where every vertex carries a sketch edge:
/// Σ_j exp(cut_G(v_j))·m + Σ_i y_i. Throws "uniform lower bound inapplicable"
/// when the hypothesis fails.
BigInt lower_bound_uniform(const TensorNetwork& data,
                           const std::vector<std::string>& sketch_edges,
                           const ContractionTree& t0, std::int64_t m);

/// General lower bound: Σ_j stt_j + Σ_S abcd·m^2 + N·m^2.5 + Σ_I z_i.
BigInt lower_bound_general(const TensorNetwork& data,
                           const std::vector<std::string>& sketch_edges,
                           const ContractionTree& t0, std::int64_t m);

double approx_ratio(const BigInt& achieved, const TensorNetwork& data,
                    const std::vector<std::string>& sketch_edges, const ContractionTree& t0,
                    std::int64_t m);

/// True when every vertex touches a sketch edge and every S-contraction
/// contracts dims of total size at least m (the regime where the single
/// tensor per merge is as good as the small network).
bool tree_optimal(const TensorNetwork& data, const std::vector<std::string>& sketch_edges,
                  const ContractionTree& t0, std::int64_t m);

/// Cost summary for one (data, tree, m) instance: formula terms, bounds, and
/// the achieved flop decomposition supplied by the plan.
struct CostReport {
    BigInt achieved_flops = 0;
    BigInt achieved_kron = 0, achieved_s = 0, achieved_i = 0, achieved_other = 0;
    BigInt term_kron = 0, term_s = 0, term_i = 0;
    bool uniform_applicable = false;
    BigInt lb_uniform = 0;
    BigInt lb_general = 0;
    double ratio = 0.0;          // achieved / max(lb_general, 1)
    double ratio_uniform = 0.0;  // achieved / lb_uniform, when applicable
    bool is_tree_optimal = false;
    nlohmann::json per_contraction = nlohmann::json::array();

    nlohmann::json to_json() const;
};

/// Assembles the report; achieved buckets come from a built or executed plan.
CostReport make_cost_report(const TensorNetwork& data,
                            const std::vector<std::string>& sketch_edges,
                            const ContractionTree& t0, std::int64_t m,
                            const BigInt& achieved_flops, const BigInt& achieved_kron,
                            const BigInt& achieved_s, const BigInt& achieved_i,
                            const BigInt& achieved_other);

}  // namespace tnsketch

#endif  // TNSKETCH_BOUNDS_HPP
