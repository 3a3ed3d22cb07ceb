#ifndef TNSKETCH_CUTS_HPP
#define TNSKETCH_CUTS_HPP

#include <set>
#include <string>
#include <vector>

#include "tnsketch/tensor_network.hpp"

namespace tnsketch {

/// Which edge family a cut query ranges over: the full system G, the data
/// remainder R (everything except sketch and embedding edges), or the
/// embedding side L (sketch edges plus embedding-internal edges).
enum class Scope { G, R, L };

/// A tensor network together with the classification of its edges into data,
/// sketch (the attach set) and embedding-internal families. For a bare data
/// network both id sets are empty except the sketch edges.
struct SystemView {
    const TensorNetwork* net = nullptr;
    std::set<std::string> sketch_edges;
    std::set<std::string> embed_edges;

    bool in_scope(const Hyperedge& e, Scope s) const {
        const bool emb = sketch_edges.count(e.id) || embed_edges.count(e.id);
        if (s == Scope::G) return true;
        return (s == Scope::R) ? !emb : emb;
    }
};

/// Edges adjacent to A that are dangling or leave A (the set E(A)).
std::vector<const Hyperedge*> cut_edges(const SystemView& g, Scope s, const VSet& a);
/// Edges adjacent to both A and B (the set E(A,B)); A and B must be disjoint.
std::vector<const Hyperedge*> cut_edges(const SystemView& g, Scope s, const VSet& a,
                                        const VSet& b);

/// exp(cut(A)) and exp(cut(A,B)) as exact integer size products.
BigInt cut_size(const SystemView& g, Scope s, const VSet& a);
BigInt cut_size(const SystemView& g, Scope s, const VSet& a, const VSet& b);

/// Weighted cuts in the log domain.
double cut_log(const SystemView& g, Scope s, const VSet& a);
double cut_log(const SystemView& g, Scope s, const VSet& a, const VSet& b);

/// Log-domain contraction cost cut(A) + cut(B) - cut(A,B); exp of it equals
/// the modeled size product of contracting A with B.
double cost_pair_log(const SystemView& g, Scope s, const VSet& a, const VSet& b);
BigInt cost_pair_size(const SystemView& g, Scope s, const VSet& a, const VSet& b);

/// Directed cuts on the sketching linearization DAG: only L-scope edges,
/// contracted edges directed toward the higher-ranked vertex, dangling edges
/// directed outward. `rank` maps vertex index to linearization position; all
/// data vertices must rank below all embedding vertices.
BigInt dcut_size(const SystemView& g, const std::vector<int>& rank, const VSet& a);
BigInt dcut_size(const SystemView& g, const std::vector<int>& rank, const VSet& a,
                 const VSet& b);
double dcut_log(const SystemView& g, const std::vector<int>& rank, const VSet& a);
double dcut_log(const SystemView& g, const std::vector<int>& rank, const VSet& a,
                const VSet& b);

}  // namespace tnsketch

#endif  // TNSKETCH_CUTS_HPP
