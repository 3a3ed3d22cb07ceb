#include "tnsketch/cuts.hpp"

#include <cmath>
#include <stdexcept>

namespace tnsketch {

namespace {

bool touches(const SystemView& g, const Hyperedge& e, const VSet& a) {
    for (const auto& p : e.endpoints)
        if (vset_contains(a, g.net->vertex_index(p))) return true;
    return false;
}

bool leaves(const SystemView& g, const Hyperedge& e, const VSet& a) {
    if (e.dangling) return true;
    for (const auto& p : e.endpoints)
        if (!vset_contains(a, g.net->vertex_index(p))) return true;
    return false;
}

BigInt product_of(const std::vector<const Hyperedge*>& edges) {
    BigInt p = 1;
    for (const auto* e : edges) p *= e->size;
    return p;
}

double log_of(const std::vector<const Hyperedge*>& edges) {
    double s = 0.0;
    for (const auto* e : edges) s += e->log_weight();
    return s;
}

// Tail/head of a contracted L-edge under the linearization ranks.
std::pair<int, int> directed_endpoints(const SystemView& g, const std::vector<int>& rank,
                                       const Hyperedge& e) {
    if (e.endpoints.size() != 2)
        throw std::invalid_argument("linearization requires graph edges, got " + e.id);
    const int u = g.net->vertex_index(e.endpoints[0]);
    const int v = g.net->vertex_index(e.endpoints[1]);
    if (rank.at(u) == rank.at(v))
        throw std::invalid_argument("ambiguous direction for edge " + e.id);
    return rank[u] < rank[v] ? std::make_pair(u, v) : std::make_pair(v, u);
}

}  // namespace

std::vector<const Hyperedge*> cut_edges(const SystemView& g, Scope s, const VSet& a) {
    std::vector<const Hyperedge*> out;
    for (const auto& e : g.net->edges())
        if (g.in_scope(e, s) && touches(g, e, a) && leaves(g, e, a)) out.push_back(&e);
    return out;
}

std::vector<const Hyperedge*> cut_edges(const SystemView& g, Scope s, const VSet& a,
                                        const VSet& b) {
    if (!vset_disjoint(a, b)) throw std::invalid_argument("invalid cut query: sets overlap");
    std::vector<const Hyperedge*> out;
    for (const auto& e : g.net->edges())
        if (g.in_scope(e, s) && touches(g, e, a) && touches(g, e, b)) out.push_back(&e);
    return out;
}

BigInt cut_size(const SystemView& g, Scope s, const VSet& a) { return product_of(cut_edges(g, s, a)); }

BigInt cut_size(const SystemView& g, Scope s, const VSet& a, const VSet& b) {
    return product_of(cut_edges(g, s, a, b));
}

double cut_log(const SystemView& g, Scope s, const VSet& a) { return log_of(cut_edges(g, s, a)); }

double cut_log(const SystemView& g, Scope s, const VSet& a, const VSet& b) {
    return log_of(cut_edges(g, s, a, b));
}

double cost_pair_log(const SystemView& g, Scope s, const VSet& a, const VSet& b) {
    return cut_log(g, s, a) + cut_log(g, s, b) - cut_log(g, s, a, b);
}

BigInt cost_pair_size(const SystemView& g, Scope s, const VSet& a, const VSet& b) {
    // cut(A,B) ⊆ cut(A) ∩ cut(B), so assemble the product from disjoint parts
    // instead of dividing.
    const auto shared = cut_edges(g, s, a, b);
    auto in_shared = [&shared](const Hyperedge* e) {
        for (const auto* se : shared)
            if (se == e) return true;
        return false;
    };
    BigInt p = product_of(shared);
    for (const auto* e : cut_edges(g, s, a))
        if (!in_shared(e)) p *= e->size;
    for (const auto* e : cut_edges(g, s, b))
        if (!in_shared(e)) p *= e->size;
    return p;
}

BigInt dcut_size(const SystemView& g, const std::vector<int>& rank, const VSet& a) {
    BigInt p = 1;
    for (const auto& e : g.net->edges()) {
        if (!g.in_scope(e, Scope::L)) continue;
        if (e.dangling) {
            if (touches(g, e, a)) p *= e.size;
        } else {
            const auto [tail, head] = directed_endpoints(g, rank, e);
            if (vset_contains(a, tail) && !vset_contains(a, head)) p *= e.size;
        }
    }
    return p;
}

BigInt dcut_size(const SystemView& g, const std::vector<int>& rank, const VSet& a,
                 const VSet& b) {
    if (!vset_disjoint(a, b)) throw std::invalid_argument("invalid cut query: sets overlap");
    BigInt p = 1;
    for (const auto& e : g.net->edges()) {
        if (!g.in_scope(e, Scope::L) || e.dangling) continue;
        const auto [tail, head] = directed_endpoints(g, rank, e);
        if (vset_contains(a, tail) && vset_contains(b, head)) p *= e.size;
    }
    return p;
}

double dcut_log(const SystemView& g, const std::vector<int>& rank, const VSet& a) {
    double s = 0.0;
    for (const auto& e : g.net->edges()) {
        if (!g.in_scope(e, Scope::L)) continue;
        if (e.dangling) {
            if (touches(g, e, a)) s += e.log_weight();
        } else {
            const auto [tail, head] = directed_endpoints(g, rank, e);
            if (vset_contains(a, tail) && !vset_contains(a, head)) s += e.log_weight();
        }
    }
    return s;
}

double dcut_log(const SystemView& g, const std::vector<int>& rank, const VSet& a,
                const VSet& b) {
    if (!vset_disjoint(a, b)) throw std::invalid_argument("invalid cut query: sets overlap");
    double s = 0.0;
    for (const auto& e : g.net->edges()) {
        if (!g.in_scope(e, Scope::L) || e.dangling) continue;
        const auto [tail, head] = directed_endpoints(g, rank, e);
        if (vset_contains(a, tail) && vset_contains(b, head)) s += e.log_weight();
    }
    return s;
}

}  // namespace tnsketch
