#include "tnsketch/bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace tnsketch {

namespace {

SystemView data_view(const TensorNetwork& data, const std::vector<std::string>& sketch_edges) {
    SystemView g;
    g.net = &data;
    g.sketch_edges.insert(sketch_edges.begin(), sketch_edges.end());
    return g;
}

bool side_sketch_adjacent(const SystemView& g, const VSet& side) {
    for (const auto& id : g.sketch_edges) {
        const Hyperedge& e = g.net->edge(id);
        for (const auto& p : e.endpoints)
            if (vset_contains(side, g.net->vertex_index(p))) return true;
    }
    return false;
}

BigInt product_excluding(const std::vector<const Hyperedge*>& edges,
                         const std::vector<const Hyperedge*>& excluded) {
    BigInt p = 1;
    for (const auto* e : edges) {
        if (std::find(excluded.begin(), excluded.end(), e) == excluded.end()) p *= e->size;
    }
    return p;
}

}  // namespace

ContractionLabels labels(const TensorNetwork& data,
                         const std::vector<std::string>& sketch_edges,
                         const ContractionTree& t0, int i) {
    const SystemView g = data_view(data, sketch_edges);
    const auto& [u, v] = t0.path().at(i);
    const auto eu = cut_edges(g, Scope::R, u);
    const auto ev = cut_edges(g, Scope::R, v);
    const auto euv = cut_edges(g, Scope::R, u, v);
    const auto eunion = cut_edges(g, Scope::R, vset_union(u, v));

    ContractionLabels l;
    l.a = product_excluding(eu, euv);
    l.c = product_excluding(ev, euv);
    l.d = 1;
    l.b = 1;
    for (const auto* e : euv) {
        if (std::find(eunion.begin(), eunion.end(), e) != eunion.end()) l.d *= e->size;
        else l.b *= e->size;
    }
    l.u_sketch_adjacent = side_sketch_adjacent(g, u);
    l.v_sketch_adjacent = side_sketch_adjacent(g, v);
    return l;
}

BigInt y_cost(const ContractionLabels& l, std::int64_t m) {
    const BigInt m2 = BigInt(m) * m;
    const BigInt root = isqrt_ceil(l.a * l.b * l.c * m * std::min(l.a, l.c));
    return l.abcd() * m2 + m2 * l.d * root;
}

BigInt z_cost(const ContractionLabels& l, bool has_adjacent_sketch_edges, std::int64_t m) {
    return l.abcd() * (has_adjacent_sketch_edges ? BigInt(m) : BigInt(1));
}

SttResult stt_cost(const TensorNetwork& data, const std::vector<std::string>& sketch_edges,
                   const ContractionTree& t0, const Classification& clf, int j,
                   std::int64_t m) {
    const SystemView g = data_view(data, sketch_edges);
    const Hyperedge& ej = data.edge(sketch_edges.at(j));
    const std::int64_t sj = ej.size;
    const VSet vj = data.edge_vertices(ej);

    const auto& chain = clf.d.at(j);
    const int len = static_cast<int>(chain.size());

    // Per chain position: the full size product abcd and the product of the
    // sketch-carrying side's open R-dims (a_k b_k d_k in the chain's
    // orientation).
    std::vector<BigInt> abcd(len), side(len);
    for (int l = 0; l < len; ++l) {
        const ContractionLabels lab = labels(data, sketch_edges, t0, chain[l]);
        abcd[l] = lab.abcd();
        const auto& [u, v] = t0.path().at(chain[l]);
        const bool vj_in_u = vset_contains(u, vj[0]);
        side[l] = (vj_in_u ? lab.a : lab.c) * lab.b * lab.d;
    }

    SttResult res;
    res.f.assign(len + 1, 0);
    const BigInt vj_open = cut_size(g, Scope::R, vj);
    // k = 0 sketches the bare vertex; k >= 1 applies the matrix right before
    // the k-th chain contraction, so positions before it run at full size s_j
    // and positions from k-1 on run with the edge reduced to m.
    for (int k = 0; k <= len; ++k) {
        BigInt f = 0;
        for (int l = 0; l + 1 < k; ++l) f += abcd[l] * sj;
        f += (k == 0 ? vj_open : side[k - 1]) * sj * m;
        for (int l = (k == 0 ? 0 : k - 1); l < len; ++l) f += abcd[l] * m;
        res.f[k] = f;
    }
    res.k_opt = 0;
    for (int k = 1; k <= len; ++k)
        if (res.f[k] < res.f[res.k_opt]) res.k_opt = k;
    res.cost = res.f[res.k_opt];
    return res;
}

BigInt lower_bound_uniform(const TensorNetwork& data,
                           const std::vector<std::string>& sketch_edges,
                           const ContractionTree& t0, std::int64_t m) {
    const SystemView g = data_view(data, sketch_edges);
    for (int v : t0.vertices()) {
        if (!side_sketch_adjacent(g, {v}))
            throw std::invalid_argument("uniform lower bound inapplicable: vertex " +
                                        data.vertex_name(v) + " has no sketch edge");
    }
    BigInt sum = 0;
    for (const auto& id : sketch_edges) {
        const VSet vj = data.edge_vertices(data.edge(id));
        sum += cut_size(g, Scope::G, vj) * m;
    }
    for (std::size_t i = 0; i < t0.path().size(); ++i)
        sum += y_cost(labels(data, sketch_edges, t0, static_cast<int>(i)), m);
    return sum;
}

BigInt lower_bound_general(const TensorNetwork& data,
                           const std::vector<std::string>& sketch_edges,
                           const ContractionTree& t0, std::int64_t m) {
    const Classification clf = classify_contractions(data, sketch_edges, t0, m);
    BigInt sum = 0;
    for (std::size_t j = 0; j < sketch_edges.size(); ++j)
        sum += stt_cost(data, sketch_edges, t0, clf, static_cast<int>(j), m).cost;
    for (int i : clf.s_set) sum += labels(data, sketch_edges, t0, i).abcd() * m * m;
    sum += BigInt(sketch_edges.size()) * m * m * isqrt_ceil(BigInt(m));
    for (int i : clf.i_set) {
        const ContractionLabels l = labels(data, sketch_edges, t0, i);
        sum += z_cost(l, l.u_sketch_adjacent || l.v_sketch_adjacent, m);
    }
    return sum;
}

double approx_ratio(const BigInt& achieved, const TensorNetwork& data,
                    const std::vector<std::string>& sketch_edges, const ContractionTree& t0,
                    std::int64_t m) {
    BigInt lb = lower_bound_general(data, sketch_edges, t0, m);
    if (lb < 1) lb = 1;
    return to_double(achieved) / to_double(lb);
}

bool tree_optimal(const TensorNetwork& data, const std::vector<std::string>& sketch_edges,
                  const ContractionTree& t0, std::int64_t m) {
    const SystemView g = data_view(data, sketch_edges);
    for (int v : t0.vertices())
        if (!side_sketch_adjacent(g, {v})) return false;
    const Classification clf = classify_contractions(data, sketch_edges, t0, m);
    for (int i : clf.s_set)
        if (labels(data, sketch_edges, t0, i).b < m) return false;
    return true;
}

nlohmann::json CostReport::to_json() const {
    nlohmann::json j;
    j["achieved_flops"] = achieved_flops.str();
    j["achieved"] = {{"kron", achieved_kron.str()},
                     {"s", achieved_s.str()},
                     {"i", achieved_i.str()},
                     {"other", achieved_other.str()}};
    j["term_kron"] = term_kron.str();
    j["term_s"] = term_s.str();
    j["term_i"] = term_i.str();
    j["lower_bound_uniform"] = uniform_applicable ? lb_uniform.str() : "inapplicable";
    j["lower_bound_general"] = lb_general.str();
    j["ratio"] = ratio;
    if (uniform_applicable) j["ratio_uniform"] = ratio_uniform;
    j["tree_optimal"] = is_tree_optimal;
    j["per_contraction"] = per_contraction;
    return j;
}

CostReport make_cost_report(const TensorNetwork& data,
                            const std::vector<std::string>& sketch_edges,
                            const ContractionTree& t0, std::int64_t m,
                            const BigInt& achieved_flops, const BigInt& achieved_kron,
                            const BigInt& achieved_s, const BigInt& achieved_i,
                            const BigInt& achieved_other) {
    CostReport r;
    r.achieved_flops = achieved_flops;
    r.achieved_kron = achieved_kron;
    r.achieved_s = achieved_s;
    r.achieved_i = achieved_i;
    r.achieved_other = achieved_other;

    const Classification clf = classify_contractions(data, sketch_edges, t0, m);
    for (std::size_t j = 0; j < sketch_edges.size(); ++j)
        r.term_kron += stt_cost(data, sketch_edges, t0, clf, static_cast<int>(j), m).cost;
    for (int i : clf.s_set) r.term_s += y_cost(labels(data, sketch_edges, t0, i), m);
    for (int i : clf.i_set) {
        const ContractionLabels l = labels(data, sketch_edges, t0, i);
        r.term_i += z_cost(l, l.u_sketch_adjacent || l.v_sketch_adjacent, m);
    }

    try {
        r.lb_uniform = lower_bound_uniform(data, sketch_edges, t0, m);
        r.uniform_applicable = true;
    } catch (const std::invalid_argument&) {
        r.uniform_applicable = false;
    }
    r.lb_general = lower_bound_general(data, sketch_edges, t0, m);
    BigInt lbg = r.lb_general < 1 ? BigInt(1) : r.lb_general;
    r.ratio = to_double(achieved_flops) / to_double(lbg);
    if (r.uniform_applicable && r.lb_uniform > 0)
        r.ratio_uniform = to_double(achieved_flops) / to_double(r.lb_uniform);
    r.is_tree_optimal = tree_optimal(data, sketch_edges, t0, m);

    for (std::size_t i = 0; i < t0.path().size(); ++i) {
        const ContractionLabels l = labels(data, sketch_edges, t0, static_cast<int>(i));
        nlohmann::json ji;
        ji["index"] = i;
        ji["a"] = l.a.str();
        ji["b"] = l.b.str();
        ji["c"] = l.c.str();
        ji["d"] = l.d.str();
        const bool in_s = std::find(clf.s_set.begin(), clf.s_set.end(), static_cast<int>(i)) !=
                          clf.s_set.end();
        const bool in_i = std::find(clf.i_set.begin(), clf.i_set.end(), static_cast<int>(i)) !=
                          clf.i_set.end();
        ji["class"] = in_s ? "S" : (in_i ? "I" : "D");
        if (in_s) ji["y"] = y_cost(l, m).str();
        if (in_i) ji["z"] = z_cost(l, l.u_sketch_adjacent || l.v_sketch_adjacent, m).str();
        r.per_contraction.push_back(std::move(ji));
    }
    return r;
}

}  // namespace tnsketch
