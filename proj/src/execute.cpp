#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "tnsketch/embedding.hpp"

namespace tnsketch {

namespace {

bool is_attach(const Embedding& emb, const std::string& id) {
    return std::find(emb.attach_edges.begin(), emb.attach_edges.end(), id) !=
           emb.attach_edges.end();
}

// Effective sketch row size of every embedding vertex under an ordering:
// product of its dangling non-attach dims and dims shared with later
// vertices. Attach edges face the data, which is always ordered first.
std::vector<double> row_sizes(const Embedding& emb, const std::vector<std::string>& order) {
    const TensorNetwork& g = emb.network;
    std::map<std::string, int> rank;
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
    std::vector<double> rows;
    for (const auto& name : order) {
        const int v = g.vertex_index(name);
        double row = 1.0;
        for (const auto& eid : g.modes_of(v)) {
            const Hyperedge& e = g.edge(eid);
            if (is_attach(emb, eid)) continue;
            bool counts = e.dangling;
            for (const auto& p : e.endpoints)
                if (p != name && rank.at(p) > rank.at(name)) counts = true;
            if (counts) row *= static_cast<double>(e.size);
        }
        rows.push_back(row);
    }
    return rows;
}

bool ordering_passes(const Embedding& emb, const std::vector<std::string>& order,
                     std::int64_t m, std::vector<std::string>* failing) {
    const auto rows = row_sizes(emb, order);
    bool ok = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] < static_cast<double>(m)) {
            ok = false;
            if (failing) failing->push_back(order[i]);
        }
    }
    return ok;
}

std::vector<std::string> reverse_bfs_order(const Embedding& emb) {
    const TensorNetwork& g = emb.network;
    std::vector<std::string> order;
    std::map<std::string, bool> seen;
    std::deque<std::string> queue;
    if (!emb.output_edges.empty()) {
        const Hyperedge& out = g.edge(emb.output_edges.front());
        for (const auto& p : out.endpoints) {
            queue.push_back(p);
            seen[p] = true;
        }
    }
    std::vector<std::string> bfs;
    while (!queue.empty()) {
        const std::string v = queue.front();
        queue.pop_front();
        bfs.push_back(v);
        const int vi = g.vertex_index(v);
        for (const auto& eid : g.modes_of(vi)) {
            const Hyperedge& e = g.edge(eid);
            if (e.dangling || is_attach(emb, eid)) continue;
            for (const auto& p : e.endpoints) {
                if (!seen.count(p)) {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
    }
    // Unreached vertices come earliest.
    for (const auto& name : g.vertex_names())
        if (!seen.count(name)) order.push_back(name);
    for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) order.push_back(*it);
    return order;
}

}  // namespace

ConditionReport check_sufficient_condition(const Embedding& emb, std::int64_t m) {
    const TensorNetwork& g = emb.network;
    for (const auto& e : g.edges()) {
        const std::size_t ends = g.edge_vertices(e).size();
        if (is_attach(emb, e.id)) {
            if (ends != 1)
                throw std::invalid_argument("not a graph embedding: attach edge " + e.id +
                                            " touches several embedding tensors");
        } else if (e.dangling) {
            if (ends != 1)
                throw std::invalid_argument("not a graph embedding: open edge " + e.id +
                                            " touches several embedding tensors");
        } else if (ends != 2) {
            throw std::invalid_argument("not a graph embedding: edge " + e.id +
                                        " has cardinality " + std::to_string(ends));
        }
    }

    ConditionReport report;
    // Candidate orderings: the builder's application order, then reverse BFS
    // from the output, then brute force for small embeddings.
    if (!emb.linearization.empty() && ordering_passes(emb, emb.linearization, m, nullptr)) {
        report.ok = true;
        report.ordering = emb.linearization;
        return report;
    }
    const auto rbfs = reverse_bfs_order(emb);
    if (ordering_passes(emb, rbfs, m, nullptr)) {
        report.ok = true;
        report.ordering = rbfs;
        return report;
    }
    if (g.num_vertices() <= 8) {
        std::vector<std::string> perm = g.vertex_names();
        std::sort(perm.begin(), perm.end());
        do {
            if (ordering_passes(emb, perm, m, nullptr)) {
                report.ok = true;
                report.ordering = perm;
                return report;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    report.ok = false;
    report.ordering = rbfs;
    ordering_passes(emb, rbfs, m, &report.failing);
    return report;
}

std::map<std::string, DenseTensor> embedding_tensors(const Embedding& emb, RandomSource rng) {
    std::map<std::string, DenseTensor> out;
    for (std::size_t i = 0; i < emb.linearization.size(); ++i) {
        const std::string& name = emb.linearization[i];
        const int v = emb.network.vertex_index(name);
        if (v < 0) throw std::logic_error("linearization names unknown vertex " + name);
        const double var = emb.variances.at(name);
        out[name] = gaussian_tensor(emb.network.modes_of(v), emb.network.shape_of(v), var,
                                    rng.with_stream(static_cast<std::uint64_t>(i)));
    }
    return out;
}

ExecutionResult execute_plan(const SketchPlan& plan, const SketchSpec& spec,
                             const Embedding& emb, RandomSource rng) {
    const TensorNetwork& sys = plan.system;
    std::map<VSet, DenseTensor> state;
    for (int v = 0; v < plan.num_data_vertices; ++v) {
        if (!spec.data.has_tensor(v))
            throw std::invalid_argument("missing operand: no tensor bound at " +
                                        spec.data.vertex_name(v));
        state[{v}] = spec.data.tensor(v);
    }
    auto etensors = embedding_tensors(emb, rng);
    for (auto& [name, t] : etensors) {
        const int v = sys.vertex_index(name);
        if (v < 0) throw std::invalid_argument("plan/data inconsistency: embedding vertex " +
                                               name + " not in plan system");
        state[{v}] = std::move(t);
    }

    ExecutionResult res;
    for (const auto& step : plan.steps) {
        BigInt step_madds = 0;
        for (const auto& prim : step.prims) {
            PairContraction pc;
            try {
                pc = contract_pair(sys, state, prim.a, prim.b);
            } catch (const std::invalid_argument& err) {
                throw std::invalid_argument(std::string("plan/data inconsistency: ") +
                                            err.what());
            }
            state.erase(prim.a);
            state.erase(prim.b);
            state[vset_union(prim.a, prim.b)] = std::move(pc.tensor);
            step_madds += pc.madds;
        }
        res.step_flops.push_back(step_madds * 2);
        res.total_flops += step_madds * 2;
    }
    if (state.size() != 1) throw std::logic_error("plan left more than one component");

    DenseTensor out = std::move(state.begin()->second);
    // Output sketch mode first, remaining open modes in sorted order.
    std::vector<std::string> order;
    for (const auto& oe : emb.output_edges)
        if (out.has_mode(oe)) order.push_back(oe);
    std::vector<std::string> rest;
    for (const auto& l : out.mode_labels)
        if (std::find(order.begin(), order.end(), l) == order.end()) rest.push_back(l);
    std::sort(rest.begin(), rest.end());
    order.insert(order.end(), rest.begin(), rest.end());
    res.tensor = permuted(out, order);
    return res;
}

namespace {

DenseTensor fold_network(const TensorNetwork& net, const std::vector<VSet>& parts,
                         const std::vector<DenseTensor>& tensors, std::int64_t max_entries) {
    if (parts.empty()) throw std::invalid_argument("empty network");
    VSet acc_set = parts[0];
    DenseTensor acc = tensors[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const VSet merged = vset_union(acc_set, parts[i]);
        std::vector<std::string> sum_modes, batch_modes;
        split_shared_modes(net, acc, tensors[i], merged, &sum_modes, &batch_modes);
        BigInt result_size = 1;
        for (std::size_t k = 0; k < acc.mode_labels.size(); ++k)
            if (std::find(sum_modes.begin(), sum_modes.end(), acc.mode_labels[k]) ==
                sum_modes.end())
                result_size *= acc.shape[k];
        for (std::size_t k = 0; k < tensors[i].mode_labels.size(); ++k) {
            const auto& l = tensors[i].mode_labels[k];
            if (std::find(sum_modes.begin(), sum_modes.end(), l) == sum_modes.end() &&
                std::find(batch_modes.begin(), batch_modes.end(), l) == batch_modes.end())
                result_size *= tensors[i].shape[k];
        }
        if (result_size > max_entries) throw std::invalid_argument("oracle too large");
        acc = naive_contract_dense(acc, tensors[i], sum_modes, batch_modes);
        acc_set = merged;
    }
    return acc;
}

}  // namespace

DenseTensor materialize_dense(const TensorNetwork& net, std::int64_t max_entries) {
    if (net.dense_size() > max_entries) throw std::invalid_argument("oracle too large");
    std::vector<VSet> parts;
    std::vector<DenseTensor> tensors;
    for (int v = 0; v < net.num_vertices(); ++v) {
        parts.push_back({v});
        tensors.push_back(net.tensor(v));
    }
    return fold_network(net, parts, tensors, max_entries);
}

DenseTensor materialize_dense(const Embedding& emb, RandomSource rng,
                              std::int64_t max_entries) {
    const TensorNetwork& g = emb.network;
    auto etensors = embedding_tensors(emb, rng);
    std::vector<VSet> parts;
    std::vector<DenseTensor> tensors;
    for (int v = 0; v < g.num_vertices(); ++v) {
        parts.push_back({v});
        tensors.push_back(std::move(etensors.at(g.vertex_name(v))));
    }
    DenseTensor mat = fold_network(g, parts, tensors, max_entries);
    std::vector<std::string> order = emb.output_edges;
    order.insert(order.end(), emb.attach_edges.begin(), emb.attach_edges.end());
    return permuted(mat, order);
}

CostReport plan_cost_report(const SketchPlan& plan, const SketchSpec& spec,
                            const ContractionTree& t0) {
    return make_cost_report(spec.data, spec.sketch_edges, t0, spec.sketch_size,
                            plan.total_flops, plan.flops_kron, plan.flops_s, plan.flops_i,
                            plan.flops_other);
}

}  // namespace tnsketch
