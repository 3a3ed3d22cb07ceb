#include "tnsketch/tensor_network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tnsketch {

VSet vset_union(const VSet& a, const VSet& b) {
    VSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool vset_contains(const VSet& a, int v) {
    return std::binary_search(a.begin(), a.end(), v);
}

bool vset_intersects(const VSet& a, const VSet& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else return true;
    }
    return false;
}

bool vset_disjoint(const VSet& a, const VSet& b) { return !vset_intersects(a, b); }

double Hyperedge::log_weight() const { return std::log(static_cast<double>(size)); }

int TensorNetwork::add_vertex(const std::string& name) {
    if (vertex_index_.count(name)) throw std::invalid_argument("duplicate vertex " + name);
    const int idx = num_vertices();
    vertices_.push_back(name);
    vertex_index_[name] = idx;
    incidence_.emplace_back();
    return idx;
}

void TensorNetwork::add_edge(Hyperedge e) {
    if (e.size < 1) throw std::invalid_argument("edge " + e.id + " has size < 1");
    if (edge_index_.count(e.id)) throw std::invalid_argument("duplicate edge " + e.id);
    for (const auto& v : e.endpoints) {
        const int idx = vertex_index(v);
        if (idx < 0) throw std::invalid_argument("edge " + e.id + " references unknown vertex " + v);
        incidence_[idx].push_back(e.id);
    }
    edge_index_[e.id] = static_cast<int>(edges_.size());
    edges_.push_back(std::move(e));
}

void TensorNetwork::attach_endpoint(const std::string& edge_id, const std::string& vertex) {
    const int vi = vertex_index(vertex);
    if (vi < 0) throw std::invalid_argument("unknown vertex " + vertex);
    auto it = edge_index_.find(edge_id);
    if (it == edge_index_.end()) throw std::invalid_argument("unknown edge " + edge_id);
    edges_[it->second].endpoints.push_back(vertex);
    incidence_[vi].push_back(edge_id);
}

void TensorNetwork::set_dangling(const std::string& edge_id, bool dangling) {
    auto it = edge_index_.find(edge_id);
    if (it == edge_index_.end()) throw std::invalid_argument("unknown edge " + edge_id);
    edges_[it->second].dangling = dangling;
}

void TensorNetwork::set_edge_size(const std::string& edge_id, std::int64_t size) {
    auto it = edge_index_.find(edge_id);
    if (it == edge_index_.end()) throw std::invalid_argument("unknown edge " + edge_id);
    edges_[it->second].size = size;
}

int TensorNetwork::vertex_index(const std::string& name) const {
    auto it = vertex_index_.find(name);
    return it == vertex_index_.end() ? -1 : it->second;
}

VSet TensorNetwork::all_vertices() const {
    VSet v(vertices_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
    return v;
}

bool TensorNetwork::has_edge(const std::string& id) const { return edge_index_.count(id) > 0; }

const Hyperedge& TensorNetwork::edge(const std::string& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) throw std::invalid_argument("unknown edge " + id);
    return edges_[it->second];
}

std::vector<std::int64_t> TensorNetwork::shape_of(int v) const {
    std::vector<std::int64_t> shape;
    for (const auto& id : incidence_.at(v)) shape.push_back(edge(id).size);
    return shape;
}

VSet TensorNetwork::edge_vertices(const Hyperedge& e) const {
    VSet out;
    for (const auto& name : e.endpoints) out.push_back(vertex_index(name));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void TensorNetwork::bind_tensor(const std::string& vertex, DenseTensor t) {
    const int vi = vertex_index(vertex);
    if (vi < 0) throw std::invalid_argument("unknown vertex " + vertex);
    t.validate();
    if (t.mode_labels != modes_of(vi) || t.shape != shape_of(vi))
        throw std::invalid_argument("tensor binding mismatch for vertex " + vertex);
    tensors_[vi] = std::move(t);
}

bool TensorNetwork::has_tensor(int v) const { return tensors_.count(v) > 0; }

const DenseTensor& TensorNetwork::tensor(int v) const {
    auto it = tensors_.find(v);
    if (it == tensors_.end())
        throw std::invalid_argument("missing operand: no tensor bound at " + vertex_name(v));
    return it->second;
}

void TensorNetwork::bind_random_uniform(std::uint64_t seed) {
    for (int v = 0; v < num_vertices(); ++v) {
        bind_tensor(vertices_[v], uniform01_tensor(modes_of(v), shape_of(v),
                                                   {seed, static_cast<std::uint64_t>(v)}));
    }
}

BigInt TensorNetwork::dense_size() const {
    BigInt p = 1;
    for (const auto& e : edges_)
        if (e.dangling) p *= e.size;
    return p;
}

TensorNetwork TensorNetwork::from_json(const nlohmann::json& j) {
    TensorNetwork net;
    for (const auto& v : j.at("vertices")) net.add_vertex(v.get<std::string>());
    for (const auto& je : j.at("edges")) {
        Hyperedge e;
        e.id = je.at("id").get<std::string>();
        for (const auto& p : je.at("endpoints")) e.endpoints.push_back(p.get<std::string>());
        e.dangling = je.value("dangling", false);
        e.size = je.at("size").get<std::int64_t>();
        net.add_edge(std::move(e));
    }
    if (j.contains("tensors")) {
        const auto& jt = j.at("tensors");
        if (jt.is_string()) {
            if (jt.get<std::string>() != "random_uniform01")
                throw std::invalid_argument("unknown tensor generator " + jt.get<std::string>());
            net.bind_random_uniform(j.value("seed", std::uint64_t{0}));
        } else {
            for (auto it = jt.begin(); it != jt.end(); ++it) {
                const int vi = net.vertex_index(it.key());
                if (vi < 0) throw std::invalid_argument("tensor for unknown vertex " + it.key());
                DenseTensor t(net.modes_of(vi), net.shape_of(vi));
                const auto& vals = it.value();
                if (static_cast<std::int64_t>(vals.size()) != t.size())
                    throw std::invalid_argument("tensor value count mismatch for " + it.key());
                for (std::size_t k = 0; k < vals.size(); ++k) t.values[k] = vals[k].get<double>();
                net.bind_tensor(it.key(), std::move(t));
            }
        }
    }
    return net;
}

nlohmann::json TensorNetwork::to_json(bool include_tensors) const {
    nlohmann::json j;
    j["vertices"] = vertices_;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : edges_) {
        j["edges"].push_back({{"id", e.id},
                              {"endpoints", e.endpoints},
                              {"dangling", e.dangling},
                              {"size", e.size}});
    }
    if (include_tensors) {
        nlohmann::json jt = nlohmann::json::object();
        for (const auto& [v, t] : tensors_) jt[vertex_name(v)] = t.values;
        j["tensors"] = std::move(jt);
    }
    return j;
}

void split_shared_modes(const TensorNetwork& net, const DenseTensor& ta, const DenseTensor& tb,
                        const VSet& merged, std::vector<std::string>* sum_modes,
                        std::vector<std::string>* batch_modes) {
    for (const auto& label : ta.mode_labels) {
        if (!tb.has_mode(label)) continue;
        const Hyperedge& e = net.edge(label);
        bool interior = !e.dangling;
        if (interior) {
            for (const auto& ep : e.endpoints) {
                if (!vset_contains(merged, net.vertex_index(ep))) {
                    interior = false;
                    break;
                }
            }
        }
        if (interior) sum_modes->push_back(label);
        else batch_modes->push_back(label);
    }
}

namespace {

BigInt modeled_pair_product(const DenseTensor& ta, const DenseTensor& tb,
                            const std::vector<std::string>& shared) {
    BigInt p = 1;
    for (auto s : ta.shape) p *= s;
    for (std::size_t i = 0; i < tb.mode_labels.size(); ++i) {
        if (std::find(shared.begin(), shared.end(), tb.mode_labels[i]) == shared.end())
            p *= tb.shape[i];
    }
    return p;
}

}  // namespace

PairContraction contract_pair(const TensorNetwork& net,
                              const std::map<VSet, DenseTensor>& bound, const VSet& a,
                              const VSet& b) {
    if (!vset_disjoint(a, b)) throw std::invalid_argument("invalid contraction: overlapping sets");
    auto ia = bound.find(a);
    auto ib = bound.find(b);
    if (ia == bound.end() || ib == bound.end())
        throw std::invalid_argument("missing operand: unbound contraction input");
    const VSet merged = vset_union(a, b);
    std::vector<std::string> sum_modes, batch_modes;
    split_shared_modes(net, ia->second, ib->second, merged, &sum_modes, &batch_modes);
    PairContraction out;
    out.madds = 0;
    out.tensor = contract_pair_dense(ia->second, ib->second, sum_modes, batch_modes, &out.madds);
    return out;
}

PairContraction contract_pair(const TensorNetwork& net, const VSet& a, const VSet& b) {
    std::map<VSet, DenseTensor> bound;
    auto build_side = [&](const VSet& side) {
        std::map<VSet, DenseTensor> parts;
        for (int v : side) parts[{v}] = net.tensor(v);
        while (parts.size() > 1) {
            auto first = parts.begin();
            auto second = std::next(first);
            VSet fa = first->first, fb = second->first;
            PairContraction pc = contract_pair(net, parts, fa, fb);
            parts.erase(fa);
            parts.erase(fb);
            parts[vset_union(fa, fb)] = std::move(pc.tensor);
        }
        bound[parts.begin()->first] = std::move(parts.begin()->second);
    };
    build_side(a);
    build_side(b);
    return contract_pair(net, bound, a, b);
}

PairContraction contract_all_greedy(const TensorNetwork& net) {
    std::vector<std::pair<VSet, DenseTensor>> active;
    for (int v = 0; v < net.num_vertices(); ++v) active.push_back({{v}, net.tensor(v)});
    if (active.empty()) throw std::invalid_argument("empty network");

    BigInt madds = 0;
    std::map<VSet, DenseTensor> bound;
    while (active.size() > 1) {
        std::size_t best_i = 0, best_j = 1;
        BigInt best_cost = -1;
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                std::vector<std::string> shared;
                for (const auto& l : active[i].second.mode_labels)
                    if (active[j].second.has_mode(l)) shared.push_back(l);
                const BigInt cost =
                    modeled_pair_product(active[i].second, active[j].second, shared);
                if (best_cost < 0 || cost < best_cost) {
                    best_cost = cost;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        bound.clear();
        bound[active[best_i].first] = std::move(active[best_i].second);
        bound[active[best_j].first] = std::move(active[best_j].second);
        const VSet sa = active[best_i].first, sb = active[best_j].first;
        PairContraction pc = contract_pair(net, bound, sa, sb);
        madds += pc.madds;
        active.erase(active.begin() + best_j);
        active.erase(active.begin() + best_i);
        active.push_back({vset_union(sa, sb), std::move(pc.tensor)});
    }
    return {std::move(active.front().second), madds};
}

double tn_norm(const TensorNetwork& net) {
    constexpr const char* kMirror = "~dup";
    TensorNetwork doubled;
    for (const auto& name : net.vertex_names()) doubled.add_vertex(name);
    for (const auto& name : net.vertex_names()) doubled.add_vertex(name + kMirror);

    bool any_dangling = false;
    for (const auto& e : net.edges()) {
        if (e.dangling) {
            any_dangling = true;
            Hyperedge joined = e;
            joined.dangling = false;
            for (const auto& p : e.endpoints) joined.endpoints.push_back(p + kMirror);
            doubled.add_edge(std::move(joined));
        } else {
            doubled.add_edge(e);
            Hyperedge mirror = e;
            mirror.id = e.id + kMirror;
            mirror.endpoints.clear();
            for (const auto& p : e.endpoints) mirror.endpoints.push_back(p + kMirror);
            doubled.add_edge(std::move(mirror));
        }
    }
    if (!any_dangling) throw std::invalid_argument("tn_norm requires at least one dangling mode");

    for (int v = 0; v < net.num_vertices(); ++v) {
        const DenseTensor& t = net.tensor(v);
        doubled.bind_tensor(net.vertex_name(v), t);
        DenseTensor mirror = t;
        for (auto& label : mirror.mode_labels)
            if (!net.edge(label).dangling) label += kMirror;
        // Mirrored incidence order matches the original, so binding is valid.
        doubled.bind_tensor(net.vertex_name(v) + kMirror, std::move(mirror));
    }

    PairContraction pc = contract_all_greedy(doubled);
    if (pc.tensor.order() != 0)
        throw std::logic_error("self-contraction did not reduce to a scalar");
    return std::sqrt(std::max(0.0, pc.tensor.values[0]));
}

}  // namespace tnsketch
