#include "tnsketch/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tnsketch {

void SketchSpec::validate() const {
    if (sketch_size < 1) throw std::invalid_argument("sketch size must be at least 1");
    if (sketch_edges.empty()) throw std::invalid_argument("nothing to sketch");
    for (const auto& id : sketch_edges) {
        const Hyperedge& e = data.edge(id);
        if (!e.dangling)
            throw std::invalid_argument("unsupported sketch dimension: " + id + " is not dangling");
        if (e.size < sketch_size)
            throw std::invalid_argument("sketch dimension smaller than sketch size: " + id);
    }
}

SketchSpec SketchSpec::from_json(const nlohmann::json& j, std::int64_t m) {
    SketchSpec spec;
    spec.data = TensorNetwork::from_json(j);
    for (const auto& id : j.at("sketch_edges")) spec.sketch_edges.push_back(id.get<std::string>());
    spec.sketch_size = m;
    return spec;
}

double SketchSpec::implied_epsilon(int num_embedding_vertices) const {
    const double d = delta > 0.0 && delta < 1.0 ? delta : 0.1;
    return std::sqrt(num_embedding_vertices * std::log(1.0 / d) /
                     static_cast<double>(sketch_size));
}

nlohmann::json Embedding::to_json() const {
    nlohmann::json j = network.to_json(false);
    j["attach"] = attach_edges;
    j["output"] = output_edges;
    j["linearization"] = linearization;
    j["variances"] = nlohmann::json::object();
    for (const auto& [v, var] : variances) j["variances"][v] = var;
    return j;
}

BigInt PlanStep::madds() const {
    BigInt s = 0;
    for (const auto& p : prims) s += p.product;
    return s;
}

std::vector<BigInt> SketchPlan::per_step_flops() const {
    std::vector<BigInt> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.madds() * 2);
    return out;
}

std::int64_t zi_internal_edge(const BigInt& a, const BigInt& b, const BigInt& c,
                              const BigInt& /*d*/, std::int64_t m) {
    const BigInt big = a <= c ? c : a;
    const double target = std::sqrt(to_double(big) * static_cast<double>(m) / to_double(b));
    std::int64_t alpha = static_cast<std::int64_t>(std::llround(target));
    if (alpha < 1) alpha = 1;
    if (alpha > m) alpha = m;
    return alpha;
}

EmbeddingKind embedding_kind_from_string(const std::string& s) {
    if (s == "tn") return EmbeddingKind::Tn;
    if (s == "tree") return EmbeddingKind::Tree;
    if (s == "tt") return EmbeddingKind::Tt;
    if (s == "khatri-rao") return EmbeddingKind::KhatriRao;
    throw std::invalid_argument("unknown embedding kind " + s);
}

std::string to_string(EmbeddingKind kind) {
    switch (kind) {
        case EmbeddingKind::Tn: return "tn";
        case EmbeddingKind::Tree: return "tree";
        case EmbeddingKind::Tt: return "tt";
        case EmbeddingKind::KhatriRao: return "khatri-rao";
    }
    return "?";
}

namespace {

// Shared machinery for the plan builders: keeps the merged data+embedding
// system and the standalone embedding graph in sync, tracks live components
// with their tree fragments, and records plan steps with exact modeled size
// products.
class PlanBuilder {
public:
    struct Comp {
        VSet verts;
        std::string open;  // the component's single open sketch edge, or ""
        ContractionTree tree;
        bool alive = true;
    };

    explicit PlanBuilder(const SketchSpec& spec) : spec_(spec) {
        spec.validate();
        system_ = spec.data;
        nd_ = system_.num_vertices();
        view_.net = &system_;
        view_.sketch_edges.insert(spec.sketch_edges.begin(), spec.sketch_edges.end());
        for (int v = 0; v < nd_; ++v) {
            comp_of_[v] = static_cast<int>(comps_.size());
            comps_.push_back({{v}, "", ContractionTree::leaf(v), true});
        }
    }

    int add_embed_vertex(const std::string& name) {
        const int idx = system_.add_vertex(name);
        ge_.add_vertex(name);
        embed_order_.push_back(name);
        comp_of_[idx] = static_cast<int>(comps_.size());
        comps_.push_back({{idx}, "", ContractionTree::leaf(idx), true});
        return idx;
    }

    // New embedding-internal edge, open (dangling) until a consumer attaches.
    void add_embed_edge(const std::string& id, const std::string& vertex, std::int64_t size) {
        system_.add_edge({id, {vertex}, true, size});
        ge_.add_edge({id, {vertex}, true, size});
        view_.embed_edges.insert(id);
    }

    // Attaches an embedding vertex as a further endpoint of an existing edge
    // (a dangling sketch edge or an open embedding edge); the edge stops
    // dangling.
    void consume_edge(const std::string& edge_id, const std::string& vertex) {
        system_.attach_endpoint(edge_id, vertex);
        system_.set_dangling(edge_id, false);
        if (ge_.has_edge(edge_id)) {
            ge_.attach_endpoint(edge_id, vertex);
            ge_.set_dangling(edge_id, false);
        } else {
            // First embedding endpoint of a data sketch edge: in the
            // standalone embedding graph it dangles toward the data.
            const Hyperedge& e = system_.edge(edge_id);
            ge_.add_edge({edge_id, {vertex}, true, e.size});
        }
    }

    int comp_of(int vertex) const { return comp_of_.at(vertex); }
    Comp& comp(int id) { return comps_.at(id); }
    int comp_containing(const VSet& verts) const { return comp_of_.at(verts.front()); }
    int num_data_vertices() const { return nd_; }

    bool has_embedding(int comp_id) const { return comps_.at(comp_id).verts.back() >= nd_; }

    PlanStep::Prim prim_merge(int ca, int cb) {
        Comp& a = comps_.at(ca);
        Comp& b = comps_.at(cb);
        PlanStep::Prim p;
        p.a = a.verts;
        p.b = b.verts;
        p.product = cost_pair_size(view_, Scope::G, a.verts, b.verts);
        Comp merged;
        merged.verts = vset_union(a.verts, b.verts);
        merged.tree = ContractionTree::join(a.tree, b.tree);
        if (!a.open.empty() && !b.open.empty() && a.open != b.open)
            throw std::logic_error("merging two components with distinct open sketch edges");
        merged.open = a.open.empty() ? b.open : a.open;
        merged.alive = true;
        a.alive = false;
        b.alive = false;
        const int id = static_cast<int>(comps_.size());
        comps_.push_back(std::move(merged));
        for (int v : comps_.back().verts) comp_of_[v] = id;
        return p;
    }

    void push_step(PlanStep step) {
        const BigInt f = step.madds() * 2;
        switch (step.stage) {
            case PlanStage::Kron: flops_kron_ += f; break;
            case PlanStage::S: flops_s_ += f; break;
            case PlanStage::I: flops_i_ += f; break;
            case PlanStage::Other: flops_other_ += f; break;
        }
        steps_.push_back(std::move(step));
    }

    // Applies the m x s_j Gaussian matrix of the Kronecker stage to the
    // component currently holding sketch edge j. If the component already has
    // an open sketch mode, the two are folded with an order-3 merge tensor so
    // every component keeps a single open sketch mode.
    void attach_kron(int j) {
        const std::string& ej = spec_.sketch_edges.at(j);
        const VSet holder = spec_.data.edge_vertices(spec_.data.edge(ej));
        const int cid = comp_containing(holder);
        const std::string kname = "@K:" + ej;
        const std::string kedge = "@k:" + ej;
        const int kv = add_embed_vertex(kname);
        consume_edge(ej, kname);
        add_embed_edge(kedge, kname, spec_.sketch_size);

        const std::string prev_open = comps_.at(cid).open;
        comps_.at(cid).open.clear();
        comps_.at(comp_of(kv)).open = kedge;

        PlanStep step;
        step.kind = PlanStep::Kind::ContractSketch;
        step.stage = PlanStage::Kron;
        step.a = comps_.at(cid).verts;
        step.b = {kv};
        step.embedding_vertices = {kname};
        step.prims.push_back(prim_merge(cid, comp_of(kv)));
        push_step(std::move(step));

        if (!prev_open.empty()) fold_open_pair(comp_of(kv), prev_open, kedge);
    }

    // Folds two open sketch modes of one component into one with an order-3
    // Gaussian tensor (m, m) -> m. Only needed when a vertex carries several
    // sketch edges; keeps the single-open invariant and the final |E_1| = 1.
    void fold_open_pair(int cid, const std::string& open_a, const std::string& open_b) {
        const std::string tag = std::to_string(merge_count_++);
        const std::string mname = "@M:" + tag;
        const std::string medge = "@mo:" + tag;
        const int mv = add_embed_vertex(mname);
        consume_edge(open_a, mname);
        consume_edge(open_b, mname);
        add_embed_edge(medge, mname, spec_.sketch_size);

        comps_.at(cid).open.clear();
        comps_.at(comp_of(mv)).open = medge;

        PlanStep fold;
        fold.kind = PlanStep::Kind::ContractSketch;
        fold.stage = PlanStage::Other;
        fold.a = comps_.at(cid).verts;
        fold.b = {mv};
        fold.embedding_vertices = {mname};
        fold.prims.push_back(prim_merge(cid, comp_of(mv)));
        push_step(std::move(fold));
    }

    // Plain data contraction (D- or I-class), sides possibly sketched.
    void contract_data(const VSet& u, const VSet& v, PlanStage stage) {
        const int ca = comp_containing(u);
        const int cb = comp_containing(v);
        PlanStep step;
        step.kind = PlanStep::Kind::Contract;
        step.stage = stage;
        step.a = comps_.at(ca).verts;
        step.b = comps_.at(cb).verts;
        step.prims.push_back(prim_merge(ca, cb));
        push_step(std::move(step));
    }

    // S-contraction via the two-tensor small network: the order-3 tensor
    // first meets the side with the smaller exclusive open size, then the
    // other side, then the alpha -> m matrix.
    void s_merge_small_network(int i, const VSet& u, const VSet& v,
                               const ContractionLabels& lab) {
        const std::int64_t m = spec_.sketch_size;
        const std::int64_t alpha =
            spec_.strict_accuracy ? m : zi_internal_edge(lab.a, lab.b, lab.c, lab.d, m);
        const int cu = comp_containing(u);
        const int cv = comp_containing(v);
        const bool u_first = lab.a <= lab.c;
        const int cfirst = u_first ? cu : cv;
        const int csecond = u_first ? cv : cu;
        const std::string tag = std::to_string(i);
        const std::string v1 = "@Z1:" + tag;
        const std::string v2 = "@Z2:" + tag;
        const std::string tedge = "@zt:" + tag;
        const std::string oedge = "@zo:" + tag;

        PlanStep step;
        step.kind = PlanStep::Kind::ContractSketch;
        step.stage = PlanStage::S;
        step.a = comps_.at(cu).verts;
        step.b = comps_.at(cv).verts;
        step.embedding_vertices = {v1, v2};

        const int v1i = add_embed_vertex(v1);
        consume_edge(comps_.at(cfirst).open, v1);
        consume_edge(comps_.at(csecond).open, v1);
        add_embed_edge(tedge, v1, alpha);
        const int v2i = add_embed_vertex(v2);
        consume_edge(tedge, v2);
        add_embed_edge(oedge, v2, m);

        comps_.at(cfirst).open.clear();
        comps_.at(csecond).open.clear();
        step.prims.push_back(prim_merge(cfirst, comp_of(v1i)));
        step.prims.push_back(prim_merge(comp_of(v1i), csecond));
        comps_.at(comp_of(v2i)).open = oedge;
        step.prims.push_back(prim_merge(comp_of(v1i), comp_of(v2i)));
        push_step(std::move(step));
    }

    // S-contraction via a single order-3 tensor (tree embedding).
    void s_merge_single_tensor(int i, const VSet& u, const VSet& v) {
        const int cu = comp_containing(u);
        const int cv = comp_containing(v);
        const std::string tag = std::to_string(i);
        const std::string zname = "@Z:" + tag;
        const std::string oedge = "@zo:" + tag;

        PlanStep step;
        step.kind = PlanStep::Kind::ContractSketch;
        step.stage = PlanStage::S;
        step.a = comps_.at(cu).verts;
        step.b = comps_.at(cv).verts;
        step.embedding_vertices = {zname};

        const std::string open_u = comps_.at(cu).open;
        const std::string open_v = comps_.at(cv).open;
        comps_.at(cu).open.clear();
        comps_.at(cv).open.clear();
        step.prims.push_back(prim_merge(cu, cv));
        const int merged = comp_containing(u);
        const int zv = add_embed_vertex(zname);
        consume_edge(open_u, zname);
        consume_edge(open_v, zname);
        add_embed_edge(oedge, zname, spec_.sketch_size);
        comps_.at(comp_of(zv)).open = oedge;
        step.prims.push_back(prim_merge(merged, comp_of(zv)));
        push_step(std::move(step));
    }

    SketchPlan finish_plan() {
        int live = -1;
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            if (!comps_[i].alive) continue;
            if (live >= 0) throw std::logic_error("plan did not contract to one component");
            live = static_cast<int>(i);
        }
        SketchPlan plan;
        plan.system = system_;
        plan.num_data_vertices = nd_;
        plan.steps = std::move(steps_);
        plan.flops_kron = flops_kron_;
        plan.flops_s = flops_s_;
        plan.flops_i = flops_i_;
        plan.flops_other = flops_other_;
        plan.total_flops = flops_kron_ + flops_s_ + flops_i_ + flops_other_;
        plan.resulting_tree = comps_.at(live).tree;
        return plan;
    }

    Embedding finish_embedding(const std::string& output_edge) {
        Embedding emb;
        emb.network = ge_;
        emb.attach_edges = spec_.sketch_edges;
        emb.output_edges = {output_edge};
        emb.linearization = embed_order_;
        // Variance 1/(effective sketch row size): per tensor, the product of
        // its dangling non-attach dims and dims shared with later tensors.
        std::map<std::string, int> rank;
        for (std::size_t i = 0; i < embed_order_.size(); ++i)
            rank[embed_order_[i]] = static_cast<int>(i);
        for (const auto& name : embed_order_) {
            const int v = ge_.vertex_index(name);
            double row = 1.0;
            for (const auto& eid : ge_.modes_of(v)) {
                const Hyperedge& e = ge_.edge(eid);
                const bool attach =
                    std::find(spec_.sketch_edges.begin(), spec_.sketch_edges.end(), eid) !=
                    spec_.sketch_edges.end();
                if (attach) continue;
                bool counts = e.dangling;
                for (const auto& p : e.endpoints)
                    if (p != name && rank.at(p) > rank.at(name)) counts = true;
                if (counts) row *= static_cast<double>(e.size);
            }
            emb.variances[name] = 1.0 / row;
        }
        return emb;
    }

    const std::string& open_of_root() const {
        for (const auto& c : comps_)
            if (c.alive) return c.open;
        throw std::logic_error("no live component");
    }

    const SketchSpec& spec_;
    TensorNetwork system_;
    TensorNetwork ge_;
    SystemView view_;
    int nd_ = 0;
    std::vector<Comp> comps_;
    std::map<int, int> comp_of_;
    std::vector<std::string> embed_order_;
    std::vector<PlanStep> steps_;
    BigInt flops_kron_ = 0, flops_s_ = 0, flops_i_ = 0, flops_other_ = 0;
    int merge_count_ = 0;
};

enum class MergeStyle { SmallNetwork, SingleTensor };

std::pair<Embedding, SketchPlan> build_merged_embedding(const SketchSpec& spec,
                                                        const ContractionTree& t0,
                                                        MergeStyle style) {
    const Classification clf =
        classify_contractions(spec.data, spec.sketch_edges, t0, spec.sketch_size);
    PlanBuilder b(spec);

    // Kronecker stage placement: exhaustive f(k) search per sketch edge.
    std::vector<int> k_opt(spec.sketch_edges.size(), 0);
    for (std::size_t j = 0; j < spec.sketch_edges.size(); ++j)
        k_opt[j] = stt_cost(spec.data, spec.sketch_edges, t0, clf, static_cast<int>(j),
                            spec.sketch_size)
                       .k_opt;

    // Which D-chain position each path index occupies, if any.
    std::map<int, std::pair<int, int>> d_position;  // path index -> (j, 1-based l)
    for (std::size_t j = 0; j < clf.d.size(); ++j)
        for (std::size_t l = 0; l < clf.d[j].size(); ++l)
            d_position[clf.d[j][l]] = {static_cast<int>(j), static_cast<int>(l) + 1};

    for (std::size_t j = 0; j < spec.sketch_edges.size(); ++j)
        if (k_opt[j] == 0) b.attach_kron(static_cast<int>(j));

    for (std::size_t i = 0; i < t0.path().size(); ++i) {
        const auto& [u, v] = t0.path()[i];
        const auto dp = d_position.find(static_cast<int>(i));
        if (dp != d_position.end()) {
            const auto [j, l] = dp->second;
            if (k_opt[j] == l) b.attach_kron(j);
            b.contract_data(u, v, PlanStage::Kron);
            continue;
        }
        const bool in_s =
            std::find(clf.s_set.begin(), clf.s_set.end(), static_cast<int>(i)) != clf.s_set.end();
        if (!in_s) {
            b.contract_data(u, v, PlanStage::I);
        } else if (style == MergeStyle::SmallNetwork) {
            const ContractionLabels lab =
                labels(spec.data, spec.sketch_edges, t0, static_cast<int>(i));
            b.s_merge_small_network(static_cast<int>(i), u, v, lab);
        } else {
            b.s_merge_single_tensor(static_cast<int>(i), u, v);
        }
    }

    const std::string output = b.open_of_root();
    if (output.empty()) throw std::logic_error("plan finished without an open sketch dimension");
    Embedding emb = b.finish_embedding(output);
    SketchPlan plan = b.finish_plan();
    return {std::move(emb), std::move(plan)};
}

}  // namespace

std::pair<Embedding, SketchPlan> build_alg1_embedding(const SketchSpec& spec,
                                                      const ContractionTree& t0) {
    return build_merged_embedding(spec, t0, MergeStyle::SmallNetwork);
}

std::pair<Embedding, SketchPlan> build_tree_embedding(const SketchSpec& spec,
                                                      const ContractionTree& t0) {
    return build_merged_embedding(spec, t0, MergeStyle::SingleTensor);
}

Embedding build_tt_embedding(const SketchSpec& spec) {
    spec.validate();
    const int n = static_cast<int>(spec.sketch_edges.size());
    const std::int64_t m = spec.sketch_size;
    Embedding emb;
    emb.attach_edges = spec.sketch_edges;
    for (int j = 0; j < n; ++j) {
        const std::string name = "@T:" + std::to_string(j + 1);
        emb.network.add_vertex(name);
        emb.linearization.push_back(name);
        emb.variances[name] = 1.0 / static_cast<double>(m);
        if (j > 0) {
            const std::string redge = "@r:" + std::to_string(j);
            emb.network.attach_endpoint(redge, name);
            emb.network.set_dangling(redge, false);
        }
        const Hyperedge& ej = spec.data.edge(spec.sketch_edges[j]);
        emb.network.add_edge({ej.id, {name}, true, ej.size});
        const std::string out = j + 1 < n ? "@r:" + std::to_string(j + 1) : std::string("@tto");
        emb.network.add_edge({out, {name}, true, m});
        if (j + 1 == n) emb.output_edges = {out};
    }
    return emb;
}

SketchPlan tt_sketch_plan(const SketchSpec& spec, const ContractionTree& t0,
                          const Embedding& /*emb*/) {
    const Classification clf =
        classify_contractions(spec.data, spec.sketch_edges, t0, spec.sketch_size);
    PlanBuilder b(spec);
    const int n = static_cast<int>(spec.sketch_edges.size());

    // Mirror the chain into the system; each core starts as its own component.
    std::vector<int> core_idx(n);
    std::vector<bool> attached(n, false);
    for (int j = 0; j < n; ++j) {
        const std::string name = "@T:" + std::to_string(j + 1);
        core_idx[j] = b.add_embed_vertex(name);
        if (j > 0) b.consume_edge("@r:" + std::to_string(j), name);
        const std::string out = j + 1 < n ? "@r:" + std::to_string(j + 1) : std::string("@tto");
        b.add_embed_edge(out, name, spec.sketch_size);
    }

    auto holder_comp = [&](int j) {
        const VSet hv = spec.data.edge_vertices(spec.data.edge(spec.sketch_edges[j]));
        return b.comp_containing(hv);
    };

    auto attach_core = [&](int j) {
        const int target = holder_comp(j);
        const std::string name = "@T:" + std::to_string(j + 1);
        PlanStep step;
        step.kind = PlanStep::Kind::ContractSketch;
        step.stage = PlanStage::Kron;
        step.a = b.comp(target).verts;
        step.b = {core_idx[j]};
        step.embedding_vertices = {name};
        b.consume_edge(spec.sketch_edges[j], name);
        step.prims.push_back(b.prim_merge(target, b.comp_of(core_idx[j])));
        attached[j] = true;
        b.push_step(std::move(step));
    };

    auto stage_of = [&](int i) {
        if (std::find(clf.s_set.begin(), clf.s_set.end(), i) != clf.s_set.end())
            return PlanStage::S;
        if (std::find(clf.i_set.begin(), clf.i_set.end(), i) != clf.i_set.end())
            return PlanStage::I;
        return PlanStage::Kron;
    };

    for (std::size_t i = 0; i < t0.path().size(); ++i) {
        const auto& [u, v] = t0.path()[i];
        const int cu = b.comp_containing(u);
        const int cv = b.comp_containing(v);
        if (!b.has_embedding(cu) && !b.has_embedding(cv)) {
            // Seed the chain on the side holding the earliest sketch edge so
            // later merges run against reduced dimensions.
            for (int j = 0; j < n; ++j) {
                if (attached[j]) continue;
                const int hc = holder_comp(j);
                if (hc == cu || hc == cv) {
                    attach_core(j);
                    break;
                }
            }
        }
        b.contract_data(u, v, stage_of(static_cast<int>(i)));
        // Attach every chain tensor whose sketch edge now sits in the merged
        // component.
        const int merged = b.comp_containing(u);
        for (int j = 0; j < n; ++j)
            if (!attached[j] && holder_comp(j) == merged) attach_core(j);
    }
    for (int j = 0; j < n; ++j)
        if (!attached[j]) attach_core(j);

    return b.finish_plan();
}

Embedding build_khatri_rao_embedding(const SketchSpec& spec) {
    spec.validate();
    const int n = static_cast<int>(spec.sketch_edges.size());
    Embedding emb;
    emb.attach_edges = spec.sketch_edges;
    emb.output_edges = {"@kr"};
    std::vector<std::string> names;
    for (int j = 0; j < n; ++j) {
        const std::string name = "@KR:" + std::to_string(j + 1);
        names.push_back(name);
        emb.network.add_vertex(name);
        emb.linearization.push_back(name);
        // Not linearizable; per-tensor variance m^(-1/N) keeps the composed
        // map norm-unbiased.
        emb.variances[name] =
            std::pow(static_cast<double>(spec.sketch_size), -1.0 / static_cast<double>(n));
        const Hyperedge& ej = spec.data.edge(spec.sketch_edges[j]);
        emb.network.add_edge({ej.id, {name}, true, ej.size});
    }
    emb.network.add_edge({"@kr", names, true, spec.sketch_size});
    return emb;
}

SketchPlan khatri_rao_sketch_plan(const SketchSpec& spec, const ContractionTree& t0,
                                  const Embedding& /*emb*/) {
    const Classification clf =
        classify_contractions(spec.data, spec.sketch_edges, t0, spec.sketch_size);
    PlanBuilder b(spec);
    const int n = static_cast<int>(spec.sketch_edges.size());

    std::vector<int> kr_idx(n);
    std::vector<std::string> names;
    for (int j = 0; j < n; ++j) names.push_back("@KR:" + std::to_string(j + 1));
    for (int j = 0; j < n; ++j) kr_idx[j] = b.add_embed_vertex(names[j]);
    // The shared output hyperedge spans every matrix and keeps a free end.
    b.system_.add_edge({"@kr", names, true, spec.sketch_size});
    b.ge_.add_edge({"@kr", names, true, spec.sketch_size});
    b.view_.embed_edges.insert("@kr");
    for (int j = 0; j < n; ++j) b.comp(b.comp_of(kr_idx[j])).open = "@kr";

    for (int j = 0; j < n; ++j) {
        const VSet hv = spec.data.edge_vertices(spec.data.edge(spec.sketch_edges[j]));
        const int target = b.comp_containing(hv);
        PlanStep step;
        step.kind = PlanStep::Kind::ContractSketch;
        step.stage = PlanStage::Kron;
        step.a = b.comp(target).verts;
        step.b = {kr_idx[j]};
        step.embedding_vertices = {names[j]};
        b.consume_edge(spec.sketch_edges[j], names[j]);
        step.prims.push_back(b.prim_merge(target, b.comp_of(kr_idx[j])));
        b.push_step(std::move(step));
    }
    for (std::size_t i = 0; i < t0.path().size(); ++i) {
        const auto& [u, v] = t0.path()[i];
        PlanStage stage = PlanStage::I;
        if (std::find(clf.s_set.begin(), clf.s_set.end(), static_cast<int>(i)) != clf.s_set.end())
            stage = PlanStage::S;
        else if (std::find(clf.i_set.begin(), clf.i_set.end(), static_cast<int>(i)) ==
                 clf.i_set.end())
            stage = PlanStage::Kron;
        b.contract_data(u, v, stage);
    }
    return b.finish_plan();
}

std::pair<Embedding, SketchPlan> build_embedding(EmbeddingKind kind, const SketchSpec& spec,
                                                 const ContractionTree& t0) {
    switch (kind) {
        case EmbeddingKind::Tn: return build_alg1_embedding(spec, t0);
        case EmbeddingKind::Tree: return build_tree_embedding(spec, t0);
        case EmbeddingKind::Tt: {
            Embedding emb = build_tt_embedding(spec);
            SketchPlan plan = tt_sketch_plan(spec, t0, emb);
            return {std::move(emb), std::move(plan)};
        }
        case EmbeddingKind::KhatriRao: {
            Embedding emb = build_khatri_rao_embedding(spec);
            SketchPlan plan = khatri_rao_sketch_plan(spec, t0, emb);
            return {std::move(emb), std::move(plan)};
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace tnsketch
