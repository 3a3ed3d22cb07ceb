#include "tnsketch/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tnsketch/tt_round.hpp"

namespace tnsketch {

TensorNetwork kronecker_network(int order, std::int64_t size, std::uint64_t seed) {
    TensorNetwork net;
    for (int j = 0; j < order; ++j) net.add_vertex("v" + std::to_string(j + 1));
    for (int j = 0; j < order; ++j)
        net.add_edge({"x" + std::to_string(j + 1), {"v" + std::to_string(j + 1)}, true, size});
    net.bind_random_uniform(seed);
    return net;
}

TensorNetwork tensor_train_network(int order, std::int64_t size, std::int64_t rank,
                                   std::uint64_t seed) {
    TensorTrain tt = TensorTrain::random_uniform(order, size, rank, {seed, 0});
    return tt.to_network();
}

std::vector<std::string> default_sketch_edges(const TensorNetwork& net, bool drop_last) {
    std::vector<std::string> out;
    for (const auto& e : net.edges())
        if (e.dangling && e.id.rfind("x", 0) == 0) out.push_back(e.id);
    std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
        return std::stoi(a.substr(1)) < std::stoi(b.substr(1));
    });
    if (drop_last && !out.empty()) out.pop_back();
    return out;
}

ContractionTree default_tree(const TensorNetwork& net) {
    std::vector<int> order(net.num_vertices());
    for (int i = 0; i < net.num_vertices(); ++i) order[i] = i;
    return ContractionTree::chain(order);
}

double sketching_error(const SketchSpec& spec, const ContractionTree& t0, EmbeddingKind kind,
                       RandomSource rng, double data_norm) {
    auto [emb, plan] = build_embedding(kind, spec, t0);
    const ExecutionResult exec = execute_plan(plan, spec, emb, rng);
    return std::abs(exec.tensor.norm2() / data_norm - 1.0);
}

namespace {

struct InputInstance {
    SketchSpec spec;
    ContractionTree t0;
    double norm = 0.0;
};

InputInstance make_input(const ExperimentConfig& cfg, int input_id,
                         const nlohmann::json* file_json) {
    InputInstance inst;
    const std::uint64_t seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(input_id);
    switch (cfg.input) {
        case InputKind::Kronecker:
            inst.spec.data = kronecker_network(cfg.order, cfg.size, seed);
            break;
        case InputKind::TensorTrain:
            inst.spec.data = tensor_train_network(cfg.order, cfg.size, cfg.rank, seed);
            break;
        case InputKind::File: {
            inst.spec.data = TensorNetwork::from_json(*file_json);
            break;
        }
    }
    if (cfg.input == InputKind::File && file_json->contains("sketch_edges")) {
        for (const auto& id : file_json->at("sketch_edges"))
            inst.spec.sketch_edges.push_back(id.get<std::string>());
    } else {
        inst.spec.sketch_edges = default_sketch_edges(inst.spec.data);
    }
    inst.t0 = default_tree(inst.spec.data);
    inst.norm = tn_norm(inst.spec.data);
    return inst;
}

}  // namespace

std::vector<AccuracyRow> accuracy_experiment(const ExperimentConfig& cfg) {
    nlohmann::json file_json;
    if (cfg.input == InputKind::File) {
        std::ifstream in(cfg.file);
        if (!in) throw std::invalid_argument("cannot open network file " + cfg.file);
        file_json = nlohmann::json::parse(in);
    }

    struct Job {
        int input_id;
        EmbeddingKind kind;
    };
    std::vector<Job> jobs;
    const int inputs = cfg.input == InputKind::File ? 1 : cfg.trials;
    for (int i = 0; i < inputs; ++i)
        for (const auto k : cfg.embeddings) jobs.push_back({i, k});

    std::vector<AccuracyRow> rows(jobs.size());

    auto run_job = [&](const Job& job, AccuracyRow* row) {
        const InputInstance inst = make_input(cfg, job.input_id, &file_json);
        row->input_id = job.input_id;
        row->embedding = job.kind;

        auto passes = [&](std::int64_t m) {
            SketchSpec spec = inst.spec;
            spec.sketch_size = m;
            for (int r = 0; r < cfg.repeats_per_size; ++r) {
                const RandomSource rng{cfg.seed,
                                       (static_cast<std::uint64_t>(job.input_id) << 40) ^
                                           (static_cast<std::uint64_t>(m) << 16) ^
                                           static_cast<std::uint64_t>(r * 4 +
                                                                      static_cast<int>(job.kind))};
                if (sketching_error(spec, inst.t0, job.kind, rng, inst.norm) > cfg.threshold)
                    return false;
            }
            return true;
        };

        // Sketch sizes cannot exceed the smallest sketched dimension.
        std::int64_t cap = cfg.m_max;
        for (const auto& id : inst.spec.sketch_edges)
            cap = std::min(cap, inst.spec.data.edge(id).size);

        // Geometric grid (always probing the cap), then bisection refinement
        // inside the first passing bracket.
        std::vector<std::int64_t> grid;
        for (std::int64_t m = std::max<std::int64_t>(1, cfg.m_min); m < cap; m *= 2)
            grid.push_back(m);
        if (grid.empty() || grid.back() != cap) grid.push_back(cap);
        std::int64_t lo = 0, hi = -1, prev = 0;
        for (const std::int64_t m : grid) {
            if (passes(m)) {
                lo = prev;
                hi = m;
                break;
            }
            prev = m;
        }
        if (hi < 0) {
            row->smallest_m = -1;
            return;
        }
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (mid <= 0) break;
            if (passes(mid)) hi = mid;
            else lo = mid;
        }
        row->smallest_m = hi;
        SketchSpec spec = inst.spec;
        spec.sketch_size = hi;
        auto [emb, plan] = build_embedding(job.kind, spec, inst.t0);
        row->flops = plan.total_flops;
    };

    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_job(jobs[i], &rows[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= jobs.size()) return;
                    run_job(jobs[i], &rows[i]);
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    return rows;
}

std::string accuracy_csv(const std::vector<AccuracyRow>& rows) {
    std::ostringstream out;
    out << "input_id,embedding,smallest_m,flops\n";
    for (const auto& r : rows) {
        out << r.input_id << "," << to_string(r.embedding) << ",";
        if (r.found()) out << r.smallest_m << "," << r.flops.str();
        else out << "not-found,not-found";
        out << "\n";
    }
    return out.str();
}

}  // namespace tnsketch
