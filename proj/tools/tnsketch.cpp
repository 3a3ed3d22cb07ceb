#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tnsketch/bounds.hpp"
#include "tnsketch/cp_als.hpp"
#include "tnsketch/embedding.hpp"
#include "tnsketch/experiments.hpp"
#include "tnsketch/tt_round.hpp"

namespace {

using namespace tnsketch;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNotFound = 3;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);  // parse errors carry byte positions
}

int cmd_accuracy(const ExperimentConfig& cfg, const std::string& out_path,
                 const nlohmann::json& meta) {
    const auto rows = accuracy_experiment(cfg);
    std::ostringstream body;
    body << "# " << meta.dump() << "\n" << accuracy_csv(rows);
    write_output(out_path, body.str());
    for (const auto& r : rows)
        if (!r.found()) return kExitNotFound;
    return kExitOk;
}

int cmd_cost(const std::string& network_file, const std::string& tree_file, std::int64_t m,
             const std::string& out_path) {
    const nlohmann::json jnet = load_json(network_file);
    SketchSpec spec = SketchSpec::from_json(jnet, m);
    const ContractionTree t0 = tree_file.empty()
                                   ? default_tree(spec.data)
                                   : ContractionTree::from_json(load_json(tree_file), spec.data);
    nlohmann::json out;
    for (const auto kind : {EmbeddingKind::Tn, EmbeddingKind::Tree, EmbeddingKind::Tt,
                            EmbeddingKind::KhatriRao}) {
        auto [emb, plan] = build_embedding(kind, spec, t0);
        CostReport report = plan_cost_report(plan, spec, t0);
        out[to_string(kind)] = report.to_json();
    }
    write_output(out_path, out.dump(2) + "\n");
    return kExitOk;
}

int cmd_sketch(const std::string& network_file, const std::string& kind_name, std::int64_t m,
               std::uint64_t seed, bool strict, const std::string& out_prefix) {
    const nlohmann::json jnet = load_json(network_file);
    SketchSpec spec = SketchSpec::from_json(jnet, m);
    spec.strict_accuracy = strict;
    const ContractionTree t0 = default_tree(spec.data);
    const EmbeddingKind kind = embedding_kind_from_string(kind_name);
    auto [emb, plan] = build_embedding(kind, spec, t0);
    const ExecutionResult exec = execute_plan(plan, spec, emb, {seed, 0});

    nlohmann::json jt;
    jt["mode_labels"] = exec.tensor.mode_labels;
    jt["shape"] = exec.tensor.shape;
    jt["values"] = exec.tensor.values;
    write_output(out_prefix + ".tensor.json", jt.dump() + "\n");

    nlohmann::json jl;
    jl["embedding"] = to_string(kind);
    jl["sketch_size"] = m;
    jl["seed"] = seed;
    jl["total_flops"] = exec.total_flops.str();
    jl["modeled_flops"] = plan.total_flops.str();
    jl["per_step_flops"] = nlohmann::json::array();
    for (const auto& f : exec.step_flops) jl["per_step_flops"].push_back(f.str());
    jl["embedding_dump"] = emb.to_json();
    write_output(out_prefix + ".ledger.json", jl.dump(2) + "\n");
    return kExitOk;
}

int cmd_cp_als(int order, std::int64_t size, std::int64_t rank, std::int64_t target_rank,
               std::int64_t m, double epsilon, double delta, double constant, int iters,
               std::uint64_t seed, const std::string& out_prefix) {
    if (target_rank <= 0) target_rank = rank;
    if (m <= 0) m = cp_sketch_size(order, target_rank, epsilon, delta, constant);
    const std::vector<std::int64_t> dims(order, size);
    const DenseTensor x = cp_synthetic(dims, rank, {seed, 11});
    const CpResult res = sketched_cp_als(x, target_rank, m, iters, {seed, 0});

    nlohmann::json jl = res.ledger.to_json();
    jl["sketch_size"] = m;
    jl["rank"] = target_rank;
    jl["rank_deficient"] = res.rank_deficient;
    write_output(out_prefix + ".ledger.json", jl.dump(2) + "\n");

    std::ostringstream csv;
    csv << "sweep,relative_residual\n";
    for (std::size_t i = 0; i < res.residuals.size(); ++i)
        csv << (i + 1) << "," << res.residuals[i] << "\n";
    write_output(out_prefix + ".residuals.csv", csv.str());
    return kExitOk;
}

int cmd_tt_round(int order, std::int64_t size, std::int64_t rank, std::int64_t m,
                 std::uint64_t seed, const std::string& out_prefix) {
    const TensorTrain tt = TensorTrain::random_uniform(order, size, rank, {seed, 5});
    const TtRoundResult res = tt_round_sketch(tt, m, {seed, 0});
    nlohmann::json jl = res.ledger.to_json();
    jl["sketch_size"] = m;
    jl["regime_warning"] = res.regime_warning;
    jl["boundaries"] = nlohmann::json::array();
    for (const auto& p : res.boundary_sketches)
        jl["boundaries"].push_back({{"shape", p.shape}, {"mode_labels", p.mode_labels}});
    write_output(out_prefix + ".ledger.json", jl.dump(2) + "\n");
    if (res.regime_warning)
        std::cerr << "warning: sketch size is not below the tensor train rank; cost analysis "
                     "does not cover this regime\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian tensor-network sketching toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_path;
    app.add_option("--seed", seed, "global random seed");
    app.add_option("--threads", threads, "worker threads for experiment drivers");
    app.add_option("--out", out_path, "output path (default stdout / prefix)");

    // accuracy
    auto* acc = app.add_subcommand("accuracy", "smallest sketch size meeting an error threshold");
    std::string input_kind = "kronecker", input_file, embeddings = "tn,tree,tt,khatri-rao";
    int order = 4, trials = 25, repeats = 1;
    std::int64_t size = 1000, rank = 8, m_min = 4, m_max = 4096;
    double threshold = 0.2;
    acc->add_option("--input", input_kind, "tensor-train | kronecker | file");
    acc->add_option("--file", input_file, "network file for --input file");
    acc->add_option("--order", order);
    acc->add_option("--size", size);
    acc->add_option("--rank", rank);
    acc->add_option("--embedding", embeddings, "comma list of tn,tree,tt,khatri-rao");
    acc->add_option("--threshold", threshold);
    acc->add_option("--trials", trials);
    acc->add_option("--repeats-per-size", repeats);
    acc->add_option("--m-min", m_min);
    acc->add_option("--m-max", m_max);

    // cost
    auto* cost = app.add_subcommand("cost", "modeled costs, bounds and ratios for a network");
    std::string network_file, tree_file;
    std::int64_t m = 16;
    cost->add_option("--network", network_file)->required();
    cost->add_option("--tree", tree_file, "contraction tree JSON (default: left-deep chain)");
    cost->add_option("--m", m, "sketch size")->required();

    // sketch
    auto* sk = app.add_subcommand("sketch", "sketch a file-described network end to end");
    std::string sk_network, sk_kind = "tn";
    std::int64_t sk_m = 16;
    bool strict = false;
    sk->add_option("--network", sk_network)->required();
    sk->add_option("--embedding", sk_kind);
    sk->add_option("--m", sk_m)->required();
    sk->add_flag("--strict-accuracy", strict,
                 "clamp small-network internal edges to the sketch size");

    // cp-als
    auto* cp = app.add_subcommand("cp-als", "sketched CP-ALS on a synthetic tensor");
    int cp_order = 3, cp_iters = 10;
    std::int64_t cp_size = 20, cp_rank = 4, cp_target = 0, cp_m = 0;
    double eps = 0.2, delta = 0.1, constant = 0.15;
    cp->add_option("--order", cp_order);
    cp->add_option("--size", cp_size);
    cp->add_option("--rank", cp_rank, "synthetic CP rank of the input");
    cp->add_option("--target-rank", cp_target, "decomposition rank (default: input rank)");
    cp->add_option("--sketch-size", cp_m, "sketch size (default from epsilon/delta/constant)");
    cp->add_option("--epsilon", eps);
    cp->add_option("--delta", delta);
    cp->add_option("--constant", constant);
    cp->add_option("--iters", cp_iters);

    // tt-round
    auto* ttr = app.add_subcommand("tt-round", "boundary sketches for tensor-train rounding");
    int tt_order = 8;
    std::int64_t tt_size = 40, tt_rank = 10, tt_m = 6;
    ttr->add_option("--order", tt_order);
    ttr->add_option("--size", tt_size);
    ttr->add_option("--rank", tt_rank);
    ttr->add_option("--sketch-size", tt_m);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (acc->parsed()) {
            ExperimentConfig cfg;
            if (input_kind == "kronecker") cfg.input = InputKind::Kronecker;
            else if (input_kind == "tensor-train") cfg.input = InputKind::TensorTrain;
            else if (input_kind == "file") cfg.input = InputKind::File;
            else throw std::invalid_argument("unknown --input " + input_kind);
            cfg.file = input_file;
            cfg.order = order;
            cfg.size = size;
            cfg.rank = rank;
            cfg.threshold = threshold;
            cfg.trials = trials;
            cfg.repeats_per_size = repeats;
            cfg.seed = seed;
            cfg.m_min = m_min;
            cfg.m_max = m_max;
            cfg.threads = threads;
            cfg.embeddings.clear();
            std::stringstream ss(embeddings);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) cfg.embeddings.push_back(embedding_kind_from_string(tok));
            nlohmann::json meta{{"input", input_kind},   {"order", order},
                                {"size", size},          {"rank", rank},
                                {"threshold", threshold}, {"trials", trials},
                                {"repeats_per_size", repeats},
                                {"grid", "geometric-doubling + bisection refinement"},
                                {"m_min", m_min},        {"m_max", m_max},
                                {"seed", seed}};
            return cmd_accuracy(cfg, out_path, meta);
        }
        if (cost->parsed()) return cmd_cost(network_file, tree_file, m, out_path);
        if (sk->parsed())
            return cmd_sketch(sk_network, sk_kind, sk_m, seed, strict,
                              out_path.empty() ? "sketch" : out_path);
        if (cp->parsed())
            return cmd_cp_als(cp_order, cp_size, cp_rank, cp_target, cp_m, eps, delta, constant,
                              cp_iters, seed, out_path.empty() ? "cp_als" : out_path);
        if (ttr->parsed())
            return cmd_tt_round(tt_order, tt_size, tt_rank, tt_m, seed,
                                out_path.empty() ? "tt_round" : out_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
