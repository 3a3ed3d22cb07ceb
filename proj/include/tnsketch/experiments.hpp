#ifndef TNSKETCH_EXPERIMENTS_HPP
#define TNSKETCH_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tnsketch/contraction_tree.hpp"
#include "tnsketch/embedding.hpp"
#include "tnsketch/tensor_network.hpp"

namespace tnsketch {

/// Kronecker-product input: one vector vertex per mode, every mode sketched,
/// entries i.i.d. uniform [0,1).
TensorNetwork kronecker_network(int order, std::int64_t size, std::uint64_t seed);

/// Tensor-train input with uniform [0,1) cores; physical edges dangle.
TensorNetwork tensor_train_network(int order, std::int64_t size, std::int64_t rank,
                                   std::uint64_t seed);

/// Sketch edges of a generated network: every dangling edge named x*.
std::vector<std::string> default_sketch_edges(const TensorNetwork& net, bool drop_last = false);

/// Left-deep data contraction tree v1, v2, ... (the given-tree convention for
/// generated inputs).
ContractionTree default_tree(const TensorNetwork& net);

enum class InputKind { TensorTrain, Kronecker, File };

struct ExperimentConfig {
    InputKind input = InputKind::Kronecker;
    std::string file;           // when input == File
    int order = 4;
    std::int64_t size = 1000;
    std::int64_t rank = 8;      // tensor-train inputs only
    std::vector<EmbeddingKind> embeddings{EmbeddingKind::Tn, EmbeddingKind::Tree,
                                          EmbeddingKind::Tt, EmbeddingKind::KhatriRao};
    double threshold = 0.2;     // relative sketching error bound
    int trials = 25;            // random inputs
    int repeats_per_size = 1;   // error draws per sketch size
    std::uint64_t seed = 0;
    std::int64_t m_min = 4;
    std::int64_t m_max = 4096;
    int threads = 1;
};

struct AccuracyRow {
    int input_id = 0;
    EmbeddingKind embedding = EmbeddingKind::Tn;
    std::int64_t smallest_m = -1;  // -1 encodes "not-found"
    BigInt flops = 0;              // plan flops at smallest_m
    bool found() const { return smallest_m > 0; }
};

/// Smallest-sketch-size search: geometric grid from m_min (doubling up to
/// m_max), then bisection refinement inside the first passing bracket. A size
/// passes when every repeat has |‖Sx‖/‖x‖ - 1| <= threshold. Deterministic in
/// (seed, input id, m, repeat) regardless of thread count.
std::vector<AccuracyRow> accuracy_experiment(const ExperimentConfig& cfg);

std::string accuracy_csv(const std::vector<AccuracyRow>& rows);

/// Relative sketching error of one draw: |‖Sx‖/‖x‖ - 1|.
double sketching_error(const SketchSpec& spec, const ContractionTree& t0, EmbeddingKind kind,
                       RandomSource rng, double data_norm);

}  // namespace tnsketch

#endif  // TNSKETCH_EXPERIMENTS_HPP
