#ifndef TNSKETCH_TT_ROUND_HPP
#define TNSKETCH_TT_ROUND_HPP

#include <cstdint>
#include <vector>

#include "tnsketch/dense_tensor.hpp"
#include "tnsketch/ledger.hpp"
#include "tnsketch/rng.hpp"
#include "tnsketch/tensor_network.hpp"

namespace tnsketch {

/// Tensor train with boundary ranks 1 (boundary modes omitted): core k has
/// modes (@p:<k-1>, x<k>, @p:<k>), the first and last cores drop the missing
/// boundary mode.
struct TensorTrain {
    std::vector<DenseTensor> cores;

    int order() const { return static_cast<int>(cores.size()); }
    std::int64_t phys_dim(int k) const;  // size of x<k+1>, 0-based core
    std::int64_t rank(int k) const;      // rank between cores k and k+1, 0-based bond

    static TensorTrain random_uniform(int order, std::int64_t phys, std::int64_t rank,
                                      RandomSource rng);
    /// Network with vertices v1..vN, dangling physical edges and rank bonds.
    TensorNetwork to_network() const;
};

/// Partial sketches of the tensor train against a chain embedding with all
/// internal ranks m: boundary_sketches[k] is the m x R_{k+1} matrix obtained
/// by sketching modes x1..x<k+1> (0-based k), the reusable core quantity of
/// randomized rounding. The chain is swept once left to right, so all N-1
/// boundaries cost one pass.
struct TtRoundResult {
    std::vector<DenseTensor> boundary_sketches;
    FlopLedger ledger;
    bool regime_warning = false;  // m >= R, outside the analyzed regime
};

TtRoundResult tt_round_sketch(const TensorTrain& tt, std::int64_t sketch_size,
                              RandomSource rng);

/// Deterministic rounding oracle: right-to-left orthogonalization sweep, then
/// left-to-right truncated-SVD rank reduction.
TensorTrain tt_round_reference(const TensorTrain& tt, std::int64_t target_rank);

/// Contracts a vector into the last physical mode; result is the tensor train
/// over the remaining modes (used by sketching accuracy oracles).
TensorTrain tt_apply_last(const TensorTrain& tt, const DenseTensor& v);

/// Dense materialization (modes x1..xN); guarded by max_entries.
DenseTensor tt_materialize(const TensorTrain& tt, std::int64_t max_entries = 10000000);

}  // namespace tnsketch

#endif  // TNSKETCH_TT_ROUND_HPP
