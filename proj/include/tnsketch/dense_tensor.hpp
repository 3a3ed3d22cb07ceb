#ifndef TNSKETCH_DENSE_TENSOR_HPP
#define TNSKETCH_DENSE_TENSOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tnsketch/flops.hpp"
#include "tnsketch/rng.hpp"

namespace tnsketch {

/// Dense row-major tensor whose modes are named by hyperedge ids. A rank-0
/// tensor holds exactly one value.
struct DenseTensor {
    std::vector<std::string> mode_labels;
    std::vector<std::int64_t> shape;
    std::vector<double> values;

    DenseTensor() = default;
    DenseTensor(std::vector<std::string> labels, std::vector<std::int64_t> sh);

    std::int64_t size() const;
    int order() const { return static_cast<int>(shape.size()); }
    bool has_mode(const std::string& label) const;
    int mode_index(const std::string& label) const;  // -1 when absent
    std::int64_t mode_size(const std::string& label) const;

    double norm2() const;
    void scale(double factor);

    /// Checks product(shape) == values.size() and labels/shape agreement.
    void validate() const;
};

/// Reorders modes into `new_order`, which must be a permutation of the
/// current labels.
DenseTensor permuted(const DenseTensor& t, const std::vector<std::string>& new_order);

/// Pairwise contraction. `sum_modes` are summed over, `batch_modes` are
/// shared and kept once; both lists must appear in both operands. Remaining
/// modes pass through. Result mode order: batch, then a's own, then b's own.
/// Accumulates the exact multiply-add count into *madds when given.
DenseTensor contract_pair_dense(const DenseTensor& a, const DenseTensor& b,
                                const std::vector<std::string>& sum_modes,
                                const std::vector<std::string>& batch_modes,
                                BigInt* madds = nullptr);

/// Reference contraction used by oracle paths: plain index-loop accumulation,
/// no matricization. Deliberately kept independent of contract_pair_dense.
DenseTensor naive_contract_dense(const DenseTensor& a, const DenseTensor& b,
                                 const std::vector<std::string>& sum_modes,
                                 const std::vector<std::string>& batch_modes);

/// i.i.d. normal(0, variance) entries, deterministic in src.
/// Throws std::invalid_argument("invalid distribution") when variance <= 0.
DenseTensor gaussian_tensor(std::vector<std::string> labels, std::vector<std::int64_t> shape,
                            double variance, RandomSource src);

/// i.i.d. uniform [0, 1) entries, deterministic in src.
DenseTensor uniform01_tensor(std::vector<std::string> labels, std::vector<std::int64_t> shape,
                             RandomSource src);

}  // namespace tnsketch

#endif  // TNSKETCH_DENSE_TENSOR_HPP
