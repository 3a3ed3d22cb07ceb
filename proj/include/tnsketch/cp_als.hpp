#ifndef TNSKETCH_CP_ALS_HPP
#define TNSKETCH_CP_ALS_HPP

#include <cstdint>
#include <vector>

#include "tnsketch/contraction_tree.hpp"
#include "tnsketch/dense_tensor.hpp"
#include "tnsketch/ledger.hpp"
#include "tnsketch/rng.hpp"
#include "tnsketch/tensor_network.hpp"

namespace tnsketch {

/// Khatri-Rao data network of the CP least-squares subproblem for mode
/// `excluded` (0-based; -1 keeps all modes): one vertex per remaining factor,
/// a dangling physical edge x<j> per vertex (the sketch dims) and the shared
/// rank hyperedge "r" with a free end.
TensorNetwork cp_subproblem_network(const std::vector<std::int64_t>& dims, std::int64_t rank,
                                    int excluded);

/// Subproblem contraction trees T_1..T_N in the alternating order that makes
/// the per-mode embeddings share chain intermediates: T_i contracts
/// v_1..v_{i-1} left to right, v_N..v_{i+1} right to left, then joins the two
/// chains. Tree i-1 indexes the vertices of cp_subproblem_network(dims, R, i-1).
std::vector<ContractionTree> cp_subproblem_trees(int n);

/// Sketch size for an (1+epsilon)-accurate CP-ALS subproblem at failure
/// probability delta: ceil(C * N * R * ln(1/delta) / epsilon^2). The leading
/// constant is not pinned by theory; the default is calibrated by test.
std::int64_t cp_sketch_size(int n, std::int64_t rank, double epsilon, double delta,
                            double constant = 0.15);

struct CpResult {
    /// Factor j has modes (x<j>, "r"), shape (s_j, R).
    std::vector<DenseTensor> factors;
    FlopLedger ledger;
    std::vector<double> residuals;  // relative Frobenius residual per sweep
    bool rank_deficient = false;    // some sketched solve fell back to min-norm
};

/// Sketched alternating least squares: one embedding per mode built over the
/// alternating contraction trees, chain intermediates reused across
/// subproblems, right-hand sides sketched once up front. Factors are
/// initialized from the seeded Gaussian source.
CpResult sketched_cp_als(const DenseTensor& x, std::int64_t rank, std::int64_t sketch_size,
                         int iterations, RandomSource rng, bool compute_residuals = true);

/// Reference ALS with exact least-squares solves; the oracle for monotone
/// objective checks and residual comparisons.
CpResult reference_cp_als(const DenseTensor& x, std::int64_t rank, int iterations,
                          RandomSource rng, bool compute_residuals = true);

/// The sketched left-hand side S_i L_i (modes "r" and the open sketch port)
/// for a fixed factor set, computed either through the shared chain caches or
/// with every chain recomputed from scratch. The two paths perform the same
/// operations in the same order, so they agree bit for bit; exposed to pin
/// that reuse-soundness invariant.
DenseTensor cp_sketched_lhs(const std::vector<DenseTensor>& factors, std::int64_t sketch_size,
                            int mode, RandomSource rng, bool reuse_chains);

/// Solves one sketched least-squares subproblem for fixed factors and data,
/// returning the updated factor for `mode` (modes x<mode+1>, "r"). Drives the
/// (1+epsilon)-accuracy batteries.
DenseTensor cp_sketched_subproblem(const std::vector<DenseTensor>& factors,
                                   const DenseTensor& x, std::int64_t sketch_size, int mode,
                                   RandomSource rng);

/// Exact-rank synthetic input: contraction of uniform [0,1) factors.
DenseTensor cp_synthetic(const std::vector<std::int64_t>& dims, std::int64_t rank,
                         RandomSource rng);

/// Residual |X - [[A_1..A_N]]|_F / |X|_F, materialized densely.
double cp_residual(const DenseTensor& x, const std::vector<DenseTensor>& factors);

}  // namespace tnsketch

#endif  // TNSKETCH_CP_ALS_HPP
