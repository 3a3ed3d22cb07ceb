#include "tnsketch/cp_als.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <cmath>
#include <stdexcept>

#include "tnsketch/embedding.hpp"

namespace tnsketch {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::string xlabel(int j) { return "x" + std::to_string(j + 1); }   // 0-based mode
std::string klabel(int j) { return "k" + std::to_string(j + 1); }

// Two-tensor merge node: v1 carries the two incoming sketch ports and the
// internal edge, v2 maps the internal edge to the output port.
struct ZPair {
    DenseTensor v1, v2;
    const std::string& tedge() const { return v1.mode_labels[2]; }
    const std::string& out() const { return v2.mode_labels[1]; }
};

// All embedding tensors of the N subproblem sketches, shared across
// subproblems so chain intermediates can be reused.
struct CpEmbedding {
    int n = 0;
    std::int64_t m = 0;
    std::int64_t alpha = 0;
    std::vector<DenseTensor> k;       // K_j: (x<j>, k<j>)
    std::map<int, ZPair> zr, zl, zf;  // right chains, left chains, final merges

    static std::string open_r(int j, int n) {
        return j == n ? klabel(n - 1) : "oR" + std::to_string(j);
    }
    static std::string open_l(int j) { return j == 1 ? klabel(0) : "oL" + std::to_string(j); }
};

CpEmbedding make_cp_embedding(int n, const std::vector<std::int64_t>& dims, std::int64_t rank,
                              std::int64_t m, RandomSource rng) {
    CpEmbedding e;
    e.n = n;
    e.m = m;
    e.alpha = std::min<std::int64_t>(m, 2 * zi_internal_edge(1, 1, 1, rank, m));
    std::uint64_t stream = 0;
    auto gauss = [&](std::vector<std::string> labels, std::vector<std::int64_t> shape,
                     double var) {
        return gaussian_tensor(std::move(labels), std::move(shape), var,
                               rng.with_stream(stream++));
    };
    const double vm = 1.0 / static_cast<double>(m);
    const double va = 1.0 / static_cast<double>(e.alpha);
    for (int j = 0; j < n; ++j)
        e.k.push_back(gauss({xlabel(j), klabel(j)}, {dims[j], m}, vm));
    auto zpair = [&](const std::string& in_a, const std::string& in_b, const std::string& tag) {
        ZPair z;
        z.v1 = gauss({in_a, in_b, "t" + tag}, {m, m, e.alpha}, va);
        z.v2 = gauss({"t" + tag, "o" + tag}, {e.alpha, m}, vm);
        return z;
    };
    for (int j = n - 1; j >= 2; --j)
        e.zr[j] = zpair(CpEmbedding::open_r(j + 1, n), klabel(j - 1), "R" + std::to_string(j));
    for (int j = 2; j <= n - 1; ++j)
        e.zl[j] = zpair(CpEmbedding::open_l(j - 1), klabel(j - 1), "L" + std::to_string(j));
    for (int i = 2; i <= n - 1; ++i)
        e.zf[i] = zpair(CpEmbedding::open_l(i - 1), CpEmbedding::open_r(i + 1, n),
                        "F" + std::to_string(i));
    return e;
}

// (left ⊗ v1 over lport) ⊗ right over rport (rank edge batched) ⊗ v2.
DenseTensor z_merge(const ZPair& z, const DenseTensor& left, const std::string& lport,
                    const DenseTensor& right, const std::string& rport,
                    const std::vector<std::string>& batch, BigInt* madds) {
    DenseTensor t = contract_pair_dense(left, z.v1, {lport}, {}, madds);
    t = contract_pair_dense(t, right, {rport}, batch, madds);
    return contract_pair_dense(t, z.v2, {z.tedge()}, {}, madds);
}

// Merge applied to a single tensor carrying both ports (right-hand sides).
DenseTensor z_merge_joint(const ZPair& z, const DenseTensor& t, const std::string& lport,
                          const std::string& rport, BigInt* madds) {
    DenseTensor u = contract_pair_dense(t, z.v1, {lport, rport}, {}, madds);
    return contract_pair_dense(u, z.v2, {z.tedge()}, {}, madds);
}

DenseTensor sketch_factor(const CpEmbedding& e, int j, const DenseTensor& factor,
                          BigInt* madds) {
    return contract_pair_dense(e.k[j], factor, {xlabel(j)}, {}, madds);  // (k<j>, r)
}

// Least-squares solve of |L a^T - R|_F via a rank-revealing orthogonal
// factorization; minimum-norm when rank-deficient.
DenseTensor solve_subproblem(const DenseTensor& lhat, const DenseTensor& rhat,
                             const std::string& open_port, const std::string& xmode,
                             std::int64_t rank, bool* deficient, BigInt* madds) {
    const DenseTensor l = permuted(lhat, {open_port, "r"});
    const DenseTensor r = permuted(rhat, {open_port, xmode});
    const std::int64_t m = l.shape[0];
    const std::int64_t si = r.shape[1];
    Eigen::Map<const RowMat> lm(l.values.data(), m, rank);
    Eigen::Map<const RowMat> rm(r.values.data(), m, si);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(lm);
    if (cod.rank() < rank) *deficient = true;
    const Eigen::MatrixXd sol = cod.solve(rm);  // rank x s_i
    DenseTensor a({xmode, "r"}, {si, rank});
    for (std::int64_t s = 0; s < si; ++s)
        for (std::int64_t q = 0; q < rank; ++q) a.values[s * rank + q] = sol(q, s);
    *madds += BigInt(m) * rank * rank + BigInt(m) * rank * si + BigInt(rank) * rank * si;
    return a;
}

DenseTensor materialize_cp(const std::vector<DenseTensor>& factors, BigInt* madds) {
    DenseTensor acc = factors[0];
    for (std::size_t j = 1; j < factors.size(); ++j)
        acc = contract_pair_dense(acc, factors[j], {}, {"r"}, madds);
    DenseTensor ones({"r"}, {acc.mode_size("r")});
    std::fill(ones.values.begin(), ones.values.end(), 1.0);
    return contract_pair_dense(acc, ones, {"r"}, {}, madds);
}

std::vector<std::string> all_xmodes(int n) {
    std::vector<std::string> v;
    for (int j = 0; j < n; ++j) v.push_back(xlabel(j));
    return v;
}

}  // namespace

TensorNetwork cp_subproblem_network(const std::vector<std::int64_t>& dims, std::int64_t rank,
                                    int excluded) {
    TensorNetwork net;
    std::vector<std::string> names;
    for (int j = 0; j < static_cast<int>(dims.size()); ++j) {
        if (j == excluded) continue;
        const std::string name = "v" + std::to_string(j + 1);
        net.add_vertex(name);
        names.push_back(name);
    }
    for (int j = 0; j < static_cast<int>(dims.size()); ++j) {
        if (j == excluded) continue;
        net.add_edge({xlabel(j), {"v" + std::to_string(j + 1)}, true, dims[j]});
    }
    net.add_edge({"r", names, true, rank});
    return net;
}

std::vector<ContractionTree> cp_subproblem_trees(int n) {
    if (n < 3) throw std::invalid_argument("CP subproblem trees need order >= 3");
    std::vector<ContractionTree> trees;
    for (int i = 1; i <= n; ++i) {
        // Vertex indices within the L_i network: v_1..v_{i-1} are 0..i-2,
        // v_{i+1}..v_N are i-1..n-2.
        std::vector<int> left, right;
        for (int p = 0; p < i - 1; ++p) left.push_back(p);
        for (int p = n - 2; p >= i - 1; --p) right.push_back(p);
        if (left.empty()) trees.push_back(ContractionTree::chain(right));
        else if (right.empty()) trees.push_back(ContractionTree::chain(left));
        else trees.push_back(ContractionTree::join(ContractionTree::chain(left),
                                                   ContractionTree::chain(right)));
    }
    return trees;
}

std::int64_t cp_sketch_size(int n, std::int64_t rank, double epsilon, double delta,
                            double constant) {
    if (!(epsilon > 0.0) || !(delta > 0.0) || delta >= 1.0)
        throw std::invalid_argument("invalid epsilon/delta");
    const double m = constant * static_cast<double>(n) * static_cast<double>(rank) *
                     std::log(1.0 / delta) / (epsilon * epsilon);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(m)));
}

DenseTensor cp_synthetic(const std::vector<std::int64_t>& dims, std::int64_t rank,
                         RandomSource rng) {
    std::vector<DenseTensor> factors;
    for (int j = 0; j < static_cast<int>(dims.size()); ++j)
        factors.push_back(uniform01_tensor({xlabel(j), "r"}, {dims[j], rank},
                                           rng.with_stream(700000 + j)));
    return materialize_cp(factors, nullptr);
}

double cp_residual(const DenseTensor& x, const std::vector<DenseTensor>& factors) {
    DenseTensor approx = materialize_cp(factors, nullptr);
    approx = permuted(approx, x.mode_labels);
    double num = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        const double d = x.values[i] - approx.values[i];
        num += d * d;
    }
    const double den = x.norm2();
    return den > 0 ? std::sqrt(num) / den : std::sqrt(num);
}

CpResult sketched_cp_als(const DenseTensor& x, std::int64_t rank, std::int64_t sketch_size,
                         int iterations, RandomSource rng, bool compute_residuals) {
    const int n = x.order();
    if (n < 3) throw std::invalid_argument("CP-ALS needs an input of order >= 3");
    const std::vector<std::int64_t>& dims = x.shape;
    const std::int64_t m = sketch_size;
    for (int i = 0; i < n; ++i) {
        BigInt rows = 1;
        for (int j = 0; j < n; ++j)
            if (j != i) rows *= dims[j];
        if (rows < m) throw std::invalid_argument("sketch exceeds subspace");
    }

    CpResult res;
    CpEmbedding emb = make_cp_embedding(n, dims, rank, m, rng);

    // Factor initialization from the seeded Gaussian source.
    for (int j = 0; j < n; ++j)
        res.factors.push_back(gaussian_tensor({xlabel(j), "r"}, {dims[j], rank}, 1.0,
                                              rng.with_stream(900000 + j)));

    // Right-hand sides: sketch X once per mode, reusing the right-chain
    // partial sketches of X across modes.
    BigInt prep = 0;
    std::vector<DenseTensor> rhs(n);
    {
        std::vector<DenseTensor> rxc(n + 2);  // rxc[j]: modes x1..x_{j-1} + open_r(j), 1-based j
        rxc[n + 1] = x;  // untouched
        for (int j = n; j >= 2; --j) {
            DenseTensor t = contract_pair_dense(j == n ? x : rxc[j + 1], emb.k[j - 1],
                                                {xlabel(j - 1)}, {}, &prep);
            if (j == n) rxc[j] = std::move(t);
            else rxc[j] = z_merge_joint(emb.zr.at(j), t, CpEmbedding::open_r(j + 1, n),
                                        klabel(j - 1), &prep);
        }
        for (int i = 1; i <= n; ++i) {
            if (i == 1) {
                rhs[0] = rxc[2];
                continue;
            }
            DenseTensor t = i == n ? x : rxc[i + 1];
            std::string left_open;
            for (int j = 1; j <= i - 1; ++j) {
                t = contract_pair_dense(t, emb.k[j - 1], {xlabel(j - 1)}, {}, &prep);
                if (j == 1) left_open = klabel(0);
                else {
                    t = z_merge_joint(emb.zl.at(j), t, left_open, klabel(j - 1), &prep);
                    left_open = CpEmbedding::open_l(j);
                }
            }
            if (i < n)
                t = z_merge_joint(emb.zf.at(i), t, left_open, CpEmbedding::open_r(i + 1, n),
                                  &prep);
            rhs[i - 1] = std::move(t);
        }
    }
    res.ledger.add("prep", prep * 2);

    const std::vector<std::string> batch_r = {"r"};
    for (int it = 0; it < iterations; ++it) {
        BigInt sketch = 0, solve = 0;
        // Right chains over the factors from the previous sweep.
        std::vector<DenseTensor> cr(n + 1);
        cr[n] = sketch_factor(emb, n - 1, res.factors[n - 1], &sketch);
        for (int j = n - 1; j >= 2; --j) {
            DenseTensor kj = sketch_factor(emb, j - 1, res.factors[j - 1], &sketch);
            cr[j] = z_merge(emb.zr.at(j), cr[j + 1], CpEmbedding::open_r(j + 1, n), kj,
                            klabel(j - 1), batch_r, &sketch);
        }
        DenseTensor cl;  // grows left to right as factors are updated
        for (int i = 1; i <= n; ++i) {
            DenseTensor lhat;
            std::string open;
            if (i == 1) {
                lhat = cr[2];
                open = CpEmbedding::open_r(2, n);
            } else if (i == n) {
                lhat = cl;
                open = CpEmbedding::open_l(n - 1);
            } else {
                lhat = z_merge(emb.zf.at(i), cl, CpEmbedding::open_l(i - 1), cr[i + 1],
                               CpEmbedding::open_r(i + 1, n), batch_r, &sketch);
                open = emb.zf.at(i).out();
            }
            res.factors[i - 1] = solve_subproblem(lhat, rhs[i - 1], open, xlabel(i - 1), rank,
                                                  &res.rank_deficient, &solve);
            if (i <= n - 1) {
                DenseTensor ki = sketch_factor(emb, i - 1, res.factors[i - 1], &sketch);
                if (i == 1) cl = std::move(ki);
                else cl = z_merge(emb.zl.at(i), cl, CpEmbedding::open_l(i - 1), ki,
                                  klabel(i - 1), batch_r, &sketch);
            }
        }
        res.ledger.add("sketch", sketch * 2);
        res.ledger.add("solve", solve * 2);
        res.ledger.per_iteration.push_back((sketch + solve) * 2);
        if (compute_residuals) {
            res.residuals.push_back(cp_residual(x, res.factors));
            res.ledger.add("residual", BigInt(x.size()) * 2);
        }
    }
    return res;
}

DenseTensor cp_sketched_lhs(const std::vector<DenseTensor>& factors, std::int64_t sketch_size,
                            int mode, RandomSource rng, bool reuse_chains) {
    const int n = static_cast<int>(factors.size());
    std::vector<std::int64_t> dims;
    for (const auto& f : factors) dims.push_back(f.shape[0]);
    const std::int64_t rank = factors[0].mode_size("r");
    CpEmbedding emb = make_cp_embedding(n, dims, rank, sketch_size, rng);
    const std::vector<std::string> batch_r = {"r"};
    BigInt madds = 0;

    std::map<int, DenseTensor> cr_cache, cl_cache;
    std::function<DenseTensor(int)> right_chain = [&](int j) -> DenseTensor {
        if (reuse_chains) {
            auto it = cr_cache.find(j);
            if (it != cr_cache.end()) return it->second;
        }
        DenseTensor out;
        if (j == n) out = sketch_factor(emb, n - 1, factors[n - 1], &madds);
        else
            out = z_merge(emb.zr.at(j), right_chain(j + 1), CpEmbedding::open_r(j + 1, n),
                          sketch_factor(emb, j - 1, factors[j - 1], &madds), klabel(j - 1),
                          batch_r, &madds);
        if (reuse_chains) cr_cache[j] = out;
        return out;
    };
    std::function<DenseTensor(int)> left_chain = [&](int j) -> DenseTensor {
        if (reuse_chains) {
            auto it = cl_cache.find(j);
            if (it != cl_cache.end()) return it->second;
        }
        DenseTensor out;
        if (j == 1) out = sketch_factor(emb, 0, factors[0], &madds);
        else
            out = z_merge(emb.zl.at(j), left_chain(j - 1), CpEmbedding::open_l(j - 1),
                          sketch_factor(emb, j - 1, factors[j - 1], &madds), klabel(j - 1),
                          batch_r, &madds);
        if (reuse_chains) cl_cache[j] = out;
        return out;
    };

    const int i = mode + 1;  // 1-based subproblem index
    if (i == 1) return right_chain(2);
    if (i == n) return left_chain(n - 1);
    return z_merge(emb.zf.at(i), left_chain(i - 1), CpEmbedding::open_l(i - 1),
                   right_chain(i + 1), CpEmbedding::open_r(i + 1, n), batch_r, &madds);
}

DenseTensor cp_sketched_subproblem(const std::vector<DenseTensor>& factors,
                                   const DenseTensor& x, std::int64_t sketch_size, int mode,
                                   RandomSource rng) {
    const int n = static_cast<int>(factors.size());
    std::vector<std::int64_t> dims;
    for (const auto& f : factors) dims.push_back(f.shape[0]);
    const std::int64_t rank = factors[0].mode_size("r");
    CpEmbedding emb = make_cp_embedding(n, dims, rank, sketch_size, rng);
    const std::vector<std::string> batch_r = {"r"};
    BigInt madds = 0;
    const int i = mode + 1;

    // Left-hand side through the factor chains.
    DenseTensor lhat;
    std::string open;
    {
        auto right = [&](int from) {
            DenseTensor out = sketch_factor(emb, n - 1, factors[n - 1], &madds);
            for (int j = n - 1; j >= from; --j)
                out = z_merge(emb.zr.at(j), out, CpEmbedding::open_r(j + 1, n),
                              sketch_factor(emb, j - 1, factors[j - 1], &madds), klabel(j - 1),
                              batch_r, &madds);
            return out;
        };
        auto left = [&](int upto) {
            DenseTensor out = sketch_factor(emb, 0, factors[0], &madds);
            for (int j = 2; j <= upto; ++j)
                out = z_merge(emb.zl.at(j), out, CpEmbedding::open_l(j - 1),
                              sketch_factor(emb, j - 1, factors[j - 1], &madds), klabel(j - 1),
                              batch_r, &madds);
            return out;
        };
        if (i == 1) {
            lhat = right(2);
            open = CpEmbedding::open_r(2, n);
        } else if (i == n) {
            lhat = left(n - 1);
            open = CpEmbedding::open_l(n - 1);
        } else {
            lhat = z_merge(emb.zf.at(i), left(i - 1), CpEmbedding::open_l(i - 1), right(i + 1),
                           CpEmbedding::open_r(i + 1, n), batch_r, &madds);
            open = emb.zf.at(i).out();
        }
    }

    // Right-hand side: the same embedding applied to the data matricization.
    DenseTensor rhat = x;
    for (int j = n; j >= i + 1; --j) {
        rhat = contract_pair_dense(rhat, emb.k[j - 1], {xlabel(j - 1)}, {}, &madds);
        if (j < n)
            rhat = z_merge_joint(emb.zr.at(j), rhat, CpEmbedding::open_r(j + 1, n),
                                 klabel(j - 1), &madds);
    }
    std::string left_open;
    for (int j = 1; j <= i - 1; ++j) {
        rhat = contract_pair_dense(rhat, emb.k[j - 1], {xlabel(j - 1)}, {}, &madds);
        if (j == 1) left_open = klabel(0);
        else {
            rhat = z_merge_joint(emb.zl.at(j), rhat, left_open, klabel(j - 1), &madds);
            left_open = CpEmbedding::open_l(j);
        }
    }
    if (i > 1 && i < n)
        rhat = z_merge_joint(emb.zf.at(i), rhat, left_open, CpEmbedding::open_r(i + 1, n),
                             &madds);

    bool deficient = false;
    return solve_subproblem(lhat, rhat, open, xlabel(mode), rank, &deficient, &madds);
}

CpResult reference_cp_als(const DenseTensor& x, std::int64_t rank, int iterations,
                          RandomSource rng, bool compute_residuals) {
    const int n = x.order();
    if (n < 3) throw std::invalid_argument("CP-ALS needs an input of order >= 3");
    const std::vector<std::int64_t>& dims = x.shape;
    CpResult res;
    for (int j = 0; j < n; ++j)
        res.factors.push_back(gaussian_tensor({xlabel(j), "r"}, {dims[j], rank}, 1.0,
                                              rng.with_stream(900000 + j)));

    for (int it = 0; it < iterations; ++it) {
        BigInt solve = 0;
        for (int i = 0; i < n; ++i) {
            // Explicit Khatri-Rao chain of all other factors.
            DenseTensor l;
            std::vector<std::string> row_modes;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                row_modes.push_back(xlabel(j));
                l = l.values.empty() ? res.factors[j]
                                     : contract_pair_dense(l, res.factors[j], {}, {"r"});
            }
            std::vector<std::string> lorder = row_modes;
            lorder.push_back("r");
            l = permuted(l, lorder);
            std::vector<std::string> xorder = row_modes;
            xorder.push_back(xlabel(i));
            const DenseTensor xr = permuted(x, xorder);

            std::int64_t rows = 1;
            for (int j = 0; j < n; ++j)
                if (j != i) rows *= dims[j];
            Eigen::Map<const RowMat> lm(l.values.data(), rows, rank);
            Eigen::Map<const RowMat> rm(xr.values.data(), rows, dims[i]);
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(lm);
            if (cod.rank() < rank) res.rank_deficient = true;
            const Eigen::MatrixXd sol = cod.solve(rm);
            DenseTensor a({xlabel(i), "r"}, {dims[i], rank});
            for (std::int64_t s = 0; s < dims[i]; ++s)
                for (std::int64_t q = 0; q < rank; ++q) a.values[s * rank + q] = sol(q, s);
            res.factors[i] = std::move(a);
            solve += BigInt(rows) * rank * rank + BigInt(rows) * rank * dims[i];
        }
        res.ledger.add("solve", solve * 2);
        res.ledger.per_iteration.push_back(solve * 2);
        if (compute_residuals) res.residuals.push_back(cp_residual(x, res.factors));
    }
    return res;
}

}  // namespace tnsketch
