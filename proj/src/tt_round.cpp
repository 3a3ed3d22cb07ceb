#include "tnsketch/tt_round.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

#include "tnsketch/embedding.hpp"

namespace tnsketch {

namespace {

std::string xedge(int k) { return "x" + std::to_string(k + 1); }        // 0-based core
std::string pedge(int k) { return "@p:" + std::to_string(k + 1); }      // 0-based bond

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

std::int64_t TensorTrain::phys_dim(int k) const { return cores[k].mode_size(xedge(k)); }

std::int64_t TensorTrain::rank(int k) const { return cores[k].mode_size(pedge(k)); }

TensorTrain TensorTrain::random_uniform(int order, std::int64_t phys, std::int64_t rank,
                                        RandomSource rng) {
    if (order < 2) throw std::invalid_argument("tensor train needs order >= 2");
    TensorTrain tt;
    for (int k = 0; k < order; ++k) {
        std::vector<std::string> labels;
        std::vector<std::int64_t> shape;
        if (k > 0) {
            labels.push_back(pedge(k - 1));
            shape.push_back(rank);
        }
        labels.push_back(xedge(k));
        shape.push_back(phys);
        if (k + 1 < order) {
            labels.push_back(pedge(k));
            shape.push_back(rank);
        }
        tt.cores.push_back(
            uniform01_tensor(labels, shape, rng.with_stream(static_cast<std::uint64_t>(k))));
    }
    return tt;
}

TensorNetwork TensorTrain::to_network() const {
    TensorNetwork net;
    const int n = order();
    for (int k = 0; k < n; ++k) net.add_vertex("v" + std::to_string(k + 1));
    for (int k = 0; k < n; ++k) {
        // Declare edges in the cores' mode order so tensors bind directly.
        if (k > 0 && !net.has_edge(pedge(k - 1)))
            net.add_edge({pedge(k - 1),
                          {"v" + std::to_string(k), "v" + std::to_string(k + 1)},
                          false,
                          rank(k - 1)});
        net.add_edge({xedge(k), {"v" + std::to_string(k + 1)}, true, phys_dim(k)});
    }
    for (int k = 0; k < n; ++k) net.bind_tensor("v" + std::to_string(k + 1), cores[k]);
    return net;
}

TtRoundResult tt_round_sketch(const TensorTrain& tt, std::int64_t sketch_size,
                              RandomSource rng) {
    const int n = tt.order();
    if (n < 2) throw std::invalid_argument("tensor train needs order >= 2");
    const std::int64_t m = sketch_size;

    TtRoundResult res;
    for (int k = 0; k + 1 < n; ++k)
        if (m >= tt.rank(k)) res.regime_warning = true;

    // Chain embedding over the first N-1 physical modes, all internal ranks m.
    SketchSpec spec;
    spec.data = tt.to_network();
    for (int k = 0; k + 1 < n; ++k) spec.sketch_edges.push_back(xedge(k));
    spec.sketch_size = m;
    const Embedding emb = build_tt_embedding(spec);
    auto cores = embedding_tensors(emb, rng);
    auto zname = [](int k) { return "@T:" + std::to_string(k + 1); };
    auto redge = [&](int k) {
        return k + 2 < n ? "@r:" + std::to_string(k + 1) : std::string("@tto");
    };

    BigInt madds = 0;
    DenseTensor w;
    for (int k = 0; k + 1 < n; ++k) {
        BigInt step = 0;
        if (k == 0) {
            w = contract_pair_dense(tt.cores[0], cores.at(zname(0)), {xedge(0)}, {}, &step);
        } else {
            DenseTensor t =
                contract_pair_dense(w, tt.cores[k], {pedge(k - 1)}, {}, &step);
            w = contract_pair_dense(t, cores.at(zname(k)),
                                    {redge(k - 1), xedge(k)}, {}, &step);
        }
        madds += step;
        res.ledger.per_iteration.push_back(step * 2);
        res.boundary_sketches.push_back(permuted(w, {redge(k), pedge(k)}));
    }
    res.ledger.add("sketch", madds * 2);
    return res;
}

TensorTrain tt_round_reference(const TensorTrain& tt, std::int64_t target_rank) {
    const int n = tt.order();
    TensorTrain work = tt;

    // Right-to-left orthogonalization: each core becomes row-orthogonal in
    // its (x, right-rank) unfolding, the R factor is absorbed leftward.
    for (int k = n - 1; k >= 1; --k) {
        DenseTensor& c = work.cores[k];
        std::vector<std::string> order = {pedge(k - 1)};
        for (const auto& l : c.mode_labels)
            if (l != pedge(k - 1)) order.push_back(l);
        c = permuted(c, order);
        const std::int64_t rl = c.shape[0];
        const std::int64_t cols = c.size() / rl;
        Eigen::Map<const RowMat> mat(c.values.data(), rl, cols);
        // LQ via QR of the transpose.
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(mat.transpose());
        const std::int64_t rk = std::min(rl, cols);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(cols, rk);
        Eigen::MatrixXd lfac = (qr.matrixQR().topRows(rk).triangularView<Eigen::Upper>());
        lfac.transposeInPlace();  // rl x rk

        DenseTensor newc(order, c.shape);
        newc.shape[0] = rk;
        newc.values.assign(static_cast<std::size_t>(rk * cols), 0.0);
        for (std::int64_t a = 0; a < rk; ++a)
            for (std::int64_t b = 0; b < cols; ++b) newc.values[a * cols + b] = q(b, a);
        work.cores[k] = std::move(newc);
        work.cores[k].shape[0] = rk;

        // Absorb lfac (rl x rk) into the left neighbor's right-rank mode.
        DenseTensor lt({pedge(k - 1), "@tmp"}, {rl, rk});
        for (std::int64_t a = 0; a < rl; ++a)
            for (std::int64_t b = 0; b < rk; ++b) lt.values[a * rk + b] = lfac(a, b);
        DenseTensor& left = work.cores[k - 1];
        left = contract_pair_dense(left, lt, {pedge(k - 1)}, {});
        for (auto& l : left.mode_labels)
            if (l == "@tmp") l = pedge(k - 1);
    }

    // Left-to-right truncated SVD sweep.
    for (int k = 0; k + 1 < n; ++k) {
        DenseTensor& c = work.cores[k];
        std::vector<std::string> order;
        for (const auto& l : c.mode_labels)
            if (l != pedge(k)) order.push_back(l);
        order.push_back(pedge(k));
        c = permuted(c, order);
        const std::int64_t rr = c.shape.back();
        const std::int64_t rows = c.size() / rr;
        Eigen::Map<const RowMat> mat(c.values.data(), rows, rr);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
        const std::int64_t keep = std::min<std::int64_t>(
            target_rank, static_cast<std::int64_t>(svd.singularValues().size()));
        Eigen::MatrixXd u = svd.matrixU().leftCols(keep);
        Eigen::MatrixXd sv = svd.singularValues().head(keep).asDiagonal() *
                             svd.matrixV().leftCols(keep).transpose();  // keep x rr

        DenseTensor newc(order, c.shape);
        newc.shape.back() = keep;
        newc.values.assign(static_cast<std::size_t>(rows * keep), 0.0);
        for (std::int64_t a = 0; a < rows; ++a)
            for (std::int64_t b = 0; b < keep; ++b) newc.values[a * keep + b] = u(a, b);
        work.cores[k] = std::move(newc);

        DenseTensor st({pedge(k), "@tmp"}, {keep, rr});
        for (std::int64_t a = 0; a < keep; ++a)
            for (std::int64_t b = 0; b < rr; ++b) st.values[a * rr + b] = sv(a, b);
        DenseTensor& right = work.cores[k + 1];
        // Contract sv into the right neighbor's left-rank mode.
        for (auto& l : st.mode_labels)
            if (l == "@tmp") l = "@tmpr";
        DenseTensor str = permuted(st, {pedge(k), "@tmpr"});
        DenseTensor rn = right;
        for (auto& l : rn.mode_labels)
            if (l == pedge(k)) l = "@tmpr";
        right = contract_pair_dense(str, rn, {"@tmpr"}, {});
    }
    return work;
}

TensorTrain tt_apply_last(const TensorTrain& tt, const DenseTensor& v) {
    const int n = tt.order();
    TensorTrain out = tt;
    DenseTensor u = contract_pair_dense(tt.cores[n - 1], v, {xedge(n - 1)}, {});
    // The contracted last core becomes a vector over the final bond; absorb it
    // into core n-2.
    DenseTensor& left = out.cores[n - 2];
    left = contract_pair_dense(left, u, {pedge(n - 2)}, {});
    out.cores.pop_back();
    return out;
}

DenseTensor tt_materialize(const TensorTrain& tt, std::int64_t max_entries) {
    BigInt full = 1;
    for (int k = 0; k < tt.order(); ++k) full *= tt.phys_dim(k);
    if (full > max_entries) throw std::invalid_argument("oracle too large");
    DenseTensor acc = tt.cores[0];
    for (int k = 1; k < tt.order(); ++k)
        acc = contract_pair_dense(acc, tt.cores[k], {pedge(k - 1)}, {});
    return acc;
}

}  // namespace tnsketch
