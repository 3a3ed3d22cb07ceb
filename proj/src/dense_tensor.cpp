#include "tnsketch/dense_tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tnsketch {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

std::int64_t product(const std::vector<std::int64_t>& v) {
    std::int64_t p = 1;
    for (auto s : v) p *= s;
    return p;
}

std::vector<std::int64_t> row_major_strides(const std::vector<std::int64_t>& shape) {
    std::vector<std::int64_t> strides(shape.size(), 1);
    for (int i = static_cast<int>(shape.size()) - 2; i >= 0; --i)
        strides[i] = strides[i + 1] * shape[i + 1];
    return strides;
}

}  // namespace

DenseTensor::DenseTensor(std::vector<std::string> labels, std::vector<std::int64_t> sh)
    : mode_labels(std::move(labels)), shape(std::move(sh)) {
    if (mode_labels.size() != shape.size())
        throw std::invalid_argument("tensor labels/shape mismatch");
    values.assign(static_cast<std::size_t>(product(shape)), 0.0);
}

std::int64_t DenseTensor::size() const { return product(shape); }

bool DenseTensor::has_mode(const std::string& label) const { return mode_index(label) >= 0; }

int DenseTensor::mode_index(const std::string& label) const {
    for (std::size_t i = 0; i < mode_labels.size(); ++i)
        if (mode_labels[i] == label) return static_cast<int>(i);
    return -1;
}

std::int64_t DenseTensor::mode_size(const std::string& label) const {
    const int i = mode_index(label);
    if (i < 0) throw std::invalid_argument("unknown mode " + label);
    return shape[i];
}

double DenseTensor::norm2() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
}

void DenseTensor::scale(double factor) {
    for (double& v : values) v *= factor;
}

void DenseTensor::validate() const {
    if (mode_labels.size() != shape.size())
        throw std::invalid_argument("tensor labels/shape mismatch");
    if (static_cast<std::int64_t>(values.size()) != product(shape))
        throw std::invalid_argument("tensor value count does not match shape");
}

DenseTensor permuted(const DenseTensor& t, const std::vector<std::string>& new_order) {
    if (new_order.size() != t.mode_labels.size())
        throw std::invalid_argument("permutation order size mismatch");
    if (new_order == t.mode_labels) return t;

    const int n = t.order();
    std::vector<int> axis(n);
    std::vector<std::int64_t> new_shape(n);
    for (int i = 0; i < n; ++i) {
        const int src = t.mode_index(new_order[i]);
        if (src < 0) throw std::invalid_argument("permutation names unknown mode " + new_order[i]);
        axis[i] = src;
        new_shape[i] = t.shape[src];
    }

    DenseTensor out(new_order, new_shape);
    const auto in_strides = row_major_strides(t.shape);
    std::vector<std::int64_t> stride_for_out(n);
    for (int i = 0; i < n; ++i) stride_for_out[i] = in_strides[axis[i]];

    const std::int64_t total = out.size();
    std::vector<std::int64_t> idx(n, 0);
    std::int64_t src_off = 0;
    for (std::int64_t pos = 0; pos < total; ++pos) {
        out.values[pos] = t.values[src_off];
        for (int d = n - 1; d >= 0; --d) {
            src_off += stride_for_out[d];
            if (++idx[d] < new_shape[d]) break;
            src_off -= stride_for_out[d] * new_shape[d];
            idx[d] = 0;
        }
    }
    return out;
}

DenseTensor contract_pair_dense(const DenseTensor& a, const DenseTensor& b,
                                const std::vector<std::string>& sum_modes,
                                const std::vector<std::string>& batch_modes,
                                BigInt* madds) {
    auto contains = [](const std::vector<std::string>& v, const std::string& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };

    std::vector<std::string> a_own, b_own;
    for (const auto& l : a.mode_labels)
        if (!contains(sum_modes, l) && !contains(batch_modes, l)) a_own.push_back(l);
    for (const auto& l : b.mode_labels)
        if (!contains(sum_modes, l) && !contains(batch_modes, l)) b_own.push_back(l);

    std::vector<std::string> a_order, b_order;
    a_order.insert(a_order.end(), batch_modes.begin(), batch_modes.end());
    a_order.insert(a_order.end(), a_own.begin(), a_own.end());
    a_order.insert(a_order.end(), sum_modes.begin(), sum_modes.end());
    b_order.insert(b_order.end(), batch_modes.begin(), batch_modes.end());
    b_order.insert(b_order.end(), b_own.begin(), b_own.end());
    b_order.insert(b_order.end(), sum_modes.begin(), sum_modes.end());

    const DenseTensor ap = permuted(a, a_order);
    const DenseTensor bp = permuted(b, b_order);

    std::int64_t nbatch = 1, ma = 1, mb = 1, k = 1;
    std::vector<std::string> out_labels;
    std::vector<std::int64_t> out_shape;
    for (const auto& l : batch_modes) {
        const std::int64_t sa = ap.mode_size(l);
        if (sa != bp.mode_size(l)) throw std::invalid_argument("batch mode size mismatch: " + l);
        nbatch *= sa;
        out_labels.push_back(l);
        out_shape.push_back(sa);
    }
    for (const auto& l : a_own) {
        ma *= ap.mode_size(l);
        out_labels.push_back(l);
        out_shape.push_back(ap.mode_size(l));
    }
    for (const auto& l : b_own) {
        mb *= bp.mode_size(l);
        out_labels.push_back(l);
        out_shape.push_back(bp.mode_size(l));
    }
    for (const auto& l : sum_modes) {
        const std::int64_t sa = ap.mode_size(l);
        if (sa != bp.mode_size(l)) throw std::invalid_argument("sum mode size mismatch: " + l);
        k *= sa;
    }

    DenseTensor out(out_labels, out_shape);
    for (std::int64_t bi = 0; bi < nbatch; ++bi) {
        ConstMap am(ap.values.data() + bi * ma * k, ma, k);
        ConstMap bm(bp.values.data() + bi * mb * k, mb, k);
        MutMap cm(out.values.data() + bi * ma * mb, ma, mb);
        cm.noalias() = am * bm.transpose();
    }
    if (madds) *madds += BigInt(nbatch) * ma * mb * k;
    return out;
}

DenseTensor naive_contract_dense(const DenseTensor& a, const DenseTensor& b,
                                 const std::vector<std::string>& sum_modes,
                                 const std::vector<std::string>& batch_modes) {
    auto contains = [](const std::vector<std::string>& v, const std::string& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };

    // Output modes: batch, a's own, b's own (same convention as the fast path,
    // but walked index-by-index without matricization).
    std::vector<std::string> out_labels = batch_modes;
    std::vector<std::int64_t> out_shape;
    for (const auto& l : batch_modes) out_shape.push_back(a.mode_size(l));
    for (std::size_t i = 0; i < a.mode_labels.size(); ++i) {
        const auto& l = a.mode_labels[i];
        if (!contains(sum_modes, l) && !contains(batch_modes, l)) {
            out_labels.push_back(l);
            out_shape.push_back(a.shape[i]);
        }
    }
    for (std::size_t i = 0; i < b.mode_labels.size(); ++i) {
        const auto& l = b.mode_labels[i];
        if (!contains(sum_modes, l) && !contains(batch_modes, l)) {
            out_labels.push_back(l);
            out_shape.push_back(b.shape[i]);
        }
    }
    DenseTensor out(out_labels, out_shape);

    std::vector<std::int64_t> sum_shape;
    for (const auto& l : sum_modes) sum_shape.push_back(a.mode_size(l));
    const auto a_strides = row_major_strides(a.shape);
    const auto b_strides = row_major_strides(b.shape);

    // Per output/sum axis, the stride it induces in a and b.
    const int on = static_cast<int>(out_shape.size());
    const int sn = static_cast<int>(sum_shape.size());
    std::vector<std::int64_t> oa(on, 0), ob(on, 0), sa(sn, 0), sb(sn, 0);
    for (int i = 0; i < on; ++i) {
        const int ia = a.mode_index(out_labels[i]);
        const int ib = b.mode_index(out_labels[i]);
        if (ia >= 0) oa[i] = a_strides[ia];
        if (ib >= 0) ob[i] = b_strides[ib];
    }
    for (int i = 0; i < sn; ++i) {
        sa[i] = a_strides[a.mode_index(sum_modes[i])];
        sb[i] = b_strides[b.mode_index(sum_modes[i])];
    }

    const std::int64_t total = out.size();
    std::int64_t total_sum = 1;
    for (auto s : sum_shape) total_sum *= s;

    std::vector<std::int64_t> oidx(on, 0);
    for (std::int64_t pos = 0; pos < total; ++pos) {
        std::int64_t a_base = 0, b_base = 0;
        for (int i = 0; i < on; ++i) {
            a_base += oidx[i] * oa[i];
            b_base += oidx[i] * ob[i];
        }
        double acc = 0.0;
        std::vector<std::int64_t> sidx(sn, 0);
        for (std::int64_t sp = 0; sp < total_sum; ++sp) {
            std::int64_t a_off = a_base, b_off = b_base;
            for (int i = 0; i < sn; ++i) {
                a_off += sidx[i] * sa[i];
                b_off += sidx[i] * sb[i];
            }
            acc += a.values[a_off] * b.values[b_off];
            for (int d = sn - 1; d >= 0; --d) {
                if (++sidx[d] < sum_shape[d]) break;
                sidx[d] = 0;
            }
        }
        out.values[pos] = acc;
        for (int d = on - 1; d >= 0; --d) {
            if (++oidx[d] < out_shape[d]) break;
            oidx[d] = 0;
        }
    }
    return out;
}

DenseTensor gaussian_tensor(std::vector<std::string> labels, std::vector<std::int64_t> shape,
                            double variance, RandomSource src) {
    if (!(variance > 0.0)) throw std::invalid_argument("invalid distribution");
    DenseTensor t(std::move(labels), std::move(shape));
    CounterRng rng(src);
    const double sd = std::sqrt(variance);
    for (double& v : t.values) v = sd * rng.normal();
    return t;
}

DenseTensor uniform01_tensor(std::vector<std::string> labels, std::vector<std::int64_t> shape,
                             RandomSource src) {
    DenseTensor t(std::move(labels), std::move(shape));
    CounterRng rng(src);
    for (double& v : t.values) v = 1.0 - rng.uniform01();
    return t;
}

}  // namespace tnsketch
