#include "scalinglab/nn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scalinglab/rng.hpp"

namespace scalinglab::nn {

void Dataset::validate() const {
    if (static_cast<int>(inputs.size()) != n * d || static_cast<int>(labels.size()) != n * k ||
        static_cast<int>(class_ids.size()) != n) {
        throw std::invalid_argument("Dataset: size fields inconsistent with storage");
    }
    for (int i = 0; i < n; ++i) {
        const double* row = label_row(i);
        int ones = 0;
        double sum = 0.0;
        for (int c = 0; c < k; ++c) {
            sum += row[c];
            if (row[c] == 1.0) ++ones;
        }
        if (ones != 1 || sum != 1.0 || row[class_ids[i]] != 1.0) {
            throw std::invalid_argument("Dataset: labels are not consistent one-hot rows");
        }
    }
    for (double v : inputs) {
        if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite input");
    }
}

namespace {

void set_one_hot(Dataset& ds, int row, int cls) {
    double* out = ds.labels.data() + static_cast<std::size_t>(row) * ds.k;
    std::fill(out, out + ds.k, 0.0);
    out[cls] = 1.0;
    ds.class_ids[row] = cls;
}

}  // namespace

Dataset generate_synthetic(int classes, int dim, int count, double cluster_spread,
                           std::uint64_t seed) {
    if (classes < 1 || dim < 1 || count < 1) {
        throw std::invalid_argument("generate_synthetic: classes, dim, count must be >= 1");
    }
    if (cluster_spread < 0) {
        throw std::invalid_argument("generate_synthetic: spread must be nonnegative");
    }

    Rng rng(seed);
    std::vector<double> centers(static_cast<std::size_t>(classes) * dim);
    for (int c = 0; c < classes; ++c) {
        double* center = centers.data() + static_cast<std::size_t>(c) * dim;
        double norm_sq = 0.0;
        for (int j = 0; j < dim; ++j) {
            center[j] = rng.gaussian();
            norm_sq += center[j] * center[j];
        }
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (int j = 0; j < dim; ++j) center[j] *= inv;
    }

    Dataset ds;
    ds.n = count;
    ds.d = dim;
    ds.k = classes;
    ds.name = "synthetic";
    ds.inputs.resize(static_cast<std::size_t>(count) * dim);
    ds.labels.assign(static_cast<std::size_t>(count) * classes, 0.0);
    ds.class_ids.resize(count);
    for (int i = 0; i < count; ++i) {
        const int cls = i % classes;
        const double* center = centers.data() + static_cast<std::size_t>(cls) * dim;
        double* row = ds.inputs.data() + static_cast<std::size_t>(i) * dim;
        for (int j = 0; j < dim; ++j) {
            row[j] = center[j] + cluster_spread * rng.gaussian();
        }
        set_one_hot(ds, i, cls);
    }
    return ds;
}

Dataset subsample(const Dataset& ds, int count, std::uint64_t seed) {
    if (count < 1 || count > ds.n) {
        throw std::invalid_argument("subsample: count must be in [1, n]");
    }

    // Partial Fisher-Yates: the first `count` slots end up a uniform sample
    // without replacement.
    std::vector<int> index(ds.n);
    std::iota(index.begin(), index.end(), 0);
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(ds.n - i)));
        std::swap(index[i], index[j]);
    }

    Dataset out;
    out.n = count;
    out.d = ds.d;
    out.k = ds.k;
    out.name = ds.name;
    out.inputs.resize(static_cast<std::size_t>(count) * ds.d);
    out.labels.resize(static_cast<std::size_t>(count) * ds.k);
    out.class_ids.resize(count);
    for (int i = 0; i < count; ++i) {
        const int src = index[i];
        std::copy_n(ds.input_row(src), ds.d, out.inputs.data() + static_cast<std::size_t>(i) * ds.d);
        std::copy_n(ds.label_row(src), ds.k, out.labels.data() + static_cast<std::size_t>(i) * ds.k);
        out.class_ids[i] = ds.class_ids[src];
    }
    return out;
}

Dataset slice(const Dataset& ds, int start, int count) {
    if (start < 0 || count < 1 || start + count > ds.n) {
        throw std::invalid_argument("slice: range out of bounds");
    }
    Dataset out;
    out.n = count;
    out.d = ds.d;
    out.k = ds.k;
    out.name = ds.name;
    out.inputs.assign(ds.input_row(start), ds.input_row(start) + static_cast<std::size_t>(count) * ds.d);
    out.labels.assign(ds.label_row(start), ds.label_row(start) + static_cast<std::size_t>(count) * ds.k);
    out.class_ids.assign(ds.class_ids.begin() + start, ds.class_ids.begin() + start + count);
    return out;
}

Dataset corrupt_labels(const Dataset& ds, double fraction, std::uint64_t seed,
                       bool exclude_true_class) {
    if (fraction < 0 || fraction > 1) {
        throw std::invalid_argument("corrupt_labels: fraction must be in [0, 1]");
    }

    Dataset out = ds;
    const int corrupt = static_cast<int>(std::floor(fraction * ds.n));
    if (corrupt == 0) return out;

    std::vector<int> index(ds.n);
    std::iota(index.begin(), index.end(), 0);
    Rng rng(seed);
    for (int i = 0; i < corrupt; ++i) {
        const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(ds.n - i)));
        std::swap(index[i], index[j]);
    }
    for (int i = 0; i < corrupt; ++i) {
        int cls;
        if (exclude_true_class) {
            cls = static_cast<int>(rng.below(static_cast<std::uint64_t>(ds.k - 1)));
            if (cls >= ds.class_ids[index[i]]) ++cls;
        } else {
            cls = static_cast<int>(rng.below(static_cast<std::uint64_t>(ds.k)));
        }
        set_one_hot(out, index[i], cls);
    }
    return out;
}

}  // namespace scalinglab::nn
