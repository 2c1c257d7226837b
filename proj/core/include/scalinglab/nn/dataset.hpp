#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scalinglab::nn {

/// A labeled dataset for one-hot regression: n rows of d features with k
/// classes. Labels are kept both as class ids and as one-hot rows (the MSE
/// targets).
struct Dataset {
    int n = 0, d = 0, k = 0;
    std::vector<double> inputs;  // n * d, row-major
    std::vector<double> labels;  // n * k, one-hot rows
    std::vector<int> class_ids;  // n
    std::string name;

    const double* input_row(int i) const { return inputs.data() + static_cast<std::size_t>(i) * d; }
    const double* label_row(int i) const { return labels.data() + static_cast<std::size_t>(i) * k; }

    void validate() const;  // throws std::invalid_argument on broken invariants
};

/// k Gaussian clusters with unit-norm random centers and the given spread;
/// sample i belongs to class i mod k (balanced up to remainder).
Dataset generate_synthetic(int classes, int dim, int count, double cluster_spread,
                           std::uint64_t seed);

/// Uniform sample of `count` rows without replacement, deterministic given
/// the seed. count == n yields a permutation of the full set.
Dataset subsample(const Dataset& ds, int count, std::uint64_t seed);

/// Rows [start, start + count) as their own dataset; used to split one
/// generated pool into train/test halves drawn from the same clusters.
Dataset slice(const Dataset& ds, int start, int count);

/// Resample the labels of a uniformly chosen floor(fraction * n) subset,
/// each uniformly over all k classes (so a 1/k share keeps its true class).
/// Set `exclude_true_class` to force every resampled label to change.
Dataset corrupt_labels(const Dataset& ds, double fraction, std::uint64_t seed,
                       bool exclude_true_class = false);

// IDX ingestion errors, one type per failure mode.
class IdxError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class IdxMagicError : public IdxError {
public:
    using IdxError::IdxError;
};
class IdxTruncatedError : public IdxError {
public:
    using IdxError::IdxError;
};
class IdxCountMismatchError : public IdxError {
public:
    using IdxError::IdxError;
};

/// Load an IDX image/label pair (the MNIST container format): big-endian
/// magic 0x00000803 / 0x00000801, big-endian dimension sizes, unsigned-byte
/// payload. Pixels are scaled to [0,1] and then normalized with mean 0.5 and
/// std 0.5; labels become one-hot over 10 classes.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

}  // namespace scalinglab::nn
