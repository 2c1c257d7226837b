#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

#include "scalinglab/nn/dataset.hpp"

namespace scalinglab::nn {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;
constexpr int kClasses = 10;

std::uint32_t read_be32(std::istream& in, const std::string& path, const char* what) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (in.gcount() != 4) {
        throw IdxTruncatedError(path + ": truncated while reading " + what);
    }
    return (static_cast<std::uint32_t>(bytes[0]) << 24) | (static_cast<std::uint32_t>(bytes[1]) << 16) |
           (static_cast<std::uint32_t>(bytes[2]) << 8) | static_cast<std::uint32_t>(bytes[3]);
}

std::vector<unsigned char> read_payload(std::istream& in, std::size_t count,
                                        const std::string& path) {
    std::vector<unsigned char> payload(count);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
        std::ostringstream msg;
        msg << path << ": truncated payload (" << in.gcount() << " of " << count << " bytes)";
        throw IdxTruncatedError(msg.str());
    }
    return payload;
}

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream images(images_path, std::ios::binary);
    if (!images) throw IdxError(images_path + ": cannot open");
    std::ifstream labels(labels_path, std::ios::binary);
    if (!labels) throw IdxError(labels_path + ": cannot open");

    const std::uint32_t image_magic = read_be32(images, images_path, "magic");
    if (image_magic != kImagesMagic) {
        std::ostringstream msg;
        msg << images_path << ": bad magic number 0x" << std::hex << image_magic << " (want 0x"
            << kImagesMagic << ")";
        throw IdxMagicError(msg.str());
    }
    const std::uint32_t image_count = read_be32(images, images_path, "count");
    const std::uint32_t rows = read_be32(images, images_path, "rows");
    const std::uint32_t cols = read_be32(images, images_path, "cols");

    const std::uint32_t label_magic = read_be32(labels, labels_path, "magic");
    if (label_magic != kLabelsMagic) {
        std::ostringstream msg;
        msg << labels_path << ": bad magic number 0x" << std::hex << label_magic << " (want 0x"
            << kLabelsMagic << ")";
        throw IdxMagicError(msg.str());
    }
    const std::uint32_t label_count = read_be32(labels, labels_path, "count");

    if (image_count != label_count) {
        std::ostringstream msg;
        msg << images_path << ": " << image_count << " images but " << label_count << " labels";
        throw IdxCountMismatchError(msg.str());
    }

    const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
    const auto image_bytes = read_payload(images, static_cast<std::size_t>(image_count) * pixels,
                                          images_path);
    const auto label_bytes = read_payload(labels, label_count, labels_path);

    Dataset ds;
    ds.n = static_cast<int>(image_count);
    ds.d = static_cast<int>(pixels);
    ds.k = kClasses;
    ds.name = images_path;
    ds.inputs.resize(static_cast<std::size_t>(ds.n) * ds.d);
    ds.labels.assign(static_cast<std::size_t>(ds.n) * ds.k, 0.0);
    ds.class_ids.resize(ds.n);

    // [0, 255] -> [0, 1], then the (x - 0.5) / 0.5 normalization.
    for (std::size_t i = 0; i < image_bytes.size(); ++i) {
        ds.inputs[i] = (static_cast<double>(image_bytes[i]) / 255.0 - 0.5) / 0.5;
    }
    for (int i = 0; i < ds.n; ++i) {
        const int cls = label_bytes[i];
        if (cls >= kClasses) {
            std::ostringstream msg;
            msg << labels_path << ": label " << cls << " out of range at row " << i;
            throw IdxError(msg.str());
        }
        ds.labels[static_cast<std::size_t>(i) * ds.k + cls] = 1.0;
        ds.class_ids[i] = cls;
    }
    return ds;
}

}  // namespace scalinglab::nn
