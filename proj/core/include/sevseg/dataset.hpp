#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sevseg/geometry.hpp"

namespace sevseg {

inline constexpr int kSchemaVersion = 1;

struct GroundTruthDigit {
    BoundingBox box;
    ClassId cls;

    friend bool operator==(const GroundTruthDigit&, const GroundTruthDigit&) = default;
};

struct AnnotatedImage {
    std::string file;
    int width{0};
    int height{0};
    std::string device;
    std::vector<GroundTruthDigit> digits;

    friend bool operator==(const AnnotatedImage&, const AnnotatedImage&) = default;
};

struct AnnotationSet {
    int schema_version{kSchemaVersion};
    std::vector<AnnotatedImage> images;

    [[nodiscard]] std::size_t digit_count() const noexcept;

    friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;
};

struct ImageDetections {
    std::string file;
    int width{0};
    int height{0};
    std::vector<Detection> detections;

    friend bool operator==(const ImageDetections&, const ImageDetections&) = default;
};

/// Written by external inference adapters; records whether the producing model
/// already applied its own suppression.
struct BridgeMeta {
    bool embedded_nms{false};

    friend bool operator==(const BridgeMeta&, const BridgeMeta&) = default;
};

struct DetectionSet {
    int schema_version{kSchemaVersion};
    std::vector<ImageDetections> images;
    std::optional<BridgeMeta> bridge_meta;

    friend bool operator==(const DetectionSet&, const DetectionSet&) = default;
};

struct SplitResult {
    AnnotationSet train;
    AnnotationSet test;
    std::uint64_t seed{0};
};

// Validation. Throws ValidationError naming the offending image and field.
void validate(const AnnotationSet& set);
void validate(const DetectionSet& set);

[[nodiscard]] AnnotationSet parse_annotations(std::string_view json_text);
[[nodiscard]] std::string to_json(const AnnotationSet& set);
[[nodiscard]] AnnotationSet load_annotations(const std::filesystem::path& path);
void save_annotations(const AnnotationSet& set, const std::filesystem::path& path);

[[nodiscard]] DetectionSet parse_detections(std::string_view json_text);
[[nodiscard]] std::string to_json(const DetectionSet& set);
[[nodiscard]] DetectionSet load_detections(const std::filesystem::path& path);
void save_detections(const DetectionSet& set, const std::filesystem::path& path);

/// COCO category id -> digit. When empty, categories are mapped by name
/// ("0".."9", optionally prefixed like "digit_7").
using CategoryMap = std::map<std::int64_t, int>;

/// Converts a COCO style `images`/`annotations`/`categories` document.
/// Images without annotations are kept with empty digit lists. The device id is
/// taken from an optional per-image "device" field, else the parent directory
/// of file_name, else "default".
[[nodiscard]] AnnotationSet parse_coco(std::string_view json_text, const CategoryMap& mapping = {});
[[nodiscard]] AnnotationSet import_coco(const std::filesystem::path& path,
                                        const CategoryMap& mapping = {});

/// Ground truth replayed as detections with a constant score.
[[nodiscard]] DetectionSet detections_from_ground_truth(const AnnotationSet& set,
                                                        double score = 1.0);

/// Per-device stratified split. Within each device (ordered by first
/// appearance) the files are sorted by name, shuffled with Fisher-Yates driven
/// by Rng(hash_seed(seed, device)), and the first floor(n * train_frac + 0.5)
/// go to train. Both outputs keep the input image order.
[[nodiscard]] SplitResult split(const AnnotationSet& set, double train_frac, std::uint64_t seed);

using ClassHistogram = std::array<std::size_t, ClassId::kNumClasses>;
[[nodiscard]] ClassHistogram class_histogram(const AnnotationSet& set);

struct AspectHistogram {
    double bin_width{0.1};
    /// bin index k covers [k * bin_width, (k + 1) * bin_width).
    std::map<long, std::size_t> counts;

    [[nodiscard]] std::size_t total() const noexcept;
};

/// Ratios within 1e-9 of a bin edge are placed in the upper bin, so that
/// 0.3 with width 0.1 lands in [0.3, 0.4) despite floating point division.
[[nodiscard]] AspectHistogram aspect_histogram(const AnnotationSet& set, double bin_width);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace sevseg
