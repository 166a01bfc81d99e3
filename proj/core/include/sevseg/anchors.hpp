#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sevseg/dataset.hpp"
#include "sevseg/geometry.hpp"
#include "sevseg/preprocess.hpp"

namespace sevseg {

/// Multi-level anchor layout. Defaults follow the usual EfficientDet generator
/// (P3-P7, three octave scales, anchor scale 4) with width/height ratios
/// extended by 0.1 and 0.3 for tall narrow digits.
struct AnchorConfig {
    int min_level{3};
    int max_level{7};
    std::vector<double> octave_scales{1.0, 1.2599210498948732, 1.5874010519681994};
    double anchor_scale{4.0};
    std::vector<double> aspect_ratios{0.1, 0.3, 0.5, 1.0, 2.0};
    int input_side{512};

    /// The common {0.5, 1, 2} ratio set, for comparison.
    [[nodiscard]] static std::vector<double> standard_ratios() { return {0.5, 1.0, 2.0}; }

    /// Throws ValidationError for empty/unsorted/non-positive parameters.
    void validate() const;
};

struct AnchorGrid {
    struct Index {
        int level;
        int scale_index;
        int ratio_index;
    };

    int input_side{0};
    std::vector<BoundingBox> anchors;
    std::vector<Index> index;

    [[nodiscard]] std::size_t size() const noexcept { return anchors.size(); }
};

/// sum over levels of ceil(side / 2^level)^2 * |scales| * |ratios|.
[[nodiscard]] std::size_t expected_anchor_count(const AnchorConfig& config);

/// Anchors in model-frame pixels, level-major, then row, column, scale, ratio.
/// Anchors are not clipped to the input.
[[nodiscard]] AnchorGrid generate_anchors(const AnchorConfig& config);

/// Highest IoU between `box` and any anchor.
[[nodiscard]] double best_anchor_iou(const AnchorGrid& grid, const BoundingBox& box);

struct ImageCoverage {
    std::string file;
    std::size_t boxes{0};
    std::size_t matched{0};

    /// 1.0 for an image without boxes.
    [[nodiscard]] double coverage() const noexcept {
        return boxes == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(boxes);
    }
};

struct CoverageReport {
    double iou_threshold{0.5};
    std::vector<ImageCoverage> images;
    /// Best anchor IoU per ground-truth box, in image then digit order.
    std::vector<double> best_ious;
    std::size_t boxes{0};
    std::size_t matched{0};

    /// Aggregate fraction of boxes matched; 1.0 vacuously.
    [[nodiscard]] double coverage() const noexcept {
        return boxes == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(boxes);
    }
    /// Counts of best IoU in `bins` equal-width bins over [0, 1]; IoU 1 goes in the last bin.
    [[nodiscard]] std::vector<std::size_t> best_iou_histogram(int bins = 10) const;
};

/// Ground-truth boxes are first letterboxed into the grid's input frame; a box
/// is matched when its best anchor IoU is >= iou_threshold.
[[nodiscard]] CoverageReport coverage_report(const AnchorGrid& grid, const AnnotationSet& set,
                                             double iou_threshold, unsigned jobs = 1);

/// Same as coverage_report but for boxes already in the model frame.
[[nodiscard]] CoverageReport coverage_report_model_frame(const AnchorGrid& grid,
                                                         const std::vector<BoundingBox>& boxes,
                                                         double iou_threshold);

/// CSV: per-image rows, blank line, then best-IoU histogram rows.
[[nodiscard]] std::string coverage_csv(const CoverageReport& report, int bins = 10);

}  // namespace sevseg
