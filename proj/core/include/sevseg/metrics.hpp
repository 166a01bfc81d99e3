#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sevseg/dataset.hpp"

namespace sevseg {

/// Greedy matching outcome for one image. Detection indices refer to the
/// image's detection list as given (not the ranked order).
struct ImageMatch {
    std::string file;
    std::vector<std::optional<std::size_t>> det_to_gt;
    std::vector<bool> gt_matched;
};

struct MatchResult {
    std::vector<ImageMatch> images;
    std::size_t tp{0};
    std::size_t fp{0};
    std::size_t fn{0};
};

/// Pairs images by file name. Throws ValidationError listing files present in
/// only one of the two sets. The result follows ground-truth image order.
[[nodiscard]] std::vector<std::pair<const AnnotatedImage*, const ImageDetections*>> pair_images(
    const AnnotationSet& gt, const DetectionSet& dets);

/// Per image, detections are visited in ranks_before order and each takes the
/// unmatched ground truth with the highest IoU >= iou_threshold (lowest index
/// on ties). With class_sensitive only same-class pairs may match.
[[nodiscard]] MatchResult match(const AnnotationSet& gt, const DetectionSet& dets, double iou_threshold,
                                bool class_sensitive);

/// How detections are capped for recall at k detections per image.
enum class RecallCap {
    per_image_per_class,  ///< k best of each class in each image (pycocotools behaviour)
    per_image,            ///< k best in each image regardless of class
};

struct ApResult {
    /// 101-point interpolated AP per class; empty for classes without ground truth.
    std::array<std::optional<double>, ClassId::kNumClasses> per_class{};
    /// Mean over classes that have ground truth; 0 when there are none.
    double mean{0.0};
    std::size_t classes_evaluated{0};
};

/// COCO-style AP at one IoU threshold, at most max_dets detections per image and class.
[[nodiscard]] ApResult average_precision(const AnnotationSet& gt, const DetectionSet& dets,
                                         double iou_threshold, int max_dets = 100);

/// Recall at one IoU threshold with at most max_dets detections, averaged over
/// classes with ground truth.
[[nodiscard]] double recall_at(const AnnotationSet& gt, const DetectionSet& dets, double iou_threshold,
                               int max_dets, RecallCap cap = RecallCap::per_image_per_class);

/// IoU thresholds 0.50, 0.55, ..., 0.95.
[[nodiscard]] std::array<double, 10> coco_iou_thresholds() noexcept;

struct CocoReport {
    double mAP{0.0};
    double AP_50{0.0};
    double AP_75{0.0};
    double AR_1{0.0};
    double AR_10{0.0};
    std::array<double, 10> ap_by_iou{};
    /// AP averaged over the ten IoU thresholds, per class.
    std::array<std::optional<double>, ClassId::kNumClasses> ap_per_class{};
    std::size_t classes_evaluated{0};

    [[nodiscard]] std::string to_json() const;
};

struct CocoOptions {
    RecallCap recall_cap{RecallCap::per_image_per_class};
    int max_dets{100};
};

/// mAP averages AP over the ten thresholds; AR_k averages recall_at over the same
/// thresholds with k detections. AR_100 is not reported: outputs are capped at 7.
[[nodiscard]] CocoReport coco_report(const AnnotationSet& gt, const DetectionSet& dets,
                                     const CocoOptions& options = {});

struct PrfReport {
    std::size_t tp{0};
    std::size_t fp{0};
    std::size_t fn{0};
    /// tp / (tp + fp); 1 when nothing was detected.
    double precision{1.0};
    /// tp / (tp + fn); 1 when there is no ground truth.
    double recall{1.0};
    /// 2PR / (P + R); 0 when P + R = 0.
    double f1{0.0};

    [[nodiscard]] static PrfReport from_counts(std::size_t tp, std::size_t fp, std::size_t fn) noexcept;
    [[nodiscard]] std::string to_json() const;
};

/// Filters detections at score_threshold and matches at iou_threshold. Matching
/// ignores class unless class_sensitive: classification is judged separately.
[[nodiscard]] PrfReport prf(const AnnotationSet& gt, const DetectionSet& dets, double score_threshold,
                            double iou_threshold = 0.5, bool class_sensitive = false);

/// 0.05, 0.10, ..., 0.95 (19 values), computed as k / 20.
[[nodiscard]] std::vector<double> default_sweep_grid();

struct SweepRow {
    double threshold{0.0};
    PrfReport report;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    /// Highest F1; the lowest threshold wins ties.
    std::size_t best_index{0};

    [[nodiscard]] double best_threshold() const { return rows.at(best_index).threshold; }
    [[nodiscard]] const PrfReport& best() const { return rows.at(best_index).report; }
    /// threshold,precision,recall,f1
    [[nodiscard]] std::string to_csv() const;
};

/// Throws ValidationError when the grid is empty.
[[nodiscard]] SweepResult sweep(const AnnotationSet& gt, const DetectionSet& dets,
                                const std::vector<double>& grid = default_sweep_grid(),
                                double iou_threshold = 0.5, bool class_sensitive = false);

/// Rows are true labels, columns predicted labels.
struct ConfusionMatrix {
    std::array<std::array<std::size_t, ClassId::kNumClasses>, ClassId::kNumClasses> counts{};

    [[nodiscard]] std::size_t total() const noexcept;
    [[nodiscard]] std::size_t trace() const noexcept;
    /// trace / total; 1 when empty.
    [[nodiscard]] double accuracy() const noexcept;
    [[nodiscard]] std::size_t row_sum(int true_class) const noexcept;
    /// Header row and column of class ids.
    [[nodiscard]] std::string to_csv() const;
};

/// Counts (true class, predicted class) over class-insensitive true positives.
[[nodiscard]] ConfusionMatrix confusion(const AnnotationSet& gt, const DetectionSet& dets,
                                        double score_threshold, double iou_threshold = 0.5);

}  // namespace sevseg
