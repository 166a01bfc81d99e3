#pragma once

#include <vector>

#include "sevseg/dataset.hpp"
#include "sevseg/geometry.hpp"

namespace sevseg {

enum class NmsMode {
    class_agnostic,  ///< any two overlapping boxes compete, whatever their class
    per_class,       ///< suppression only among boxes of the same class
};

struct PostprocessConfig {
    double score_threshold{0.0};
    double iou_threshold{0.5};
    int max_outputs{7};
    NmsMode mode{NmsMode::class_agnostic};

    /// Throws ValidationError unless thresholds lie in [0,1] and max_outputs >= 1.
    void validate() const;
};

/// Keeps detections with score >= threshold, preserving order.
[[nodiscard]] std::vector<Detection> filter_by_score(const std::vector<Detection>& dets, double threshold);

/// Greedy NMS in ranks_before order; a detection is dropped when its IoU with
/// an already kept detection exceeds iou_threshold. Output is rank ordered.
[[nodiscard]] std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_threshold,
                                         NmsMode mode = NmsMode::class_agnostic);

/// The k best detections in ranks_before order (all of them when fewer).
[[nodiscard]] std::vector<Detection> top_k(const std::vector<Detection>& dets, int k);

/// filter_by_score -> nms -> top_k.
[[nodiscard]] std::vector<Detection> postprocess(const std::vector<Detection>& dets,
                                                 const PostprocessConfig& config);

/// Applies postprocess to every image of a detection set.
[[nodiscard]] DetectionSet postprocess(const DetectionSet& set, const PostprocessConfig& config);

}  // namespace sevseg
