#include "sevseg/postprocess.hpp"

#include <algorithm>

#include "sevseg/error.hpp"

namespace sevseg {

void PostprocessConfig::validate() const {
    if (!(score_threshold >= 0.0 && score_threshold <= 1.0)) {
        throw ValidationError("score threshold must lie in [0,1]");
    }
    if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
        throw ValidationError("IoU threshold must lie in [0,1]");
    }
    if (max_outputs < 1) throw ValidationError("max outputs must be >= 1");
}

std::vector<Detection> filter_by_score(const std::vector<Detection>& dets, double threshold) {
    std::vector<Detection> out;
    out.reserve(dets.size());
    std::copy_if(dets.begin(), dets.end(), std::back_inserter(out),
                 [threshold](const Detection& d) { return d.score.value() >= threshold; });
    return out;
}

std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_threshold, NmsMode mode) {
    std::vector<Detection> sorted = dets;
    std::sort(sorted.begin(), sorted.end(), ranks_before);
    std::vector<Detection> kept;
    kept.reserve(sorted.size());
    for (const auto& d : sorted) {
        const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
            if (mode == NmsMode::per_class && k.cls != d.cls) return false;
            return iou(k.box, d.box) > iou_threshold;
        });
        if (!suppressed) kept.push_back(d);
    }
    return kept;
}

std::vector<Detection> top_k(const std::vector<Detection>& dets, int k) {
    if (k < 1) throw ValidationError("top_k requires k >= 1");
    std::vector<Detection> out = dets;
    std::sort(out.begin(), out.end(), ranks_before);
    if (out.size() > static_cast<std::size_t>(k)) out.resize(static_cast<std::size_t>(k));
    return out;
}

std::vector<Detection> postprocess(const std::vector<Detection>& dets, const PostprocessConfig& config) {
    config.validate();
    return top_k(nms(filter_by_score(dets, config.score_threshold), config.iou_threshold, config.mode),
                 config.max_outputs);
}

DetectionSet postprocess(const DetectionSet& set, const PostprocessConfig& config) {
    DetectionSet out = set;
    for (auto& img : out.images) img.detections = postprocess(img.detections, config);
    return out;
}

}  // namespace sevseg
