#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "sevseg/geometry.hpp"
#include "sevseg/image.hpp"

namespace sevseg {

/// Square model input side in pixels.
class InputSize {
public:
    /// Throws ValidationError unless side > 0.
    explicit InputSize(int side);
    [[nodiscard]] int side() const noexcept { return side_; }
    friend auto operator<=>(const InputSize&, const InputSize&) = default;

private:
    int side_;
};

/// Detector architectures with their square input side and the operating
/// score threshold that maximised F1 for that architecture.
struct ModelPreset {
    std::string_view name;
    int input_side;
    double score_threshold;
};

[[nodiscard]] std::span<const ModelPreset> model_presets() noexcept;
/// Case-insensitive lookup ("efficientdet-lite1", "EfficientDet-D0", ...).
[[nodiscard]] std::optional<ModelPreset> find_model_preset(std::string_view name) noexcept;

/// Maps original image pixels to the model frame: content is scaled by `scale`
/// and anchored top-left, padding sits on the right and bottom.
struct LetterboxTransform {
    double scale{1.0};
    int pad_right{0};
    int pad_bottom{0};
    int target{0};
};

/// Transform for a width x height source into a target x target input.
[[nodiscard]] LetterboxTransform letterbox_transform(int width, int height, InputSize target);

/// Bilinear resampling with half-pixel centres and edge clamping.
[[nodiscard]] Image resize_bilinear(const Image& img, int out_width, int out_height);

/// Resample so the longer side equals target, then pad bottom/right with zeros.
[[nodiscard]] std::pair<Image, LetterboxTransform> letterbox(const Image& img, InputSize target);

inline constexpr double kNormalizeEpsilon = 1e-6;

/// (v - mean) / max(std, eps), with mean and population std over every
/// pixel and channel jointly.
[[nodiscard]] Image normalize(const Image& img);

/// Full model input: resample, normalize, then zero pad. Padded pixels stay 0.
[[nodiscard]] std::pair<Image, LetterboxTransform> prepare_input(const Image& img, InputSize target);

[[nodiscard]] BoundingBox to_model_frame(const BoundingBox& box, const LetterboxTransform& t) noexcept;
[[nodiscard]] BoundingBox to_original_frame(const BoundingBox& box, const LetterboxTransform& t) noexcept;

}  // namespace sevseg
