#include "sevseg/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "sevseg/error.hpp"

namespace sevseg {

namespace {

constexpr std::array<ModelPreset, 6> kPresets{{
    {"efficientdet-d0", 512, 0.3},
    {"efficientdet-d1", 640, 0.5},
    {"efficientdet-d2", 768, 0.5},
    {"efficientdet-lite0", 320, 0.2},
    {"efficientdet-lite1", 384, 0.3},
    {"efficientdet-lite2", 448, 0.2},
}};

bool iequals(std::string_view a, std::string_view b) noexcept {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

Image pad_to(const Image& content, int target) {
    Image out(target, target, 0.0f);
    for (int y = 0; y < content.height(); ++y) {
        for (int x = 0; x < content.width(); ++x) {
            for (int c = 0; c < Image::kChannels; ++c) out.at(x, y, c) = content.at(x, y, c);
        }
    }
    return out;
}

}  // namespace

InputSize::InputSize(int side) : side_(side) {
    if (side <= 0) throw ValidationError("input size must be positive");
}

std::span<const ModelPreset> model_presets() noexcept { return kPresets; }

std::optional<ModelPreset> find_model_preset(std::string_view name) noexcept {
    for (const auto& p : kPresets) {
        if (iequals(p.name, name)) return p;
    }
    return std::nullopt;
}

LetterboxTransform letterbox_transform(int width, int height, InputSize target) {
    if (width <= 0 || height <= 0) throw ValidationError("image dimensions must be positive");
    LetterboxTransform t;
    t.target = target.side();
    t.scale = static_cast<double>(target.side()) / std::max(width, height);
    const int cw = std::clamp(static_cast<int>(std::lround(width * t.scale)), 1, target.side());
    const int ch = std::clamp(static_cast<int>(std::lround(height * t.scale)), 1, target.side());
    t.pad_right = target.side() - cw;
    t.pad_bottom = target.side() - ch;
    return t;
}

Image resize_bilinear(const Image& img, int out_width, int out_height) {
    Image out(out_width, out_height);
    const double sx = static_cast<double>(img.width()) / out_width;
    const double sy = static_cast<double>(img.height()) / out_height;
    for (int y = 0; y < out_height; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height() - 1);
        const double wy = fy - y0;
        for (int x = 0; x < out_width; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width() - 1);
            const double wx = fx - x0;
            for (int c = 0; c < Image::kChannels; ++c) {
                const double top = img.at(x0, y0, c) * (1.0 - wx) + img.at(x1, y0, c) * wx;
                const double bot = img.at(x0, y1, c) * (1.0 - wx) + img.at(x1, y1, c) * wx;
                out.at(x, y, c) = static_cast<float>(top * (1.0 - wy) + bot * wy);
            }
        }
    }
    return out;
}

std::pair<Image, LetterboxTransform> letterbox(const Image& img, InputSize target) {
    const auto t = letterbox_transform(img.width(), img.height(), target);
    const Image content = resize_bilinear(img, t.target - t.pad_right, t.target - t.pad_bottom);
    return {pad_to(content, t.target), t};
}

Image normalize(const Image& img) {
    const auto px = img.pixels();
    const double n = static_cast<double>(px.size());
    double mean = 0.0;
    for (float v : px) mean += v;
    mean /= n;
    double var = 0.0;
    for (float v : px) var += (v - mean) * (v - mean);
    var /= n;
    const double denom = std::max(std::sqrt(var), kNormalizeEpsilon);
    Image out = img;
    auto dst = out.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
        dst[i] = static_cast<float>((px[i] - mean) / denom);
    }
    return out;
}

std::pair<Image, LetterboxTransform> prepare_input(const Image& img, InputSize target) {
    const auto t = letterbox_transform(img.width(), img.height(), target);
    const Image content =
        normalize(resize_bilinear(img, t.target - t.pad_right, t.target - t.pad_bottom));
    return {pad_to(content, t.target), t};
}

BoundingBox to_model_frame(const BoundingBox& box, const LetterboxTransform& t) noexcept {
    return scale(box, t.scale);
}

BoundingBox to_original_frame(const BoundingBox& box, const LetterboxTransform& t) noexcept {
    return {box.xmin / t.scale, box.ymin / t.scale, box.xmax / t.scale, box.ymax / t.scale};
}

}  // namespace sevseg
