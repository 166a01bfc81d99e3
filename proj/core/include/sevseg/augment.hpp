#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string_view>

#include "sevseg/dataset.hpp"
#include "sevseg/image.hpp"
#include "sevseg/rng.hpp"

namespace sevseg {

struct Range {
    double lo;
    double hi;
};

/// Photometric and box-jitter augmentation parameters. Disabled transforms are
/// skipped entirely (no random draw is consumed for them).
struct AugmentSpec {
    double jitter_frac{0.05};
    bool contrast_enabled{true};
    Range contrast_range{0.8, 1.25};
    bool brightness_enabled{true};
    double brightness_frac{0.20};
    bool jpeg_enabled{true};
    Range jpeg_quality_range{80, 100};
    std::uint64_t seed{0};

    /// All four transforms.
    static AugmentSpec full(std::uint64_t seed);
    /// Box jitter only.
    static AugmentSpec lite(std::uint64_t seed);
    /// Throws ValidationError for out-of-range parameters.
    void validate() const;
};

/// Looks up "full" or "lite"; throws ValidationError otherwise.
[[nodiscard]] AugmentSpec augment_preset(std::string_view name, std::uint64_t seed);

/// Offsets each corner by uniform(-f, f) times the box width (x) or height (y),
/// clips to the image and re-draws if the result would lose positive area.
[[nodiscard]] AnnotatedImage jitter_boxes(const AnnotatedImage& image, const AugmentSpec& spec, Rng& rng);

/// (v - mean) * factor + mean, clamped to [0,255].
[[nodiscard]] Image adjust_contrast(const Image& img, double factor);
/// v + delta_frac * 255, clamped to [0,255].
[[nodiscard]] Image adjust_brightness(const Image& img, double delta_frac);
/// JPEG encode/decode round trip at `quality`. Throws AugmentError on codec failure.
[[nodiscard]] Image jpeg_degrade(const Image& img, int quality);

/// The parameters drawn for one augmented copy.
struct AugmentDraw {
    double contrast{1.0};
    double brightness{0.0};
    int jpeg_quality{100};
};

/// Seed for one (image, copy) pair: hash of spec seed, file name and copy index.
[[nodiscard]] std::uint64_t item_seed(std::uint64_t seed, std::string_view file, int copy) noexcept;

/// Augments one image. Order: jitter boxes, contrast, brightness, JPEG.
[[nodiscard]] std::pair<Image, AnnotatedImage> augment_item(const Image& img, const AnnotatedImage& ann,
                                                            const AugmentSpec& spec, int copy,
                                                            AugmentDraw* draw = nullptr);

/// File name for copy k of `file`: "<stem>_aug<k><ext>" (ext forced to .png).
[[nodiscard]] std::string augmented_name(const std::string& file, int copy);

using ImageLoader = std::function<Image(const AnnotatedImage&)>;
using ImageStore = std::function<void(const std::string& file, const Image&)>;

/// Emits `copies` augmented versions of every image (image-major, copy-minor
/// order). Source images are only read.
[[nodiscard]] AnnotationSet augment_dataset(const AnnotationSet& set, const AugmentSpec& spec, int copies,
                                            const ImageLoader& load, const ImageStore& store,
                                            unsigned jobs = 1);

/// Filesystem variant: images are read relative to `image_root` and written as
/// PNG under `out_dir`.
[[nodiscard]] AnnotationSet augment_dataset(const AnnotationSet& set, const AugmentSpec& spec, int copies,
                                            const std::filesystem::path& image_root,
                                            const std::filesystem::path& out_dir, unsigned jobs = 1);

}  // namespace sevseg
