#include "sevseg/augment.hpp"

#include <algorithm>
#include <cmath>

#include "sevseg/error.hpp"
#include "sevseg/parallel.hpp"

namespace sevseg {

AugmentSpec AugmentSpec::full(std::uint64_t seed) {
    AugmentSpec s;
    s.seed = seed;
    return s;
}

AugmentSpec AugmentSpec::lite(std::uint64_t seed) {
    AugmentSpec s;
    s.seed = seed;
    s.contrast_enabled = false;
    s.brightness_enabled = false;
    s.jpeg_enabled = false;
    return s;
}

void AugmentSpec::validate() const {
    if (!(jitter_frac >= 0.0 && jitter_frac < 0.5)) {
        throw ValidationError("jitter fraction must lie in [0, 0.5)");
    }
    if (!(contrast_range.lo > 0.0 && contrast_range.lo <= contrast_range.hi)) {
        throw ValidationError("contrast range must satisfy 0 < lo <= hi");
    }
    if (!(brightness_frac >= 0.0 && brightness_frac <= 1.0)) {
        throw ValidationError("brightness fraction must lie in [0, 1]");
    }
    if (!(jpeg_quality_range.lo >= 1 && jpeg_quality_range.lo <= jpeg_quality_range.hi &&
          jpeg_quality_range.hi <= 100)) {
        throw ValidationError("JPEG quality range must satisfy 1 <= lo <= hi <= 100");
    }
}

AugmentSpec augment_preset(std::string_view name, std::uint64_t seed) {
    if (name == "full") return AugmentSpec::full(seed);
    if (name == "lite") return AugmentSpec::lite(seed);
    throw ValidationError("unknown augmentation preset '" + std::string(name) + "' (full|lite)");
}

AnnotatedImage jitter_boxes(const AnnotatedImage& image, const AugmentSpec& spec, Rng& rng) {
    AnnotatedImage out = image;
    const double f = spec.jitter_frac;
    if (f == 0.0) return out;
    constexpr int kMaxRedraws = 64;
    for (auto& digit : out.digits) {
        const BoundingBox b = digit.box;
        const double w = b.width();
        const double h = b.height();
        BoundingBox j = b;
        for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
            j = clip(BoundingBox{b.xmin + rng.uniform(-f, f) * w, b.ymin + rng.uniform(-f, f) * h,
                                 b.xmax + rng.uniform(-f, f) * w, b.ymax + rng.uniform(-f, f) * h},
                     image.width, image.height);
            if (j.xmin < j.xmax && j.ymin < j.ymax) break;
            j = b;
        }
        digit.box = j;
    }
    return out;
}

Image adjust_contrast(const Image& img, double factor) {
    const double m = img.mean();
    Image out = img;
    for (float& v : out.pixels()) {
        v = static_cast<float>(std::clamp((v - m) * factor + m, 0.0, 255.0));
    }
    return out;
}

Image adjust_brightness(const Image& img, double delta_frac) {
    const double delta = delta_frac * 255.0;
    Image out = img;
    for (float& v : out.pixels()) v = static_cast<float>(std::clamp(v + delta, 0.0, 255.0));
    return out;
}

Image jpeg_degrade(const Image& img, int quality) {
    if (quality < 1 || quality > 100) throw ValidationError("JPEG quality must lie in [1, 100]");
    try {
        const auto bytes = encode_image(img, ".jpg", quality);
        Image out = decode_image(bytes);
        if (out.width() != img.width() || out.height() != img.height()) {
            throw AugmentError("JPEG round trip changed image dimensions");
        }
        return out;
    } catch (const IoError& e) {
        throw AugmentError(std::string("JPEG degradation failed: ") + e.what());
    }
}

std::uint64_t item_seed(std::uint64_t seed, std::string_view file, int copy) noexcept {
    return hash_combine(hash_seed(seed, file), static_cast<std::uint64_t>(copy));
}

std::pair<Image, AnnotatedImage> augment_item(const Image& img, const AnnotatedImage& ann,
                                              const AugmentSpec& spec, int copy, AugmentDraw* draw) {
    Rng rng(item_seed(spec.seed, ann.file, copy));
    AugmentDraw d;
    AnnotatedImage out_ann = jitter_boxes(ann, spec, rng);
    Image out = img;
    if (spec.contrast_enabled) {
        d.contrast = rng.uniform(spec.contrast_range.lo, spec.contrast_range.hi);
        if (d.contrast != 1.0) out = adjust_contrast(out, d.contrast);
    }
    if (spec.brightness_enabled) {
        d.brightness = rng.uniform(-spec.brightness_frac, spec.brightness_frac);
        if (d.brightness != 0.0) out = adjust_brightness(out, d.brightness);
    }
    if (spec.jpeg_enabled) {
        const int lo = static_cast<int>(std::ceil(spec.jpeg_quality_range.lo));
        const int hi = static_cast<int>(std::floor(spec.jpeg_quality_range.hi));
        d.jpeg_quality = rng.between(lo, std::max(lo, hi));
        out = jpeg_degrade(out, d.jpeg_quality);
    }
    quantize(out);
    out_ann.file = augmented_name(ann.file, copy);
    if (draw) *draw = d;
    return {std::move(out), std::move(out_ann)};
}

std::string augmented_name(const std::string& file, int copy) {
    std::filesystem::path p(file);
    const auto stem = p.stem().string() + "_aug" + std::to_string(copy) + ".png";
    return p.has_parent_path() ? (p.parent_path() / stem).generic_string() : stem;
}

AnnotationSet augment_dataset(const AnnotationSet& set, const AugmentSpec& spec, int copies,
                              const ImageLoader& load, const ImageStore& store, unsigned jobs) {
    if (copies < 1) throw ValidationError("copies must be >= 1");
    spec.validate();
    const std::size_t n = set.images.size() * static_cast<std::size_t>(copies);
    AnnotationSet out;
    out.schema_version = set.schema_version;
    out.images.resize(n);
    parallel_for(set.images.size(), jobs, [&](std::size_t i) {
        const auto& ann = set.images[i];
        const Image src = load(ann);
        if (src.width() != ann.width || src.height() != ann.height) {
            throw ValidationError(ann.file + ": image dimensions do not match annotation");
        }
        for (int c = 0; c < copies; ++c) {
            auto [img, a] = augment_item(src, ann, spec, c);
            store(a.file, img);
            out.images[i * static_cast<std::size_t>(copies) + c] = std::move(a);
        }
    });
    return out;
}

AnnotationSet augment_dataset(const AnnotationSet& set, const AugmentSpec& spec, int copies,
                              const std::filesystem::path& image_root,
                              const std::filesystem::path& out_dir, unsigned jobs) {
    return augment_dataset(
        set, spec, copies, [&](const AnnotatedImage& a) { return read_image(image_root / a.file); },
        [&](const std::string& file, const Image& img) {
            const auto path = out_dir / file;
            std::error_code ec;
            std::filesystem::create_directories(path.parent_path(), ec);
            if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
            write_image(img, path);
        },
        jobs);
}

}  // namespace sevseg
