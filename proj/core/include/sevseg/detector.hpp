#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "sevseg/dataset.hpp"
#include "sevseg/image.hpp"
#include "sevseg/segments.hpp"

namespace sevseg {

/// Foreground (lit segment) mask, row-major, 1 = foreground.
class BinaryRaster {
public:
    BinaryRaster() = default;
    BinaryRaster(int width, int height) : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * height, 0) {}

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] bool at(int x, int y) const noexcept {
        return data_[static_cast<std::size_t>(y) * width_ + x] != 0;
    }
    void set(int x, int y, bool v) noexcept {
        data_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
    }
    [[nodiscard]] std::size_t count() const noexcept;

    friend bool operator==(const BinaryRaster&, const BinaryRaster&) = default;

private:
    int width_{0};
    int height_{0};
    std::vector<std::uint8_t> data_;
};

/// Probe rectangle as fractions of the (deskewed) digit box.
struct ProbeRect {
    double u0, v0, u1, v1;
};

struct DetectorConfig {
    /// Minimum component pixel count as a fraction of the image area.
    double min_area_frac{0.0005};
    double min_aspect{0.05};
    double max_aspect{1.5};
    /// Otsu separability (between-class / total variance) below which the
    /// image is treated as having no foreground.
    double min_separability{0.75};
    /// A probe is ON when its foreground fraction exceeds this.
    double probe_on{0.5};
    /// Candidates narrower than this (deskewed width / height) are read as a
    /// lone vertical bar, i.e. segments B and C.
    double narrow_aspect{0.3};
    /// Shear search range and step, degrees.
    double max_slant_deg{10.0};
    double slant_step_deg{1.0};
    /// Samples per probe side.
    int probe_samples{6};
    /// Probe placement, indexed by Segment.
    std::array<ProbeRect, 7> probes{{
        {0.30, 0.02, 0.70, 0.10},  // A
        {0.81, 0.18, 0.97, 0.38},  // B
        {0.81, 0.62, 0.97, 0.82},  // C
        {0.30, 0.90, 0.70, 0.98},  // D
        {0.03, 0.62, 0.19, 0.82},  // E
        {0.03, 0.18, 0.19, 0.38},  // F
        {0.30, 0.46, 0.70, 0.54},  // G
    }};
    /// Upper and lower halves of a narrow bar.
    std::array<ProbeRect, 2> bar_probes{{{0.0, 0.10, 1.0, 0.40}, {0.0, 0.60, 1.0, 0.90}}};
    SegmentTable table{canonical_segment_table()};
};

/// Luma = 0.299R + 0.587G + 0.114B, then Otsu's threshold. Foreground is
/// whichever side of the threshold is the minority among border pixels.
[[nodiscard]] BinaryRaster binarize(const Image& img, const DetectorConfig& config = {});

struct Component {
    BoundingBox box;
    std::size_t pixels{0};
};

/// 4-connected components of the foreground, in raster scan order of their first pixel.
[[nodiscard]] std::vector<Component> connected_components(const BinaryRaster& raster);

/// Components passing the area and aspect filters, as boxes.
[[nodiscard]] std::vector<BoundingBox> find_candidates(const BinaryRaster& raster,
                                                       const DetectorConfig& config = {});

struct DigitCandidate {
    BoundingBox box;
    SegmentMask mask;
    std::optional<ClassId> cls;
    double score{0.0};
    /// Shear (tan of slant) at which the probes were most decisive.
    double shear{0.0};
};

/// Samples the probes inside `box` for each shear in the search range and keeps
/// the most decisive reading. score = mean over probes of |fraction - 0.5| * 2,
/// and 0 when the mask does not decode.
[[nodiscard]] DigitCandidate probe_and_decode(const BinaryRaster& raster, const BoundingBox& box,
                                              const DetectorConfig& config = {});

/// binarize -> find_candidates -> probe_and_decode, keeping decoded digits.
/// Boxes are in the input image frame; no suppression is applied.
[[nodiscard]] ImageDetections detect(const Image& img, const DetectorConfig& config = {});

}  // namespace sevseg
