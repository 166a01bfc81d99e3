#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sevseg/dataset.hpp"
#include "sevseg/image.hpp"
#include "sevseg/segments.hpp"

namespace sevseg {

enum class Polarity {
    light_on_dark,
    dark_on_light,
};

[[nodiscard]] Polarity parse_polarity(const std::string& name);
[[nodiscard]] const char* to_string(Polarity p) noexcept;

/// One display scene. Digit geometry in pixels: height H = digit_height,
/// width round(H * width_ratio), stroke round(H * thickness).
struct SynthSpec {
    std::vector<std::string> rows;
    int digit_height{48};
    double thickness{0.12};
    double width_ratio{0.55};
    /// Italic lean in degrees; positive leans the top to the right.
    double slant_deg{0.0};
    Polarity polarity{Polarity::light_on_dark};
    double noise_sigma{0.0};
    /// Added to every channel before noise.
    double brightness{0.0};
    /// Canvas size; 0 sizes the canvas to the layout.
    int width{0};
    int height{0};
    std::uint64_t seed{0};
    std::string file{"synth.png"};
    std::string device{"synth"};

    /// Throws ValidationError (or LayoutError for sizing problems).
    void validate() const;
};

/// Integer glyph dimensions shared by renderer and tests.
struct GlyphMetrics {
    int height;
    int width;
    int stroke;
    int middle;  ///< top of the middle bar

    [[nodiscard]] static GlyphMetrics from(const SynthSpec& spec);
    /// Segment rectangle in glyph coordinates (x right, y down), half-open.
    [[nodiscard]] BoundingBox segment(Segment s) const noexcept;
};

struct RenderResult {
    Image image;
    AnnotatedImage annotation;
    /// The rendered rows, top to bottom: the expected reading.
    std::vector<std::string> rows;
    /// Lit pixel count per digit, in annotation order.
    std::vector<std::size_t> lit_pixels;
    /// Per-pixel digit index (row-major), -1 for background.
    std::vector<int> owner;
};

/// Draws every digit's segments with overlapping joints so each digit is one
/// 4-connected component. Ground-truth boxes are the tight bounds of lit
/// pixels, computed before noise and brightness are applied.
[[nodiscard]] RenderResult render(const SynthSpec& spec);

/// Scene distribution for corpus generation.
struct CorpusSpec {
    int rows_min{1};
    int rows_max{3};
    int digits_per_row_max{3};
    int max_digits{7};
    std::array<double, ClassId::kNumClasses> digit_weights{1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
    double noise_sigma{0.0};
    double slant_max_deg{0.0};
    double brightness_max{0.0};
    /// When false every scene uses `polarity`; otherwise it follows the device family.
    bool mixed_polarity{true};
    Polarity polarity{Polarity::dark_on_light};
    int devices{4};

    /// Weights shaped like the reference dataset: 1 most frequent (441),
    /// 0 least frequent (114), the rest sharing the remaining 1635 evenly.
    [[nodiscard]] static std::array<double, ClassId::kNumClasses> reference_weights() noexcept;

    void validate() const;
};

struct Corpus {
    std::vector<RenderResult> scenes;
    AnnotationSet annotations;
    ClassHistogram histogram{};
};

/// Scene i uses seed hash_combine(seed, i), file "synth_NNNNN.png" and device
/// "synth-<family>". Families fix digit height and (if mixed) polarity.
[[nodiscard]] Corpus generate_corpus(int n, const CorpusSpec& spec, std::uint64_t seed, unsigned jobs = 1);

/// Writes images, annotations.json and class_histogram.csv under `dir`.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace sevseg
