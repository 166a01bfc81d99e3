#include "sevseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "sevseg/error.hpp"
#include "sevseg/parallel.hpp"
#include "sevseg/rng.hpp"

namespace sevseg {

namespace {

struct Rgb {
    float r, g, b;
};

constexpr Rgb kLitOnDark{215, 235, 225};
constexpr Rgb kDarkBackground{18, 26, 22};
constexpr Rgb kLitOnLight{30, 38, 34};
constexpr Rgb kLightBackground{185, 196, 178};

struct Layout {
    GlyphMetrics glyph;
    double shear;
    int lean;
    int pitch;
    int row_gap;
    int width;
    int height;
    int offset_x;
    int offset_y;
    std::size_t widest_row;
};

Layout compute_layout(const SynthSpec& spec) {
    Layout l{GlyphMetrics::from(spec), 0, 0, 0, 0, 0, 0, 0, 0, 0};
    const int h = l.glyph.height;
    l.shear = std::tan(spec.slant_deg * std::numbers::pi / 180.0);
    l.lean = static_cast<int>(std::ceil(h * std::abs(l.shear) - 1e-9));
    const int gap = std::max(2, static_cast<int>(std::lround(0.3 * h)));
    l.pitch = l.glyph.width + l.lean + gap;
    l.row_gap = std::max(2, static_cast<int>(std::lround(0.5 * h)));
    const int margin = std::max(2, static_cast<int>(std::lround(0.4 * h)));
    for (const auto& r : spec.rows) l.widest_row = std::max(l.widest_row, r.size());
    const int rows = static_cast<int>(spec.rows.size());
    const int content_w = static_cast<int>(l.widest_row) * l.pitch - gap;
    const int content_h = rows * h + (rows - 1) * l.row_gap;
    l.width = spec.width > 0 ? spec.width : content_w + 2 * margin;
    l.height = spec.height > 0 ? spec.height : content_h + 2 * margin;
    if (content_w + 2 > l.width || content_h + 2 > l.height) {
        std::ostringstream os;
        os << "layout " << content_w << 'x' << content_h << " does not fit canvas " << l.width << 'x'
           << l.height;
        throw LayoutError(os.str());
    }
    l.offset_x = (l.width - content_w) / 2;
    l.offset_y = (l.height - content_h) / 2;
    return l;
}

bool lit_at(const GlyphMetrics& g, SegmentMask mask, double xg, double yg) {
    for (auto s : kAllSegments) {
        if (!mask.test(s)) continue;
        const auto r = g.segment(s);
        if (xg >= r.xmin && xg < r.xmax && yg >= r.ymin && yg < r.ymax) return true;
    }
    return false;
}

}  // namespace

Polarity parse_polarity(const std::string& name) {
    if (name == "light-on-dark" || name == "light_on_dark") return Polarity::light_on_dark;
    if (name == "dark-on-light" || name == "dark_on_light") return Polarity::dark_on_light;
    throw ValidationError("unknown polarity '" + name + "' (light-on-dark|dark-on-light)");
}

const char* to_string(Polarity p) noexcept {
    return p == Polarity::light_on_dark ? "light-on-dark" : "dark-on-light";
}

void SynthSpec::validate() const {
    if (rows.empty() || rows.size() > 3) throw ValidationError("a scene needs 1 to 3 rows");
    std::size_t total = 0;
    for (const auto& r : rows) {
        if (r.empty()) throw ValidationError("rows must not be empty");
        for (char c : r) {
            if (c < '0' || c > '9') throw ValidationError("row '" + r + "' contains a non-digit");
        }
        total += r.size();
    }
    if (total > 7) throw ValidationError("a scene holds at most 7 digits");
    if (digit_height < 8) throw ValidationError("digit height must be >= 8 px");
    if (!(thickness > 0.0 && thickness < 0.5)) throw ValidationError("thickness must lie in (0, 0.5)");
    if (!(width_ratio > 2 * thickness && width_ratio <= 1.5)) {
        throw ValidationError("width ratio must exceed twice the stroke and be <= 1.5");
    }
    if (!(std::abs(slant_deg) <= 8.0)) throw ValidationError("slant must lie in [-8, 8] degrees");
    if (!(noise_sigma >= 0.0)) throw ValidationError("noise sigma must be >= 0");
    if (width < 0 || height < 0) throw ValidationError("canvas size must be >= 0");
}

GlyphMetrics GlyphMetrics::from(const SynthSpec& spec) {
    GlyphMetrics g{};
    g.height = spec.digit_height;
    g.width = std::max(3, static_cast<int>(std::lround(spec.digit_height * spec.width_ratio)));
    g.stroke = std::max(2, static_cast<int>(std::lround(spec.digit_height * spec.thickness)));
    g.middle = (g.height - g.stroke) / 2;
    return g;
}

BoundingBox GlyphMetrics::segment(Segment s) const noexcept {
    const double w = width;
    const double h = height;
    const double t = stroke;
    const double m = middle;
    switch (s) {
        case Segment::A: return {0, 0, w, t};
        case Segment::B: return {w - t, 0, w, m + t};
        case Segment::C: return {w - t, m, w, h};
        case Segment::D: return {0, h - t, w, h};
        case Segment::E: return {0, m, t, h};
        case Segment::F: return {0, 0, t, m + t};
        case Segment::G: return {0, m, w, m + t};
    }
    return {};
}

RenderResult render(const SynthSpec& spec) {
    spec.validate();
    const Layout l = compute_layout(spec);
    const auto& table = canonical_segment_table();
    const bool lit_dark = spec.polarity == Polarity::dark_on_light;
    const Rgb bg = lit_dark ? kLightBackground : kDarkBackground;
    const Rgb fg = lit_dark ? kLitOnLight : kLitOnDark;

    RenderResult out;
    out.owner.assign(static_cast<std::size_t>(l.width) * l.height, -1);
    out.rows = spec.rows;
    out.annotation.file = spec.file;
    out.annotation.device = spec.device;
    out.annotation.width = l.width;
    out.annotation.height = l.height;

    int digit_index = 0;
    const int h = l.glyph.height;
    for (std::size_t r = 0; r < spec.rows.size(); ++r) {
        const auto& row = spec.rows[r];
        const int oy = l.offset_y + static_cast<int>(r) * (h + l.row_gap);
        for (std::size_t k = 0; k < row.size(); ++k) {
            const int digit = row[k] - '0';
            const SegmentMask mask = table[static_cast<std::size_t>(digit)];
            const int slot_x =
                l.offset_x + static_cast<int>(l.widest_row - row.size() + k) * l.pitch;
            const int ox = slot_x + (l.shear < 0 ? l.lean : 0);
            int minx = l.width, miny = l.height, maxx = -1, maxy = -1;
            std::size_t count = 0;
            for (int py = oy; py < oy + h; ++py) {
                const double yg = py + 0.5 - oy;
                for (int px = slot_x; px < slot_x + l.glyph.width + l.lean; ++px) {
                    const double xg = px + 0.5 - ox - l.shear * (h - yg);
                    if (!lit_at(l.glyph, mask, xg, yg)) continue;
                    out.owner[static_cast<std::size_t>(py) * l.width + px] = digit_index;
                    minx = std::min(minx, px);
                    maxx = std::max(maxx, px);
                    miny = std::min(miny, py);
                    maxy = std::max(maxy, py);
                    ++count;
                }
            }
            out.annotation.digits.push_back(
                GroundTruthDigit{BoundingBox{static_cast<double>(minx), static_cast<double>(miny),
                                             static_cast<double>(maxx + 1), static_cast<double>(maxy + 1)},
                                 ClassId{digit}});
            out.lit_pixels.push_back(count);
            ++digit_index;
        }
    }

    out.image = Image(l.width, l.height);
    Rng rng(spec.seed);
    for (int y = 0; y < l.height; ++y) {
        for (int x = 0; x < l.width; ++x) {
            const bool lit = out.owner[static_cast<std::size_t>(y) * l.width + x] >= 0;
            const Rgb c = lit ? fg : bg;
            const float base[3] = {c.r, c.g, c.b};
            for (int ch = 0; ch < 3; ++ch) {
                double v = base[ch] + spec.brightness;
                if (spec.noise_sigma > 0.0) v += spec.noise_sigma * rng.normal();
                out.image.at(x, y, ch) = static_cast<float>(v);
            }
        }
    }
    quantize(out.image);
    return out;
}

std::array<double, ClassId::kNumClasses> CorpusSpec::reference_weights() noexcept {
    constexpr double rest = (2190.0 - 441.0 - 114.0) / 8.0;
    return {114.0, 441.0, rest, rest, rest, rest, rest, rest, rest, rest};
}

void CorpusSpec::validate() const {
    if (rows_min < 1 || rows_max > 3 || rows_min > rows_max) {
        throw ValidationError("rows must satisfy 1 <= rows_min <= rows_max <= 3");
    }
    if (digits_per_row_max < 1) throw ValidationError("digits per row must be >= 1");
    if (max_digits < rows_max || max_digits > 7) {
        throw ValidationError("max digits must lie in [rows_max, 7]");
    }
    double total = 0.0;
    for (double w : digit_weights) {
        if (!(w >= 0.0)) throw ValidationError("digit weights must be non-negative");
        total += w;
    }
    if (!(total > 0.0)) throw ValidationError("digit weights must not all be zero");
    if (!(slant_max_deg >= 0.0 && slant_max_deg <= 8.0)) {
        throw ValidationError("slant bound must lie in [0, 8] degrees");
    }
    if (!(noise_sigma >= 0.0) || !(brightness_max >= 0.0)) {
        throw ValidationError("noise and brightness bounds must be >= 0");
    }
    if (devices < 1) throw ValidationError("at least one device family is required");
}

Corpus generate_corpus(int n, const CorpusSpec& spec, std::uint64_t seed, unsigned jobs) {
    if (n < 1) throw ValidationError("corpus size must be >= 1");
    spec.validate();
    static constexpr std::array<int, 4> kFamilyHeights{48, 40, 56, 44};
    const std::vector<double> weights(spec.digit_weights.begin(), spec.digit_weights.end());

    Corpus corpus;
    corpus.scenes.resize(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t i) {
        Rng rng(hash_combine(seed, i));
        const int family = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.devices)));
        SynthSpec s;
        s.digit_height = kFamilyHeights[static_cast<std::size_t>(family) % kFamilyHeights.size()];
        s.polarity = spec.mixed_polarity
                         ? (family % 2 == 0 ? Polarity::dark_on_light : Polarity::light_on_dark)
                         : spec.polarity;

        // Canvas fixed per family: tallest and widest layout at the largest slant.
        SynthSpec sizing = s;
        sizing.rows.assign(static_cast<std::size_t>(spec.rows_max), "8");
        sizing.rows[0].assign(static_cast<std::size_t>(std::min(spec.digits_per_row_max, spec.max_digits)), '8');
        sizing.slant_deg = spec.slant_max_deg;
        const auto canvas = compute_layout(sizing);
        s.width = canvas.width;
        s.height = canvas.height;

        const int rows = rng.between(spec.rows_min, spec.rows_max);
        int used = 0;
        for (int r = 0; r < rows; ++r) {
            const int cap = std::min(spec.digits_per_row_max, spec.max_digits - used - (rows - r - 1));
            const int count = rng.between(1, std::max(1, cap));
            std::string row;
            for (int k = 0; k < count; ++k) row.push_back(static_cast<char>('0' + rng.weighted(weights)));
            used += count;
            s.rows.push_back(std::move(row));
        }
        s.slant_deg = spec.slant_max_deg > 0 ? rng.uniform(-spec.slant_max_deg, spec.slant_max_deg) : 0.0;
        s.brightness = spec.brightness_max > 0 ? rng.uniform(-spec.brightness_max, spec.brightness_max) : 0.0;
        s.noise_sigma = spec.noise_sigma;
        s.seed = rng.next();
        char name[32];
        std::snprintf(name, sizeof name, "synth_%05zu.png", i);
        s.file = name;
        s.device = "synth-" + std::string(1, static_cast<char>('A' + family));
        corpus.scenes[i] = render(s);
    });
    for (const auto& scene : corpus.scenes) corpus.annotations.images.push_back(scene.annotation);
    corpus.histogram = class_histogram(corpus.annotations);
    return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (const auto& scene : corpus.scenes) write_image(scene.image, dir / scene.annotation.file);
    save_annotations(corpus.annotations, dir / "annotations.json");
    std::ostringstream os;
    os << "class,count\n";
    for (std::size_t c = 0; c < corpus.histogram.size(); ++c) os << c << ',' << corpus.histogram[c] << '\n';
    write_text_file(dir / "class_histogram.csv", os.str());
}

}  // namespace sevseg
