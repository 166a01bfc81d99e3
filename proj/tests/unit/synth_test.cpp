#include <gtest/gtest.h>

#include <cmath>

#include "sevseg/error.hpp"
#include "sevseg/synth.hpp"

using namespace sevseg;

namespace {

// Tight bounds of pixels that differ from the background colour, read off the
// image itself rather than the renderer's bookkeeping.
std::vector<BoundingBox> bounds_from_pixels(const RenderResult& r) {
    const auto& img = r.image;
    const float bg = img.at(0, 0, 0);
    std::vector<BoundingBox> out(r.annotation.digits.size(), BoundingBox{1e9, 1e9, -1, -1});
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (img.at(x, y, 0) == bg) continue;
            const int o = r.owner[static_cast<std::size_t>(y) * img.width() + x];
            EXPECT_GE(o, 0) << "lit pixel without owner at " << x << ',' << y;
            if (o < 0) continue;
            auto& b = out[static_cast<std::size_t>(o)];
            b.xmin = std::min(b.xmin, double(x));
            b.ymin = std::min(b.ymin, double(y));
            b.xmax = std::max(b.xmax, double(x + 1));
            b.ymax = std::max(b.ymax, double(y + 1));
        }
    }
    return out;
}

}  // namespace

TEST(Synth, BoxesAreTightBoundsOfLitPixels) {
    for (double slant : {-8.0, -3.0, 0.0, 5.0, 8.0}) {
        for (auto pol : {Polarity::light_on_dark, Polarity::dark_on_light}) {
            SynthSpec s;
            s.rows = {"1208", "47", "3"};
            s.digit_height = 30;
            s.slant_deg = slant;
            s.polarity = pol;
            const auto r = render(s);
            ASSERT_EQ(r.annotation.digits.size(), 7u);
            const auto want = bounds_from_pixels(r);
            for (std::size_t i = 0; i < want.size(); ++i) {
                EXPECT_EQ(r.annotation.digits[i].box, want[i]) << "slant " << slant << " digit " << i;
            }
        }
    }
}

TEST(Synth, UnslantedEightFillsTheGlyph) {
    SynthSpec s;
    s.rows = {"8"};
    s.digit_height = 40;
    const auto r = render(s);
    const auto g = GlyphMetrics::from(s);
    const auto& b = r.annotation.digits[0].box;
    EXPECT_EQ(b.width(), g.width);
    EXPECT_EQ(b.height(), g.height);
    EXPECT_EQ(g.width, 22);
    EXPECT_EQ(g.stroke, 5);
    EXPECT_EQ(g.middle, 17);
}

TEST(Synth, LitCountsAndOwnerAgree) {
    SynthSpec s;
    s.rows = {"90", "5"};
    s.slant_deg = 4;
    const auto r = render(s);
    std::vector<std::size_t> counts(r.lit_pixels.size(), 0);
    for (int o : r.owner) {
        if (o >= 0) ++counts[static_cast<std::size_t>(o)];
    }
    EXPECT_EQ(counts, r.lit_pixels);
}

TEST(Synth, ClassesAndRowsFollowTheSpec) {
    SynthSpec s;
    s.rows = {"120", "80", "72"};
    const auto r = render(s);
    EXPECT_EQ(r.rows, s.rows);
    std::string classes;
    for (const auto& d : r.annotation.digits) classes.push_back(static_cast<char>('0' + d.cls.value()));
    EXPECT_EQ(classes, "1208072");
    // Rows are right-aligned and stacked top to bottom.
    EXPECT_LT(r.annotation.digits[0].box.ymax, r.annotation.digits[3].box.ymin);
    EXPECT_NEAR(r.annotation.digits[2].box.xmax, r.annotation.digits[4].box.xmax, 0.0);
}

TEST(Synth, NoiseIsSeeded) {
    SynthSpec s;
    s.rows = {"42"};
    s.noise_sigma = 12;
    s.seed = 7;
    const auto a = render(s);
    const auto b = render(s);
    EXPECT_EQ(a.image, b.image);
    s.seed = 8;
    EXPECT_NE(render(s).image, a.image);
    EXPECT_EQ(render(s).annotation, a.annotation);  // boxes ignore noise
}

TEST(Synth, ValidateRejectsBadSpecs) {
    auto bad = [](auto mutate) {
        SynthSpec s;
        s.rows = {"1"};
        mutate(s);
        return s;
    };
    EXPECT_THROW(render(bad([](SynthSpec& s) { s.rows.clear(); })), ValidationError);
    EXPECT_THROW(render(bad([](SynthSpec& s) { s.rows = {"1", "2", "3", "4"}; })), ValidationError);
    EXPECT_THROW(render(bad([](SynthSpec& s) { s.rows = {"12a"}; })), ValidationError);
    EXPECT_THROW(render(bad([](SynthSpec& s) { s.rows = {"1234", "5678"}; })), ValidationError);
    EXPECT_THROW(render(bad([](SynthSpec& s) { s.digit_height = 4; })), ValidationError);
    EXPECT_THROW(render(bad([](SynthSpec& s) { s.slant_deg = 9; })), ValidationError);
    EXPECT_THROW(render(bad([](SynthSpec& s) { s.noise_sigma = -1; })), ValidationError);
    EXPECT_THROW(render(bad([](SynthSpec& s) { s.thickness = 0.6; })), ValidationError);
    EXPECT_THROW(render(bad([](SynthSpec& s) { s.width = 10; s.height = 10; })), LayoutError);
    EXPECT_THROW((void)parse_polarity("sideways"), ValidationError);
    EXPECT_EQ(parse_polarity(to_string(Polarity::dark_on_light)), Polarity::dark_on_light);
}

TEST(Corpus, DeterministicAcrossJobs) {
    CorpusSpec spec;
    spec.noise_sigma = 5;
    spec.slant_max_deg = 6;
    spec.brightness_max = 10;
    const auto a = generate_corpus(24, spec, 99, 1);
    const auto b = generate_corpus(24, spec, 99, 4);
    EXPECT_EQ(a.annotations, b.annotations);
    for (std::size_t i = 0; i < a.scenes.size(); ++i) EXPECT_EQ(a.scenes[i].image, b.scenes[i].image);
    EXPECT_EQ(a.annotations.images[3].file, "synth_00003.png");
    EXPECT_NE(generate_corpus(24, spec, 100, 1).annotations, a.annotations);
}

TEST(Corpus, RespectsSceneLimits) {
    CorpusSpec spec;
    spec.rows_min = 2;
    spec.rows_max = 3;
    spec.digits_per_row_max = 2;
    spec.max_digits = 5;
    const auto c = generate_corpus(200, spec, 1);
    for (const auto& s : c.scenes) {
        EXPECT_GE(s.rows.size(), 2u);
        EXPECT_LE(s.rows.size(), 3u);
        EXPECT_LE(s.annotation.digits.size(), 5u);
        for (const auto& r : s.rows) EXPECT_LE(r.size(), 2u);
        EXPECT_EQ(s.annotation.device.rfind("synth-", 0), 0u);
    }
    EXPECT_EQ(c.histogram, class_histogram(c.annotations));
}

TEST(Corpus, ReferenceWeightsShapeTheHistogram) {
    const auto w = CorpusSpec::reference_weights();
    double total = 0;
    for (double x : w) total += x;
    EXPECT_DOUBLE_EQ(total, 2190.0);
    EXPECT_EQ(w[1], 441.0);
    EXPECT_EQ(w[0], 114.0);

    CorpusSpec spec;
    spec.digit_weights = w;
    const auto c = generate_corpus(1500, spec, 2024);
    std::size_t n = 0;
    for (auto v : c.histogram) n += v;
    double chi2 = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double expect = n * w[k] / total;
        chi2 += (c.histogram[k] - expect) * (c.histogram[k] - expect) / expect;
    }
    EXPECT_LT(chi2, 27.88);  // 9 degrees of freedom, p = 0.001
    EXPECT_GT(c.histogram[1], c.histogram[0] * 2);
}

TEST(Corpus, ValidateRejectsBadSpecs) {
    CorpusSpec spec;
    EXPECT_THROW((void)generate_corpus(0, spec, 1), ValidationError);
    spec.rows_max = 4;
    EXPECT_THROW((void)generate_corpus(1, spec, 1), ValidationError);
    spec = {};
    spec.digit_weights.fill(0);
    EXPECT_THROW((void)generate_corpus(1, spec, 1), ValidationError);
    spec = {};
    spec.slant_max_deg = 12;
    EXPECT_THROW((void)generate_corpus(1, spec, 1), ValidationError);
    spec = {};
    spec.devices = 0;
    EXPECT_THROW((void)generate_corpus(1, spec, 1), ValidationError);
}
