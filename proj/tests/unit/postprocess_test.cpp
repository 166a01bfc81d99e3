#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_instances.hpp"
#include "sevseg/error.hpp"
#include "sevseg/postprocess.hpp"

using namespace sevseg;

namespace {
Detection det(double x0, double y0, double x1, double y1, int cls, double score) {
    return {{x0, y0, x1, y1}, ClassId{cls}, Score{score}};
}
}  // namespace

TEST(Filter, InclusiveThresholdKeepsOrder) {
    const std::vector<Detection> d{det(0, 0, 1, 1, 1, 0.3), det(0, 0, 1, 1, 2, 0.5), det(0, 0, 1, 1, 3, 0.29)};
    const auto out = filter_by_score(d, 0.3);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].cls.value(), 1);
    EXPECT_EQ(out[1].cls.value(), 2);
    EXPECT_EQ(filter_by_score(d, 0.0).size(), 3u);
}

TEST(Nms, SuppressesOnlyAboveThreshold) {
    // IoU of these two is exactly 0.5: kept both at threshold 0.5.
    const auto a = det(0, 0, 30, 10, 1, 0.9);
    const auto b = det(10, 0, 40, 10, 1, 0.8);
    ASSERT_DOUBLE_EQ(iou(a.box, b.box), 0.5);
    EXPECT_EQ(nms({a, b}, 0.5).size(), 2u);
    EXPECT_EQ(nms({a, b}, 0.49).size(), 1u);
}

TEST(Nms, ClassAgnosticVersusPerClass) {
    const auto a = det(0, 0, 10, 10, 1, 0.9);
    const auto b = det(1, 0, 11, 10, 7, 0.8);
    EXPECT_EQ(nms({a, b}, 0.5).size(), 1u);
    EXPECT_EQ(nms({a, b}, 0.5, NmsMode::per_class).size(), 2u);
}

TEST(Nms, MatchesQuadraticReference) {
    Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        const auto d = testsupport::random_scene(rng, 30);
        const double t = rng.between(1, 19) / 20.0;
        for (bool per_class : {false, true}) {
            const auto got = nms(d, t, per_class ? NmsMode::per_class : NmsMode::class_agnostic);
            EXPECT_EQ(oracle::ranked(got), oracle::ranked(oracle::naive_nms(d, t, per_class)));
            EXPECT_EQ(got, oracle::ranked(got));  // output is rank ordered
        }
    }
}

TEST(Nms, KeptBoxesPairwiseBelowThreshold) {
    Rng rng(32);
    for (int i = 0; i < 200; ++i) {
        const auto kept = nms(testsupport::random_scene(rng, 40), 0.5);
        for (std::size_t a = 0; a < kept.size(); ++a) {
            for (std::size_t b = a + 1; b < kept.size(); ++b) ASSERT_LE(iou(kept[a].box, kept[b].box), 0.5);
        }
    }
}

TEST(TopK, KeepsBestInRankOrder) {
    const std::vector<Detection> d{det(0, 0, 1, 1, 1, 0.1), det(0, 0, 1, 1, 2, 0.9), det(0, 0, 1, 1, 3, 0.5)};
    const auto out = top_k(d, 2);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].cls.value(), 2);
    EXPECT_EQ(out[1].cls.value(), 3);
    EXPECT_EQ(top_k(d, 7).size(), 3u);
    EXPECT_THROW((void)top_k(d, 0), ValidationError);
}

TEST(Postprocess, CapAndIdempotence) {
    Rng rng(33);
    PostprocessConfig cfg;
    for (int i = 0; i < 200; ++i) {
        const auto d = testsupport::random_scene(rng, 50);
        const auto once = postprocess(d, cfg);
        EXPECT_LE(once.size(), 7u);
        EXPECT_EQ(postprocess(once, cfg), once);
    }
}

// Score filtering commutes with suppression and the cap: post-processing at 0
// and filtering afterwards equals post-processing at the threshold.
TEST(Postprocess, FilterCommutesWithNmsAndTopK) {
    Rng rng(34);
    for (int i = 0; i < 300; ++i) {
        const auto d = testsupport::random_scene(rng, 50);
        const double t = rng.between(1, 19) / 20.0;
        PostprocessConfig at_zero;
        PostprocessConfig at_t;
        at_t.score_threshold = t;
        const auto late = filter_by_score(postprocess(d, at_zero), t);
        const auto early = postprocess(d, at_t);
        EXPECT_EQ(late, early);
    }
}

TEST(Postprocess, ConfigValidation) {
    PostprocessConfig c;
    c.iou_threshold = 1.5;
    EXPECT_THROW(c.validate(), ValidationError);
    c = {};
    c.max_outputs = 0;
    EXPECT_THROW(c.validate(), ValidationError);
    c = {};
    c.score_threshold = -0.1;
    EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Postprocess, DetectionSetKeepsImagesAndMeta) {
    DetectionSet s;
    s.images.push_back({"a.png", 10, 10, {det(0, 0, 5, 5, 1, 0.9), det(0, 0, 5, 5, 2, 0.2)}});
    s.bridge_meta = BridgeMeta{true};
    const auto out = postprocess(s, PostprocessConfig{});
    ASSERT_EQ(out.images.size(), 1u);
    EXPECT_EQ(out.images[0].detections.size(), 1u);
    EXPECT_EQ(out.bridge_meta, s.bridge_meta);
}
