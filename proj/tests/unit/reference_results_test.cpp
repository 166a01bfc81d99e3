// Published results for trained detectors. They cannot be reproduced here
// without the models; these tests pin the fixture to our metric semantics.
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "sevseg/metrics.hpp"
#include "sevseg/preprocess.hpp"

using namespace sevseg;
using nlohmann::json;

namespace {

json fixture() {
    std::ifstream in(std::filesystem::path(SEVSEG_TEST_DATA_DIR) / "reference_results.json");
    return json::parse(in);
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace

TEST(ReferenceResults, ThresholdsMatchPresets) {
    const auto f = fixture();
    ASSERT_EQ(f["detection"].size(), model_presets().size());
    for (const auto& row : f["detection"]) {
        const auto p = find_model_preset(row["model"].get<std::string>());
        ASSERT_TRUE(p) << row["model"];
        EXPECT_DOUBLE_EQ(p->score_threshold, row["threshold"].get<double>());
    }
}

TEST(ReferenceResults, F1IsHarmonicMeanOfRoundedValues) {
    const auto f = fixture();
    for (const auto& row : f["detection"]) {
        const double p = row["precision"], r = row["recall"];
        // Inputs are rounded to 3 places, so allow one unit in the last place.
        EXPECT_NEAR(2 * p * r / (p + r), row["f1"].get<double>(), 1.5e-3) << row["model"];
    }
}

TEST(ReferenceResults, CountsReproduceBestRow) {
    const auto f = fixture();
    const auto& c = f["lite1_counts"];
    const auto r = PrfReport::from_counts(c["tp"], c["fp"], c["fn"]);
    EXPECT_EQ(r.tp + r.fn, f["test_digits"].get<std::size_t>());
    const auto& row = f["detection"][4];
    EXPECT_EQ(round3(r.precision), row["precision"].get<double>());
    EXPECT_EQ(round3(r.recall), row["recall"].get<double>());
    EXPECT_EQ(round3(r.f1), row["f1"].get<double>());
}

TEST(ReferenceResults, ConfusionAccuracy) {
    const auto f = fixture();
    const auto& w = f["worst_classifier"];
    ConfusionMatrix m;
    m.counts[1][1] = w["correct"].get<std::size_t>();
    m.counts[7][1] = w["total"].get<std::size_t>() - m.counts[1][1];
    EXPECT_EQ(round3(m.accuracy()), w["accuracy"].get<double>());
}

TEST(ReferenceResults, RecallCapIsPerImageAndClass) {
    // With one detection per image regardless of class, recall cannot exceed
    // images / digits, well below every published AR_1.
    const auto f = fixture();
    const double bound = f["test_images"].get<double>() / f["test_digits"].get<double>();
    for (const auto& row : f["coco"]) {
        EXPECT_GT(row["AR_1"].get<double>(), 2 * bound) << row["model"];
        EXPECT_LE(row["AR_1"].get<double>(), row["AR_10"].get<double>());
        EXPECT_LE(row["mAP"].get<double>(), row["AP_50"].get<double>());
    }

    // A perfect detector on a two-row display: one digit per class, so the
    // per-class cap reaches full recall while a per-image cap finds one digit.
    AnnotationSet gt;
    DetectionSet dets;
    AnnotatedImage img{"bp.png", 200, 100, "bp", {}};
    ImageDetections d{"bp.png", 200, 100, {}};
    for (int k = 0; k < 5; ++k) {
        const BoundingBox b{10.0 + 30 * k, 10, 30.0 + 30 * k, 50};
        img.digits.push_back({b, ClassId{k}});
        d.detections.push_back({b, ClassId{k}, Score{0.9 - 0.1 * k}});
    }
    gt.images.push_back(img);
    dets.images.push_back(d);
    EXPECT_DOUBLE_EQ(recall_at(gt, dets, 0.5, 1), 1.0);
    EXPECT_DOUBLE_EQ(recall_at(gt, dets, 0.5, 1, RecallCap::per_image), 0.2);
}
