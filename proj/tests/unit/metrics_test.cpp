#include <gtest/gtest.h>

#include "oracles.hpp"
#include "random_instances.hpp"
#include "sevseg/error.hpp"
#include "sevseg/metrics.hpp"

using namespace sevseg;

namespace {

Detection det(BoundingBox b, int cls, double score) { return {b, ClassId{cls}, Score{score}}; }

std::pair<AnnotationSet, DetectionSet> one_image(std::vector<GroundTruthDigit> gt, std::vector<Detection> dets) {
    AnnotationSet g;
    g.images.push_back({"x.png", 200, 100, "d", std::move(gt)});
    DetectionSet d;
    d.images.push_back({"x.png", 200, 100, std::move(dets)});
    return {g, d};
}

// Recall with a per-image cap across classes, for the RecallCap::per_image option.
double naive_recall_per_image(const AnnotationSet& gt, const DetectionSet& dets, double thr, int k) {
    double sum = 0;
    int classes = 0;
    for (int c = 0; c < 10; ++c) {
        std::size_t npos = 0, hit = 0;
        for (const auto& img : gt.images) {
            auto top = oracle::ranked(oracle::find_image(dets, img.file).detections);
            if (top.size() > static_cast<std::size_t>(k)) top.resize(static_cast<std::size_t>(k));
            std::vector<Detection> of_class;
            for (const auto& d : top) {
                if (d.cls.value() == c) of_class.push_back(d);
            }
            const auto g = oracle::only_class(img, c);
            npos += g.digits.size();
            std::size_t m = 0;
            oracle::greedy_flags(g, of_class, thr, false, &m);
            hit += m;
        }
        if (npos == 0) continue;
        sum += static_cast<double>(hit) / static_cast<double>(npos);
        ++classes;
    }
    return classes ? sum / classes : 0.0;
}

}  // namespace

TEST(Metrics, HandComputedAp) {
    // Two ground truths; ranked detections TP, FP, TP.
    // Envelope precision is 1 up to recall 0.5 (51 levels) and 2/3 beyond (50 levels).
    auto [gt, d] = one_image({{{0, 0, 10, 20}, ClassId{4}}, {{50, 0, 60, 20}, ClassId{4}}},
                             {det({0, 0, 10, 20}, 4, 0.9), det({100, 0, 110, 20}, 4, 0.8), det({50, 0, 60, 20}, 4, 0.7)});
    const auto ap = average_precision(gt, d, 0.5);
    ASSERT_TRUE(ap.per_class[4].has_value());
    EXPECT_NEAR(*ap.per_class[4], (51.0 + 50.0 * 2.0 / 3.0) / 101.0, 1e-12);
    EXPECT_EQ(ap.classes_evaluated, 1u);
    EXPECT_FALSE(ap.per_class[3].has_value());
}

TEST(Metrics, ApMatchesOracleOnRandomInstances) {
    Rng rng(41);
    for (int i = 0; i < 300; ++i) {
        const auto inst = testsupport::random_instance(rng);
        const double thr = rng.between(10, 19) / 20.0;
        const auto ap = average_precision(inst.gt, inst.dets, thr);
        for (int c = 0; c < 10; ++c) {
            const auto want = oracle::naive_class_ap(inst.gt, inst.dets, c, thr, 100);
            ASSERT_EQ(ap.per_class[static_cast<std::size_t>(c)].has_value(), want.has_value());
            if (want) EXPECT_NEAR(*ap.per_class[static_cast<std::size_t>(c)], *want, 1e-12);
        }
        for (int k : {1, 3, 10}) {
            EXPECT_NEAR(recall_at(inst.gt, inst.dets, thr, k), oracle::naive_recall_at(inst.gt, inst.dets, thr, k),
                        1e-12);
            EXPECT_NEAR(recall_at(inst.gt, inst.dets, thr, k, RecallCap::per_image),
                        naive_recall_per_image(inst.gt, inst.dets, thr, k), 1e-12);
        }
    }
}

TEST(Metrics, CocoReportMatchesOracle) {
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        const auto inst = testsupport::random_instance(rng);
        const auto r = coco_report(inst.gt, inst.dets);
        const auto o = oracle::naive_coco(inst.gt, inst.dets);
        EXPECT_NEAR(r.mAP, o.mAP, 1e-12);
        EXPECT_NEAR(r.AP_50, o.AP_50, 1e-12);
        EXPECT_NEAR(r.AP_75, o.AP_75, 1e-12);
        EXPECT_NEAR(r.AR_1, o.AR_1, 1e-12);
        EXPECT_NEAR(r.AR_10, o.AR_10, 1e-12);
    }
}

TEST(Metrics, IouThresholds) {
    const auto t = coco_iou_thresholds();
    EXPECT_EQ(t.front(), 0.5);
    EXPECT_EQ(t[5], 0.75);
    EXPECT_EQ(t.back(), 0.95);
}

TEST(Metrics, NoGroundTruthGivesZeroAp) {
    auto [gt, d] = one_image({}, {det({0, 0, 5, 5}, 1, 0.9)});
    const auto r = coco_report(gt, d);
    EXPECT_EQ(r.mAP, 0.0);
    EXPECT_EQ(r.classes_evaluated, 0u);
    const auto p = prf(gt, d, 0.5);
    EXPECT_EQ(p.fp, 1u);
    EXPECT_EQ(p.precision, 0.0);
    EXPECT_EQ(p.recall, 1.0);  // nothing to find
}

TEST(Metrics, PrfConventions) {
    auto [gt, none] = one_image({{{0, 0, 10, 20}, ClassId{1}}}, {});
    const auto p = prf(gt, none, 0.5);
    EXPECT_EQ(p.precision, 1.0);
    EXPECT_EQ(p.recall, 0.0);
    EXPECT_EQ(p.f1, 0.0);
    const auto empty = PrfReport::from_counts(0, 0, 0);
    EXPECT_EQ(empty.precision, 1.0);
    EXPECT_EQ(empty.recall, 1.0);
    EXPECT_EQ(empty.f1, 1.0);
    const auto mixed = PrfReport::from_counts(3, 1, 2);
    EXPECT_DOUBLE_EQ(mixed.precision, 0.75);
    EXPECT_DOUBLE_EQ(mixed.recall, 0.6);
    EXPECT_DOUBLE_EQ(mixed.f1, 2 * 0.75 * 0.6 / 1.35);
}

TEST(Metrics, ClassSensitivity) {
    auto [gt, d] = one_image({{{0, 0, 10, 20}, ClassId{1}}}, {det({0, 0, 10, 20}, 7, 0.9)});
    EXPECT_EQ(prf(gt, d, 0.5).tp, 1u);
    const auto strict = prf(gt, d, 0.5, 0.5, true);
    EXPECT_EQ(strict.tp, 0u);
    EXPECT_EQ(strict.fp, 1u);
    EXPECT_EQ(strict.fn, 1u);
}

TEST(Metrics, GreedyMatchingTakesBestIouAndDuplicatesAreFalsePositives) {
    auto [gt, d] = one_image({{{0, 0, 10, 20}, ClassId{1}}, {{4, 0, 14, 20}, ClassId{1}}},
                             {det({4, 0, 14, 20}, 1, 0.9), det({4, 0, 14, 20}, 1, 0.8)});
    const auto m = match(gt, d, 0.5, false);
    ASSERT_EQ(m.images.size(), 1u);
    EXPECT_EQ(m.images[0].det_to_gt[0], std::optional<std::size_t>{1});
    // The duplicate cannot fall back to the other ground truth: IoU 6/14.
    EXPECT_EQ(m.images[0].det_to_gt[1], std::nullopt);
    EXPECT_EQ(m.tp, 1u);
    EXPECT_EQ(m.fp, 1u);
    EXPECT_EQ(m.fn, 1u);
}

TEST(Metrics, PairingRequiresSameImages) {
    AnnotationSet gt;
    gt.images.push_back({"a.png", 10, 10, "d", {}});
    gt.images.push_back({"b.png", 10, 10, "d", {}});
    DetectionSet d;
    d.images.push_back({"a.png", 10, 10, {}});
    d.images.push_back({"c.png", 10, 10, {}});
    try {
        (void)prf(gt, d, 0.5);
        FAIL();
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("b.png"), std::string::npos);
        EXPECT_NE(msg.find("c.png"), std::string::npos);
    }
}

TEST(Sweep, GridAndCsv) {
    const auto grid = default_sweep_grid();
    ASSERT_EQ(grid.size(), 19u);
    EXPECT_DOUBLE_EQ(grid.front(), 0.05);
    EXPECT_DOUBLE_EQ(grid.back(), 0.95);
    auto [gt, d] = one_image({{{0, 0, 10, 20}, ClassId{1}}}, {det({0, 0, 10, 20}, 1, 0.62)});
    const auto s = sweep(gt, d);
    const auto csv = s.to_csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "threshold,precision,recall,f1");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 20);
    // F1 is 1 for every threshold up to 0.60; the lowest wins.
    EXPECT_EQ(s.best_threshold(), 0.05);
    EXPECT_EQ(s.rows[12].report.f1, 0.0);  // 0.65
    EXPECT_THROW((void)sweep(gt, d, {}), ValidationError);
}

TEST(Sweep, MonotoneCounts) {
    Rng rng(43);
    for (int i = 0; i < 200; ++i) {
        const auto inst = testsupport::random_instance(rng);
        const auto s = sweep(inst.gt, inst.dets);
        for (std::size_t k = 1; k < s.rows.size(); ++k) {
            EXPECT_LE(s.rows[k].report.tp, s.rows[k - 1].report.tp);
            EXPECT_LE(s.rows[k].report.fp, s.rows[k - 1].report.fp);
            EXPECT_GE(s.rows[k].report.fn, s.rows[k - 1].report.fn);
        }
    }
}

TEST(Confusion, CountsTruePositivesByClass) {
    auto [gt, d] = one_image({{{0, 0, 10, 20}, ClassId{1}}, {{50, 0, 60, 20}, ClassId{7}}, {{100, 0, 110, 20}, ClassId{3}}},
                             {det({0, 0, 10, 20}, 1, 0.9), det({50, 0, 60, 20}, 1, 0.9), det({150, 0, 160, 20}, 3, 0.9)});
    const auto m = confusion(gt, d, 0.5);
    EXPECT_EQ(m.total(), 2u);
    EXPECT_EQ(m.trace(), 1u);
    EXPECT_EQ(m.counts[7][1], 1u);
    EXPECT_EQ(m.row_sum(7), 1u);
    EXPECT_DOUBLE_EQ(m.accuracy(), 0.5);
    EXPECT_EQ(ConfusionMatrix{}.accuracy(), 1.0);
    const auto csv = m.to_csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "true\\pred,0,1,2,3,4,5,6,7,8,9");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
}

TEST(Confusion, TotalEqualsTruePositives) {
    Rng rng(44);
    for (int i = 0; i < 300; ++i) {
        const auto inst = testsupport::random_instance(rng);
        const double t = testsupport::random_score(rng);
        EXPECT_EQ(confusion(inst.gt, inst.dets, t).total(), prf(inst.gt, inst.dets, t).tp);
    }
}

TEST(Metrics, ReportJson) {
    auto [gt, d] = one_image({{{0, 0, 10, 20}, ClassId{1}}}, {det({0, 0, 10, 20}, 1, 0.9)});
    const auto j = coco_report(gt, d).to_json();
    EXPECT_NE(j.find("\"mAP\": 1.0"), std::string::npos);
    EXPECT_NE(j.find("\"0.50\""), std::string::npos);
    EXPECT_NE(prf(gt, d, 0.5).to_json().find("\"f1\": 1.0"), std::string::npos);
}
