#include "sevseg/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "sevseg/error.hpp"
#include "sevseg/postprocess.hpp"

namespace sevseg {

namespace {

using ImagePair = std::pair<const AnnotatedImage*, const ImageDetections*>;

/// Indices of `dets` in ranks_before order.
std::vector<std::size_t> ranked_indices(const std::vector<Detection>& dets) {
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ranks_before(dets[a], dets[b]); });
    return order;
}

/// Greedy matching over the detections listed in `visit` (already ranked).
ImageMatch match_image(const AnnotatedImage& gt, const std::vector<Detection>& dets,
                       const std::vector<std::size_t>& visit, double iou_threshold, bool class_sensitive) {
    ImageMatch m;
    m.file = gt.file;
    m.det_to_gt.assign(dets.size(), std::nullopt);
    m.gt_matched.assign(gt.digits.size(), false);
    for (std::size_t di : visit) {
        const Detection& d = dets[di];
        double best = -1.0;
        std::optional<std::size_t> best_gt;
        for (std::size_t g = 0; g < gt.digits.size(); ++g) {
            if (m.gt_matched[g]) continue;
            if (class_sensitive && gt.digits[g].cls != d.cls) continue;
            const double v = iou(d.box, gt.digits[g].box);
            if (v >= iou_threshold && v > best) {
                best = v;
                best_gt = g;
            }
        }
        if (best_gt) {
            m.det_to_gt[di] = best_gt;
            m.gt_matched[*best_gt] = true;
        }
    }
    return m;
}

/// Ranked detection indices capped at max_dets per class (cap_per_class) or per image.
std::vector<std::size_t> capped_visit(const std::vector<Detection>& dets, int max_dets, bool cap_per_class) {
    const auto order = ranked_indices(dets);
    std::vector<std::size_t> visit;
    std::array<int, ClassId::kNumClasses> taken{};
    int total = 0;
    for (std::size_t di : order) {
        if (cap_per_class) {
            auto& n = taken[static_cast<std::size_t>(dets[di].cls.value())];
            if (n >= max_dets) continue;
            ++n;
        } else {
            if (total >= max_dets) break;
            ++total;
        }
        visit.push_back(di);
    }
    return visit;
}

struct ScoredMatch {
    double score;
    bool tp;
};

/// Per class: visited detections sorted by score (stable on image then rank
/// order) with their TP flags, and the ground-truth count.
struct ClassMatches {
    std::array<std::vector<ScoredMatch>, ClassId::kNumClasses> dets;
    std::array<std::size_t, ClassId::kNumClasses> npos{};
};

ClassMatches collect_class_matches(const std::vector<ImagePair>& pairs, double iou_threshold, int max_dets,
                                   bool cap_per_class) {
    ClassMatches cm;
    for (const auto& [gt, det] : pairs) {
        for (const auto& g : gt->digits) ++cm.npos[static_cast<std::size_t>(g.cls.value())];
        const auto visit = capped_visit(det->detections, max_dets, cap_per_class);
        const auto m = match_image(*gt, det->detections, visit, iou_threshold, true);
        for (std::size_t di : visit) {
            const auto& d = det->detections[di];
            cm.dets[static_cast<std::size_t>(d.cls.value())].push_back(
                {d.score.value(), m.det_to_gt[di].has_value()});
        }
    }
    for (auto& list : cm.dets) {
        std::stable_sort(list.begin(), list.end(),
                         [](const ScoredMatch& a, const ScoredMatch& b) { return a.score > b.score; });
    }
    return cm;
}

/// 101-point interpolated AP of one ranked list against npos positives.
double interpolated_ap(const std::vector<ScoredMatch>& ranked, std::size_t npos) {
    const std::size_t n = ranked.size();
    std::vector<double> precision(n);
    std::vector<double> recall(n);
    std::size_t tp = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (ranked[i].tp) ++tp;
        precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
        recall[i] = static_cast<double>(tp) / static_cast<double>(npos);
    }
    for (std::size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);
    double sum = 0.0;
    for (int k = 0; k <= 100; ++k) {
        const double r = k / 100.0;
        const auto it = std::lower_bound(recall.begin(), recall.end(), r);
        if (it != recall.end()) sum += precision[static_cast<std::size_t>(it - recall.begin())];
    }
    return sum / 101.0;
}

ApResult ap_from_matches(const ClassMatches& cm) {
    ApResult r;
    double sum = 0.0;
    for (std::size_t c = 0; c < ClassId::kNumClasses; ++c) {
        if (cm.npos[c] == 0) continue;
        const double ap = interpolated_ap(cm.dets[c], cm.npos[c]);
        r.per_class[c] = ap;
        sum += ap;
        ++r.classes_evaluated;
    }
    r.mean = r.classes_evaluated == 0 ? 0.0 : sum / static_cast<double>(r.classes_evaluated);
    return r;
}

double recall_from_matches(const ClassMatches& cm) {
    double sum = 0.0;
    std::size_t classes = 0;
    for (std::size_t c = 0; c < ClassId::kNumClasses; ++c) {
        if (cm.npos[c] == 0) continue;
        const auto tp = static_cast<std::size_t>(std::count_if(
            cm.dets[c].begin(), cm.dets[c].end(), [](const ScoredMatch& m) { return m.tp; }));
        sum += static_cast<double>(tp) / static_cast<double>(cm.npos[c]);
        ++classes;
    }
    return classes == 0 ? 0.0 : sum / static_cast<double>(classes);
}

std::string fixed(double v, int digits = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

}  // namespace

std::vector<ImagePair> pair_images(const AnnotationSet& gt, const DetectionSet& dets) {
    std::unordered_map<std::string, const ImageDetections*> by_file;
    for (const auto& d : dets.images) by_file.emplace(d.file, &d);
    std::vector<ImagePair> pairs;
    pairs.reserve(gt.images.size());
    std::set<std::string> only_gt;
    std::set<std::string> gt_files;
    for (const auto& g : gt.images) {
        gt_files.insert(g.file);
        auto it = by_file.find(g.file);
        if (it == by_file.end()) {
            only_gt.insert(g.file);
        } else {
            pairs.emplace_back(&g, it->second);
        }
    }
    std::set<std::string> only_det;
    for (const auto& d : dets.images) {
        if (!gt_files.contains(d.file)) only_det.insert(d.file);
    }
    if (!only_gt.empty() || !only_det.empty()) {
        std::string msg = "ground truth and detections cover different images;";
        auto list = [&](const char* label, const std::set<std::string>& files) {
            if (files.empty()) return;
            msg += std::string(" ") + label + ":";
            for (const auto& f : files) msg += " " + f;
            msg += ";";
        };
        list("only in ground truth", only_gt);
        list("only in detections", only_det);
        throw ValidationError(msg);
    }
    return pairs;
}

MatchResult match(const AnnotationSet& gt, const DetectionSet& dets, double iou_threshold,
                  bool class_sensitive) {
    MatchResult result;
    for (const auto& [g, d] : pair_images(gt, dets)) {
        auto m = match_image(*g, d->detections, ranked_indices(d->detections), iou_threshold, class_sensitive);
        for (const auto& link : m.det_to_gt) (link ? result.tp : result.fp) += 1;
        result.fn += static_cast<std::size_t>(std::count(m.gt_matched.begin(), m.gt_matched.end(), false));
        result.images.push_back(std::move(m));
    }
    return result;
}

ApResult average_precision(const AnnotationSet& gt, const DetectionSet& dets, double iou_threshold,
                           int max_dets) {
    return ap_from_matches(collect_class_matches(pair_images(gt, dets), iou_threshold, max_dets, true));
}

double recall_at(const AnnotationSet& gt, const DetectionSet& dets, double iou_threshold, int max_dets,
                 RecallCap cap) {
    return recall_from_matches(collect_class_matches(pair_images(gt, dets), iou_threshold, max_dets,
                                                     cap == RecallCap::per_image_per_class));
}

std::array<double, 10> coco_iou_thresholds() noexcept {
    std::array<double, 10> t{};
    for (int i = 0; i < 10; ++i) t[static_cast<std::size_t>(i)] = (50 + 5 * i) / 100.0;
    return t;
}

CocoReport coco_report(const AnnotationSet& gt, const DetectionSet& dets, const CocoOptions& options) {
    const auto pairs = pair_images(gt, dets);
    const bool per_class_cap = options.recall_cap == RecallCap::per_image_per_class;
    CocoReport r;
    std::array<double, ClassId::kNumClasses> class_sum{};
    double ar1 = 0.0;
    double ar10 = 0.0;
    const auto thresholds = coco_iou_thresholds();
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        const auto ap = ap_from_matches(collect_class_matches(pairs, thresholds[i], options.max_dets, true));
        r.ap_by_iou[i] = ap.mean;
        r.classes_evaluated = ap.classes_evaluated;
        for (std::size_t c = 0; c < ClassId::kNumClasses; ++c) {
            if (ap.per_class[c]) class_sum[c] += *ap.per_class[c];
        }
        ar1 += recall_from_matches(collect_class_matches(pairs, thresholds[i], 1, per_class_cap));
        ar10 += recall_from_matches(collect_class_matches(pairs, thresholds[i], 10, per_class_cap));
    }
    const double n = static_cast<double>(thresholds.size());
    r.mAP = std::accumulate(r.ap_by_iou.begin(), r.ap_by_iou.end(), 0.0) / n;
    r.AP_50 = r.ap_by_iou[0];
    r.AP_75 = r.ap_by_iou[5];
    r.AR_1 = ar1 / n;
    r.AR_10 = ar10 / n;
    std::array<std::size_t, ClassId::kNumClasses> npos{};
    for (const auto& [g, d] : pairs) {
        for (const auto& digit : g->digits) ++npos[static_cast<std::size_t>(digit.cls.value())];
    }
    for (std::size_t c = 0; c < ClassId::kNumClasses; ++c) {
        if (npos[c] > 0) r.ap_per_class[c] = class_sum[c] / n;
    }
    return r;
}

std::string CocoReport::to_json() const {
    nlohmann::ordered_json j;
    j["mAP"] = mAP;
    j["AP_50"] = AP_50;
    j["AP_75"] = AP_75;
    j["AR_1"] = AR_1;
    j["AR_10"] = AR_10;
    j["classes_evaluated"] = classes_evaluated;
    nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < ap_per_class.size(); ++c) {
        if (ap_per_class[c]) per_class[std::to_string(c)] = *ap_per_class[c];
    }
    j["ap_per_class"] = std::move(per_class);
    nlohmann::ordered_json by_iou = nlohmann::ordered_json::object();
    const auto t = coco_iou_thresholds();
    for (std::size_t i = 0; i < t.size(); ++i) by_iou[fixed(t[i], 2)] = ap_by_iou[i];
    j["ap_by_iou"] = std::move(by_iou);
    return j.dump(2) + "\n";
}

PrfReport PrfReport::from_counts(std::size_t tp, std::size_t fp, std::size_t fn) noexcept {
    PrfReport r;
    r.tp = tp;
    r.fp = fp;
    r.fn = fn;
    r.precision = (tp + fp) == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    r.recall = (tp + fn) == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    const double s = r.precision + r.recall;
    r.f1 = s == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / s;
    return r;
}

std::string PrfReport::to_json() const {
    nlohmann::ordered_json j;
    j["tp"] = tp;
    j["fp"] = fp;
    j["fn"] = fn;
    j["precision"] = precision;
    j["recall"] = recall;
    j["f1"] = f1;
    return j.dump(2) + "\n";
}

PrfReport prf(const AnnotationSet& gt, const DetectionSet& dets, double score_threshold, double iou_threshold,
              bool class_sensitive) {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (const auto& [g, d] : pair_images(gt, dets)) {
        const auto kept = filter_by_score(d->detections, score_threshold);
        const auto m = match_image(*g, kept, ranked_indices(kept), iou_threshold, class_sensitive);
        for (const auto& link : m.det_to_gt) (link ? tp : fp) += 1;
        fn += static_cast<std::size_t>(std::count(m.gt_matched.begin(), m.gt_matched.end(), false));
    }
    return PrfReport::from_counts(tp, fp, fn);
}

std::vector<double> default_sweep_grid() {
    std::vector<double> grid;
    for (int k = 1; k <= 19; ++k) grid.push_back(k / 20.0);
    return grid;
}

SweepResult sweep(const AnnotationSet& gt, const DetectionSet& dets, const std::vector<double>& grid,
                  double iou_threshold, bool class_sensitive) {
    if (grid.empty()) throw ValidationError("sweep grid must not be empty");
    std::vector<double> sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    SweepResult result;
    for (double t : sorted) {
        result.rows.push_back({t, prf(gt, dets, t, iou_threshold, class_sensitive)});
    }
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        if (result.rows[i].report.f1 > result.rows[result.best_index].report.f1) result.best_index = i;
    }
    return result;
}

std::string SweepResult::to_csv() const {
    std::ostringstream os;
    os << "threshold,precision,recall,f1\n";
    for (const auto& row : rows) {
        os << fixed(row.threshold, 2) << ',' << fixed(row.report.precision) << ','
           << fixed(row.report.recall) << ',' << fixed(row.report.f1) << '\n';
    }
    return os.str();
}

std::size_t ConfusionMatrix::total() const noexcept {
    std::size_t n = 0;
    for (const auto& row : counts) n += std::accumulate(row.begin(), row.end(), std::size_t{0});
    return n;
}

std::size_t ConfusionMatrix::trace() const noexcept {
    std::size_t n = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) n += counts[c][c];
    return n;
}

double ConfusionMatrix::accuracy() const noexcept {
    const auto t = total();
    return t == 0 ? 1.0 : static_cast<double>(trace()) / static_cast<double>(t);
}

std::size_t ConfusionMatrix::row_sum(int true_class) const noexcept {
    const auto& row = counts[static_cast<std::size_t>(true_class)];
    return std::accumulate(row.begin(), row.end(), std::size_t{0});
}

std::string ConfusionMatrix::to_csv() const {
    std::ostringstream os;
    os << "true\\pred";
    for (int c = 0; c < ClassId::kNumClasses; ++c) os << ',' << c;
    os << '\n';
    for (std::size_t r = 0; r < counts.size(); ++r) {
        os << r;
        for (auto v : counts[r]) os << ',' << v;
        os << '\n';
    }
    return os.str();
}

ConfusionMatrix confusion(const AnnotationSet& gt, const DetectionSet& dets, double score_threshold,
                          double iou_threshold) {
    ConfusionMatrix cm;
    for (const auto& [g, d] : pair_images(gt, dets)) {
        const auto kept = filter_by_score(d->detections, score_threshold);
        const auto m = match_image(*g, kept, ranked_indices(kept), iou_threshold, false);
        for (std::size_t di = 0; di < kept.size(); ++di) {
            if (!m.det_to_gt[di]) continue;
            const auto truth = g->digits[*m.det_to_gt[di]].cls.value();
            ++cm.counts[static_cast<std::size_t>(truth)][static_cast<std::size_t>(kept[di].cls.value())];
        }
    }
    return cm;
}

}  // namespace sevseg
