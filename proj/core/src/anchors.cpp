#include "sevseg/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "sevseg/error.hpp"
#include "sevseg/parallel.hpp"

namespace sevseg {

namespace {

std::size_t cells_per_side(int side, int level) {
    const std::size_t stride = std::size_t{1} << level;
    return (static_cast<std::size_t>(side) + stride - 1) / stride;
}

}  // namespace

void AnchorConfig::validate() const {
    if (min_level < 0 || max_level < min_level || max_level > 16) {
        throw ValidationError("anchor levels must satisfy 0 <= min_level <= max_level <= 16");
    }
    if (input_side <= 0) throw ValidationError("anchor input side must be positive");
    if (!(anchor_scale > 0.0)) throw ValidationError("anchor scale must be positive");
    if (octave_scales.empty() || aspect_ratios.empty()) {
        throw ValidationError("anchor scales and ratios must be non-empty");
    }
    for (double s : octave_scales) {
        if (!(s > 0.0)) throw ValidationError("octave scales must be positive");
    }
    for (double r : aspect_ratios) {
        if (!(r > 0.0)) throw ValidationError("aspect ratios must be positive");
    }
    if (!std::is_sorted(aspect_ratios.begin(), aspect_ratios.end())) {
        throw ValidationError("aspect ratios must be sorted ascending");
    }
}

std::size_t expected_anchor_count(const AnchorConfig& config) {
    config.validate();
    std::size_t positions = 0;
    for (int level = config.min_level; level <= config.max_level; ++level) {
        const auto n = cells_per_side(config.input_side, level);
        positions += n * n;
    }
    return positions * config.octave_scales.size() * config.aspect_ratios.size();
}

AnchorGrid generate_anchors(const AnchorConfig& config) {
    config.validate();
    AnchorGrid grid;
    grid.input_side = config.input_side;
    const auto total = expected_anchor_count(config);
    grid.anchors.reserve(total);
    grid.index.reserve(total);
    for (int level = config.min_level; level <= config.max_level; ++level) {
        const double stride = std::ldexp(1.0, level);
        const auto n = cells_per_side(config.input_side, level);
        for (std::size_t row = 0; row < n; ++row) {
            const double cy = (static_cast<double>(row) + 0.5) * stride;
            for (std::size_t col = 0; col < n; ++col) {
                const double cx = (static_cast<double>(col) + 0.5) * stride;
                for (std::size_t s = 0; s < config.octave_scales.size(); ++s) {
                    const double base = config.anchor_scale * stride * config.octave_scales[s];
                    for (std::size_t r = 0; r < config.aspect_ratios.size(); ++r) {
                        const double root = std::sqrt(config.aspect_ratios[r]);
                        const double hw = 0.5 * base * root;
                        const double hh = 0.5 * base / root;
                        grid.anchors.push_back({cx - hw, cy - hh, cx + hw, cy + hh});
                        grid.index.push_back(
                            {level, static_cast<int>(s), static_cast<int>(r)});
                    }
                }
            }
        }
    }
    return grid;
}

double best_anchor_iou(const AnchorGrid& grid, const BoundingBox& box) {
    double best = 0.0;
    for (const auto& a : grid.anchors) {
        // Cheap rejection before the full IoU.
        if (a.xmax <= box.xmin || a.xmin >= box.xmax || a.ymax <= box.ymin || a.ymin >= box.ymax) {
            continue;
        }
        best = std::max(best, iou(a, box));
    }
    return best;
}

std::vector<std::size_t> CoverageReport::best_iou_histogram(int bins) const {
    std::vector<std::size_t> h(static_cast<std::size_t>(std::max(bins, 1)), 0);
    for (double v : best_ious) {
        auto k = static_cast<std::size_t>(std::floor(v * static_cast<double>(h.size())));
        ++h[std::min(k, h.size() - 1)];
    }
    return h;
}

CoverageReport coverage_report(const AnchorGrid& grid, const AnnotationSet& set, double iou_threshold,
                               unsigned jobs) {
    CoverageReport report;
    report.iou_threshold = iou_threshold;
    report.images.resize(set.images.size());
    std::vector<std::vector<double>> per_image(set.images.size());
    parallel_for(set.images.size(), jobs, [&](std::size_t i) {
        const auto& img = set.images[i];
        const auto t = letterbox_transform(img.width, img.height, InputSize{grid.input_side});
        ImageCoverage cov{img.file, img.digits.size(), 0};
        for (const auto& d : img.digits) {
            const double best = best_anchor_iou(grid, to_model_frame(d.box, t));
            per_image[i].push_back(best);
            if (best >= iou_threshold) ++cov.matched;
        }
        report.images[i] = std::move(cov);
    });
    for (std::size_t i = 0; i < set.images.size(); ++i) {
        report.boxes += report.images[i].boxes;
        report.matched += report.images[i].matched;
        report.best_ious.insert(report.best_ious.end(), per_image[i].begin(), per_image[i].end());
    }
    return report;
}

CoverageReport coverage_report_model_frame(const AnchorGrid& grid, const std::vector<BoundingBox>& boxes,
                                           double iou_threshold) {
    CoverageReport report;
    report.iou_threshold = iou_threshold;
    ImageCoverage cov{"", boxes.size(), 0};
    for (const auto& b : boxes) {
        const double best = best_anchor_iou(grid, b);
        report.best_ious.push_back(best);
        if (best >= iou_threshold) ++cov.matched;
    }
    report.boxes = cov.boxes;
    report.matched = cov.matched;
    report.images.push_back(std::move(cov));
    return report;
}

std::string coverage_csv(const CoverageReport& report, int bins) {
    std::ostringstream os;
    os << std::setprecision(6) << std::fixed;
    os << "file,boxes,matched,coverage\n";
    for (const auto& img : report.images) {
        os << img.file << ',' << img.boxes << ',' << img.matched << ',' << img.coverage() << '\n';
    }
    os << "ALL," << report.boxes << ',' << report.matched << ',' << report.coverage() << '\n';
    os << '\n' << "iou_bin_lo,iou_bin_hi,count\n";
    const auto h = report.best_iou_histogram(bins);
    for (std::size_t k = 0; k < h.size(); ++k) {
        os << static_cast<double>(k) / h.size() << ',' << static_cast<double>(k + 1) / h.size() << ','
           << h[k] << '\n';
    }
    return os.str();
}

}  // namespace sevseg
