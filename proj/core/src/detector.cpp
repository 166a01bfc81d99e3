#include "sevseg/detector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace sevseg {

std::size_t BinaryRaster::count() const noexcept {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

namespace {

struct OtsuResult {
    int threshold;
    double separability;
};

OtsuResult otsu(const std::array<std::size_t, 256>& hist, std::size_t total) {
    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i) sum_all += static_cast<double>(i) * hist[static_cast<std::size_t>(i)];
    const double n = static_cast<double>(total);
    const double mean_all = sum_all / n;
    double var_total = 0.0;
    for (int i = 0; i < 256; ++i) {
        var_total += (i - mean_all) * (i - mean_all) * hist[static_cast<std::size_t>(i)];
    }
    var_total /= n;

    double w0 = 0.0;
    double sum0 = 0.0;
    double best_between = -1.0;
    int best_t = 0;
    for (int t = 0; t < 255; ++t) {
        w0 += hist[static_cast<std::size_t>(t)];
        sum0 += static_cast<double>(t) * hist[static_cast<std::size_t>(t)];
        const double w1 = n - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double between = (w0 / n) * (w1 / n) * (m0 - m1) * (m0 - m1);
        if (between > best_between) {
            best_between = between;
            best_t = t;
        }
    }
    if (best_between < 0.0 || var_total <= 0.0) return {best_t, 0.0};
    return {best_t, best_between / var_total};
}

struct ProbeSampler {
    const BinaryRaster& raster;
    int x0, y0, x1, y1;  // pixel range of the candidate box, half-open
    double shear;
    double ybot;
    double dxmin, dxmax;  // deskewed horizontal extent
    int samples;

    [[nodiscard]] bool fg(double x, double y) const noexcept {
        const int px = static_cast<int>(std::floor(x));
        const int py = static_cast<int>(std::floor(y));
        if (px < x0 || px >= x1 || py < y0 || py >= y1) return false;
        return raster.at(px, py);
    }

    [[nodiscard]] double fraction(const ProbeRect& p) const noexcept {
        int on = 0;
        const double bw = dxmax - dxmin;
        const double bh = static_cast<double>(y1 - y0);
        for (int j = 0; j < samples; ++j) {
            const double v = p.v0 + (j + 0.5) / samples * (p.v1 - p.v0);
            const double y = y0 + v * bh;
            for (int i = 0; i < samples; ++i) {
                const double u = p.u0 + (i + 0.5) / samples * (p.u1 - p.u0);
                const double x = dxmin + u * bw + shear * (ybot - y);
                if (fg(x, y)) ++on;
            }
        }
        return static_cast<double>(on) / (samples * samples);
    }
};

}  // namespace

BinaryRaster binarize(const Image& img, const DetectorConfig& config) {
    const int w = img.width();
    const int h = img.height();
    BinaryRaster raster(w, h);
    if (w == 0 || h == 0) return raster;

    std::vector<std::uint8_t> luma(static_cast<std::size_t>(w) * h);
    std::array<std::size_t, 256> hist{};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double l = 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
            const auto v = static_cast<std::uint8_t>(std::clamp(std::lround(l), 0L, 255L));
            luma[static_cast<std::size_t>(y) * w + x] = v;
            ++hist[v];
        }
    }
    const auto [t, separability] = otsu(hist, luma.size());
    if (separability < config.min_separability) return raster;

    std::size_t border = 0;
    std::size_t bright_border = 0;
    auto visit_border = [&](int x, int y) {
        ++border;
        if (luma[static_cast<std::size_t>(y) * w + x] > t) ++bright_border;
    };
    for (int x = 0; x < w; ++x) {
        visit_border(x, 0);
        if (h > 1) visit_border(x, h - 1);
    }
    for (int y = 1; y + 1 < h; ++y) {
        visit_border(0, y);
        if (w > 1) visit_border(w - 1, y);
    }
    const bool background_bright = 2 * bright_border > border;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const bool bright = luma[static_cast<std::size_t>(y) * w + x] > t;
            raster.set(x, y, bright != background_bright);
        }
    }
    return raster;
}

std::vector<Component> connected_components(const BinaryRaster& raster) {
    const int w = raster.width();
    const int h = raster.height();
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * h, 0);
    std::vector<std::pair<int, int>> stack;
    std::vector<Component> out;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto idx = static_cast<std::size_t>(y) * w + x;
            if (seen[idx] || !raster.at(x, y)) continue;
            int minx = x, maxx = x, miny = y, maxy = y;
            std::size_t count = 0;
            seen[idx] = 1;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                ++count;
                minx = std::min(minx, cx);
                maxx = std::max(maxx, cx);
                miny = std::min(miny, cy);
                maxy = std::max(maxy, cy);
                constexpr int dx[4] = {1, -1, 0, 0};
                constexpr int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nx = cx + dx[k];
                    const int ny = cy + dy[k];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const auto nidx = static_cast<std::size_t>(ny) * w + nx;
                    if (seen[nidx] || !raster.at(nx, ny)) continue;
                    seen[nidx] = 1;
                    stack.push_back({nx, ny});
                }
            }
            out.push_back({BoundingBox{static_cast<double>(minx), static_cast<double>(miny),
                                       static_cast<double>(maxx + 1), static_cast<double>(maxy + 1)},
                           count});
        }
    }
    return out;
}

std::vector<BoundingBox> find_candidates(const BinaryRaster& raster, const DetectorConfig& config) {
    const double min_pixels =
        config.min_area_frac * static_cast<double>(raster.width()) * static_cast<double>(raster.height());
    std::vector<BoundingBox> out;
    for (const auto& c : connected_components(raster)) {
        if (static_cast<double>(c.pixels) < min_pixels) continue;
        const double ratio = c.box.width() / c.box.height();
        if (ratio < config.min_aspect || ratio > config.max_aspect) continue;
        out.push_back(c.box);
    }
    return out;
}

DigitCandidate probe_and_decode(const BinaryRaster& raster, const BoundingBox& box,
                                const DetectorConfig& config) {
    DigitCandidate best;
    best.box = box;
    const int x0 = std::max(0, static_cast<int>(std::floor(box.xmin)));
    const int y0 = std::max(0, static_cast<int>(std::floor(box.ymin)));
    const int x1 = std::min(raster.width(), static_cast<int>(std::ceil(box.xmax)));
    const int y1 = std::min(raster.height(), static_cast<int>(std::ceil(box.ymax)));
    if (x1 <= x0 || y1 <= y0) return best;

    std::vector<std::pair<double, double>> fg;  // pixel centres
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            if (raster.at(x, y)) fg.emplace_back(x + 0.5, y + 0.5);
        }
    }
    if (fg.empty()) return best;

    const double ybot = static_cast<double>(y1);
    const double height = static_cast<double>(y1 - y0);
    const int steps = config.slant_step_deg > 0
                          ? static_cast<int>(std::floor(config.max_slant_deg / config.slant_step_deg + 1e-9))
                          : 0;

    double best_decisiveness = -1.0;
    DigitCandidate fallback = best;
    double fallback_decisiveness = -1.0;
    // Visit 0, +1, -1, +2, -2, ... steps so the smallest slant wins ties.
    for (int k = 0; k <= 2 * steps; ++k) {
        const int signed_step = (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
        const double shear =
            std::tan(signed_step * config.slant_step_deg * std::numbers::pi / 180.0);
        double dxmin = std::numeric_limits<double>::infinity();
        double dxmax = -dxmin;
        for (const auto& [cx, cy] : fg) {
            const double xd = cx - shear * (ybot - cy);
            dxmin = std::min(dxmin, xd);
            dxmax = std::max(dxmax, xd);
        }
        dxmin -= 0.5;
        dxmax += 0.5;
        const ProbeSampler sampler{raster, x0, y0, x1, y1, shear, ybot, dxmin, dxmax,
                                   std::max(1, config.probe_samples)};

        SegmentMask mask;
        double decisiveness = 0.0;
        if ((dxmax - dxmin) / height < config.narrow_aspect) {
            const double upper = sampler.fraction(config.bar_probes[0]);
            const double lower = sampler.fraction(config.bar_probes[1]);
            mask.set(Segment::B, upper > config.probe_on);
            mask.set(Segment::C, lower > config.probe_on);
            decisiveness = (std::abs(upper - 0.5) + std::abs(lower - 0.5));  // mean of |f-0.5|*2
        } else {
            for (auto s : kAllSegments) {
                const double f = sampler.fraction(config.probes[static_cast<std::size_t>(s)]);
                mask.set(s, f > config.probe_on);
                decisiveness += std::abs(f - 0.5) * 2.0;
            }
            decisiveness /= 7.0;
        }

        const auto cls = decode(mask, config.table);
        if (cls && decisiveness > best_decisiveness) {
            best_decisiveness = decisiveness;
            best.mask = mask;
            best.cls = cls;
            best.score = std::clamp(decisiveness, 0.0, 1.0);
            best.shear = shear;
        }
        if (decisiveness > fallback_decisiveness) {
            fallback_decisiveness = decisiveness;
            fallback.mask = mask;
            fallback.shear = shear;
        }
    }
    if (!best.cls) {
        fallback.cls = std::nullopt;
        fallback.score = 0.0;
        return fallback;
    }
    return best;
}

ImageDetections detect(const Image& img, const DetectorConfig& config) {
    ImageDetections out;
    out.width = img.width();
    out.height = img.height();
    const BinaryRaster raster = binarize(img, config);
    for (const auto& box : find_candidates(raster, config)) {
        const auto c = probe_and_decode(raster, box, config);
        if (!c.cls) continue;
        out.detections.push_back(Detection{clip(c.box, img.width(), img.height()), *c.cls, Score{c.score}});
    }
    return out;
}

}  // namespace sevseg
