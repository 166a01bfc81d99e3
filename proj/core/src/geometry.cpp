#include "sevseg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "sevseg/error.hpp"

namespace sevseg {

bool BoundingBox::valid() const noexcept {
    return std::isfinite(xmin) && std::isfinite(ymin) && std::isfinite(xmax) &&
           std::isfinite(ymax) && xmin <= xmax && ymin <= ymax;
}

BoundingBox make_box(double xmin, double ymin, double xmax, double ymax) {
    BoundingBox b{xmin, ymin, xmax, ymax};
    if (!b.valid()) {
        std::ostringstream os;
        os << "invalid box " << b;
        throw ValidationError(os.str());
    }
    return b;
}

ClassId::ClassId(int value) : value_(value) {
    if (value < 0 || value >= kNumClasses) {
        throw ValidationError("class id " + std::to_string(value) + " outside 0..9");
    }
}

Score::Score(double value) : value_(value) {
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
        std::ostringstream os;
        os << "score " << value << " outside [0,1]";
        throw ValidationError(os.str());
    }
}

bool ranks_before(const Detection& a, const Detection& b) noexcept {
    if (a.score.value() != b.score.value()) return a.score.value() > b.score.value();
    return std::tie(a.box.xmin, a.box.ymin, a.box.xmax, a.box.ymax) <
               std::tie(b.box.xmin, b.box.ymin, b.box.xmax, b.box.ymax) ||
           (std::tie(a.box.xmin, a.box.ymin, a.box.xmax, a.box.ymax) ==
                std::tie(b.box.xmin, b.box.ymin, b.box.xmax, b.box.ymax) &&
            a.cls.value() < b.cls.value());
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) noexcept {
    const double w = std::min(a.xmax, b.xmax) - std::max(a.xmin, b.xmin);
    const double h = std::min(a.ymax, b.ymax) - std::max(a.ymin, b.ymin);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

double iou(const BoundingBox& a, const BoundingBox& b) noexcept {
    const double inter = intersection_area(a, b);
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

double aspect_ratio(const BoundingBox& b) {
    if (!(b.height() > 0.0)) {
        std::ostringstream os;
        os << "degenerate box " << b << ": zero height";
        throw DegenerateBoxError(os.str());
    }
    return b.width() / b.height();
}

BoundingBox clip(const BoundingBox& b, double width, double height) noexcept {
    return {std::clamp(b.xmin, 0.0, width), std::clamp(b.ymin, 0.0, height),
            std::clamp(b.xmax, 0.0, width), std::clamp(b.ymax, 0.0, height)};
}

BoundingBox scale(const BoundingBox& b, double k) noexcept {
    return {b.xmin * k, b.ymin * k, b.xmax * k, b.ymax * k};
}

BoundingBox translate(const BoundingBox& b, double dx, double dy) noexcept {
    return {b.xmin + dx, b.ymin + dy, b.xmax + dx, b.ymax + dy};
}

std::ostream& operator<<(std::ostream& os, const BoundingBox& b) {
    return os << '(' << b.xmin << ',' << b.ymin << ',' << b.xmax << ',' << b.ymax << ')';
}

std::ostream& operator<<(std::ostream& os, const Detection& d) {
    return os << "{class " << d.cls.value() << ", score " << d.score.value() << ", box " << d.box
              << '}';
}

}  // namespace sevseg
