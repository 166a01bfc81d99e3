#pragma once

#include <compare>
#include <cstdint>
#include <ostream>

namespace sevseg {

/// Axis-aligned box in pixel coordinates, corner encoded.
/// Origin is the top-left image corner, x grows right, y grows down.
struct BoundingBox {
    double xmin{0.0};
    double ymin{0.0};
    double xmax{0.0};
    double ymax{0.0};

    [[nodiscard]] double width() const noexcept { return xmax - xmin; }
    [[nodiscard]] double height() const noexcept { return ymax - ymin; }
    [[nodiscard]] double area() const noexcept { return width() * height(); }
    [[nodiscard]] double center_x() const noexcept { return 0.5 * (xmin + xmax); }
    [[nodiscard]] double center_y() const noexcept { return 0.5 * (ymin + ymax); }

    /// xmin <= xmax, ymin <= ymax and every coordinate finite.
    [[nodiscard]] bool valid() const noexcept;

    friend auto operator<=>(const BoundingBox&, const BoundingBox&) = default;
};

/// Builds a box and throws ValidationError when the invariants do not hold.
BoundingBox make_box(double xmin, double ymin, double xmax, double ymax);

/// Digit class, 0..9.
class ClassId {
public:
    static constexpr int kNumClasses = 10;

    constexpr ClassId() = default;
    /// Throws ValidationError outside 0..9.
    explicit ClassId(int value);

    [[nodiscard]] constexpr int value() const noexcept { return value_; }

    friend auto operator<=>(const ClassId&, const ClassId&) = default;

private:
    int value_{0};
};

/// Classification confidence in [0, 1].
class Score {
public:
    constexpr Score() = default;
    /// Throws ValidationError outside [0, 1] or when not finite.
    explicit Score(double value);

    [[nodiscard]] constexpr double value() const noexcept { return value_; }

    friend auto operator<=>(const Score&, const Score&) = default;

private:
    double value_{0.0};
};

struct Detection {
    BoundingBox box;
    ClassId cls;
    Score score;

    friend bool operator==(const Detection&, const Detection&) = default;
};

/// Deterministic total order used wherever detections are ranked:
/// score descending, then xmin, ymin, xmax, ymax, class ascending.
[[nodiscard]] bool ranks_before(const Detection& a, const Detection& b) noexcept;

[[nodiscard]] double intersection_area(const BoundingBox& a, const BoundingBox& b) noexcept;

/// Intersection over union; 0 when the union is empty.
[[nodiscard]] double iou(const BoundingBox& a, const BoundingBox& b) noexcept;

/// width / height. Throws DegenerateBoxError when height is zero.
[[nodiscard]] double aspect_ratio(const BoundingBox& b);

/// Clamps every coordinate to [0,width] x [0,height].
[[nodiscard]] BoundingBox clip(const BoundingBox& b, double width, double height) noexcept;

/// Multiplies every coordinate by k.
[[nodiscard]] BoundingBox scale(const BoundingBox& b, double k) noexcept;

[[nodiscard]] BoundingBox translate(const BoundingBox& b, double dx, double dy) noexcept;

std::ostream& operator<<(std::ostream& os, const BoundingBox& b);
std::ostream& operator<<(std::ostream& os, const Detection& d);

}  // namespace sevseg
