#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sevseg/geometry.hpp"

namespace sevseg {

enum class Segment : int { A = 0, B, C, D, E, F, G };

inline constexpr std::array<Segment, 7> kAllSegments{Segment::A, Segment::B, Segment::C, Segment::D,
                                                     Segment::E, Segment::F, Segment::G};

/// Seven segment activation pattern, A in bit 6 down to G in bit 0.
class SegmentMask {
public:
    constexpr SegmentMask() = default;
    constexpr explicit SegmentMask(std::uint8_t bits) : bits_(bits & 0x7f) {}

    /// From letters, e.g. "ABCDEFG". Throws ValidationError on other characters.
    [[nodiscard]] static SegmentMask from_letters(std::string_view letters);

    [[nodiscard]] constexpr std::uint8_t bits() const noexcept { return bits_; }
    [[nodiscard]] constexpr bool test(Segment s) const noexcept {
        return (bits_ >> (6 - static_cast<int>(s))) & 1u;
    }
    constexpr void set(Segment s, bool on = true) noexcept {
        const auto bit = static_cast<std::uint8_t>(1u << (6 - static_cast<int>(s)));
        bits_ = on ? static_cast<std::uint8_t>(bits_ | bit) : static_cast<std::uint8_t>(bits_ & ~bit);
    }
    [[nodiscard]] std::string letters() const;

    friend constexpr auto operator<=>(const SegmentMask&, const SegmentMask&) = default;

private:
    std::uint8_t bits_{0};
};

/// Digit -> mask. The canonical table lights F for 6 and A for 9.
using SegmentTable = std::array<SegmentMask, ClassId::kNumClasses>;

[[nodiscard]] const SegmentTable& canonical_segment_table() noexcept;

/// Digit whose table mask equals `mask`, if any.
[[nodiscard]] std::optional<ClassId> decode(SegmentMask mask,
                                            const SegmentTable& table = canonical_segment_table()) noexcept;

}  // namespace sevseg
