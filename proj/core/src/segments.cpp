#include "sevseg/segments.hpp"

#include "sevseg/error.hpp"

namespace sevseg {

SegmentMask SegmentMask::from_letters(std::string_view letters) {
    SegmentMask m;
    for (char c : letters) {
        if (c < 'A' || c > 'G') {
            throw ValidationError(std::string("segment letter '") + c + "' outside A..G");
        }
        m.set(static_cast<Segment>(c - 'A'));
    }
    return m;
}

std::string SegmentMask::letters() const {
    std::string s;
    for (auto seg : kAllSegments) {
        if (test(seg)) s.push_back(static_cast<char>('A' + static_cast<int>(seg)));
    }
    return s;
}

const SegmentTable& canonical_segment_table() noexcept {
    static const SegmentTable table{
        SegmentMask::from_letters("ABCDEF"),   // 0
        SegmentMask::from_letters("BC"),       // 1
        SegmentMask::from_letters("ABDEG"),    // 2
        SegmentMask::from_letters("ABCDG"),    // 3
        SegmentMask::from_letters("BCFG"),     // 4
        SegmentMask::from_letters("ACDFG"),    // 5
        SegmentMask::from_letters("ACDEFG"),   // 6
        SegmentMask::from_letters("ABC"),      // 7
        SegmentMask::from_letters("ABCDEFG"),  // 8
        SegmentMask::from_letters("ABCDFG"),   // 9
    };
    return table;
}

std::optional<ClassId> decode(SegmentMask mask, const SegmentTable& table) noexcept {
    for (int d = 0; d < ClassId::kNumClasses; ++d) {
        if (table[static_cast<std::size_t>(d)] == mask) return ClassId{d};
    }
    return std::nullopt;
}

}  // namespace sevseg
