#include <gtest/gtest.h>

#include <set>

#include "sevseg/error.hpp"
#include "sevseg/segments.hpp"

using namespace sevseg;

TEST(Segments, CanonicalTable) {
    const auto& t = canonical_segment_table();
    const char* expected[] = {"ABCDEF", "BC", "ABDEG", "ABCDG", "BCFG", "ACDFG", "ACDEFG", "ABC", "ABCDEFG", "ABCDFG"};
    std::set<std::uint8_t> distinct;
    for (int d = 0; d < 10; ++d) {
        EXPECT_EQ(t[static_cast<std::size_t>(d)].letters(), expected[d]) << d;
        distinct.insert(t[static_cast<std::size_t>(d)].bits());
    }
    EXPECT_EQ(distinct.size(), 10u);
}

TEST(Segments, DecodeRoundTrip) {
    for (int d = 0; d < 10; ++d) {
        const auto cls = decode(canonical_segment_table()[static_cast<std::size_t>(d)]);
        ASSERT_TRUE(cls.has_value());
        EXPECT_EQ(cls->value(), d);
    }
    EXPECT_FALSE(decode(SegmentMask::from_letters("AG")).has_value());
    EXPECT_FALSE(decode(SegmentMask{}).has_value());
}

TEST(Segments, MaskBits) {
    SegmentMask m;
    m.set(Segment::A);
    EXPECT_EQ(m.bits(), 0x40);
    m.set(Segment::G);
    EXPECT_EQ(m.bits(), 0x41);
    m.set(Segment::A, false);
    EXPECT_EQ(m.bits(), 0x01);
    EXPECT_TRUE(m.test(Segment::G));
    EXPECT_EQ(SegmentMask::from_letters("ABCDEFG").bits(), 0x7f);
    EXPECT_THROW((void)SegmentMask::from_letters("AH"), ValidationError);
}
