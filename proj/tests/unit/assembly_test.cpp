#include <gtest/gtest.h>

#include "sevseg/assembly.hpp"

using namespace sevseg;

namespace {
Detection digit(double x, double y, int cls, double h = 20, double w = 10) {
    return {{x, y, x + w, y + h}, ClassId{cls}, Score{0.9}};
}
}  // namespace

TEST(Assembly, ThreeRowsInAnyInputOrder) {
    std::vector<Detection> d{digit(30, 60, 0), digit(12, 5, 2), digit(0, 5, 1),   digit(24, 5, 0),
                             digit(18, 61, 8), digit(0, 120, 7), digit(12, 119, 2)};
    const auto r = assemble(d);
    ASSERT_EQ(r.rows.size(), 3u);
    EXPECT_EQ(r.rows[0].digits, "120");
    EXPECT_EQ(r.rows[0].value, 120);
    EXPECT_EQ(r.rows[1].digits, "80");
    EXPECT_EQ(r.rows[2].digits, "72");
    EXPECT_EQ(r.digit_count(), 7u);
    EXPECT_EQ(r.to_json(),
              R"({"rows":[{"digits":"120","value":120},{"digits":"80","value":80},{"digits":"72","value":72}]})");
}

TEST(Assembly, OverlapRuleAndEmpty) {
    EXPECT_TRUE(assemble({}).empty());
    EXPECT_EQ(assemble({}).to_json(), R"({"rows":[]})");
    // Vertical overlap 10 of min height 20: exactly half, same row.
    auto same = assemble({digit(0, 0, 1), digit(20, 10, 2)});
    EXPECT_EQ(same.rows.size(), 1u);
    // Overlap 9: separate rows.
    auto split = assemble({digit(0, 0, 1), digit(20, 11, 2)});
    EXPECT_EQ(split.rows.size(), 2u);
}

TEST(Assembly, TransitiveRowsAndLeadingZeros) {
    // a-b and b-c overlap enough, a-c do not: still one row.
    const auto r = assemble({digit(0, 0, 0), digit(12, 8, 0), digit(24, 16, 7)});
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_EQ(r.rows[0].digits, "007");
    EXPECT_EQ(r.rows[0].value, 7);
    EXPECT_EQ(r.rows[0].boxes.size(), 3u);
}
