#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sevseg/geometry.hpp"

namespace sevseg {

struct ReadingRow {
    std::string digits;
    std::int64_t value{0};
    std::vector<BoundingBox> boxes;
};

/// Display content, rows ordered top to bottom.
struct Reading {
    std::vector<ReadingRow> rows;

    [[nodiscard]] bool empty() const noexcept { return rows.empty(); }
    [[nodiscard]] std::size_t digit_count() const noexcept;
    /// {"rows":[{"digits":"120","value":120}, ...]}
    [[nodiscard]] std::string to_json() const;
};

/// Two boxes share a row when their vertical overlap is at least
/// `overlap` x the smaller height; rows are the transitive closure of that
/// relation. Rows sort by mean box centre y, digits by xmin.
[[nodiscard]] Reading assemble(const std::vector<Detection>& dets, double overlap = 0.5);

}  // namespace sevseg
