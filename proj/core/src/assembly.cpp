#include "sevseg/assembly.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "json.hpp"

namespace sevseg {

namespace {

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

bool same_row(const BoundingBox& a, const BoundingBox& b, double overlap) {
    const double inter = std::min(a.ymax, b.ymax) - std::max(a.ymin, b.ymin);
    const double smaller = std::min(a.height(), b.height());
    if (smaller <= 0.0) return false;
    return inter >= overlap * smaller;
}

bool left_of(const Detection& a, const Detection& b) {
    return std::tie(a.box.xmin, a.box.ymin, a.box.xmax, a.box.ymax, a.cls) <
           std::tie(b.box.xmin, b.box.ymin, b.box.xmax, b.box.ymax, b.cls);
}

}  // namespace

std::size_t Reading::digit_count() const noexcept {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.digits.size();
    return n;
}

std::string Reading::to_json() const {
    nlohmann::ordered_json doc;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["digits"] = r.digits;
        j["value"] = r.value;
        doc["rows"].push_back(std::move(j));
    }
    return doc.dump();
}

Reading assemble(const std::vector<Detection>& dets, double overlap) {
    // Canonical order first so the result never depends on input order.
    std::vector<Detection> sorted = dets;
    std::sort(sorted.begin(), sorted.end(), left_of);

    DisjointSet rows(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = i + 1; j < sorted.size(); ++j) {
            if (same_row(sorted[i].box, sorted[j].box, overlap)) rows.unite(i, j);
        }
    }

    std::vector<std::vector<Detection>> groups;
    std::vector<std::size_t> group_of(sorted.size(), sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto root = rows.find(i);
        if (group_of[root] == sorted.size()) {
            group_of[root] = groups.size();
            groups.emplace_back();
        }
        groups[group_of[root]].push_back(sorted[i]);
    }

    auto mean_y = [](const std::vector<Detection>& g) {
        double s = 0.0;
        for (const auto& d : g) s += d.box.center_y();
        return s / static_cast<double>(g.size());
    };
    std::stable_sort(groups.begin(), groups.end(),
                     [&](const auto& a, const auto& b) { return mean_y(a) < mean_y(b); });

    Reading reading;
    for (const auto& g : groups) {
        ReadingRow row;
        for (const auto& d : g) {  // already xmin ordered
            row.digits.push_back(static_cast<char>('0' + d.cls.value()));
            row.value = row.value * 10 + d.cls.value();
            row.boxes.push_back(d.box);
        }
        reading.rows.push_back(std::move(row));
    }
    return reading;
}

}  // namespace sevseg
