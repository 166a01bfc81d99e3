#include "sevseg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "sevseg/error.hpp"
#include "sevseg/rng.hpp"

namespace sevseg {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

namespace {

std::string image_ctx(std::size_t index, const std::string& file) {
    return "images[" + std::to_string(index) + "] (" + file + ")";
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError(where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
    return *it;
}

int require_int(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number_integer()) fail(where, std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

double require_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_string()) fail(where, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

BoundingBox parse_box(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 4) fail(where, "'box' must be [xmin,ymin,xmax,ymax]");
    const BoundingBox b{require_number(v[0], where), require_number(v[1], where),
                        require_number(v[2], where), require_number(v[3], where)};
    if (!b.valid()) {
        std::ostringstream os;
        os << "invalid box " << b << " (requires xmin<=xmax, ymin<=ymax, finite)";
        fail(where, os.str());
    }
    return b;
}

ClassId parse_class(const json& obj, const std::string& where) {
    const int c = require_int(obj, "class", where);
    if (c < 0 || c >= ClassId::kNumClasses) {
        fail(where, "class " + std::to_string(c) + " outside 0..9");
    }
    return ClassId{c};
}

json parse_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
}

int parse_version(const json& doc) {
    const int v = require_int(doc, "schema_version", "document");
    if (v != kSchemaVersion) {
        fail("document", "unsupported schema_version " + std::to_string(v));
    }
    return v;
}

ordered_json box_json(const BoundingBox& b) {
    return ordered_json::array({b.xmin, b.ymin, b.xmax, b.ymax});
}

void check_dims(int width, int height, const std::string& where) {
    if (width <= 0 || height <= 0) fail(where, "width and height must be positive");
}

}  // namespace

std::size_t AnnotationSet::digit_count() const noexcept {
    std::size_t n = 0;
    for (const auto& img : images) n += img.digits.size();
    return n;
}

void validate(const AnnotationSet& set) {
    if (set.schema_version != kSchemaVersion) {
        fail("document", "unsupported schema_version " + std::to_string(set.schema_version));
    }
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < set.images.size(); ++i) {
        const auto& img = set.images[i];
        const auto where = image_ctx(i, img.file);
        if (img.file.empty()) fail(where, "empty file name");
        if (!seen.insert(img.file).second) fail(where, "duplicate file name");
        check_dims(img.width, img.height, where);
        for (std::size_t d = 0; d < img.digits.size(); ++d) {
            const auto& b = img.digits[d].box;
            const auto dw = where + ": digits[" + std::to_string(d) + "]";
            if (!b.valid()) fail(dw, "invalid box");
            if (!(b.area() > 0.0)) fail(dw, "box must have positive area");
            if (b.xmin < 0.0 || b.ymin < 0.0 || b.xmax > img.width || b.ymax > img.height) {
                std::ostringstream os;
                os << "box " << b << " outside image bounds " << img.width << 'x' << img.height;
                fail(dw, os.str());
            }
        }
    }
}

void validate(const DetectionSet& set) {
    if (set.schema_version != kSchemaVersion) {
        fail("document", "unsupported schema_version " + std::to_string(set.schema_version));
    }
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < set.images.size(); ++i) {
        const auto& img = set.images[i];
        const auto where = image_ctx(i, img.file);
        if (img.file.empty()) fail(where, "empty file name");
        if (!seen.insert(img.file).second) fail(where, "duplicate file name");
        check_dims(img.width, img.height, where);
        for (std::size_t d = 0; d < img.detections.size(); ++d) {
            if (!img.detections[d].box.valid()) {
                fail(where + ": detections[" + std::to_string(d) + "]", "invalid box");
            }
        }
    }
}

AnnotationSet parse_annotations(std::string_view json_text) {
    const json doc = parse_document(json_text);
    AnnotationSet set;
    set.schema_version = parse_version(doc);
    const json& images = require(doc, "images", "document");
    if (!images.is_array()) fail("document", "'images' must be an array");
    set.images.reserve(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        const json& j = images[i];
        std::string where = "images[" + std::to_string(i) + "]";
        AnnotatedImage img;
        img.file = require_string(j, "file", where);
        where = image_ctx(i, img.file);
        img.width = require_int(j, "width", where);
        img.height = require_int(j, "height", where);
        img.device = require_string(j, "device", where);
        const json& digits = require(j, "digits", where);
        if (!digits.is_array()) fail(where, "'digits' must be an array");
        for (std::size_t d = 0; d < digits.size(); ++d) {
            const auto dw = where + ": digits[" + std::to_string(d) + "]";
            GroundTruthDigit g;
            g.cls = parse_class(digits[d], dw);
            g.box = parse_box(require(digits[d], "box", dw), dw);
            img.digits.push_back(g);
        }
        set.images.push_back(std::move(img));
    }
    validate(set);
    return set;
}

std::string to_json(const AnnotationSet& set) {
    ordered_json doc;
    doc["schema_version"] = set.schema_version;
    ordered_json images = ordered_json::array();
    for (const auto& img : set.images) {
        ordered_json j;
        j["file"] = img.file;
        j["width"] = img.width;
        j["height"] = img.height;
        j["device"] = img.device;
        ordered_json digits = ordered_json::array();
        for (const auto& d : img.digits) {
            ordered_json dj;
            dj["class"] = d.cls.value();
            dj["box"] = box_json(d.box);
            digits.push_back(std::move(dj));
        }
        j["digits"] = std::move(digits);
        images.push_back(std::move(j));
    }
    doc["images"] = std::move(images);
    return doc.dump(2) + "\n";
}

DetectionSet parse_detections(std::string_view json_text) {
    const json doc = parse_document(json_text);
    DetectionSet set;
    set.schema_version = parse_version(doc);
    const json& images = require(doc, "images", "document");
    if (!images.is_array()) fail("document", "'images' must be an array");
    for (std::size_t i = 0; i < images.size(); ++i) {
        const json& j = images[i];
        std::string where = "images[" + std::to_string(i) + "]";
        ImageDetections img;
        img.file = require_string(j, "file", where);
        where = image_ctx(i, img.file);
        img.width = require_int(j, "width", where);
        img.height = require_int(j, "height", where);
        const json& dets = require(j, "detections", where);
        if (!dets.is_array()) fail(where, "'detections' must be an array");
        for (std::size_t d = 0; d < dets.size(); ++d) {
            const auto dw = where + ": detections[" + std::to_string(d) + "]";
            const double s = require_number(require(dets[d], "score", dw), dw);
            if (!(s >= 0.0 && s <= 1.0)) fail(dw, "score outside [0,1]");
            img.detections.push_back(
                Detection{parse_box(require(dets[d], "box", dw), dw), parse_class(dets[d], dw), Score{s}});
        }
        set.images.push_back(std::move(img));
    }
    if (auto it = doc.find("bridge_meta"); it != doc.end()) {
        const json& meta = *it;
        const json& nms = require(meta, "embedded_nms", "bridge_meta");
        if (!nms.is_boolean()) fail("bridge_meta", "'embedded_nms' must be a boolean");
        set.bridge_meta = BridgeMeta{nms.get<bool>()};
    }
    validate(set);
    return set;
}

std::string to_json(const DetectionSet& set) {
    ordered_json doc;
    doc["schema_version"] = set.schema_version;
    ordered_json images = ordered_json::array();
    for (const auto& img : set.images) {
        ordered_json j;
        j["file"] = img.file;
        j["width"] = img.width;
        j["height"] = img.height;
        ordered_json dets = ordered_json::array();
        for (const auto& d : img.detections) {
            ordered_json dj;
            dj["class"] = d.cls.value();
            dj["score"] = d.score.value();
            dj["box"] = box_json(d.box);
            dets.push_back(std::move(dj));
        }
        j["detections"] = std::move(dets);
        images.push_back(std::move(j));
    }
    doc["images"] = std::move(images);
    if (set.bridge_meta) {
        doc["bridge_meta"] = ordered_json{{"embedded_nms", set.bridge_meta->embedded_nms}};
    }
    return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path.string());
    return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failure on " + path.string());
}

AnnotationSet load_annotations(const std::filesystem::path& path) {
    try {
        return parse_annotations(read_text_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void save_annotations(const AnnotationSet& set, const std::filesystem::path& path) {
    validate(set);
    write_text_file(path, to_json(set));
}

DetectionSet load_detections(const std::filesystem::path& path) {
    try {
        return parse_detections(read_text_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void save_detections(const DetectionSet& set, const std::filesystem::path& path) {
    validate(set);
    write_text_file(path, to_json(set));
}

namespace {

std::optional<int> digit_from_name(const std::string& name) {
    // Accept "7", "digit_7", "digit-7", "digit7".
    if (name.empty()) return std::nullopt;
    const char last = name.back();
    if (last < '0' || last > '9') return std::nullopt;
    const std::string prefix = name.substr(0, name.size() - 1);
    if (prefix.empty() || prefix == "digit_" || prefix == "digit-" || prefix == "digit") {
        return last - '0';
    }
    return std::nullopt;
}

}  // namespace

AnnotationSet parse_coco(std::string_view json_text, const CategoryMap& mapping) {
    const json doc = parse_document(json_text);
    const json& images = require(doc, "images", "document");
    if (!images.is_array()) fail("document", "'images' must be an array");

    CategoryMap categories = mapping;
    if (categories.empty()) {
        if (auto it = doc.find("categories"); it != doc.end() && it->is_array()) {
            // Categories that are not digits are reported only if an annotation uses them.
            for (const auto& c : *it) {
                if (auto d = digit_from_name(c.value("name", std::string{}))) {
                    categories[c.value("id", std::int64_t{-1})] = *d;
                }
            }
        }
    }

    AnnotationSet set;
    std::unordered_map<std::int64_t, std::size_t> by_id;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const json& j = images[i];
        const std::string where = "images[" + std::to_string(i) + "]";
        AnnotatedImage img;
        img.file = require_string(j, "file_name", where);
        img.width = require_int(j, "width", where);
        img.height = require_int(j, "height", where);
        if (auto it = j.find("device"); it != j.end() && it->is_string()) {
            img.device = it->get<std::string>();
        } else {
            const auto parent = std::filesystem::path(img.file).parent_path().string();
            img.device = parent.empty() ? "default" : parent;
        }
        const json& id = require(j, "id", where);
        if (!id.is_number_integer()) fail(where, "'id' must be an integer");
        by_id[id.get<std::int64_t>()] = set.images.size();
        set.images.push_back(std::move(img));
    }

    std::set<std::int64_t> unmapped;
    if (auto it = doc.find("annotations"); it != doc.end()) {
        if (!it->is_array()) fail("document", "'annotations' must be an array");
        for (std::size_t a = 0; a < it->size(); ++a) {
            const json& ann = (*it)[a];
            const std::string where = "annotations[" + std::to_string(a) + "]";
            const json& image_id = require(ann, "image_id", where);
            const json& cat = require(ann, "category_id", where);
            if (!image_id.is_number_integer() || !cat.is_number_integer()) {
                fail(where, "'image_id' and 'category_id' must be integers");
            }
            const auto img_it = by_id.find(image_id.get<std::int64_t>());
            if (img_it == by_id.end()) fail(where, "unknown image_id");
            const auto cat_it = categories.find(cat.get<std::int64_t>());
            if (cat_it == categories.end() || cat_it->second < 0 ||
                cat_it->second >= ClassId::kNumClasses) {
                unmapped.insert(cat.get<std::int64_t>());
                continue;
            }
            const json& bbox = require(ann, "bbox", where);
            if (!bbox.is_array() || bbox.size() != 4) fail(where, "'bbox' must be [x,y,width,height]");
            const double x = require_number(bbox[0], where);
            const double y = require_number(bbox[1], where);
            const double w = require_number(bbox[2], where);
            const double h = require_number(bbox[3], where);
            set.images[img_it->second].digits.push_back(
                GroundTruthDigit{BoundingBox{x, y, x + w, y + h}, ClassId{cat_it->second}});
        }
    }
    if (!unmapped.empty()) {
        std::string list;
        for (auto c : unmapped) list += (list.empty() ? "" : ", ") + std::to_string(c);
        throw ValidationError("unmappable COCO category id(s): " + list);
    }
    validate(set);
    return set;
}

AnnotationSet import_coco(const std::filesystem::path& path, const CategoryMap& mapping) {
    try {
        return parse_coco(read_text_file(path), mapping);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

DetectionSet detections_from_ground_truth(const AnnotationSet& set, double score) {
    DetectionSet out;
    out.images.reserve(set.images.size());
    for (const auto& img : set.images) {
        ImageDetections d{img.file, img.width, img.height, {}};
        for (const auto& g : img.digits) d.detections.push_back(Detection{g.box, g.cls, Score{score}});
        out.images.push_back(std::move(d));
    }
    return out;
}

SplitResult split(const AnnotationSet& set, double train_frac, std::uint64_t seed) {
    if (set.images.empty()) throw ValidationError("cannot split an empty annotation set");
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
        throw ValidationError("train fraction must lie strictly between 0 and 1");
    }

    std::vector<std::string> device_order;
    std::unordered_map<std::string, std::vector<std::size_t>> by_device;
    for (std::size_t i = 0; i < set.images.size(); ++i) {
        auto [it, inserted] = by_device.try_emplace(set.images[i].device);
        if (inserted) device_order.push_back(set.images[i].device);
        it->second.push_back(i);
    }

    std::vector<bool> in_train(set.images.size(), false);
    for (const auto& device : device_order) {
        auto members = by_device[device];
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            return set.images[a].file < set.images[b].file;
        });
        Rng rng(hash_seed(seed, device));
        rng.shuffle(members);
        const auto n_train = static_cast<std::size_t>(
            std::floor(static_cast<double>(members.size()) * train_frac + 0.5));
        for (std::size_t k = 0; k < n_train && k < members.size(); ++k) in_train[members[k]] = true;
    }

    SplitResult result;
    result.seed = seed;
    result.train.schema_version = set.schema_version;
    result.test.schema_version = set.schema_version;
    for (std::size_t i = 0; i < set.images.size(); ++i) {
        (in_train[i] ? result.train : result.test).images.push_back(set.images[i]);
    }
    return result;
}

ClassHistogram class_histogram(const AnnotationSet& set) {
    ClassHistogram h{};
    for (const auto& img : set.images) {
        for (const auto& d : img.digits) ++h[static_cast<std::size_t>(d.cls.value())];
    }
    return h;
}

std::size_t AspectHistogram::total() const noexcept {
    std::size_t n = 0;
    for (const auto& [bin, count] : counts) n += count;
    return n;
}

AspectHistogram aspect_histogram(const AnnotationSet& set, double bin_width) {
    if (!(bin_width > 0.0)) throw ValidationError("bin width must be positive");
    AspectHistogram h;
    h.bin_width = bin_width;
    for (const auto& img : set.images) {
        for (const auto& d : img.digits) {
            const double r = aspect_ratio(d.box);
            const auto bin = static_cast<long>(std::floor(r / bin_width + 1e-9));
            ++h.counts[bin];
        }
    }
    return h;
}

}  // namespace sevseg
