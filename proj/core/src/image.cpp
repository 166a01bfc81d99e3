#include "sevseg/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "sevseg/error.hpp"

namespace sevseg {

Image::Image(int width, int height, float fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw ValidationError("image dimensions must be positive");
    data_.assign(static_cast<std::size_t>(width) * height * kChannels, fill);
}

double Image::mean() const noexcept {
    if (data_.empty()) return 0.0;
    const double sum = std::accumulate(data_.begin(), data_.end(), 0.0);
    return sum / static_cast<double>(data_.size());
}

void quantize(Image& img) noexcept {
    for (float& v : img.pixels()) v = std::clamp(std::round(v), 0.0f, 255.0f);
}

namespace {

cv::Mat to_bgr8(const Image& img) {
    cv::Mat mat(img.height(), img.width(), CV_8UC3);
    for (int y = 0; y < img.height(); ++y) {
        auto* row = mat.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                const float v = std::clamp(std::round(img.at(x, y, c)), 0.0f, 255.0f);
                row[x][2 - c] = static_cast<std::uint8_t>(v);
            }
        }
    }
    return mat;
}

Image from_mat(const cv::Mat& mat) {
    Image img(mat.cols, mat.rows);
    if (mat.channels() == 1) {
        for (int y = 0; y < mat.rows; ++y) {
            const auto* row = mat.ptr<std::uint8_t>(y);
            for (int x = 0; x < mat.cols; ++x) {
                for (int c = 0; c < 3; ++c) img.at(x, y, c) = row[x];
            }
        }
        return img;
    }
    for (int y = 0; y < mat.rows; ++y) {
        const auto* row = mat.ptr<cv::Vec3b>(y);
        for (int x = 0; x < mat.cols; ++x) {
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = row[x][2 - c];
        }
    }
    return img;
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
    cv::Mat mat;
    try {
        mat = cv::imread(path.string(), cv::IMREAD_COLOR);
    } catch (const cv::Exception& e) {
        throw IoError("cannot decode " + path.string() + ": " + e.what());
    }
    if (mat.empty()) throw IoError("cannot read image " + path.string());
    return from_mat(mat);
}

void write_image(const Image& img, const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    bool ok = false;
    try {
        ok = cv::imwrite(path.string(), to_bgr8(img));
    } catch (const cv::Exception& e) {
        throw IoError("cannot write " + path.string() + ": " + e.what());
    }
    if (!ok) throw IoError("cannot write image " + path.string());
}

std::vector<std::uint8_t> encode_image(const Image& img, const char* ext, int jpeg_quality) {
    std::vector<std::uint8_t> buf;
    std::vector<int> params;
    if (std::string_view(ext) == ".jpg" || std::string_view(ext) == ".jpeg") {
        params = {cv::IMWRITE_JPEG_QUALITY, jpeg_quality};
    }
    bool ok = false;
    try {
        ok = cv::imencode(ext, to_bgr8(img), buf, params);
    } catch (const cv::Exception& e) {
        throw IoError(std::string("encode failed: ") + e.what());
    }
    if (!ok) throw IoError(std::string("encode failed for ") + ext);
    return buf;
}

Image decode_image(std::span<const std::uint8_t> bytes) {
    cv::Mat mat;
    try {
        const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
                          const_cast<std::uint8_t*>(bytes.data()));
        mat = cv::imdecode(raw, cv::IMREAD_COLOR);
    } catch (const cv::Exception& e) {
        throw IoError(std::string("decode failed: ") + e.what());
    }
    if (mat.empty()) throw IoError("decode failed");
    return from_mat(mat);
}

double psnr(const Image& a, const Image& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw ValidationError("psnr requires equal dimensions");
    }
    double sse = 0.0;
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double d = static_cast<double>(pa[i]) - pb[i];
        sse += d * d;
    }
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = sse / static_cast<double>(pa.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace sevseg
