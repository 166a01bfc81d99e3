#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sevseg {

/// Interleaved RGB image with real-valued intensities (nominally [0,255]).
class Image {
public:
    static constexpr int kChannels = 3;

    Image() = default;
    /// Throws ValidationError unless width, height > 0.
    Image(int width, int height, float fill = 0.0f);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] int channels() const noexcept { return kChannels; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    [[nodiscard]] float& at(int x, int y, int c) noexcept {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
    }
    [[nodiscard]] float at(int x, int y, int c) const noexcept {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * kChannels + c];
    }

    [[nodiscard]] std::span<float> pixels() noexcept { return data_; }
    [[nodiscard]] std::span<const float> pixels() const noexcept { return data_; }

    [[nodiscard]] double mean() const noexcept;

    friend bool operator==(const Image&, const Image&) = default;

private:
    int width_{0};
    int height_{0};
    std::vector<float> data_;
};

/// Rounds and clamps to [0,255] in place, matching 8-bit storage.
void quantize(Image& img) noexcept;

/// Reads an 8-bit PNG/JPEG (grayscale is promoted to RGB). Throws IoError.
[[nodiscard]] Image read_image(const std::filesystem::path& path);

/// Writes an 8-bit image; format follows the extension. Throws IoError.
void write_image(const Image& img, const std::filesystem::path& path);

/// In-memory codec helpers. `ext` is ".png" or ".jpg"; quality applies to JPEG.
[[nodiscard]] std::vector<std::uint8_t> encode_image(const Image& img, const char* ext,
                                                     int jpeg_quality = 95);
[[nodiscard]] Image decode_image(std::span<const std::uint8_t> bytes);

/// Peak signal-to-noise ratio over all channels, in dB (infinity when identical).
[[nodiscard]] double psnr(const Image& a, const Image& b);

}  // namespace sevseg
