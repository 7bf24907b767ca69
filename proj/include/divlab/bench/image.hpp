#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace divlab::bench {

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // RGB, row-major, 3 bytes per pixel
};

// Binary PPM (P6), maxval 255 only. Header errors -> MalformedHeader,
// other maxvals -> UnsupportedMaxval, short payload -> TruncatedPixelData.
RgbImage decode_ppm(std::span<const std::uint8_t> bytes);

struct Hsv {
    double h = 0.0; // degrees in [0, 360)
    double s = 0.0;
    double v = 0.0;
};

// Hexcone model on channels already scaled to [0, 1].
Hsv rgb_to_hsv(double r, double g, double b);

struct TonalTriple {
    double saturation = 0.0;
    double brightness = 0.0;
    double contrast = 0.0; // population std of the luma plane, >= 0
};

// Channels are normalized to [0, 1] before any statistics; saturation and
// brightness are per-pixel HSV means, contrast is the population standard
// deviation of 0.299 R + 0.587 G + 0.114 B.
TonalTriple tonal_stats(const RgbImage& img);

} // namespace divlab::bench
