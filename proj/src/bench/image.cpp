#include "divlab/bench/image.hpp"

#include <cmath>
#include <string>

#include "divlab/error.hpp"

namespace divlab::bench {

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
bool next_token(std::span<const std::uint8_t> bytes, std::size_t& pos, std::string& tok) {
    tok.clear();
    while (pos < bytes.size()) {
        char c = static_cast<char>(bytes[pos]);
        if (c == '#') {
            while (pos < bytes.size() && static_cast<char>(bytes[pos]) != '\n') ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    while (pos < bytes.size()) {
        char c = static_cast<char>(bytes[pos]);
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#') break;
        tok.push_back(c);
        ++pos;
    }
    return !tok.empty();
}

long parse_header_int(const std::string& tok) {
    if (tok.empty()) raise(ErrorKind::MalformedHeader, "ppm: missing header field");
    for (char c : tok)
        if (c < '0' || c > '9')
            raise(ErrorKind::MalformedHeader, "ppm: non-numeric header field '" + tok + "'");
    return std::stol(tok);
}

} // namespace

RgbImage decode_ppm(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    std::string tok;
    if (!next_token(bytes, pos, tok) || tok != "P6")
        raise(ErrorKind::MalformedHeader, "ppm: magic is not P6");
    if (!next_token(bytes, pos, tok)) raise(ErrorKind::MalformedHeader, "ppm: missing width");
    long w = parse_header_int(tok);
    if (!next_token(bytes, pos, tok)) raise(ErrorKind::MalformedHeader, "ppm: missing height");
    long h = parse_header_int(tok);
    if (!next_token(bytes, pos, tok)) raise(ErrorKind::MalformedHeader, "ppm: missing maxval");
    long maxval = parse_header_int(tok);
    if (w < 1 || h < 1) raise(ErrorKind::MalformedHeader, "ppm: non-positive dimensions");
    if (maxval != 255)
        raise(ErrorKind::UnsupportedMaxval, "ppm: maxval " + std::to_string(maxval));
    // Exactly one whitespace byte separates the header from the raster.
    if (pos >= bytes.size()) raise(ErrorKind::TruncatedPixelData, "ppm: no raster");
    char sep = static_cast<char>(bytes[pos]);
    if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n')
        raise(ErrorKind::MalformedHeader, "ppm: missing separator after maxval");
    ++pos;

    std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3;
    if (bytes.size() - pos < need)
        raise(ErrorKind::TruncatedPixelData,
              "ppm: expected " + std::to_string(need) + " raster bytes, have " +
                  std::to_string(bytes.size() - pos));
    RgbImage img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                      bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
    return img;
}

Hsv rgb_to_hsv(double r, double g, double b) {
    double v = std::max({r, g, b});
    double lo = std::min({r, g, b});
    double c = v - lo;
    Hsv out;
    out.v = v;
    out.s = (v > 0.0) ? c / v : 0.0;
    if (c > 0.0) {
        double hp;
        if (v == r)
            hp = std::fmod((g - b) / c, 6.0);
        else if (v == g)
            hp = (b - r) / c + 2.0;
        else
            hp = (r - g) / c + 4.0;
        out.h = 60.0 * hp;
        if (out.h < 0.0) out.h += 360.0;
    }
    return out;
}

TonalTriple tonal_stats(const RgbImage& img) {
    if (img.width < 1 || img.height < 1 || img.pixels.empty())
        raise(ErrorKind::EmptySet, "tonal_stats: empty image");
    std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    double sum_s = 0.0, sum_v = 0.0, sum_y = 0.0, sum_y2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = img.pixels[3 * i] / 255.0;
        double g = img.pixels[3 * i + 1] / 255.0;
        double b = img.pixels[3 * i + 2] / 255.0;
        Hsv hsv = rgb_to_hsv(r, g, b);
        sum_s += hsv.s;
        sum_v += hsv.v;
        double y = 0.299 * r + 0.587 * g + 0.114 * b;
        sum_y += y;
        sum_y2 += y * y;
    }
    double inv = 1.0 / static_cast<double>(n);
    TonalTriple t;
    t.saturation = sum_s * inv;
    t.brightness = sum_v * inv;
    double var = sum_y2 * inv - (sum_y * inv) * (sum_y * inv);
    t.contrast = std::sqrt(std::max(var, 0.0));
    return t;
}

} // namespace divlab::bench
