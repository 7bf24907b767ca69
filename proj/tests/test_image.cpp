#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <string>
#include <vector>

#include "divlab/bench/image.hpp"
#include "divlab/error.hpp"

using namespace divlab;
using namespace divlab::bench;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
    return std::vector<std::uint8_t>(s.begin(), s.end());
}

std::vector<std::uint8_t> ppm(const std::string& header, std::initializer_list<int> raster) {
    auto out = bytes_of(header);
    for (int v : raster) out.push_back(static_cast<std::uint8_t>(v));
    return out;
}

} // namespace

TEST_CASE("ppm decode 2x2 hand fixture") {
    // red, green / blue, white
    auto data = ppm("P6 2 2 255\n", {255, 0, 0, 0, 255, 0, 0, 0, 255, 255, 255, 255});
    auto img = decode_ppm(data);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    REQUIRE(img.pixels.size() == 12);
    CHECK(img.pixels[0] == 255);
    CHECK(img.pixels[4] == 255);
    CHECK(img.pixels[8] == 255);
    CHECK(img.pixels[9] == 255);
}

TEST_CASE("ppm header tolerates comments and mixed whitespace") {
    auto data = ppm("P6\n# a comment line\n2 1\n# another\n255\n", {1, 2, 3, 4, 5, 6});
    auto img = decode_ppm(data);
    CHECK(img.width == 2);
    CHECK(img.height == 1);
    CHECK(img.pixels[5] == 6);
}

TEST_CASE("ppm error taxonomy") {
    try {
        static_cast<void>(decode_ppm(ppm("P5 1 1 255\n", {0, 0, 0})));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedHeader);
    }
    try {
        static_cast<void>(decode_ppm(ppm("P6 1 1 65535\n", {0, 0, 0})));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnsupportedMaxval);
    }
    try {
        static_cast<void>(decode_ppm(ppm("P6 2 2 255\n", {1, 2, 3})));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TruncatedPixelData);
    }
    // non-numeric width
    CHECK_THROWS_AS(static_cast<void>(decode_ppm(ppm("P6 two 2 255\n", {}))), Error);
    // zero-sized image
    CHECK_THROWS_AS(static_cast<void>(decode_ppm(ppm("P6 0 2 255\n", {}))), Error);
    // empty input
    CHECK_THROWS_AS(static_cast<void>(decode_ppm(std::vector<std::uint8_t>{})), Error);
}

TEST_CASE("rgb to hsv fixtures") {
    auto red = rgb_to_hsv(1.0, 0.0, 0.0);
    CHECK(red.h == doctest::Approx(0.0));
    CHECK(red.s == doctest::Approx(1.0));
    CHECK(red.v == doctest::Approx(1.0));

    auto green = rgb_to_hsv(0.0, 1.0, 0.0);
    CHECK(green.h == doctest::Approx(120.0));
    auto blue = rgb_to_hsv(0.0, 0.0, 1.0);
    CHECK(blue.h == doctest::Approx(240.0));

    auto gray = rgb_to_hsv(0.5, 0.5, 0.5);
    CHECK(gray.s == doctest::Approx(0.0));
    CHECK(gray.v == doctest::Approx(0.5));
    CHECK(gray.h == doctest::Approx(0.0)); // hue is defined as 0 on the gray axis

    auto black = rgb_to_hsv(0.0, 0.0, 0.0);
    CHECK(black.s == doctest::Approx(0.0));
    CHECK(black.v == doctest::Approx(0.0));

    // cyan sits midway between green and blue
    auto cyan = rgb_to_hsv(0.0, 1.0, 1.0);
    CHECK(cyan.h == doctest::Approx(180.0));
}

TEST_CASE("tonal stats on a half-white half-black image") {
    RgbImage img;
    img.width = 2;
    img.height = 1;
    img.pixels = {255, 255, 255, 0, 0, 0};
    auto t = tonal_stats(img);
    // both pixels are on the gray axis: zero saturation
    CHECK(t.saturation == doctest::Approx(0.0).epsilon(1e-12));
    // brightness mean of 1 and 0
    CHECK(t.brightness == doctest::Approx(0.5).epsilon(1e-12));
    // luma plane {1, 0}: population std = 0.5
    CHECK(t.contrast == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("tonal stats luma weighting") {
    // a pure-green image has luma 0.587, so a green/black pair has
    // contrast 0.587/2 by the population rule
    RgbImage img;
    img.width = 1;
    img.height = 2;
    img.pixels = {0, 255, 0, 0, 0, 0};
    auto t = tonal_stats(img);
    CHECK(t.contrast == doctest::Approx(0.587 / 2.0).epsilon(1e-9));
    CHECK(t.brightness == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t.saturation == doctest::Approx(0.5).epsilon(1e-12)); // green has s=1, black s=0

    RgbImage empty;
    CHECK_THROWS_AS(static_cast<void>(tonal_stats(empty)), Error);
}
