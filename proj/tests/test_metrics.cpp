#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polhdr/error.hpp"
#include "polhdr/metrics.hpp"

using namespace polhdr;

namespace {

Image2D random_image(int w, int h, uint32_t seed, double lo = 0.0, double hi = 255.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    Image2D img(w, h);
    for (std::size_t i = 0; i < img.size(); ++i) img.at_index(i) = dist(rng);
    return img;
}

}  // namespace

TEST_CASE("psnr of identical images is the infinity sentinel") {
    Image2D a = random_image(16, 16, 1);
    CHECK(std::isinf(psnr(a, a, 255.0)));
}

TEST_CASE("uniform unit error at peak 255 gives 20 log10(255)") {
    Image2D a = random_image(16, 16, 2, 1.0, 200.0);
    Image2D b = a;
    for (auto& v : b.data()) v += 1.0;
    CHECK(psnr(a, b, 255.0) == doctest::Approx(20.0 * std::log10(255.0)).epsilon(1e-12));
    CHECK(psnr(a, b, 255.0) == doctest::Approx(48.1308).epsilon(1e-4));
}

TEST_CASE("psnr decreases as uniform error grows") {
    Image2D a = random_image(16, 16, 3, 10.0, 100.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double err : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        Image2D b = a;
        for (auto& v : b.data()) v += err;
        const double p = psnr(a, b, 255.0);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("psnr errors: size mismatch, empty mask, bad peak") {
    Image2D a = random_image(4, 4, 4);
    Image2D b = random_image(5, 4, 5);
    CHECK_THROWS_AS(psnr(a, b, 255.0), Error);
    PixelMask none(a.size(), 0);
    CHECK_THROWS_AS(psnr(a, a, 255.0, &none), Error);
    CHECK_THROWS_AS(psnr(a, a, 0.0), Error);
}

TEST_CASE("metrics ignore the content of masked pixels") {
    Image2D a = random_image(20, 20, 6);
    Image2D b = random_image(20, 20, 7);
    PixelMask mask(a.size(), 1);
    std::mt19937 rng(8);
    for (auto& m : mask) m = rng() % 4 ? 1 : 0;

    const double p0 = psnr(a, b, 255.0, &mask);
    const double s0 = ssim(a, b, 255.0, &mask);
    Image2D a2 = a, b2 = b;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask[i]) {
            a2.at_index(i) = 222.0;
            b2.at_index(i) = 3.0;
        }
    }
    CHECK(psnr(a2, b2, 255.0, &mask) == p0);
    CHECK(ssim(a2, b2, 255.0, &mask) == doctest::Approx(s0).epsilon(1e-15));
}

TEST_CASE("ssim of an image with itself is exactly 1") {
    Image2D a = random_image(32, 24, 9);
    CHECK(ssim(a, a, 255.0) == 1.0);
}

TEST_CASE("ssim of distinct constants matches the closed form") {
    const double va = 100.0, vb = 140.0;
    Image2D a(16, 16, va), b(16, 16, vb);
    const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    const double expect = (2.0 * va * vb + c1) / (va * va + vb * vb + c1);
    CHECK(ssim(a, b, 255.0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(ssim(a, b, 255.0) < 1.0);
}

TEST_CASE("ssim is symmetric and bounded") {
    for (uint32_t seed = 0; seed < 5; ++seed) {
        Image2D a = random_image(24, 16, 100 + seed);
        Image2D b = random_image(24, 16, 200 + seed);
        const double ab = ssim(a, b, 255.0);
        CHECK(ab == doctest::Approx(ssim(b, a, 255.0)).epsilon(1e-14));
        CHECK(ab >= -1.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("ssim rejects images smaller than the window") {
    Image2D a = random_image(10, 12, 10);
    CHECK_THROWS_AS(ssim(a, a, 255.0), Error);
}

TEST_CASE("compare fills the report") {
    Image2D a = random_image(16, 16, 11);
    MetricReport r = compare(a, a, 255.0);
    CHECK(std::isinf(r.psnr_db));
    CHECK(r.ssim_value == 1.0);
    CHECK(r.evaluated_pixel_count == 256);
    CHECK_FALSE(r.masked);
    CHECK_FALSE(r.ms_ssim.has_value());
    CHECK_FALSE(r.q_score.has_value());
}
