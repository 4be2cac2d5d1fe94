#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polhdr/error.hpp"
#include "polhdr/forward_model.hpp"
#include "polhdr/fusion.hpp"
#include "polhdr/mosaic.hpp"

using namespace polhdr;

namespace {

LdrImage constant_ldr(int w, int h, double v, int bits = 8) {
    return LdrImage(Image2D(w, h, v), bits);
}

ExposureEstimate estimate_from(double t1, double t2) {
    ExposureEstimate est;
    est.set_angles(t1, t2);
    return est;
}

}  // namespace

TEST_CASE("scale_image divides by the exposure") {
    LdrImage img = constant_ldr(2, 2, 100.0);
    Image2D out = scale_image(img, 0.5);
    CHECK(out(1, 1) == 200.0);
    out = scale_image(img, 1.0);
    CHECK(out(0, 0) == 100.0);
    CHECK_THROWS_AS(scale_image(img, 1e-9), Error);
    CHECK_THROWS_AS(scale_image(img, 1e-6), Error);  // floor itself is rejected
    CHECK_NOTHROW(scale_image(img, 1.000001e-6));
}

TEST_CASE("weight_mask uses inclusive code-domain bounds") {
    Image2D img(5, 1, {0.0, 5.0, 128.0, 250.0, 255.0});
    Image2D w = weight_mask(LdrImage(img, 8), ValidityThresholds(5.0, 250.0));
    CHECK(w.at_index(0) == 0.0);
    CHECK(w.at_index(1) == 1.0);  // x = p_min -> 1
    CHECK(w.at_index(2) == 1.0);
    CHECK(w.at_index(3) == 1.0);  // x = p_max -> 1
    CHECK(w.at_index(4) == 0.0);  // saturated
}

TEST_CASE("single- and two-contributor pixels match the weighted-sum formula") {
    // exposures: cos^2 of (0.3, 0.6) and complements
    ExposureEstimate est = estimate_from(0.3, 0.6);
    // codes chosen so only some polarities are well exposed
    PolarityStack stack({constant_ldr(1, 1, 200.0), constant_ldr(1, 1, 3.0), constant_ldr(1, 1, 2.0),
                         constant_ldr(1, 1, 1.0)});
    FuseResult r = fuse_hdr(stack, est, {});
    const double expect = (200.0 / est.exposure[0]) / (1.0 + 1e-6);
    CHECK(r.hdr.image(0, 0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(r.hdr.coverage[0] == 1);

    PolarityStack stack2({constant_ldr(1, 1, 100.0), constant_ldr(1, 1, 102.0),
                          constant_ldr(1, 1, 2.0), constant_ldr(1, 1, 1.0)});
    ExposureEstimate unit = estimate_from(1e-9, 1e-9);  // cos^2 ~ 1 for both pairs
    // use angles ~0 so exposures are ~1; then I' = codes
    FuseResult r2 = fuse_hdr(stack2, unit, {});
    CHECK(r2.hdr.image(0, 0) ==
          doctest::Approx((100.0 / unit.exposure[0] + 102.0 / unit.exposure[1]) / (2.0 + 1e-6))
              .epsilon(1e-9));
    CHECK(r2.hdr.image(0, 0) == doctest::Approx(101.0).epsilon(1e-4));
    CHECK(r2.hdr.coverage[0] == 2);
}

TEST_CASE("fuse_hdr equals the literal weighted-sum oracle on random stacks") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> code(0.0, 255.0);
    std::uniform_real_distribution<double> angle(10.0 * M_PI / 180.0, 80.0 * M_PI / 180.0);
    const ValidityThresholds thr;

    for (int trial = 0; trial < 10; ++trial) {
        const int n = 16;
        std::array<LdrImage, 4> imgs;
        for (int p = 0; p < 4; ++p) {
            Image2D img(n, n);
            for (std::size_t i = 0; i < img.size(); ++i) img.at_index(i) = code(rng);
            imgs[p] = LdrImage(std::move(img), 8);
        }
        PolarityStack stack(std::move(imgs));
        ExposureEstimate est = estimate_from(angle(rng), angle(rng));
        FuseResult r = fuse_hdr(stack, est, thr);

        // independent literal loop: H = sum(w * I/e) / (sum(w) + eps)
        for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
                double num = 0.0, den = 1e-6;
                for (int p = 0; p < 4; ++p) {
                    const double c = stack[p](y, x);
                    const double w = (c >= thr.p_min && c <= thr.p_max) ? 1.0 : 0.0;
                    num += w * (c / est.exposure[p]);
                    den += w;
                }
                if (den > 1e-6) {
                    const double h = num / den;
                    CHECK(std::fabs(r.hdr.image(y, x) - h) <= 1e-9 * std::max(1.0, std::fabs(h)));
                }
            }
        }
    }
}

TEST_CASE("fusion is invariant under structure-preserving polarity reordering") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> code(0.0, 255.0);
    const int n = 8;
    std::array<LdrImage, 4> imgs;
    for (int p = 0; p < 4; ++p) {
        Image2D img(n, n);
        for (std::size_t i = 0; i < img.size(); ++i) img.at_index(i) = code(rng);
        imgs[p] = LdrImage(std::move(img), 8);
    }
    const double t1 = 0.4, t2 = 1.0;
    PolarityStack stack(imgs);
    FuseResult base = fuse_hdr(stack, estimate_from(t1, t2), {});

    // swap the two pairs: polarities (2,4,1,3) with swapped angles
    PolarityStack swapped({imgs[1], imgs[0], imgs[3], imgs[2]});
    FuseResult sw = fuse_hdr(swapped, estimate_from(t2, t1), {});
    // swap within pairs: (3,4,1,2) with complemented angles
    PolarityStack comp({imgs[2], imgs[3], imgs[0], imgs[1]});
    FuseResult cp = fuse_hdr(comp, estimate_from(M_PI / 2 - t1, M_PI / 2 - t2), {});

    for (std::size_t i = 0; i < base.hdr.image.size(); ++i) {
        CHECK(sw.hdr.image.at_index(i) == doctest::Approx(base.hdr.image.at_index(i)).epsilon(1e-12));
        CHECK(cp.hdr.image.at_index(i) == doctest::Approx(base.hdr.image.at_index(i)).epsilon(1e-12));
    }
}

TEST_CASE("coverage counts the weight-1 contributors exactly") {
    PolarityStack stack({constant_ldr(1, 1, 100.0), constant_ldr(1, 1, 3.0),
                         constant_ldr(1, 1, 200.0), constant_ldr(1, 1, 255.0)});
    FuseResult r = fuse_hdr(stack, estimate_from(0.5, 0.7), {});
    CHECK(r.hdr.coverage[0] == 2);
}

TEST_CASE("zero-coverage fallbacks: highlight and shadow proxies") {
    ExposureEstimate est = estimate_from(0.3, 0.6);  // exposures .913, .681, .087, .319
    // all saturated -> scaled value of the LOWEST-exposure polarity (index 2)
    PolarityStack sat({constant_ldr(1, 1, 255.0), constant_ldr(1, 1, 255.0),
                       constant_ldr(1, 1, 251.0), constant_ldr(1, 1, 255.0)});
    FuseResult rs = fuse_hdr(sat, est, {});
    CHECK(rs.hdr.coverage[0] == 0);
    CHECK(rs.hdr.image(0, 0) == doctest::Approx(251.0 / est.exposure[2]));

    // all under-exposed -> scaled value of the HIGHEST-exposure polarity (index 0)
    PolarityStack dark({constant_ldr(1, 1, 4.0), constant_ldr(1, 1, 0.0), constant_ldr(1, 1, 1.0),
                        constant_ldr(1, 1, 2.0)});
    FuseResult rd = fuse_hdr(dark, est, {});
    CHECK(rd.hdr.coverage[0] == 0);
    CHECK(rd.hdr.image(0, 0) == doctest::Approx(4.0 / est.exposure[0]));

    // mixed under/over with no valid sample -> treated as highlight
    PolarityStack mixed({constant_ldr(1, 1, 255.0), constant_ldr(1, 1, 1.0), constant_ldr(1, 1, 2.0),
                         constant_ldr(1, 1, 0.0)});
    FuseResult rm = fuse_hdr(mixed, est, {});
    CHECK(rm.hdr.coverage[0] == 0);
    CHECK(rm.hdr.image(0, 0) == doctest::Approx(2.0 / est.exposure[2]));
}

TEST_CASE("near-zero exposures are dropped with a warning") {
    // t1 ~ pi/2 makes exposure[0] ~ 0 -> polarity 1 dropped... complement 3 is ~1
    ExposureEstimate est = estimate_from(M_PI / 2 - 1e-9, M_PI / 4);
    PolarityStack stack({constant_ldr(1, 1, 100.0), constant_ldr(1, 1, 100.0),
                         constant_ldr(1, 1, 100.0), constant_ldr(1, 1, 100.0)});
    FuseResult r = fuse_hdr(stack, est, {});
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.hdr.coverage[0] == 3);
}

TEST_CASE("fuse_bracket: times (1,2) with codes (c,2c) reconstruct c") {
    Bracket b;
    b.add(constant_ldr(2, 2, 60.0), 1.0);
    b.add(constant_ldr(2, 2, 120.0), 2.0);
    FuseResult r = fuse_bracket(b, {});
    CHECK(r.hdr.image(0, 0) == doctest::Approx(60.0).epsilon(1e-6));
    CHECK(r.hdr.coverage[0] == 2);
}

TEST_CASE("bracket validation") {
    Bracket b;
    b.add(constant_ldr(2, 2, 10.0), 1.0);
    CHECK_THROWS_AS(fuse_bracket(b, {}), Error);              // needs >= 2 shots
    CHECK_THROWS_AS(b.add(constant_ldr(2, 2, 10.0), 1.0), std::invalid_argument);  // strict order
    CHECK_THROWS_AS(b.add(constant_ldr(3, 2, 10.0), 2.0), std::invalid_argument);  // size mismatch
    CHECK_THROWS_AS(b.add(constant_ldr(2, 2, 10.0), -1.0), std::invalid_argument);
}

TEST_CASE("an 11-shot simulated bracket reconstructs the scene radiance") {
    // one polarity of a static scene captured at 11 exposure times
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> rad(0.05, 50.0);
    const int n = 24;
    Image2D radiance(n, n);
    for (std::size_t i = 0; i < radiance.size(); ++i) radiance.at_index(i) = rad(rng);

    Bracket bracket;
    for (int k = 0; k < 11; ++k) {
        const double t = std::pow(2.0, k - 2);  // 8 stops
        Image2D img(n, n);
        for (std::size_t i = 0; i < img.size(); ++i)
            img.at_index(i) = clip(std::round(radiance.at_index(i) * t), 255.0);
        bracket.add(LdrImage(std::move(img), 8), t);
    }
    FuseResult r = fuse_bracket(bracket, {});

    double sse = 0.0, peak = 0.0;
    std::int64_t count = 0;
    for (std::size_t i = 0; i < radiance.size(); ++i) {
        peak = std::max(peak, radiance.at_index(i));
        if (r.hdr.coverage[i] == 0) continue;
        const double d = r.hdr.image.at_index(i) - radiance.at_index(i);
        sse += d * d;
        ++count;
    }
    REQUIRE(count > 0);
    const double psnr_db = 10.0 * std::log10(peak * peak / (sse / double(count)));
    CHECK(psnr_db >= 40.0);
}

TEST_CASE("tonemap: constants map to constants, zeros stay zero") {
    HdrImage flat{Image2D(16, 16, 3.7), {}};
    LdrImage out = tonemap_reinhard(flat);
    const double v = out(0, 0);
    for (std::size_t i = 0; i < out.image().size(); ++i) CHECK(out.image().at_index(i) == v);

    HdrImage zeros{Image2D(8, 8, 0.0), {}};
    LdrImage z = tonemap_reinhard(zeros);
    for (std::size_t i = 0; i < z.image().size(); ++i) CHECK(z.image().at_index(i) == 0.0);
}

TEST_CASE("tonemap is monotone and bounded on a 1e6:1 range") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> expo(-3.0, 3.0);
    const int n = 32;
    Image2D img(n, n);
    for (std::size_t i = 0; i < img.size(); ++i) img.at_index(i) = std::pow(10.0, expo(rng));
    HdrImage hdr{img, {}};
    LdrImage out = tonemap_reinhard(hdr);
    for (std::size_t i = 0; i < img.size(); ++i) {
        CHECK(out.image().at_index(i) >= 0.0);
        CHECK(out.image().at_index(i) <= 255.0);
        for (std::size_t j = i + 1; j < std::min(img.size(), i + 8); ++j) {
            if (img.at_index(i) <= img.at_index(j))
                CHECK(out.image().at_index(i) <= out.image().at_index(j) + 1e-12);
            else
                CHECK(out.image().at_index(i) >= out.image().at_index(j) - 1e-12);
        }
    }
}
