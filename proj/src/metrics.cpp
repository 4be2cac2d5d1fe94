#include "polhdr/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "polhdr/error.hpp"

namespace polhdr {

namespace {

void check_pair(const Image2D& a, const Image2D& b, double peak, const PixelMask* mask) {
    if (!a.same_size(b)) throw Error(Stage::Eval, "metric inputs differ in size");
    if (!(peak > 0.0)) throw Error(Stage::Eval, "peak must be positive");
    if (mask && mask->size() != a.size()) throw Error(Stage::Eval, "mask size mismatch");
}

}  // namespace

double psnr(const Image2D& a, const Image2D& b, double peak, const PixelMask* mask) {
    check_pair(a, b, peak, mask);
    double sse = 0.0;
    std::int64_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (mask && !(*mask)[i]) continue;
        const double d = a.at_index(i) - b.at_index(i);
        sse += d * d;
        ++n;
    }
    if (n == 0) throw Error(Stage::Eval, "psnr: empty evaluation region");
    const double mse = sse / double(n);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

namespace {

constexpr int kWindow = 11;
constexpr int kRadius = kWindow / 2;

std::array<double, kWindow> gaussian_taps() {
    constexpr double sigma = 1.5;
    std::array<double, kWindow> taps{};
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        const double d = i - kRadius;
        taps[std::size_t(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += taps[std::size_t(i)];
    }
    for (auto& t : taps) t /= sum;
    return taps;
}

}  // namespace

double ssim(const Image2D& a, const Image2D& b, double peak, const PixelMask* mask) {
    check_pair(a, b, peak, mask);
    const int w = a.width(), h = a.height();
    if (w < kWindow || h < kWindow)
        throw Error(Stage::Eval, "ssim: images smaller than the 11x11 window");

    static const std::array<double, kWindow> taps = gaussian_taps();
    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);

    double total = 0.0;
    std::int64_t count = 0;
    for (int cy = kRadius; cy < h - kRadius; ++cy) {
        for (int cx = kRadius; cx < w - kRadius; ++cx) {
            double wsum = 0.0, mu_a = 0.0, mu_b = 0.0, aa = 0.0, bb = 0.0, ab = 0.0;
            for (int dy = -kRadius; dy <= kRadius; ++dy) {
                for (int dx = -kRadius; dx <= kRadius; ++dx) {
                    const int y = cy + dy, x = cx + dx;
                    if (mask && !(*mask)[std::size_t(y) * w + x]) continue;
                    const double wt = taps[std::size_t(dy + kRadius)] * taps[std::size_t(dx + kRadius)];
                    const double va = a(y, x), vb = b(y, x);
                    wsum += wt;
                    mu_a += wt * va;
                    mu_b += wt * vb;
                    aa += wt * va * va;
                    bb += wt * vb * vb;
                    ab += wt * va * vb;
                }
            }
            if (wsum <= 0.0) continue;  // fully masked window
            mu_a /= wsum;
            mu_b /= wsum;
            const double var_a = aa / wsum - mu_a * mu_a;
            const double var_b = bb / wsum - mu_b * mu_b;
            const double cov = ab / wsum - mu_a * mu_b;
            const double val = ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
                               ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
            total += val;
            ++count;
        }
    }
    if (count == 0) throw Error(Stage::Eval, "ssim: empty evaluation region");
    return total / double(count);
}

MetricReport compare(const Image2D& reference, const Image2D& test, double peak,
                     const PixelMask* mask) {
    MetricReport r;
    r.psnr_db = psnr(reference, test, peak, mask);
    r.ssim_value = ssim(reference, test, peak, mask);
    r.masked = mask != nullptr;
    if (mask) {
        for (auto m : *mask) r.evaluated_pixel_count += m ? 1 : 0;
    } else {
        r.evaluated_pixel_count = std::int64_t(reference.size());
    }
    return r;
}

}  // namespace polhdr
