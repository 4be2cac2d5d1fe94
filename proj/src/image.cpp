#include "polhdr/image.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace polhdr {

namespace {

void check_values(const std::vector<double>& data) {
    for (double v : data) {
        if (!std::isfinite(v)) throw std::invalid_argument("Image2D: non-finite value");
        if (v < 0.0) throw std::invalid_argument("Image2D: negative value");
    }
}

}  // namespace

Image2D::Image2D(int width, int height, double fill)
    : width_(width), height_(height), data_(std::size_t(width) * height, fill) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("Image2D: non-positive dimensions");
    if (!std::isfinite(fill) || fill < 0.0) throw std::invalid_argument("Image2D: bad fill value");
}

Image2D::Image2D(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("Image2D: non-positive dimensions");
    if (data_.size() != std::size_t(width) * height)
        throw std::invalid_argument("Image2D: data length != width*height");
    check_values(data_);
}

LdrImage::LdrImage(Image2D image, int bit_depth) : image_(std::move(image)), bit_depth_(bit_depth) {
    if (bit_depth < 1 || bit_depth > 16) throw std::invalid_argument("LdrImage: bit depth out of range");
    max_code_ = double((1u << bit_depth) - 1u);
    for (double v : image_.data()) {
        if (v > max_code_)
            throw std::invalid_argument("LdrImage: value " + std::to_string(v) +
                                        " exceeds max code " + std::to_string(max_code_));
    }
}

PolarityStack::PolarityStack(std::array<LdrImage, 4> images) : images_(std::move(images)) {
    for (int i = 1; i < 4; ++i) {
        if (!images_[std::size_t(i)].image().same_size(images_[0].image()))
            throw std::invalid_argument("PolarityStack: mismatched image dimensions");
        if (images_[std::size_t(i)].bit_depth() != images_[0].bit_depth())
            throw std::invalid_argument("PolarityStack: mismatched bit depths");
    }
}

PolarizerRig::PolarizerRig(double phi_, double rho_, double rho2_) : phi(phi_), rho(rho_), rho2(rho2_) {
    if (!std::isfinite(phi)) throw std::invalid_argument("PolarizerRig: non-finite phi");
    if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("PolarizerRig: rho out of [0,1)");
    if (rho2 >= 0.0 && rho2 >= 1.0) throw std::invalid_argument("PolarizerRig: rho2 out of [0,1)");
}

SceneLight::SceneLight(Image2D radiance_, ParamMap dolp_, ParamMap aop_)
    : radiance(std::move(radiance_)), dolp(std::move(dolp_)), aop(std::move(aop_)) {
    auto check_param = [&](const ParamMap& p, bool bounded01, const char* name) {
        if (p.is_map()) {
            if (!p.map().same_size(radiance))
                throw std::invalid_argument(std::string("SceneLight: ") + name + " map size mismatch");
            for (double v : p.map().data())
                if (bounded01 && (v < 0.0 || v > 1.0))
                    throw std::invalid_argument(std::string("SceneLight: ") + name + " out of [0,1]");
        } else if (bounded01 && (p.scalar() < 0.0 || p.scalar() > 1.0)) {
            throw std::invalid_argument(std::string("SceneLight: ") + name + " out of [0,1]");
        }
    };
    check_param(dolp, true, "dolp");
    check_param(aop, false, "aop");
}

void ExposureEstimate::set_angles(double t1, double t2) {
    theta_hat[0] = t1;
    theta_hat[1] = t2;
    theta_hat[2] = M_PI / 2.0 - t1;
    theta_hat[3] = M_PI / 2.0 - t2;
    for (int i = 0; i < 4; ++i) {
        double c = std::cos(theta_hat[std::size_t(i)]);
        exposure[std::size_t(i)] = c * c;
    }
}

}  // namespace polhdr
