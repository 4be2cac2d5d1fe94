#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace polhdr {

/// Clipping operator: clamps a value into [0, max_code]. Total function;
/// NaN collapses to 0.
inline double clip(double value, double max_code) {
    return std::fmin(std::fmax(value, 0.0), max_code);
}

/// Folds an arbitrary angle into [0, pi/2], preserving cos^2. This is the
/// canonical range of arctan(sqrt(.)) and the only quantity the pipeline
/// ever consumes (exposure = cos^2 theta).
inline double canonical_angle(double radians) {
    double a = std::fmod(std::fabs(radians), M_PI);
    if (a > M_PI / 2.0) a = M_PI - a;
    return a;
}

/// Single-channel 2-D array of linear intensities, row-major.
/// Values are finite and non-negative; scale is arbitrary but consistent.
class Image2D {
  public:
    Image2D() = default;
    Image2D(int width, int height, double fill = 0.0);
    Image2D(int width, int height, std::vector<double> data);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }

    double operator()(int y, int x) const { return data_[std::size_t(y) * width_ + x]; }
    double& operator()(int y, int x) { return data_[std::size_t(y) * width_ + x]; }
    double at_index(std::size_t i) const { return data_[i]; }
    double& at_index(std::size_t i) { return data_[i]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_size(const Image2D& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Quantization-range-limited image: every value lies in [0, max_code].
/// Values stay real-valued in memory; integer codes only appear after the
/// sensor stage quantizes or a file export rounds.
class LdrImage {
  public:
    LdrImage() = default;
    LdrImage(Image2D image, int bit_depth = 8);

    const Image2D& image() const { return image_; }
    Image2D& image() { return image_; }
    int bit_depth() const { return bit_depth_; }
    double max_code() const { return max_code_; }

    int width() const { return image_.width(); }
    int height() const { return image_.height(); }
    double operator()(int y, int x) const { return image_(y, x); }

  private:
    Image2D image_;
    int bit_depth_ = 8;
    double max_code_ = 255.0;
};

/// The four co-registered LDR images extracted from one snapshot, indexed
/// by sensor polarizer label: i -> nominal angle i*pi/4
/// (theta1=0, theta2=pi/4, theta3=pi/2, theta4=3pi/4).
class PolarityStack {
  public:
    static constexpr int kCount = 4;

    PolarityStack() = default;
    explicit PolarityStack(std::array<LdrImage, 4> images);

    /// Nominal sensor-frame angle of polarity i, radians.
    static double nominal_angle(int i) { return i * M_PI / 4.0; }

    const LdrImage& operator[](int i) const { return images_[std::size_t(i)]; }
    LdrImage& operator[](int i) { return images_[std::size_t(i)]; }

    int width() const { return images_[0].width(); }
    int height() const { return images_[0].height(); }
    int bit_depth() const { return images_[0].bit_depth(); }

  private:
    std::array<LdrImage, 4> images_;
};

/// Optical configuration: front polarizer angle phi (radians, relative to
/// the sensor's 0 degree axis), extinction ratio(s), peak transmission
/// fixed at 1. rho2 < 0 means "same as rho" (the paper's rho1=rho2
/// simplification).
struct PolarizerRig {
    double phi = 0.0;
    double rho = 0.0;
    double rho2 = -1.0;

    static constexpr double kTMax = 1.0;

    PolarizerRig() = default;
    PolarizerRig(double phi_, double rho_, double rho2_ = -1.0);

    double front_rho() const { return rho; }
    double sensor_rho() const { return rho2 < 0.0 ? rho : rho2; }
};

/// Per-pixel parameter that can be a scalar broadcast or a full map.
/// Consumers always read it as a per-pixel lookup.
class ParamMap {
  public:
    ParamMap(double scalar = 0.0) : scalar_(scalar), is_map_(false) {}
    ParamMap(Image2D map) : map_(std::move(map)), is_map_(true) {}

    bool is_map() const { return is_map_; }
    double operator()(int y, int x) const { return is_map_ ? map_(y, x) : scalar_; }
    const Image2D& map() const { return map_; }
    double scalar() const { return scalar_; }

  private:
    Image2D map_;
    double scalar_ = 0.0;
    bool is_map_ = false;
};

/// Scene description for the simulator: linear radiance I0 plus degree and
/// angle of linear polarization. aop is measured in the sensor frame
/// (aop = phi means aligned with the front polarizer).
struct SceneLight {
    Image2D radiance;
    ParamMap dolp{0.0};
    ParamMap aop{0.0};

    SceneLight() = default;
    SceneLight(Image2D radiance_, ParamMap dolp_ = ParamMap(0.0), ParamMap aop_ = ParamMap(0.0));
};

/// Histogram over [0, pi/2] used to realize the mode of continuous angle
/// estimates.
struct AngleHistogram {
    double bin_width = 0.0;
    std::vector<std::int64_t> counts;

    std::int64_t total() const {
        std::int64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }
};

/// Self-calibration output: per-polarity angle estimates and the exposures
/// cos^2(theta_hat) they imply, plus the diagnostics needed to audit the
/// aggregation.
struct ExposureEstimate {
    std::array<double, 4> theta_hat{};           // radians, in [0, pi/2]
    std::array<double, 4> exposure{};            // cos^2(theta_hat), exact
    std::array<std::int64_t, 4> valid_pixel_count{};
    std::array<bool, 2> pair_valid{true, true};  // pair 0: (I1,I3), pair 1: (I2,I4)
    std::array<AngleHistogram, 2> histogram{};   // aggregation histograms per pair

    void set_angles(double t1, double t2);
};

}  // namespace polhdr
