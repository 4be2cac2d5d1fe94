#pragma once

#include <array>
#include <string>

#include "polhdr/image.hpp"

namespace polhdr {

/// Bayer site within the 4x4 superpixel, or the green average.
enum class Channel { R, G1, G2, B, Luma };

Channel channel_from_string(const std::string& name);
std::string channel_to_string(Channel c);

/// Frozen sensor layout. One constant shared by the simulator, demux and
/// remux so the pixel mapping cannot drift apart.
///
/// Each 4x4 superpixel is four 2x2 Bayer blocks, row-major:
///     R  G1
///     G2 B
/// and every 2x2 block carries the same polarizer grid, row-major:
///     90  45
///     135  0   (degrees)
/// so the polarizer pattern tiles with period 2 in both directions.
struct MosaicLayout {
    /// (row, col) of each Bayer block inside the superpixel, in block units.
    static constexpr std::array<std::array<int, 2>, 4> kBayerOffset = {{
        {0, 0},  // R
        {0, 1},  // G1
        {1, 0},  // G2
        {1, 1},  // B
    }};
    /// (row, col) of polarity i (theta_i = i*pi/4) inside a 2x2 block.
    static constexpr std::array<std::array<int, 2>, 4> kPolarizerOffset = {{
        {1, 1},  // theta1 = 0
        {0, 1},  // theta2 = pi/4
        {0, 0},  // theta3 = pi/2
        {1, 0},  // theta4 = 3pi/4
    }};

    /// Polarity index (0..3) of the sensor pixel at (y, x).
    static int polarity_at(int y, int x) {
        const int r = y & 1, c = x & 1;
        for (int i = 0; i < 4; ++i)
            if (kPolarizerOffset[std::size_t(i)][0] == r && kPolarizerOffset[std::size_t(i)][1] == c)
                return i;
        return -1;  // unreachable
    }
};

/// Raw full-resolution sensor frame with the stacked polarizer/Bayer grid.
/// Dimensions are multiples of 4.
class MosaicFrame {
  public:
    MosaicFrame() = default;
    explicit MosaicFrame(LdrImage image);

    const LdrImage& image() const { return image_; }
    int width() const { return image_.width(); }
    int height() const { return image_.height(); }
    int bit_depth() const { return image_.bit_depth(); }

  private:
    LdrImage image_;
};

/// Extracts the four per-polarity images of one color channel, each
/// (W/4)x(H/4) by direct subsampling (no interpolation). `Luma` averages
/// the two green sites.
PolarityStack demux(const MosaicFrame& frame, Channel channel);

/// Rebuilds a full frame from one stack replicated across all four Bayer
/// sites (monochrome content): demux(remux_mono(s), c) == s for every c.
MosaicFrame remux_mono(const PolarityStack& stack);

/// Rebuilds a full frame from per-channel stacks:
/// remux_rggb(demux(f,R), demux(f,G1), demux(f,G2), demux(f,B)) == f.
MosaicFrame remux_rggb(const PolarityStack& r, const PolarityStack& g1, const PolarityStack& g2,
                       const PolarityStack& b);

}  // namespace polhdr
