#include "polhdr/mosaic.hpp"

#include <stdexcept>

#include "polhdr/error.hpp"

namespace polhdr {

Channel channel_from_string(const std::string& name) {
    if (name == "R" || name == "r") return Channel::R;
    if (name == "G1" || name == "g1") return Channel::G1;
    if (name == "G2" || name == "g2") return Channel::G2;
    if (name == "B" || name == "b") return Channel::B;
    if (name == "luma") return Channel::Luma;
    throw std::invalid_argument("unknown channel '" + name + "' (want R|G1|G2|B|luma)");
}

std::string channel_to_string(Channel c) {
    switch (c) {
        case Channel::R: return "R";
        case Channel::G1: return "G1";
        case Channel::G2: return "G2";
        case Channel::B: return "B";
        case Channel::Luma: return "luma";
    }
    return "?";
}

MosaicFrame::MosaicFrame(LdrImage image) : image_(std::move(image)) {
    if (image_.width() % 4 != 0 || image_.height() % 4 != 0)
        throw Error(Stage::Demux, "mosaic dimensions must be divisible by 4 (got " +
                                      std::to_string(image_.width()) + "x" +
                                      std::to_string(image_.height()) + ")");
}

namespace {

// Source pixel of polarity `pol` for superpixel (sy, sx) at Bayer block (br, bc).
inline std::pair<int, int> source_pixel(int sy, int sx, int br, int bc, int pol) {
    const auto& off = MosaicLayout::kPolarizerOffset[std::size_t(pol)];
    return {4 * sy + 2 * br + off[0], 4 * sx + 2 * bc + off[1]};
}

PolarityStack demux_block(const MosaicFrame& frame, int br, int bc) {
    const int w = frame.width() / 4, h = frame.height() / 4;
    std::array<LdrImage, 4> out;
    for (int pol = 0; pol < 4; ++pol) {
        Image2D img(w, h);
        for (int sy = 0; sy < h; ++sy)
            for (int sx = 0; sx < w; ++sx) {
                auto [y, x] = source_pixel(sy, sx, br, bc, pol);
                img(sy, sx) = frame.image()(y, x);
            }
        out[std::size_t(pol)] = LdrImage(std::move(img), frame.bit_depth());
    }
    return PolarityStack(std::move(out));
}

}  // namespace

PolarityStack demux(const MosaicFrame& frame, Channel channel) {
    if (channel == Channel::Luma) {
        auto g1 = demux_block(frame, MosaicLayout::kBayerOffset[1][0], MosaicLayout::kBayerOffset[1][1]);
        auto g2 = demux_block(frame, MosaicLayout::kBayerOffset[2][0], MosaicLayout::kBayerOffset[2][1]);
        std::array<LdrImage, 4> out;
        for (int pol = 0; pol < 4; ++pol) {
            Image2D img(g1.width(), g1.height());
            for (int y = 0; y < g1.height(); ++y)
                for (int x = 0; x < g1.width(); ++x) img(y, x) = 0.5 * (g1[pol](y, x) + g2[pol](y, x));
            out[std::size_t(pol)] = LdrImage(std::move(img), frame.bit_depth());
        }
        return PolarityStack(std::move(out));
    }
    const auto& off = MosaicLayout::kBayerOffset[std::size_t(static_cast<int>(channel))];
    return demux_block(frame, off[0], off[1]);
}

namespace {

void place_block(Image2D& frame, const PolarityStack& stack, int br, int bc) {
    for (int pol = 0; pol < 4; ++pol)
        for (int sy = 0; sy < stack.height(); ++sy)
            for (int sx = 0; sx < stack.width(); ++sx) {
                auto [y, x] = source_pixel(sy, sx, br, bc, pol);
                frame(y, x) = stack[pol](sy, sx);
            }
}

}  // namespace

MosaicFrame remux_mono(const PolarityStack& stack) {
    Image2D frame(stack.width() * 4, stack.height() * 4);
    for (const auto& bayer : MosaicLayout::kBayerOffset) place_block(frame, stack, bayer[0], bayer[1]);
    return MosaicFrame(LdrImage(std::move(frame), stack.bit_depth()));
}

MosaicFrame remux_rggb(const PolarityStack& r, const PolarityStack& g1, const PolarityStack& g2,
                       const PolarityStack& b) {
    const PolarityStack* stacks[4] = {&r, &g1, &g2, &b};
    for (int i = 1; i < 4; ++i) {
        if (stacks[i]->width() != r.width() || stacks[i]->height() != r.height() ||
            stacks[i]->bit_depth() != r.bit_depth())
            throw Error(Stage::Demux, "remux: mismatched stack sizes across channels");
    }
    Image2D frame(r.width() * 4, r.height() * 4);
    for (int ch = 0; ch < 4; ++ch) {
        const auto& bayer = MosaicLayout::kBayerOffset[std::size_t(ch)];
        place_block(frame, *stacks[ch], bayer[0], bayer[1]);
    }
    return MosaicFrame(LdrImage(std::move(frame), r.bit_depth()));
}

}  // namespace polhdr
