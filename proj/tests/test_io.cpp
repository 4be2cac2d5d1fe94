#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "polhdr/error.hpp"
#include "polhdr/io.hpp"

using namespace polhdr;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    auto dir = fs::temp_directory_path() / "polhdr_io_test";
    fs::create_directories(dir);
    return dir;
}

Image2D random_image(int w, int h, uint32_t seed, double lo = 0.0, double hi = 1000.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> dist{float(lo), float(hi)};
    Image2D img(w, h);
    for (std::size_t i = 0; i < img.size(); ++i) img.at_index(i) = double(dist(rng));
    return img;
}

}  // namespace

TEST_CASE("PFM round trip is bit-exact for float values") {
    auto path = (temp_dir() / "rt.pfm").string();
    Image2D img = random_image(33, 17, 1);  // float-valued doubles
    write_pfm(path, img);
    Image2D back = read_pfm(path);
    REQUIRE(back.width() == img.width());
    REQUIRE(back.height() == img.height());
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(back.at_index(i) == img.at_index(i));
}

TEST_CASE("PFM reader handles big-endian data via the scale sign") {
    auto path = (temp_dir() / "be.pfm").string();
    const float values[2] = {1.5f, 3.25f};
    std::ofstream f(path, std::ios::binary);
    f << "Pf\n2 1\n1.0\n";  // positive scale = big-endian
    for (float v : values) {
        uint32_t bits;
        std::memcpy(&bits, &v, 4);
        const uint8_t bytes[4] = {uint8_t(bits >> 24), uint8_t(bits >> 16), uint8_t(bits >> 8),
                                  uint8_t(bits)};
        f.write(reinterpret_cast<const char*>(bytes), 4);
    }
    f.close();
    Image2D img = read_pfm(path);
    CHECK(img(0, 0) == 1.5);
    CHECK(img(0, 1) == 3.25);
}

TEST_CASE("PFM rejects color files and bad headers") {
    auto dir = temp_dir();
    {
        std::ofstream f(dir / "color.pfm", std::ios::binary);
        f << "PF\n1 1\n-1.0\n";
        const char zeros[12] = {};
        f.write(zeros, 12);
    }
    CHECK_THROWS_AS(read_pfm((dir / "color.pfm").string()), Error);
    {
        std::ofstream f(dir / "junk.pfm", std::ios::binary);
        f << "JUNK\n";
    }
    CHECK_THROWS_AS(read_pfm((dir / "junk.pfm").string()), Error);
    CHECK_THROWS_AS(read_pfm((dir / "missing.pfm").string()), Error);
}

TEST_CASE("PGM 8-bit round trip") {
    auto path = (temp_dir() / "rt8.pgm").string();
    Image2D img = random_image(21, 9, 2, 0, 255);
    for (auto& v : img.data()) v = std::round(v);
    LdrImage ldr(img, 8);
    write_pgm(path, ldr);
    LdrImage back = read_pgm(path);
    CHECK(back.bit_depth() == 8);
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(back.image().at_index(i) == img.at_index(i));
}

TEST_CASE("PGM 16-bit round trip") {
    auto path = (temp_dir() / "rt16.pgm").string();
    Image2D img = random_image(13, 11, 3, 0, 65535);
    for (auto& v : img.data()) v = std::round(v);
    LdrImage ldr(img, 16);
    write_pgm(path, ldr);
    LdrImage back = read_pgm(path);
    CHECK(back.bit_depth() == 16);
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(back.image().at_index(i) == img.at_index(i));
}

TEST_CASE("PNG 8- and 16-bit round trips") {
    auto dir = temp_dir();
    for (int depth : {8, 16}) {
        Image2D img = random_image(19, 23, uint32_t(4 + depth), 0, depth == 8 ? 255 : 65535);
        for (auto& v : img.data()) v = std::round(v);
        auto path = (dir / ("rt" + std::to_string(depth) + ".png")).string();
        write_png(path, LdrImage(img, depth));
        LdrImage back = read_png(path);
        CHECK(back.bit_depth() == depth);
        for (std::size_t i = 0; i < img.size(); ++i)
            CHECK(back.image().at_index(i) == img.at_index(i));
    }
}

TEST_CASE("LDR writers round fractional codes to integers") {
    auto path = (temp_dir() / "frac.png").string();
    write_png(path, LdrImage(Image2D(1, 1, {100.6}), 8));
    CHECK(read_png(path).image()(0, 0) == 101.0);
}

TEST_CASE("read_ldr dispatches on extension") {
    auto dir = temp_dir();
    LdrImage ldr(Image2D(2, 2, 7.0), 8);
    write_ldr((dir / "a.png").string(), ldr);
    write_ldr((dir / "a.pgm").string(), ldr);
    CHECK(read_ldr((dir / "a.png").string()).image()(1, 1) == 7.0);
    CHECK(read_ldr((dir / "a.pgm").string()).image()(1, 1) == 7.0);
    CHECK_THROWS_AS(read_ldr((dir / "a.bmp").string()), Error);
}

TEST_CASE("hash_file is stable and content sensitive") {
    auto dir = temp_dir();
    {
        std::ofstream f(dir / "h1.bin", std::ios::binary);
        f << "abc";
    }
    {
        std::ofstream f(dir / "h2.bin", std::ios::binary);
        f << "abd";
    }
    CHECK(hash_file((dir / "h1.bin").string()) == hash_file((dir / "h1.bin").string()));
    CHECK(hash_file((dir / "h1.bin").string()) != hash_file((dir / "h2.bin").string()));
}
