#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "test_support.hpp"
#include "twophase/error.hpp"
#include "twophase/imgio.hpp"

using namespace twophase;
using twophase::test::TempDir;

namespace {

const std::filesystem::path kData = TWOPHASE_TEST_DATA_DIR;

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("PGM reading") {
  TempDir tmp("pgm");
  SUBCASE("binary 8-bit, maxval maps to 1") {
    write_bytes(tmp / "a.pgm", std::string("P5\n# comment\n2 1\n255\n") + '\x00' + '\xff');
    const LoadedImage img = load_image(tmp / "a.pgm");
    CHECK(img.source.format == ImageFormat::pgm);
    CHECK(img.source.bit_depth == 8);
    CHECK(img.pixels.width() == 2);
    CHECK(img.pixels[0] == 0.0);
    CHECK(img.pixels[1] == 1.0);
  }
  SUBCASE("ASCII with comments between tokens") {
    write_bytes(tmp / "b.pgm", "P2\n# made by hand\n3 2 # size\n10\n0 5 10\n# row two\n1 2 3\n");
    const ScalarField f = read_image(tmp / "b.pgm");
    CHECK(f.width() == 3);
    CHECK(f.height() == 2);
    CHECK(f(1, 0) == 0.5);
    CHECK(f(2, 0) == 1.0);
    CHECK(f(0, 1) == doctest::Approx(0.1));
  }
  SUBCASE("binary 16-bit is big-endian") {
    write_bytes(tmp / "c.pgm", std::string("P5 2 1 65535\n") + '\x80' + '\x00' + '\xff' + '\xff');
    const LoadedImage img = load_image(tmp / "c.pgm");
    CHECK(img.source.bit_depth == 16);
    CHECK(img.pixels[0] == doctest::Approx(32768.0 / 65535.0).epsilon(1e-15));
    CHECK(img.pixels[1] == 1.0);
  }
  SUBCASE("format comes from magic bytes, not the extension") {
    write_bytes(tmp / "actually_pgm.png", std::string("P5\n1 1\n255\n") + '\x80');
    const LoadedImage img = load_image(tmp / "actually_pgm.png");
    CHECK(img.source.format == ImageFormat::pgm);
    CHECK(img.pixels[0] == doctest::Approx(128.0 / 255.0));
  }
}

TEST_CASE("PNG reading") {
  SUBCASE("8-bit grayscale") {
    const LoadedImage img = load_image(kData / "gray8_2x2.png");
    CHECK(img.source.format == ImageFormat::png);
    CHECK(img.source.channels == 1);
    CHECK(img.pixels(1, 0) == 1.0);
    CHECK(img.pixels(0, 1) == doctest::Approx(128.0 / 255.0));
  }
  SUBCASE("16-bit grayscale") {
    const LoadedImage img = load_image(kData / "gray16_3x1.png");
    CHECK(img.source.bit_depth == 16);
    CHECK(img.pixels[0] == 0.0);
    CHECK(img.pixels[1] == doctest::Approx(32768.0 / 65535.0).epsilon(1e-15));
    CHECK(img.pixels[1] == doctest::Approx(0.50001).epsilon(1e-5));
    CHECK(img.pixels[2] == 1.0);
  }
  SUBCASE("RGB uses Rec. 601 luminance") {
    const LoadedImage img = load_image(kData / "rgb_2x2.png");
    CHECK(img.source.channels == 3);
    CHECK(img.pixels(0, 0) == doctest::Approx(0.299).epsilon(1e-12));
    CHECK(img.pixels(1, 0) == doctest::Approx(0.587).epsilon(1e-12));
    CHECK(img.pixels(0, 1) == doctest::Approx(0.114).epsilon(1e-12));
    CHECK(img.pixels(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("alpha is dropped") {
    const LoadedImage img = load_image(kData / "rgba_1x1.png");
    CHECK(img.source.channels == 3);
    CHECK(img.pixels[0] == doctest::Approx((0.299 * 10 + 0.587 * 20 + 0.114 * 30) / 255.0));
  }
}

TEST_CASE("reading errors are distinct") {
  TempDir tmp("bad");
  CHECK_THROWS_AS(read_image(tmp / "missing.png"), IoError);
  write_bytes(tmp / "junk.png", "GIF89a not an image");
  CHECK_THROWS_AS(read_image(tmp / "junk.png"), UnsupportedFormatError);
  write_bytes(tmp / "empty.pgm", "P5\n0 4\n255\n");
  CHECK_THROWS_AS(read_image(tmp / "empty.pgm"), EmptyImageError);
  write_bytes(tmp / "short.pgm", "P5\n4 4\n255\nab");
  CHECK_THROWS_AS(read_image(tmp / "short.pgm"), UnsupportedFormatError);
  write_bytes(tmp / "trunc.png", read_bytes(kData / "gray8_2x2.png").substr(0, 40));
  CHECK_THROWS_AS(read_image(tmp / "trunc.png"), UnsupportedFormatError);
}

TEST_CASE("mask writing") {
  TempDir tmp("mask");
  SUBCASE("2x2 checkerboard PGM is byte-exact") {
    const Mask m(2, 2, std::vector<std::uint8_t>{1, 0, 0, 1});
    write_mask(m, tmp / "check.pgm");
    CHECK(read_bytes(tmp / "check.pgm") == std::string("P5\n2 2\n255\n") + '\xff' + '\x00' + '\x00' + '\xff');
  }
  SUBCASE("all-foreground reads back as ones") {
    write_mask(Mask(5, 3, 1), tmp / "ones.png");
    for (double v : read_image(tmp / "ones.png")) CHECK(v == 1.0);
  }
  SUBCASE("random masks round-trip through PNG and PGM") {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 10; ++t) {
      Mask m(1 + static_cast<int>(rng() % 40), 1 + static_cast<int>(rng() % 40));
      for (auto& v : m) v = rng() & 1;
      for (const char* name : {"m.png", "m.pgm"}) {
        write_mask(m, tmp / name);
        const ScalarField back = read_image(tmp / name);
        for (double v : back) CHECK((v == 0.0 || v == 1.0));
        CHECK(to_mask(back) == m);
      }
    }
  }
  SUBCASE("unwritable path") {
    CHECK_THROWS_AS(write_mask(Mask(2, 2, 1), tmp / "no_such_dir" / "m.png"), IoError);
  }
}

TEST_CASE("field writing") {
  TempDir tmp("field");
  SUBCASE("half maps to 32768") {
    write_field(ScalarField(3, 2, 0.5), tmp / "half.png");
    const LoadedImage img = load_image(tmp / "half.png");
    CHECK(img.source.bit_depth == 16);
    for (double v : img.pixels) CHECK(v == doctest::Approx(32768.0 / 65535.0).epsilon(1e-15));
  }
  SUBCASE("zero maps to zero") {
    write_field(ScalarField(2, 2, 0.0), tmp / "zero.png");
    for (double v : read_image(tmp / "zero.png")) CHECK(v == 0.0);
  }
  SUBCASE("quantisation error is at most one level") {
    std::mt19937_64 rng(3);
    const ScalarField u = twophase::test::random_field(17, 9, rng, 0.0, 1.0);
    write_field(u, tmp / "u.png");
    const ScalarField back = read_image(tmp / "u.png");
    for (std::size_t k = 0; k < u.size(); ++k) CHECK(std::abs(back[k] - u[k]) <= 1.0 / 65535.0);
  }
  SUBCASE("out-of-range values are rejected") {
    CHECK_THROWS_AS(write_field(ScalarField(2, 2, 1.5), tmp / "bad.png"), ContractError);
    CHECK_THROWS_AS(write_field(ScalarField(2, 2, -0.1), tmp / "bad.png"), ContractError);
  }
}

TEST_CASE("energy CSV") {
  TempDir tmp("csv");
  SUBCASE("exact format") {
    const std::vector<double> trace{3.0, 2.5};
    write_energy_csv(trace, tmp / "e.csv");
    CHECK(read_bytes(tmp / "e.csv") == "iteration,energy\n0,3\n1,2.5\n");
  }
  SUBCASE("17 significant digits round-trip exactly") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    std::vector<double> trace(1000);
    for (double& v : trace) v = dist(rng);
    trace[3] = 0.1;
    trace[4] = -1e-300;
    write_energy_csv(trace, tmp / "e.csv");
    CHECK(read_energy_csv(tmp / "e.csv") == trace);
    const std::string text = read_bytes(tmp / "e.csv");
    CHECK(std::count(text.begin(), text.end(), '\n') == 1001);
  }
  SUBCASE("empty trace is rejected") {
    CHECK_THROWS_AS(write_energy_csv(std::vector<double>{}, tmp / "e.csv"), ContractError);
  }
}
