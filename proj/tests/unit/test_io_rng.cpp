#include <doctest.h>

#include <bit>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <random>

#include "mmgame/error.hpp"
#include "mmgame/io.hpp"
#include "mmgame/rng.hpp"
#include "mmgame/stats.hpp"

using namespace mmg;

TEST_CASE("PGM bytes for a 2x2 checkerboard") {
  std::string s = pgm_bytes(2, 2, {0.0, 1.0, 1.0, 0.0});
  std::string head = "P5\n2 2\n255\n";
  REQUIRE(s.size() == head.size() + 4);
  CHECK(s.substr(0, head.size()) == head);
  CHECK(uint8_t(s[head.size() + 0]) == 0x00);
  CHECK(uint8_t(s[head.size() + 1]) == 0xFF);
  CHECK(uint8_t(s[head.size() + 2]) == 0xFF);
  CHECK(uint8_t(s[head.size() + 3]) == 0x00);
  CHECK(gray_level(0.5) == 128);
  CHECK_THROWS_AS(pgm_bytes(2, 2, {0.0}), Error);
}

TEST_CASE("CSV output quotes when needed and keeps an empty table's header") {
  CHECK(to_csv(CsvTable{{"a", "b"}, {}}) == "a,b\n");
  CHECK(to_csv(CsvTable{{"x"}, {{"1,2"}, {"say \"hi\""}}}) == "x\n\"1,2\"\n\"say \"\"hi\"\"\"\n");
}

TEST_CASE("property: formatted doubles parse back exactly") {
  std::mt19937_64 g(1);
  for (int i = 0; i < 2000; ++i) {
    double v = std::bit_cast<double>(g());
    if (!std::isfinite(v)) continue;
    std::string s = format_double(v);
    double w = 0;
    std::from_chars(s.data(), s.data() + s.size(), w);
    CHECK(w == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("atomic write replaces the file") {
  auto dir = std::filesystem::temp_directory_path() / "mmgame_io_test";
  std::filesystem::create_directories(dir);
  std::string path = (dir / "f.txt").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  CHECK(read_file(path) == "second");
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(read_file(path), Error);
}

TEST_CASE("Bernoulli words have the requested frequency per lane") {
  for (double p : {0.0, 0.1, 0.5, 0.71, 1.0}) {
    ProbabilityDigits digits(p);
    BernoulliWords bw(digits, stream_key(5, Stream::Leaves, 0));
    std::vector<uint64_t> w(4096);
    bw.fill(0, w.size(), w.data());
    uint64_t ones = 0;
    for (uint64_t x : w) ones += uint64_t(std::popcount(x));
    double n = 64.0 * double(w.size());
    double freq = double(ones) / n;
    CHECK(std::fabs(freq - p) <= 5 * std::sqrt(p * (1 - p) / n) + 1e-12);
    // filling a sub-range reproduces the same words
    std::vector<uint64_t> part(100);
    bw.fill(1000, part.size(), part.data());
    CHECK(std::equal(part.begin(), part.end(), w.begin() + 1000));
  }
}

TEST_CASE("counter RNG is a pure function of key and counter") {
  CounterRng a(42, Stream::Generic, 3), b(42, Stream::Generic, 3), c(42, Stream::Generic, 4);
  for (int i = 0; i < 10; ++i) {
    uint64_t x = a(), y = b(), z = c();
    CHECK(x == y);
    CHECK(x != z);
  }
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.below(7) < 7);
    double u = a.uniform();
    CHECK(u > 0);
    CHECK(u < 1);
  }
}

TEST_CASE("Wilson interval contains the point estimate") {
  Interval w = wilson(0, 100);
  CHECK(w.low == 0);
  CHECK(w.high > 0);
  Interval v = wilson(50, 100);
  CHECK(v.low < 0.5);
  CHECK(v.high > 0.5);
  CHECK(v.halfwidth() == doctest::Approx(0.5 * (v.high - v.low)));
}
