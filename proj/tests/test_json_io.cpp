// JSON round trips are bit-exact.

#include <cstring>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "regtrace/generators.hpp"
#include "regtrace/json_io.hpp"
#include "regtrace/reg_int.hpp"

using namespace regtrace;

TEST(JsonIo, DoublesRoundTripBitForBit) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t bits = rng();
    double x;
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) continue;
    const double y = parse_double(json(format_double(x)));
    EXPECT_EQ(std::memcmp(&x, &y, sizeof x), 0) << format_double(x);
  }
  EXPECT_TRUE(std::isinf(parse_double(json("-inf"))));
  EXPECT_TRUE(std::isnan(parse_double(json("nan"))));
  EXPECT_EQ(parse_double(json(0.25)), 0.25);
  EXPECT_THROW(parse_double(json("1.5x")), ValidationError);
  EXPECT_THROW(parse_double(json::array()), ValidationError);
}

TEST(JsonIo, ExpansionRoundTrip) {
  const auto e = ball_integral_expansion(bracket_symbol(2, -1.0, {1, 1}));
  const auto back = expansion_from_json(json::parse(to_json(e).dump()));
  ASSERT_EQ(back.entries().size(), e.entries().size());
  for (std::size_t i = 0; i < e.entries().size(); ++i) {
    EXPECT_EQ(back.entries()[i].exponent, e.entries()[i].exponent);
    EXPECT_EQ(back.entries()[i].logpow, e.entries()[i].logpow);
    EXPECT_EQ(back.entries()[i].coefficient, e.entries()[i].coefficient);
  }
  EXPECT_EQ(back.remainder_order(), e.remainder_order());
  EXPECT_THROW(expansion_from_json(json{{"variable", "x"}}), ValidationError);
}

TEST(JsonIo, SymbolRoundTripThroughItsGenerator) {
  const auto s = bracket_symbol(2, -1.5, {1, 0}, 2.0);
  const auto back = symbol_from_json(json::parse(to_json(s).dump()));
  for (auto [x, y] : {std::pair{0.3, 0.1}, {4.0, -2.0}}) EXPECT_EQ(eval(back, {x, y}), eval(s, {x, y}));
  EXPECT_EQ(partie_finie(back), partie_finie(s));
}

TEST(JsonIo, ShippedSymbolFile) {
  const auto s = load_symbol(std::string(REGTRACE_DATA_DIR) + "/symbols/inv-sqrt.json");
  EXPECT_NEAR(partie_finie(s), 2.0 * std::log(2.0), 1e-10);
  EXPECT_THROW(load_symbol("/nonexistent/symbol.json"), ValidationError);
}

TEST(JsonIo, MalformedFiles) {
  const std::string path = testing::TempDir() + "regtrace_bad.json";
  std::ofstream(path) << "{\"generator\": \"bracket\", ";
  EXPECT_THROW(read_json_file(path), ValidationError);
  std::ofstream(path) << "{\"generator\": \"bracket\", \"dimension\": 1}";
  EXPECT_THROW(load_symbol(path), ValidationError);
}
