#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "factorprice/errors.hpp"
#include "factorprice/market_io.hpp"
#include "helpers.hpp"

namespace fp = factorprice;
using nlohmann::json;

namespace {

std::string error_of(const json& doc) {
  try {
    fp::parse_market_document(doc);
  } catch (const fp::ModelError& e) {
    return e.what();
  }
  return "";
}

json two_product_linear() {
  return json::parse(R"({
    "n": 2, "model": "linear",
    "segments": [
      {"theta": 0.25, "a": [1, 1], "B": [[2, -1], [-1, 2]]},
      {"theta": 0.75, "a": [2, 1], "B": [[1, 0], [0, 1]]}
    ]})");
}

}  // namespace

TEST(MarketIo, ParsesLinear) {
  const fp::MarketDocument doc = fp::parse_market_document(two_product_linear());
  EXPECT_EQ(doc.model_kind, "linear");
  EXPECT_EQ(doc.market.n(), 2);
  EXPECT_EQ(doc.market.m(), 2);
  EXPECT_TRUE(doc.market.all_linear());
  EXPECT_FALSE(doc.bundles.has_value());
}

TEST(MarketIo, ParsesMnl) {
  const json j = json::parse(R"({"n": 1, "model": "mnl", "segments": [{"theta": 1, "a": [0], "b": [1]}]})");
  const fp::MarketDocument doc = fp::parse_market_document(j);
  EXPECT_TRUE(doc.market.all_mnl());
}

TEST(MarketIo, BundleDefaultsToSizeIndexed) {
  const json j = json::parse(
      R"({"n": 3, "model": "bundle", "segments": [{"theta": 1, "a": [1, 1.5, 1.8], "B": [[1,0,0],[0,1,0],[0,0,1]]}]})");
  const fp::MarketDocument doc = fp::parse_market_document(j);
  ASSERT_TRUE(doc.bundles.has_value());
  EXPECT_EQ(doc.bundles->sizes(), (std::vector<int>{1, 2, 3}));
}

TEST(MarketIo, RoundTripIsExact) {
  const fp::MarketInstance market = fp_test::random_lcmnl(4, 3, 3);
  const fp::MarketDocument doc{"mnl", market, std::nullopt};
  const auto path = std::filesystem::temp_directory_path() / "factorprice_roundtrip.json";
  fp::write_market_file(path, doc);
  const fp::MarketDocument back = fp::read_market_file(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.market.m(), 3);
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(back.market.segment(j).theta, market.segment(j).theta);
    const auto& m0 = std::get<fp::MnlSegmentModel>(market.segment(j).model);
    const auto& m1 = std::get<fp::MnlSegmentModel>(back.market.segment(j).model);
    EXPECT_EQ(m0.a(), m1.a());
    EXPECT_EQ(m0.b(), m1.b());
  }
}

TEST(MarketIo, ErrorsNameTheField) {
  json j = two_product_linear();
  j["segments"][1]["B"][0][1] = 0.5;
  EXPECT_NE(error_of(j).find("segments[1]"), std::string::npos) << error_of(j);

  j = two_product_linear();
  j["segments"][0]["a"][1] = "x";
  EXPECT_NE(error_of(j).find("segments[0].a[1]"), std::string::npos) << error_of(j);

  j = two_product_linear();
  j["segments"][0]["theta"] = 0.5;
  EXPECT_NE(error_of(j).find("theta"), std::string::npos) << error_of(j);

  j = two_product_linear();
  j.erase("n");
  EXPECT_NE(error_of(j).find("n"), std::string::npos);

  j = two_product_linear();
  j["model"] = "probit";
  EXPECT_NE(error_of(j).find("model"), std::string::npos);

  j = two_product_linear();
  j["segments"][0]["b"] = {1, 1};
  EXPECT_FALSE(error_of(j).empty());
}

TEST(MarketIo, SyntaxErrorsReportPosition) {
  const auto path = std::filesystem::temp_directory_path() / "factorprice_bad.json";
  {
    std::ofstream out(path);
    out << "{\n  \"n\": 1,\n  \"model\": \"linear\",\n  \"segments\": [\n}";
  }
  try {
    fp::read_market_file(path);
    FAIL() << "expected a parse error";
  } catch (const fp::ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }
  std::filesystem::remove(path);
}

TEST(MarketIo, MissingFile) {
  EXPECT_THROW(fp::read_market_file("/nonexistent/market.json"), fp::ModelError);
}
