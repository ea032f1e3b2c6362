#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "factorprice/market.hpp"

namespace factorprice {

/// Contents of a market instance file.
///
///   { "n": int, "model": "linear" | "mnl" | "bundle",
///     "segments": [ { "theta": float, "a": [...], "B": [[...]] } |
///                   { "theta": float, "a": [...], "b": [...] }, ... ],
///     "labels": [...],                      optional
///     "base_n": int, "bundles": [[0/1...]]  bundle files only }
///
/// A bundle file without "bundles" uses size-indexed bundles 1..n.
struct MarketDocument {
  std::string model_kind;
  MarketInstance market;
  std::optional<BundleMarket> bundles;
};

/// Validates every field; failures throw ModelError naming the JSON path.
MarketDocument parse_market_document(const nlohmann::json& doc);

/// Parse errors carry the line and column reported by the JSON reader.
MarketDocument read_market_file(const std::filesystem::path& path);

nlohmann::json to_json(const MarketDocument& doc);
void write_market_file(const std::filesystem::path& path, const MarketDocument& doc);

/// Model family string for a market: "linear", "mnl" or "mixed".
std::string model_kind_of(const MarketInstance& market);

}  // namespace factorprice
