#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellkit/angles.hpp"
#include "bellkit/chsh.hpp"

namespace bellkit {

enum class SourceTable { B1, B2, Custom };

inline std::string to_string(SourceTable t) {
  switch (t) {
    case SourceTable::B1: return "B1";
    case SourceTable::B2: return "B2";
    default: return "Custom";
  }
}

// One published angle set with its reported S values. Angles are stored in
// the HalfAngle convention (rotation-gate inputs). `pairs` is the four-term
// CHSH pair list; for sets published as a flat four-angle tuple the pairs
// are the (a,b,a',b') grid expansion and `raw_angles` keeps the original
// listing so the alternative (a,a',b,b') reading can also be evaluated.
struct AngleSetRecord {
  std::string label;
  std::array<std::pair<double, double>, 4> pairs{};
  std::optional<std::array<double, 4>> raw_angles;
  std::optional<double> reported_theoretical_s;
  std::optional<double> reported_observed_s;
  SourceTable source_table = SourceTable::Custom;
};

struct AngleSetData {
  std::string version;
  std::vector<AngleSetRecord> b1;
  std::vector<AngleSetRecord> b2;
};

inline AngleSetData load_angle_sets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open angle-set data file: " + path);
  nlohmann::json j;
  in >> j;

  AngleSetData data;
  data.version = j.value("version", "unknown");

  for (const auto& row : j.at("b1")) {
    AngleSetRecord rec;
    rec.label = row.at("label").get<std::string>();
    rec.source_table = SourceTable::B1;
    const auto& pairs = row.at("pairs");
    if (pairs.size() != 4) throw std::runtime_error("B1 row needs exactly four pairs");
    for (std::size_t i = 0; i < 4; ++i)
      rec.pairs[i] = {pairs[i][0].get<double>(), pairs[i][1].get<double>()};
    if (row.contains("theoretical_s")) rec.reported_theoretical_s = row["theoretical_s"].get<double>();
    if (row.contains("simulator_s")) rec.reported_observed_s = row["simulator_s"].get<double>();
    data.b1.push_back(rec);
  }

  for (const auto& row : j.at("b2")) {
    AngleSetRecord rec;
    rec.label = row.at("label").get<std::string>();
    rec.source_table = SourceTable::B2;
    const auto& angles = row.at("angles");
    if (angles.size() != 4) throw std::runtime_error("B2 row needs exactly four angles");
    std::array<double, 4> raw{};
    for (std::size_t i = 0; i < 4; ++i) raw[i] = angles[i].get<double>();
    rec.raw_angles = raw;
    // grid expansion: (a, b, a', b') -> E(a,b), E(a,b'), E(a',b), E(a',b')
    const double a = raw[0], b = raw[1], ap = raw[2], bp = raw[3];
    rec.pairs = {std::pair{a, b}, {a, bp}, {ap, b}, {ap, bp}};
    if (row.contains("theoretical_s")) rec.reported_theoretical_s = row["theoretical_s"].get<double>();
    if (row.contains("observed_s")) rec.reported_observed_s = row["observed_s"].get<double>();
    data.b2.push_back(rec);
  }
  return data;
}

// Four-term pair list under a chosen convention.
inline ChshPairs record_pairs(const AngleSetRecord& rec, AngleConvention convention) {
  ChshPairs out;
  for (std::size_t i = 0; i < 4; ++i)
    out[i] = {MeasurementSetting{rec.pairs[i].first, convention},
              MeasurementSetting{rec.pairs[i].second, convention}};
  return out;
}

// Alternative (a, a', b, b') reading of a flat four-angle listing.
inline std::optional<ChshPairs> record_alt_grid_pairs(const AngleSetRecord& rec,
                                                      AngleConvention convention) {
  if (!rec.raw_angles) return std::nullopt;
  const auto& r = *rec.raw_angles;
  const MeasurementSetting a{r[0], convention}, ap{r[1], convention};
  const MeasurementSetting b{r[2], convention}, bp{r[3], convention};
  return ChshPairs{SettingPair{a, b}, {a, bp}, {ap, b}, {ap, bp}};
}

}  // namespace bellkit
