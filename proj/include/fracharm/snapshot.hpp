#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracharm/field.hpp"

namespace fracharm {

// Field snapshots: <base>.bin holds little-endian float64 samples, component
// after component, each row-major; <base>.json describes the grid.

namespace detail {

inline std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

}  // namespace detail

inline void write_snapshot(const VectorFieldMap& u, const std::string& base) {
  std::ofstream bin(base + ".bin", std::ios::binary);
  if (!bin) throw IoError("cannot open " + base + ".bin");
  for (const auto& c : u.components())
    for (double v : c.values()) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      bits = detail::to_little_endian(bits);
      bin.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  if (!bin) throw IoError("write failed for " + base + ".bin");

  nlohmann::ordered_json meta;
  meta["n"] = u.grid().dimension();
  meta["N"] = u.grid().points_per_axis();
  meta["m"] = u.target_dim();
  meta["layout"] = "row-major";
  meta["domain"] = "torus-2pi";
  std::ofstream js(base + ".json");
  if (!js) throw IoError("cannot open " + base + ".json");
  js << meta.dump(2) << "\n";
}

inline void write_snapshot(const ScalarField& f, const std::string& base) {
  write_snapshot(VectorFieldMap({f}), base);
}

inline VectorFieldMap read_snapshot(const std::string& base) {
  std::ifstream js(base + ".json");
  if (!js) throw IoError("cannot open " + base + ".json");
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(js);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(base + ".json: " + e.what());
  }
  for (const char* key : {"n", "N", "m", "layout", "domain"})
    if (!meta.contains(key)) throw IoError(base + ".json lacks \"" + key + "\"");
  if (meta["layout"] != "row-major" || meta["domain"] != "torus-2pi")
    throw IoError(base + ".json: unsupported layout or domain");
  PeriodicGrid grid(meta["n"].get<int>(), meta["N"].get<int>());
  const auto m = meta["m"].get<std::size_t>();

  std::ifstream bin(base + ".bin", std::ios::binary);
  if (!bin) throw IoError("cannot open " + base + ".bin");
  std::vector<ScalarField> comps;
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<double> v(grid.size());
    for (auto& x : v) {
      std::uint64_t bits;
      bin.read(reinterpret_cast<char*>(&bits), sizeof bits);
      if (!bin) throw IoError(base + ".bin is shorter than the sidecar says");
      bits = detail::to_little_endian(bits);
      std::memcpy(&x, &bits, sizeof x);
    }
    comps.emplace_back(grid, std::move(v));
  }
  return VectorFieldMap(std::move(comps));
}

}  // namespace fracharm
