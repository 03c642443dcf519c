#pragma once

// Persistent Weingarten tables. JSON layout:
//   { "n": int, "z": {"num": str, "den": str},
//     "entries": [ {"rho": [int...], "value": {"num": str, "den": str}} ],
//     "provenance": {...} }
// stored under <cache>/tables/wg_o/n<k>/z_<num>_<den>.json.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ww/error.hpp"
#include "ww/rational.hpp"
#include "ww/symcomb.hpp"
#include "ww/version.hpp"
#include "ww/weingarten.hpp"

namespace ww {

struct TableProvenance {
  std::string generator = "ww";
  std::string version = kVersion;
  std::string method = "zonal spherical expansion";
  /// Left empty by build_table so that rebuilding is byte-for-byte reproducible.
  std::string timestamp;

  bool operator==(const TableProvenance&) const = default;
};

struct WeingartenTable {
  int n = 0;
  Rational z;
  std::vector<std::pair<Partition, Rational>> entries;  ///< reverse-lex in rho
  TableProvenance provenance;

  const Rational& at(const Partition& rho) const {
    for (const auto& [p, v] : entries)
      if (p == rho) return v;
    throw InvalidArgument("table has no entry for " + to_string(rho));
  }

  bool operator==(const WeingartenTable&) const = default;
};

/// Wg^O(rho; z) for every rho of weight n.
inline WeingartenTable build_table(int n, const Rational& z) {
  WeingartenTable t;
  t.n = n;
  t.z = z;
  const auto values = weingarten_values(n, z);
  const auto& parts = partition_list(n);
  for (size_t i = 0; i < parts.size(); ++i) t.entries.emplace_back(parts[i], values[i]);
  return t;
}

inline nlohmann::ordered_json rational_to_json(const Rational& q) {
  return {{"num", numerator(q).str()}, {"den", denominator(q).str()}};
}

inline Rational rational_from_json(const nlohmann::json& j) {
  try {
    return parse_rational(j.at("num").get<std::string>() + "/" + j.at("den").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed rational in table: ") + e.what());
  }
}

inline nlohmann::ordered_json to_json(const WeingartenTable& t) {
  nlohmann::ordered_json j;
  j["n"] = t.n;
  j["z"] = rational_to_json(t.z);
  auto entries = nlohmann::ordered_json::array();
  for (const auto& [rho, value] : t.entries)
    entries.push_back({{"rho", rho.parts()}, {"value", rational_to_json(value)}});
  j["entries"] = std::move(entries);
  nlohmann::ordered_json prov;
  prov["generator"] = t.provenance.generator;
  prov["version"] = t.provenance.version;
  prov["method"] = t.provenance.method;
  if (!t.provenance.timestamp.empty()) prov["timestamp"] = t.provenance.timestamp;
  j["provenance"] = std::move(prov);
  return j;
}

inline std::string serialize(const WeingartenTable& t) { return to_json(t).dump(2) + "\n"; }

inline WeingartenTable table_from_json(const nlohmann::json& j) {
  WeingartenTable t;
  try {
    t.n = j.at("n").get<int>();
    t.z = rational_from_json(j.at("z"));
    for (const auto& e : j.at("entries"))
      t.entries.emplace_back(Partition(e.at("rho").get<std::vector<int>>()), rational_from_json(e.at("value")));
    if (j.contains("provenance")) {
      const auto& p = j["provenance"];
      t.provenance.generator = p.value("generator", "");
      t.provenance.version = p.value("version", "");
      t.provenance.method = p.value("method", "");
      t.provenance.timestamp = p.value("timestamp", "");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed Weingarten table: ") + e.what());
  }
  if (t.entries.size() != partition_list(t.n).size())
    throw InvalidArgument("Weingarten table for n = " + std::to_string(t.n) + " is incomplete");
  return t;
}

inline WeingartenTable parse_table(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("table is not valid JSON: ") + e.what());
  }
  return table_from_json(j);
}

/// Relative path of a table inside the cache directory.
inline std::filesystem::path table_relative_path(int n, const Rational& z) {
  return std::filesystem::path("tables") / "wg_o" / ("n" + std::to_string(n)) /
         ("z_" + numerator(z).str() + "_" + denominator(z).str() + ".json");
}

/// WW_CACHE_DIR when set, otherwise ./.ww_cache.
inline std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("WW_CACHE_DIR"); env && *env) return env;
  return ".ww_cache";
}

/// Memory and disk cache of Weingarten tables keyed by (n, z) with z in
/// reduced form. Entries are computed once and then shared read-only.
class TableCache {
 public:
  explicit TableCache(std::optional<std::filesystem::path> dir = std::nullopt) : dir_(std::move(dir)) {}

  const std::optional<std::filesystem::path>& directory() const noexcept { return dir_; }

  /// Returns the cached table, loading it from disk or building (and
  /// persisting) it on a miss. `hit` reports whether any cache level served it.
  WeingartenTable get(int n, const Rational& z, bool* hit = nullptr) {
    const Key key{n, to_string(z)};
    {
      std::shared_lock lock(mutex_);
      if (auto it = memory_.find(key); it != memory_.end()) {
        if (hit) *hit = true;
        return it->second;
      }
    }
    std::optional<WeingartenTable> table = load(n, z);
    const bool from_disk = table.has_value();
    if (!table) {
      table = build_table(n, z);
      store(*table);
    }
    if (hit) *hit = from_disk;
    std::unique_lock lock(mutex_);
    return memory_.try_emplace(key, std::move(*table)).first->second;
  }

  std::optional<WeingartenTable> load(int n, const Rational& z) const {
    if (!dir_) return std::nullopt;
    const auto path = *dir_ / table_relative_path(n, z);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    auto t = parse_table(ss.str());
    if (t.n != n || t.z != z) throw InvalidArgument("cached table " + path.string() + " does not match its key");
    return t;
  }

  void store(const WeingartenTable& t) const {
    if (!dir_) return;
    const auto path = *dir_ / table_relative_path(t.n, t.z);
    std::filesystem::create_directories(path.parent_path());
    // Write to a temporary name first so concurrent readers never see a partial file.
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw Error("cannot write table file " + tmp);
      out << serialize(t);
    }
    std::filesystem::rename(tmp, path);
  }

  /// All tables present on disk as (n, path) pairs, sorted by path.
  std::vector<std::filesystem::path> list() const {
    std::vector<std::filesystem::path> out;
    if (!dir_) return out;
    const auto root = *dir_ / "tables" / "wg_o";
    if (!std::filesystem::exists(root)) return out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(root))
      if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  using Key = std::pair<int, std::string>;
  std::optional<std::filesystem::path> dir_;
  std::shared_mutex mutex_;
  std::map<Key, WeingartenTable> memory_;
};

}  // namespace ww
