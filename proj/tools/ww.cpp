// ww: exact Wishart / inverse-Wishart moments, Weingarten tables and self-checks.
//
// Every invocation is parsed into a RunConfig, which is executed and embedded
// in the report; `--replay REPORT.json` re-executes a stored RunConfig.
//
// Exit codes: 0 success, 2 usage, 3 math domain (pole, non-PD), 4 validation
// failure, 5 unreadable or malformed input file, 1 anything else.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ww/tables.hpp"
#include "ww/validation.hpp"
#include "ww/version.hpp"
#include "ww/wishart.hpp"

namespace {

using ww::MatrixF;
using ww::Partition;
using ww::Rational;
using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kDomain = 3, kValidation = 4, kInput = 5 };

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string action;  // table: build|list|show; validate: suite name
  std::optional<int> n, d, big_n, truncate, trace_power;
  std::optional<std::string> z, gamma, beta;
  bool tilde = false, inverse = false;
  std::vector<int> entries, i, j;  // 1-based
  std::vector<int> power_sum, invariant;
  std::string sigma_source;
  std::optional<MatrixF> sigma;
  std::string format = "text";
  std::size_t samples = 1000000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string cache_dir;
};

// ---------------------------------------------------------------- RunConfig <-> JSON

Json matrix_to_json(const MatrixF& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

MatrixF matrix_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + ": expected a nonempty array of rows");
  const auto d = static_cast<int>(j.size());
  MatrixF m(d, d);
  for (int r = 0; r < d; ++r) {
    const auto& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw InputError(where + ": row " + std::to_string(r + 1) + " does not have " + std::to_string(d) + " entries");
    for (int c = 0; c < d; ++c) {
      if (!row[static_cast<size_t>(c)].is_number()) throw InputError(where + ": non-numeric entry");
      m(r, c) = row[static_cast<size_t>(c)].get<double>();
    }
  }
  return m;
}

Json to_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  if (!c.action.empty()) j["action"] = c.action;
  Json p = Json::object();
  if (c.n) p["n"] = *c.n;
  if (c.z) p["z"] = *c.z;
  if (c.gamma) p["gamma"] = *c.gamma;
  if (c.tilde) p["tilde"] = true;
  if (c.truncate) p["truncate"] = *c.truncate;
  if (c.beta) p["beta"] = *c.beta;
  if (c.d) p["d"] = *c.d;
  if (c.inverse) p["inverse"] = true;
  if (!c.entries.empty()) p["entries"] = c.entries;
  if (c.trace_power) p["trace_power"] = *c.trace_power;
  if (!c.power_sum.empty()) p["power_sum"] = c.power_sum;
  if (!c.invariant.empty()) p["invariant"] = c.invariant;
  if (!c.i.empty()) p["i"] = c.i;
  if (!c.j.empty()) p["j"] = c.j;
  if (c.big_n) p["N"] = *c.big_n;
  if (!c.sigma_source.empty()) p["sigma_source"] = c.sigma_source;
  if (c.sigma) p["sigma"] = matrix_to_json(*c.sigma);
  j["parameters"] = p;
  j["format"] = c.format;
  j["sample_count"] = c.samples;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["cache_dir"] = c.cache_dir;
  j["version"] = ww::kVersion;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.action = j.value("action", "");
    const auto& p = j.at("parameters");
    auto opt_int = [&](const char* k, std::optional<int>& out) {
      if (p.contains(k)) out = p.at(k).get<int>();
    };
    auto opt_str = [&](const char* k, std::optional<std::string>& out) {
      if (p.contains(k)) out = p.at(k).get<std::string>();
    };
    auto ints = [&](const char* k, std::vector<int>& out) {
      if (p.contains(k)) out = p.at(k).get<std::vector<int>>();
    };
    opt_int("n", c.n);
    opt_int("d", c.d);
    opt_int("N", c.big_n);
    opt_int("truncate", c.truncate);
    opt_int("trace_power", c.trace_power);
    opt_str("z", c.z);
    opt_str("gamma", c.gamma);
    opt_str("beta", c.beta);
    c.tilde = p.value("tilde", false);
    c.inverse = p.value("inverse", false);
    ints("entries", c.entries);
    ints("power_sum", c.power_sum);
    ints("invariant", c.invariant);
    ints("i", c.i);
    ints("j", c.j);
    c.sigma_source = p.value("sigma_source", "");
    if (p.contains("sigma")) c.sigma = matrix_from_json(p.at("sigma"), "replayed sigma");
    c.format = j.value("format", "text");
    c.samples = j.value("sample_count", c.samples);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.cache_dir = j.value("cache_dir", "");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed run configuration: ") + e.what());
  }
  return c;
}

// ---------------------------------------------------------------- input helpers

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

MatrixF parse_csv_matrix(const std::string& text, const std::string& where) {
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      cell = trim(cell);
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (cell.empty() || used != cell.size()) throw InputError(where + ": cannot parse '" + cell + "' as a number");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  const auto d = static_cast<int>(rows.size());
  if (d == 0) throw InputError(where + ": no matrix rows found");
  MatrixF m(d, d);
  for (int r = 0; r < d; ++r) {
    if (static_cast<int>(rows[static_cast<size_t>(r)].size()) != d)
      throw InputError(where + ": row " + std::to_string(r + 1) + " does not have " + std::to_string(d) + " entries");
    for (int c = 0; c < d; ++c) m(r, c) = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
  }
  return m;
}

MatrixF load_sigma(const std::string& path) {
  const std::string text = read_file(path);
  const std::string body = trim(text);
  MatrixF m;
  if (!body.empty() && (body[0] == '[' || body[0] == '{')) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(path + ": " + e.what());
    }
    if (j.is_object()) {
      if (!j.contains("sigma")) throw InputError(path + ": JSON object has no \"sigma\" member");
      j = j["sigma"];
    }
    m = matrix_from_json(j, path);
  } else {
    m = parse_csv_matrix(text, path);
  }
  if (!m.allFinite()) throw InputError(path + ": non-finite entry");
  if (!ww::detail::nearly_symmetric(m))
    throw InputError(path + ": sigma is not symmetric within " + std::to_string(ww::kSymmetryTolerance));
  return m;
}

std::vector<int> zero_based(const std::vector<int>& one_based, const std::string& what) {
  std::vector<int> out;
  for (int k : one_based) {
    if (k < 1) throw UsageError(what + ": indices are 1-based, got " + std::to_string(k));
    out.push_back(k - 1);
  }
  return out;
}

Partition to_partition(const std::vector<int>& parts, const std::string& what) {
  for (size_t k = 0; k < parts.size(); ++k)
    if (parts[k] < 1 || (k && parts[k] > parts[k - 1]))
      throw UsageError(what + ": expected a weakly decreasing list of positive parts");
  return Partition(parts);
}

Rational rational_arg(const std::optional<std::string>& s, const char* name) {
  if (!s) throw UsageError(std::string("--") + name + " is required");
  return ww::parse_rational(*s);
}

// ---------------------------------------------------------------- output

struct Output {
  Json result = Json::object();
  std::string text;
  std::string csv;
  int exit_code = kOk;
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

Json rho_json(const Partition& p) { return Json(p.parts()); }

void append_partition_table(Output& out, const std::vector<std::pair<Partition, Rational>>& rows, const char* key) {
  Json entries = Json::array();
  out.csv += "rho,num,den\n";
  for (const auto& [rho, v] : rows) {
    entries.push_back(Json{{"rho", rho_json(rho)}, {"value", ww::rational_to_json(v)}});
    out.text += ww::to_string(rho) + ": " + ww::to_string(v) + "\n";
    out.csv += csv_quote(ww::to_string(rho)) + "," + ww::numerator(v).str() + "," + ww::denominator(v).str() + "\n";
  }
  out.result[key] = entries;
}

// ---------------------------------------------------------------- commands

Output cmd_wg(const RunConfig& c) {
  if (!c.n) throw UsageError("wg: --n is required");
  const int n = *c.n;
  if (n < 1 || n > ww::kMaxZonalDegree) throw UsageError("wg: need 1 <= n <= " + std::to_string(ww::kMaxZonalDegree));
  const int given = (c.z ? 1 : 0) + (c.gamma ? 1 : 0) + (c.truncate ? 1 : 0);
  if (given != 1) throw UsageError("wg: give exactly one of --z, --gamma (with --tilde) or --truncate");
  if (c.tilde != c.gamma.has_value()) throw UsageError("wg: --tilde and --gamma go together");

  Output out;
  std::vector<Rational> values;
  if (c.z) {
    const Rational z = ww::parse_rational(*c.z);
    values = ww::weingarten_values(n, z);
    out.result["function"] = "Wg";
    out.result["z"] = ww::rational_to_json(z);
  } else if (c.gamma) {
    const Rational g = ww::parse_rational(*c.gamma);
    values = ww::tilde_weingarten_values(n, g);
    out.result["function"] = "~Wg";
    out.result["gamma"] = ww::rational_to_json(g);
  } else {
    if (*c.truncate < 1) throw UsageError("wg: --truncate needs N >= 1");
    values = ww::weingarten_truncated_values(n, *c.truncate);
    out.result["function"] = "Wg truncated";
    out.result["N"] = *c.truncate;
  }
  out.result["n"] = n;
  std::vector<std::pair<Partition, Rational>> rows;
  const auto& parts = ww::partition_list(n);
  for (size_t k = 0; k < parts.size(); ++k) rows.emplace_back(parts[k], values[k]);
  append_partition_table(out, rows, "entries");
  return out;
}

ww::WishartParams make_params(const RunConfig& c) {
  const Rational beta = rational_arg(c.beta, "beta");
  MatrixF sigma;
  if (c.sigma) {
    sigma = *c.sigma;
    if (c.d && *c.d != sigma.rows())
      throw UsageError("--d " + std::to_string(*c.d) + " does not match the " + std::to_string(sigma.rows()) +
                       " x " + std::to_string(sigma.rows()) + " sigma");
  } else if (c.d) {
    if (*c.d < 1) throw UsageError("--d must be positive");
    sigma = MatrixF::Identity(*c.d, *c.d);
  } else {
    throw UsageError("moment: give --sigma FILE or --d (identity sigma)");
  }
  return ww::WishartParams(beta, sigma);
}

Json coefficient_json(int n, const std::vector<Rational>& coeffs) {
  Json arr = Json::array();
  const auto& parts = ww::partition_list(n);
  for (size_t k = 0; k < parts.size(); ++k)
    arr.push_back(Json{{"rho", rho_json(parts[k])}, {"value", ww::rational_to_json(coeffs[k])}});
  return arr;
}

std::string coefficient_text(int n, const std::vector<Rational>& coeffs, const std::string& x) {
  std::string s;
  const auto& parts = ww::partition_list(n);
  for (size_t k = 0; k < parts.size(); ++k) {
    if (coeffs[k] == 0) continue;
    if (!s.empty()) s += " + ";
    s += "(" + ww::to_string(coeffs[k]) + ") p_" + ww::to_string(parts[k]) + "(" + x + ")";
  }
  return s.empty() ? "0" : s;
}

Output cmd_moment(const RunConfig& c) {
  const int kinds = (c.entries.empty() ? 0 : 1) + (c.trace_power ? 1 : 0) + (c.power_sum.empty() ? 0 : 1) +
                    (c.invariant.empty() ? 0 : 1);
  if (kinds != 1) throw UsageError("moment: give exactly one of --entries, --trace-power, --power-sum, --invariant");
  const ww::WishartParams params = make_params(c);
  const bool inv = c.inverse;
  const std::string x = inv ? "sigma^-1" : "sigma";

  Output out;
  std::string label, formula;
  double value = 0;
  int degree = 0;
  std::optional<std::pair<int, std::vector<Rational>>> coeffs;

  if (!c.entries.empty()) {
    const auto idx = zero_based(c.entries, "--entries");
    degree = static_cast<int>(idx.size()) / 2;
    label = ww::entries_descriptor(idx, inv).label;
    if (inv) {
      value = ww::inverse_moment(params, idx);
      formula = "sum over perfect matchings m of ~Wg(coset type of m; gamma) prod sigma^-1 pairings";
    } else {
      value = ww::moment(params, idx);
      formula = "2^-n hf_{2 beta} of sigma restricted to the index list";
    }
  } else if (c.trace_power) {
    degree = *c.trace_power;
    if (degree < 1) throw UsageError("--trace-power needs n >= 1");
    label = ww::trace_power_descriptor(degree, inv).label;
    value = ww::trace_power_moment(params, degree, inv);
    coeffs.emplace(degree, ww::trace_power_coefficients(degree, inv ? params.gamma() : params.beta(), inv));
    formula = inv ? "sum_rho 2^(n - l(rho)) n!/z_rho ~Wg(rho; gamma) p_rho(sigma^-1)"
                  : "sum_rho n!/z_rho beta^l(rho) p_rho(sigma)";
  } else if (!c.power_sum.empty()) {
    const Partition mu = to_partition(c.power_sum, "--power-sum");
    degree = mu.weight();
    label = ww::power_sum_descriptor(mu, inv).label;
    value = ww::power_trace_moment(params, mu, inv);
    coeffs.emplace(degree, ww::power_trace_coefficients(mu, inv ? params.gamma() : params.beta(), inv));
    formula = "zonal expansion of p_mu with exact coefficients in p_rho(" + x + ")";
  } else {
    const Partition lambda = to_partition(c.invariant, "--invariant");
    degree = lambda.weight();
    label = std::string("E[Z_") + ww::to_string(lambda) + (inv ? "(W^-1)]" : "(W)]");
    value = ww::invariant_moment(params, lambda, inv);
    formula = inv ? "(-1)^n 2^n C_lambda(-2 gamma)^-1 Z_lambda(sigma^-1)" : "2^-n C_lambda(2 beta) Z_lambda(sigma)";
  }

  out.result["statistic"] = label;
  out.result["value"] = value;
  out.result["degree"] = degree;
  out.result["beta"] = ww::rational_to_json(params.beta());
  out.result["d"] = params.d();
  Json prov;
  prov["formula"] = formula;
  prov["inverse"] = inv;
  if (inv) {
    prov["gamma"] = ww::rational_to_json(params.gamma());
    prov["gamma_regime"] = ww::to_string(ww::inverse_regime(params.gamma(), degree));
  }
  out.result["provenance"] = prov;
  if (coeffs) out.result["coefficients"] = coefficient_json(coeffs->first, coeffs->second);

  out.text = label + " = " + fmt_double(value) + "\n";
  if (coeffs) out.text += "exact form: " + coefficient_text(coeffs->first, coeffs->second, x) + "\n";
  out.text += "formula: " + formula + "\n";
  if (inv)
    out.text += "gamma: " + ww::to_string(params.gamma()) + " (" + prov["gamma_regime"].get<std::string>() + ")\n";
  out.csv = "statistic,value,formula,gamma,gamma_regime\n" + csv_quote(label) + "," + fmt_double(value) + "," +
            csv_quote(formula) + "," + (inv ? ww::to_string(params.gamma()) : std::string()) + "," +
            (inv ? prov["gamma_regime"].get<std::string>() : std::string()) + "\n";
  return out;
}

Output cmd_haar(const RunConfig& c) {
  if (!c.big_n) throw UsageError("haar: --N is required");
  const auto i = zero_based(c.i, "--i"), j = zero_based(c.j, "--j");
  const Rational v = ww::haar_moment(i, j, *c.big_n);
  const std::string label = ww::HaarDescriptor{i, j}.label();
  Output out;
  out.result["statistic"] = label;
  out.result["N"] = *c.big_n;
  out.result["value"] = ww::rational_to_json(v);
  out.result["numeric"] = ww::to_double(v);
  out.text = label + " = " + ww::to_string(v) + " (" + fmt_double(ww::to_double(v)) + ")\n";
  out.csv = "statistic,num,den\n" + csv_quote(label) + "," + ww::numerator(v).str() + "," + ww::denominator(v).str() + "\n";
  return out;
}

Output suite_output(const ww::SuiteReport& r) {
  Output out;
  Json checks = Json::array();
  out.csv = "name,pass,detail\n";
  for (const auto& ch : r.checks) {
    checks.push_back(Json{{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
    out.text += std::string(ch.pass ? "PASS " : "FAIL ") + ch.name + (ch.detail.empty() ? "" : "  [" + ch.detail + "]") + "\n";
    out.csv += csv_quote(ch.name) + "," + (ch.pass ? "true" : "false") + "," + csv_quote(ch.detail) + "\n";
  }
  out.result["suite"] = r.suite;
  out.result["pass"] = r.all_pass();
  out.result["check_count"] = r.checks.size();
  out.result["failures"] = r.failures();
  out.result["checks"] = checks;
  out.text += r.suite + ": " + std::to_string(r.checks.size() - r.failures()) + "/" + std::to_string(r.checks.size()) +
              " checks passed\n";
  out.exit_code = r.all_pass() ? kOk : kValidation;
  return out;
}

Output cmd_validate(const RunConfig& c) {
  if (c.action == "golden") return suite_output(ww::validate_golden(c.seed));
  if (c.action == "identities") return suite_output(ww::validate_identities(c.n.value_or(4), c.seed));
  if (c.action != "montecarlo") throw UsageError("validate: unknown suite '" + c.action + "'");

  const auto rep = ww::validate_montecarlo(c.samples, c.seed, c.threads);
  Output out;
  Json checks = Json::array();
  out.csv = "statistic,mean,std_error,target,zscore,count,rejected,pass\n";
  for (const auto& ch : rep.checks) {
    const auto& s = ch.stats;
    checks.push_back(Json{{"statistic", s.label}, {"mean", s.mean}, {"std_error", s.std_error}, {"target", s.target},
                          {"zscore", s.zscore}, {"count", s.count}, {"rejected", s.rejected}, {"pass", ch.pass}});
    char line[256];
    std::snprintf(line, sizeof line, "%s %-34s mean %.6g target %.6g z %+.3f\n", ch.pass ? "PASS" : "FAIL",
                  s.label.c_str(), s.mean, s.target, s.zscore);
    out.text += line;
    out.csv += csv_quote(s.label) + "," + fmt_double(s.mean) + "," + fmt_double(s.std_error) + "," + fmt_double(s.target) +
               "," + fmt_double(s.zscore) + "," + std::to_string(s.count) + "," + std::to_string(s.rejected) + "," +
               (ch.pass ? "true" : "false") + "\n";
  }
  out.result["suite"] = "montecarlo";
  out.result["pass"] = rep.pass;
  out.result["check_count"] = rep.checks.size();
  out.result["max_abs_z"] = rep.max_abs_z;
  out.result["above_three"] = rep.above_three;
  out.result["checks"] = checks;
  char summary[160];
  std::snprintf(summary, sizeof summary, "montecarlo: %zu checks, max |z| %.3f, %zu above 3: %s\n", rep.checks.size(),
                rep.max_abs_z, rep.above_three, rep.pass ? "pass" : "fail");
  out.text += summary;
  out.exit_code = rep.pass ? kOk : kValidation;
  return out;
}

Output cmd_table(const RunConfig& c) {
  ww::TableCache cache(std::filesystem::path(c.cache_dir));
  Output out;
  if (c.action == "list") {
    Json arr = Json::array();
    out.csv = "path\n";
    for (const auto& p : cache.list()) {
      const auto rel = std::filesystem::relative(p, c.cache_dir).generic_string();
      arr.push_back(rel);
      out.text += rel + "\n";
      out.csv += csv_quote(rel) + "\n";
    }
    out.result["tables"] = arr;
    return out;
  }
  if (!c.n || !c.z) throw UsageError("table " + c.action + ": --n and --z are required");
  if (*c.n < 1 || *c.n > ww::kMaxZonalDegree)
    throw UsageError("table: need 1 <= n <= " + std::to_string(ww::kMaxZonalDegree));
  const Rational z = ww::parse_rational(*c.z);
  bool hit = false;
  const ww::WeingartenTable t = cache.get(*c.n, z, &hit);
  const std::string rel = ww::table_relative_path(*c.n, z).generic_string();
  if (c.action == "build") {
    out.result["path"] = rel;
    out.result["cache_hit"] = hit;
    out.text = rel + (hit ? " (cached)\n" : " (built)\n");
    out.csv = "path,cache_hit\n" + csv_quote(rel) + "," + (hit ? "true" : "false") + "\n";
    return out;
  }
  if (c.action != "show") throw UsageError("table: unknown action '" + c.action + "'");
  out.result["table"] = ww::to_json(t);
  std::vector<std::pair<Partition, Rational>> rows(t.entries.begin(), t.entries.end());
  Output rendered;
  append_partition_table(rendered, rows, "entries");
  out.text = rendered.text;
  out.csv = rendered.csv;
  return out;
}

Output execute(const RunConfig& c) {
  if (c.format != "text" && c.format != "json" && c.format != "csv") throw UsageError("unknown format '" + c.format + "'");
  if (c.command == "wg") return cmd_wg(c);
  if (c.command == "moment") return cmd_moment(c);
  if (c.command == "haar") return cmd_haar(c);
  if (c.command == "validate") return cmd_validate(c);
  if (c.command == "table") return cmd_table(c);
  throw UsageError("unknown command '" + c.command + "'");
}

void emit(const RunConfig& c, const Output& out, const std::string& path) {
  std::string body;
  if (c.format == "json") {
    Json report;
    report["config"] = to_json(c);
    report["result"] = out.result;
    body = report.dump(2) + "\n";
  } else {
    body = c.format == "csv" ? out.csv : out.text;
  }
  if (path.empty()) {
    std::cout << body << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Wishart and inverse-Wishart moments via alpha-hafnians and orthogonal Weingarten functions.\n"
               "Convention: E[W] = beta sigma; W_d(p, Sigma) in the textbook convention is p = 2 beta, Sigma = sigma/2.\n"
               "Matrix indices on the command line are 1-based.",
               "ww"};
  app.set_version_flag("--version", ww::kVersion);
  app.require_subcommand(0, 1);

  RunConfig c;
  std::string out_path, replay, sigma_path, cache_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", out_path, "write the output to FILE instead of stdout");
  app.add_option("--cache-dir", cache_dir, "Weingarten table cache (default: $WW_CACHE_DIR or .ww_cache)");
  app.add_option("--seed", seed, "random seed (default 42)");
  app.add_option("--threads", c.threads, "worker threads for sampling (0: all cores)");
  app.add_option("--replay", replay, "re-run the configuration stored in a JSON report");

  auto* wg = app.add_subcommand("wg", "tabulate Wg(rho; z), ~Wg(rho; gamma) or the truncated Wg(rho; N)");
  wg->add_option("--n", c.n, "degree n (1..5)");
  wg->add_option("--z", c.z, "evaluation point z (p/q or decimal)");
  wg->add_option("--gamma", c.gamma, "gamma for ~Wg (with --tilde)");
  wg->add_flag("--tilde", c.tilde, "evaluate ~Wg(rho; gamma)");
  wg->add_option("--truncate", c.truncate, "truncated Wg at integer N");

  auto* moment = app.add_subcommand("moment", "moments of W or W^-1");
  moment->add_option("--beta", c.beta, "shape parameter beta (p/q or decimal)");
  moment->add_option("--d", c.d, "dimension; identity sigma when --sigma is absent");
  moment->add_option("--sigma", sigma_path, "sigma as CSV (d rows) or a JSON matrix");
  moment->add_flag("--inverse", c.inverse, "moments of W^-1");
  moment->add_option("--entries", c.entries, "1-based indices k1,k2,...: E[W_k1k2 W_k3k4 ...]")->delimiter(',');
  moment->add_option("--trace-power", c.trace_power, "E[(tr W)^n]");
  moment->add_option("--power-sum", c.power_sum, "partition mu: E[prod tr(W^mu_i)]")->delimiter(',');
  moment->add_option("--invariant", c.invariant, "partition lambda: E[Z_lambda(W)]")->delimiter(',');

  auto* haar = app.add_subcommand("haar", "exact moments of Haar orthogonal matrices");
  haar->add_option("--i", c.i, "1-based row indices")->delimiter(',');
  haar->add_option("--j", c.j, "1-based column indices")->delimiter(',');
  haar->add_option("--N", c.big_n, "matrix size N");

  auto* validate = app.add_subcommand("validate", "run a self-check suite");
  validate->add_option("suite", c.action, "golden | identities | montecarlo")
      ->required()
      ->check(CLI::IsMember({"golden", "identities", "montecarlo"}));
  validate->add_option("--n", c.n, "largest degree for the identity suite (1..4)");
  validate->add_option("--samples", samples, "Monte Carlo sample count (default 1000000)");

  auto* table = app.add_subcommand("table", "persistent Weingarten tables");
  table->require_subcommand(1);
  auto* tbuild = table->add_subcommand("build", "compute and store Wg(.; z) for degree n");
  auto* tlist = table->add_subcommand("list", "list stored tables");
  auto* tshow = table->add_subcommand("show", "print a table, building it on a miss");
  for (auto* s : {tbuild, tshow}) {
    s->add_option("--n", c.n, "degree n (1..5)")->required();
    s->add_option("--z", c.z, "evaluation point z")->required();
  }

  for (auto* s : {wg, moment, haar, validate, table, tbuild, tlist, tshow}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const std::string format_flag = c.format;
  try {
    if (!replay.empty()) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(read_file(replay));
      } catch (const nlohmann::json::exception& e) {
        throw InputError(replay + ": " + e.what());
      }
      c = config_from_json(j.contains("config") ? j["config"] : j);
      if (app.count("--format")) c.format = format_flag;
    } else {
      if (app.got_subcommand(wg)) c.command = "wg";
      else if (app.got_subcommand(moment)) c.command = "moment";
      else if (app.got_subcommand(haar)) c.command = "haar";
      else if (app.got_subcommand(validate)) c.command = "validate";
      else if (app.got_subcommand(table)) {
        c.command = "table";
        c.action = tbuild->parsed() ? "build" : tlist->parsed() ? "list" : "show";
      } else {
        std::cerr << app.help();
        return kUsage;
      }
      if (seed) c.seed = *seed;
      if (samples) c.samples = *samples;
      if (!sigma_path.empty()) {
        c.sigma_source = sigma_path;
        c.sigma = load_sigma(sigma_path);
      }
      c.cache_dir = cache_dir.empty() ? ww::default_cache_dir().string() : cache_dir;
    }
    const Output out = execute(c);
    emit(c, out, out_path);
    return out.exit_code;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const ww::PoleError& e) {
    std::cerr << "pole at lambda = " << ww::to_string(Partition(e.lambda())) << ": " << e.what() << "\n";
    return kDomain;
  } catch (const ww::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const ww::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ww::SizeLimitError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
