// Copyright 2026 The qmem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmem/config.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "qmem/errors.hpp"

namespace qmem {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void only_keys(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ConfigError(where.empty() ? "(root)" : where, "must be an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.contains(k)) throw ConfigError(join(where, k), "unknown key");
  }
}

double number(const json& obj, const std::string& where, const std::string& key) {
  const std::string path = join(where, key);
  if (!obj.contains(key)) throw ConfigError(path, "is required");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
  return d;
}

double number_or(const json& obj, const std::string& where, const std::string& key, double fallback) {
  return obj.contains(key) ? number(obj, where, key) : fallback;
}

double non_negative(const json& obj, const std::string& where, const std::string& key) {
  const double v = number(obj, where, key);
  if (v < 0.0) throw ConfigError(join(where, key), "must be non-negative");
  return v;
}

double positive(const json& obj, const std::string& where, const std::string& key) {
  const double v = number(obj, where, key);
  if (!(v > 0.0)) throw ConfigError(join(where, key), "must be positive");
  return v;
}

long integer(const json& v, const std::string& path, long lo, long hi) {
  if (!v.is_number_integer()) throw ConfigError(path, "must be an integer");
  const long x = v.get<long>();
  if (x < lo || x > hi) {
    throw ConfigError(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return x;
}

cplx amplitude(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(path, "must be a number or a [re, im] pair");
}

TruncationSpec truncation(const json& v, const std::string& where) {
  only_keys(v, where, {"a1", "b1", "a2", "b2"});
  TruncationSpec t;
  int* fields[] = {&t.a1, &t.b1, &t.a2, &t.b2};
  const char* names[] = {"a1", "b1", "a2", "b2"};
  for (int k = 0; k < 4; ++k) {
    if (v.contains(names[k])) *fields[k] = static_cast<int>(integer(v.at(names[k]), join(where, names[k]), 2, 64));
  }
  if (t.total_dim() > kMaxTotalDim) {
    throw ConfigError(where, "total dimension " + std::to_string(t.total_dim()) + " exceeds " +
                                 std::to_string(kMaxTotalDim));
  }
  return t;
}

std::vector<double> axis(const json& v, const std::string& path) {
  std::vector<double> out;
  if (v.is_array()) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number()) throw ConfigError(path + "[" + std::to_string(k) + "]", "must be a number");
      out.push_back(v[k].get<double>());
    }
  } else if (v.is_object()) {
    only_keys(v, path, {"min", "max", "points", "spacing"});
    const double lo = number(v, path, "min");
    const double hi = number(v, path, "max");
    if (!v.contains("points")) throw ConfigError(join(path, "points"), "is required");
    const auto n = static_cast<std::size_t>(integer(v.at("points"), join(path, "points"), 2, 10000));
    const std::string spacing = v.value("spacing", "log");
    if (spacing == "log") {
      if (!(lo > 0.0 && hi > lo)) throw ConfigError(path, "log spacing needs 0 < min < max");
      out = log_space(lo, hi, n);
    } else if (spacing == "linear") {
      if (!(hi > lo)) throw ConfigError(path, "needs min < max");
      for (std::size_t k = 0; k < n; ++k) out.push_back(lo + (hi - lo) * static_cast<double>(k) / (n - 1));
    } else {
      throw ConfigError(join(path, "spacing"), "must be \"log\" or \"linear\"");
    }
  } else {
    throw ConfigError(path, "must be an array or a {min, max, points} object");
  }
  for (std::size_t k = 1; k < out.size(); ++k) {
    if (!(out[k] > out[k - 1])) throw ConfigError(path, "must be strictly increasing");
  }
  return out;
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("(root)", std::string("invalid JSON: ") + e.what());
  }
  only_keys(doc, "", {"schema_version", "system", "convention", "controls", "midpoint", "input", "truncation",
                      "grid", "sweep", "output_dir", "threads", "description"});

  RunConfig c;
  c.canonical = doc.dump();

  if (!doc.contains("schema_version")) throw ConfigError("schema_version", "is required");
  if (integer(doc.at("schema_version"), "schema_version", 1, 1000) != kSchemaVersion) {
    throw ConfigError("schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  if (doc.contains("description") && !doc.at("description").is_string()) {
    throw ConfigError("description", "must be a string");
  }

  if (!doc.contains("system")) throw ConfigError("system", "is required");
  const json& sys = doc.at("system");
  only_keys(sys, "system",
            {"kappa_ex1_ghz", "kappa_ex2_ghz", "kappa_i_ghz", "gamma_i_ghz", "kappa_i2_ghz", "gamma_i2_ghz"});
  const double kex1 = positive(sys, "system", "kappa_ex1_ghz");
  const double kex2 = positive(sys, "system", "kappa_ex2_ghz");
  const double ki = non_negative(sys, "system", "kappa_i_ghz");
  const double gi = sys.contains("gamma_i_ghz") ? non_negative(sys, "system", "gamma_i_ghz") : 0.0;
  const double ki2 = sys.contains("kappa_i2_ghz") ? non_negative(sys, "system", "kappa_i2_ghz") : ki;
  const double gi2 = sys.contains("gamma_i2_ghz") ? non_negative(sys, "system", "gamma_i2_ghz") : gi;
  c.params.block1 = {ghz_to_rate(kex1), ghz_to_rate(ki), ghz_to_rate(gi)};
  c.params.block2 = {ghz_to_rate(kex2), ghz_to_rate(ki2), ghz_to_rate(gi2)};

  if (doc.contains("convention")) {
    const json& v = doc.at("convention");
    if (!v.is_string()) throw ConfigError("convention", "must be \"printed\" or \"flipped\"");
    try {
      c.params.convention = parse_convention(v.get<std::string>());
    } catch (const InvalidParameter&) {
      throw ConfigError("convention", "must be \"printed\" or \"flipped\"");
    }
  }

  if (doc.contains("controls")) {
    const json& v = doc.at("controls");
    only_keys(v, "controls", {"g1_0", "g2_0"});
    c.g1_0 = number_or(v, "controls", "g1_0", c.g1_0);
    c.g2_0 = number_or(v, "controls", "g2_0", c.g2_0);
    if (c.g1_0 == 0.0) throw ConfigError("controls.g1_0", "must be nonzero");
    if (c.g2_0 == 0.0) throw ConfigError("controls.g2_0", "must be nonzero");
  }

  if (doc.contains("midpoint")) {
    const json& v = doc.at("midpoint");
    if (v.is_string()) {
      if (v.get<std::string>() != "optimize") throw ConfigError("midpoint", "must be \"optimize\" or an object");
    } else {
      only_keys(v, "midpoint", {"alpha1", "alpha2", "beta"});
      Coefficients m{number(v, "midpoint", "alpha1"), number(v, "midpoint", "alpha2"),
                     number(v, "midpoint", "beta")};
      if (m.norm() > 1.0 + 1e-9) throw ConfigError("midpoint", "alpha1^2 + alpha2^2 + beta^2 exceeds 1");
      c.midpoint = m;
    }
  }

  if (doc.contains("input")) {
    const json& v = doc.at("input");
    only_keys(v, "input", {"c_g", "c_e"});
    if (!v.contains("c_g")) throw ConfigError("input.c_g", "is required");
    if (!v.contains("c_e")) throw ConfigError("input.c_e", "is required");
    c.input = {amplitude(v.at("c_g"), "input.c_g"), amplitude(v.at("c_e"), "input.c_e")};
    const double n = std::norm(c.input.c_g) + std::norm(c.input.c_e);
    if (std::abs(n - 1.0) > 1e-9) throw ConfigError("input", "|c_g|^2 + |c_e|^2 must equal 1");
    // Remove round-off left by decimal transcription of 1/sqrt(2) and similar.
    c.input.c_g /= std::sqrt(n);
    c.input.c_e /= std::sqrt(n);
  }

  if (doc.contains("truncation")) c.truncation = truncation(doc.at("truncation"), "truncation");

  if (doc.contains("grid")) {
    const json& v = doc.at("grid");
    only_keys(v, "grid",
              {"window_tol", "window_cap", "profile_step_ns", "oracle_stride", "output_stride", "check_stride"});
    if (v.contains("window_tol")) c.grid.window.tol = positive(v, "grid", "window_tol");
    if (v.contains("window_cap")) c.grid.window.cap = positive(v, "grid", "window_cap");
    if (v.contains("profile_step_ns")) c.grid.profile_step = positive(v, "grid", "profile_step_ns");
    if (v.contains("oracle_stride")) {
      c.grid.oracle_stride = static_cast<int>(integer(v.at("oracle_stride"), "grid.oracle_stride", 2, 1000));
      if (c.grid.oracle_stride % 2 != 0) throw ConfigError("grid.oracle_stride", "must be even");
    }
    if (v.contains("output_stride")) {
      c.output_stride = static_cast<std::size_t>(integer(v.at("output_stride"), "grid.output_stride", 1, 1000000));
    }
    if (v.contains("check_stride")) {
      c.check_stride = static_cast<std::size_t>(integer(v.at("check_stride"), "grid.check_stride", 1, 1000000));
    }
  }

  if (doc.contains("sweep")) {
    const json& v = doc.at("sweep");
    only_keys(v, "sweep", {"ratios", "grid1", "grid2", "g_scale", "oracle_stride", "oracle_truncation"});
    if (v.contains("ratios")) {
      c.sweep.ratios = axis(v.at("ratios"), "sweep.ratios");
      for (double r : c.sweep.ratios) {
        if (r < 0.0) throw ConfigError("sweep.ratios", "must be non-negative");
      }
    }
    if (v.contains("grid1")) c.sweep.grid1 = axis(v.at("grid1"), "sweep.grid1");
    if (v.contains("grid2")) c.sweep.grid2 = axis(v.at("grid2"), "sweep.grid2");
    for (const auto* g : {&c.sweep.grid1, &c.sweep.grid2}) {
      for (double x : *g) {
        if (!(x > 0.0)) throw ConfigError(g == &c.sweep.grid1 ? "sweep.grid1" : "sweep.grid2", "must be positive");
      }
    }
    if (v.contains("g_scale")) c.sweep.g_scale = positive(v, "sweep", "g_scale");
    if (v.contains("oracle_stride")) {
      c.sweep.oracle_stride = static_cast<std::size_t>(integer(v.at("oracle_stride"), "sweep.oracle_stride", 0, 1000000));
    }
    if (v.contains("oracle_truncation")) {
      c.sweep.oracle_truncation = truncation(v.at("oracle_truncation"), "sweep.oracle_truncation");
    }
  }
  if (c.sweep.ratios.empty()) c.sweep.ratios = log_space(1e-4, 0.2, 25);
  if (c.sweep.grid1.empty()) c.sweep.grid1 = log_space(5.0, 500.0, 15);
  if (c.sweep.grid2.empty()) c.sweep.grid2 = log_space(5.0, 500.0, 15);

  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) throw ConfigError("output_dir", "must be a string");
    c.output_dir = doc.at("output_dir").get<std::string>();
  }
  if (doc.contains("threads")) c.threads = static_cast<unsigned>(integer(doc.at("threads"), "threads", 1, 1024));

  try {
    c.params.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError("system", e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const IoError& e) {
    throw ConfigError("--config", e.what());
  }
  return parse_config(text);
}

}  // namespace qmem
