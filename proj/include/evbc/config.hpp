#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evbc/analytic.hpp"
#include "evbc/assemble.hpp"
#include "evbc/eigen.hpp"
#include "evbc/profile.hpp"

namespace evbc {

inline constexpr const char* kToolVersion = "evbc 0.1.0";

// ---------------------------------------------------------------------------
// Number <-> text, shared by config and CSV so output is deterministic and
// round-trips exactly.  Infinities serialize as the literal tokens
// "inf"/"-inf", NaN as "nan".
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& context) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw ConfigError(context, "expected a number, got '" + std::string(text) + "'");
  return v;
}

inline long parse_long(std::string_view text, const std::string& context) {
  long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ConfigError(context, "expected an integer, got '" + std::string(text) + "'");
  return v;
}

// ---------------------------------------------------------------------------
// RunConfig
// ---------------------------------------------------------------------------

enum class ProfileKind { affine, exp_blend, tanh_blend, tabulated, step };

// Family + parameters as written in the config; `constant` parses as affine
// with zero slope.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::affine;
  AffineParams affine{0.0, 0.0};
  ExpBlendParams exp_blend{0.0, 0.0, 0.0};
  TanhBlendParams tanh_blend{0.0, 0.0, 0.0};
  TabulatedParams tabulated{};
  std::vector<double> step_breakpoints;
  std::vector<double> step_values;

  bool operator==(const ProfileSpec&) const = default;
};

enum class KSpacing { linear, log };

struct KRange {
  double min = 0.0;
  double max = 0.0;
  int steps = 0;
  KSpacing spacing = KSpacing::linear;

  bool operator==(const KRange&) const = default;
};

struct RunConfig {
  double a = -1.0;
  double m_L = 1.0;
  double m_R = 1.0;
  ProfileSpec profile;
  std::optional<double> k_value;
  std::optional<KRange> k_range;
  std::optional<int> M;
  std::vector<int> M_list;
  std::vector<int> N_list;
  InterfaceModel interface_model = InterfaceModel::smooth;
  double tol_sing = kDefaultSingTol;
  double tol_jump = kDefaultJumpTol;
  double tol_compat = kDefaultCompatTol;
  double tol_qr = kDefaultQrTol;
  int qr_max_iter = kDefaultQrMaxIter;
  int refine_track = 3;
  std::string output_path;

  bool operator==(const RunConfig&) const = default;

  DomainSpec domain() const { return DomainSpec(a, m_L, m_R); }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(std::string_view(s).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<double> parse_double_list(const std::string& text,
                                             const std::string& context) {
  std::vector<double> out;
  for (const auto& tok : split(text, ','))
    out.push_back(parse_double(tok, context));
  return out;
}

inline std::vector<int> parse_int_list(const std::string& text,
                                       const std::string& context) {
  std::vector<int> out;
  for (const auto& tok : split(text, ','))
    out.push_back(static_cast<int>(parse_long(tok, context)));
  return out;
}

inline std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace detail

// Builds the coefficient profile described by the config, validating it
// against the domain bounds.
inline Profile build_profile(const RunConfig& cfg) {
  const DomainSpec dom = cfg.domain();
  try {
    switch (cfg.profile.kind) {
      case ProfileKind::affine:
        return ContinuousProfile(dom, cfg.profile.affine);
      case ProfileKind::exp_blend:
        return ContinuousProfile(dom, cfg.profile.exp_blend);
      case ProfileKind::tanh_blend:
        return ContinuousProfile(dom, cfg.profile.tanh_blend);
      case ProfileKind::tabulated:
        return ContinuousProfile(dom, cfg.profile.tabulated);
      case ProfileKind::step:
        return StepProfile(cfg.profile.step_breakpoints, cfg.profile.step_values);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("profile", e.what());
  }
  throw ConfigError("profile.family", "unreachable");
}

// Parses a flat dotted-key document (key = value per line, '#' comments).
// Unknown keys are rejected; defaults are applied; the result is fully
// validated, including the profile bounds.
inline RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string::npos) line_end = text.size();
    std::string line = text.substr(line_start, line_end - line_start);
    line_start = line_end + 1;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, "expected 'key = value'");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (!kv.emplace(key, value).second)
      throw ConfigError(key, "duplicate key");
  }

  static const std::vector<std::string> known = {
      "domain.a",        "domain.m_L",         "domain.m_R",
      "profile.family",  "profile.intercept",  "profile.slope",
      "profile.value",   "profile.left_value", "profile.right_value",
      "profile.rate",    "profile.steepness",  "profile.samples",
      "profile.breakpoints", "profile.values",
      "k.value",         "k.min",              "k.max",
      "k.steps",         "k.spacing",
      "grid.M",          "grid.M_list",        "step.N_list",
      "model.interface",
      "tol.sing",        "tol.jump",           "tol.compat",
      "tol.qr",          "qr.max_iter",        "refine.track",
      "output.path"};
  for (const auto& [key, value] : kv) {
    (void)value;
    bool ok = false;
    for (const auto& k : known) ok = ok || (k == key);
    if (!ok) throw ConfigError(key, "unknown key");
  }

  const auto has = [&](const char* key) { return kv.count(key) != 0; };
  const auto require = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(key, "required key missing");
    return it->second;
  };
  const auto number = [&](const char* key) {
    return parse_double(require(key), key);
  };

  RunConfig cfg;
  cfg.a = number("domain.a");
  if (!(cfg.a < 0.0)) throw ConfigError("domain.a", "must be negative");
  cfg.m_L = number("domain.m_L");
  cfg.m_R = number("domain.m_R");
  if (!(cfg.m_L > 0.0)) throw ConfigError("domain.m_L", "must be positive");
  if (!(cfg.m_R > 0.0)) throw ConfigError("domain.m_R", "must be positive");

  const std::string family = require("profile.family");
  if (family == "affine") {
    cfg.profile.kind = ProfileKind::affine;
    cfg.profile.affine = {number("profile.intercept"), number("profile.slope")};
  } else if (family == "constant") {
    cfg.profile.kind = ProfileKind::affine;
    cfg.profile.affine = {number("profile.value"), 0.0};
  } else if (family == "exponential-blend") {
    cfg.profile.kind = ProfileKind::exp_blend;
    cfg.profile.exp_blend = {number("profile.left_value"),
                             number("profile.right_value"),
                             number("profile.rate")};
  } else if (family == "tanh-blend") {
    cfg.profile.kind = ProfileKind::tanh_blend;
    cfg.profile.tanh_blend = {number("profile.left_value"),
                              number("profile.right_value"),
                              number("profile.steepness")};
  } else if (family == "tabulated") {
    cfg.profile.kind = ProfileKind::tabulated;
    cfg.profile.tabulated.samples =
        detail::parse_double_list(require("profile.samples"), "profile.samples");
  } else if (family == "step") {
    cfg.profile.kind = ProfileKind::step;
    cfg.profile.step_breakpoints = detail::parse_double_list(
        require("profile.breakpoints"), "profile.breakpoints");
    cfg.profile.step_values =
        detail::parse_double_list(require("profile.values"), "profile.values");
  } else {
    throw ConfigError("profile.family", "unknown family '" + family + "'");
  }

  if (has("k.value")) {
    if (has("k.min") || has("k.max") || has("k.steps") || has("k.spacing"))
      throw ConfigError("k.value", "give either k.value or a k range, not both");
    cfg.k_value = number("k.value");
    if (!(*cfg.k_value >= 0.0)) throw ConfigError("k.value", "must be >= 0");
  } else if (has("k.min") || has("k.max") || has("k.steps") || has("k.spacing")) {
    KRange r;
    r.min = number("k.min");
    r.max = number("k.max");
    r.steps = static_cast<int>(parse_long(require("k.steps"), "k.steps"));
    if (has("k.spacing")) {
      const std::string& sp = kv.at("k.spacing");
      if (sp == "linear")
        r.spacing = KSpacing::linear;
      else if (sp == "log")
        r.spacing = KSpacing::log;
      else
        throw ConfigError("k.spacing", "must be 'linear' or 'log'");
    }
    if (!(r.min > 0.0)) throw ConfigError("k.min", "must be positive");
    if (!(r.max >= r.min)) throw ConfigError("k.max", "must be >= k.min");
    if (r.steps < 1) throw ConfigError("k.steps", "range must be non-empty");
    cfg.k_range = r;
  }

  if (has("grid.M")) {
    cfg.M = static_cast<int>(parse_long(kv.at("grid.M"), "grid.M"));
    if (*cfg.M < 2) throw ConfigError("grid.M", "must be >= 2");
  }
  if (has("grid.M_list")) {
    cfg.M_list = detail::parse_int_list(kv.at("grid.M_list"), "grid.M_list");
    if (cfg.M_list.empty()) throw ConfigError("grid.M_list", "must be non-empty");
    for (int m : cfg.M_list)
      if (m < 2) throw ConfigError("grid.M_list", "entries must be >= 2");
  }
  if (has("step.N_list")) {
    cfg.N_list = detail::parse_int_list(kv.at("step.N_list"), "step.N_list");
    if (cfg.N_list.empty()) throw ConfigError("step.N_list", "must be non-empty");
    for (int n : cfg.N_list)
      if (n < 1) throw ConfigError("step.N_list", "entries must be >= 1");
  }
  if (has("model.interface")) {
    const std::string& im = kv.at("model.interface");
    if (im == "smooth")
      cfg.interface_model = InterfaceModel::smooth;
    else if (im == "flux")
      cfg.interface_model = InterfaceModel::flux;
    else
      throw ConfigError("model.interface", "must be 'smooth' or 'flux'");
  }

  const auto positive_tol = [&](const char* key, double& slot) {
    if (!has(key)) return;
    slot = parse_double(kv.at(key), key);
    if (!(slot > 0.0)) throw ConfigError(key, "must be positive");
  };
  positive_tol("tol.sing", cfg.tol_sing);
  positive_tol("tol.jump", cfg.tol_jump);
  positive_tol("tol.compat", cfg.tol_compat);
  positive_tol("tol.qr", cfg.tol_qr);
  if (has("qr.max_iter")) {
    cfg.qr_max_iter = static_cast<int>(parse_long(kv.at("qr.max_iter"), "qr.max_iter"));
    if (cfg.qr_max_iter < 1) throw ConfigError("qr.max_iter", "must be >= 1");
  }
  if (has("refine.track")) {
    cfg.refine_track = static_cast<int>(parse_long(kv.at("refine.track"), "refine.track"));
    if (cfg.refine_track < 1) throw ConfigError("refine.track", "must be >= 1");
  }
  if (has("output.path")) cfg.output_path = kv.at("output.path");

  if (cfg.profile.kind == ProfileKind::step) {
    if (cfg.profile.step_breakpoints.empty() ||
        std::abs(cfg.profile.step_breakpoints.front() - cfg.a) >
            1e-12 * std::abs(cfg.a))
      throw ConfigError("profile.breakpoints", "must start at domain.a");
  }
  (void)build_profile(cfg);  // validates bounds and shape
  return cfg;
}

// Canonical text form; parse(serialize(cfg)) == cfg.
inline std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  const auto put = [&](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  put("domain.a", format_double(cfg.a));
  put("domain.m_L", format_double(cfg.m_L));
  put("domain.m_R", format_double(cfg.m_R));
  switch (cfg.profile.kind) {
    case ProfileKind::affine:
      put("profile.family", "affine");
      put("profile.intercept", format_double(cfg.profile.affine.intercept));
      put("profile.slope", format_double(cfg.profile.affine.slope));
      break;
    case ProfileKind::exp_blend:
      put("profile.family", "exponential-blend");
      put("profile.left_value", format_double(cfg.profile.exp_blend.left_value));
      put("profile.right_value", format_double(cfg.profile.exp_blend.right_value));
      put("profile.rate", format_double(cfg.profile.exp_blend.rate));
      break;
    case ProfileKind::tanh_blend:
      put("profile.family", "tanh-blend");
      put("profile.left_value", format_double(cfg.profile.tanh_blend.left_value));
      put("profile.right_value", format_double(cfg.profile.tanh_blend.right_value));
      put("profile.steepness", format_double(cfg.profile.tanh_blend.steepness));
      break;
    case ProfileKind::tabulated:
      put("profile.family", "tabulated");
      put("profile.samples", detail::join_doubles(cfg.profile.tabulated.samples));
      break;
    case ProfileKind::step:
      put("profile.family", "step");
      put("profile.breakpoints", detail::join_doubles(cfg.profile.step_breakpoints));
      put("profile.values", detail::join_doubles(cfg.profile.step_values));
      break;
  }
  if (cfg.k_value) put("k.value", format_double(*cfg.k_value));
  if (cfg.k_range) {
    put("k.min", format_double(cfg.k_range->min));
    put("k.max", format_double(cfg.k_range->max));
    put("k.steps", std::to_string(cfg.k_range->steps));
    put("k.spacing", cfg.k_range->spacing == KSpacing::linear ? "linear" : "log");
  }
  if (cfg.M) put("grid.M", std::to_string(*cfg.M));
  if (!cfg.M_list.empty()) {
    std::string list;
    for (std::size_t i = 0; i < cfg.M_list.size(); ++i) {
      if (i) list += ',';
      list += std::to_string(cfg.M_list[i]);
    }
    put("grid.M_list", list);
  }
  if (!cfg.N_list.empty()) {
    std::string list;
    for (std::size_t i = 0; i < cfg.N_list.size(); ++i) {
      if (i) list += ',';
      list += std::to_string(cfg.N_list[i]);
    }
    put("step.N_list", list);
  }
  put("model.interface",
      cfg.interface_model == InterfaceModel::smooth ? "smooth" : "flux");
  put("tol.sing", format_double(cfg.tol_sing));
  put("tol.jump", format_double(cfg.tol_jump));
  put("tol.compat", format_double(cfg.tol_compat));
  put("tol.qr", format_double(cfg.tol_qr));
  put("qr.max_iter", std::to_string(cfg.qr_max_iter));
  put("refine.track", std::to_string(cfg.refine_track));
  if (!cfg.output_path.empty()) put("output.path", cfg.output_path);
  return out;
}

// FNV-1a 64-bit hash of the canonical serialization, as fixed-width hex.
inline std::string config_hash(const RunConfig& cfg) {
  const std::string text = serialize_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace evbc
