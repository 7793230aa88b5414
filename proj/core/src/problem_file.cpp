// Copyright 2026 The cpa-tlbo Authors.
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

#include "cpa/problem_file.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cpa/report_io.hpp"

namespace cpa {
namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ProblemFileError(fmt::format("{}: {}", field, msg), field);
}

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void allow_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> keys) {
  if (!obj.is_object())
    fail(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) fail(join(path, key), "unknown key");
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

long long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    fail(path, "expected an integer");
  }
  return v.get<long long>();
}

std::size_t count(const json& v, const std::string& path, long long min) {
  const long long n = integer(v, path);
  if (n < min) fail(path, fmt::format("must be >= {}", min));
  return static_cast<std::size_t>(n);
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty())
    fail(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], fmt::format("{}[{}]", path, i)));
  }
  return out;
}

// Flat coefficients, or a list of factors multiplied together.
std::vector<double> polynomial(const json& v, const std::string& path) {
  if (v.is_array() && !v.empty() && v.front().is_array()) {
    std::vector<double> out{1.0};
    for (std::size_t i = 0; i < v.size(); ++i) {
      out = poly_mul(out, numbers(v[i], fmt::format("{}[{}]", path, i)));
    }
    return out;
  }
  return numbers(v, path);
}

TransferFunction transfer_function(const json& root, const char* key) {
  const json* v = find(root, key);
  if (!v) fail(key, "missing section");
  allow_keys(*v, key, {"num", "den", "delay"});
  const std::string path = key;
  const json* num = find(*v, "num");
  const json* den = find(*v, "den");
  if (!num) fail(join(path, "num"), "missing field");
  if (!den) fail(join(path, "den"), "missing field");
  int delay = 0;
  if (const json* d = find(*v, "delay")) {
    delay = static_cast<int>(count(*d, join(path, "delay"), 0));
  }
  auto b = polynomial(*num, join(path, "num"));
  auto a = polynomial(*den, join(path, "den"));
  if (a.front() == 0.0)
    fail(join(path, "den"), "leading coefficient must be non-zero");
  return TransferFunction(std::move(b), std::move(a), delay);
}

double variance(const json& noise, const char* key, const std::string& path) {
  const json* v = find(noise, key);
  if (!v) fail(join(path, key), "missing field");
  const double x = number(*v, join(path, key));
  if (x < 0.0) fail(join(path, key), "variance must be >= 0");
  return x;
}

void parse_tlbo(const json& v, TlboConfig& cfg) {
  const std::string path = "tlbo";
  allow_keys(v, path,
             {"np", "bounds", "tol", "window", "max_iters", "seed",
              "per_dimension_rand"});
  if (const json* x = find(v, "np")) cfg.population = count(*x, "tlbo.np", 2);
  if (const json* x = find(v, "tol")) {
    cfg.termination_tol = number(*x, "tlbo.tol");
    if (!(cfg.termination_tol > 0.0)) fail("tlbo.tol", "must be > 0");
  }
  if (const json* x = find(v, "window")) {
    cfg.termination_window = count(*x, "tlbo.window", 1);
  }
  if (const json* x = find(v, "max_iters")) {
    cfg.max_iterations = count(*x, "tlbo.max_iters", 2);
  }
  if (const json* x = find(v, "seed")) {
    cfg.seed = static_cast<std::uint64_t>(count(*x, "tlbo.seed", 0));
  }
  if (const json* x = find(v, "per_dimension_rand")) {
    if (!x->is_boolean())
      fail("tlbo.per_dimension_rand", "expected true or false");
    cfg.per_dimension_rand = x->get<bool>();
  }
  if (const json* x = find(v, "bounds")) {
    const std::string bp = "tlbo.bounds";
    if (x->is_array()) {
      const auto lohi = numbers(*x, bp);
      if (lohi.size() != 2) fail(bp, "expected [lower, upper]");
      cfg.lower.assign(3, lohi[0]);
      cfg.upper.assign(3, lohi[1]);
    } else {
      allow_keys(*x, bp, {"lower", "upper"});
      const json* lo = find(*x, "lower");
      const json* hi = find(*x, "upper");
      if (!lo) fail(bp + ".lower", "missing field");
      if (!hi) fail(bp + ".upper", "missing field");
      cfg.lower = numbers(*lo, bp + ".lower");
      cfg.upper = numbers(*hi, bp + ".upper");
      if (cfg.lower.size() != 3 || cfg.upper.size() != 3) {
        fail(bp, "lower and upper need one entry per controller parameter (3)");
      }
    }
    for (std::size_t j = 0; j < cfg.lower.size(); ++j) {
      if (!(cfg.lower[j] < cfg.upper[j])) fail(bp, "lower must be below upper");
    }
  }
}

void parse_tuning(const json& v, TuningSettings& t) {
  allow_keys(v, "tuning",
             {"rho", "rho_sweep", "horizon", "sample_time", "setpoint",
              "restarts", "multistage"});
  const auto weight = [](const json& x, const std::string& path) {
    const double rho = number(x, path);
    if (rho < 0.0) fail(path, "rho must be >= 0");
    return rho;
  };
  if (const json* x = find(v, "rho")) t.rho = weight(*x, "tuning.rho");
  if (const json* x = find(v, "rho_sweep")) {
    if (!x->is_array() || x->empty()) {
      fail("tuning.rho_sweep", "expected a non-empty array of numbers");
    }
    for (std::size_t i = 0; i < x->size(); ++i) {
      t.rho_sweep.push_back(
          weight((*x)[i], fmt::format("tuning.rho_sweep[{}]", i)));
    }
  }
  if (const json* x = find(v, "horizon")) {
    t.horizon = static_cast<int>(count(*x, "tuning.horizon", 1));
  }
  if (const json* x = find(v, "sample_time")) {
    t.sample_time = number(*x, "tuning.sample_time");
    if (!(t.sample_time > 0.0)) fail("tuning.sample_time", "must be > 0");
  }
  if (const json* x = find(v, "setpoint")) {
    t.setpoint = number(*x, "tuning.setpoint");
    if (t.setpoint == 0.0) fail("tuning.setpoint", "must be non-zero");
  }
  if (const json* x = find(v, "restarts")) {
    t.restarts = count(*x, "tuning.restarts", 1);
  }
  if (const json* x = find(v, "multistage")) {
    if (!x->is_array() || x->empty()) {
      fail("tuning.multistage", "expected a non-empty array of stages");
    }
    for (std::size_t i = 0; i < x->size(); ++i) {
      const std::string sp = fmt::format("tuning.multistage[{}]", i);
      allow_keys((*x)[i], sp, {"params", "start"});
      const json* p = find((*x)[i], "params");
      const json* s = find((*x)[i], "start");
      if (!p) fail(sp + ".params", "missing field");
      if (!s) fail(sp + ".start", "missing field");
      const auto k = numbers(*p, sp + ".params");
      if (k.size() != 3)
        fail(sp + ".params", "expected 3 controller parameters");
      Stage stage{{k[0], k[1], k[2]},
                  static_cast<int>(count(*s, sp + ".start", 0))};
      if (i == 0 && stage.start != 0)
        fail(sp + ".start", "first stage must start at 0");
      if (i > 0 && stage.start < t.multistage.back().start) {
        fail(sp + ".start", "stage starts must not decrease");
      }
      t.multistage.push_back(stage);
    }
  }
}

void parse_mc(const json& v, McConfig& mc) {
  allow_keys(v, "mc", {"samples", "burn_in", "mode", "seed", "batches"});
  if (const json* x = find(v, "samples"))
    mc.samples = count(*x, "mc.samples", 1);
  if (const json* x = find(v, "burn_in"))
    mc.burn_in = count(*x, "mc.burn_in", 0);
  if (const json* x = find(v, "seed")) {
    mc.seed = static_cast<std::uint64_t>(count(*x, "mc.seed", 0));
  }
  if (const json* x = find(v, "batches"))
    mc.batches = count(*x, "mc.batches", 2);
  if (const json* x = find(v, "mode")) {
    if (!x->is_string()) fail("mc.mode", "expected a string");
    try {
      mc.mode = shock_correlation_from_string(x->get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail("mc.mode", e.what());
    }
  }
  if (mc.resolved_burn_in() >= mc.samples) {
    fail("mc.burn_in", "must be smaller than mc.samples");
  }
}

// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> locate(const std::string& text,
                                           std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::vector<double> ProblemFile::weights() const {
  if (!tuning.rho_sweep.empty()) return tuning.rho_sweep;
  return {tuning.rho};
}

TuningProblem ProblemFile::tuning_problem(double rho) const {
  const int horizon =
      tuning.horizon > 0 ? tuning.horizon : (is_cascade() ? 300 : 200);
  TuningProblem p{loop, rho, horizon, tuning.sample_time, tuning.setpoint};
  p.validate();
  return p;
}

ProblemFile parse_problem(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // The reported byte is one past the offending character.
    const auto [line, col] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ProblemFileError(fmt::format("line {}, column {}: invalid JSON ({})",
                                       line, col, e.what()),
                           "", line, col);
  }
  allow_keys(
      root, "",
      {"name", "process", "disturbance", "outer", "inner", "outer_disturbance",
       "inner_disturbance", "noise", "assessment", "tuning", "tlbo", "mc"});

  std::string name;
  int p_multiplier = 8;
  if (const json* x = find(root, "name")) {
    if (!x->is_string()) fail("name", "expected a string");
    name = x->get<std::string>();
  }
  if (const json* x = find(root, "assessment")) {
    allow_keys(*x, "assessment", {"p_multiplier"});
    if (const json* m = find(*x, "p_multiplier")) {
      const long long pm = integer(*m, "assessment.p_multiplier");
      if (pm < 1) {
        fail("assessment.p_multiplier",
             "must be >= 1 (truncation p = p_multiplier * delay must not be "
             "shorter than the dead time)");
      }
      p_multiplier = static_cast<int>(pm);
    }
  }

  const bool single = root.contains("process") || root.contains("disturbance");
  const bool cascade = root.contains("outer") || root.contains("inner") ||
                       root.contains("outer_disturbance") ||
                       root.contains("inner_disturbance");
  if (single == cascade) {
    fail("<root>",
         "give either process/disturbance (single loop) or "
         "outer/inner/outer_disturbance/inner_disturbance (cascade)");
  }

  const json* noise = find(root, "noise");
  std::optional<LoopModel> loop;
  try {
    if (single) {
      auto process = transfer_function(root, "process");
      auto dist = transfer_function(root, "disturbance");
      if (process.delay() < 1) {
        fail("process.delay",
             "must be >= 1 (dead time of at least one sample)");
      }
      double s2 = 1.0;
      if (noise) {
        allow_keys(*noise, "noise", {"variance"});
        s2 = variance(*noise, "variance", "noise");
      }
      loop = SingleLoopProblem::make(std::move(process), std::move(dist), s2,
                                     p_multiplier);
    } else {
      auto g1 = transfer_function(root, "outer");
      auto g2 = transfer_function(root, "inner");
      auto d1 = transfer_function(root, "outer_disturbance");
      auto d2 = transfer_function(root, "inner_disturbance");
      if (g1.delay() < 1) fail("outer.delay", "must be >= 1");
      if (g2.delay() < 1) fail("inner.delay", "must be >= 1");
      double s1 = 1.0, s2 = 1.0;
      if (noise) {
        allow_keys(*noise, "noise", {"outer_variance", "inner_variance"});
        s1 = variance(*noise, "outer_variance", "noise");
        s2 = variance(*noise, "inner_variance", "noise");
      }
      loop = CascadeProblem::make(std::move(g1), std::move(g2), std::move(d1),
                                  std::move(d2), s1, s2, p_multiplier);
    }
  } catch (const ProblemFileError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail("<model>", e.what());
  }

  ProblemFile file{.name = std::move(name),
                   .loop = std::move(*loop),
                   .noise_defaulted = noise == nullptr,
                   .p_multiplier = p_multiplier,
                   .tuning = {},
                   .tlbo = {},
                   .mc = {}};

  if (const json* x = find(root, "tuning")) parse_tuning(*x, file.tuning);
  if (const json* x = find(root, "tlbo")) parse_tlbo(*x, file.tlbo);
  if (const json* x = find(root, "mc")) parse_mc(*x, file.mc);
  return file;
}

ProblemFile load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ProblemFileError(
        fmt::format("{}: cannot open problem file", path.string()), "");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_problem(buf.str());
  } catch (const ProblemFileError& e) {
    throw ProblemFileError(fmt::format("{}: {}", path.string(), e.what()),
                           e.field(), e.line(), e.column());
  }
}

nlohmann::ordered_json to_json(const ProblemFile& file) {
  nlohmann::ordered_json j;
  j["name"] = file.name;
  j["model"] = to_json(file.loop);
  j["noise_defaulted"] = file.noise_defaulted;
  j["assessment"] = {{"p_multiplier", file.p_multiplier}};
  const auto& t = file.tuning;
  nlohmann::ordered_json tuning;
  tuning["rho"] = t.rho;
  tuning["rho_sweep"] = t.rho_sweep;
  tuning["horizon"] =
      t.horizon > 0 ? t.horizon : (file.is_cascade() ? 300 : 200);
  tuning["sample_time"] = t.sample_time;
  tuning["setpoint"] = t.setpoint;
  tuning["restarts"] = t.restarts;
  tuning["multistage"] = nlohmann::ordered_json::array();
  for (const auto& s : t.multistage) {
    tuning["multistage"].push_back({{"params", s.params}, {"start", s.start}});
  }
  j["tuning"] = tuning;
  j["tlbo"] = to_json(file.tlbo);
  j["mc"] = to_json(file.mc);
  return j;
}

}  // namespace cpa
