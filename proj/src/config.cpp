#include "elbm/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "elbm/errors.hpp"
#include "elbm/material.hpp"

namespace elbm {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::BulkCompare: return "bulk-compare";
    case ExperimentKind::Oracle: return "oracle";
    case ExperimentKind::SpeedRatio: return "speed-ratio";
    case ExperimentKind::DampingScaling: return "damping-scaling";
    case ExperimentKind::StabilityMap: return "stability-map";
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::Reflection: return "reflection";
    case ExperimentKind::Rayleigh: return "rayleigh";
  }
  return "?";
}

namespace {

ExperimentKind parse_experiment(std::string_view s) {
  for (auto k : {ExperimentKind::Simulate, ExperimentKind::BulkCompare, ExperimentKind::Oracle,
                 ExperimentKind::SpeedRatio, ExperimentKind::DampingScaling,
                 ExperimentKind::StabilityMap, ExperimentKind::Convergence,
                 ExperimentKind::Reflection, ExperimentKind::Rayleigh})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown experiment '" + std::string(s) + "'");
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("'" + std::string(s) + "' is not a number");
  return v;
}

long to_long(std::string_view s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("'" + std::string(s) + "' is not an integer");
  return v;
}

int to_int(std::string_view s) { return static_cast<int>(to_long(s)); }

bool to_bool(std::string_view s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw std::invalid_argument("'" + std::string(s) + "' is not a boolean");
}

struct Entry {
  std::string value;
  int line;
};

using Setter = std::function<void(RunConfig&, std::string_view)>;

// Keys that only record that they were given; resolved after all keys apply.
struct Explicit {
  bool source_x = false, source_y = false, direction = false;
};

std::map<std::string, Setter> setters(Explicit& given) {
  std::map<std::string, Setter> s;
  s["run.experiment"] = [](RunConfig& c, std::string_view v) { c.experiment = parse_experiment(v); };
  s["run.steps"] = [](RunConfig& c, std::string_view v) { c.steps = to_long(v); };
  s["run.snapshots"] = [](RunConfig& c, std::string_view v) {
    c.snapshots.clear();
    for (auto item : split(v, ',')) c.snapshots.push_back(to_long(item));
  };
  s["run.stations"] = [](RunConfig& c, std::string_view v) {
    c.stations.clear();
    for (auto item : split(v, ',')) {
      const auto xy = split(item, ':');
      if (xy.size() != 2) throw std::invalid_argument("stations are written x:y");
      c.stations.push_back({to_int(xy[0]), to_int(xy[1])});
    }
  };
  s["run.output"] = [](RunConfig& c, std::string_view v) { c.output = std::string(v); };
  s["grid.nx"] = [](RunConfig& c, std::string_view v) { c.nx = to_int(v); };
  s["grid.ny"] = [](RunConfig& c, std::string_view v) { c.ny = to_int(v); };
  s["material.nu"] = [](RunConfig& c, std::string_view v) { c.nu = to_double(v); };
  s["material.tau"] = [](RunConfig& c, std::string_view v) { c.tau = to_double(v); };
  s["material.rho0"] = [](RunConfig& c, std::string_view v) { c.rho0 = to_double(v); };
  s["source.x"] = [&given](RunConfig& c, std::string_view v) {
    c.source.center_x = to_double(v);
    given.source_x = true;
  };
  s["source.y"] = [&given](RunConfig& c, std::string_view v) {
    c.source.center_y = to_double(v);
    given.source_y = true;
  };
  s["source.sigma"] = [](RunConfig& c, std::string_view v) { c.source.sigma = to_double(v); };
  s["source.direction"] = [&given](RunConfig& c, std::string_view v) {
    const auto d = split(v, ',');
    if (d.size() != 2) throw std::invalid_argument("direction is written dx, dy");
    c.source.dir_x = to_double(d[0]);
    c.source.dir_y = to_double(d[1]);
    given.direction = true;
  };
  s["source.amplitude"] = [](RunConfig& c, std::string_view v) { c.source.amplitude = to_double(v); };
  s["source.period"] = [](RunConfig& c, std::string_view v) { c.source.period = to_double(v); };
  s["source.t0"] = [](RunConfig& c, std::string_view v) { c.source.t0 = to_double(v); };
  for (auto [key, edge] : {std::pair{"left", Edge::Left}, std::pair{"right", Edge::Right},
                           std::pair{"bottom", Edge::Bottom}, std::pair{"top", Edge::Top}})
    s[std::string("boundary.") + key] = [edge](RunConfig& c, std::string_view v) {
      c.boundary.edge(edge).kind = parse_edge_kind(v);
    };
  auto all_edges = [](RunConfig& c, auto&& fn) {
    for (auto e : {Edge::Left, Edge::Right, Edge::Bottom, Edge::Top}) fn(c.boundary.edge(e));
  };
  s["boundary.thickness"] = [all_edges](RunConfig& c, std::string_view v) {
    const int t = to_int(v);
    all_edges(c, [t](EdgeSpec& e) { e.thickness = t; });
  };
  s["boundary.a_max"] = [all_edges](RunConfig& c, std::string_view v) {
    const double a = to_double(v);
    all_edges(c, [a](EdgeSpec& e) { e.a_max = a; });
  };
  s["boundary.profile"] = [all_edges](RunConfig& c, std::string_view v) {
    const double p = to_double(v);
    all_edges(c, [p](EdgeSpec& e) { e.profile = p; });
  };
  s["boundary.free_surface_extrapolation"] = [](RunConfig& c, std::string_view v) {
    if (v == "constant")
      c.boundary.free_surface.extrapolation = WallExtrapolation::Constant;
    else if (v == "linear")
      c.boundary.free_surface.extrapolation = WallExtrapolation::Linear;
    else
      throw std::invalid_argument("expected constant or linear");
  };
  s["boundary.free_surface_diagonal_average"] = [](RunConfig& c, std::string_view v) {
    c.boundary.free_surface.diagonal_average = to_bool(v);
  };
  s["stability.samples"] = [](RunConfig& c, std::string_view v) { c.stability.samples = to_int(v); };
  s["convergence.sizes"] = [](RunConfig& c, std::string_view v) {
    c.convergence.sizes.clear();
    for (auto item : split(v, ',')) c.convergence.sizes.push_back(to_int(item));
  };
  s["convergence.scale_time"] = [](RunConfig& c, std::string_view v) {
    c.convergence.scale_time = to_bool(v);
  };
  s["reflection.walls"] = [](RunConfig& c, std::string_view v) {
    c.reflection.walls.clear();
    for (auto item : split(v, ',')) {
      const auto k = parse_edge_kind(item);
      if (k != EdgeKind::RigidWall && k != EdgeKind::FreeSurface)
        throw std::invalid_argument("reflection walls must be wall or free");
      c.reflection.walls.push_back(k);
    }
  };
  s["reflection.source_offset"] = [](RunConfig& c, std::string_view v) {
    c.reflection.source_offset = to_int(v);
  };
  s["reflection.probe_offset"] = [](RunConfig& c, std::string_view v) {
    c.reflection.probe_offset = to_int(v);
  };
  s["rayleigh.switch_step"] = [](RunConfig& c, std::string_view v) { c.rayleigh.switch_step = to_long(v); };
  s["rayleigh.source_depth"] = [](RunConfig& c, std::string_view v) { c.rayleigh.source_depth = to_int(v); };
  s["rayleigh.source_x"] = [](RunConfig& c, std::string_view v) { c.rayleigh.source_x = to_int(v); };
  s["rayleigh.profile_x"] = [](RunConfig& c, std::string_view v) { c.rayleigh.profile_x = to_int(v); };
  s["rayleigh.profile_step"] = [](RunConfig& c, std::string_view v) { c.rayleigh.profile_step = to_long(v); };
  s["rayleigh.reference_step"] = [](RunConfig& c, std::string_view v) {
    c.rayleigh.reference_step = to_long(v);
  };
  s["rayleigh.turns"] = [](RunConfig& c, std::string_view v) { c.rayleigh.turns = to_int(v); };
  s["rayleigh.gate_half_width"] = [](RunConfig& c, std::string_view v) {
    c.rayleigh.gate_half_width = to_int(v);
  };
  return s;
}

RunConfig defaults_for(ExperimentKind kind) {
  RunConfig c;
  c.experiment = kind;
  switch (kind) {
    case ExperimentKind::Rayleigh: {
      c.nx = 300;
      c.ny = 100;
      c.steps = 1900;
      EdgeSpec absorbing;
      absorbing.kind = EdgeKind::Absorbing;
      c.boundary.left = c.boundary.right = c.boundary.bottom = absorbing;
      c.boundary.top.kind = EdgeKind::FreeSurface;
      c.source.dir_x = 0.0;
      c.source.dir_y = -1.0;
      break;
    }
    case ExperimentKind::Reflection:
      c.steps = 200;
      c.source.dir_x = 0.0;
      c.source.dir_y = 1.0;
      break;
    case ExperimentKind::DampingScaling:
      c.nx = 8;
      c.ny = 64;
      c.steps = 3000;
      break;
    default:
      break;
  }
  return c;
}

void validate(const RunConfig& c, std::vector<std::string>& errs) {
  if (c.nx < 1 || c.ny < 1) errs.push_back("grid: nx and ny must be positive");
  for (auto& e : material_violations(c.nu, c.tau, c.rho0)) errs.push_back("material: " + e);
  for (auto& e : source_violations(c.source)) errs.push_back("source: " + e);
  if (c.nx >= 1 && c.ny >= 1)
    for (auto& e : boundary_violations(c.boundary, c.nx, c.ny)) errs.push_back("boundary: " + e);
  if (c.steps < 0) errs.push_back("run: steps must be non-negative");
  for (long s : c.snapshots)
    if (s < 0 || s > c.steps) errs.push_back("run: snapshot step " + std::to_string(s) + " outside [0, steps]");
  for (const auto& st : c.stations)
    if (st[0] < 0 || st[1] < 0 || st[0] >= c.nx || st[1] >= c.ny)
      errs.push_back("run: station " + std::to_string(st[0]) + ":" + std::to_string(st[1]) +
                     " outside the grid");
  if (c.stability.samples < 1) errs.push_back("stability: samples must be positive");
  if (c.convergence.sizes.size() < 3) errs.push_back("convergence: need at least 3 grid sizes");
  for (std::size_t i = 1; i < c.convergence.sizes.size(); ++i)
    if (c.convergence.sizes[i] <= c.convergence.sizes[i - 1])
      errs.push_back("convergence: sizes must increase strictly");
  if (c.reflection.source_offset < 1 || c.reflection.probe_offset <= c.reflection.source_offset)
    errs.push_back("reflection: need 0 < source_offset < probe_offset");
  if (c.experiment == ExperimentKind::Rayleigh) {
    const auto& r = c.rayleigh;
    if (r.source_depth < 0 || r.source_depth >= c.ny) errs.push_back("rayleigh: source_depth outside the grid");
    if (r.profile_x < 0 || r.profile_x >= c.nx) errs.push_back("rayleigh: profile_x outside the grid");
    if (r.turns < 1) errs.push_back("rayleigh: turns must be positive");
    if (r.switch_step < 0 || r.switch_step > r.reference_step)
      errs.push_back("rayleigh: switch_step must precede reference_step");
    if (r.profile_step > c.steps) errs.push_back("rayleigh: profile_step beyond the run");
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, ExperimentKind fallback) {
  std::vector<std::string> errs;
  static const std::set<std::string> sections{"run",        "grid",     "material",
                                              "source",     "boundary", "stability",
                                              "convergence", "reflection", "rayleigh"};
  std::map<std::string, Entry> entries;
  std::string section;
  int line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto col = [&](std::size_t offset) {
      return static_cast<int>(raw.find_first_not_of(" \t") + offset + 1);
    };
    auto where = [&](int c) {
      return "line " + std::to_string(line_no) + ", column " + std::to_string(c) + ": ";
    };
    if (line.front() == '[') {
      if (line.back() != ']') {
        errs.push_back(where(col(line.size())) + "section header must end with ']'");
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!sections.count(section)) errs.push_back(where(col(1)) + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errs.push_back(where(col(0)) + "expected 'key = value'");
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      errs.push_back(where(col(0)) + "missing key before '='");
      continue;
    }
    if (value.empty()) {
      errs.push_back(where(col(eq + 1)) + "missing value after '='");
      continue;
    }
    if (section.empty()) {
      errs.push_back(where(col(0)) + "key '" + std::string(key) + "' appears before any [section]");
      continue;
    }
    const std::string full = section + "." + std::string(key);
    if (auto it = entries.find(full); it != entries.end()) {
      errs.push_back(where(col(0)) + "duplicate key '" + full + "' (first set on line " +
                     std::to_string(it->second.line) + ")");
      continue;
    }
    entries[full] = Entry{std::string(value), line_no};
  }

  ExperimentKind kind = fallback;
  if (auto it = entries.find("run.experiment"); it != entries.end()) {
    try {
      kind = parse_experiment(it->second.value);
    } catch (const std::exception& e) {
      errs.push_back("line " + std::to_string(it->second.line) + ": run.experiment: " + e.what());
    }
  }

  RunConfig config = defaults_for(kind);
  Explicit given;
  const auto table = setters(given);
  for (const auto& [key, entry] : entries) {
    const auto it = table.find(key);
    if (it == table.end()) {
      if (sections.count(key.substr(0, key.find('.'))))
        errs.push_back("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
      continue;
    }
    try {
      it->second(config, entry.value);
    } catch (const std::exception& e) {
      errs.push_back("line " + std::to_string(entry.line) + ": " + key + ": " + e.what());
    }
  }

  if (config.experiment == ExperimentKind::Rayleigh) {
    if (!given.source_x) config.source.center_x = config.rayleigh.source_x;
    if (!given.source_y) config.source.center_y = config.ny - 1 - config.rayleigh.source_depth;
  } else {
    if (!given.source_x) config.source.center_x = config.nx / 2;
    if (!given.source_y) config.source.center_y = config.ny / 2;
  }

  validate(config, errs);
  if (!errs.empty()) throw ConfigError(std::move(errs));
  return config;
}

RunConfig load_config(const std::string& path, ExperimentKind fallback) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), fallback);
}

nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  auto edge = [](const EdgeSpec& e) {
    return json{{"kind", std::string(to_string(e.kind))},
                {"thickness", e.thickness},
                {"a_max", e.a_max},
                {"profile", e.profile}};
  };
  json walls = json::array();
  for (auto k : c.reflection.walls) walls.push_back(std::string(to_string(k)));
  json stations = json::array();
  for (const auto& s : c.stations) stations.push_back({s[0], s[1]});
  return json{
      {"experiment", std::string(to_string(c.experiment))},
      {"grid", {{"nx", c.nx}, {"ny", c.ny}}},
      {"material", {{"nu", c.nu}, {"tau", c.tau}, {"rho0", c.rho0}}},
      {"source",
       {{"x", c.source.center_x},
        {"y", c.source.center_y},
        {"sigma", c.source.sigma},
        {"direction", {c.source.dir_x, c.source.dir_y}},
        {"amplitude", c.source.amplitude},
        {"period", c.source.period},
        {"t0", c.source.t0}}},
      {"boundary",
       {{"left", edge(c.boundary.left)},
        {"right", edge(c.boundary.right)},
        {"bottom", edge(c.boundary.bottom)},
        {"top", edge(c.boundary.top)},
        {"free_surface_extrapolation",
         c.boundary.free_surface.extrapolation == WallExtrapolation::Linear ? "linear" : "constant"},
        {"free_surface_diagonal_average", c.boundary.free_surface.diagonal_average}}},
      {"run", {{"steps", c.steps}, {"snapshots", c.snapshots}, {"stations", stations}, {"output", c.output}}},
      {"stability", {{"samples", c.stability.samples}}},
      {"convergence", {{"sizes", c.convergence.sizes}, {"scale_time", c.convergence.scale_time}}},
      {"reflection",
       {{"walls", walls},
        {"source_offset", c.reflection.source_offset},
        {"probe_offset", c.reflection.probe_offset}}},
      {"rayleigh",
       {{"switch_step", c.rayleigh.switch_step},
        {"source_depth", c.rayleigh.source_depth},
        {"source_x", c.rayleigh.source_x},
        {"profile_x", c.rayleigh.profile_x},
        {"profile_step", c.rayleigh.profile_step},
        {"reference_step", c.rayleigh.reference_step},
        {"turns", c.rayleigh.turns},
        {"gate_half_width", c.rayleigh.gate_half_width}}},
  };
}

}  // namespace elbm
