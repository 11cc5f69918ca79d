#include "phdim/experiment_config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "phdim/errors.hpp"

using nlohmann::json;

namespace phdim {

namespace {

json shape_json(const ShapeSpec& s) {
  return json{{"variant", std::string(shape_name(s.variant))},
              {"digit_depth", s.digit_depth},
              {"torus_major", s.torus_major},
              {"torus_minor", s.torus_minor},
              {"beta_a", s.beta_a},
              {"beta_b", s.beta_b},
              {"delta", s.delta},
              {"level", s.level}};
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ParameterError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParameterError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ShapeSpec shape_from(const json& j) {
  check_keys(j, {"variant", "digit_depth", "torus_major", "torus_minor", "beta_a", "beta_b", "delta", "level"},
             "shape");
  ShapeSpec s;
  if (j.contains("variant")) s.variant = shape_from_name(j.at("variant").get<std::string>());
  read_opt(j, "digit_depth", s.digit_depth);
  read_opt(j, "torus_major", s.torus_major);
  read_opt(j, "torus_minor", s.torus_minor);
  read_opt(j, "beta_a", s.beta_a);
  read_opt(j, "beta_b", s.beta_b);
  read_opt(j, "delta", s.delta);
  read_opt(j, "level", s.level);
  return s;
}

json to_json(const ExperimentConfig& c) {
  json cmp = json::array();
  for (const auto& s : c.cdf.compare_shapes) cmp.push_back(shape_json(s));
  return json{
      {"shape", shape_json(c.shape)},
      {"hom_dims", c.hom_dims},
      {"n_schedule", c.n_schedule},
      {"trials", c.trials},
      {"master_seed", c.master_seed},
      {"output_dir", c.output_dir},
      {"threads", c.threads},
      {"caps", {{"max_simplices", c.caps.max_simplices}, {"max_cell_seconds", c.caps.max_cell_seconds}}},
      {"cdf",
       {{"m", c.cdf.m},
        {"compare_shapes", cmp},
        {"periodic_k", c.cdf.periodic_k},
        {"periodic_j_min", c.cdf.periodic_j_min},
        {"periodic_j_max", c.cdf.periodic_j_max}}},
      {"arrowhead",
       {{"levels", c.arrowhead.levels},
        {"intermediate_n_min", c.arrowhead.intermediate_n_min},
        {"intermediate_n_max", c.arrowhead.intermediate_n_max},
        {"large_n_min", c.arrowhead.large_n_min},
        {"large_n_max", c.arrowhead.large_n_max}}},
  };
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

unsigned long long parse_u64(const std::string& text, const char* what) {
  const std::string t = trim(text);
  if (t.empty() || t[0] == '-') throw ParameterError(std::string(what) + ": expected a nonnegative integer");
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(t, &pos);
  } catch (const std::exception&) {
    throw ParameterError(std::string(what) + ": expected a nonnegative integer, got '" + text + "'");
  }
  if (pos != t.size()) throw ParameterError(std::string(what) + ": trailing characters in '" + text + "'");
  return v;
}

double parse_real(const std::string& text, const char* what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(trim(text), &pos);
  } catch (const std::exception&) {
    throw ParameterError(std::string(what) + ": expected a number, got '" + text + "'");
  }
  return v;
}

}  // namespace

void ExperimentConfig::validate() const {
  shape.validate();
  for (const auto& s : cdf.compare_shapes) s.validate();
  if (hom_dims.empty()) throw ParameterError("hom_dims must be nonempty");
  for (int d : hom_dims) {
    if (d < 0) throw ParameterError("hom_dims must be >= 0");
  }
  if (n_schedule.empty()) throw ParameterError("n_schedule must be nonempty");
  for (auto n : n_schedule) {
    if (n == 0) throw ParameterError("sample sizes must be positive");
  }
  if (trials == 0) throw ParameterError("trials must be >= 1");
  if (threads == 0) throw ParameterError("threads must be >= 1");
  if (caps.max_cell_seconds < 0) throw ParameterError("max_cell_seconds must be >= 0");
  if (cdf.m < 0) throw ParameterError("cdf.m must be >= 0");
  if (cdf.periodic_j_min < 0 || cdf.periodic_j_max < cdf.periodic_j_min) {
    throw ParameterError("periodic j range is empty");
  }
  if (arrowhead.levels.empty()) throw ParameterError("arrowhead.levels must be nonempty");
}

int ExperimentConfig::max_hom_dim() const {
  int m = 0;
  for (int d : hom_dims) m = std::max(m, d);
  return m;
}

std::string config_to_json(const ExperimentConfig& cfg, int indent) { return to_json(cfg).dump(indent); }

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  check_keys(j, {"shape", "hom_dims", "n_schedule", "trials", "master_seed", "output_dir", "threads", "caps", "cdf",
                 "arrowhead"},
             "config");
  ExperimentConfig c;
  try {
    if (j.contains("shape")) c.shape = shape_from(j.at("shape"));
    read_opt(j, "hom_dims", c.hom_dims);
    read_opt(j, "n_schedule", c.n_schedule);
    read_opt(j, "trials", c.trials);
    read_opt(j, "master_seed", c.master_seed);
    read_opt(j, "output_dir", c.output_dir);
    read_opt(j, "threads", c.threads);
    if (j.contains("caps")) {
      const auto& k = j.at("caps");
      check_keys(k, {"max_simplices", "max_cell_seconds"}, "caps");
      read_opt(k, "max_simplices", c.caps.max_simplices);
      read_opt(k, "max_cell_seconds", c.caps.max_cell_seconds);
    }
    if (j.contains("cdf")) {
      const auto& k = j.at("cdf");
      check_keys(k, {"m", "compare_shapes", "periodic_k", "periodic_j_min", "periodic_j_max"}, "cdf");
      read_opt(k, "m", c.cdf.m);
      if (k.contains("compare_shapes")) {
        for (const auto& s : k.at("compare_shapes")) c.cdf.compare_shapes.push_back(shape_from(s));
      }
      read_opt(k, "periodic_k", c.cdf.periodic_k);
      read_opt(k, "periodic_j_min", c.cdf.periodic_j_min);
      read_opt(k, "periodic_j_max", c.cdf.periodic_j_max);
    }
    if (j.contains("arrowhead")) {
      const auto& k = j.at("arrowhead");
      check_keys(k, {"levels", "intermediate_n_min", "intermediate_n_max", "large_n_min", "large_n_max"},
                 "arrowhead");
      read_opt(k, "levels", c.arrowhead.levels);
      read_opt(k, "intermediate_n_min", c.arrowhead.intermediate_n_min);
      read_opt(k, "intermediate_n_max", c.arrowhead.intermediate_n_max);
      read_opt(k, "large_n_min", c.arrowhead.large_n_min);
      read_opt(k, "large_n_max", c.arrowhead.large_n_max);
    }
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ResourceError("cannot write '" + path + "'");
  out << config_to_json(cfg) << '\n';
}

std::string shape_to_json(const ShapeSpec& spec) { return shape_json(spec).dump(); }

ShapeSpec shape_from_json(const std::string& text) {
  try {
    return shape_from(json::parse(text));
  } catch (const json::exception& e) {
    throw ParameterError(std::string("shape: ") + e.what());
  }
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(static_cast<std::size_t>(parse_u64(item, "list")));
  }
  if (out.empty()) throw ParameterError("empty list '" + text + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (auto v : parse_size_list(text)) {
    if (v > 1000) throw ParameterError("list value out of range");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void apply_env_overrides(ExperimentConfig& cfg, const std::map<std::string, std::string>& env) {
  auto get = [&](const char* key) -> const std::string* {
    auto it = env.find(key);
    return it == env.end() ? nullptr : &it->second;
  };
  if (auto v = get("PHDIM_SEED")) cfg.master_seed = parse_u64(*v, "PHDIM_SEED");
  if (auto v = get("PHDIM_OUT")) cfg.output_dir = *v;
  if (auto v = get("PHDIM_THREADS")) cfg.threads = static_cast<unsigned>(parse_u64(*v, "PHDIM_THREADS"));
  if (auto v = get("PHDIM_TRIALS")) cfg.trials = parse_u64(*v, "PHDIM_TRIALS");
  if (auto v = get("PHDIM_SHAPE")) cfg.shape.variant = shape_from_name(trim(*v));
  if (auto v = get("PHDIM_N_SCHEDULE")) cfg.n_schedule = parse_size_list(*v);
  if (auto v = get("PHDIM_HOM_DIMS")) cfg.hom_dims = parse_int_list(*v);
  if (auto v = get("PHDIM_MAX_SIMPLICES")) cfg.caps.max_simplices = parse_u64(*v, "PHDIM_MAX_SIMPLICES");
  if (auto v = get("PHDIM_MAX_CELL_SECONDS")) {
    cfg.caps.max_cell_seconds = parse_real(*v, "PHDIM_MAX_CELL_SECONDS");
  }
}

void apply_env_overrides(ExperimentConfig& cfg) {
  std::map<std::string, std::string> env;
  for (const char* key : {"PHDIM_SEED", "PHDIM_OUT", "PHDIM_THREADS", "PHDIM_TRIALS", "PHDIM_SHAPE",
                          "PHDIM_N_SCHEDULE", "PHDIM_HOM_DIMS", "PHDIM_MAX_SIMPLICES", "PHDIM_MAX_CELL_SECONDS"}) {
    if (const char* v = std::getenv(key)) env[key] = v;
  }
  apply_env_overrides(cfg, env);
}

std::string config_hash(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.output_dir.clear();
  c.threads = 1;
  const std::string text = config_to_json(c, -1);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace phdim
