#include "config_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "levyspec/error.hpp"

namespace levyspec::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::config, "field '" + field + "': " + what);
}

double get_number(const json& doc, const char* field, double fallback) {
  if (!doc.contains(field)) return fallback;
  const json& v = doc.at(field);
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

std::size_t get_count(const json& doc, const char* field, std::size_t fallback) {
  if (!doc.contains(field)) return fallback;
  const json& v = doc.at(field);
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::size_t>(v.get<long long>());
  fail(field, "expected a non-negative integer");
}

std::string get_string(const json& doc, const char* field, const std::string& fallback) {
  if (!doc.contains(field)) return fallback;
  const json& v = doc.at(field);
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

template <typename F>
auto enum_field(const char* field, const std::string& value, F&& convert) {
  try {
    return convert(value);
  } catch (const Error&) {
    fail(field, "unrecognized value '" + value + "'");
  }
}

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

}  // namespace

SolverConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::config, "config must be a JSON object");
  static const std::set<std::string> known = {"model", "mass", "potential", "V0", "a", "dx", "h",
                                              "n_states", "k_max", "tol", "window", "backend",
                                              "boundary", "singular_correction"};
  for (const auto& [key, value] : doc.items())
    if (!known.contains(key)) fail(key, "unknown field");

  SolverConfig c;
  const std::string model = get_string(doc, "model", "cauchy");
  const double mass = get_number(doc, "mass", 0.0);
  NonlocalOptions options;
  options.backend = enum_field("backend", get_string(doc, "backend", "auto"), backend_from_string);
  options.boundary = enum_field("boundary", get_string(doc, "boundary", "censored"), boundary_from_string);
  if (doc.contains("singular_correction")) {
    if (!doc.at("singular_correction").is_boolean()) fail("singular_correction", "expected true or false");
    options.singular_correction = doc.at("singular_correction").get<bool>();
  }

  if (model == "cauchy") {
    c.hamiltonian.kinetic = NonlocalKinetic{KernelSpec::cauchy(), options};
  } else if (model == "quasirelativistic") {
    if (!(mass > 0.0)) fail("mass", "quasirelativistic model requires mass > 0");
    c.hamiltonian.kinetic = NonlocalKinetic{KernelSpec::quasirelativistic(mass), options};
  } else if (model == "nonrelativistic") {
    if (!(mass > 0.0)) fail("mass", "nonrelativistic model requires mass > 0");
    c.hamiltonian.kinetic = LocalKinetic{mass};
  } else {
    fail("model", "expected cauchy, quasirelativistic or nonrelativistic, got '" + model + "'");
  }

  const std::string potential = get_string(doc, "potential", "harmonic");
  const PotentialKind kind = enum_field("potential", potential, potential_kind_from_string);
  const double V0 = get_number(doc, "V0", 0.0);
  if (kind == PotentialKind::finite_well) {
    if (!doc.contains("V0")) fail("V0", "finite_well potential requires V0");
    if (!(V0 >= 0.0)) fail("V0", "must be >= 0");
  }
  c.hamiltonian.potential = {kind, kind == PotentialKind::finite_well ? V0 : 0.0};

  c.a = get_number(doc, "a", c.a);
  c.dx = get_number(doc, "dx", c.dx);
  c.h = get_number(doc, "h", c.h);
  c.n_states = get_count(doc, "n_states", c.n_states);
  c.k_max = get_count(doc, "k_max", c.k_max);
  c.tol = get_number(doc, "tol", c.tol);
  c.window = get_count(doc, "window", c.window);
  c.validate();
  return c;
}

SolverConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, "JSON syntax error at line " + std::to_string(line_of_offset(text, e.byte)) +
                                       ": " + e.what());
  }
  return config_from_json(doc);
}

SolverConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json config_to_json(const SolverConfig& c) {
  json doc;
  NonlocalOptions options;
  if (const auto* nl = std::get_if<NonlocalKinetic>(&c.hamiltonian.kinetic)) {
    doc["model"] = std::string(to_string(nl->kernel.family));
    doc["mass"] = nl->kernel.effective_mass();
    options = nl->options;
  } else if (const auto* loc = std::get_if<LocalKinetic>(&c.hamiltonian.kinetic)) {
    doc["model"] = "nonrelativistic";
    doc["mass"] = loc->mass;
  } else {
    throw Error(ErrorKind::config, "a Hamiltonian without kinetic term has no config representation");
  }
  doc["potential"] = std::string(to_string(c.hamiltonian.potential.kind));
  if (c.hamiltonian.potential.kind == PotentialKind::finite_well) doc["V0"] = c.hamiltonian.potential.V0;
  doc["a"] = c.a;
  doc["dx"] = c.dx;
  doc["h"] = c.h;
  doc["n_states"] = c.n_states;
  doc["k_max"] = c.effective_k_max();
  doc["tol"] = c.tol;
  doc["window"] = c.window;
  doc["backend"] = std::string(to_string(options.backend));
  doc["boundary"] = std::string(to_string(options.boundary));
  doc["singular_correction"] = options.singular_correction;
  return doc;
}

SolverConfig with_parameter(const SolverConfig& base, std::string_view param, double value) {
  SolverConfig c = base;
  if (param == "mass") {
    if (auto* nl = std::get_if<NonlocalKinetic>(&c.hamiltonian.kinetic)) {
      if (nl->kernel.family == KernelFamily::cauchy)
        throw Error(ErrorKind::config, "mass sweep needs a quasirelativistic or nonrelativistic model");
      nl->kernel.mass = value;
    } else if (auto* loc = std::get_if<LocalKinetic>(&c.hamiltonian.kinetic)) {
      loc->mass = value;
    }
  } else if (param == "V0") {
    if (c.hamiltonian.potential.kind != PotentialKind::finite_well)
      throw Error(ErrorKind::config, "V0 sweep needs a finite_well potential");
    c.hamiltonian.potential.V0 = value;
  } else if (param == "a") {
    c.a = value;
  } else {
    throw Error(ErrorKind::config, "sweep parameter must be mass, V0 or a, got '" + std::string(param) + "'");
  }
  c.validate();
  return c;
}

}  // namespace levyspec::cli
