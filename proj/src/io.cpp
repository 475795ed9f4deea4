#include "aykit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aykit/error.hpp"

#ifndef AYKIT_VERSION
#define AYKIT_VERSION "0.0.0"
#endif

namespace aykit {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const Json& member(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, "missing key '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(where, "expected a finite number");
  return x;
}

double number_at(const Json& j, const std::string& key, const std::string& where) {
  return number(member(j, key, where), where + "." + key);
}

double number_or(const Json& j, const std::string& key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return number(j.at(key), where + "." + key);
}

std::optional<double> optional_number(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return number(j.at(key), where + "." + key);
}

std::size_t count_or(const Json& j, const std::string& key, std::size_t fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0) fail(where + "." + key, "expected a positive integer");
  return static_cast<std::size_t>(v.get<long long>());
}

std::string type_of(const Json& j, const std::string& where) {
  const Json& t = member(j, "type", where);
  if (!t.is_string()) fail(where + ".type", "expected a string");
  return t.get<std::string>();
}

// Re-raises library validation errors from a constructor under a JSON path.
template <class F>
auto at_path(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConstraintError&) {
    throw;
  } catch (const DomainError& e) {
    fail(where, e.what());
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind("$", 0) == 0) throw;
    fail(where, msg);
  }
}

void dump_into(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        dump_into(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump_into(j[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      std::string s = buf;
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      out += s;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

AtomicMeasure measure_from_json(const Json& j, const std::string& where) {
  const std::string type = type_of(j, where);
  if (type == "atoms") {
    const Json& arr = member(j, "atoms", where);
    if (!arr.is_array() || arr.empty()) fail(where + ".atoms", "expected a nonempty array");
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string w = where + ".atoms[" + std::to_string(i) + "]";
      const Json& a = arr[i];
      if (a.is_array()) {
        if (a.size() != 2) fail(w, "expected [x, p]");
        atoms.push_back({number(a[0], w + "[0]"), number(a[1], w + "[1]")});
      } else {
        atoms.push_back({number_at(a, "x", w), number_at(a, "p", w)});
      }
      if (!(atoms.back().p >= 1e-12)) fail(w + (a.is_array() ? "[1]" : ".p"), "weight must be at least 1e-12");
    }
    try {
      return AtomicMeasure(std::move(atoms));
    } catch (const DomainError& e) {
      if (e.index()) fail(where + ".atoms[" + std::to_string(*e.index()) + "]", e.what());
      fail(where + ".atoms", e.what());
    } catch (const ValidationError& e) {
      fail(where + ".atoms", e.what());
    }
  }
  if (type == "dirac") return at_path(where, [&] { return AtomicMeasure::dirac(number_at(j, "x", where)); });
  if (type == "pareto") {
    const double shape = number_at(j, "shape", where), loc = number_at(j, "location", where);
    const std::size_t n = count_or(j, "n_atoms", 1000, where);
    return at_path(where, [&] { return discretize_pareto(shape, loc, n); });
  }
  if (type == "uniform") {
    const double a = number_at(j, "a", where), b = number_at(j, "b", where);
    const std::size_t n = count_or(j, "n_atoms", 1000, where);
    return at_path(where, [&] { return discretize_uniform(a, b, n); });
  }
  fail(where + ".type", "unknown measure type '" + type + "'");
}

Json measure_to_json(const AtomicMeasure& mu) {
  Json atoms = Json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"x", a.x}, {"p", a.p}});
  return {{"type", "atoms"}, {"atoms", atoms}};
}

Coefficient coefficient_from_json(const Json& j, const std::string& where) {
  const std::string type = type_of(j, where);
  return at_path(where, [&]() -> Coefficient {
    if (type == "constant") return Coefficient::constant(number_at(j, "c", where));
    if (type == "monomial") return Coefficient::monomial(number_at(j, "c", where), number_at(j, "k", where));
    if (type == "power_example") return Coefficient::power_example(number_at(j, "gamma", where));
    if (type == "rational") return Coefficient::rational();
    fail(where + ".type", "unknown coefficient type '" + type + "'");
  });
}

DrawdownFunction drawdown_from_json(const Json& j, const std::string& where) {
  const std::string type = type_of(j, where);
  if (type == "linear")
    return at_path(where, [&] {
      return DrawdownFunction::linear(number_at(j, "gamma", where), number_or(j, "shift", 0.0, where),
                                      optional_number(j, "level", where));
    });
  if (type == "zero") return at_path(where, [&] { return DrawdownFunction::zero(optional_number(j, "level", where)); });
  if (type == "measure") {
    const auto mu = measure_from_json(member(j, "measure", where), where + ".measure");
    return at_path(where, [&] { return DrawdownFunction::from_measure(mu); });
  }
  fail(where + ".type", "unknown drawdown type '" + type + "'");
}

HFunction h_from_json(const Json& j, const std::string& where) {
  const std::string type = type_of(j, where);
  HFunction h;
  h.description = j;
  if (type == "power") {
    const double g = number_at(j, "gamma", where);
    if (!(g > 0.0 && g < 1.0)) fail(where + ".gamma", "expected gamma in (0,1)");
    h.h = [g](double x) { return g / (1.0 - g) * std::pow(x, 1.0 - g); };
    h.x0 = number_or(j, "x0", 1.0, where);
    h.growth = 1.0 - g;
    return h;
  }
  if (type == "measure_quantile") {
    const auto mu = measure_from_json(member(j, "measure", where), where + ".measure");
    h.h = [mu](double x) { return x >= mu.hl_barrier() ? mu.upper() : mu.tail_quantile(1.0 / x); };
    h.x0 = 1.0;
    h.constant_from = mu.hl_barrier();
    for (std::size_t i = 1; i < mu.size(); ++i) h.jumps.push_back(1.0 / mu.suffix_mass(i));
    return h;
  }
  fail(where + ".type", "unknown h type '" + type + "'");
}

FloorFunction floor_from_json(const Json& j, const std::string& where) {
  const std::string type = type_of(j, where);
  return at_path(where, [&]() -> FloorFunction {
    if (type == "power") return FloorFunction::power(number_at(j, "gamma", where), number_or(j, "scale", 1.0, where));
    if (type == "shifted_power")
      return FloorFunction::shifted_power(number_at(j, "gamma", where), number_at(j, "shift", where),
                                          number_or(j, "scale", 1.0, where));
    if (type == "linear") return FloorFunction::linear(number_or(j, "slope", 1.0, where));
    fail(where + ".type", "unknown floor type '" + type + "'");
  });
}

ProfilePtr profile_from_json(const Json& j, const std::string& where) {
  const std::string type = type_of(j, where);
  if (type == "identity") return identity_profile(number_or(j, "a", 0.0, where));
  if (type == "affine")
    return at_path(where, [&] {
      return affine_profile(number_at(j, "alpha", where), number_or(j, "beta", 0.0, where), number_or(j, "a", 0.0, where));
    });
  if (type == "power")
    return at_path(where, [&] {
      return power_profile(number_at(j, "gamma", where), number_or(j, "a", 1.0, where), number_or(j, "scale", 1.0, where));
    });
  if (type == "measure") return profile_from_measure(measure_from_json(member(j, "measure", where), where + ".measure"));
  if (type == "compose")
    return at_path(where, [&] {
      return compose(profile_from_json(member(j, "outer", where), where + ".outer"),
                     profile_from_json(member(j, "inner", where), where + ".inner"));
    });
  if (type == "inverse") return inverse(profile_from_json(member(j, "of", where), where + ".of"));
  if (type == "bachelier") {
    const auto phi = coefficient_from_json(member(j, "phi", where), where + ".phi");
    return at_path(where, [&] { return bachelier_profile(phi, number_at(j, "a", where), number_at(j, "a_star", where)); });
  }
  if (type == "drawdown") {
    const auto w = drawdown_from_json(member(j, "w", where), where + ".w");
    return at_path(where, [&] { return v_from_w(w, number_at(j, "a", where), number_at(j, "a_star", where)); });
  }
  if (type == "from_h") {
    const auto h = h_from_json(member(j, "h", where), where + ".h");
    return at_path(where, [&] { return u_from_h(h); });
  }
  if (type == "floor_envelope") {
    const auto g = floor_from_json(member(j, "floor", where), where + ".floor");
    return at_path(where, [&] { return g.envelope(number_at(j, "a", where)); });
  }
  fail(where + ".type", "unknown profile type '" + type + "'");
}

Json profile_to_json(const Profile& p, std::size_t samples) {
  Json out = p.tag();
  const double a = p.a();
  const auto b = p.barrier();
  double hi = b ? *b : (a > 0.0 ? 64.0 * a : a + 64.0);
  if (b && !std::isfinite(*b)) hi = a > 0.0 ? 64.0 * a : a + 64.0;
  Json xs = Json::array(), us = Json::array(), ds = Json::array();
  for (std::size_t i = 0; i < samples; ++i) {
    double x = a + (hi - a) * static_cast<double>(i) / static_cast<double>(samples - 1);
    if (b && x >= *b) x = std::nextafter(*b, a);
    xs.push_back(x);
    us.push_back(p.U(x));
    ds.push_back(p.u(x));
  }
  out["table"] = {{"x", xs}, {"U", us}, {"u", ds}};
  if (b) out["barrier"] = *b;
  return out;
}

Json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open '" + file.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("$: malformed JSON in '" + file.string() + "': " + e.what());
  }
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write '" + file.string() + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + file.string() + "'");
}

Path read_path_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open '" + file.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(file.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x") throw ValidationError(file.string() + ": expected header 't,x'");
  std::vector<double> t, x;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError(file.string() + ":" + std::to_string(row) + ": expected 't,x'");
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      t.push_back(std::stod(a, &used));
      if (used != a.size()) throw std::invalid_argument(a);
      x.push_back(std::stod(b, &used));
      if (used != b.size()) throw std::invalid_argument(b);
    } catch (const std::logic_error&) {
      throw ValidationError(file.string() + ":" + std::to_string(row) + ": malformed number");
    }
  }
  try {
    return Path(std::move(t), std::move(x));
  } catch (const DomainError& e) {
    throw ValidationError(file.string() + ": " + e.what());
  }
}

std::string path_csv(const Path& p) {
  std::string out = "t,x\n";
  char buf[80];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.times()[i], p[i]);
    out += buf;
  }
  return out;
}

Json to_json(const StopEvent& e) {
  return {{"kind", to_string(e.kind)}, {"index", e.index}, {"level", e.level}};
}

Json to_json(const GenSpec& s) {
  Json j = {{"kind", to_string(s.kind)}, {"dt", s.dt},         {"horizon", s.horizon},
            {"volatility", s.volatility}, {"start", s.start}, {"seed", s.base_seed}};
  if (s.kind == GenKind::exit_interval) j["upper"] = s.upper;
  if (s.kind == GenKind::floored_gbm_stopped_at_0) j["floor"] = s.floor;
  return j;
}

Json to_json(const McReport& rep, bool include_provenance) {
  Json j;
  j["name"] = rep.name;
  j["n_paths"] = rep.n_paths;
  j["ks_stat"] = rep.ks_stat ? Json(*rep.ks_stat) : Json(nullptr);
  j["tv_stat"] = rep.tv_stat ? Json(*rep.tv_stat) : Json(nullptr);
  j["censored_fraction"] = rep.censored_fraction;
  j["inconclusive"] = rep.inconclusive;
  j["spec"] = to_json(rep.spec);
  Json table = Json::array();
  for (const auto& r : rep.table) {
    Json row = {{"level", r.level}, {"empirical", r.empirical}, {"target", r.target}};
    if (r.reference) row["reference"] = *r.reference;
    if (r.ci) row["ci"] = *r.ci;
    table.push_back(row);
  }
  j["table"] = table;
  j["stats"] = Json::object();
  for (const auto& [k, v] : rep.stats) j["stats"][k] = v;
  j["notes"] = Json::object();
  for (const auto& [k, v] : rep.notes) j["notes"][k] = v;
  if (include_provenance) {
    const Json spec = to_json(rep.spec);
    j["provenance"] = {{"spec_hash", hex64(fnv1a(dump_json(spec) + rep.name))},
                       {"seed", rep.spec.base_seed},
                       {"grid", {{"dt", rep.spec.dt}, {"horizon", rep.spec.horizon}}},
                       {"version", AYKIT_VERSION}};
  }
  return j;
}

std::string dump_json(const Json& j) {
  std::string out;
  dump_into(j, out, 0);
  out += "\n";
  return out;
}

std::string format_scalar(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace aykit
