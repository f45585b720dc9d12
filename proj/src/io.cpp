#include "coaltypes/io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "coaltypes/errors.hpp"

namespace coaltypes {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::ParseError, where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw Error(ErrorCode::ParseError, "unknown key '" + item.key() + "' in " + where);
    }
  }
}

double number(const json& obj, const std::string& key, const std::string& where, std::optional<double> fallback) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw Error(ErrorCode::ParseError, "missing '" + key + "' in " + where);
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) throw Error(ErrorCode::ParseError, "'" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

const json& array_field(const json& obj, const std::string& key, const std::string& where) {
  static const json empty = json::array();
  if (!obj.contains(key)) return empty;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw Error(ErrorCode::ParseError, "'" + key + "' in " + where + " must be an array");
  return v;
}

}  // namespace

Measure parse_measure(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed measure file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc.at("kind").is_string()) {
    throw Error(ErrorCode::ParseError, "measure file needs a string field 'kind'");
  }
  const auto kind = doc.at("kind").get<std::string>();
  if (kind == "lambda") {
    check_keys(doc, {"kind", "kingman_mass", "star_mass", "beta", "atoms"}, "measure");
    LambdaSpec spec;
    spec.kingman_mass = number(doc, "kingman_mass", "measure", 0.0);
    spec.star_mass = number(doc, "star_mass", "measure", 0.0);
    for (const auto& c : array_field(doc, "beta", "measure")) {
      check_keys(c, {"a", "b", "weight"}, "beta component");
      spec.beta.push_back({number(c, "a", "beta component", std::nullopt),
                           number(c, "b", "beta component", std::nullopt),
                           number(c, "weight", "beta component", 1.0)});
    }
    for (const auto& a : array_field(doc, "atoms", "measure")) {
      check_keys(a, {"u", "weight"}, "atom");
      spec.atoms.push_back({number(a, "u", "atom", std::nullopt), number(a, "weight", "atom", 1.0)});
    }
    return Measure::validate(std::move(spec));
  }
  if (kind == "xi") {
    check_keys(doc, {"kind", "kingman_mass", "atoms"}, "measure");
    XiSpec spec;
    spec.kingman_mass = number(doc, "kingman_mass", "measure", 0.0);
    for (const auto& a : array_field(doc, "atoms", "measure")) {
      check_keys(a, {"x", "weight"}, "atom");
      SimplexAtom atom;
      const auto& x = array_field(a, "x", "atom");
      if (x.empty()) throw Error(ErrorCode::ParseError, "atom needs a nonempty array 'x'");
      for (const auto& v : x) {
        if (!v.is_number()) throw Error(ErrorCode::ParseError, "atom coordinates must be numbers");
        atom.x.push_back(v.get<double>());
      }
      atom.weight = number(a, "weight", "atom", 1.0);
      spec.atoms.push_back(std::move(atom));
    }
    return Measure::validate(std::move(spec));
  }
  throw Error(ErrorCode::ParseError, "unknown measure kind '" + kind + "', expected 'lambda' or 'xi'");
}

Measure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open measure file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_measure(buffer.str());
}

std::string measure_to_json(const Measure& m) {
  json doc;
  if (m.kind() == MeasureKind::Lambda) {
    const auto& l = m.lambda();
    doc["kind"] = "lambda";
    doc["kingman_mass"] = l.kingman_mass;
    doc["star_mass"] = l.star_mass;
    doc["beta"] = json::array();
    for (const auto& c : l.beta) doc["beta"].push_back({{"a", c.a}, {"b", c.b}, {"weight", c.weight}});
    doc["atoms"] = json::array();
    for (const auto& a : l.atoms) doc["atoms"].push_back({{"u", a.u}, {"weight", a.weight}});
  } else {
    const auto& xi = m.xi();
    doc["kind"] = "xi";
    doc["kingman_mass"] = xi.kingman_mass;
    doc["atoms"] = json::array();
    for (const auto& a : xi.atoms) doc["atoms"].push_back({{"x", a.x}, {"weight", a.weight}});
  }
  return doc.dump();
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string version_string() { return COALTYPES_VERSION; }

void write_config_header(std::ostream& out, const ConfigEcho& config) {
  out << "# coaltypes " << version_string();
  for (const auto& [key, value] : config) out << ' ' << key << '=' << value;
  out << '\n';
}

void write_rates_csv(std::ostream& out, const RateTable& t) {
  out << "m,k,g_mk,r_mk\n";
  for (int m = 2; m <= t.n_max(); ++m) {
    for (int k = 1; k < m; ++k) {
      out << m << ',' << k << ',' << format_number(t.g(m, k)) << ',' << format_number(t.jump(m, k)) << '\n';
    }
  }
}

void write_totals_csv(std::ostream& out, const RateTable& t) {
  out << "m,g_m,row_sum\n";
  for (int m = 2; m <= t.n_max(); ++m) {
    out << m << ',' << format_number(t.total(m)) << ',' << format_number(t.row_sum(m)) << '\n';
  }
}

void write_distribution_csv(std::ostream& out, const TypeDistribution& d) {
  out << "m,k,probability\n";
  for (int m = 1; m <= d.n; ++m) {
    for (int k = 1; k <= m; ++k) out << m << ',' << k << ',' << format_number(d.prob(m, k)) << '\n';
  }
}

void write_rational_distribution_csv(std::ostream& out, const RationalDistribution& d) {
  out << "m,k,probability\n";
  for (int m = 1; m <= d.n; ++m) {
    for (int k = 1; k <= m; ++k) out << m << ',' << k << ',' << d.p[m][k].str() << '\n';
  }
}

void write_moments_csv(std::ostream& out, const FactorialMoments& fm) {
  out << "m,j,value\n";
  for (int m = 1; m <= fm.n; ++m) {
    for (int j = 1; j <= fm.j_max; ++j) out << m << ',' << j << ',' << format_number(fm.at(m, j)) << '\n';
  }
}

}  // namespace coaltypes
