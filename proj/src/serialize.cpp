#include "gaborlab/serialize.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

#include "gaborlab/errors.hpp"

namespace gaborlab {
namespace {

using nlohmann::json;

[[noreturn]] void bad_format(const std::string& what) { throw Error(ErrorCode::format, what); }

double get_number(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number()) {
    bad_format(std::string("missing or non-numeric field '") + key + "'");
  }
  const double v = obj.at(key).get<double>();
  if (!std::isfinite(v)) bad_format(std::string("non-finite field '") + key + "'");
  return v;
}

using Factory = std::function<NumericPiece(const Interval&, const json&)>;

const std::map<std::string, Factory>& registry() {
  static const std::map<std::string, Factory> table = {
      {"affine",
       [](const Interval& iv, const json& p) {
         return affine_piece(iv, get_number(p, "c0"), get_number(p, "c1"));
       }},
      {"sqrt_complement",
       [](const Interval& iv, const json& p) {
         if (!p.contains("inner")) bad_format("sqrt_complement: missing 'inner'");
         return sqrt_complement_piece(iv, get_number(p, "level"), atom_from_json(p.at("inner")));
       }},
      {"painless_dual",
       [](const Interval& iv, const json& p) {
         if (!p.contains("inner")) bad_format("painless_dual: missing 'inner'");
         return painless_dual_piece(iv, atom_from_json(p.at("inner")), get_number(p, "alpha"),
                                    get_number(p, "beta"));
       }},
      {"gaussian",
       [](const Interval& iv, const json& p) {
         NumericPiece g = gaussian_piece(get_number(p, "sigma"));
         return g.restricted(iv);
       }},
  };
  return table;
}

}  // namespace

NumericPiece make_numeric(const Interval& interval, const NumericBuilder& builder) {
  const auto& table = registry();
  auto it = table.find(builder.name);
  if (it == table.end()) bad_format("unknown numeric builder '" + builder.name + "'");
  try {
    return it->second(interval, builder.params);
  } catch (const json::exception& e) {
    bad_format(std::string("numeric builder '") + builder.name + "': " + e.what());
  }
}

std::vector<std::string> numeric_builder_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

NumericPiece affine_piece(const Interval& interval, double c0, double c1) {
  return NumericPiece(
      interval, [c0, c1](double x) { return cplx(c0 + c1 * x, 0.0); }, Smoothness::continuous,
      NumericBuilder{"affine", {{"c0", c0}, {"c1", c1}}});
}

NumericPiece sqrt_complement_piece(const Interval& interval, double level,
                                   const PiecewiseAtom& inner) {
  auto shared = std::make_shared<const PiecewiseAtom>(inner);
  return NumericPiece(
      interval,
      [shared, level](double x) {
        return cplx(std::sqrt(std::max(0.0, level - std::norm((*shared)(x)))), 0.0);
      },
      Smoothness::piecewise_continuous,
      NumericBuilder{"sqrt_complement", {{"level", level}, {"inner", to_json(inner)}}});
}

NumericPiece painless_dual_piece(const Interval& interval, const PiecewiseAtom& numerator,
                                 double alpha, double beta) {
  auto shared = std::make_shared<const PiecewiseAtom>(numerator);
  return NumericPiece(
      interval,
      [shared, alpha, beta](double x) {
        const double d = periodization_at(*shared, alpha, x);
        return d > 0.0 ? beta * (*shared)(x) / d : cplx{};
      },
      Smoothness::piecewise_continuous,
      NumericBuilder{"painless_dual",
                     {{"alpha", alpha}, {"beta", beta}, {"inner", to_json(numerator)}}});
}

NumericPiece gaussian_piece(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::validation, "gaussian: sigma must be positive");
  }
  const double norm = std::pow(std::numbers::pi * sigma * sigma, -0.25);
  return NumericPiece(
      {-12.0 * sigma, 12.0 * sigma},
      [sigma, norm](double t) { return cplx(norm * std::exp(-t * t / (2.0 * sigma * sigma)), 0.0); },
      Smoothness::continuous, NumericBuilder{"gaussian", {{"sigma", sigma}}});
}

json to_json(const PiecewiseAtom& atom) {
  json pieces = json::array();
  for (const auto& piece : atom.pieces()) {
    const Interval& iv = interval_of(piece);
    json entry = {{"a", iv.a}, {"b", iv.b}};
    if (const auto* t = std::get_if<TrigPiece>(&piece)) {
      entry["type"] = "trig";
      json terms = json::array();
      for (const auto& term : t->terms()) {
        terms.push_back({term.coeff.real(), term.coeff.imag(), term.freq});
      }
      entry["terms"] = std::move(terms);
    } else {
      const auto& n = std::get<NumericPiece>(piece);
      if (!n.builder()) {
        throw Error(ErrorCode::format,
                    "numeric piece has no named builder and cannot be serialized");
      }
      entry["type"] = "numeric";
      entry["builder"] = n.builder()->name;
      entry["params"] = n.builder()->params;
      entry["shift"] = n.shift();
      entry["modulation"] = n.modulation();
      entry["scale"] = {n.scale().real(), n.scale().imag()};
      entry["conjugate"] = n.conjugate_base();
    }
    pieces.push_back(std::move(entry));
  }
  return {{"format", kAtomFormatName}, {"version", kAtomFormatVersion}, {"pieces", pieces}};
}

PiecewiseAtom atom_from_json(const json& doc) {
  if (!doc.is_object() || doc.value("format", std::string{}) != kAtomFormatName) {
    bad_format("not a gaborlab atom document");
  }
  if (!doc.contains("version") || !doc.at("version").is_number_integer() ||
      doc.at("version").get<int>() != kAtomFormatVersion) {
    bad_format("unsupported atom format version");
  }
  if (!doc.contains("pieces") || !doc.at("pieces").is_array()) bad_format("missing 'pieces'");
  std::vector<Piece> pieces;
  for (const auto& entry : doc.at("pieces")) {
    const Interval iv{get_number(entry, "a"), get_number(entry, "b")};
    const std::string type = entry.value("type", std::string{});
    if (type == "trig") {
      if (!entry.contains("terms") || !entry.at("terms").is_array()) bad_format("missing 'terms'");
      std::vector<TrigTerm> terms;
      for (const auto& t : entry.at("terms")) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number() || !t[1].is_number() ||
            !t[2].is_number()) {
          bad_format("term must be [re, im, freq]");
        }
        terms.push_back({{t[0].get<double>(), t[1].get<double>()}, t[2].get<double>()});
      }
      pieces.emplace_back(TrigPiece(iv, std::move(terms)));
    } else if (type == "numeric") {
      if (!entry.contains("builder") || !entry.at("builder").is_string()) {
        bad_format("numeric piece without builder name");
      }
      NumericBuilder builder{entry.at("builder").get<std::string>(),
                             entry.value("params", json::object())};
      NumericPiece base = make_numeric(iv, builder);
      const json& scale = entry.value("scale", json::array({1.0, 0.0}));
      if (!scale.is_array() || scale.size() != 2) bad_format("scale must be [re, im]");
      pieces.emplace_back(base.with_transform(entry.value("shift", 0.0),
                                              entry.value("modulation", 0.0),
                                              {scale[0].get<double>(), scale[1].get<double>()},
                                              entry.value("conjugate", false)));
    } else {
      bad_format("unknown piece type '" + type + "'");
    }
  }
  return PiecewiseAtom(std::move(pieces));
}

std::string serialize_atom(const PiecewiseAtom& atom) { return to_json(atom).dump(1) + "\n"; }

PiecewiseAtom parse_atom(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    bad_format(std::string("atom is not valid JSON: ") + e.what());
  }
  try {
    return atom_from_json(doc);
  } catch (const json::exception& e) {
    bad_format(std::string("malformed atom: ") + e.what());
  }
}

void save_atom(const std::filesystem::path& path, const PiecewiseAtom& atom) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::validation, "cannot write " + path.string());
  out << serialize_atom(atom);
}

PiecewiseAtom load_atom(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::validation, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_atom(buf.str());
}

}  // namespace gaborlab
