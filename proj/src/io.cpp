#include "orlicz/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace orlicz::io {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(std::string("missing field \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw SchemaError(std::string("field \"") + key + "\" has the wrong type");
  }
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw SchemaError(std::string(what) + " must be a number");
  return j.get<double>();
}

Point vector_of(const Json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw SchemaError("expected a vector of " + std::to_string(dim) + " numbers");
  }
  Point x{0.0, 0.0, 0.0};
  for (int i = 0; i < dim; ++i) x[i] = number(j[i], "vector component");
  return x;
}

// Shortest round-trip form, independent of the locale.
std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("malformed JSON in " + path + ": " + e.what());
  }
}

OrliczFn parse_function(const Json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "power") return OrliczFn::power(field<double>(j, "p"));
  if (kind == "power_log") return OrliczFn::power_log(field<double>(j, "p"));
  if (kind == "extension") {
    const OrliczFn base = parse_function(field<Json>(j, "base"));
    if (j.contains("q")) return OrliczFn::extension(base, field<double>(j, "q"));
    return extend(base, field<double>(j, "p"));
  }
  if (kind == "table") {
    return OrliczFn::table(field<std::vector<double>>(j, "knots"),
                           field<std::vector<double>>(j, "values"));
  }
  throw SchemaError("unknown function kind \"" + kind + "\"");
}

Json to_json(const OrliczFn& f) {
  switch (f.kind()) {
    case OrliczFn::Kind::kPower:
      return {{"kind", "power"}, {"p", f.exponent()}};
    case OrliczFn::Kind::kPowerLog:
      return {{"kind", "power_log"}, {"p", f.exponent()}};
    case OrliczFn::Kind::kExtension:
      return {{"kind", "extension"}, {"base", to_json(*f.base())}, {"q", f.exponent()}};
    case OrliczFn::Kind::kTable:
      return {{"kind", "table"}, {"knots", f.knots()}, {"values", f.knot_values()}};
  }
  return {};
}

VecSeq parse_sequence(const Json& j) {
  const int dim = field<int>(j, "dim");
  if (dim < 1 || dim > kMaxDim) throw SchemaError("dim must be 1, 2 or 3");
  const auto entries = field<Json>(j, "entries");
  if (!entries.is_array()) throw SchemaError("entries must be an array");
  std::vector<VecSeq::Entry> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer()) {
      throw SchemaError("each entry must be [index, value]");
    }
    const auto index = e[0].get<std::int64_t>();
    if (dim == 1 && e[1].is_number()) {
      out.push_back({index, Point{e[1].get<double>(), 0.0, 0.0}});
    } else {
      out.push_back({index, vector_of(e[1], dim)});
    }
  }
  return VecSeq(dim, std::move(out));
}

Json to_json(const VecSeq& s) {
  Json entries = Json::array();
  for (const auto& e : s.entries()) entries.push_back({e.index, to_json(e.value, s.dim())});
  return {{"dim", s.dim()}, {"entries", entries}};
}

PairSeq parse_pair(const Json& j) {
  const VecSeq s = parse_sequence(j);
  if (s.dim() != 2) throw SchemaError("a pair file is a dim-2 sequence of (x_k, y_k)");
  return PairSeq::from_interleaved(s);
}

BlockSeq parse_blocks(const Json& j) {
  BlockSeq b;
  b.n = field<int>(j, "n");
  if (b.n != 1 && b.n != 2) throw SchemaError("n must be 1 or 2");
  const auto blocks = field<Json>(j, "blocks");
  if (!blocks.is_array()) throw SchemaError("blocks must be an array");
  for (const auto& v : blocks) b.blocks.push_back(vector_of(v, b.n));
  b.validate();
  return b;
}

Json to_json(const BlockSeq& b) {
  Json blocks = Json::array();
  for (const auto& v : b.blocks) blocks.push_back(to_json(v, b.n));
  return {{"n", b.n}, {"blocks", blocks}};
}

Json to_json(const SupEstimate& e) {
  Json j = {{"value", e.value()},
            {"grid_sup", e.grid_sup},
            {"bounded", e.bounded},
            {"round_sups", e.round_sups}};
  j["closed_form"] = e.closed_form ? Json(*e.closed_form) : Json(nullptr);
  return j;
}

Json to_json(const ScalarConstants& c, const SamplingPlan& plan) {
  Json cb = Json::object();
  for (const auto& [b, v] : c.C_B) cb[format_number(b)] = v;
  return {
      {"p", c.p},
      {"C", c.C.value()},
      {"delta2", c.delta2.value()},
      {"M", c.M.value()},
      {"M_prime", c.M_prime},
      {"S", c.S},
      {"indices", {c.indices.alpha_lower, c.indices.beta_upper}},
      {"C_B", cb},
      {"detail",
       {{"C", to_json(c.C)},
        {"delta2", to_json(c.delta2)},
        {"delta2_at_zero", to_json(c.delta2_at_zero)},
        {"M", to_json(c.M)}}},
      {"grid",
       {{"points_per_axis", plan.points_per_axis},
        {"range", {plan.global_lo, plan.global_hi}},
        {"refinement_rounds", plan.refinement_rounds},
        {"growth_threshold", plan.growth_threshold}}},
  };
}

Json to_json(const Point& x, int dim) {
  Json j = Json::array();
  for (int i = 0; i < dim; ++i) j.push_back(x[i]);
  return j;
}

void write_envelope_csv(std::ostream& out, const EnvelopeGrid& g) {
  const int n = g.box.dim;
  for (int i = 0; i < n; ++i) out << 'x' << (i + 1) << ',';
  out << "value,envelope\n";
  const GridFunction f = g.value_function();
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    const Point x = f.node(k);
    for (int i = 0; i < n; ++i) out << format_number(x[i]) << ',';
    out << format_number(g.values[k]) << ',' << format_number(g.envelope[k]) << '\n';
  }
}

}  // namespace orlicz::io
