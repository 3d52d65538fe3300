#include "conserv/json_io.hpp"

#include <sstream>

#include "conserv/errors.hpp"

namespace conserv {

Json rational_array(const UniPoly& f) {
  Json out = Json::array();
  for (const auto& c : f.coeffs()) out.push_back(to_string(c));
  return out;
}

UniPoly parse_rational_array(const Json& j) {
  if (!j.is_array()) throw ValidationError("expected an array of rationals");
  std::vector<Rational> c;
  for (const auto& x : j) {
    if (x.is_string()) {
      c.push_back(parse_rational(x.get<std::string>()));
    } else if (x.is_number_integer()) {
      c.emplace_back(x.get<long>());
    } else {
      throw ValidationError("coefficients must be \"p/q\" strings or integers");
    }
  }
  return UniPoly(std::move(c));
}

UniPoly parse_rational_list(const std::string& text) {
  std::vector<Rational> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) c.push_back(parse_rational(item));
  if (c.empty()) throw ValidationError("empty coefficient list");
  return UniPoly(std::move(c));
}

Json complex_json(const BigComplex& z, int digits) { return Json::array({z.re.to_string(digits), z.im.to_string(digits)}); }

Json tree_json(const PlaneTree& t) {
  Json j;
  j["code"] = canonical_code(t);
  j["type"] = tree_type(t);
  j["aut"] = aut_order(t);
  Json vs = Json::array();
  for (int v = 0; v < t.vertex_count(); ++v) vs.push_back({{"id", v}, {"color", t.is_white(v) ? "w" : "b"}});
  j["vertices"] = vs;
  j["adjacency"] = t.adjacency;
  return j;
}

Json reconstruction_json(const Reconstruction& r, int digits) {
  Json j = tree_json(r.tree);
  Json fixed = Json::array();
  for (const auto& f : r.fixed.points) {
    Json fj;
    fj["location"] = complex_json(f.location, digits);
    fj["multiplier"] = complex_json(f.multiplier, digits);
    fj["kind"] = f.kind == FixedClass::Superattracting ? "superattracting" : f.kind == FixedClass::Repelling ? "repelling" : "other";
    fixed.push_back(fj);
  }
  j["fixed_points"] = fixed;
  Json rays = Json::array();
  for (const auto& ray : r.rays) {
    Json rj;
    rj["white"] = ray.white;
    rj["black"] = ray.landing;
    rj["index"] = ray.index;
    rj["start_angle"] = ray.start_angle;
    rj["end_angle"] = ray.end_angle;
    rj["samples"] = ray.polyline.size();
    rays.push_back(rj);
  }
  j["edges"] = rays;
  return j;
}

Json polynomial_json(const ConservativePolynomial& c, int digits) {
  Json j;
  j["degree"] = c.degree;
  j["source"] = c.source;
  if (c.rational) {
    j["coefficients"] = rational_array(*c.rational);
  } else if (c.exact && c.exact->field().degree() <= kExactFieldJsonLimit) {
    Json f;
    f["modulus"] = rational_array(c.exact->field().modulus());
    Json coeffs = Json::array();
    for (const auto& v : c.exact->values()) coeffs.push_back(rational_array(v));
    f["coefficients"] = coeffs;
    f["embedding"] = complex_json(c.theta, digits);
    j["field"] = f;
  } else if (c.exact) {
    Json f;
    f["modulus"] = rational_array(c.exact->field().modulus());
    f["embedding"] = complex_json(c.theta, digits);
    j["field"] = f;
  }
  PrecisionScope scope(c.precision + 32);
  Json num = Json::array();
  for (const auto& a : c.coefficients()) num.push_back(complex_json(a, digits));
  j["numeric"] = num;
  Json cps = Json::array();
  for (const auto& cp : c.critical_points) cps.push_back({{"location", complex_json(cp.location, digits)}, {"multiplicity", cp.multiplicity}});
  j["critical_points"] = cps;
  return j;
}

ConservativePolynomial polynomial_from_json(const Json& j, unsigned precision) {
  const Json* coeffs = &j;
  if (j.is_object()) {
    if (!j.contains("coefficients")) throw ValidationError("polynomial record needs \"coefficients\"");
    coeffs = &j.at("coefficients");
  }
  const UniPoly f = parse_rational_array(*coeffs);
  return ConservativePolynomial::from_rational(f, precision, j.is_object() && j.contains("source") ? j["source"].get<std::string>() : "input");
}

Json solution_json(const SolutionSet& s, int digits) {
  Json j;
  j["type"] = s.system.alpha;
  j["degree"] = s.system.degree;
  j["unknowns"] = symmetric_names(s.symmetric_system);
  j["eliminant"] = rational_array(s.eliminant);
  j["weights"] = rational_array(UniPoly(s.weights));
  j["bezout_bound"] = s.bezout_bound;
  j["predicted_count"] = predicted_solution_count(s.system.alpha);
  j["nondegenerate_count"] = s.nondegenerate_count();
  Json comps = Json::array();
  for (const auto& c : s.components) {
    Json cj;
    cj["factor"] = rational_array(c.factor);
    cj["degenerate"] = c.degenerate;
    cj["merged_type"] = c.merged_type;
    comps.push_back(cj);
  }
  j["components"] = comps;
  PrecisionScope scope(s.precision + 32);
  auto point_json = [&](const SolutionPoint& pt) {
    Json pj;
    pj["component"] = pt.component;
    pj["degenerate"] = pt.degenerate;
    pj["merged_type"] = pt.merged_type;
    Json xs = Json::array();
    for (const auto& x : pt.coords) xs.push_back(complex_json(x, digits));
    pj["coords"] = xs;
    if (pt.merged_tree) pj["merged_tree"] = *pt.merged_tree;
    return pj;
  };
  Json pts = Json::array();
  for (const auto& pt : s.points) pts.push_back(point_json(pt));
  j["points"] = pts;
  if (!s.rejected.empty()) {
    Json rej = Json::array();
    for (const auto& pt : s.rejected) rej.push_back(point_json(pt));
    j["rejected"] = rej;
  }
  return j;
}

Json orbit_json(const GaloisOrbit& o, const FieldOfModuli* field) {
  Json j;
  j["type"] = o.type;
  j["factor"] = rational_array(o.factor);
  j["trees"] = o.trees;
  j["orbit_length"] = o.orbit_length;
  if (field) {
    Json f;
    f["degree"] = field->degree;
    f["minpoly"] = rational_array(field->minpoly);
    f["invariant"] = field->invariant;
    f["description"] = field->description;
    j["field"] = f;
  }
  if (o.merged_factors.size() > 1) {
    Json m = Json::array();
    for (const auto& f : o.merged_factors) m.push_back(rational_array(f));
    j["merged_factors"] = m;
  }
  return j;
}

namespace {

void render(const Json& j, int indent, std::ostringstream& out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  auto flat = [&](const Json& v) {
    if (!v.is_array()) return false;
    for (const auto& x : v)
      if (x.is_object() || (x.is_array() && !x.empty() && (x.front().is_object() || x.front().is_array()))) return false;
    return true;
  };
  auto inline_array = [&](const Json& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += v[i].is_array() ? v[i].dump() : scalar(v[i]);
    }
    return s + "]";
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object() || (v.is_array() && !flat(v))) {
        out << pad << k << ":\n";
        render(v, indent + 2, out);
      } else {
        out << pad << k << ": " << (v.is_array() ? inline_array(v) : scalar(v)) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const auto& v = j[i];
      if (v.is_object() || (v.is_array() && !flat(v))) {
        out << pad << "- " << i << "\n";
        render(v, indent + 2, out);
      } else {
        out << pad << "- " << (v.is_array() ? inline_array(v) : scalar(v)) << "\n";
      }
    }
  } else {
    out << pad << scalar(j) << "\n";
  }
}

}  // namespace

std::string json_to_text(const Json& j) {
  std::ostringstream out;
  render(j, 0, out);
  return out.str();
}

}  // namespace conserv
