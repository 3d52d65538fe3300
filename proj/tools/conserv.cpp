// conserv: enumeration, solving, orbit reports, families, reconstruction and rendering.
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "conserv/consys.hpp"
#include "conserv/dyntree.hpp"
#include "conserv/errors.hpp"
#include "conserv/families.hpp"
#include "conserv/galois.hpp"
#include "conserv/json_io.hpp"
#include "conserv/treecomb.hpp"

using namespace conserv;

namespace {

struct RunConfig {
  unsigned precision = kDefaultPrecision;
  int cap = kDefaultEdgeCap;
  std::string output;
  std::string format = "json";
};

// Failed verification; exit code 4.
class VerifyFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check_config(const RunConfig& cfg) {
  if (cfg.precision < 64) throw ValidationError("precision must be at least 64 bits");
  if (cfg.cap < 1 || cfg.cap > kHardEdgeLimit)
    throw ValidationError("edge cap must lie in 1.." + std::to_string(kHardEdgeLimit));
}

void emit(const Json& j, const RunConfig& cfg) {
  const std::string body = cfg.format == "text" ? json_to_text(j) : j.dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + cfg.output);
  out << body;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

struct PolySource {
  std::string poly;    // JSON array or record
  std::string coeffs;  // "p/q,..." list
  std::string input;   // file with JSON
  std::string family;  // star:D, fdz:D, lambda:R,S
};

void add_poly_options(CLI::App* cmd, PolySource& src) {
  cmd->add_option("--poly", src.poly, "coefficients as a JSON array of \"p/q\" strings, lowest degree first");
  cmd->add_option("--coeffs", src.coeffs, "comma separated rationals, lowest degree first");
  cmd->add_option("--input", src.input, "file holding a polynomial record or coefficient array");
  cmd->add_option("--family", src.family, "star:D, fdz:D or lambda:R,S");
}

ConservativePolynomial family_polynomial(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("family must look like star:6, fdz:6 or lambda:2,3");
  const std::string name = text.substr(0, colon), args = text.substr(colon + 1);
  auto to_int = [](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw ValidationError("bad integer " + s);
      return v;
    } catch (const std::logic_error&) {
      throw ValidationError("bad integer " + s);
    }
  };
  if (name == "star") return star_polynomial(to_int(args));
  if (name == "fdz") return reversed_star(to_int(args));
  if (name == "lambda") {
    const auto comma = args.find(',');
    if (comma == std::string::npos) throw ValidationError("lambda needs r,s");
    return lambda_rs(to_int(args.substr(0, comma)), to_int(args.substr(comma + 1)));
  }
  throw ValidationError("unknown family " + name);
}

ConservativePolynomial load_polynomial(const PolySource& src, unsigned precision) {
  const int given = !src.poly.empty() + !src.coeffs.empty() + !src.input.empty() + !src.family.empty();
  if (given != 1) throw ValidationError("give exactly one of --poly, --coeffs, --input, --family");
  if (!src.family.empty()) return family_polynomial(src.family);
  if (!src.coeffs.empty()) return ConservativePolynomial::from_rational(parse_rational_list(src.coeffs), precision);
  const Json j = parse_json(src.poly.empty() ? slurp(src.input) : src.poly);
  return polynomial_from_json(j, precision);
}

std::vector<double> parse_doubles(const std::string& text, std::size_t count) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw ValidationError("bad number " + item);
    }
  }
  if (out.size() != count) throw ValidationError("expected " + std::to_string(count) + " comma separated numbers");
  return out;
}

Json cmd_enum(int m, const RunConfig& cfg) {
  const auto trees = enumerate_trees(m, cfg.cap);
  Json j;
  j["edges"] = m;
  j["count"] = trees.size();
  Json list = Json::array();
  for (const auto& t : trees) list.push_back(tree_json(t));
  j["trees"] = list;
  return j;
}

Json cmd_solve(const TreeType& alpha, const RunConfig& cfg) {
  return solution_json(filter_degenerate(solve_type(alpha, cfg.precision)));
}

Json cmd_orbits(const TreeType& alpha, const RunConfig& cfg) {
  const auto s = filter_degenerate(solve_type(alpha, cfg.precision));
  const auto orbits = orbit_decomposition(s);
  Json j;
  j["type"] = alpha;
  j["orbit_count"] = orbits.size();
  Json list = Json::array();
  for (const auto& o : orbits) {
    const auto field = field_of_moduli(o, cfg.precision);
    list.push_back(orbit_json(o, &field));
  }
  j["orbits"] = list;
  Json degenerate = Json::array();
  for (const auto& pt : s.rejected) {
    Json d;
    d["component"] = pt.component;
    d["merged_type"] = pt.merged_type;
    if (pt.merged_tree) d["merged_tree"] = *pt.merged_tree;
    degenerate.push_back(d);
  }
  j["degenerate"] = degenerate;
  return j;
}

Json cmd_verify(const std::string& kind, int max_edges, const std::string& type_text, const RunConfig& cfg) {
  Json j;
  j["kind"] = kind;
  Json checks = Json::array();
  bool pass = true;
  auto record = [&](Json c, bool ok) {
    c["pass"] = ok;
    pass = pass && ok;
    checks.push_back(std::move(c));
  };
  if (kind == "count") {
    for (int m = 1; m <= max_edges; ++m) {
      const auto r = normalized_count(m, cfg.cap);
      const Integer expected = binomial(2ul * static_cast<unsigned long>(m), static_cast<unsigned long>(m));
      record({{"edges", m}, {"count", r.total.get_str()}, {"expected", expected.get_str()}}, r.total == expected);
    }
  } else if (kind == "unique-types") {
    for (int m = 1; m <= max_edges; ++m) {
      std::set<TreeCode> expected{canonical_code(white_star(m)), canonical_code(black_star(m))};
      for (int r = 1; r < m; ++r) expected.insert(canonical_code(lambda_tree(r, m - r)));
      std::set<TreeCode> found;
      for (const auto& t : unique_type_trees(m, cfg.cap)) found.insert(canonical_code(t));
      record({{"edges", m}, {"unique", found.size()}, {"expected", expected.size()}}, found == expected);
    }
  } else if (kind == "invariants") {
    if (type_text.empty()) throw ValidationError("verify invariants needs --type");
    const TreeType alpha = parse_type(type_text);
    const auto orbits = orbit_decomposition(alpha, cfg.precision);
    const auto report = check_invariants(orbits);
    record({{"type", alpha}, {"orbits", report.orbits_checked}, {"violations", report.violations}}, report.ok());
  } else {
    throw ValidationError("unknown verify kind " + kind);
  }
  j["checks"] = checks;
  j["pass"] = pass;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservative polynomials and plane trees"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  bool as_json = false;
  app.add_option("--precision", cfg.precision, "working precision in bits")->capture_default_str();
  app.add_option("--cap", cfg.cap, "edge cap for enumeration")->capture_default_str();
  app.add_option("--output,-o", cfg.output, "write the report to a file");
  app.add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_flag("--json", as_json, "same as --format json");

  int m = 0;
  auto* enum_cmd = app.add_subcommand("enum", "list plane trees with m edges");
  enum_cmd->add_option("-m", m, "edge count")->required();

  std::string type_text;
  auto* solve_cmd = app.add_subcommand("solve", "solve the conservative system of a type");
  solve_cmd->add_option("--type", type_text, "white valencies, e.g. 3,1,1")->required();
  auto* orbits_cmd = app.add_subcommand("orbits", "Galois orbits and fields of moduli of a type");
  orbits_cmd->add_option("--type", type_text, "white valencies, e.g. 3,1,1")->required();

  PolySource rec_src;
  auto* rec_cmd = app.add_subcommand("reconstruct", "tree of a conservative polynomial");
  add_poly_options(rec_cmd, rec_src);

  PolySource render_src;
  std::string window = "-2,2,-2,2", out_path;
  int res = 400, max_iter = 200;
  auto* render_cmd = app.add_subcommand("render", "basin picture as binary PPM");
  add_poly_options(render_cmd, render_src);
  render_cmd->add_option("--window", window, "x0,x1,y0,y1")->capture_default_str();
  render_cmd->add_option("--res", res, "pixels per side")->capture_default_str();
  render_cmd->add_option("--max-iter", max_iter, "iteration budget")->capture_default_str();
  render_cmd->add_option("--out", out_path, "PPM file")->required();

  std::string family;
  int fd = 0, fr = 0, fs = 0;
  auto* family_cmd = app.add_subcommand("family", "closed form families");
  family_cmd->add_option("name", family, "star, fdz or lambda")->required()->check(CLI::IsMember({"star", "fdz", "lambda"}));
  family_cmd->add_option("--d", fd, "degree");
  family_cmd->add_option("--r", fr, "first valency");
  family_cmd->add_option("--s", fs, "second valency");

  std::string verify_kind, verify_type;
  int max_edges = 9;
  auto* verify_cmd = app.add_subcommand("verify", "check counting, classification and invariance identities");
  verify_cmd->add_option("kind", verify_kind, "count, unique-types or invariants")
      ->required()
      ->check(CLI::IsMember({"count", "unique-types", "invariants"}));
  verify_cmd->add_option("--max-edges", max_edges, "largest edge count")->capture_default_str();
  verify_cmd->add_option("--type", verify_type, "type for invariants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (as_json) cfg.format = "json";

  try {
    check_config(cfg);
    if (enum_cmd->parsed()) {
      emit(cmd_enum(m, cfg), cfg);
    } else if (solve_cmd->parsed()) {
      emit(cmd_solve(parse_type(type_text), cfg), cfg);
    } else if (orbits_cmd->parsed()) {
      emit(cmd_orbits(parse_type(type_text), cfg), cfg);
    } else if (rec_cmd->parsed()) {
      const auto c = load_polynomial(rec_src, cfg.precision);
      emit(reconstruction_json(reconstruct(c, cfg.precision)), cfg);
    } else if (render_cmd->parsed()) {
      const auto c = load_polynomial(render_src, cfg.precision);
      const auto w = parse_doubles(window, 4);
      const Viewport view{w[0], w[1], w[2], w[3]};
      if (!(view.x0 < view.x1 && view.y0 < view.y1)) throw ValidationError("empty viewport");
      if (res < 1 || res > 8192) throw ValidationError("resolution must lie in 1..8192");
      if (max_iter < 1) throw ValidationError("max-iter must be positive");
      const auto img = render_basins(c, view, res, max_iter);
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw ValidationError("cannot open " + out_path);
      out << img.ppm();
      Json j;
      j["out"] = out_path;
      j["width"] = img.width;
      j["height"] = img.height;
      Json attractors = Json::array();
      for (const auto& a : img.attractors) attractors.push_back({a.real(), a.imag()});
      j["attractors"] = attractors;
      emit(j, cfg);
    } else if (family_cmd->parsed()) {
      ConservativePolynomial c;
      if (family == "lambda") {
        if (fr < 1 || fs < 1) throw ValidationError("lambda needs --r and --s at least 1");
        c = lambda_rs(fr, fs);
      } else {
        if (fd < 2) throw ValidationError("family needs --d at least 2");
        c = family == "star" ? star_polynomial(fd) : reversed_star(fd);
      }
      emit(polynomial_json(c), cfg);
    } else if (verify_cmd->parsed()) {
      const Json report = cmd_verify(verify_kind, max_edges, verify_type, cfg);
      emit(report, cfg);
      if (!report["pass"].get<bool>()) throw VerifyFailure("verification failed");
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const VerifyFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
