#pragma once

#include <string>

#include "json.hpp"

#include "conserv/consys.hpp"
#include "conserv/dyntree.hpp"
#include "conserv/conspoly.hpp"
#include "conserv/galois.hpp"
#include "conserv/treecomb.hpp"

namespace conserv {

using Json = nlohmann::ordered_json;

// Field degree up to which solution records carry exact number-field coefficients.
inline constexpr int kExactFieldJsonLimit = 16;

// Rationals as canonical "p/q" strings ("p" for integers), lowest degree first.
Json rational_array(const UniPoly& f);
UniPoly parse_rational_array(const Json& j);
// "1/2,0,-3" style lists, lowest degree first.
UniPoly parse_rational_list(const std::string& text);

// [re, im] decimal strings with the given number of significant digits.
Json complex_json(const BigComplex& z, int digits);

Json tree_json(const PlaneTree& t);
// Tree record plus fixed points and one entry per traced ray (edge).
Json reconstruction_json(const Reconstruction& r, int digits = 17);
Json polynomial_json(const ConservativePolynomial& c, int digits = 30);
// Polynomial from a record with "coefficients" (or a bare array of "p/q" strings).
ConservativePolynomial polynomial_from_json(const Json& j, unsigned precision);
Json solution_json(const SolutionSet& s, int digits = 30);
Json orbit_json(const GaloisOrbit& o, const FieldOfModuli* field);

// Indented "key: value" rendering of a JSON document.
std::string json_to_text(const Json& j);

}  // namespace conserv
