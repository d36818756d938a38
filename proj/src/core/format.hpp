#pragma once

#include <string>

#include "apa.hpp"
#include "decomposition.hpp"

namespace mmkit {

std::string rat_to_string(const Rat& q);
Rat rat_from_string(const std::string& tok);

// Lambda polynomials are written as colon-separated ascending coefficients:
// "1" is constant 1, "0:1" is lambda, "0:0:-1" is -lambda^2.
std::string lpoly_to_string(const LPoly& p);
LPoly lpoly_from_string(const std::string& tok);

std::string serialize(const AnyAlg& alg);
AnyAlg parse_algorithm(const std::string& text);

void save_algorithm(const AnyAlg& alg, const std::string& path);
AnyAlg load_algorithm(const std::string& path);

const std::string& algorithm_name(const AnyAlg& alg);
const Target& algorithm_target(const AnyAlg& alg);
std::size_t algorithm_rank(const AnyAlg& alg);

}  // namespace mmkit
